#include "polyfold/io.hpp"

#include <fstream>
#include <sstream>

#include "polyfold/error.hpp"

namespace polyfold {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorKind::parse_error, std::string("missing field '") + key + "'");
  }
  return j.at(key);
}


}  // namespace

Json scalar_to_json(const Rational& x) { return format_scalar(x); }
Json scalar_to_json(double x) { return x; }

template <class S>
S scalar_from_json(const Json& j, const std::string& where) {
  try {
    if (j.is_string()) return parse_scalar<S>(j.get<std::string>());
    if (j.is_number_integer()) return S(j.get<long>());
    if (j.is_number()) {
      if constexpr (is_exact_v<S>) {
        // Exact binary value of the double.
        return Rational(j.get<double>());
      } else {
        return j.get<double>();
      }
    }
  } catch (const Error& e) {
    throw Error(ErrorKind::parse_error, where + ": " + e.what());
  }
  throw Error(ErrorKind::parse_error, where + ": expected a number or a numeric string");
}

template <class S>
Json polygon_to_json(const Polygon<S>& p) {
  Json out;
  out["mode"] = std::string(mode_name(Polygon<S>::mode));
  Json verts = Json::array();
  for (const auto& v : p.vertices()) verts.push_back(Json::array({scalar_to_json(v.x), scalar_to_json(v.y)}));
  out["vertices"] = std::move(verts);
  return out;
}

namespace {

template <class S>
Polygon<S> polygon_vertices_from_json(const Json& verts) {
  if (!verts.is_array()) throw Error(ErrorKind::parse_error, "'vertices' must be an array");
  std::vector<Point2<S>> pts;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const Json& v = verts[i];
    std::string where = "vertices[" + std::to_string(i) + "]";
    if (!v.is_array() || v.size() != 2) throw Error(ErrorKind::parse_error, where + ": expected [x, y]");
    pts.push_back({scalar_from_json<S>(v[0], where), scalar_from_json<S>(v[1], where)});
  }
  return Polygon<S>(std::move(pts));
}

}  // namespace

AnyPolygon polygon_from_json(const Json& j) {
  ScalarMode mode = j.contains("mode") ? parse_mode(require(j, "mode").get<std::string>()) : ScalarMode::rational;
  const Json& verts = require(j, "vertices");
  if (mode == ScalarMode::rational) return polygon_vertices_from_json<Rational>(verts);
  return polygon_vertices_from_json<double>(verts);
}

template <class S>
Json matrix_rows_to_json(const Matrix<S>& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (const auto& x : m.row(i)) row.push_back(scalar_to_json(x));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <class S>
Json hsystem_to_json(const LinearSystem<S>& h) {
  Json out;
  out["A"] = matrix_rows_to_json(h.A);
  Json b = Json::array();
  for (const auto& x : h.b) b.push_back(scalar_to_json(x));
  out["b"] = std::move(b);
  return out;
}

template <class S>
LinearSystem<S> hsystem_from_json(const Json& j) {
  const Json& a = require(j, "A");
  const Json& b = require(j, "b");
  if (!a.is_array() || !b.is_array() || a.size() != b.size() || a.empty()) {
    throw Error(ErrorKind::parse_error, "H-system: 'A' and 'b' must be non-empty arrays of equal length");
  }
  const std::size_t d = a[0].size();
  LinearSystem<S> h{Matrix<S>(a.size(), d), std::vector<S>(b.size())};
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_array() || a[i].size() != d) {
      throw Error(ErrorKind::parse_error, "H-system: row " + std::to_string(i) + " has the wrong length");
    }
    for (std::size_t c = 0; c < d; ++c) {
      h.A(i, c) = scalar_from_json<S>(a[i][c], "A[" + std::to_string(i) + "]");
    }
    h.b[i] = scalar_from_json<S>(b[i], "b[" + std::to_string(i) + "]");
  }
  check_linear_system(h);
  return h;
}

template <class S>
Json matrix_to_json(const Matrix<S>& m) {
  Json out;
  out["rows"] = m.rows();
  out["cols"] = m.cols();
  Json data = Json::array();
  for (const auto& x : m.data()) data.push_back(scalar_to_json(x));
  out["data"] = std::move(data);
  return out;
}

template <class S>
Matrix<S> matrix_from_json(const Json& j) {
  auto rows = require(j, "rows").get<std::size_t>();
  auto cols = require(j, "cols").get<std::size_t>();
  const Json& data = require(j, "data");
  if (!data.is_array() || data.size() != rows * cols) {
    throw Error(ErrorKind::parse_error, "matrix: 'data' must hold rows * cols entries");
  }
  Matrix<S> m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t c = 0; c < cols; ++c)
      m(i, c) = scalar_from_json<S>(data[i * cols + c], "data[" + std::to_string(i * cols + c) + "]");
  return m;
}

template <class S>
std::string matrix_to_csv(const Matrix<S>& m) {
  std::string out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out += ',';
      out += format_scalar(m(i, c));
    }
    out += '\n';
  }
  return out;
}

template <class S>
Matrix<S> matrix_from_csv(const std::string& text, const std::string& source) {
  std::vector<std::vector<S>> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<S> row;
    std::size_t start = 0;
    while (true) {
      auto comma = line.find(',', start);
      std::string field = trim(std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos
                                                                                                  : comma - start));
      try {
        row.push_back(parse_scalar<S>(field));
      } catch (const Error& e) {
        throw Error(ErrorKind::parse_error, source + ":" + std::to_string(line_no) + ": " + e.what());
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorKind::parse_error, source + ":" + std::to_string(line_no) + ": expected " +
                                              std::to_string(rows.front().size()) + " fields, got " +
                                              std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorKind::parse_error, source + ": empty matrix");
  Matrix<S> m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t c = 0; c < rows[i].size(); ++c) m(i, c) = std::move(rows[i][c]);
  return m;
}

ScalarMode detect_csv_mode(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::size_t start = 0;
    while (true) {
      auto comma = line.find(',', start);
      std::string field = trim(std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos
                                                                                                  : comma - start));
      if (!field.empty() && !looks_rational(field)) return ScalarMode::float64;
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  return ScalarMode::rational;
}

Json report_to_json(const VerificationReport& r) {
  Json out;
  out["mode"] = std::string(mode_name(r.mode));
  out["max_residual"] = r.max_residual;
  if (r.mode == ScalarMode::rational) out["max_residual_exact"] = r.max_residual_exact;
  out["slack_norm"] = r.slack_norm;
  out["threshold"] = r.threshold;
  out["nonnegative_t"] = r.nonnegative_t;
  out["nonnegative_u"] = r.nonnegative_u;
  out["entries_checked"] = r.entries_checked;
  out["sampled"] = r.sampled;
  out["pass"] = r.pass;
  return out;
}

Json report_to_json(const LiftReport& r) {
  Json out;
  out["lifted"] = r.lifted;
  out["max_residual"] = r.max_residual;
  out["pass"] = r.pass;
  return out;
}

Json report_to_json(const ProjectionReport& r) {
  Json out;
  out["mode"] = std::string(mode_name(r.mode));
  out["optima"] = r.optima;
  out["max_excess"] = r.max_excess;
  out["max_deficit"] = r.max_deficit;
  out["threshold"] = r.threshold;
  out["contained"] = r.contained;
  out["tight"] = r.tight;
  out["pass"] = r.pass;
  return out;
}

Json report_to_json(const CoefficientBoundReport& r) {
  Json out;
  out["max_coefficient"] = format_scalar(r.max_coefficient);
  out["max_slack"] = format_scalar(r.max_slack);
  out["coefficients_ok"] = r.coefficients_ok;
  out["slack_ok"] = r.slack_ok;
  out["pass"] = r.pass;
  return out;
}

Json report_to_json(const RecoveryReport& r) {
  Json out;
  out["points_checked"] = r.points_checked;
  out["members"] = r.members;
  Json dis = Json::array();
  for (const auto& p : r.disagreements) dis.push_back(Json::array({p[0], p[1]}));
  out["disagreements"] = std::move(dis);
  out["pass"] = r.pass;
  return out;
}

Json report_to_json(const BoundsReport& r) {
  Json out;
  out["face_count_bound"] = r.face_count_bound;
  out["linear_rank_bound"] = r.linear_rank_bound;
  out["construction_rank"] = r.construction_rank ? Json(*r.construction_rank) : Json(nullptr);
  out["gap"] = r.gap ? Json(*r.gap) : Json(nullptr);
  return out;
}

template <class S>
Json extension_to_json(const ExtendedSystem<S>& q) {
  Json out;
  out["A"] = matrix_rows_to_json(q.A);
  out["T"] = matrix_rows_to_json(q.T);
  Json b = Json::array();
  for (const auto& x : q.b) b.push_back(scalar_to_json(x));
  out["b"] = std::move(b);
  out["d"] = q.d();
  out["r"] = q.r();
  return out;
}

Json rounded_system_to_json(const RoundedSystem& s) {
  Json out;
  out["A_bar"] = matrix_rows_to_json(s.A_bar);
  out["T_bar"] = matrix_rows_to_json(s.T_bar);
  Json b = Json::array();
  for (const auto& x : s.b_bar) b.push_back(scalar_to_json(x));
  out["b_bar"] = std::move(b);
  out["delta"] = s.delta.get_str();
  out["d"] = s.d;
  out["r"] = s.r;
  out["epsilon"] = format_scalar(s.epsilon);
  out["step"] = format_scalar(s.step);
  out["source_rows"] = s.source_rows;
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io_error, "cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io_error, "cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw Error(ErrorKind::io_error, "write to '" + path.string() + "' failed");
}

Json read_json_file(const std::filesystem::path& path) {
  std::string text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // byte offset -> line number
    std::size_t line = 1;
    for (std::size_t i = 0; i < std::min<std::size_t>(e.byte, text.size()); ++i) line += text[i] == '\n';
    throw Error(ErrorKind::parse_error, path.string() + ":" + std::to_string(line) + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) { write_text_file(path, j.dump(2) + "\n"); }

#define POLYFOLD_IO_INSTANTIATE(S)                                                 \
  template S scalar_from_json<S>(const Json&, const std::string&);                 \
  template Json polygon_to_json(const Polygon<S>&);                                \
  template Json hsystem_to_json(const LinearSystem<S>&);                           \
  template LinearSystem<S> hsystem_from_json<S>(const Json&);                      \
  template Json matrix_to_json(const Matrix<S>&);                                  \
  template Matrix<S> matrix_from_json<S>(const Json&);                             \
  template Json matrix_rows_to_json(const Matrix<S>&);                             \
  template std::string matrix_to_csv(const Matrix<S>&);                            \
  template Matrix<S> matrix_from_csv<S>(const std::string&, const std::string&);   \
  template Json extension_to_json(const ExtendedSystem<S>&);

POLYFOLD_IO_INSTANTIATE(double)
POLYFOLD_IO_INSTANTIATE(Rational)

}  // namespace polyfold
