#include "cli.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "polyfold/bounds.hpp"
#include "polyfold/error.hpp"
#include "polyfold/grid_rounding.hpp"
#include "polyfold/permutahedron_folding.hpp"
#include "polyfold/polygon_folding.hpp"

namespace polyfold::cli {

namespace fs = std::filesystem;

namespace {

// Exact rank of a 254 x 40320 rational matrix is impractical.
constexpr int kPermutahedronRankCap = 6;
constexpr int kPermutahedronProjectionCap = 5;
constexpr std::size_t kPolygonRankCap = 512;

class Session {
 public:
  explicit Session(const RunConfig& cfg) : cfg_(cfg) {}

  void check(const std::string& name, bool ok) {
    checks_[name] = ok;
    all_ok_ = all_ok_ && ok;
  }

  void write_json(const std::string& name, const Json& j) {
    write_json_file(cfg_.out / name, j);
    files_.push_back(name);
  }

  // Returns the file name, or null when the matrix exceeds the CSV cap.
  template <class S>
  Json write_csv(const std::string& name, const Matrix<S>& m) {
    if (m.rows() * m.cols() > cfg_.csv_cap) return nullptr;
    write_text_file(cfg_.out / name, matrix_to_csv(m));
    files_.push_back(name);
    return name;
  }

  Json& info() { return info_; }

  RunResult finish() {
    Json out;
    out["status"] = all_ok_ ? "ok" : "fail";
    out["subcommand"] = cfg_.subcommand;
    for (auto& [k, v] : info_.items()) out[k] = v;
    out["checks"] = checks_;
    out["files"] = files_;
    return {all_ok_ ? 0 : 1, std::move(out)};
  }

 private:
  const RunConfig& cfg_;
  Json checks_ = Json::object();
  Json info_ = Json::object();
  std::vector<std::string> files_;
  bool all_ok_ = true;
};

double float_tolerance(const RunConfig& cfg) {
  // Overrides may only loosen the default.
  return std::max(kFactorizationTolerance, cfg.tolerance.value_or(0.0));
}

void require_out(const RunConfig& cfg) {
  if (cfg.out.empty()) throw Error(ErrorKind::invalid_input, cfg.subcommand + ": --out is required");
}

template <class S>
Json bounds_json(const BoundsReport& b, std::uint64_t faces) {
  Json j = report_to_json(b);
  j["face_count"] = faces;
  return j;
}

RunResult run_ngon(const RunConfig& cfg) {
  require_out(cfg);
  if (cfg.mode && *cfg.mode != ScalarMode::float64) {
    throw Error(ErrorKind::unsupported_mode, "regular n-gon vertices are irrational; use --mode float64");
  }
  if (cfg.n < 3) throw Error(ErrorKind::invalid_size, "ngon needs n >= 3, got " + std::to_string(cfg.n));
  const auto n = static_cast<std::size_t>(cfg.n);
  const double tol = float_tolerance(cfg);
  Session s(cfg);

  auto pf = build_polygon_factorization(n, cfg.full_check_cap);
  auto ver = verify_polygon_factorization(pf, tol, cfg.full_check_cap, cfg.sample_entries,
                                          cfg.seed.value_or(0x5eed));
  s.check("factorization", ver.pass);
  s.check("rank", pf.rank() == 2 * pf.q);

  if (n <= cfg.full_check_cap) {
    // ||TU|| costs n^2 r.
    s.check("lemma1", check_lemma1_bound(normalize_pair(prune_zero_components(pf.factorization))));
  }

  s.write_json("polygon.json", polygon_to_json(pf.polygon));
  s.write_json("hrep.json", hsystem_to_json(pf.hrep));
  Json bundle;
  bundle["n"] = n;
  bundle["q"] = pf.q;
  bundle["rank"] = pf.rank();
  bundle["mode"] = "float64";
  bundle["T"] = s.write_csv("T.csv", pf.factorization.T);
  bundle["U"] = s.write_csv("U.csv", pf.factorization.U);
  bundle["S"] = pf.slack ? s.write_csv("S.csv", pf.slack->entries()) : Json(nullptr);
  bundle["residual"] = ver.max_residual;
  s.write_json("bundle.json", bundle);
  s.write_json("verification.json", report_to_json(ver));

  if (pf.slack) {
    auto points = pf.polygon.vertex_points();
    std::span<const Point<double>> pts(points);
    auto ext = build_extension(pf.hrep, pf.factorization, pts, tol);
    s.write_json("extension.json", extension_to_json(ext));
    auto lift = lift_all_vertices(pf.factorization, pf.hrep, pts);
    s.write_json("lift.json", report_to_json(lift));
    s.check("lift", lift.pass);
    if (n <= cfg.projection_cap) {
      auto proj = check_projection_inclusion(ext, pf.hrep);
      s.write_json("projection.json", report_to_json(proj));
      s.check("projection", proj.pass && proj.tight);
    }
    if (n <= kPolygonRankCap) {
      auto faces = polygon_face_count(cfg.n);
      auto b = compute_bounds(*pf.slack, faces, static_cast<long>(pf.rank()));
      s.write_json("bounds.json", bounds_json<double>(b, faces));
      s.check("bounds", *b.gap >= 0);
    }
  }
  s.info()["n"] = n;
  s.info()["q"] = pf.q;
  s.info()["rank"] = pf.rank();
  s.info()["max_residual"] = ver.max_residual;
  return s.finish();
}

RunResult run_permutahedron(const RunConfig& cfg) {
  require_out(cfg);
  if (cfg.mode && *cfg.mode != ScalarMode::rational) {
    throw Error(ErrorKind::unsupported_mode, "the permutahedron pipeline is exact; use --mode rational");
  }
  Session s(cfg);
  auto pf = build_permutahedron_factorization(cfg.n);
  auto ver = verify_factorization(pf.slack, pf.factorization);
  s.check("factorization", ver.pass);
  s.check("rank", pf.rank() == 2 * pf.network.size());
  s.check("sorting_network", cfg.n > 16 || sorts_all_binary_inputs(pf.network));
  s.check("lemma1", check_lemma1_bound(normalize_pair(prune_zero_components(pf.factorization))));

  s.write_json("hrep.json", hsystem_to_json(pf.hrep));
  Json bundle;
  bundle["n"] = cfg.n;
  bundle["q"] = pf.network.size();
  bundle["rank"] = pf.rank();
  bundle["mode"] = "rational";
  bundle["T"] = s.write_csv("T.csv", pf.factorization.T);
  bundle["U"] = s.write_csv("U.csv", pf.factorization.U);
  bundle["S"] = s.write_csv("S.csv", pf.slack.entries());
  bundle["residual"] = ver.max_residual;
  bundle["network_size"] = pf.network.size();
  Json comps = Json::array();
  for (const auto& c : pf.network.comparators) comps.push_back(Json::array({c.j + 1, c.k + 1}));
  bundle["comparators"] = std::move(comps);
  s.write_json("bundle.json", bundle);
  s.write_json("verification.json", report_to_json(ver));

  auto points = permutahedron_vertices(pf.polytope);
  std::span<const Point<Rational>> pts(points);
  auto lift = lift_all_vertices(pf.factorization, pf.hrep, pts);
  s.write_json("lift.json", report_to_json(lift));
  s.check("lift", lift.pass);
  if (cfg.n <= kPermutahedronProjectionCap) {
    auto ext = build_extension(pf.hrep, pf.factorization, pts);
    s.write_json("extension.json", extension_to_json(ext));
    auto proj = check_projection_inclusion(ext, pf.hrep);
    s.write_json("projection.json", report_to_json(proj));
    s.check("projection", proj.pass && proj.tight);
  }
  if (cfg.n <= kPermutahedronRankCap) {
    auto faces = permutahedron_face_count(cfg.n);
    auto b = compute_bounds(pf.slack, faces, static_cast<long>(pf.rank()));
    s.write_json("bounds.json", bounds_json<Rational>(b, faces));
    s.check("bounds", *b.gap >= 0);
  }
  s.info()["n"] = cfg.n;
  s.info()["network_size"] = pf.network.size();
  s.info()["rank"] = pf.rank();
  s.info()["slack_shape"] = Json::array({pf.slack.rows(), pf.slack.cols()});
  return s.finish();
}

RunResult run_gridgon(const RunConfig& cfg) {
  require_out(cfg);
  if (cfg.mode && *cfg.mode != ScalarMode::rational) {
    throw Error(ErrorKind::unsupported_mode, "parabola-grid polygons are exact; use --mode rational");
  }
  if (!cfg.subset.empty() && cfg.seed) {
    throw Error(ErrorKind::invalid_selector, "give either --subset or --seed, not both");
  }
  Session s(cfg);
  std::vector<int> subset = cfg.subset;
  if (subset.empty()) subset = random_parabola_subset(cfg.n, cfg.seed.value_or(0));
  auto poly = make_grid_parabola_polygon(cfg.n, subset);
  std::sort(subset.begin(), subset.end());
  auto h = polygon_to_hrep(poly);
  auto points = poly.vertex_points();
  auto slack = slack_matrix(h, std::span<const Point<Rational>>(points));
  auto f = trivial_factorization(slack);
  auto ver = verify_factorization(slack, f);
  s.check("factorization", ver.pass);

  s.write_json("polygon.json", polygon_to_json(poly));
  s.write_json("hrep.json", hsystem_to_json(h));
  Json bundle;
  bundle["n"] = cfg.n;
  bundle["q"] = nullptr;
  bundle["rank"] = f.rank();
  bundle["mode"] = "rational";
  bundle["T"] = s.write_csv("T.csv", f.T);
  bundle["U"] = s.write_csv("U.csv", f.U);
  bundle["S"] = s.write_csv("S.csv", slack.entries());
  bundle["residual"] = ver.max_residual;
  bundle["subset"] = subset;
  bundle["grid_bound"] = Integer(Integer(4) * cfg.n * cfg.n).get_str();
  s.write_json("bundle.json", bundle);
  s.write_json("verification.json", report_to_json(ver));
  s.info()["n"] = cfg.n;
  s.info()["subset"] = subset;
  return s.finish();
}

template <class S>
NonnegFactorization<S> load_bundle_factor(const Json& bundle, const fs::path& dir) {
  auto load = [&](const char* key) {
    if (!bundle.contains(key) || !bundle[key].is_string()) {
      throw Error(ErrorKind::invalid_input, std::string("bundle has no '") + key + "' matrix file");
    }
    fs::path p = dir / bundle[key].get<std::string>();
    return matrix_from_csv<S>(read_text_file(p), p.string());
  };
  return make_factorization(load("T"), load("U"));
}

RunResult run_round(const RunConfig& cfg) {
  require_out(cfg);
  if (cfg.polygon.empty()) throw Error(ErrorKind::invalid_input, "round: --polygon is required");
  auto any = polygon_from_json(read_json_file(cfg.polygon));
  const auto* poly = std::get_if<Polygon<Rational>>(&any);
  if (poly == nullptr) throw Error(ErrorKind::unsupported_mode, "round: the polygon must be in rational mode");

  Session s(cfg);
  std::optional<Integer> grid_bound;
  NonnegFactorization<Rational> f;
  if (!cfg.factorization.empty()) {
    Json bundle = read_json_file(cfg.factorization);
    if (bundle.value("mode", "rational") != "rational") {
      throw Error(ErrorKind::unsupported_mode, "round: the factorization must be in rational mode");
    }
    f = load_bundle_factor<Rational>(bundle, cfg.factorization.parent_path());
    if (bundle.contains("grid_bound") && bundle["grid_bound"].is_string()) {
      grid_bound = Integer(bundle["grid_bound"].get<std::string>());
    }
  } else {
    auto h = polygon_to_hrep(*poly);
    auto points = poly->vertex_points();
    f = trivial_factorization(slack_matrix(h, std::span<const Point<Rational>>(points)));
  }
  if (cfg.grid_bound) {
    try {
      grid_bound = Integer(*cfg.grid_bound);
    } catch (const std::invalid_argument&) {
      throw Error(ErrorKind::parse_error, "--grid-bound: not an integer: '" + *cfg.grid_bound + "'");
    }
  }

  auto p = run_rounding_pipeline(*poly, f, grid_bound);
  auto rec = verify_recovery(p.system, *poly, cfg.max_points);
  s.check("coefficient_bounds", p.coefficient_bounds.pass);
  s.check("factor_bounds", p.factor_bounds_ok);
  s.check("lemma1", p.lemma1_ok);
  s.check("cramer", p.cramer_ok);
  s.check("rounded_invariants", check_rounded_invariants(p.system));
  s.check("recovery", rec.pass);

  s.write_json("rounded_system.json", rounded_system_to_json(p.system));
  s.write_json("recovery.json", report_to_json(rec));
  Json details;
  details["grid_bound"] = p.grid_bound.get_str();
  details["delta"] = p.delta.get_str();
  details["coefficient_bounds"] = report_to_json(p.coefficient_bounds);
  details["factor_bounds_ok"] = p.factor_bounds_ok;
  details["lemma1_ok"] = p.lemma1_ok;
  details["span_dimension"] = p.span_dimension;
  details["selected_rows"] = p.selection.rows;
  details["selection_exhaustive"] = p.selection.exhaustive;
  details["volume_squared"] = format_scalar(p.selection.volume_squared);
  details["cramer_ok"] = p.cramer_ok;
  s.write_json("rounding_checks.json", details);
  s.info()["delta"] = p.delta.get_str();
  s.info()["points_checked"] = rec.points_checked;
  s.info()["disagreements"] = rec.disagreements.size();
  return s.finish();
}

template <class S>
RunResult run_bounds_typed(const RunConfig& cfg, const std::string& text) {
  Session s(cfg);
  SlackMatrix<S> slack(matrix_from_csv<S>(text, cfg.slack.string()));
  // Facets, vertices, P and the empty face are all distinct faces.
  std::uint64_t faces = cfg.faces.value_or(slack.rows() + slack.cols() + 2);
  auto b = compute_bounds(slack, faces, cfg.rank);
  Json j = bounds_json<S>(b, faces);
  j["mode"] = std::string(mode_name(ScalarTraits<S>::mode));
  if (!cfg.out.empty()) s.write_json("bounds.json", j);
  if (b.gap) s.check("bounds", *b.gap >= 0);
  s.info()["bounds"] = j;
  return s.finish();
}

RunResult run_bounds(const RunConfig& cfg) {
  if (cfg.slack.empty()) throw Error(ErrorKind::invalid_input, "bounds: --slack is required");
  std::string text = read_text_file(cfg.slack);
  ScalarMode mode = cfg.mode.value_or(detect_csv_mode(text));
  return mode == ScalarMode::rational ? run_bounds_typed<Rational>(cfg, text) : run_bounds_typed<double>(cfg, text);
}

template <class S>
RunResult run_verify_typed(const RunConfig& cfg, const fs::path& sp, const fs::path& tp, const fs::path& up,
                           const std::string& st, const std::string& tt, const std::string& ut) {
  Session s(cfg);
  SlackMatrix<S> slack(matrix_from_csv<S>(st, sp.string()));
  auto f = make_factorization(matrix_from_csv<S>(tt, tp.string()), matrix_from_csv<S>(ut, up.string()));
  if (f.T.rows() != slack.rows() || f.U.cols() != slack.cols()) {
    throw Error(ErrorKind::invalid_input, "verify: T U is " + std::to_string(f.T.rows()) + "x" +
                                              std::to_string(f.U.cols()) + " but S is " +
                                              std::to_string(slack.rows()) + "x" + std::to_string(slack.cols()));
  }
  auto ver = verify_factorization(slack, f, float_tolerance(cfg));
  s.check("factorization", ver.pass);
  if (!cfg.out.empty()) s.write_json("verification.json", report_to_json(ver));
  s.info()["verification"] = report_to_json(ver);
  s.info()["rank"] = f.rank();
  return s.finish();
}

RunResult run_verify(const RunConfig& cfg) {
  fs::path sp = cfg.slack, tp = cfg.t, up = cfg.u;
  if (!cfg.bundle.empty()) {
    Json bundle = read_json_file(cfg.bundle);
    fs::path dir = cfg.bundle.parent_path();
    auto pick = [&](const char* key, fs::path& dst) {
      if (!dst.empty()) return;
      if (!bundle.contains(key) || !bundle[key].is_string()) {
        throw Error(ErrorKind::invalid_input, std::string("bundle has no '") + key + "' matrix file");
      }
      dst = dir / bundle[key].get<std::string>();
    };
    pick("S", sp);
    pick("T", tp);
    pick("U", up);
  }
  if (sp.empty() || tp.empty() || up.empty()) {
    throw Error(ErrorKind::invalid_input, "verify: need --slack, --t and --u (or --bundle)");
  }
  std::string st = read_text_file(sp), tt = read_text_file(tp), ut = read_text_file(up);
  ScalarMode mode = cfg.mode.value_or(detect_csv_mode(st) == ScalarMode::rational &&
                                              detect_csv_mode(tt) == ScalarMode::rational &&
                                              detect_csv_mode(ut) == ScalarMode::rational
                                          ? ScalarMode::rational
                                          : ScalarMode::float64);
  if (mode == ScalarMode::rational) return run_verify_typed<Rational>(cfg, sp, tp, up, st, tt, ut);
  return run_verify_typed<double>(cfg, sp, tp, up, st, tt, ut);
}

}  // namespace

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out) {
  RunConfig cfg;
  std::string mode;
  CLI::App app{"Extended formulations by reflections: build, verify, round and bound"};
  app.require_subcommand(1);

  auto add_mode = [&](CLI::App* sub) { sub->add_option("--mode", mode, "rational or float64"); };
  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", cfg.out, "output directory"); };

  auto* ngon = app.add_subcommand("ngon", "regular n-gon: factorization, extension, projection");
  ngon->add_option("--n", cfg.n, "number of vertices")->required();
  add_out(ngon);
  add_mode(ngon);
  ngon->add_option("--tol", cfg.tolerance, "relative residual tolerance (can only loosen 1e-9)");
  ngon->add_option("--full-check-cap", cfg.full_check_cap, "largest n verified entry by entry");
  ngon->add_option("--samples", cfg.sample_entries, "random entries checked above the cap");
  ngon->add_option("--seed", cfg.seed, "seed for sampled verification");
  ngon->add_option("--csv-cap", cfg.csv_cap, "largest matrix (entries) written as CSV");
  ngon->add_option("--projection-cap", cfg.projection_cap, "largest n for the per-facet projection LPs");

  auto* perm = app.add_subcommand("permutahedron", "n-permutahedron via a sorting network, exact");
  perm->add_option("--n", cfg.n, "dimension")->required();
  add_out(perm);
  add_mode(perm);
  perm->add_option("--csv-cap", cfg.csv_cap, "largest matrix (entries) written as CSV");

  auto* grid = app.add_subcommand("gridgon", "polygon on parabola points (z, z^2), z in [2n]");
  grid->add_option("--n", cfg.n, "number of vertices")->required();
  auto* seed_opt = grid->add_option("--seed", cfg.seed, "seed for a uniform subset");
  grid->add_option("--subset", cfg.subset, "explicit subset, comma separated")->delimiter(',')->excludes(seed_opt);
  add_out(grid);
  add_mode(grid);

  auto* round = app.add_subcommand("round", "round an extension and check lattice-point recovery");
  round->add_option("--polygon", cfg.polygon, "polygon JSON")->required();
  round->add_option("--factorization", cfg.factorization, "factorization bundle JSON (default: T = S, U = I)");
  round->add_option("--grid-bound", cfg.grid_bound, "N with vertices in [N]^2 (default: bundle or max coordinate)");
  round->add_option("--max-points", cfg.max_points, "largest bounding box checked");
  add_out(round);

  auto* bounds = app.add_subcommand("bounds", "face-count and linear-rank lower bounds");
  bounds->add_option("--slack", cfg.slack, "slack matrix CSV")->required();
  bounds->add_option("--faces", cfg.faces, "face count (default: facets + vertices + 2)");
  bounds->add_option("--rank", cfg.rank, "construction rank to compare against");
  add_mode(bounds);
  add_out(bounds);

  auto* verify = app.add_subcommand("verify", "check S = T U with T, U >= 0");
  verify->add_option("--slack", cfg.slack, "slack matrix CSV");
  verify->add_option("--t", cfg.t, "T CSV");
  verify->add_option("--u", cfg.u, "U CSV");
  verify->add_option("--bundle", cfg.bundle, "factorization bundle JSON");
  verify->add_option("--tol", cfg.tolerance, "relative residual tolerance (can only loosen 1e-9)");
  add_mode(verify);
  add_out(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw Error(ErrorKind::parse_error, e.what());
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();
  if (!mode.empty()) cfg.mode = parse_mode(mode);
  if (cfg.tolerance && !(*cfg.tolerance >= 0)) throw Error(ErrorKind::parse_error, "--tol must be nonnegative");
  return cfg;
}

RunResult run(const RunConfig& cfg) {
  try {
    if (cfg.subcommand == "ngon") return run_ngon(cfg);
    if (cfg.subcommand == "permutahedron") return run_permutahedron(cfg);
    if (cfg.subcommand == "gridgon") return run_gridgon(cfg);
    if (cfg.subcommand == "round") return run_round(cfg);
    if (cfg.subcommand == "bounds") return run_bounds(cfg);
    if (cfg.subcommand == "verify") return run_verify(cfg);
    throw Error(ErrorKind::invalid_input, "unknown subcommand '" + cfg.subcommand + "'");
  } catch (const Error& e) {
    Json j;
    j["status"] = "error";
    j["subcommand"] = cfg.subcommand;
    j["kind"] = std::string(error_kind_name(e.kind()));
    j["message"] = e.what();
    return {2, std::move(j)};
  } catch (const std::exception& e) {
    Json j;
    j["status"] = "error";
    j["subcommand"] = cfg.subcommand;
    j["kind"] = "internal";
    j["message"] = e.what();
    return {2, std::move(j)};
  }
}

}  // namespace polyfold::cli
