#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "polyfold/bounds.hpp"
#include "polyfold/extension.hpp"
#include "polyfold/grid_rounding.hpp"
#include "polyfold/polytope.hpp"
#include "polyfold/slack.hpp"

namespace polyfold {

// Insertion-ordered so emitted files are byte-stable.
using Json = nlohmann::ordered_json;

// Rationals as "p/q" strings, doubles as JSON numbers.
Json scalar_to_json(const Rational& x);
Json scalar_to_json(double x);

// Accepts numbers and strings; throws Error(parse_error) naming `where`.
template <class S>
S scalar_from_json(const Json& j, const std::string& where);

template <class S>
Json polygon_to_json(const Polygon<S>& p);

using AnyPolygon = std::variant<Polygon<double>, Polygon<Rational>>;
AnyPolygon polygon_from_json(const Json& j);

template <class S>
Json hsystem_to_json(const LinearSystem<S>& h);
template <class S>
LinearSystem<S> hsystem_from_json(const Json& j);

// {"rows": m, "cols": n, "data": [row-major entries]}.
template <class S>
Json matrix_to_json(const Matrix<S>& m);
template <class S>
Matrix<S> matrix_from_json(const Json& j);

// Nested array of rows.
template <class S>
Json matrix_rows_to_json(const Matrix<S>& m);

template <class S>
std::string matrix_to_csv(const Matrix<S>& m);
template <class S>
Matrix<S> matrix_from_csv(const std::string& text, const std::string& source);

// Rational when every field is an integer or p/q literal.
ScalarMode detect_csv_mode(const std::string& text);

Json report_to_json(const VerificationReport& r);
Json report_to_json(const LiftReport& r);
Json report_to_json(const ProjectionReport& r);
Json report_to_json(const CoefficientBoundReport& r);
Json report_to_json(const RecoveryReport& r);
Json report_to_json(const BoundsReport& r);

template <class S>
Json extension_to_json(const ExtendedSystem<S>& q);
Json rounded_system_to_json(const RoundedSystem& s);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);
Json read_json_file(const std::filesystem::path& path);
// Two-space indent and a trailing newline.
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace polyfold
