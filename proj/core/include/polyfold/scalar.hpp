#pragma once

#include <gmpxx.h>

#include <cmath>
#include <string>
#include <string_view>

namespace polyfold {

using Rational = mpq_class;
using Integer = mpz_class;

enum class ScalarMode { rational, float64 };

std::string_view mode_name(ScalarMode mode) noexcept;
ScalarMode parse_mode(std::string_view name);

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr ScalarMode mode = ScalarMode::float64;
  static constexpr bool exact = false;
};

template <>
struct ScalarTraits<Rational> {
  static constexpr ScalarMode mode = ScalarMode::rational;
  static constexpr bool exact = true;
};

template <class S>
inline constexpr bool is_exact_v = ScalarTraits<S>::exact;

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.get_d(); }

inline double abs_value(double x) { return std::fabs(x); }
inline Rational abs_value(const Rational& x) { return Rational(abs(x)); }

inline int sign_of(double x) { return (x > 0) - (x < 0); }
inline int sign_of(const Rational& x) { return sgn(x); }

// Canonical text form: "p/q" (or "p" when q = 1) for rationals, shortest
// round-trip decimal for doubles.
std::string format_scalar(const Rational& x);
std::string format_scalar(double x);

template <class S>
S parse_scalar(std::string_view text);

template <>
Rational parse_scalar<Rational>(std::string_view text);
template <>
double parse_scalar<double>(std::string_view text);

// True when text is an integer or p/q literal.
bool looks_rational(std::string_view text);

// Exact square root when x is the square of a rational.
bool exact_sqrt(const Rational& x, Rational& root);

// Simplest rational (smallest denominator) in the closed interval [lo, hi].
// Requires 0 <= lo <= hi.
Rational simplest_between(const Rational& lo, const Rational& hi);

}  // namespace polyfold
