#include "polyfold/scalar.hpp"

#include <array>
#include <charconv>
#include <string>

#include "polyfold/error.hpp"

namespace polyfold {

std::string_view error_kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_size: return "invalid-size";
    case ErrorKind::unsupported_mode: return "unsupported-mode";
    case ErrorKind::invalid_selector: return "invalid-selector";
    case ErrorKind::too_large: return "too-large";
    case ErrorKind::not_contained: return "not-contained";
    case ErrorKind::degenerate_factor: return "degenerate-factor";
    case ErrorKind::folding_divergence: return "folding-divergence";
    case ErrorKind::numerical_failure: return "numerical-failure";
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::lift_failure: return "lift-failure";
    case ErrorKind::degenerate_input: return "degenerate-input";
    case ErrorKind::io_error: return "io-error";
    case ErrorKind::parse_error: return "parse-error";
  }
  return "unknown";
}

std::string_view mode_name(ScalarMode mode) noexcept {
  return mode == ScalarMode::rational ? "rational" : "float64";
}

ScalarMode parse_mode(std::string_view name) {
  if (name == "rational") return ScalarMode::rational;
  if (name == "float64") return ScalarMode::float64;
  throw Error(ErrorKind::parse_error, "unknown scalar mode '" + std::string(name) + "'");
}

std::string format_scalar(const Rational& x) {
  Rational c = x;
  c.canonicalize();
  return c.get_str();
}

std::string format_scalar(double x) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc()) throw Error(ErrorKind::invalid_input, "cannot format double");
  return std::string(buf.data(), end);
}

bool looks_rational(std::string_view text) {
  if (text.empty()) return false;
  std::size_t i = 0;
  if (text[0] == '-' || text[0] == '+') i = 1;
  bool digits = false;
  bool slash = false;
  bool after_slash_digit = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c >= '0' && c <= '9') {
      digits = true;
      if (slash) after_slash_digit = true;
    } else if (c == '/' && !slash && digits) {
      slash = true;
    } else {
      return false;
    }
  }
  return digits && (!slash || after_slash_digit);
}

template <>
Rational parse_scalar<Rational>(std::string_view text) {
  std::string s(text);
  if (!s.empty() && s[0] == '+') s.erase(0, 1);
  if (!looks_rational(s)) {
    throw Error(ErrorKind::parse_error, "not a rational literal: '" + std::string(text) + "'");
  }
  Rational q;
  if (q.set_str(s, 10) != 0 || q.get_den() == 0) {
    throw Error(ErrorKind::parse_error, "not a rational literal: '" + std::string(text) + "'");
  }
  q.canonicalize();
  return q;
}

template <>
double parse_scalar<double>(std::string_view text) {
  if (looks_rational(text) && text.find('/') != std::string_view::npos) {
    return parse_scalar<Rational>(text).get_d();
  }
  std::string_view t = text;
  if (!t.empty() && t[0] == '+') t.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    throw Error(ErrorKind::parse_error, "not a number: '" + std::string(text) + "'");
  }
  return value;
}

bool exact_sqrt(const Rational& x, Rational& root) {
  if (x < 0) return false;
  const Integer& num = x.get_num();
  const Integer& den = x.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t())) {
    return false;
  }
  root = Rational(Integer(sqrt(num)), Integer(sqrt(den)));
  root.canonicalize();
  return true;
}

namespace {
Integer floor_of(const Rational& x) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}
}  // namespace

Rational simplest_between(const Rational& lo, const Rational& hi) {
  // Continued-fraction descent; each level inverts the fractional parts.
  Integer fl = floor_of(lo);
  if (Rational(fl) == lo) return lo;
  if (Rational(fl + 1) <= hi) return Rational(fl + 1);
  Rational x = lo - fl;
  Rational y = hi - fl;
  Rational inner = simplest_between(Rational(1 / y), Rational(1 / x));
  Rational out = Rational(fl) + Rational(1 / inner);
  out.canonicalize();
  return out;
}

}  // namespace polyfold
