#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

#include "diegetic/errors.hpp"

namespace diegetic {

/// Payoff scalar. Exact arbitrary-precision rational: argmax ties and
/// fixpoint membership must never depend on floating-point rounding.
using Rational = boost::multiprecision::cpp_rational;

/// A payoff vector, one coordinate per player.
using PayVec = std::vector<Rational>;

namespace detail {
inline bool is_integer_literal(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}
}  // namespace detail

/// Parses "p" or "p/q" with integer p and positive integer q.
/// Floats and anything else are rejected.
inline Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) {
    if (!detail::is_integer_literal(text))
      throw schema_error("bad rational literal '" + text + "'");
    return Rational(boost::multiprecision::cpp_int(text));
  }
  const std::string num = text.substr(0, slash);
  const std::string den = text.substr(slash + 1);
  if (!detail::is_integer_literal(num) || !detail::is_integer_literal(den) ||
      den.empty() || den[0] == '-')
    throw schema_error("bad rational literal '" + text + "'");
  boost::multiprecision::cpp_int d(den);
  if (d == 0) throw schema_error("zero denominator in '" + text + "'");
  return Rational(boost::multiprecision::cpp_int(num), d);
}

/// Canonical text form: "p" when the denominator is 1, else "p/q".
inline std::string rational_to_string(const Rational& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) s += "/" + denominator(r).str();
  return s;
}

inline std::string payvec_to_string(const PayVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += rational_to_string(v[i]);
  }
  return s + ")";
}

}  // namespace diegetic
