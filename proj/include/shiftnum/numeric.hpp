#ifndef SHIFTNUM_NUMERIC_HPP
#define SHIFTNUM_NUMERIC_HPP

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace shiftnum {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// "p/q" in lowest terms, or "p" when the denominator is one.
inline std::string to_string(const Rational& r) { return r.str(); }
inline std::string to_string(const BigInt& n) { return n.str(); }

/// Parses "p", "p/q", or a finite decimal such as "-0.125" exactly.
Rational parse_rational(const std::string& text);

inline bool is_integer(const Rational& r) {
  return boost::multiprecision::denominator(r) == 1;
}

}  // namespace shiftnum

#endif
