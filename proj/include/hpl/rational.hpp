#ifndef HPL_RATIONAL_HPP
#define HPL_RATIONAL_HPP

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "hpl/errors.hpp"

namespace hpl {

/// Exact field of coefficients.
using Rational = mpq_class;

/// Parses "p/q", "-p/q" or an integer literal. Throws InputError otherwise.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto bad = [&] { return InputError("malformed rational '" + s + "'"); };
  if (s.empty()) throw bad();
  auto check_int = [&](std::string_view part, bool allow_sign) {
    if (part.empty()) throw bad();
    size_t i = 0;
    if (allow_sign && (part[0] == '-' || part[0] == '+')) i = 1;
    if (i == part.size()) throw bad();
    for (; i < part.size(); ++i)
      if (part[i] < '0' || part[i] > '9') throw bad();
  };
  auto slash = s.find('/');
  if (slash == std::string::npos) {
    check_int(s, true);
  } else {
    check_int(std::string_view(s).substr(0, slash), true);
    check_int(std::string_view(s).substr(slash + 1), false);
  }
  std::string normalized = (s[0] == '+') ? s.substr(1) : s;
  mpq_class r;
  if (slash != std::string::npos) {
    mpz_class num(normalized.substr(0, normalized.find('/')), 10);
    mpz_class den(normalized.substr(normalized.find('/') + 1), 10);
    if (den == 0) throw InputError("zero denominator in '" + s + "'");
    r = mpq_class(num, den);
  } else {
    r = mpq_class(mpz_class(normalized, 10));
  }
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

/// (-1)^exponent
inline int sign_power(long exponent) { return (exponent % 2 == 0) ? 1 : -1; }

}  // namespace hpl

#endif  // HPL_RATIONAL_HPP
