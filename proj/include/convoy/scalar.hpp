#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <type_traits>

namespace convoy {

template <class S>
inline constexpr bool is_exact_scalar_v = false;
template <>
inline constexpr bool is_exact_scalar_v<mpq_class> = true;
template <>
inline constexpr bool is_exact_scalar_v<mpz_class> = true;

template <class S>
S scalar_from_mpz(const mpz_class& z) {
  if constexpr (std::is_floating_point_v<S>)
    return static_cast<S>(z.get_d());
  else
    return S(z);
}

template <class S>
double scalar_to_double(const S& s) {
  if constexpr (std::is_floating_point_v<S>)
    return static_cast<double>(s);
  else
    return s.get_d();
}

// Integer power with negative exponents allowed (s != 0 for e < 0).
template <class S>
S pow_int(S base, long e) {
  bool invert = e < 0;
  unsigned long n = invert ? static_cast<unsigned long>(-e)
                           : static_cast<unsigned long>(e);
  S result(1);
  while (n) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  if (invert) {
    if (result == S(0)) throw std::domain_error("pow_int: zero base, negative exponent");
    return S(1) / result;
  }
  return result;
}

// Parse "p/q" or a decimal literal into a rational.
inline mpq_class parse_rational(const std::string& text) {
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    mpq_class r(text);
    r.canonicalize();
    return r;
  }
  auto dot = text.find('.');
  if (dot == std::string::npos) {
    mpq_class r(text);
    r.canonicalize();
    return r;
  }
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  const std::size_t frac_len = text.size() - dot - 1;
  mpq_class num(digits);
  mpz_class den(1);
  for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
  mpq_class r = num / mpq_class(den);
  r.canonicalize();
  return r;
}

}  // namespace convoy
