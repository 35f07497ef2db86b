#pragma once

#include <gmpxx.h>

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace virfrob {

using Int = mpz_class;
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

inline Rat rat(const Int& num, const Int& den = 1) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

// Parses "p/q" or "p" with optional leading '-'. Anything else throws.
inline Rat rat_parse(const std::string& s) {
  auto bad = [&]() -> std::runtime_error {
    return std::runtime_error("malformed rational '" + s + "'");
  };
  if (s.empty()) throw bad();
  auto check_int = [&](const std::string& part) {
    if (part.empty()) throw bad();
    std::size_t i = (part[0] == '-') ? 1 : 0;
    if (i == part.size()) throw bad();
    for (; i < part.size(); ++i)
      if (part[i] < '0' || part[i] > '9') throw bad();
  };
  std::size_t slash = s.find('/');
  if (slash == std::string::npos) {
    check_int(s);
    return Rat(Int(s));
  }
  std::string num = s.substr(0, slash), den = s.substr(slash + 1);
  check_int(num);
  check_int(den);
  Int d(den);
  if (d == 0) throw std::domain_error("rational with zero denominator");
  Rat r(Int(num), d);
  r.canonicalize();
  return r;
}

inline std::string rat_str(const Rat& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

inline Int factorial(long n) {
  if (n < 0) throw std::domain_error("factorial of negative");
  Int f = 1;
  for (long i = 2; i <= n; ++i) f *= i;
  return f;
}

inline Int binomial(long n, long k) {
  if (k < 0 || k > n || n < 0) return 0;
  Int b;
  mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return b;
}

inline Rat rat_pow(const Rat& base, long e) {
  if (e == 0) return Rat(1);
  if (base == 0 && e < 0) throw std::domain_error("0^negative");
  Rat b = (e > 0) ? base : Rat(1) / base;
  long k = std::labs(e);
  Rat acc(1);
  while (k > 0) {
    if (k & 1) acc *= b;
    b *= b;
    k >>= 1;
  }
  return acc;
}

}  // namespace virfrob
