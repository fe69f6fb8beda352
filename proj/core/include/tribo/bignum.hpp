#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace tribo {

/// Arbitrary-precision naturals and rationals. Tribonacci numbers leave the
/// 64-bit range near index 90, and counting formulas multiply them by n.
using Natural = mpz_class;
using Rational = mpq_class;

inline std::string to_string(const Natural& n) { return n.get_str(); }

inline std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline Natural natural(std::uint64_t v) {
  Natural n;
  mpz_import(n.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return n;
}

/// Lossy narrowing for oracle-sized values; callers guarantee the value fits.
inline std::uint64_t to_u64(const Natural& n) {
  std::uint64_t v = 0;
  if (n == 0) return 0;
  mpz_export(&v, nullptr, 1, sizeof(v), 0, 0, n.get_mpz_t());
  return v;
}

}  // namespace tribo
