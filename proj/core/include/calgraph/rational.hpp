#pragma once

#include <gmpxx.h>

#include <string>

namespace calgraph {

/// Exact rational scalar for kernel, rank and Vandermonde computations.
using Rational = mpq_class;

inline Rational rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline double to_double(const Rational& q) { return q.get_d(); }

inline Rational rational_abs(const Rational& q) { return abs(q); }

}  // namespace calgraph
