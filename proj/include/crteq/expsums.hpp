#pragma once

// Normalized rational exponential sums V(a;q) and the function-field Weyl
// sums over F_p along vertical fibres of a plane curve.

#include <optional>
#include <vector>

#include "crteq/analysis.hpp"
#include "crteq/generators.hpp"

namespace crteq {

struct RationalExpSumSpec {
  IntPolynomial f1;
  IntPolynomial f2;
  std::optional<double> weil_constant_hint;
};

/// (1/sqrt q) sum over n mod q with f2(n) invertible of e(a f1(n) / f2(n) / q).
/// Zero when q is not squarefree or f2 vanishes identically mod a prime p | q.
/// V(a;1) = 1.
Complex V(const RationalExpSumSpec& spec, i64 a, u64 q);

struct TwistedCheck {
  Complex lhs;
  Complex rhs;
  double error = 0.0;
};

/// V(a; q1 q2) against V(a q1^-1; q2) V(a q2^-1; q1). q1, q2 coprime.
TwistedCheck check_twisted_mult(const RationalExpSumSpec& spec, i64 a, u64 q1, u64 q2);

struct WeilPrimeRow {
  u64 p = 0;
  double max_abs = 0.0;  ///< max over 1 <= a < p of |V(a;p)|
  u64 argmax_a = 0;
};

struct WeilScan {
  u64 p_limit = 0;
  std::vector<WeilPrimeRow> rows;
  double global_max = 0.0;
  u64 global_argmax_p = 0;
  double fitted_G = 0.0;     ///< smallest constant bounding every row
  double growth_slope = 0.0; ///< least-squares slope of log max against log p
};

inline constexpr u64 kWeilScanLimit = 10'000;

WeilScan weil_bound_scan(const RationalExpSumSpec& spec, u64 p_limit, unsigned threads = 1);

struct FunctionFieldSums {
  u64 p = 0;
  i64 h = 0;
  Complex c1;
  Complex c2;
  u64 Z_p = 0;      ///< #{x : C_x nonempty}
  u64 points = 0;   ///< sum_x |C_x|
};

/// Exhaustive scan of F_p^2. Throws if the curve has no points (Z_p = 0).
FunctionFieldSums function_field_sums(const BivariatePoly& f, u64 p, i64 h);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace crteq
