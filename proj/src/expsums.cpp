#include "crteq/expsums.hpp"

#include <cmath>
#include <numbers>

#include "crteq/parallel.hpp"

namespace crteq {

namespace {

// e(k/p) for k in [0, p), with e(0) = 1 exactly.
std::vector<Complex> phase_table(u64 p) {
  std::vector<Complex> t(p);
  for (u64 k = 0; k < p; ++k) t[k] = unit_phase(k, p);
  return t;
}

}  // namespace

Complex V(const RationalExpSumSpec& spec, i64 a, u64 q) {
  if (q == 0) throw Error("V: modulus must be positive");
  if (q == 1) return {1.0, 0.0};
  const Factorization f = factorize(q);
  if (!f.squarefree()) return {0.0, 0.0};
  for (const PrimePower& pp : f.parts) {
    if (spec.f2.is_zero_mod(pp.p)) return {0.0, 0.0};
  }
  const u64 ar = reduce(a, q);
  Complex sum{0.0, 0.0};
  for (u64 n = 0; n < q; ++n) {
    const u64 den = spec.f2.eval_mod(n, q);
    if (gcd(den, q) != 1) continue;
    const u64 r = mul_mod(spec.f1.eval_mod(n, q), mod_inverse(static_cast<i64>(den), q), q);
    sum += unit_phase(mul_mod(ar, r, q), q);
  }
  return sum / std::sqrt(static_cast<double>(q));
}

TwistedCheck check_twisted_mult(const RationalExpSumSpec& spec, i64 a, u64 q1, u64 q2) {
  if (q1 == 0 || q2 == 0) throw Error("check_twisted_mult: moduli must be positive");
  if (gcd(q1, q2) != 1) {
    throw Error("check_twisted_mult: q1 = " + std::to_string(q1) + " and q2 = " + std::to_string(q2) +
                " are not coprime");
  }
  TwistedCheck out;
  out.lhs = V(spec, a, q1 * q2);
  const u64 inv1 = q2 == 1 ? 0 : mod_inverse(static_cast<i64>(q1), q2);
  const u64 inv2 = q1 == 1 ? 0 : mod_inverse(static_cast<i64>(q2), q1);
  const Complex left = q2 == 1 ? Complex{1.0, 0.0} : V(spec, static_cast<i64>(mul_mod(reduce(a, q2), inv1, q2)), q2);
  const Complex right = q1 == 1 ? Complex{1.0, 0.0} : V(spec, static_cast<i64>(mul_mod(reduce(a, q1), inv2, q1)), q1);
  out.rhs = left * right;
  out.error = std::abs(out.lhs - out.rhs);
  return out;
}

WeilScan weil_bound_scan(const RationalExpSumSpec& spec, u64 p_limit, unsigned threads) {
  if (p_limit > kWeilScanLimit) {
    throw Error("weil_bound_scan: p_limit " + std::to_string(p_limit) + " exceeds " + std::to_string(kWeilScanLimit));
  }
  WeilScan out;
  out.p_limit = p_limit;
  const std::vector<u64> primes = sieve_primes(p_limit);
  out.rows.resize(primes.size());
  parallel_for(primes.size(), threads, [&](std::size_t i) {
    const u64 p = primes[i];
    WeilPrimeRow& row = out.rows[i];
    row.p = p;
    if (spec.f2.is_zero_mod(p)) return;
    std::vector<u64> r;
    for (u64 n = 0; n < p; ++n) {
      const u64 den = spec.f2.eval_mod(n, p);
      if (den == 0) continue;
      r.push_back(mul_mod(spec.f1.eval_mod(n, p), mod_inverse(static_cast<i64>(den), p), p));
    }
    const std::vector<Complex> phase = phase_table(p);
    const double norm = 1.0 / std::sqrt(static_cast<double>(p));
    for (u64 a = 1; a < p; ++a) {
      Complex sum{0.0, 0.0};
      for (u64 v : r) sum += phase[mul_mod(a, v, p)];
      const double m = std::abs(sum) * norm;
      if (m > row.max_abs) {
        row.max_abs = m;
        row.argmax_a = a;
      }
    }
  });
  std::vector<double> xs, ys;
  for (const WeilPrimeRow& row : out.rows) {
    if (row.max_abs > out.global_max) {
      out.global_max = row.max_abs;
      out.global_argmax_p = row.p;
    }
    if (row.max_abs > 0.0) {
      xs.push_back(static_cast<double>(row.p));
      ys.push_back(row.max_abs);
    }
  }
  out.fitted_G = out.global_max;
  if (xs.size() >= 2) out.growth_slope = loglog_slope(xs, ys);
  return out;
}

FunctionFieldSums function_field_sums(const BivariatePoly& f, u64 p, i64 h) {
  if (!is_prime(p)) throw Error("function_field_sums: " + std::to_string(p) + " is not prime");
  if (static_cast<double>(p) * static_cast<double>(p) > static_cast<double>(kDefaultScanBudget)) {
    throw Error("function_field_sums: p^2 exceeds the scan budget");
  }
  if (f.is_zero_mod(p)) throw Error("function_field_sums: polynomial vanishes mod " + std::to_string(p));
  const std::vector<Complex> phase = phase_table(p);
  const u64 hr = reduce(h, p);
  FunctionFieldSums out;
  out.p = p;
  out.h = h;
  Complex c1{0.0, 0.0}, c2{0.0, 0.0};
  for (u64 x = 0; x < p; ++x) {
    Complex fibre{0.0, 0.0};
    u64 size = 0;
    for (u64 y = 0; y < p; ++y) {
      if (f.eval_mod(x, y, p) != 0) continue;
      fibre += phase[mul_mod(hr, y, p)];
      ++size;
    }
    if (size == 0) continue;
    ++out.Z_p;
    out.points += size;
    c1 += fibre / static_cast<double>(size);
    c2 += fibre;
  }
  if (out.Z_p == 0) throw Error("function_field_sums: curve has no points mod " + std::to_string(p));
  out.c1 = c1 / static_cast<double>(out.Z_p);
  out.c2 = c2 / static_cast<double>(p);
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error("loglog_slope: need at least two paired samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0.0 || y[i] <= 0.0) throw Error("loglog_slope: samples must be positive");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw Error("loglog_slope: x values are all equal");
  return (n * sxy - sx * sy) / denom;
}

}  // namespace crteq
