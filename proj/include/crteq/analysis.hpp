#pragma once

// Equidistribution measurements of the measures Delta_q: Weyl sums, exact
// interval and box discrepancy, Erdos-Turan upper bounds, and the prime sums
// entering the theorem bounds.

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crteq/crt_sets.hpp"

namespace crteq {

using Complex = std::complex<double>;

/// e(r / q) for an exact residue r.
Complex unit_phase(u64 r, u64 q);

/// (1/rho(q)) sum_{x in A_q} e(h.x / q), with h.x reduced mod q exactly.
Complex weyl_sum(const ResidueSet& rs, std::span<const i64> h);

u64 sup_norm(std::span<const i64> h);
/// prod_i max(1, |h_i|)
u64 m_weight(std::span<const i64> h);

struct WeylEntry {
  std::vector<i64> h;
  Complex value;
};

/// W(h;q) for every nonzero h with sup norm at most H, lexicographic in h.
struct WeylSpectrum {
  u64 q = 1;
  unsigned dim = 1;
  u64 H = 1;
  std::vector<WeylEntry> entries;

  [[nodiscard]] const WeylEntry* find(std::span<const i64> h) const;
};

WeylSpectrum weyl_spectrum(const ResidueSet& rs, u64 H);

/// prod over p^v || q of (1 if h = 0 mod p^v else p^v). h must be nonzero.
u64 h_bracket(std::span<const i64> h, const Factorization& q);
u64 h_bracket(std::span<const i64> h, u64 q);

struct SecondMomentCheck {
  double lhs = 0.0;  ///< (1/q) sum_a |W(ah;q)|^2
  double rhs = 0.0;  ///< lambda({h,q}) / rho({h,q})
  u64 bracket = 1;
  bool pass = false;
};

inline constexpr double kSecondMomentSlack = 1e-9;

SecondMomentCheck second_moment_check(const LocalSystem& system, u64 q, std::span<const i64> h);

enum class DiscMethod { exact, erdos_turan, sampled };

std::string_view to_string(DiscMethod m);

/// Arc of R/Z with endpoints start/q and (start+length)/q. Open arcs stand
/// for the limit of closed arcs shrinking onto them.
struct Arc {
  u64 start = 0;
  u64 length = 0;
  bool closed = true;
};

struct DiscrepancyResult {
  DiscMethod method = DiscMethod::exact;
  u64 q = 1;
  double lower = 0.0;
  double upper = 1.0;
  std::optional<std::vector<Arc>> witness;  ///< extremal box (one arc per axis)
  std::optional<u64> H;
  std::optional<u64> seed;

  [[nodiscard]] bool is_exact() const { return method == DiscMethod::exact; }
  [[nodiscard]] double value() const { return upper; }
};

/// Exact sup over closed arcs of |Delta(I) - |I||. Linear after sorting:
/// an arc and its complement have the same deviation, and the positive side
/// reduces to max_j A_j - min_i B_i over prefix-mass terms.
DiscrepancyResult interval_discrepancy(const TorusPointSet& ps);

enum class BoxMode { exact, bounds };

/// Exact box enumeration would exceed its work budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

struct BoxBudget {
  double max_work = 5e8;  ///< exact mode: candidate boxes times points
  u64 samples = 20'000;   ///< bounds mode: random candidate boxes
  u64 seed = 1;
  u64 H = 0;              ///< bounds mode ET cutoff; 0 picks one from max_work
};

DiscrepancyResult box_discrepancy(const TorusPointSet& ps, BoxMode mode, const BoxBudget& budget = {});

/// (3/2)^n
double erdos_turan_constant(unsigned n);

/// C_n (1/H + sum_{0<|h|<=H} |W(h;q)| / M(h)), clamped to [0, 1].
double erdos_turan_bound(const WeylSpectrum& ws);

/// Sums over primes p <= x, ascending, with compensated accumulation.
struct PrimeSums {
  u64 x = 0;
  u64 primes_in_Q = 0;
  double inv_rho_ge1 = 0.0;   ///< sum_{rho(p)>=1} 1/p
  double inv_rho_ge2 = 0.0;   ///< sum_{rho(p)>=2} 1/p
  double damped = 0.0;        ///< sum_{rho(p)>=1} (1 - lambda/rho) / p
  double lambda_ratio = 0.0;  ///< sum_{rho(p)>=1} (lambda/rho) / p
  double sqrt_ratio = 0.0;    ///< sum_{rho(p)>=1} sqrt(lambda/rho) / p
};

PrimeSums prime_sums(const LocalSystem& system, u64 x);

double script_P(const LocalSystem& system, u64 x);
double script_P_tilde(const LocalSystem& system, u64 x);

class RangeError : public Error {
 public:
  using Error::Error;
};

struct TheoremQuery {
  int id = 1;
  u64 x = 2;
  std::optional<unsigned> k;
  double alpha = 1.0;
  std::optional<double> delta;
};

/// Right-hand side with C = C(n) = 1: value = factor / alpha.
struct TheoremBound {
  int id = 1;
  double value = 0.0;
  double factor = 0.0;
  double exponent_sum = 0.0;  ///< the prime sum inside the exponential
  std::optional<double> delta;
  std::vector<std::string> violations;
};

/// Throws RangeError naming the first violated hypothesis.
TheoremBound theorem_rhs(const LocalSystem& system, const TheoremQuery& query);
/// Same evaluation; violated hypotheses are listed instead of thrown.
TheoremBound theorem_rhs_unchecked(const LocalSystem& system, const TheoremQuery& query);
TheoremBound theorem_rhs_unchecked(const PrimeSums& sums, unsigned dim, const TheoremQuery& query);

struct Rational {
  i64 num = 0;
  u64 den = 1;
};

/// Parses "1/4", "0.25" or "3" exactly.
Rational parse_rational(const std::string& text);

/// Closed box prod [lo_i, hi_i] inside [0,1]^n.
struct Region {
  std::vector<Rational> lo;
  std::vector<Rational> hi;

  [[nodiscard]] bool contains(std::span<const u64> numerators, u64 q) const;
  [[nodiscard]] double volume() const;
};

enum class Weighting { uniform, rho };

std::string_view to_string(Weighting w);
Weighting parse_weighting(std::string_view name);

struct DiscOptions {
  BoxMode mode = BoxMode::bounds;
  BoxBudget budget;
  bool et_only = true;  ///< n >= 2 bounds mode: skip the random lower search
};

/// n = 1: exact. n >= 2: ET upper bound, or exact/sampled per options.
DiscrepancyResult discrepancy_of(const ResidueSet& rs, const DiscOptions& options);

struct QStat {
  u64 q = 1;
  u64 rho = 0;
  unsigned omega = 0;
  DiscrepancyResult disc;
  u64 region_count = 0;
};

struct AggregateStats {
  Weighting weighting = Weighting::uniform;
  u64 x = 0;
  std::optional<unsigned> k;
  u64 moduli = 0;         ///< |Q(x)| or |Q_k(x)|
  u64 total_weight = 0;   ///< M_x = sum rho(q)
  double average_disc = 0.0;
  std::optional<double> region_mass;
  std::vector<QStat> per_q;
};

AggregateStats aggregate_measure_stats(const LocalSystem& system, u64 x, Weighting weighting,
                                       std::optional<unsigned> k, const std::optional<Region>& region,
                                       const DiscOptions& options = {}, unsigned threads = 1);

}  // namespace crteq
