#pragma once

// Desk-scale experiments: theorem sweeps, root-count tables, the
// counterexample contrast, prime-moduli Weyl averages, exponential sums.

#include <optional>
#include <string>
#include <vector>

#include "crteq/analysis.hpp"
#include "crteq/expsums.hpp"
#include "crteq/generators.hpp"

namespace crteq {

/// Which local system to build and its parameters.
struct SystemSpec {
  std::string kind = "poly";  ///< poly|veronese|image|graph|bezout|curve|pseudo|hooley|file
  std::string poly = "1,0,1";
  std::string g;              ///< second polynomial for image/graph
  unsigned d = 3;             ///< veronese degree
  std::string curve1;         ///< bivariate, for bezout/curve
  std::string curve2;
  std::string pseudo = "f1";
  std::string file;
  u64 restrict_mod = 0;       ///< 0: no prime restriction
  std::vector<u64> restrict_residues;

  friend bool operator==(const SystemSpec&, const SystemSpec&) = default;
};

LocalSystem make_system(const SystemSpec& spec);

struct ExperimentConfig {
  SystemSpec system;
  std::vector<u64> ladder{1000, 10000};
  std::optional<unsigned> k;
  int theorem = 1;
  Weighting weighting = Weighting::uniform;
  std::optional<u64> H;             ///< fixed ET cutoff; unset: ceil(e^P) capped at kMaxAutoH
  BoxMode disc_mode = BoxMode::bounds;
  double max_work = 5e8;
  u64 samples = 20'000;
  u64 seed = 1;
  std::optional<double> alpha;      ///< unset: minimum assumption1_statistic ratio over the ladder
  std::optional<double> delta;
  bool per_q = false;
  u64 x = 100'000;                  ///< table / primes bound
  double epsilon = 0.25;
  std::vector<i64> h_set{1};
  std::vector<double> profile;      ///< fixed-point distribution for polynomial tables
  std::string expsum_f1 = "1,0,1";
  std::string expsum_f2 = "0,1";
  u64 p_limit = 1000;
  std::string ffield_curve = "1,0,2;-1,3,0;-17,0,0";
  std::vector<u64> ffield_primes{101, 211, 401, 809};
  i64 ffield_hmax = 5;
  u64 q = 0;                        ///< disc subcommand modulus; 0 means every q <= x
  unsigned threads = 0;             ///< 0: environment or 1; never echoed into reports

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

inline constexpr u64 kMaxAutoH = 64;

/// ceil(e^P) with P = sum_{p <= x} (1 - lambda/rho)/p, clamped to [1, kMaxAutoH].
u64 default_cutoff(const PrimeSums& sums);

struct SweepRow {
  u64 x = 0;
  bool empty = false;
  u64 moduli = 0;
  u64 total_weight = 0;
  double average_disc = 0.0;
  u64 exact_count = 0;      ///< moduli whose disc was computed exactly
  u64 H = 0;
  PrimeSums sums;
  double script_P = 0.0;
  double script_P_tilde = 0.0;
  Assumption1Stat assumption1;
  TheoremBound bound;
  double fitted_constant = 0.0;  ///< average_disc / factor
  double lhs_over_rhs = 0.0;     ///< average_disc / value
  std::vector<QStat> per_q;
};

struct SweepReport {
  int theorem = 1;
  double alpha = 1.0;
  bool alpha_fitted = true;
  std::vector<SweepRow> rows;
  bool strictly_decreasing = false;
  double constant_spread = 0.0;  ///< max / min fitted constant over nonempty rows
};

SweepReport run_theorem_sweep(const ExperimentConfig& config);

struct RootTable {
  std::string source;
  u64 x = 0;
  u64 primes = 0;                 ///< pi(x)
  std::vector<u64> histogram;     ///< count of p <= x with rho(p) = k
  std::vector<u64> moment_numerators;  ///< sum_k k^j count_k, j = 1..4
  std::vector<double> moments;    ///< numerator / pi(x)
  std::vector<double> reference;  ///< expected counts per k
  std::string reference_label;
};

inline constexpr u64 kTableLimit = 10'000'000;

/// Pseudo-polynomial tables use the Poisson(1) reference pi(x) e^-1 / k!.
RootTable poisson_table(PseudoPoly which, u64 x, unsigned threads = 1);
/// Polynomial tables use pi(x) * profile[k] when a profile is given.
RootTable poisson_table(const IntPolynomial& f, u64 x, const std::vector<double>& profile, unsigned threads = 1);

struct CounterexampleRow {
  u64 x = 0;
  u64 moduli = 0;
  u64 M_x = 0;
  double mu_mass = 0.0;          ///< rho-weighted mass of [0, epsilon]
  double proof_floor = 0.0;      ///< sum_{e^{1/eps} < p <= x} g(p) / M_x
  double uniform_mass = 0.0;
  double uniform_avg_disc = 0.0;
  double rho_avg_disc = 0.0;
};

struct CounterexampleReport {
  double epsilon = 0.25;
  std::vector<CounterexampleRow> rows;
};

CounterexampleReport counterexample_demo(double epsilon, const std::vector<u64>& ladder, unsigned threads = 1);

struct PrimeWeylRow {
  i64 h = 0;
  Complex uniform;   ///< (1/|Pi(x)|) sum over p in Q of W(h;p)
  Complex weighted;  ///< (1/pi(x)) sum over p of rho(p) W(h;p)
};

struct PrimeWeylReport {
  u64 x = 0;
  u64 primes_in_Q = 0;
  u64 primes = 0;
  std::vector<PrimeWeylRow> rows;
};

PrimeWeylReport prime_moduli_weyl(const LocalSystem& system, u64 x, const std::vector<i64>& h_set, unsigned threads = 1);

struct FunctionFieldRow {
  u64 p = 0;
  u64 Z_p = 0;
  u64 points = 0;
  double c1_at_zero = 0.0;
  std::vector<FunctionFieldSums> sums;  ///< h = 1..hmax
  double max_abs_c2 = 0.0;
  double max_abs_c1 = 0.0;
};

inline constexpr double kVanishingSum = 1e-9;

struct FunctionFieldReport {
  std::string curve;
  std::vector<FunctionFieldRow> rows;
  std::optional<double> c2_exponent;  ///< slope of log max|c2| against log p; unset if any max vanishes
};

FunctionFieldReport function_field_experiment(const BivariatePoly& curve, const std::vector<u64>& primes, i64 hmax);

}  // namespace crteq
