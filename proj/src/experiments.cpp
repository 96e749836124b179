#include "crteq/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "crteq/parallel.hpp"

namespace crteq {

LocalSystem make_system(const SystemSpec& spec) {
  LocalSystem base = [&]() -> LocalSystem {
    if (spec.kind == "poly") return roots_system(IntPolynomial::parse(spec.poly));
    if (spec.kind == "veronese") return veronese_system(IntPolynomial::parse(spec.poly), spec.d);
    if (spec.kind == "image") return image_system(IntPolynomial::parse(spec.poly), IntPolynomial::parse(spec.g));
    if (spec.kind == "graph") return graph_system(IntPolynomial::parse(spec.poly), IntPolynomial::parse(spec.g));
    if (spec.kind == "bezout") return bezout_system(BivariatePoly::parse(spec.curve1), BivariatePoly::parse(spec.curve2));
    if (spec.kind == "curve") return curve_system(BivariatePoly::parse(spec.curve1));
    if (spec.kind == "pseudo") return pseudo_poly_system(parse_pseudo_poly(spec.pseudo));
    if (spec.kind == "hooley") return hooley_counterexample_system();
    if (spec.kind == "file") return load_local_system(spec.file);
    throw Error("unknown system kind '" + spec.kind + "'");
  }();
  if (spec.restrict_mod == 0) return base;
  const u64 m = spec.restrict_mod;
  std::vector<u64> residues;
  for (u64 r : spec.restrict_residues) residues.push_back(r % m);
  std::string label = "p mod " + std::to_string(m) + " in {";
  for (std::size_t i = 0; i < residues.size(); ++i) label += (i ? "," : "") + std::to_string(residues[i]);
  label += "}";
  return restrict_primes(
      base, [m, residues](u64 p) { return std::find(residues.begin(), residues.end(), p % m) != residues.end(); },
      label);
}

u64 default_cutoff(const PrimeSums& sums) {
  const double h = std::ceil(std::exp(sums.damped));
  if (!(h < static_cast<double>(kMaxAutoH))) return kMaxAutoH;
  return std::max<u64>(1, static_cast<u64>(h));
}

SweepReport run_theorem_sweep(const ExperimentConfig& config) {
  if (config.ladder.empty()) throw Error("sweep: x ladder is empty");
  if (!std::is_sorted(config.ladder.begin(), config.ladder.end())) throw Error("sweep: x ladder must be ascending");
  if (config.theorem < 1 || config.theorem > 4) throw Error("sweep: theorem must be 1, 2, 3 or 4");
  if (config.theorem >= 3 && !config.k) throw Error("sweep: theorems 3 and 4 need k");
  const LocalSystem system = make_system(config.system);
  const unsigned threads = resolve_threads(config.threads);
  // Theorems 1 and 2 average over Q(x); k only applies to 3 and 4.
  const std::optional<unsigned> k = config.theorem >= 3 ? config.k : std::nullopt;

  SweepReport out;
  out.theorem = config.theorem;
  if (config.alpha) {
    out.alpha = *config.alpha;
    out.alpha_fitted = false;
  } else {
    double alpha = 0.0;
    bool first = true;
    for (u64 x : config.ladder) {
      const double r = assumption1_statistic(system, std::max<u64>(x, 2)).ratio;
      alpha = first ? r : std::min(alpha, r);
      first = false;
    }
    out.alpha = alpha;
  }

  for (u64 x : config.ladder) {
    SweepRow row;
    row.x = x;
    row.sums = prime_sums(system, std::max<u64>(x, 2));
    row.script_P = row.sums.inv_rho_ge1 + 3.0;
    row.script_P_tilde = row.sums.sqrt_ratio + 3.0;
    row.assumption1 = assumption1_statistic(system, std::max<u64>(x, 2));
    row.H = config.H.value_or(default_cutoff(row.sums));
    row.bound = theorem_rhs_unchecked(row.sums, system.dim(),
                                      TheoremQuery{config.theorem, x, k, out.alpha, config.delta});
    const ModulusSet q = enumerate_Q(system, x, k);
    if (q.members.empty()) {
      row.empty = true;
      out.rows.push_back(std::move(row));
      continue;
    }
    DiscOptions options;
    options.mode = config.disc_mode;
    options.budget = BoxBudget{config.max_work, config.samples, config.seed, row.H};
    AggregateStats stats = aggregate_measure_stats(system, x, config.weighting, k, std::nullopt, options, threads);
    row.moduli = stats.moduli;
    row.total_weight = stats.total_weight;
    row.average_disc = stats.average_disc;
    for (const QStat& s : stats.per_q) row.exact_count += s.disc.is_exact();
    if (row.bound.factor > 0.0) row.fitted_constant = row.average_disc / row.bound.factor;
    if (row.bound.value > 0.0) row.lhs_over_rhs = row.average_disc / row.bound.value;
    if (config.per_q) row.per_q = std::move(stats.per_q);
    out.rows.push_back(std::move(row));
  }

  std::vector<const SweepRow*> filled;
  for (const SweepRow& r : out.rows) {
    if (!r.empty) filled.push_back(&r);
  }
  out.strictly_decreasing = !filled.empty();
  for (std::size_t i = 1; i < filled.size(); ++i) {
    if (!(filled[i]->average_disc < filled[i - 1]->average_disc)) out.strictly_decreasing = false;
  }
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < filled.size(); ++i) {
    const double c = filled[i]->fitted_constant;
    lo = i ? std::min(lo, c) : c;
    hi = i ? std::max(hi, c) : c;
  }
  out.constant_spread = lo > 0.0 ? hi / lo : 0.0;
  return out;
}

namespace {

RootTable finish_table(std::string source, u64 x, const std::vector<u64>& counts) {
  RootTable t;
  t.source = std::move(source);
  t.x = x;
  t.primes = counts.size();
  for (u64 c : counts) {
    if (c >= t.histogram.size()) t.histogram.resize(c + 1, 0);
    ++t.histogram[c];
  }
  t.moment_numerators.assign(4, 0);
  for (std::size_t k = 0; k < t.histogram.size(); ++k) {
    u64 power = 1;
    for (int j = 0; j < 4; ++j) {
      power *= k;
      t.moment_numerators[j] += power * t.histogram[k];
    }
  }
  for (u64 num : t.moment_numerators) {
    t.moments.push_back(t.primes ? static_cast<double>(num) / static_cast<double>(t.primes) : 0.0);
  }
  return t;
}

}  // namespace

RootTable poisson_table(PseudoPoly which, u64 x, unsigned threads) {
  if (x > kTableLimit) throw Error("table: x exceeds " + std::to_string(kTableLimit));
  const std::vector<u64> primes = sieve_primes(x);
  RootTable t = finish_table(std::string(to_string(which)), x, pseudo_poly_root_counts(which, primes, resolve_threads(threads)));
  t.reference_label = "pi(x) e^-1 / k!";
  double factorial = 1.0;
  for (std::size_t k = 0; k < t.histogram.size(); ++k) {
    if (k > 0) factorial *= static_cast<double>(k);
    t.reference.push_back(static_cast<double>(t.primes) * std::exp(-1.0) / factorial);
  }
  return t;
}

RootTable poisson_table(const IntPolynomial& f, u64 x, const std::vector<double>& profile, unsigned threads) {
  if (x > kTableLimit) throw Error("table: x exceeds " + std::to_string(kTableLimit));
  const std::vector<u64> primes = sieve_primes(x);
  std::vector<u64> counts(primes.size());
  parallel_for(primes.size(), resolve_threads(threads),
               [&](std::size_t i) { counts[i] = poly_roots_mod_p(f, primes[i]).size(); });
  RootTable t = finish_table(f.to_string(), x, counts);
  if (!profile.empty()) {
    t.reference_label = "pi(x) * fixed-point profile";
    if (t.histogram.size() < profile.size()) t.histogram.resize(profile.size(), 0);
    for (double w : profile) t.reference.push_back(static_cast<double>(t.primes) * w);
  }
  return t;
}

CounterexampleReport counterexample_demo(double epsilon, const std::vector<u64>& ladder, unsigned threads) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw Error("counterexample: epsilon must lie in (0, 1]");
  const LocalSystem system = hooley_counterexample_system();
  const unsigned workers = resolve_threads(threads);
  // [0, epsilon] as an exact rational with denominator 10^9.
  const i64 scale = 1'000'000'000;
  const Region region{{Rational{0, 1}}, {Rational{static_cast<i64>(std::llround(epsilon * scale)), static_cast<u64>(scale)}}};
  CounterexampleReport out;
  out.epsilon = epsilon;
  for (u64 x : ladder) {
    const AggregateStats uniform = aggregate_measure_stats(system, x, Weighting::uniform, std::nullopt, region, {}, workers);
    const AggregateStats weighted = aggregate_measure_stats(system, x, Weighting::rho, std::nullopt, region, {}, workers);
    CounterexampleRow row;
    row.x = x;
    row.moduli = uniform.moduli;
    row.M_x = weighted.total_weight;
    row.mu_mass = weighted.region_mass.value_or(0.0);
    row.uniform_mass = uniform.region_mass.value_or(0.0);
    row.uniform_avg_disc = uniform.average_disc;
    row.rho_avg_disc = weighted.average_disc;
    const double threshold = std::exp(1.0 / epsilon);
    u64 g_sum = 0;
    for (u64 p : sieve_primes(x)) {
      if (static_cast<double>(p) > threshold) g_sum += hooley_g(p);
    }
    row.proof_floor = static_cast<double>(g_sum) / static_cast<double>(row.M_x);
    out.rows.push_back(row);
  }
  return out;
}

PrimeWeylReport prime_moduli_weyl(const LocalSystem& system, u64 x, const std::vector<i64>& h_set, unsigned threads) {
  if (system.dim() != 1) throw Error("primes: the system must be one-dimensional");
  const std::vector<u64> primes = sieve_primes(x);
  std::vector<u64> rhos(primes.size());
  std::vector<std::vector<Complex>> values(primes.size());
  parallel_for(primes.size(), resolve_threads(threads), [&](std::size_t i) {
    const ResidueSet rs = build_A_q(system, primes[i]);
    rhos[i] = rs.rho();
    if (rs.rho() == 0) return;
    for (i64 h : h_set) {
      const i64 hv[1] = {h};
      values[i].push_back(weyl_sum(rs, hv));
    }
  });
  PrimeWeylReport out;
  out.x = x;
  out.primes = primes.size();
  for (u64 r : rhos) out.primes_in_Q += r > 0;
  for (std::size_t j = 0; j < h_set.size(); ++j) {
    CompensatedSum ur, ui, wr, wi;
    for (std::size_t i = 0; i < primes.size(); ++i) {
      if (rhos[i] == 0) continue;
      const Complex w = values[i][j];
      ur.add(w.real());
      ui.add(w.imag());
      wr.add(static_cast<double>(rhos[i]) * w.real());
      wi.add(static_cast<double>(rhos[i]) * w.imag());
    }
    PrimeWeylRow row;
    row.h = h_set[j];
    if (out.primes_in_Q > 0) row.uniform = Complex{ur.value(), ui.value()} / static_cast<double>(out.primes_in_Q);
    if (out.primes > 0) row.weighted = Complex{wr.value(), wi.value()} / static_cast<double>(out.primes);
    out.rows.push_back(row);
  }
  return out;
}

FunctionFieldReport function_field_experiment(const BivariatePoly& curve, const std::vector<u64>& primes, i64 hmax) {
  if (hmax < 1) throw Error("ffield: hmax must be at least 1");
  FunctionFieldReport out;
  out.curve = curve.to_string();
  std::vector<double> xs, ys;
  bool usable = true;
  for (u64 p : primes) {
    FunctionFieldRow row;
    row.p = p;
    const FunctionFieldSums zero = function_field_sums(curve, p, 0);
    row.Z_p = zero.Z_p;
    row.points = zero.points;
    row.c1_at_zero = zero.c1.real();
    for (i64 h = 1; h <= hmax; ++h) {
      row.sums.push_back(function_field_sums(curve, p, h));
      row.max_abs_c2 = std::max(row.max_abs_c2, std::abs(row.sums.back().c2));
      row.max_abs_c1 = std::max(row.max_abs_c1, std::abs(row.sums.back().c1));
    }
    xs.push_back(static_cast<double>(p));
    ys.push_back(row.max_abs_c2);
    // Sums that cancel exactly come out as rounding noise; no slope through those.
    usable = usable && row.max_abs_c2 > kVanishingSum;
    out.rows.push_back(std::move(row));
  }
  if (usable && xs.size() >= 2) out.c2_exponent = loglog_slope(xs, ys);
  return out;
}

}  // namespace crteq
