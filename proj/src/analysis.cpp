#include "crteq/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "crteq/parallel.hpp"

namespace crteq {

Complex unit_phase(u64 r, u64 q) {
  r %= q;
  if (r == 0) return {1.0, 0.0};
  // Symmetric representative keeps the angle small.
  const double s = r > q / 2 ? -static_cast<double>(q - r) : static_cast<double>(r);
  const double angle = 2.0 * std::numbers::pi * s / static_cast<double>(q);
  return {std::cos(angle), std::sin(angle)};
}

namespace {

std::vector<u64> reduce_frequency(std::span<const i64> h, u64 q) {
  std::vector<u64> r(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) r[i] = reduce(h[i], q);
  return r;
}

u64 dot_mod(std::span<const u64> h, std::span<const u64> x, u64 q) {
  u128 acc = 0;
  for (std::size_t i = 0; i < h.size(); ++i) acc = (acc + static_cast<u128>(h[i]) * x[i]) % q;
  return static_cast<u64>(acc);
}

}  // namespace

Complex weyl_sum(const ResidueSet& rs, std::span<const i64> h) {
  if (rs.points.empty()) throw Error("weyl_sum: A_q is empty");
  if (h.size() != rs.dim()) throw Error("weyl_sum: frequency dimension mismatch");
  const std::vector<u64> hr = reduce_frequency(h, rs.q);
  Complex sum{0.0, 0.0};
  for (std::size_t i = 0; i < rs.points.size(); ++i) sum += unit_phase(dot_mod(hr, rs.points[i], rs.q), rs.q);
  return sum / static_cast<double>(rs.points.size());
}

u64 sup_norm(std::span<const i64> h) {
  u64 m = 0;
  for (i64 c : h) m = std::max<u64>(m, static_cast<u64>(c < 0 ? -c : c));
  return m;
}

u64 m_weight(std::span<const i64> h) {
  u64 w = 1;
  for (i64 c : h) w *= std::max<u64>(1, static_cast<u64>(c < 0 ? -c : c));
  return w;
}

const WeylEntry* WeylSpectrum::find(std::span<const i64> h) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), h, [](const WeylEntry& e, std::span<const i64> key) {
    return std::lexicographical_compare(e.h.begin(), e.h.end(), key.begin(), key.end());
  });
  if (it == entries.end() || !std::equal(h.begin(), h.end(), it->h.begin(), it->h.end())) return nullptr;
  return &*it;
}

WeylSpectrum weyl_spectrum(const ResidueSet& rs, u64 H) {
  if (H == 0) throw Error("weyl_spectrum: H must be at least 1");
  WeylSpectrum ws;
  ws.q = rs.q;
  ws.dim = rs.dim();
  ws.H = H;
  const unsigned n = rs.dim();
  std::vector<i64> h(n, -static_cast<i64>(H));
  for (;;) {
    if (sup_norm(h) != 0) ws.entries.push_back({h, weyl_sum(rs, h)});
    unsigned c = n;
    while (c-- > 0) {
      if (h[c] < static_cast<i64>(H)) {
        ++h[c];
        break;
      }
      h[c] = -static_cast<i64>(H);
    }
    if (c == static_cast<unsigned>(-1)) break;
  }
  return ws;
}

u64 h_bracket(std::span<const i64> h, const Factorization& q) {
  if (sup_norm(h) == 0) throw Error("h_bracket: h must be nonzero");
  u64 b = 1;
  for (const PrimePower& pp : q.parts) {
    const bool divisible = std::all_of(h.begin(), h.end(), [&](i64 c) { return reduce(c, pp.value) == 0; });
    if (!divisible) b *= pp.value;
  }
  return b;
}

u64 h_bracket(std::span<const i64> h, u64 q) { return h_bracket(h, factorize(q)); }

SecondMomentCheck second_moment_check(const LocalSystem& system, u64 q, std::span<const i64> h) {
  if (h.size() != system.dim()) throw Error("second_moment_check: frequency dimension mismatch");
  const ResidueSet rs = build_A_q(system, q);
  if (rs.points.empty()) throw Error("second_moment_check: rho(q) = 0 for q = " + std::to_string(q));
  SecondMomentCheck out;
  out.bracket = h_bracket(h, rs.factorization);

  const std::vector<u64> hr = reduce_frequency(h, q);
  std::vector<u64> phase(rs.points.size());
  for (std::size_t i = 0; i < rs.points.size(); ++i) phase[i] = dot_mod(hr, rs.points[i], q);
  CompensatedSum total;
  const double inv_rho = 1.0 / static_cast<double>(rs.points.size());
  for (u64 a = 0; a < q; ++a) {
    Complex w{0.0, 0.0};
    for (u64 r : phase) w += unit_phase(static_cast<u64>(static_cast<u128>(a) * r % q), q);
    w *= inv_rho;
    total.add(std::norm(w));
  }
  out.lhs = total.value() / static_cast<double>(q);

  Factorization sub;
  sub.q = out.bracket;
  for (const PrimePower& pp : rs.factorization.parts) {
    if (out.bracket % pp.value == 0) sub.parts.push_back(pp);
  }
  out.rhs = static_cast<double>(lambda_q(system, sub)) / static_cast<double>(rho(system, sub));
  out.pass = out.lhs <= out.rhs + kSecondMomentSlack;
  return out;
}

std::string_view to_string(DiscMethod m) {
  switch (m) {
    case DiscMethod::exact: return "exact";
    case DiscMethod::erdos_turan: return "erdos_turan";
    case DiscMethod::sampled: return "sampled";
  }
  return "?";
}

DiscrepancyResult interval_discrepancy(const TorusPointSet& ps) {
  if (ps.dim() != 1) throw Error("interval_discrepancy: point set must be one-dimensional");
  if (ps.size() == 0) throw Error("interval_discrepancy: empty point set");
  const u64 q = ps.q;
  const auto coords = ps.numerators.flat();  // sorted, distinct
  const i128 total = static_cast<i128>(coords.size());

  // Scaled by N q: A_j = S_{j+1} q - u_j N, B_i = S_i q - u_i N, where S_k is
  // the number of atoms before index k. Deviation of the closed arc from u_i
  // to u_j (forward) is (A_j - B_i) / (N q).
  i128 best_a = 0, best_b = 0;
  std::size_t arg_a = 0, arg_b = 0;
  for (std::size_t k = 0; k < coords.size(); ++k) {
    const i128 u = static_cast<i128>(coords[k]) * total;
    const i128 a = static_cast<i128>(k + 1) * q - u;
    const i128 b = static_cast<i128>(k) * q - u;
    if (k == 0 || a > best_a) best_a = a, arg_a = k;
    if (k == 0 || b < best_b) best_b = b, arg_b = k;
  }
  const i128 num = best_a - best_b;
  const long double value = static_cast<long double>(num) / (static_cast<long double>(total) * q);

  DiscrepancyResult out;
  out.method = DiscMethod::exact;
  out.q = q;
  out.lower = out.upper = static_cast<double>(value);
  const u64 start = coords[arg_b], end = coords[arg_a];
  out.witness = std::vector<Arc>{Arc{start, (end + q - start) % q, true}};
  return out;
}

namespace {

struct BoxSearch {
  const TorusPointSet& ps;
  unsigned n;
  u64 q;
  i128 q_pow_n;
  i128 total;
  std::vector<std::vector<u64>> coords;  // distinct sorted coordinates per axis

  explicit BoxSearch(const TorusPointSet& set) : ps(set), n(set.dim()), q(set.q), total(set.size()) {
    q_pow_n = 1;
    for (unsigned i = 0; i < n; ++i) q_pow_n *= q;
    coords.resize(n);
    for (unsigned c = 0; c < n; ++c) {
      auto& axis = coords[c];
      for (std::size_t i = 0; i < ps.size(); ++i) axis.push_back(ps.numerators[i][c]);
      std::sort(axis.begin(), axis.end());
      axis.erase(std::unique(axis.begin(), axis.end()), axis.end());
    }
  }

  [[nodiscard]] Arc arc(unsigned axis, std::size_t a, std::size_t b, bool closed) const {
    const u64 ca = coords[axis][a], cb = coords[axis][b];
    u64 len = (cb + q - ca) % q;
    if (!closed && a == b) len = q;
    return {ca, len, closed};
  }

  [[nodiscard]] bool inside(const Arc& arc, u64 x) const {
    const u64 off = (x + q - arc.start) % q;
    return arc.closed ? off <= arc.length : (off > 0 && off < arc.length);
  }

  // Signed deviation numerator scaled by N q^n: positive side counts closed
  // boxes, negative side open boxes.
  [[nodiscard]] i128 deviation(const std::vector<Arc>& box, bool positive) const {
    i128 vol = 1;
    for (const Arc& a : box) vol *= a.length;
    i128 count = 0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const auto pt = ps.numerators[i];
      bool in = true;
      for (unsigned c = 0; c < n && in; ++c) in = inside(box[c], pt[c]);
      count += in;
    }
    const i128 mass = count * q_pow_n, measure = total * vol;
    return positive ? mass - measure : measure - mass;
  }

  i128 best = -1;
  std::vector<Arc> best_box;

  void exhaust(unsigned axis, bool positive, std::vector<Arc>& box, const std::vector<std::size_t>& members, i128 vol) {
    if (axis == n) {
      const i128 mass = static_cast<i128>(members.size()) * q_pow_n, measure = total * vol;
      const i128 dev = positive ? mass - measure : measure - mass;
      if (dev > best) {
        best = dev;
        best_box = box;
      }
      return;
    }
    const std::size_t m = coords[axis].size();
    std::vector<std::size_t> kept;
    kept.reserve(members.size());
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b) {
        box[axis] = arc(axis, a, b, positive);
        kept.clear();
        for (std::size_t idx : members) {
          if (inside(box[axis], ps.numerators[idx][axis])) kept.push_back(idx);
        }
        exhaust(axis + 1, positive, box, kept, vol * box[axis].length);
      }
    }
  }

  [[nodiscard]] double work() const {
    double w = 2.0 * static_cast<double>(total);
    for (const auto& axis : coords) w *= static_cast<double>(axis.size()) * static_cast<double>(axis.size());
    return w;
  }

  [[nodiscard]] double to_value(i128 num) const {
    return static_cast<double>(static_cast<long double>(num) /
                               (static_cast<long double>(total) * static_cast<long double>(q_pow_n)));
  }
};

double log2_of(u64 v) { return std::log2(static_cast<double>(std::max<u64>(v, 1))); }

u64 auto_cutoff(unsigned n, std::size_t points, double max_work) {
  u64 H = 1;
  while (H < 64) {
    const double next = std::pow(2.0 * static_cast<double>(H + 1) + 1.0, n) * static_cast<double>(points);
    if (next > max_work) break;
    ++H;
  }
  return H;
}

}  // namespace

DiscrepancyResult box_discrepancy(const TorusPointSet& ps, BoxMode mode, const BoxBudget& budget) {
  if (ps.size() == 0) throw Error("box_discrepancy: empty point set");
  if (static_cast<double>(ps.dim()) * log2_of(ps.q) + log2_of(ps.size()) > 120.0) {
    throw Error("box_discrepancy: q^n * N exceeds exact integer range");
  }
  BoxSearch search(ps);
  DiscrepancyResult out;
  out.q = ps.q;

  if (mode == BoxMode::exact) {
    if (search.work() > budget.max_work) {
      throw BudgetError("exact box discrepancy needs about " + std::to_string(static_cast<u64>(search.work())) +
                        " point tests (budget " + std::to_string(static_cast<u64>(budget.max_work)) +
                        "); use bounds mode");
    }
    std::vector<std::size_t> all(ps.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    std::vector<Arc> box(search.n);
    search.exhaust(0, true, box, all, 1);
    search.exhaust(0, false, box, all, 1);
    out.method = DiscMethod::exact;
    out.lower = out.upper = search.to_value(search.best);
    out.witness = search.best_box;
    return out;
  }

  std::mt19937_64 rng(budget.seed);
  std::vector<Arc> box(search.n);
  for (u64 s = 0; s < budget.samples; ++s) {
    const bool positive = (rng() & 1) == 0;
    for (unsigned c = 0; c < search.n; ++c) {
      const std::size_t m = search.coords[c].size();
      box[c] = search.arc(c, rng() % m, rng() % m, positive);
    }
    const i128 dev = search.deviation(box, positive);
    if (dev > search.best) {
      search.best = dev;
      search.best_box = box;
    }
  }
  const u64 H = budget.H > 0 ? budget.H : auto_cutoff(search.n, ps.size(), budget.max_work);
  const ResidueSet rs{ps.q, factorize(ps.q), ps.numerators};
  out.method = DiscMethod::sampled;
  out.lower = std::max(0.0, search.to_value(search.best));
  out.upper = erdos_turan_bound(weyl_spectrum(rs, H));
  out.witness = search.best_box;
  out.H = H;
  out.seed = budget.seed;
  return out;
}

double erdos_turan_constant(unsigned n) { return std::pow(1.5, static_cast<double>(n)); }

double erdos_turan_bound(const WeylSpectrum& ws) {
  if (ws.H == 0) throw Error("erdos_turan_bound: H must be at least 1");
  CompensatedSum sum;
  sum.add(1.0 / static_cast<double>(ws.H));
  for (const WeylEntry& e : ws.entries) {
    if (sup_norm(e.h) > ws.H) continue;
    sum.add(std::abs(e.value) / static_cast<double>(m_weight(e.h)));
  }
  return std::clamp(erdos_turan_constant(ws.dim) * sum.value(), 0.0, 1.0);
}

PrimeSums prime_sums(const LocalSystem& system, u64 x) {
  PrimeSums out;
  out.x = x;
  CompensatedSum ge1, ge2, damped, ratio, sqrt_ratio;
  for (u64 p : sieve_primes(x)) {
    const PrimePower pp{p, 1, p};
    const u64 r = system.local_set(pp)->size();
    if (r == 0) continue;
    ++out.primes_in_Q;
    const double inv = 1.0 / static_cast<double>(p);
    const double t = static_cast<double>(lambda_local(system, pp)) / static_cast<double>(r);
    ge1.add(inv);
    if (r >= 2) ge2.add(inv);
    damped.add((1.0 - t) * inv);
    ratio.add(t * inv);
    sqrt_ratio.add(std::sqrt(t) * inv);
  }
  out.inv_rho_ge1 = ge1.value();
  out.inv_rho_ge2 = ge2.value();
  out.damped = damped.value();
  out.lambda_ratio = ratio.value();
  out.sqrt_ratio = sqrt_ratio.value();
  return out;
}

double script_P(const LocalSystem& system, u64 x) {
  if (x < 2) throw Error("script_P: x must be at least 2");
  return prime_sums(system, x).inv_rho_ge1 + 3.0;
}

double script_P_tilde(const LocalSystem& system, u64 x) {
  if (x < 2) throw Error("script_P_tilde: x must be at least 2");
  return prime_sums(system, x).sqrt_ratio + 3.0;
}

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

TheoremBound theorem_rhs_unchecked(const PrimeSums& sums, unsigned dim, const TheoremQuery& query) {
  TheoremBound out;
  out.id = query.id;
  auto violate = [&](std::string what) { out.violations.push_back(std::move(what)); };
  if (query.alpha <= 0.0) violate("alpha must be positive");
  if (query.x < 2) violate("x must be at least 2");
  const double alpha = query.alpha > 0.0 ? query.alpha : 1.0;
  const double x = static_cast<double>(query.x);
  const double loglog = query.x >= 3 ? std::log(std::log(x)) : 0.0;

  switch (query.id) {
    case 1:
      out.exponent_sum = sums.inv_rho_ge2;
      out.factor = std::exp(-out.exponent_sum / 6.0);
      break;
    case 2:
      out.exponent_sum = sums.damped;
      out.factor = std::exp(-out.exponent_sum / 3.0);
      break;
    case 3: {
      out.exponent_sum = sums.damped;
      if (loglog <= 0.0) {
        violate("x must exceed e so that log log x > 0");
        break;
      }
      const double largest = std::min(1.0, sums.damped / loglog);
      const double delta = query.delta.value_or(largest);
      out.delta = delta;
      if (!(delta > 0.0 && delta <= 1.0)) violate("need 0 < delta <= 1, got delta = " + fmt_double(delta));
      if (sums.damped < delta * loglog) {
        violate("sum (1 - lambda/rho)/p = " + fmt_double(sums.damped) + " < delta log log x = " +
                fmt_double(delta * loglog));
      }
      if (!query.k) {
        violate("k is required");
        break;
      }
      const double k = *query.k;
      const double c = 20.0 * (6.0 + dim) / std::max(delta, 1e-300);
      const double k_lo = c * std::log(c);
      const double k_hi = std::exp(std::sqrt(alpha * std::max(delta, 0.0) * loglog / (20.0 * (6.0 + dim))));
      if (k < k_lo) violate("k = " + std::to_string(*query.k) + " < 20(6+n)/delta log(20(6+n)/delta) = " + fmt_double(k_lo));
      if (k > k_hi) violate("k = " + std::to_string(*query.k) + " > exp(sqrt(alpha delta log log x / (20(6+n)))) = " + fmt_double(k_hi));
      out.factor = std::exp(-delta * k / 18.0) + std::pow(std::log(x), -alpha * delta / 18.0);
      break;
    }
    case 4: {
      out.exponent_sum = sums.lambda_ratio;
      if (loglog <= 0.0) {
        violate("x must exceed e so that log log x > 0");
        break;
      }
      const double needed = sums.inv_rho_ge1 > 0.0 ? sums.lambda_ratio / sums.inv_rho_ge1 : 0.0;
      const double delta = query.delta.value_or(std::max(needed, 1.0 / loglog));
      out.delta = delta;
      if (delta < 1.0 / loglog) violate("delta = " + fmt_double(delta) + " < 1 / log log x = " + fmt_double(1.0 / loglog));
      if (delta > 1.0 / std::numbers::e) violate("delta = " + fmt_double(delta) + " > 1/e");
      if (sums.lambda_ratio > delta * sums.inv_rho_ge1) {
        violate("sum (lambda/rho)/p = " + fmt_double(sums.lambda_ratio) + " > delta sum 1/p = " +
                fmt_double(delta * sums.inv_rho_ge1));
      }
      if (!query.k) {
        violate("k is required");
        break;
      }
      const double k = *query.k;
      if (k < 2) violate("k = " + std::to_string(*query.k) + " < 2");
      if (k > alpha * delta * loglog) {
        violate("k = " + std::to_string(*query.k) + " > alpha delta log log x = " + fmt_double(alpha * delta * loglog));
      }
      out.factor = std::pow(delta, (k - 1.0) / 10.0);
      break;
    }
    default:
      throw Error("theorem id must be 1, 2, 3 or 4");
  }
  out.value = out.factor / alpha;
  return out;
}

TheoremBound theorem_rhs_unchecked(const LocalSystem& system, const TheoremQuery& query) {
  return theorem_rhs_unchecked(prime_sums(system, query.x), system.dim(), query);
}

TheoremBound theorem_rhs(const LocalSystem& system, const TheoremQuery& query) {
  TheoremBound out = theorem_rhs_unchecked(system, query);
  if (!out.violations.empty()) {
    throw RangeError("theorem " + std::to_string(query.id) + " range violated: " + out.violations.front());
  }
  return out;
}

Rational parse_rational(const std::string& text) {
  auto bad = [&]() -> Error { return Error("bad rational '" + text + "'"); };
  if (text.empty()) throw bad();
  i64 num = 0;
  u64 den = 1;
  try {
    if (const auto slash = text.find('/'); slash != std::string::npos) {
      std::size_t used = 0;
      num = std::stoll(text.substr(0, slash), &used);
      if (used != slash) throw bad();
      const std::string d = text.substr(slash + 1);
      den = std::stoull(d, &used);
      if (used != d.size() || den == 0 || d.front() == '-') throw bad();
    } else if (const auto dot = text.find('.'); dot != std::string::npos) {
      const std::string whole = text.substr(0, dot), frac = text.substr(dot + 1);
      if (frac.empty() || frac.size() > 15 || frac.find_first_not_of("0123456789") != std::string::npos) throw bad();
      const bool negative = !whole.empty() && whole.front() == '-';
      std::size_t used = 0;
      const i64 w = (whole.empty() || whole == "-") ? 0 : std::stoll(whole, &used);
      if (!whole.empty() && whole != "-" && used != whole.size()) throw bad();
      for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
      const i64 f = std::stoll(frac);
      num = (negative ? -1 : 1) * ((w < 0 ? -w : w) * static_cast<i64>(den) + f);
    } else {
      std::size_t used = 0;
      num = std::stoll(text, &used);
      if (used != text.size()) throw bad();
    }
  } catch (const std::logic_error&) {
    throw bad();
  }
  const u64 g = gcd(static_cast<u64>(num < 0 ? -num : num), den);
  if (g > 1) {
    num /= static_cast<i64>(g);
    den /= g;
  }
  return {num, den};
}

bool Region::contains(std::span<const u64> numerators, u64 q) const {
  for (std::size_t i = 0; i < numerators.size(); ++i) {
    const i128 a = numerators[i];
    if (static_cast<i128>(lo[i].num) * q > a * lo[i].den) return false;
    if (a * hi[i].den > static_cast<i128>(hi[i].num) * q) return false;
  }
  return true;
}

double Region::volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < lo.size(); ++i) {
    v *= static_cast<double>(hi[i].num) / static_cast<double>(hi[i].den) -
         static_cast<double>(lo[i].num) / static_cast<double>(lo[i].den);
  }
  return v;
}

std::string_view to_string(Weighting w) { return w == Weighting::uniform ? "uniform" : "rho"; }

Weighting parse_weighting(std::string_view name) {
  if (name == "uniform") return Weighting::uniform;
  if (name == "rho") return Weighting::rho;
  throw Error("unknown weighting '" + std::string(name) + "' (expected uniform|rho)");
}

DiscrepancyResult discrepancy_of(const ResidueSet& rs, const DiscOptions& options) {
  const TorusPointSet ps = fractional_points(rs);
  if (ps.dim() == 1) return interval_discrepancy(ps);
  if (options.mode == BoxMode::exact) {
    try {
      return box_discrepancy(ps, BoxMode::exact, options.budget);
    } catch (const BudgetError&) {
      // fall through to bounds for this modulus
    }
  }
  if (options.et_only) {
    DiscrepancyResult out;
    out.method = DiscMethod::erdos_turan;
    out.q = rs.q;
    const u64 H = options.budget.H > 0 ? options.budget.H
                                        : auto_cutoff(ps.dim(), ps.size(), options.budget.max_work);
    out.lower = 0.0;
    out.upper = erdos_turan_bound(weyl_spectrum(rs, H));
    out.H = H;
    return out;
  }
  return box_discrepancy(ps, BoxMode::bounds, options.budget);
}

AggregateStats aggregate_measure_stats(const LocalSystem& system, u64 x, Weighting weighting,
                                       std::optional<unsigned> k, const std::optional<Region>& region,
                                       const DiscOptions& options, unsigned threads) {
  if (region && (region->lo.size() != system.dim() || region->hi.size() != system.dim())) {
    throw Error("aggregate_measure_stats: region dimension mismatch");
  }
  const ModulusSet moduli = enumerate_Q(system, x, k);
  if (moduli.members.empty()) throw Error("aggregate_measure_stats: Q(x) is empty");
  const FactorTable table(x);

  AggregateStats out;
  out.weighting = weighting;
  out.x = x;
  out.k = k;
  out.moduli = moduli.members.size();
  out.per_q.resize(moduli.members.size());
  parallel_for(moduli.members.size(), threads, [&](std::size_t i) {
    const Factorization f = table.factorize(moduli.members[i]);
    const ResidueSet rs = build_A_q(system, f);
    QStat& stat = out.per_q[i];
    stat.q = rs.q;
    stat.rho = rs.rho();
    stat.omega = static_cast<unsigned>(f.omega());
    stat.disc = discrepancy_of(rs, options);
    if (region) {
      for (std::size_t j = 0; j < rs.points.size(); ++j) stat.region_count += region->contains(rs.points[j], rs.q);
    }
  });

  CompensatedSum disc, mass;
  for (const QStat& s : out.per_q) out.total_weight += s.rho;
  for (const QStat& s : out.per_q) {
    if (weighting == Weighting::uniform) {
      disc.add(s.disc.value());
      mass.add(static_cast<double>(s.region_count) / static_cast<double>(s.rho));
    } else {
      disc.add(static_cast<double>(s.rho) * s.disc.value());
      mass.add(static_cast<double>(s.region_count));
    }
  }
  const double norm = weighting == Weighting::uniform ? static_cast<double>(out.moduli)
                                                      : static_cast<double>(out.total_weight);
  out.average_disc = disc.value() / norm;
  if (region) out.region_mass = mass.value() / norm;
  return out;
}

}  // namespace crteq
