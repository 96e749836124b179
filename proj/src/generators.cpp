#include "crteq/generators.hpp"
#include "crteq/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "poly_mod.hpp"

namespace crteq {

namespace {

i64 parse_i64(std::string_view token) {
  std::string s(token);
  const auto first = s.find_first_not_of(" \t");
  const auto last = s.find_last_not_of(" \t");
  if (first == std::string::npos) throw Error("empty coefficient");
  s = s.substr(first, last - first + 1);
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::logic_error&) {
    throw Error("bad integer '" + s + "'");
  }
  if (used != s.size()) throw Error("bad integer '" + s + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<u64> reduced_coefficients(const IntPolynomial& f, u64 m) {
  std::vector<u64> r;
  r.reserve(f.coefficients().size());
  for (i64 c : f.coefficients()) r.push_back(reduce(c, m));
  return r;
}

u64 horner(const std::vector<u64>& coeffs, u64 x, u64 m) {
  u128 acc = 0;
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = (acc * x + coeffs[i]) % m;
  return static_cast<u64>(acc);
}

i64 checked_add(i64 a, i64 b) {
  i64 r;
  if (__builtin_add_overflow(a, b, &r)) throw Error("polynomial coefficient overflow");
  return r;
}

i64 checked_mul(i64 a, i64 b) {
  i64 r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error("polynomial coefficient overflow");
  return r;
}

}  // namespace

IntPolynomial::IntPolynomial(std::vector<i64> coefficients) : coeffs_(std::move(coefficients)) {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

IntPolynomial IntPolynomial::parse(std::string_view text) {
  std::vector<i64> coeffs;
  for (std::string_view tok : split(text, ',')) coeffs.push_back(parse_i64(tok));
  return IntPolynomial(std::move(coeffs));
}

u64 IntPolynomial::eval_mod(u64 x, u64 m) const { return horner(reduced_coefficients(*this, m), x % m, m); }

bool IntPolynomial::is_zero_mod(u64 m) const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [m](i64 c) { return reduce(c, m) == 0; });
}

IntPolynomial IntPolynomial::derivative() const {
  std::vector<i64> d;
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d.push_back(checked_mul(coeffs_[i], static_cast<i64>(i)));
  return IntPolynomial(std::move(d));
}

IntPolynomial IntPolynomial::compose(const IntPolynomial& inner) const {
  std::vector<i64> acc;
  for (std::size_t i = coeffs_.size(); i-- > 0;) {
    // acc = acc * inner + c_i
    std::vector<i64> next(acc.empty() ? 1 : acc.size() + inner.coeffs_.size() - 1, 0);
    for (std::size_t a = 0; a < acc.size(); ++a) {
      for (std::size_t b = 0; b < inner.coeffs_.size(); ++b) {
        next[a + b] = checked_add(next[a + b], checked_mul(acc[a], inner.coeffs_[b]));
      }
    }
    next[0] = checked_add(next[0], coeffs_[i]);
    acc = std::move(next);
    while (!acc.empty() && acc.back() == 0) acc.pop_back();
  }
  return IntPolynomial(std::move(acc));
}

std::string IntPolynomial::to_string() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream out;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) out << (i ? "," : "") << coeffs_[i];
  return out.str();
}

BivariatePoly::BivariatePoly(std::map<std::pair<unsigned, unsigned>, i64> terms) {
  for (auto& [key, c] : terms) {
    if (c != 0) terms_[key] = c;
  }
}

BivariatePoly BivariatePoly::parse(std::string_view text) {
  std::map<std::pair<unsigned, unsigned>, i64> terms;
  for (std::string_view term : split(text, ';')) {
    if (term.find_first_not_of(" \t") == std::string_view::npos) continue;
    const auto parts = split(term, ',');
    if (parts.size() != 3) throw Error("bivariate term must be `coef,degX,degY`: '" + std::string(term) + "'");
    const i64 dx = parse_i64(parts[1]), dy = parse_i64(parts[2]);
    if (dx < 0 || dy < 0) throw Error("negative degree in bivariate term");
    auto& slot = terms[{static_cast<unsigned>(dx), static_cast<unsigned>(dy)}];
    slot = checked_add(slot, parse_i64(parts[0]));
  }
  return BivariatePoly(std::move(terms));
}

unsigned BivariatePoly::degree_x() const {
  unsigned d = 0;
  for (const auto& [key, c] : terms_) d = std::max(d, key.first);
  return d;
}

unsigned BivariatePoly::degree_y() const {
  unsigned d = 0;
  for (const auto& [key, c] : terms_) d = std::max(d, key.second);
  return d;
}

u64 BivariatePoly::eval_mod(u64 x, u64 y, u64 m) const {
  u128 acc = 0;
  for (const auto& [key, c] : terms_) {
    u128 t = reduce(c, m);
    t = t * pow_mod(x, key.first, m) % m;
    t = t * pow_mod(y, key.second, m) % m;
    acc = (acc + t) % m;
  }
  return static_cast<u64>(acc);
}

bool BivariatePoly::is_zero_mod(u64 m) const {
  return std::all_of(terms_.begin(), terms_.end(), [m](const auto& kv) { return reduce(kv.second, m) == 0; });
}

std::string BivariatePoly::to_string() const {
  std::ostringstream out;
  bool first = true;
  for (const auto& [key, c] : terms_) {
    out << (first ? "" : ";") << c << ',' << key.first << ',' << key.second;
    first = false;
  }
  return first ? "0,0,0" : out.str();
}

PseudoPoly parse_pseudo_poly(std::string_view name) {
  if (name == "f1") return PseudoPoly::f1;
  if (name == "f2") return PseudoPoly::f2;
  if (name == "f3") return PseudoPoly::f3;
  throw Error("unknown pseudo-polynomial '" + std::string(name) + "' (expected f1|f2|f3)");
}

std::string_view to_string(PseudoPoly which) {
  switch (which) {
    case PseudoPoly::f1: return "f1";
    case PseudoPoly::f2: return "f2";
    case PseudoPoly::f3: return "f3";
  }
  return "?";
}

std::vector<u64> poly_roots_mod_p(const IntPolynomial& f, u64 p, u64 scan_limit) {
  if (f.is_zero_mod(p)) throw Error("polynomial " + f.to_string() + " vanishes identically mod " + std::to_string(p));
  const std::vector<u64> coeffs = reduced_coefficients(f, p);
  if (p <= scan_limit) {
    std::vector<u64> out;
    for (u64 a = 0; a < p; ++a) {
      if (horner(coeffs, a, p) == 0) out.push_back(a);
    }
    return out;
  }
  return polymod::roots(coeffs, p);
}

std::vector<u64> poly_roots_mod_pv(const IntPolynomial& f, u64 p, unsigned v) {
  if (v == 0) throw Error("poly_roots_mod_pv: exponent must be positive");
  const u64 pv = checked_pow(p, v);
  (void)pv;
  std::vector<u64> roots = poly_roots_mod_p(f, p);
  const IntPolynomial df = f.derivative();
  u64 modulus = p;
  for (unsigned level = 1; level < v && !roots.empty(); ++level) {
    const u64 next_mod = modulus * p;
    const std::vector<u64> coeffs = reduced_coefficients(f, next_mod);
    std::vector<u64> lifted;
    for (u64 r : roots) {
      const u64 deriv = df.eval_mod(r, p);
      if (deriv != 0) {
        const u64 fr = horner(coeffs, r, next_mod);
        const u64 dr = df.eval_mod(r, next_mod);
        const u64 step = mul_mod(fr, mod_inverse(static_cast<i64>(dr), next_mod), next_mod);
        lifted.push_back((r + next_mod - step) % next_mod);
      } else {
        for (u64 t = 0; t < p; ++t) {
          const u64 c = r + t * modulus;
          if (horner(coeffs, c, next_mod) == 0) lifted.push_back(c);
        }
      }
    }
    std::sort(lifted.begin(), lifted.end());
    roots = std::move(lifted);
    modulus = next_mod;
  }
  return roots;
}

LocalSystem roots_system(const IntPolynomial& f) {
  return LocalSystem(
      1, [f](const PrimePower& pp) { return PointSet::from_rows(1, poly_roots_mod_pv(f, pp.p, pp.v)); },
      LocalSystem::kUnbounded, "roots(" + f.to_string() + ")");
}

LocalSystem veronese_system(const IntPolynomial& f, unsigned d) {
  if (d < 2) throw Error("veronese_system: d must be at least 2");
  const unsigned n = d - 1;
  return LocalSystem(
      n,
      [f, n](const PrimePower& pp) {
        std::vector<u64> flat;
        for (u64 a : poly_roots_mod_pv(f, pp.p, pp.v)) {
          u64 power = 1;
          for (unsigned i = 0; i < n; ++i) {
            power = mul_mod(power, a, pp.value);
            flat.push_back(power);
          }
        }
        return PointSet::from_rows(n, std::move(flat));
      },
      LocalSystem::kUnbounded, "veronese(" + f.to_string() + ";d=" + std::to_string(d) + ")");
}

LocalSystem image_system(const IntPolynomial& f, const IntPolynomial& g) {
  return LocalSystem(
      1,
      [f, g](const PrimePower& pp) {
        std::vector<u64> flat;
        for (u64 a : poly_roots_mod_pv(f, pp.p, pp.v)) flat.push_back(g.eval_mod(a, pp.value));
        return PointSet::from_rows(1, std::move(flat));
      },
      LocalSystem::kUnbounded, "image(" + f.to_string() + ";" + g.to_string() + ")");
}

LocalSystem graph_system(const IntPolynomial& f, const IntPolynomial& g) {
  return LocalSystem(
      2,
      [f, g](const PrimePower& pp) {
        std::vector<u64> flat;
        for (u64 a : poly_roots_mod_pv(f, pp.p, pp.v)) {
          flat.push_back(a);
          flat.push_back(g.eval_mod(a, pp.value));
        }
        return PointSet::from_rows(2, std::move(flat));
      },
      LocalSystem::kUnbounded, "graph(" + f.to_string() + ";" + g.to_string() + ")");
}

namespace {

// Zeros of all `curves` in (Z/mZ)^2; each curve is evaluated as a polynomial
// in Y whose coefficients are fixed once per x.
PointSet scan_curves(const std::vector<BivariatePoly>& curves, const PrimePower& pp, u64 budget) {
  const u64 m = pp.value;
  if (m > budget / m) {
    throw Error("curve scan of (Z/" + std::to_string(m) + ")^2 exceeds the scan budget of " + std::to_string(budget));
  }
  for (const BivariatePoly& c : curves) {
    if (c.is_zero_mod(pp.p)) throw Error("curve " + c.to_string() + " vanishes identically mod " + std::to_string(pp.p));
  }
  std::vector<u64> flat;
  std::vector<std::vector<u64>> ycoeffs(curves.size());
  for (u64 x = 0; x < m; ++x) {
    for (std::size_t k = 0; k < curves.size(); ++k) {
      auto& yc = ycoeffs[k];
      yc.assign(curves[k].degree_y() + 1, 0);
      for (const auto& [key, c] : curves[k].terms()) {
        const u128 t = static_cast<u128>(reduce(c, m)) * pow_mod(x, key.first, m) % m;
        yc[key.second] = static_cast<u64>((yc[key.second] + t) % m);
      }
    }
    for (u64 y = 0; y < m; ++y) {
      bool all_zero = true;
      for (const auto& yc : ycoeffs) {
        if (horner(yc, y, m) != 0) {
          all_zero = false;
          break;
        }
      }
      if (all_zero) {
        flat.push_back(x);
        flat.push_back(y);
      }
    }
  }
  return PointSet::from_rows(2, std::move(flat));
}

}  // namespace

LocalSystem bezout_system(const BivariatePoly& first, const BivariatePoly& second, u64 scan_budget) {
  std::vector<BivariatePoly> curves{first, second};
  return LocalSystem(
      2, [curves, scan_budget](const PrimePower& pp) { return scan_curves(curves, pp, scan_budget); },
      LocalSystem::kUnbounded, "bezout(" + first.to_string() + "|" + second.to_string() + ")");
}

LocalSystem curve_system(const BivariatePoly& curve, u64 scan_budget) {
  std::vector<BivariatePoly> curves{curve};
  return LocalSystem(
      2, [curves, scan_budget](const PrimePower& pp) { return scan_curves(curves, pp, scan_budget); },
      LocalSystem::kUnbounded, "curve(" + curve.to_string() + ")");
}

u64 pseudo_poly_value(PseudoPoly which, u64 n, u64 m) {
  if (m == 0) throw Error("pseudo_poly_value: modulus must be positive");
  if (which == PseudoPoly::f1) {
    if (n == 0) throw Error("pseudo_poly_value: f1 is defined for n >= 1");
    u64 f = 2 % m;
    for (u64 k = 2; k <= n; ++k) f = static_cast<u64>((1 + static_cast<u128>(k % m) * f) % m);
    return f;
  }
  u64 f = 1 % m;
  for (u64 k = 1; k <= n; ++k) {
    // f2(k) = 1 - k f2(k-1)
    const u64 t = mul_mod(k % m, f, m);
    f = (1 % m + m - t) % m;
  }
  return which == PseudoPoly::f3 ? (f + m - 1 % m) % m : f;
}

std::vector<u64> pseudo_poly_roots(PseudoPoly which, u64 m) {
  if (m == 0) throw Error("pseudo_poly_roots: modulus must be positive");
  std::vector<u64> out;
  if (m == 1) return {0};
  if (which == PseudoPoly::f1) {
    u64 f = 2 % m;
    for (u64 n = 1;; ++n) {
      if (f == 0) out.push_back(n % m);
      if (n == m) break;
      f = static_cast<u64>((1 + static_cast<u128>(n + 1) * f) % m);
    }
    std::sort(out.begin(), out.end());
    return out;
  }
  const u64 target = which == PseudoPoly::f3 ? 1 : 0;  // f3 = f2 - 1
  u64 f = 1;
  for (u64 n = 0; n < m; ++n) {
    if (f == target) out.push_back(n);
    const u64 t = static_cast<u64>(static_cast<u128>(n + 1) * f % m);
    f = (1 + m - t) % m;
  }
  return out;
}

u64 pseudo_poly_root_count(PseudoPoly which, u64 m) { return pseudo_poly_roots(which, m).size(); }

namespace {

constexpr std::size_t kLanes = 8;
constexpr u64 kLaneModulusLimit = u64{1} << 26;

// (m * f) mod p for m <= p, f < p < 2^26; the product is exact in a double.
inline u64 lane_mulmod(u64 m, u64 f, u64 p, double inv) {
  const u64 x = m * f;
  const u64 quot = static_cast<u64>(static_cast<double>(x) * inv);
  i64 r = static_cast<i64>(x - quot * p);
  if (r < 0) r += static_cast<i64>(p);
  if (r >= static_cast<i64>(p)) r -= static_cast<i64>(p);
  return static_cast<u64>(r);
}

// f1 walks n = 1..p starting at 2; f2/f3 walk n = 0..p-1 starting at 1.
// Each lane checks f == target and then steps with multiplier n + 1.
void count_group(PseudoPoly which, const u64* primes, std::size_t lanes, u64* counts) {
  const bool first = which == PseudoPoly::f1;
  const u64 target = which == PseudoPoly::f3 ? 1 : 0;
  u64 p[kLanes], f[kLanes], cnt[kLanes] = {};
  double inv[kLanes];
  u64 steps = ~u64{0};
  for (std::size_t l = 0; l < kLanes; ++l) {
    p[l] = primes[l < lanes ? l : 0];
    inv[l] = 1.0 / static_cast<double>(p[l]);
    f[l] = (first ? 2 : 1) % p[l];
    steps = std::min(steps, p[l]);
  }
  const u64 m0 = first ? 2 : 1;
  const u64 t1 = target;
  for (u64 i = 0; i < steps; ++i) {
    const u64 m = m0 + i;
    for (std::size_t l = 0; l < kLanes; ++l) {
      cnt[l] += f[l] == t1;
      const u64 r = lane_mulmod(m, f[l], p[l], inv[l]);
      u64 next = first ? r + 1 : 1 + p[l] - r;
      if (next >= p[l]) next -= p[l];
      f[l] = next;
    }
  }
  for (std::size_t l = 0; l < lanes; ++l) {
    for (u64 i = steps; i < p[l]; ++i) {
      const u64 m = m0 + i;
      cnt[l] += f[l] == t1;
      const u64 r = lane_mulmod(m, f[l], p[l], inv[l]);
      u64 next = first ? r + 1 : 1 + p[l] - r;
      if (next >= p[l]) next -= p[l];
      f[l] = next;
    }
    counts[l] = cnt[l];
  }
}

}  // namespace

std::vector<u64> pseudo_poly_root_counts(PseudoPoly which, std::span<const u64> primes, unsigned threads) {
  for (u64 p : primes) {
    if (p < 2 || p >= kLaneModulusLimit) throw Error("pseudo_poly_root_counts: modulus " + std::to_string(p) + " out of range");
  }
  std::vector<u64> counts(primes.size());
  const std::size_t groups = (primes.size() + kLanes - 1) / kLanes;
  // Largest groups first so the pool drains evenly.
  parallel_for(groups, threads, [&](std::size_t g) {
    const std::size_t gi = groups - 1 - g;
    const std::size_t begin = gi * kLanes;
    const std::size_t lanes = std::min(kLanes, primes.size() - begin);
    count_group(which, primes.data() + begin, lanes, counts.data() + begin);
  });
  return counts;
}

LocalSystem pseudo_poly_system(PseudoPoly which) {
  return LocalSystem(
      1, [which](const PrimePower& pp) { return PointSet::from_rows(1, pseudo_poly_roots(which, pp.value)); },
      LocalSystem::kUnbounded, "pseudo(" + std::string(to_string(which)) + ")");
}

u64 hooley_g(u64 p) {
  const long double e2 = std::exp(2.0L);
  if (static_cast<long double>(p) <= e2) return 0;
  return static_cast<u64>(std::floor(static_cast<long double>(p) / std::log(static_cast<long double>(p))));
}

LocalSystem hooley_counterexample_system() {
  return LocalSystem(
      1,
      [](const PrimePower& pp) {
        if (pp.v >= 2) return PointSet(1);
        std::vector<u64> flat;
        const u64 g = hooley_g(pp.p);
        for (u64 k = 1; k <= g; ++k) flat.push_back(k);
        return PointSet::from_rows(1, std::move(flat));
      },
      LocalSystem::kUnbounded, "hooley-counterexample");
}

LocalSystem restrict_primes(const LocalSystem& system, std::function<bool(u64)> predicate, std::string description) {
  return LocalSystem(
      system.dim(),
      [system, predicate = std::move(predicate)](const PrimePower& pp) {
        if (!predicate(pp.p)) return PointSet(system.dim());
        return *system.local_set(pp);
      },
      system.support_limit(), system.description() + "|" + description);
}

}  // namespace crteq
