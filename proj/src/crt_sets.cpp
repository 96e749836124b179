#include "crteq/crt_sets.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <unordered_map>

namespace crteq {

PointSet PointSet::from_rows(unsigned dim, std::vector<u64> flat) {
  if (dim == 0) throw Error("PointSet: dimension must be positive");
  if (flat.size() % dim != 0) throw Error("PointSet: flat size is not a multiple of the dimension");
  PointSet out(dim);
  const std::size_t count = flat.size() / dim;
  if (dim == 1) {
    std::sort(flat.begin(), flat.end());
    flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
    out.data_ = std::move(flat);
    return out;
  }
  std::vector<std::size_t> order(count);
  for (std::size_t i = 0; i < count; ++i) order[i] = i;
  auto row = [&](std::size_t i) { return std::span<const u64>(flat.data() + i * dim, dim); };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto ra = row(a), rb = row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  });
  out.data_.reserve(flat.size());
  for (std::size_t idx = 0; idx < count; ++idx) {
    const auto r = row(order[idx]);
    if (idx > 0 && std::equal(r.begin(), r.end(), row(order[idx - 1]).begin())) continue;
    out.data_.insert(out.data_.end(), r.begin(), r.end());
  }
  return out;
}

bool PointSet::contains(std::span<const u64> point) const {
  if (point.size() != dim_) return false;
  std::size_t lo = 0, hi = size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    const auto r = (*this)[mid];
    if (std::lexicographical_compare(r.begin(), r.end(), point.begin(), point.end())) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return lo < size() && std::equal(point.begin(), point.end(), (*this)[lo].begin());
}

struct LocalSystem::State {
  unsigned dim;
  LocalRule rule;
  u64 support_limit;
  std::string description;
  std::mutex mutex;
  std::unordered_map<u64, std::shared_ptr<const PointSet>> sets;
  std::unordered_map<u64, u64> lambdas;
};

LocalSystem::LocalSystem(unsigned dim, LocalRule rule, u64 support_limit, std::string description)
    : state_(std::make_shared<State>()) {
  if (dim == 0) throw Error("LocalSystem: dimension must be positive");
  if (!rule) throw Error("LocalSystem: empty rule");
  state_->dim = dim;
  state_->rule = std::move(rule);
  state_->support_limit = support_limit;
  state_->description = std::move(description);
}

unsigned LocalSystem::dim() const { return state_->dim; }
u64 LocalSystem::support_limit() const { return state_->support_limit; }
const std::string& LocalSystem::description() const { return state_->description; }

std::shared_ptr<const PointSet> LocalSystem::local_set(u64 p, unsigned v) const {
  return local_set(PrimePower{p, v, checked_pow(p, v)});
}

std::shared_ptr<const PointSet> LocalSystem::local_set(const PrimePower& pv) const {
  if (pv.value > state_->support_limit) {
    throw Error("local system '" + state_->description + "' does not support prime power " + std::to_string(pv.p) +
                "^" + std::to_string(pv.v));
  }
  {
    std::lock_guard lock(state_->mutex);
    if (auto it = state_->sets.find(pv.value); it != state_->sets.end()) return it->second;
  }
  PointSet set = state_->rule(pv);
  if (set.empty()) set = PointSet(state_->dim);
  if (set.dim() != state_->dim) {
    throw Error("local rule returned dimension " + std::to_string(set.dim()) + ", expected " +
                std::to_string(state_->dim));
  }
  for (u64 c : set.flat()) {
    if (c >= pv.value) throw Error("local rule returned a non-canonical residue mod " + std::to_string(pv.value));
  }
  auto shared = std::make_shared<const PointSet>(std::move(set));
  std::lock_guard lock(state_->mutex);
  return state_->sets.try_emplace(pv.value, std::move(shared)).first->second;
}

u64 LocalSystem::local_lambda(const PrimePower& pv) const {
  {
    std::lock_guard lock(state_->mutex);
    if (auto it = state_->lambdas.find(pv.value); it != state_->lambdas.end()) return it->second;
  }
  const u64 value = lambda_of_set(*local_set(pv), pv.p);
  std::lock_guard lock(state_->mutex);
  return state_->lambdas.try_emplace(pv.value, value).first->second;
}

ResidueSet build_A_q(const LocalSystem& system, u64 q) { return build_A_q(system, factorize(q)); }

ResidueSet build_A_q(const LocalSystem& system, const Factorization& f) {
  const unsigned n = system.dim();
  ResidueSet rs;
  rs.q = f.q;
  rs.factorization = f;

  std::vector<u64> acc(n, 0);  // A_1 = {0}
  u64 modulus = 1;
  for (const PrimePower& pp : f.parts) {
    const auto local = system.local_set(pp);
    if (local->empty()) {
      rs.points = PointSet(n);
      return rs;
    }
    const u64 m = pp.value;
    const u64 combined = modulus * m;
    // x = acc_part * e_acc + local_part * e_loc (mod combined)
    const u64 e_loc = modulus == 1 ? 1 % combined
                                   : static_cast<u64>(static_cast<u128>(modulus) *
                                                      mod_inverse(static_cast<i64>(modulus % m), m) % combined);
    const u64 e_acc = modulus == 1 ? 0
                                   : static_cast<u64>(static_cast<u128>(m) *
                                                      mod_inverse(static_cast<i64>(m % modulus), modulus) % combined);
    std::vector<u64> next;
    next.reserve(acc.size() / n * local->size() * n);
    const std::size_t acc_count = acc.size() / n;
    for (std::size_t i = 0; i < acc_count; ++i) {
      for (std::size_t j = 0; j < local->size(); ++j) {
        const auto y = (*local)[j];
        for (unsigned c = 0; c < n; ++c) {
          const u128 z = static_cast<u128>(acc[i * n + c]) * e_acc + static_cast<u128>(y[c]) * e_loc;
          next.push_back(static_cast<u64>(z % combined));
        }
      }
    }
    acc = std::move(next);
    modulus = combined;
  }
  rs.points = PointSet::from_rows(n, std::move(acc));
  return rs;
}

u64 rho(const LocalSystem& system, u64 q) { return rho(system, factorize(q)); }

u64 rho(const LocalSystem& system, const Factorization& f) {
  u64 r = 1;
  for (const PrimePower& pp : f.parts) {
    r *= system.local_set(pp)->size();
    if (r == 0) return 0;
  }
  return r;
}

namespace {

// Rank of the rows of `m` (rows x cols) over F_p.
std::size_t rank_mod_p(std::vector<std::vector<u64>> m, u64 p) {
  std::size_t rank = 0;
  const std::size_t rows = m.size();
  const std::size_t cols = rows == 0 ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && m[pivot][c] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(m[pivot], m[rank]);
    const u64 inv = mod_inverse(static_cast<i64>(m[rank][c]), p);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || m[r][c] == 0) continue;
      const u64 factor = mul_mod(m[r][c], inv, p);
      for (std::size_t k = c; k < cols; ++k) {
        m[r][k] = (m[r][k] + p - mul_mod(factor, m[rank][k], p)) % p;
      }
    }
    ++rank;
  }
  return rank;
}

constexpr double kLambdaBudget = 4e9;

}  // namespace

u64 lambda_of_set(const PointSet& set, u64 p) {
  const std::size_t count = set.size();
  const unsigned n = set.dim();
  if (count == 0) return 0;
  if (count <= n) return count;

  std::vector<u64> reduced(set.flat().begin(), set.flat().end());
  for (u64& c : reduced) c %= p;

  if (n == 1) {
    std::sort(reduced.begin(), reduced.end());
    u64 best = 0;
    for (std::size_t i = 0; i < reduced.size();) {
      std::size_t j = i;
      while (j < reduced.size() && reduced[j] == reduced[i]) ++j;
      best = std::max<u64>(best, j - i);
      i = j;
    }
    return best;
  }

  const PointSet distinct = PointSet::from_rows(n, reduced);
  if (distinct.size() <= n) return count;  // every point fits on one hyperplane
  if (count == n + 1) {
    // n + 1 distinct points: a hyperplane holds all of them iff they are affinely dependent.
    std::vector<std::vector<u64>> diffs;
    for (std::size_t i = 1; i <= n; ++i) {
      std::vector<u64> row(n);
      for (unsigned c = 0; c < n; ++c) row[c] = (distinct[i][c] + p - distinct[0][c]) % p;
      diffs.push_back(std::move(row));
    }
    return rank_mod_p(std::move(diffs), p) < n ? count : n;
  }

  // Normals up to scaling: leading nonzero coordinate equal to 1.
  const double directions = (std::pow(static_cast<double>(p), n) - 1.0) / static_cast<double>(p - 1);
  if (directions * static_cast<double>(count) > kLambdaBudget) {
    throw Error("lambda: hyperplane enumeration mod " + std::to_string(p) + " exceeds the work budget");
  }
  u64 best = 1;
  std::vector<u64> values(count);
  std::vector<u64> normal(n);
  for (unsigned lead = 0; lead < n; ++lead) {
    std::fill(normal.begin(), normal.end(), 0);
    normal[lead] = 1;
    const unsigned free = n - 1 - lead;
    u64 combos = 1;
    for (unsigned i = 0; i < free; ++i) combos *= p;
    for (u64 idx = 0; idx < combos; ++idx) {
      u64 rest = idx;
      for (unsigned c = lead + 1; c < n; ++c) {
        normal[c] = rest % p;
        rest /= p;
      }
      for (std::size_t i = 0; i < count; ++i) {
        u64 s = 0;
        for (unsigned c = lead; c < n; ++c) s = (s + mul_mod(normal[c], reduced[i * n + c], p)) % p;
        values[i] = s;
      }
      std::sort(values.begin(), values.end());
      for (std::size_t i = 0; i < count;) {
        std::size_t j = i;
        while (j < count && values[j] == values[i]) ++j;
        best = std::max<u64>(best, j - i);
        i = j;
      }
      if (best == count) return best;
    }
  }
  return best;
}

u64 lambda_local(const LocalSystem& system, const PrimePower& pv) { return system.local_lambda(pv); }

u64 lambda_q(const LocalSystem& system, u64 q) { return lambda_q(system, factorize(q)); }

u64 lambda_q(const LocalSystem& system, const Factorization& f) {
  u64 r = 1;
  for (const PrimePower& pp : f.parts) r *= lambda_local(system, pp);
  return r;
}

ModulusSet enumerate_Q(const LocalSystem& system, u64 x, std::optional<unsigned> k) {
  if (x > system.support_limit()) {
    throw Error("enumerate_Q: bound " + std::to_string(x) + " exceeds the support limit of '" +
                system.description() + "'");
  }
  ModulusSet out;
  out.x = x;
  out.k = k;
  if (x == 0) return out;
  const FactorTable table(x);
  for (u64 q = 1; q <= x; ++q) {
    const Factorization f = table.factorize(q);
    if (k && f.omega() != *k) continue;
    if (rho(system, f) >= 1) out.members.push_back(q);
  }
  return out;
}

TorusPointSet fractional_points(const ResidueSet& rs) {
  if (rs.points.empty()) throw Error("fractional_points: A_q is empty for q = " + std::to_string(rs.q));
  return TorusPointSet{rs.q, rs.points};
}

Assumption1Stat assumption1_statistic(const LocalSystem& system, u64 x) {
  if (x < 2) throw Error("assumption1_statistic: x must be at least 2");
  long double sum = 0.0L;
  for (u64 p : sieve_primes(x)) {
    if (!system.local_set(p, 1)->empty()) sum += std::log(static_cast<long double>(p));
  }
  return {static_cast<double>(sum), static_cast<double>(sum / static_cast<long double>(x))};
}

}  // namespace crteq
