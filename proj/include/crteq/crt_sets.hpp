#pragma once

// Local systems {A_{p^v}}, their CRT assembly A_q, and the arithmetic
// functions rho and lambda built on them.

#include <functional>
#include <iosfwd>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crteq/modarith.hpp"

namespace crteq {

/// A set of n-tuples of residues, row-major, sorted lexicographically and
/// free of duplicates.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(unsigned dim) : dim_(dim) {}

  /// Sorts and deduplicates `flat` (size must be a multiple of dim).
  static PointSet from_rows(unsigned dim, std::vector<u64> flat);

  [[nodiscard]] unsigned dim() const { return dim_; }
  [[nodiscard]] std::size_t size() const { return dim_ == 0 ? 0 : data_.size() / dim_; }
  [[nodiscard]] bool empty() const { return data_.empty(); }
  [[nodiscard]] std::span<const u64> operator[](std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }
  [[nodiscard]] std::span<const u64> flat() const { return data_; }
  [[nodiscard]] bool contains(std::span<const u64> point) const;

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  unsigned dim_ = 1;
  std::vector<u64> data_;
};

using LocalRule = std::function<PointSet(const PrimePower&)>;

/// A deterministic rule p^v -> A_{p^v} in (Z/p^vZ)^n. Copies share one
/// thread-safe cache of materialized local sets.
class LocalSystem {
 public:
  static constexpr u64 kUnbounded = std::numeric_limits<u64>::max();

  LocalSystem(unsigned dim, LocalRule rule, u64 support_limit = kUnbounded, std::string description = {});

  [[nodiscard]] unsigned dim() const;
  [[nodiscard]] u64 support_limit() const;
  [[nodiscard]] const std::string& description() const;

  /// Cached A_{p^v}. Throws Error if p^v exceeds the support limit.
  [[nodiscard]] std::shared_ptr<const PointSet> local_set(const PrimePower& pv) const;
  [[nodiscard]] std::shared_ptr<const PointSet> local_set(u64 p, unsigned v) const;

  /// Cached lambda(p^v).
  [[nodiscard]] u64 local_lambda(const PrimePower& pv) const;

 private:
  struct State;
  std::shared_ptr<State> state_;
};

/// A_q with its factorization; rho(q) = points.size().
struct ResidueSet {
  u64 q = 1;
  Factorization factorization;
  PointSet points;

  [[nodiscard]] u64 rho() const { return points.size(); }
  [[nodiscard]] unsigned dim() const { return points.dim(); }
};

/// Fractional parts {a/q} of A_q, each carrying weight 1/rho(q).
struct TorusPointSet {
  u64 q = 1;
  PointSet numerators;

  [[nodiscard]] unsigned dim() const { return numerators.dim(); }
  [[nodiscard]] std::size_t size() const { return numerators.size(); }
  /// Weight of each atom as an exact fraction 1/weight_denominator().
  [[nodiscard]] u64 weight_denominator() const { return numerators.size(); }
};

struct ModulusSet {
  u64 x = 0;
  std::optional<unsigned> k;
  std::vector<u64> members;
};

ResidueSet build_A_q(const LocalSystem& system, u64 q);
ResidueSet build_A_q(const LocalSystem& system, const Factorization& f);

u64 rho(const LocalSystem& system, u64 q);
u64 rho(const LocalSystem& system, const Factorization& f);

/// Max number of points of `set` (taken mod p^v) on an affine hyperplane
/// h.x = a of (Z/p^vZ)^n with h nonzero mod p^v. Every such hyperplane lies in
/// one whose normal has valuation v-1, so the count reduces to hyperplanes of
/// F_p^n applied to the multiset {x mod p}.
u64 lambda_of_set(const PointSet& set, u64 p);

u64 lambda_local(const LocalSystem& system, const PrimePower& pv);
u64 lambda_q(const LocalSystem& system, u64 q);
u64 lambda_q(const LocalSystem& system, const Factorization& f);

/// Q(x), or Q_k(x) when k is set. Includes q = 1 when k is unset.
ModulusSet enumerate_Q(const LocalSystem& system, u64 x, std::optional<unsigned> k = std::nullopt);

TorusPointSet fractional_points(const ResidueSet& rs);

struct Assumption1Stat {
  double log_sum = 0.0;  ///< sum of log p over p <= x with rho(p) >= 1
  double ratio = 0.0;    ///< log_sum / x
};

Assumption1Stat assumption1_statistic(const LocalSystem& system, u64 x);

/// Line format `p v a_1,...,a_n`; `#` starts a comment. Optional directives
/// `dim <n>` and `support <limit>`; prime powers within the support that have
/// no lines map to the empty set.
LocalSystem read_local_system(std::istream& in, const std::string& description = "file");
LocalSystem load_local_system(const std::string& path);
void write_local_system(std::ostream& out, const LocalSystem& system, u64 limit);

}  // namespace crteq
