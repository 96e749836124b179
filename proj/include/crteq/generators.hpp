#pragma once

// Concrete local systems: polynomial roots and their Veronese/image/graph
// variants, plane-curve intersections, pseudo-polynomials, and the
// counterexample system with A_p = {1, ..., floor(p / log p)}.

#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "crteq/crt_sets.hpp"

namespace crteq {

/// Integer polynomial, coefficients constant term first.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<i64> coefficients);

  /// Comma separated coefficient list, constant term first: "1,0,1" is X^2+1.
  static IntPolynomial parse(std::string_view text);

  [[nodiscard]] int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  [[nodiscard]] bool is_zero() const { return coeffs_.empty(); }
  [[nodiscard]] const std::vector<i64>& coefficients() const { return coeffs_; }

  [[nodiscard]] u64 eval_mod(u64 x, u64 m) const;
  [[nodiscard]] bool is_zero_mod(u64 m) const;
  [[nodiscard]] IntPolynomial derivative() const;
  /// this(inner(X)); throws on 64-bit coefficient overflow.
  [[nodiscard]] IntPolynomial compose(const IntPolynomial& inner) const;
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

 private:
  std::vector<i64> coeffs_;
};

/// Integer polynomial in X and Y; key (deg_X, deg_Y).
class BivariatePoly {
 public:
  BivariatePoly() = default;
  explicit BivariatePoly(std::map<std::pair<unsigned, unsigned>, i64> terms);

  /// Semicolon separated `coef,degX,degY` triples: "1,0,2;-1,3,0;-17,0,0" is Y^2-X^3-17.
  static BivariatePoly parse(std::string_view text);

  [[nodiscard]] const std::map<std::pair<unsigned, unsigned>, i64>& terms() const { return terms_; }
  [[nodiscard]] unsigned degree_x() const;
  [[nodiscard]] unsigned degree_y() const;
  [[nodiscard]] u64 eval_mod(u64 x, u64 y, u64 m) const;
  [[nodiscard]] bool is_zero_mod(u64 m) const;
  [[nodiscard]] std::string to_string() const;

 private:
  std::map<std::pair<unsigned, unsigned>, i64> terms_;
};

enum class PseudoPoly { f1, f2, f3 };

PseudoPoly parse_pseudo_poly(std::string_view name);
std::string_view to_string(PseudoPoly which);

/// Roots of f mod p in ascending order: full scan for p <= scan_limit,
/// otherwise gcd(f, X^p - X) followed by equal-degree splitting.
std::vector<u64> poly_roots_mod_p(const IntPolynomial& f, u64 p, u64 scan_limit = 10'000);

/// {a in [0, p^v) : f(a) = 0 mod p^v}, ascending. Nonsingular roots lift
/// uniquely by Newton's step; singular roots try all p lifts per level.
std::vector<u64> poly_roots_mod_pv(const IntPolynomial& f, u64 p, unsigned v);

LocalSystem roots_system(const IntPolynomial& f);
/// Points (a, a^2, ..., a^{d-1}) over roots a of f; dimension d - 1.
LocalSystem veronese_system(const IntPolynomial& f, unsigned d);
LocalSystem image_system(const IntPolynomial& f, const IntPolynomial& g);
LocalSystem graph_system(const IntPolynomial& f, const IntPolynomial& g);

constexpr u64 kDefaultScanBudget = 100'000'000;

/// Common zeros of two plane curves by exhaustive scan of (Z/p^vZ)^2.
LocalSystem bezout_system(const BivariatePoly& first, const BivariatePoly& second, u64 scan_budget = kDefaultScanBudget);
/// Zeros of a single plane curve, same scan.
LocalSystem curve_system(const BivariatePoly& curve, u64 scan_budget = kDefaultScanBudget);

/// f(n) mod m for a single n >= 0 (f1 requires n >= 1), by the recurrence.
u64 pseudo_poly_value(PseudoPoly which, u64 n, u64 m);

/// Zeros of the pseudo-polynomial mod m, as residues in [0, m). One pass of
/// the recurrence over a full period: n = 1..m for f1, n = 0..m-1 for f2, f3.
std::vector<u64> pseudo_poly_roots(PseudoPoly which, u64 m);
u64 pseudo_poly_root_count(PseudoPoly which, u64 m);

/// Root counts for many primes below 2^26 at once. Runs several recurrences
/// side by side with floating-point quotient estimates so the modular steps
/// overlap; results match pseudo_poly_root_count exactly.
std::vector<u64> pseudo_poly_root_counts(PseudoPoly which, std::span<const u64> primes, unsigned threads = 1);

LocalSystem pseudo_poly_system(PseudoPoly which);

/// g(p) = floor(p / log p) for p > e^2, else 0.
u64 hooley_g(u64 p);
LocalSystem hooley_counterexample_system();

LocalSystem restrict_primes(const LocalSystem& system, std::function<bool(u64)> predicate,
                            std::string description = "restricted");

}  // namespace crteq
