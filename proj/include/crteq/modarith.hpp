#pragma once

// Exact integer kernels: sieving, factorization, modular inverse, CRT.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace crteq {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

/// Raised for computational misuse (bad arguments, unsupported inputs).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PrimePower {
  u64 p = 0;
  unsigned v = 0;
  u64 value = 0;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Canonical factorization, parts sorted by prime. q = 1 has no parts.
struct Factorization {
  u64 q = 1;
  std::vector<PrimePower> parts;

  [[nodiscard]] std::size_t omega() const { return parts.size(); }
  [[nodiscard]] bool squarefree() const;
};

inline u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 pow_mod(u64 base, u64 exp, u64 m);

/// Canonical representative of a in [0, m).
inline u64 reduce(i64 a, u64 m) {
  const i128 r = static_cast<i128>(a) % static_cast<i128>(m);
  return static_cast<u64>(r < 0 ? r + m : r);
}

u64 gcd(u64 a, u64 b);

bool is_prime(u64 n);

/// Checked p^v; throws if the result overflows 63 bits.
u64 checked_pow(u64 p, unsigned v);

/// Primes in [2, limit], ascending. Segmented above 10^7.
std::vector<u64> sieve_primes(u64 limit);

/// Trial division with a 2,3,5 wheel.
Factorization factorize(u64 q);

/// Smallest-prime-factor table for bulk factorization of 1..limit.
class FactorTable {
 public:
  explicit FactorTable(u64 limit);

  [[nodiscard]] u64 limit() const { return limit_; }
  [[nodiscard]] Factorization factorize(u64 q) const;
  [[nodiscard]] u64 smallest_prime_factor(u64 q) const;

 private:
  u64 limit_;
  std::vector<std::uint32_t> spf_;
};

/// b in [0, m) with a*b = 1 mod m. Throws Error if gcd(a, m) != 1.
u64 mod_inverse(i64 a, u64 m);

struct Congruence {
  u64 residue = 0;
  u64 modulus = 1;
};

/// Unique r mod prod(m_i) with r = r_i mod m_i. Moduli must be pairwise coprime.
Congruence crt_combine(std::span<const Congruence> system);

}  // namespace crteq
