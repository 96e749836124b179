#include "crteq/modarith.hpp"

#include <algorithm>
#include <cmath>

namespace crteq {

bool Factorization::squarefree() const {
  return std::all_of(parts.begin(), parts.end(), [](const PrimePower& pp) { return pp.v == 1; });
}

u64 pow_mod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

u64 gcd(u64 a, u64 b) {
  while (b != 0) {
    const u64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  // Deterministic Miller-Rabin for 64-bit inputs.
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

u64 checked_pow(u64 p, unsigned v) {
  u64 r = 1;
  for (unsigned i = 0; i < v; ++i) {
    if (r > (u64{1} << 62) / p) {
      throw Error("prime power " + std::to_string(p) + "^" + std::to_string(v) + " exceeds 62 bits");
    }
    r *= p;
  }
  return r;
}

namespace {

constexpr u64 kSegmentThreshold = 10'000'000;
constexpr u64 kSegmentSize = 1 << 20;

std::vector<u64> simple_sieve(u64 limit) {
  std::vector<u64> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (u64 i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

std::vector<u64> segmented_sieve(u64 limit) {
  const u64 root = static_cast<u64>(std::sqrt(static_cast<long double>(limit))) + 1;
  const std::vector<u64> base = simple_sieve(root);
  std::vector<u64> primes;
  std::vector<char> mark(kSegmentSize);
  for (u64 lo = 2; lo <= limit; lo += kSegmentSize) {
    const u64 hi = std::min(limit, lo + kSegmentSize - 1);
    std::fill(mark.begin(), mark.end(), 0);
    for (u64 p : base) {
      if (p * p > hi) break;
      u64 start = std::max(p * p, (lo + p - 1) / p * p);
      for (u64 j = start; j <= hi; j += p) mark[j - lo] = 1;
    }
    for (u64 n = lo; n <= hi; ++n) {
      if (!mark[n - lo]) primes.push_back(n);
    }
  }
  return primes;
}

}  // namespace

std::vector<u64> sieve_primes(u64 limit) {
  return limit > kSegmentThreshold ? segmented_sieve(limit) : simple_sieve(limit);
}

Factorization factorize(u64 q) {
  if (q == 0) throw Error("factorize: q must be positive");
  Factorization f;
  f.q = q;
  auto take = [&](u64 p) {
    unsigned v = 0;
    u64 value = 1;
    while (q % p == 0) {
      q /= p;
      value *= p;
      ++v;
    }
    if (v > 0) f.parts.push_back({p, v, value});
  };
  take(2);
  take(3);
  take(5);
  // 2,3,5 wheel: offsets from 7 modulo 30.
  static constexpr u64 kGaps[] = {4, 2, 4, 2, 4, 6, 2, 6};
  u64 d = 7;
  for (std::size_t i = 0; d <= q / d; d += kGaps[i++ & 7]) {
    if (q % d == 0) take(d);
  }
  if (q > 1) f.parts.push_back({q, 1, q});
  return f;
}

FactorTable::FactorTable(u64 limit) : limit_(limit), spf_(limit + 1, 0) {
  for (u64 i = 2; i <= limit; ++i) {
    if (spf_[i] != 0) continue;
    for (u64 j = i; j <= limit; j += i) {
      if (spf_[j] == 0) spf_[j] = static_cast<std::uint32_t>(i);
    }
  }
}

u64 FactorTable::smallest_prime_factor(u64 q) const {
  if (q < 2 || q > limit_) throw Error("FactorTable: argument out of range");
  return spf_[q];
}

Factorization FactorTable::factorize(u64 q) const {
  if (q == 0) throw Error("factorize: q must be positive");
  if (q > limit_) return crteq::factorize(q);
  Factorization f;
  f.q = q;
  while (q > 1) {
    const u64 p = spf_[q];
    PrimePower pp{p, 0, 1};
    while (q % p == 0) {
      q /= p;
      pp.value *= p;
      ++pp.v;
    }
    f.parts.push_back(pp);
  }
  return f;
}

u64 mod_inverse(i64 a, u64 m) {
  if (m < 2) throw Error("mod_inverse: modulus must be at least 2");
  i128 r0 = static_cast<i128>(m), r1 = static_cast<i128>(reduce(a, m));
  i128 s0 = 0, s1 = 1;
  while (r1 != 0) {
    const i128 t = r0 / r1;
    i128 tmp = r0 - t * r1;
    r0 = r1;
    r1 = tmp;
    tmp = s0 - t * s1;
    s0 = s1;
    s1 = tmp;
  }
  if (r0 != 1) {
    throw Error("mod_inverse: " + std::to_string(a) + " is not invertible modulo " + std::to_string(m));
  }
  const i128 r = s0 % static_cast<i128>(m);
  return static_cast<u64>(r < 0 ? r + m : r);
}

Congruence crt_combine(std::span<const Congruence> system) {
  Congruence acc{0, 1};
  for (const Congruence& c : system) {
    if (c.modulus == 0) throw Error("crt_combine: zero modulus");
    if (gcd(acc.modulus, c.modulus) != 1) throw Error("crt_combine: moduli are not pairwise coprime");
    const u64 r = c.residue % c.modulus;
    if (c.modulus == 1) continue;
    if (acc.modulus == 1) {
      acc = {r, c.modulus};
      continue;
    }
    // acc.residue + acc.modulus * t = r (mod c.modulus)
    const u64 inv = mod_inverse(static_cast<i64>(acc.modulus % c.modulus), c.modulus);
    const u64 diff = (r + c.modulus - acc.residue % c.modulus) % c.modulus;
    const u64 t = mul_mod(diff, inv, c.modulus);
    const u128 combined = static_cast<u128>(acc.modulus) * c.modulus;
    if (combined >> 63) throw Error("crt_combine: combined modulus exceeds 63 bits");
    acc.residue = static_cast<u64>(acc.residue + static_cast<u128>(acc.modulus) * t);
    acc.modulus = static_cast<u64>(combined);
  }
  return acc;
}

}  // namespace crteq
