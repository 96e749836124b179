#include <doctest.h>

#include <random>

#include "crteq/modarith.hpp"
#include "oracles.hpp"

using namespace crteq;

TEST_CASE("sieve_primes small cases and prime count") {
  CHECK(sieve_primes(10) == std::vector<u64>{2, 3, 5, 7});
  CHECK(sieve_primes(1).empty());
  CHECK(sieve_primes(0).empty());
  CHECK(sieve_primes(1'000'000).size() == 78498);
}

TEST_CASE("sieve_primes agrees with trial division up to 10^4") {
  const auto primes = sieve_primes(10'000);
  std::vector<u64> expect;
  for (u64 n = 0; n <= 10'000; ++n) {
    if (oracle::is_prime(n)) expect.push_back(n);
  }
  CHECK(primes == expect);
}

TEST_CASE("segmented sieve matches above the switch point") {
  const auto big = sieve_primes(20'000'000);
  CHECK(big.size() == 1'270'607);
  std::vector<u64> tail(big.end() - 5, big.end());
  for (u64 p : tail) CHECK(oracle::is_prime(p));
}

TEST_CASE("factorize") {
  const Factorization f = factorize(12);
  REQUIRE(f.parts.size() == 2);
  CHECK(f.parts[0] == PrimePower{2, 2, 4});
  CHECK(f.parts[1] == PrimePower{3, 1, 3});
  CHECK(factorize(1).parts.empty());
  CHECK_THROWS_AS(factorize(0), Error);

  for (u64 q = 1; q <= 100'000; ++q) {
    u64 prod = 1;
    for (const PrimePower& pp : factorize(q).parts) prod *= pp.value;
    REQUIRE(prod == q);
  }
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    const u64 q = 1 + rng() % 1'000'000'000;
    const auto expect = oracle::factor(q);
    const auto got = factorize(q).parts;
    REQUIRE(got.size() == expect.size());
    for (std::size_t j = 0; j < got.size(); ++j) {
      CHECK(got[j].p == expect[j].first);
      CHECK(got[j].v == expect[j].second);
    }
  }
}

TEST_CASE("FactorTable matches factorize") {
  const FactorTable table(50'000);
  for (u64 q = 1; q <= 50'000; ++q) {
    const auto a = table.factorize(q).parts, b = factorize(q).parts;
    REQUIRE(a == b);
  }
}

TEST_CASE("mod_inverse") {
  CHECK(mod_inverse(1, 7) == 1);
  CHECK(mod_inverse(3, 7) == 5);
  CHECK(mod_inverse(-3, 7) == 2);
  CHECK_THROWS_AS(mod_inverse(6, 9), Error);
  CHECK_THROWS_AS(mod_inverse(1, 1), Error);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    const u64 m = 2 + rng() % 1'000'000;
    const i64 a = static_cast<i64>(rng() % 2'000'000) - 1'000'000;
    if (gcd(reduce(a, m), m) != 1) continue;
    const u64 b = mod_inverse(a, m);
    CHECK(b < m);
    CHECK(mul_mod(reduce(a, m), b, m) == 1 % m);
  }
}

TEST_CASE("crt_combine") {
  const Congruence two[] = {{1, 2}, {2, 3}};
  CHECK(crt_combine(two).residue == 5);
  CHECK(crt_combine(two).modulus == 6);
  const Congruence one[] = {{4, 9}};
  CHECK(crt_combine(one).residue == 4);
  const Congruence bad[] = {{1, 4}, {1, 6}};
  CHECK_THROWS_AS(crt_combine(bad), Error);

  std::mt19937_64 rng(11);
  for (int t = 0; t < 300; ++t) {
    std::vector<Congruence> sys;
    u64 prod = 1;
    while (sys.size() < 3) {
      const u64 m = 1 + rng() % 50;
      bool ok = true;
      for (const auto& c : sys) ok = ok && gcd(c.modulus, m) == 1;
      if (!ok) continue;
      sys.push_back({rng() % m, m});
      prod *= m;
    }
    u64 expect = prod;
    for (u64 r = 0; r < prod; ++r) {
      bool all = true;
      for (const auto& c : sys) all = all && r % c.modulus == c.residue;
      if (all) {
        expect = r;
        break;
      }
    }
    CHECK(crt_combine(sys).residue == expect);
  }
}

TEST_CASE("crt_combine inverts reduction for all two-moduli products up to 10^4") {
  for (u64 m1 = 1; m1 <= 100; ++m1) {
    for (u64 m2 = 1; m1 * m2 <= 10'000; ++m2) {
      if (gcd(m1, m2) != 1) continue;
      for (u64 r = 0; r < m1 * m2; r += 1 + (m1 * m2) / 37) {
        const Congruence sys[] = {{r % m1, m1}, {r % m2, m2}};
        REQUIRE(crt_combine(sys).residue == r);
      }
    }
  }
}

TEST_CASE("is_prime and checked_pow") {
  CHECK(is_prime(2));
  CHECK_FALSE(is_prime(1));
  CHECK(is_prime(1'000'000'007ULL));
  CHECK_FALSE(is_prime(3215031751ULL));
  CHECK(checked_pow(3, 4) == 81);
  CHECK_THROWS_AS(checked_pow(10, 30), Error);
}
