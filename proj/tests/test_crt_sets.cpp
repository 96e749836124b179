#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "crteq/crt_sets.hpp"
#include "crteq/generators.hpp"
#include "oracles.hpp"

using namespace crteq;

namespace {

oracle::Tables small_tables() {
  oracle::Tables t;
  t.dim = 1;
  t.sets[2] = {{1}};
  t.sets[3] = {{1}, {2}};
  return t;
}

std::vector<std::vector<u64>> rows_of(const PointSet& s) {
  std::vector<std::vector<u64>> out;
  for (std::size_t i = 0; i < s.size(); ++i) out.emplace_back(s[i].begin(), s[i].end());
  return out;
}

}  // namespace

TEST_CASE("build_A_q and rho on the worked example") {
  const LocalSystem sys = small_tables().system(1000);
  const ResidueSet rs = build_A_q(sys, 6);
  CHECK(rows_of(rs.points) == std::vector<std::vector<u64>>{{1}, {5}});
  CHECK(rho(sys, 6) == 2);
  CHECK(rho(sys, 1) == 1);
  CHECK(rho(sys, 5) == 0);
  CHECK(build_A_q(sys, 10).points.empty());
  CHECK(rows_of(build_A_q(sys, 3).points) == std::vector<std::vector<u64>>{{1}, {2}});
}

TEST_CASE("build_A_q matches brute force on random systems") {
  std::mt19937_64 rng(21);
  for (unsigned dim : {1u, 2u}) {
    for (int s = 0; s < 3; ++s) {
      const oracle::Tables t = oracle::random_tables(rng, dim, 400, 0.5, 3);
      const LocalSystem sys = t.system(400);
      for (u64 q = 1; q <= 400; ++q) {
        const auto expect = oracle::brute_A_q(t, q);
        const ResidueSet rs = build_A_q(sys, q);
        REQUIRE(rows_of(rs.points) == expect);
        REQUIRE(rho(sys, q) == expect.size());
      }
    }
  }
}

TEST_CASE("support limit is enforced") {
  const LocalSystem sys = small_tables().system(10);
  CHECK_THROWS_AS(build_A_q(sys, 11), Error);
  CHECK_THROWS_WITH_AS(static_cast<void>(sys.local_set(PrimePower{11, 1, 11})), doctest::Contains("11"), Error);
}

TEST_CASE("lambda in dimension one is 1 at primes") {
  const LocalSystem sys = roots_system(IntPolynomial::parse("1,0,1"));
  for (u64 p : sieve_primes(200)) {
    const u64 r = sys.local_set(PrimePower{p, 1, p})->size();
    CHECK(lambda_local(sys, PrimePower{p, 1, p}) == (r ? 1u : 0u));
  }
}

TEST_CASE("lambda_local equals exhaustive hyperplane max for random subsets of (Z/5Z)^2") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 300; ++t) {
    const std::size_t count = 1 + rng() % 6;
    std::vector<std::vector<u64>> pts;
    std::vector<u64> flat;
    for (std::size_t i = 0; i < count; ++i) {
      const u64 a = rng() % 5, b = rng() % 5;
      flat.push_back(a);
      flat.push_back(b);
    }
    const PointSet set = PointSet::from_rows(2, flat);
    CHECK(lambda_of_set(set, 5) == oracle::brute_lambda(rows_of(set), 5, 2));
  }
}

TEST_CASE("lambda bounds and the single-hyperplane criterion, p^v <= 49") {
  std::mt19937_64 rng(8);
  for (u64 pv : {2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 49}) {
    const u64 p = factorize(pv).parts[0].p;
    for (int t = 0; t < 30; ++t) {
      std::vector<u64> flat;
      const std::size_t count = 1 + rng() % 5;
      for (std::size_t i = 0; i < 2 * count; ++i) flat.push_back(rng() % pv);
      const PointSet set = PointSet::from_rows(2, flat);
      const u64 lam = lambda_of_set(set, p);
      CHECK(lam <= set.size());
      CHECK(lam == oracle::brute_lambda(rows_of(set), pv, 2));
      // all points on one hyperplane iff lambda = rho
      bool on_one = false;
      const auto rows = rows_of(set);
      for (u64 h0 = 0; h0 < pv && !on_one; ++h0) {
        for (u64 h1 = 0; h1 < pv && !on_one; ++h1) {
          if (h0 == 0 && h1 == 0) continue;
          const u64 a = (h0 * rows[0][0] + h1 * rows[0][1]) % pv;
          bool all = true;
          for (const auto& r : rows) all = all && (h0 * r[0] + h1 * r[1]) % pv == a;
          on_one = all;
        }
      }
      CHECK(on_one == (lam == set.size()));
    }
  }
}

TEST_CASE("lambda_q and rho are multiplicative and match brute force mod q") {
  std::mt19937_64 rng(13);
  const oracle::Tables t = oracle::random_tables(rng, 2, 100, 0.7, 4);
  const LocalSystem sys = t.system(100);
  CHECK(lambda_q(sys, 1) == 1);
  for (u64 q : {15, 21, 35, 6, 10, 12, 30}) {
    const auto pts = oracle::brute_A_q(t, q);
    CHECK(lambda_q(sys, q) == oracle::brute_lambda(pts, q, 2));
  }
  for (u64 q1 = 1; q1 <= 100; ++q1) {
    for (u64 q2 = 1; q1 * q2 <= 100; ++q2) {
      if (gcd(q1, q2) != 1) continue;
      CHECK(rho(sys, q1 * q2) == rho(sys, q1) * rho(sys, q2));
      CHECK(lambda_q(sys, q1 * q2) == lambda_q(sys, q1) * lambda_q(sys, q2));
    }
  }
}

TEST_CASE("enumerate_Q for X^2+1 up to 50") {
  const LocalSystem sys = roots_system(IntPolynomial::parse("1,0,1"));
  const ModulusSet Q = enumerate_Q(sys, 50);
  std::vector<u64> expect;
  for (u64 q = 1; q <= 50; ++q) {
    bool root = false;
    for (u64 a = 0; a < q; ++a) root = root || (a * a + 1) % q == 0;
    if (root) expect.push_back(q);
  }
  CHECK(Q.members == expect);
  for (u64 q : Q.members) CHECK(q % 3 != 0);
  for (u64 q : {1, 2, 5, 10, 13, 25, 26}) CHECK(std::find(Q.members.begin(), Q.members.end(), q) != Q.members.end());
}

TEST_CASE("Q_k partitions Q minus 1") {
  const LocalSystem sys = roots_system(IntPolynomial::parse("1,0,1"));
  const ModulusSet all = enumerate_Q(sys, 5000);
  std::vector<u64> joined;
  for (unsigned k = 1; k <= 6; ++k) {
    const ModulusSet qk = enumerate_Q(sys, 5000, k);
    for (u64 q : qk.members) CHECK(factorize(q).omega() == k);
    joined.insert(joined.end(), qk.members.begin(), qk.members.end());
  }
  std::sort(joined.begin(), joined.end());
  CHECK(std::adjacent_find(joined.begin(), joined.end()) == joined.end());
  std::vector<u64> rest(all.members.begin() + 1, all.members.end());
  CHECK(all.members.front() == 1);
  CHECK(joined == rest);
  // k = 1: prime powers with roots
  for (u64 q : enumerate_Q(sys, 5000, 1).members) CHECK(factorize(q).parts.size() == 1);
}

TEST_CASE("fractional_points") {
  const LocalSystem sys = small_tables().system(100);
  const TorusPointSet ps = fractional_points(build_A_q(sys, 6));
  CHECK(ps.q == 6);
  CHECK(ps.weight_denominator() == 2);
  CHECK(rows_of(ps.numerators) == std::vector<std::vector<u64>>{{1}, {5}});
  CHECK_THROWS_AS(fractional_points(build_A_q(sys, 5)), Error);
}

TEST_CASE("assumption1_statistic") {
  const LocalSystem full(1, [](const PrimePower& pp) {
    std::vector<u64> flat(pp.value);
    for (u64 i = 0; i < pp.value; ++i) flat[i] = i;
    return PointSet::from_rows(1, flat);
  });
  double theta = 0;
  for (u64 p : sieve_primes(10'000)) theta += std::log(static_cast<double>(p));
  CHECK(assumption1_statistic(full, 10'000).log_sum == doctest::Approx(theta).epsilon(1e-12));
  const LocalSystem empty(1, [](const PrimePower&) { return PointSet(1); });
  CHECK(assumption1_statistic(empty, 1000).log_sum == 0.0);
  const double r = assumption1_statistic(roots_system(IntPolynomial::parse("1,0,1")), 100'000).ratio;
  CHECK(std::abs(r - 0.5) < 0.05);
}

TEST_CASE("local system text format round trip") {
  std::istringstream in("# sample\n2 1 1\n3 1 1\n3 1 2\n5 2 7  # comment\n");
  const LocalSystem sys = read_local_system(in);
  CHECK(sys.support_limit() == 25);
  CHECK(rho(sys, 6) == 2);
  CHECK(rho(sys, 25) == 1);
  CHECK(rho(sys, 5) == 0);
  std::ostringstream out;
  write_local_system(out, sys, 25);
  std::istringstream back(out.str());
  const LocalSystem again = read_local_system(back);
  for (u64 q = 1; q <= 25; ++q) CHECK(rows_of(build_A_q(again, q).points) == rows_of(build_A_q(sys, q).points));

  std::istringstream bad("4 1 1\n");
  CHECK_THROWS_WITH_AS(read_local_system(bad), doctest::Contains("line 1"), Error);
  std::istringstream unreduced("3 1 5\n");
  CHECK_THROWS_AS(read_local_system(unreduced), Error);
}
