#include <doctest.h>

#include <cmath>
#include <numeric>

#include "crteq/experiments.hpp"

using namespace crteq;

TEST_CASE("make_system") {
  SystemSpec s;
  CHECK(make_system(s).dim() == 1);
  s.kind = "veronese";
  s.poly = "-2,0,0,1";
  CHECK(make_system(s).dim() == 2);
  s.kind = "nope";
  CHECK_THROWS_AS(make_system(s), Error);
  SystemSpec r;
  r.restrict_mod = 4;
  r.restrict_residues = {1};
  CHECK(build_A_q(make_system(r), 2).rho() == 0);
  CHECK(build_A_q(make_system(r), 5).rho() == 2);
}

TEST_CASE("sweep over X^2 + 1") {
  ExperimentConfig c;
  c.ladder = {300, 1000};
  c.threads = 2;
  c.per_q = true;
  const SweepReport r = run_theorem_sweep(c);
  REQUIRE(r.rows.size() == 2);
  const LocalSystem sys = make_system(c.system);
  for (const SweepRow& row : r.rows) {
    CHECK(row.moduli == enumerate_Q(sys, row.x).members.size());
    CHECK(row.per_q.size() == row.moduli);
    CHECK(row.average_disc > 0.0);
    CHECK(row.average_disc <= 1.0);
    CHECK(row.H >= 1);
    CHECK(row.H <= kMaxAutoH);
    CHECK(row.fitted_constant == doctest::Approx(row.average_disc / row.bound.factor));
  }
  CHECK(r.alpha_fitted);
  CHECK(r.alpha > 0.0);
  CHECK(r.constant_spread >= 1.0);

  c.theorem = 3;
  CHECK_THROWS_AS(run_theorem_sweep(c), Error);
  c.k = 1;
  CHECK(run_theorem_sweep(c).rows.size() == 2);
  c.ladder = {1000, 300};
  CHECK_THROWS_AS(run_theorem_sweep(c), Error);
}

TEST_CASE("sweep with only the trivial modulus") {
  ExperimentConfig c;
  c.ladder = {200, 400};
  c.system.restrict_mod = 4;
  c.system.restrict_residues = {3};
  const SweepReport r = run_theorem_sweep(c);
  for (const SweepRow& row : r.rows) {
    CHECK(row.moduli == 1);
    CHECK(row.average_disc == 1.0);
  }
}

TEST_CASE("root tables") {
  const RootTable t = poisson_table(PseudoPoly::f1, 3000, 2);
  const u64 pi = sieve_primes(3000).size();
  CHECK(t.primes == pi);
  CHECK(std::accumulate(t.histogram.begin(), t.histogram.end(), u64{0}) == pi);
  for (int j = 0; j < 4; ++j) {
    u64 num = 0;
    for (std::size_t k = 0; k < t.histogram.size(); ++k) num += static_cast<u64>(std::pow(k, j + 1)) * t.histogram[k];
    CHECK(t.moment_numerators[j] == num);
    CHECK(t.moments[j] == doctest::Approx(static_cast<double>(num) / pi));
  }
  CHECK(t.reference.size() >= 3);
  CHECK(t.reference[0] == doctest::Approx(pi * std::exp(-1.0)));
  CHECK(t.reference[2] == doctest::Approx(pi * std::exp(-1.0) / 2));

  // rho(2) = 1 is the single entry below 2.
  const RootTable f3 = poisson_table(PseudoPoly::f3, 5000);
  CHECK(f3.histogram[0] == 0);
  CHECK(f3.histogram[1] == 1);

  const RootTable quad = poisson_table(IntPolynomial::parse("1,0,1"), 2000, {0.5, 0.0, 0.5});
  CHECK(quad.histogram[1] == 1);
  CHECK(quad.histogram[0] + quad.histogram[2] + 1 == sieve_primes(2000).size());
  CHECK(quad.reference[0] == doctest::Approx(0.5 * quad.primes));
  CHECK_THROWS_AS(poisson_table(PseudoPoly::f1, kTableLimit + 1), Error);
}

TEST_CASE("counterexample demo") {
  const CounterexampleReport full = counterexample_demo(1.0, {500});
  CHECK(full.rows[0].mu_mass == doctest::Approx(1.0));
  CHECK(full.rows[0].uniform_mass == doctest::Approx(1.0));
  const CounterexampleReport r = counterexample_demo(0.25, {1000, 3000}, 2);
  for (const CounterexampleRow& row : r.rows) {
    CHECK(row.mu_mass >= row.proof_floor);
    CHECK(row.mu_mass > 0.25);
    CHECK(row.M_x > row.moduli);
  }
  CHECK_THROWS_AS(counterexample_demo(0.0, {100}), Error);
}

TEST_CASE("prime moduli Weyl averages") {
  const LocalSystem quad = roots_system(IntPolynomial::parse("1,0,1"));
  const PrimeWeylReport zero = prime_moduli_weyl(quad, 2000, {0});
  CHECK(zero.rows[0].uniform.real() == doctest::Approx(1.0));
  const PrimeWeylReport lin = prime_moduli_weyl(roots_system(IntPolynomial::parse("0,1")), 2000, {1, 2, 7});
  for (const PrimeWeylRow& row : lin.rows) CHECK(row.uniform.real() == doctest::Approx(1.0));
  const PrimeWeylReport big = prime_moduli_weyl(quad, 100'000, {1}, 4);
  CHECK(std::abs(big.rows[0].uniform) < 0.1);
  CHECK(big.primes == 9592);
  CHECK_THROWS_AS(prime_moduli_weyl(veronese_system(IntPolynomial::parse("1,0,1"), 3), 100, {1}), Error);
}

TEST_CASE("function field experiment") {
  const FunctionFieldReport r = function_field_experiment(BivariatePoly::parse("1,0,1;-1,2,0"), {101, 211, 401, 809}, 3);
  REQUIRE(r.c2_exponent);
  CHECK(*r.c2_exponent == doctest::Approx(-0.5).epsilon(1e-6));
  for (const FunctionFieldRow& row : r.rows) CHECK(row.c1_at_zero == 1.0);
  const FunctionFieldReport flat = function_field_experiment(BivariatePoly::parse("1,0,2;-1,1,0"), {101, 211}, 2);
  CHECK_FALSE(flat.c2_exponent);
  CHECK_THROWS_AS(function_field_experiment(BivariatePoly::parse("1,0,1;-1,2,0"), {101}, 0), Error);
}
