#include <cmath>

#include "doctest.h"
#include "stuckgate/recovery.hpp"
#include "test_support.hpp"

using namespace stuckgate;
using testsupport::TestRng;

namespace {

void check_distribution_invariants(const RecoveryDistribution& d) {
  double prev = 0.0;
  for (std::size_t i = 0; i < d.per_pass.size(); ++i) {
    CHECK(d.per_pass[i].probability >= 0.0);
    CHECK(d.per_pass[i].probability <= 1.0 + 1e-12);
    CHECK(d.cumulative[i] >= prev - 1e-15);
    prev = d.cumulative[i];
  }
  CHECK(prev <= 1.0 + 1e-12);
  CHECK(d.censored >= -1e-12);
}

}  // namespace

TEST_CASE("series terms are the exact printed rationals") {
  CHECK(series_term(1) == Rational(1, 2));
  CHECK(series_term(2) == Rational(1, 8));
  CHECK(series_term(3) == Rational(1, 16));
  CHECK(series_term(4) == Rational(5, 128));
  CHECK(series_term(5) == Rational(7, 256));
  CHECK_THROWS_AS(series_term(0), std::invalid_argument);
}

TEST_CASE("series partial sums") {
  CHECK(series_partial_sum(1) == Rational(1, 2));
  CHECK(series_partial_sum(5) == Rational(193, 256));
  CHECK(series_partial_sum(5).to_double() ==
        doctest::Approx(0.75390625).epsilon(1e-15));
}

TEST_CASE("partial sums match the central-binomial closed form") {
  for (int n = 1; n <= 15; ++n) {
    const Rational closed =
        Rational(1) - Rational(binomial(2 * n, n),
                               std::int64_t{1} << (2 * n));
    CHECK(series_partial_sum(n) == closed);
  }
}

TEST_CASE("partial sums increase strictly and stay below one") {
  Rational prev(0);
  for (int n = 1; n <= 30; ++n) {
    const Rational sum = series_partial_sum(n);
    CHECK(prev < sum);
    CHECK(sum < Rational(1));
    prev = sum;
  }
  // monotone and bounded, approaching one
  CHECK(series_partial_sum(30).to_double() > 0.89);
}

TEST_CASE("binomial coefficients") {
  CHECK(binomial(0, 0) == 1);
  CHECK(binomial(10, 5) == 252);
  CHECK(binomial(30, 15) == 155117520);
  CHECK(binomial(60, 30) == 118264581564861424LL);
  CHECK_THROWS_AS(binomial(5, 6), std::invalid_argument);
  CHECK_THROWS_AS(binomial(80, 40), std::overflow_error);
}

TEST_CASE("first passage oracle equals the series exactly") {
  const RecoveryDistribution oracle = first_passage_oracle(16);
  REQUIRE(oracle.per_pass.size() == 8);
  for (int n = 1; n <= 8; ++n) {
    REQUIRE(oracle.per_pass[n - 1].exact.has_value());
    CHECK(*oracle.per_pass[n - 1].exact == series_term(n));
  }
  Rational cum5(0);
  for (int n = 1; n <= 5; ++n) cum5 = cum5 + *oracle.per_pass[n - 1].exact;
  CHECK(cum5 == Rational(193, 256));
  check_distribution_invariants(oracle);
  CHECK_THROWS_AS(first_passage_oracle(21), std::length_error);
}

TEST_CASE("recovery_series packaging") {
  const RecoveryDistribution d = recovery_series(5);
  REQUIRE(d.per_pass.size() == 5);
  CHECK(d.per_pass[0].probability == 0.5);
  CHECK(d.per_pass[4].probability == doctest::Approx(7.0 / 256.0));
  CHECK(d.cumulative[4] == doctest::Approx(193.0 / 256.0).epsilon(1e-15));
  check_distribution_invariants(d);
  CHECK_THROWS_AS(recovery_series(31), std::length_error);
}

TEST_CASE("exact recovery at the nominal angle succeeds immediately") {
  TestRng rng(201);
  for (int i = 0; i < 10; ++i) {
    const auto [alpha, beta] = testsupport::random_amplitude_pair(rng);
    const RecoveryDistribution d =
        exact_recovery_distribution(alpha, beta, M_PI / 4.0, 5);
    CHECK(d.per_pass[0].probability == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.censored == doctest::Approx(0.0).epsilon(1e-12));
    check_distribution_invariants(d);
  }
  // the Z-parity twin of the nominal angle also recovers on pass 1
  const RecoveryDistribution twin = exact_recovery_distribution(
      std::sqrt(0.3), std::sqrt(0.7), 3.0 * M_PI / 4.0, 5);
  CHECK(twin.per_pass[0].probability == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("exact recovery of a collapsed angle never succeeds") {
  for (double theta : {0.0, M_PI / 2.0}) {
    const RecoveryDistribution d = exact_recovery_distribution(
        std::sqrt(0.3), std::sqrt(0.7), theta, 20);
    for (const PassProbability& p : d.per_pass)
      CHECK(p.probability == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(d.censored == doctest::Approx(1.0).epsilon(1e-12));
  }
  // basis states, by contrast, survive any angle
  const RecoveryDistribution basis =
      exact_recovery_distribution(1.0, 0.0, 0.0, 5);
  CHECK(basis.per_pass[0].probability == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("exact recovery matches the brute-force protocol tree") {
  // the worked fixture: balanced amplitudes, 30 degrees
  const double r = 1.0 / std::sqrt(2.0);
  const auto oracle =
      testsupport::protocol_recovery_tree(r, r, M_PI / 6.0, 3);
  CHECK(oracle.per_opportunity[0] == doctest::Approx(0.375).epsilon(1e-12));
  CHECK(oracle.per_opportunity[1] ==
        doctest::Approx(0.0703125).epsilon(1e-12));

  const RecoveryDistribution d =
      exact_recovery_distribution(r, r, M_PI / 6.0, 3);
  REQUIRE(d.per_pass.size() == 3);
  CHECK(d.per_pass[0].probability == doctest::Approx(0.375).epsilon(1e-12));
  CHECK(d.per_pass[1].probability ==
        doctest::Approx(0.0703125).epsilon(1e-12));
  for (int n = 0; n < 3; ++n)
    CHECK(d.per_pass[n].probability ==
          doctest::Approx(oracle.per_opportunity[n]).epsilon(1e-12));

  // recovery mass is independent of the amplitudes for generic angles
  TestRng rng(202);
  for (int i = 0; i < 10; ++i) {
    const auto [alpha, beta] = testsupport::random_amplitude_pair(rng);
    const double theta = rng.uniform(0.1, 1.4);
    const auto tree = testsupport::protocol_recovery_tree(alpha, beta, theta, 2);
    const RecoveryDistribution dist =
        exact_recovery_distribution(alpha, beta, theta, 2);
    for (int n = 0; n < 2; ++n)
      CHECK(dist.per_pass[n].probability ==
            doctest::Approx(tree.per_opportunity[n]).epsilon(1e-12));
    const double cs = std::cos(theta) * std::sin(theta);
    CHECK(dist.per_pass[0].probability ==
          doctest::Approx(2.0 * cs * cs).epsilon(1e-12));
  }
}

TEST_CASE("exact recovery cumulative mass stays below one") {
  TestRng rng(203);
  for (int i = 0; i < 50; ++i) {
    const auto [alpha, beta] = testsupport::random_amplitude_pair(rng);
    const double theta = rng.uniform(-M_PI, M_PI);
    const RecoveryDistribution d =
        exact_recovery_distribution(alpha, beta, theta, 12);
    check_distribution_invariants(d);
    // per-pass mass plus censored mass accounts for everything
    CHECK(d.cumulative.back() + d.censored ==
          doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK_THROWS_AS(
      exact_recovery_distribution(1.0, 0.0, 0.3, 31), std::length_error);
  CHECK_THROWS_AS(
      exact_recovery_distribution(1.0, 0.5, 0.3, 5), std::invalid_argument);
}

TEST_CASE("exact recovery converges to 1 - |cos 2 theta|") {
  for (double theta : {0.3, 0.6, M_PI / 6.0}) {
    const RecoveryDistribution d = exact_recovery_distribution(
        std::sqrt(0.4), std::sqrt(0.6), theta, 30);
    CHECK(d.cumulative.back() ==
          doctest::Approx(1.0 - std::abs(std::cos(2.0 * theta)))
              .epsilon(5e-3));
  }
}

TEST_CASE("idealized Monte Carlo tracks the series within 4 sigma") {
  const std::uint64_t trials = 1000000;
  const RecoveryDistribution mc = monte_carlo_recovery(
      1.0, 0.0, 0.0, trials, 42, SamplingModel::idealized, 8, 1);
  REQUIRE(mc.per_pass.size() == 8);
  for (int n = 1; n <= 4; ++n) {
    const double p = series_term(n).to_double();
    const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    CHECK(std::abs(mc.per_pass[n - 1].probability - p) < 4.0 * sigma);
    CHECK(mc.per_pass[n - 1].std_error ==
          doctest::Approx(sigma).epsilon(0.05));
  }
  check_distribution_invariants(mc);
}

TEST_CASE("Monte Carlo replay is identical across shard counts") {
  const auto run = [&](int threads) {
    return monte_carlo_recovery(std::sqrt(0.3), std::sqrt(0.7), M_PI / 6.0,
                                40000, 1234, SamplingModel::exact_born, 10,
                                threads);
  };
  const RecoveryDistribution a = run(1);
  const RecoveryDistribution b = run(3);
  const RecoveryDistribution c = run(7);
  for (std::size_t i = 0; i < a.per_pass.size(); ++i) {
    CHECK(a.per_pass[i].probability == b.per_pass[i].probability);
    CHECK(a.per_pass[i].probability == c.per_pass[i].probability);
  }
  CHECK(a.censored == b.censored);
  CHECK(a.censored == c.censored);
}

TEST_CASE("exact-born Monte Carlo at the nominal angle recovers instantly") {
  const RecoveryDistribution mc = monte_carlo_recovery(
      std::sqrt(0.3), std::sqrt(0.7), M_PI / 4.0, 20000, 7,
      SamplingModel::exact_born, 5, 2);
  CHECK(mc.per_pass[0].probability == 1.0);
  CHECK(mc.censored == 0.0);
}

TEST_CASE("exact-born Monte Carlo agrees with the exact tree") {
  const std::uint64_t trials = 200000;
  const RecoveryDistribution mc = monte_carlo_recovery(
      std::sqrt(0.5), std::sqrt(0.5), M_PI / 6.0, trials, 99,
      SamplingModel::exact_born, 6, 4);
  const RecoveryDistribution exact = exact_recovery_distribution(
      std::sqrt(0.5), std::sqrt(0.5), M_PI / 6.0, 6);
  for (int n = 0; n < 3; ++n) {
    const double p = exact.per_pass[n].probability;
    const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    CHECK(std::abs(mc.per_pass[n].probability - p) < 4.0 * sigma);
  }
}

TEST_CASE("Monte Carlo argument errors") {
  CHECK_THROWS_AS(monte_carlo_recovery(1.0, 0.0, 0.0, 0, 1,
                                       SamplingModel::idealized, 5, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(monte_carlo_recovery(1.0, 0.0, 0.0, 10, 1,
                                       SamplingModel::idealized, 0, 1),
                  std::invalid_argument);
}

TEST_CASE("quantized recovery with an exact gate copy is perfect") {
  const QuantizedRecoverySummary s = quantized_recovery(
      std::sqrt(0.3), std::sqrt(0.7), 0.3, 0.3, 20000, 5, 40);
  CHECK(s.theta_estimate == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(s.declared_trials > 0);
  CHECK(s.mean_fidelity == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(s.min_fidelity == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("quantized recovery fails when theta rounds to zero") {
  const QuantizedRecoverySummary s = quantized_recovery(
      std::sqrt(0.3), std::sqrt(0.7), 0.01, 0.1, 200000, 5, 25);
  CHECK(s.theta_estimate == 0.0);
  CHECK(s.declared_trials > 0);
  // declared recoveries hold a collapsed state, not the input
  CHECK(s.mean_fidelity < 0.999);
  CHECK(s.min_fidelity <= 0.3 + 1e-9);
  CHECK(s.declared_fraction < 0.01);
}

TEST_CASE("quantized recovery precision A/B comparison") {
  const QuantizedRecoverySummary fine = quantized_recovery(
      std::sqrt(0.3), std::sqrt(0.7), 0.01, 0.001, 100000, 11, 25);
  const QuantizedRecoverySummary coarse = quantized_recovery(
      std::sqrt(0.3), std::sqrt(0.7), 0.01, 0.1, 100000, 11, 25);
  CHECK(fine.declared_trials > 0);
  CHECK(coarse.declared_trials > 0);
  CHECK(fine.mean_fidelity >= 0.999);
  CHECK(coarse.mean_fidelity < 0.999);
}

TEST_CASE("quantized recovery argument errors") {
  CHECK_THROWS_AS(
      quantized_recovery(1.0, 0.0, 0.3, 0.0, 10, 1, 5), std::invalid_argument);
  CHECK_THROWS_AS(
      quantized_recovery(1.0, 0.0, 0.3, 0.1, 0, 1, 5), std::invalid_argument);
}
