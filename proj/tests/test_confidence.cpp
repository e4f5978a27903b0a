#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "prds/confidence.hpp"
#include "prds/error.hpp"
#include "prds/rng.hpp"

using namespace prds;

namespace {

ConfidenceParams one_sided(double alpha) {
  return ConfidenceParams{alpha, QuantileConvention::kOneSided};
}

ConfidenceParams two_sided(double alpha) {
  return ConfidenceParams{alpha, QuantileConvention::kTwoSided};
}

// The bound as printed: nested radical, no quadratic rearrangement, in
// extended precision. Used to cross-check the production evaluation.
double bound_reference(double n_in, double z_in) {
  const long double n = n_in;
  const long double z2 = static_cast<long double>(z_in) * z_in;
  const long double radical =
      sqrtl((2.0l * n + z2) * (2.0l * n + z2) - 4.0l * (n + z2 + 1.0l) * n * n / (n + 1.0l));
  return static_cast<double>((2.0l * n + z2 - radical) / (2.0l * (n + z2 + 1.0l)));
}

}  // namespace

TEST_CASE("normal quantile reference values") {
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.9599639845400545).epsilon(1e-9));
  CHECK(normal_quantile(0.95) == doctest::Approx(1.6448536269514722).epsilon(1e-9));
  CHECK(normal_quantile(0.995) == doctest::Approx(2.5758293035903855).epsilon(1e-9));
}

TEST_CASE("normal quantile symmetry and round trip") {
  for (double p : {0.001, 0.01, 0.1, 0.3, 0.6, 0.9, 0.99, 0.9999}) {
    CHECK(normal_quantile(p) == doctest::Approx(-normal_quantile(1.0 - p)).epsilon(1e-10));
    const double x = normal_quantile(p);
    const double back = 0.5 * std::erfc(-x / std::sqrt(2.0));
    CHECK(back == doctest::Approx(p).epsilon(1e-12));
  }
}

TEST_CASE("normal quantile domain") {
  CHECK_THROWS_AS(normal_quantile(0.0), DomainError);
  CHECK_THROWS_AS(normal_quantile(1.0), DomainError);
  CHECK_THROWS_AS(normal_quantile(-0.5), DomainError);
}

TEST_CASE("confidence params derive z by convention") {
  CHECK(one_sided(0.05).z() == doctest::Approx(1.6448536269514722).epsilon(1e-8));
  CHECK(two_sided(0.05).z() == doctest::Approx(1.9599639845400545).epsilon(1e-8));
  CHECK(two_sided(0.01).z() == doctest::Approx(2.5758293035903855).epsilon(1e-8));
}

TEST_CASE("quality bound reproduces the reference table") {
  const auto params = one_sided(0.05);
  const std::pair<std::uint64_t, double> table[] = {
      {50, 0.9168}, {100, 0.9568}, {150, 0.9709},
      {200, 0.9780}, {250, 0.9823}, {300, 0.9852},
  };
  for (const auto& [run, expected] : table) {
    CHECK(std::abs(quality_lower_bound(run, params) - expected) <= 5e-4);
  }
}

TEST_CASE("quality bound regime guard") {
  CHECK_THROWS_AS(quality_lower_bound(49, one_sided(0.05)), DomainError);
  CHECK_NOTHROW(quality_lower_bound(49, one_sided(0.05), /*allow_short_run=*/true));
  CHECK_THROWS_AS(quality_lower_bound(0, one_sided(0.05), true), DomainError);
}

TEST_CASE("quality bound strictly increases and tends to 1") {
  const auto params = one_sided(0.05);
  double prev = 0.0;
  for (std::uint64_t run = 50; run <= 100000; run = run < 200 ? run + 1 : run * 5 / 4) {
    const double b = quality_lower_bound(run, params);
    CHECK(b > prev);
    CHECK(b < 1.0);
    prev = b;
  }
  CHECK(quality_lower_bound(1000000, params) > 0.99999);
}

TEST_CASE("quality bound matches the printed radical form to 1e-12") {
  for (const auto& params : {one_sided(0.05), two_sided(0.01), one_sided(0.01), two_sided(0.05)}) {
    const double z = params.z();
    for (std::uint64_t run : {50u, 77u, 163u, 300u, 1234u, 99999u}) {
      const double a = quality_lower_bound(run, params);
      const double b = bound_reference(static_cast<double>(run), z);
      CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)));
    }
  }
}

TEST_CASE("required run length worked example") {
  const auto params = two_sided(0.01);
  const auto need = required_run_length(0.95, params);
  CHECK(need.value == 163);
  CHECK_FALSE(need.out_of_regime);
  CHECK(quality_lower_bound(163, params) >= 0.95);
  CHECK(quality_lower_bound(163, params) == doctest::Approx(0.9501).epsilon(1e-3));
}

TEST_CASE("required run length inverts the bound") {
  for (double target : {0.90, 0.95, 0.99}) {
    for (double alpha : {0.01, 0.05}) {
      for (auto conv : {QuantileConvention::kOneSided, QuantileConvention::kTwoSided}) {
        const ConfidenceParams params{alpha, conv};
        const auto need = required_run_length(target, params);
        CHECK(quality_lower_bound(need.value, params, true) >= target);
        CHECK(quality_lower_bound(need.value - 1, params, true) < target);
      }
    }
  }
}

TEST_CASE("required run length degenerate targets") {
  const auto tiny = required_run_length(1e-9, one_sided(0.05));
  CHECK(tiny.value >= 1);
  CHECK(tiny.out_of_regime);
  CHECK_THROWS_AS(required_run_length(1.0, one_sided(0.05)), DomainError);
  CHECK_THROWS_AS(required_run_length(0.0, one_sided(0.05)), DomainError);
}

TEST_CASE("run length test accepts a full streak") {
  RunLengthTest test(3);
  CHECK(test.step(true) == RunVerdict::kPending);
  CHECK(test.step(true) == RunVerdict::kPending);
  CHECK(test.step(true) == RunVerdict::kAccept);
}

TEST_CASE("run length test rejects on failure before the streak completes") {
  RunLengthTest test(3);
  CHECK(test.step(true) == RunVerdict::kPending);
  CHECK(test.step(true) == RunVerdict::kPending);
  CHECK(test.step(false) == RunVerdict::kReject);
  CHECK(test.streak() == 2);
  test.reset();
  CHECK(test.streak() == 0);
}

TEST_CASE("run length acceptance rate matches the closed form") {
  // A run of I=163 successes at p=0.99 completes with probability 0.99^163.
  const double p = 0.99;
  const std::uint64_t required = 163;
  const double analytic = std::pow(p, static_cast<double>(required));
  Rng rng(20260809);
  int accepted = 0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    RunLengthTest test(required);
    RunVerdict verdict = RunVerdict::kPending;
    for (std::uint64_t i = 0; i < required; ++i) {
      verdict = test.step(rng.unit() < p);
      if (verdict != RunVerdict::kPending) break;
    }
    if (verdict == RunVerdict::kAccept) ++accepted;
  }
  const double rate = static_cast<double>(accepted) / trials;
  CHECK(std::abs(rate - analytic) < 0.02);
}
