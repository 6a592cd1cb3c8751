#include <doctest.h>

#include <cmath>
#include <random>

#include "infomax/asymptotics.hpp"
#include "infomax/bernoulli.hpp"
#include "oracles.hpp"

using namespace infomax;

TEST_CASE("kl_bernoulli closed form") {
  CHECK(kl_bernoulli(0.5, 0.5) == 0.0);
  CHECK(kl_bernoulli(0.8, 0.9) == doctest::Approx(0.0444030).epsilon(1e-5));
  CHECK(kl_bernoulli(0.8, 0.9) ==
        doctest::Approx(double(oracle::kl(0.8L, 0.9L))).epsilon(1e-13));
  CHECK(kl_bernoulli(1.0, 0.9) == doctest::Approx(std::log(1.0 / 0.9)).epsilon(1e-13));
  CHECK(kl_bernoulli(0.0, 0.3) == doctest::Approx(std::log(1.0 / 0.7)).epsilon(1e-13));
  CHECK(kl_bernoulli(0.5, 0.0) == kInfinity);
  CHECK(kl_bernoulli(0.5, 1.0) == kInfinity);
  CHECK(kl_bernoulli(0.0, 0.0) == 0.0);
  CHECK(kl_bernoulli(1.0, 1.0) == 0.0);
}

TEST_CASE("kl_bernoulli nonnegative, zero only on the diagonal") {
  for (int i = 0; i <= 100; ++i) {
    for (int j = 0; j <= 100; ++j) {
      double p = i / 100.0, q = j / 100.0;
      double d = kl_bernoulli(p, q);
      CHECK(d >= 0.0);
      if (i == j) CHECK(d == 0.0);
      if (i != j) CHECK(d > 0.0);
    }
  }
}

TEST_CASE("kl bounded by chi-squared distance at the equalizing point") {
  // checked on the (pi2, pi_so) pairs the dominance proof uses
  for (int i = 1; i < 40; ++i) {
    for (int j = 1; j < 40; ++j) {
      double p1 = i / 40.0, p2 = j / 40.0;
      if (p1 == p2) continue;
      double q = optimal_split(std::max(p1, p2), std::min(p1, p2)).pi_s;
      double chi2 = (p2 - q) * (p2 - q) / (q * (1.0 - q));
      CHECK(kl_bernoulli(p2, q) <= chi2 + 1e-12);
    }
  }
}

TEST_CASE("kl convex in the second argument") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int it = 0; it < 500; ++it) {
    double p = u(rng);
    double q1 = u(rng), q2 = u(rng);
    double mid = 0.5 * (q1 + q2);
    CHECK(kl_bernoulli(p, mid) <= 0.5 * (kl_bernoulli(p, q1) + kl_bernoulli(p, q2)) + 1e-12);
  }
}

TEST_CASE("binary_entropy") {
  CHECK(binary_entropy(0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.9) == doctest::Approx(0.3250829).epsilon(1e-6));
  CHECK(binary_entropy(0.9) ==
        doctest::Approx(double(oracle::entropy(0.9L))).epsilon(1e-13));
}

TEST_CASE("beta_log_pdf values") {
  CHECK(beta_log_pdf({0, 0}, 0.3) == 0.0);
  CHECK(beta_log_pdf({1, 1}, 0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(beta_log_pdf({2, 1}, 0.5) == doctest::Approx(std::log(1.5)).epsilon(1e-12));
  CHECK(beta_log_pdf({3, 2}, 0.0) == -kInfinity);
  CHECK(beta_log_pdf({3, 2}, 1.0) == -kInfinity);
  CHECK(beta_log_pdf({3, 3}, 1.0) == doctest::Approx(std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("beta_log_pdf integrates to one") {
  const ArmStats cases[] = {{1, 0}, {2, 1}, {10, 6}, {100, 73}, {1000, 900}, {10000, 9000}};
  for (const auto& s : cases) {
    long double total =
        oracle::simpson01([&](long double x) { return std::exp((long double)beta_log_pdf(s, double(x))); });
    CHECK(double(total) == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("beta_cdf matches quadrature and boundary values") {
  CHECK(beta_cdf({0, 0}, 0.3) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(beta_cdf({1, 1}, 0.5) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(beta_cdf({12345, 10000}, 1.0) == 1.0);
  CHECK(beta_cdf({12345, 10000}, 0.0) == 0.0);

  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::int64_t> plays_d(1, 2000);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int it = 0; it < 100; ++it) {
    std::int64_t n = plays_d(rng);
    std::int64_t w = std::uniform_int_distribution<std::int64_t>(0, n)(rng);
    double x = u(rng);
    double mine = beta_cdf({n, w}, x);
    double ref = double(oracle::beta_cdf(w, n, x, 16));
    CHECK(mine == doctest::Approx(ref).epsilon(1e-8));
  }
}

TEST_CASE("beta_cdf monotone in x") {
  ArmStats s{50, 35};
  double prev = -1.0;
  for (int i = 0; i <= 200; ++i) {
    double v = beta_cdf(s, i / 200.0);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("record and record_batch") {
  ArmStats s{7, 3};
  CHECK(record(s, true) == ArmStats{8, 4});
  CHECK(record(s, false) == ArmStats{8, 3});
  CHECK(record_batch({0, 0}, 10, 6) == ArmStats{10, 6});
  CHECK(record(record({5, 2}, true), false) == record_batch({5, 2}, 2, 1));
  CHECK_THROWS_AS(record_batch({0, 0}, 2, 3), std::invalid_argument);
  CHECK_THROWS_AS(record_batch({0, 0}, -1, 0), std::invalid_argument);
}

TEST_CASE("counters hold 1e9 without overflow") {
  ArmStats s = record_batch({0, 0}, 1000000000, 900000000);
  CHECK(s.sample_mean() == doctest::Approx(0.9).epsilon(1e-15));
  double lp = beta_log_pdf(s, 0.9);
  CHECK(std::isfinite(lp));
  // density at the mean of a sigma ~ 1e-5 posterior: ln(1/(sqrt(2 pi) sigma))
  double sigma = std::sqrt(0.09 / 1e9);
  CHECK(lp == doctest::Approx(-std::log(std::sqrt(2 * M_PI) * sigma)).epsilon(1e-3));
}
