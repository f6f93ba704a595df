#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "hetquant/distributions.hpp"
#include "oracles.hpp"

using namespace hetquant;

namespace {

const BaseKind kAllBases[] = {BaseKind::Normal, BaseKind::Cauchy, BaseKind::Laplace,
                              BaseKind::Uniform, BaseKind::Logistic};

}  // namespace

TEST_CASE("cdf examples") {
  CHECK(cdf(ScaledLaw(BaseKind::Normal, 1.0), 0.0) == 0.5);
  CHECK(cdf(ScaledLaw(BaseKind::Cauchy, 2.0), 2.0) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(cdf(ScaledLaw(BaseKind::Laplace, 1.0), -1.0) ==
        doctest::Approx(std::exp(-1.0) / 2.0).epsilon(1e-15));
  CHECK(cdf(ScaledLaw(BaseKind::Normal, 1.0), 1.0) ==
        doctest::Approx(0.841344746068542948).epsilon(1e-15));
}

TEST_CASE("normal cdf tail accuracy") {
  // Phi(-10) and Phi(-30) from mpmath.
  const ScaledLaw n(BaseKind::Normal, 1.0);
  CHECK(cdf(n, -10.0) == doctest::Approx(7.6198530241605260659733432515993e-24).epsilon(1e-13));
  CHECK(cdf(n, -30.0) == doctest::Approx(4.906713927148187059533809256580e-198).epsilon(1e-12));
  CHECK(std::abs(cdf(n, 3.0) - 0.99865010196836991) <= 1e-15);
}

TEST_CASE("pdf examples") {
  CHECK(pdf(ScaledLaw(BaseKind::Normal, 1.0), 0.0) ==
        doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-15));
  CHECK(pdf(ScaledLaw(BaseKind::Cauchy, 1.0), 0.0) ==
        doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-15));
  CHECK(pdf(ScaledLaw(BaseKind::Laplace, 2.0), 0.0) == 0.25);
  CHECK(pdf(ScaledLaw(BaseKind::Uniform, 1.0), 1.0) == 0.5);  // one-sided value at the kink
  CHECK(pdf(ScaledLaw(BaseKind::Uniform, 1.0), 1.5) == 0.0);
}

TEST_CASE("quantile and sample examples") {
  for (auto kind : kAllBases) CHECK(quantile(ScaledLaw(kind, 3.0), 0.5) == 0.0);
  CHECK(quantile(ScaledLaw(BaseKind::Cauchy, 1.0), 0.75) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(quantile(ScaledLaw(BaseKind::Normal, 3.0), 0.841344746068542948) ==
        doctest::Approx(3.0).epsilon(1e-12));
  CHECK(sample(ScaledLaw(BaseKind::Uniform, 1.0), 0.25) == -0.5);
  CHECK(sample(ScaledLaw(BaseKind::Laplace, 1.0), 0.25) ==
        doctest::Approx(std::log(0.5)).epsilon(1e-15));
}

TEST_CASE("domain errors") {
  const ScaledLaw law(BaseKind::Normal, 1.0);
  CHECK_THROWS_AS(cdf(law, std::nan("")), std::domain_error);
  CHECK_THROWS_AS(cdf(law, INFINITY), std::domain_error);
  CHECK_THROWS_AS(pdf(law, -INFINITY), std::domain_error);
  CHECK_THROWS_AS(quantile(law, 0.0), std::domain_error);
  CHECK_THROWS_AS(quantile(law, 1.0), std::domain_error);
  CHECK_THROWS_AS(sample(law, 1.0), std::domain_error);
  CHECK_THROWS_AS(ScaledLaw(BaseKind::Cauchy, 0.0), std::domain_error);
  CHECK_THROWS_AS(ScaledLaw(BaseKind::Cauchy, -1.0), std::domain_error);
  CHECK_THROWS_AS(HeteroSample({}), std::domain_error);
}

TEST_CASE("base laws are symmetric with D(0) = 1/2 and unit mass") {
  for (auto kind : kAllBases) {
    CAPTURE(to_string(kind));
    CHECK(base_cdf(kind, 0.0) == 0.5);
    // Trapezoid on [-L, L] plus the closed-form tail mass outside. The uniform
    // density jumps at +-1, so its interval ends there.
    const double limit = kind == BaseKind::Cauchy ? 2000.0 : kind == BaseKind::Uniform ? 1.0 : 40.0;
    const int steps = kind == BaseKind::Cauchy ? 4'000'000 : 400'000;
    const double h = 2.0 * limit / steps;
    double mass = 0.5 * (base_pdf(kind, -limit) + base_pdf(kind, limit));
    for (int i = 1; i < steps; ++i) mass += base_pdf(kind, -limit + i * h);
    mass *= h;
    mass += base_cdf(kind, -limit) + (1.0 - base_cdf(kind, limit));
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("property: monotone cdf and quantile round trip") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> x_dist(-20.0, 20.0);
  std::uniform_real_distribution<double> log_sigma(-3.0, 3.0);
  for (auto kind : kAllBases) {
    CAPTURE(to_string(kind));
    for (int i = 0; i < 2000; ++i) {
      const ScaledLaw law(kind, std::exp(log_sigma(rng)));
      double a = x_dist(rng), b = x_dist(rng);
      if (a > b) std::swap(a, b);
      REQUIRE(cdf(law, a) <= cdf(law, b));
    }
    const ScaledLaw law(kind, 1.7);
    for (int i = 1; i <= 999; ++i) {
      const double p = i / 1000.0;
      REQUIRE(std::abs(cdf(law, quantile(law, p)) - p) <= 1e-10);
    }
  }
}

TEST_CASE("property: scale equivariance is exact") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> x_dist(-50.0, 50.0);
  std::uniform_real_distribution<double> log_sigma(-4.0, 4.0);
  for (auto kind : kAllBases) {
    for (int i = 0; i < 1000; ++i) {
      const double sigma = std::exp(log_sigma(rng));
      const double x = x_dist(rng);
      REQUIRE(cdf(ScaledLaw(kind, sigma), x) == cdf(ScaledLaw(kind, 1.0), x / sigma));
    }
  }
}

TEST_CASE("property: pdf matches finite difference of cdf") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> z_dist(-4.0, 4.0);
  for (auto kind : kAllBases) {
    CAPTURE(to_string(kind));
    for (int i = 0; i < 500; ++i) {
      const double sigma = std::exp(std::uniform_real_distribution<double>(-2.0, 2.0)(rng));
      const ScaledLaw law(kind, sigma);
      const double z = z_dist(rng);
      const double h = 1e-5 * sigma;
      // Keep the stencil away from the kinks.
      if (kind == BaseKind::Laplace && std::abs(z) < 1e-3) continue;
      if (kind == BaseKind::Uniform && (std::abs(std::abs(z) - 1.0) < 1e-3 || std::abs(z) > 1.0)) continue;
      const double x = z * sigma;
      const double fd = oracle::central_difference([&](double v) { return cdf(law, v); }, x, h);
      const double exact = pdf(law, x);
      CAPTURE(x);
      REQUIRE(std::abs(fd - exact) <= 1e-6 * exact);
    }
  }
}

TEST_CASE("parse laws and sample files") {
  const auto law = parse_law("cauchy:2.5");
  CHECK(law.base() == BaseKind::Cauchy);
  CHECK(law.sigma() == 2.5);

  const auto sample = parse_sample_text(
      "# two groups\n"
      "normal:1000 x80\n"
      "\n"
      "normal:1 x16   # clean data\n"
      "laplace:0.5\n");
  CHECK(sample.size() == 97);
  CHECK(sample[0] == ScaledLaw(BaseKind::Normal, 1000.0));
  CHECK(sample[95] == ScaledLaw(BaseKind::Normal, 1.0));
  CHECK(sample[96] == ScaledLaw(BaseKind::Laplace, 0.5));
  CHECK_FALSE(sample.common_base().has_value());

  CHECK(parse_sample_text("uniform:2 x3").common_base() == BaseKind::Uniform);
}

TEST_CASE("parse errors carry line numbers") {
  auto line_of = [](const char* text) -> std::size_t {
    try {
      parse_sample_text(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("normal:1\nstudent:3\n") == 2);
  CHECK(line_of("normal:1\n\nnormal:-1\n") == 3);
  CHECK(line_of("normal:abc") == 1);
  CHECK(line_of("normal:1 y4") == 1);
  CHECK(line_of("normal:1 x0") == 1);
  CHECK_THROWS_AS(parse_sample_text("# nothing\n"), ParseError);
  CHECK_THROWS_WITH(parse_sample_text("logistic:1\ncauchy\n"), doctest::Contains("line 2"));
}
