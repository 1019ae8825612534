#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "htsgd/core/errors.hpp"
#include "htsgd/noise/noise.hpp"

using namespace htsgd;

TEST_CASE("pareto coordinate examples") {
  CHECK(pareto_coordinate(2.0, 0.25, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(pareto_coordinate(1.0, 0.1, -1.0) == doctest::Approx(-10.0).epsilon(1e-15));
}

TEST_CASE("pareto coordinates have magnitude at least one and a fair sign") {
  RandomStream rng(2, 0);
  const ParetoNoise noise = make_pareto(1.6, 5);
  long positive = 0, total = 0;
  double smallest = 1e300;
  for (int k = 0; k < 20000; ++k) {
    const Vector xi = sample_pareto(noise, rng);
    for (int j = 0; j < xi.size(); ++j) {
      smallest = std::min(smallest, std::abs(xi[j]));
      positive += xi[j] > 0;
      ++total;
    }
  }
  CHECK(smallest >= 1.0);
  CHECK(std::abs(double(positive) / double(total) - 0.5) < 4.0 * 0.5 / std::sqrt(double(total)));
  CHECK(rng.position() == 2u * 5u * 20000u);
}

TEST_CASE("pareto mean is zero under symmetric truncation") {
  RandomStream rng(3, 0);
  const ParetoNoise noise = make_pareto(1.6, 1);
  const long n = 1000000;
  const double cap = 100.0;
  double s = 0, s2 = 0;
  for (long i = 0; i < n; ++i) {
    const double x = std::clamp(sample_pareto(noise, rng)[0], -cap, cap);
    s += x;
    s2 += x * x;
  }
  const double mean = s / n;
  const double se = std::sqrt((s2 / n - mean * mean) / n);
  CHECK(std::abs(mean) <= 4.0 * se);
}

TEST_CASE("pareto raw moment closed form against quadrature and sampling") {
  for (auto [alpha, p] : {std::pair{2.5, 1.2}, std::pair{3.0, 1.5}, std::pair{2.0, 1.5}}) {
    // integral of u^(-p/alpha) over (0,1) with u = v^m to flatten the singularity
    const int m = 8;
    const int n = 200000;
    double quad = 0.0;
    for (int i = 0; i < n; ++i) {
      const double v = (i + 0.5) / n;
      quad += m * std::pow(v, m - 1) * std::pow(std::pow(v, m), -p / alpha) / n;
    }
    CHECK(pareto_raw_moment(alpha, p) == doctest::Approx(quad).epsilon(1e-6));

    RandomStream rng(4, std::uint64_t(alpha * 10 + p));
    const ParetoNoise noise = make_pareto(alpha, 1);
    double acc = 0.0;
    const long draws = 1000000;
    for (long i = 0; i < draws; ++i) acc += std::pow(std::abs(sample_pareto(noise, rng)[0]), p);
    CHECK(acc / draws == doctest::Approx(pareto_raw_moment(alpha, p)).epsilon(0.05));
  }
  CHECK_THROWS_AS(pareto_raw_moment(1.5, 1.5), ContractViolation);
  CHECK_THROWS_AS(pareto_raw_moment(1.2, 1.8), ContractViolation);
  CHECK(pareto_vector_moment_bound(2.0, 1.5, 10) == doctest::Approx(40.0));
}

TEST_CASE("stable law at alpha = 2 is normal with variance two") {
  RandomStream rng(5, 0);
  const StableNoise noise = make_stable(2.0);
  const long n = 1000000;
  double s = 0, s2 = 0, s4 = 0;
  for (long i = 0; i < n; ++i) {
    const double x = sample_stable(noise, rng);
    s += x;
    s2 += x * x;
    s4 += x * x * x * x;
  }
  const double var = s2 / n - (s / n) * (s / n);
  CHECK(var == doctest::Approx(2.0).epsilon(0.01));
  const double kurtosis = (s4 / n) / (var * var);
  CHECK(kurtosis == doctest::Approx(3.0).epsilon(0.02));
  CHECK(rng.position() == 2u * std::uint64_t(n));
}

TEST_CASE("stable median is zero") {
  for (double alpha : {1.2, 1.6, 2.0}) {
    RandomStream rng(6, std::uint64_t(alpha * 10));
    const StableNoise noise = make_stable(alpha);
    std::vector<double> xs(100000);
    for (auto& x : xs) x = sample_stable(noise, rng);
    std::nth_element(xs.begin(), xs.begin() + 50000, xs.end());
    CHECK(std::abs(xs[50000]) < 0.03);
  }
}

TEST_CASE("stable tail decays with index alpha") {
  const double alpha = 1.5;
  RandomStream rng(7, 0);
  const StableNoise noise = make_stable(alpha);
  const long n = 10000000;
  long above30 = 0, above100 = 0;
  for (long i = 0; i < n; ++i) {
    const double x = sample_stable(noise, rng);
    above30 += x > 30.0;
    above100 += x > 100.0;
  }
  const double c = stable_tail_constant(alpha);
  CHECK(c == doctest::Approx(std::tgamma(1.5) * std::sin(0.75 * std::numbers::pi) / std::numbers::pi));
  const double est30 = double(above30) / n * std::pow(30.0, alpha);
  const double est100 = double(above100) / n * std::pow(100.0, alpha);
  const double se100 = std::sqrt(double(above100)) / n * std::pow(100.0, alpha);
  CHECK(est30 > 0.0);
  CHECK(std::abs(est100 - c) <= 4.0 * se100 + 0.03 * c);
  // tail index: the ratio of exceedances matches (100/30)^alpha
  CHECK(std::log(double(above30) / double(above100)) / std::log(100.0 / 30.0) ==
        doctest::Approx(alpha).epsilon(0.05));
}

TEST_CASE("stable moment estimator refuses infinite moments") {
  RandomStream rng(8, 0);
  CHECK_THROWS_AS(estimate_stable_moment(1.5, 1.6, 10, rng), ContractViolation);
  const double m = estimate_stable_moment(2.0, 2.0, 200000, rng);
  CHECK(m == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("empirical moment examples") {
  Vector a(2), b(2), c(2);
  a << 1, 0;
  b << -1, 0;
  c << 2, 0;
  CHECK(empirical_moment({a, b}, Vector::Zero(2), 2.0) == doctest::Approx(1.0));
  CHECK(empirical_moment({c}, Vector::Zero(2), 1.5) == doctest::Approx(2.8284271247461903));
  CHECK_THROWS_AS(empirical_moment({}, Vector::Zero(2), 1.5), ContractViolation);
}

TEST_CASE("pareto moment estimate is stable under doubling the sample") {
  RandomStream rng(9, 0);
  const ParetoNoise noise = make_pareto(2.0, 1);
  std::vector<Vector> samples;
  for (int i = 0; i < 200000; ++i) samples.push_back(sample_pareto(noise, rng));
  const std::vector<Vector> half(samples.begin(), samples.begin() + 100000);
  const double m1 = empirical_moment(half, Vector::Zero(1), 1.5);
  const double m2 = empirical_moment(samples, Vector::Zero(1), 1.5);
  CHECK(std::isfinite(m1));
  CHECK(m2 / m1 >= 0.9);
  CHECK(m2 / m1 <= 1.1);
}

TEST_CASE("von Bahr-Esseen bound for sums of heavy-tailed vectors") {
  long bad = 0;
  std::uint64_t id = 0;
  for (double p : {1.2, 1.5, 2.0}) {
    const double alpha = p < 2.0 ? 1.8 : 2.5;
    for (int n : {2, 8, 32}) {
      RandomStream rng(10, id++);
      const ParetoNoise noise = make_pareto(alpha, 2);
      const long samples = 10000;
      double single = 0, s = 0, s2 = 0;
      for (long k = 0; k < samples; ++k) {
        Vector S = Vector::Zero(2);
        for (int j = 0; j < n; ++j) {
          const Vector X = sample_pareto(noise, rng);
          single += std::pow(X.norm(), p);
          S += X;
        }
        const double v = std::pow(S.norm(), p);
        s += v;
        s2 += v * v;
      }
      const double mean = s / samples;
      const double se = std::sqrt(std::max(s2 / samples - mean * mean, 0.0) / samples);
      bad += mean > 2.0 * single / samples + 3.0 * se;
    }
  }
  CHECK(bad == 0);
}
