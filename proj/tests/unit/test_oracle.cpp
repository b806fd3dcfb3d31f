#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "noisetuner/oracle.hpp"
#include "noisetuner/schedule.hpp"

using namespace noisetuner;

namespace {

Policy make_policy(std::vector<double> mu, std::vector<double> log_sigma) {
  Policy p;
  p.mu = std::move(mu);
  p.log_sigma = std::move(log_sigma);
  return p;
}

}  // namespace

TEST_CASE("pairwise summation matches exact sums") {
  std::vector<double> ones(1000, 1.0);
  CHECK(pairwise_sum(ones) == 1000.0);
  std::vector<double> values;
  double direct = 0.0;
  Rng rng(3);
  for (int i = 0; i < 777; ++i) {
    values.push_back(rng.next_normal());
    direct += values.back();
  }
  CHECK(pairwise_sum(values) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("expected reward matches the quadratic closed form") {
  const GeneratorSpec identity = GeneratorSpec::identity(2);
  const RewardSpec reward = RewardSpec::neg_squared_distance({1.0, -1.0});

  {
    // mu at the target, unit sigma: E[r] = -sum(sigma^2) = -2.
    const Policy p = make_policy({1.0, -1.0}, {0.0, 0.0});
    const McEstimate estimate = expected_reward(p, identity, reward, 100000, 7u);
    CHECK(std::abs(estimate.mean - -2.0) < 3.0 * estimate.std_error);
  }
  {
    // Degenerate sigma at the optimum: reward collapses to zero.
    const Policy p = make_policy({1.0, -1.0}, {-10.0, -10.0});
    const McEstimate estimate = expected_reward(p, identity, reward, 1000, 8u);
    CHECK(std::abs(estimate.mean) < 1e-6);
  }
  {
    // Unit offset per dim, sigma 0.5: E[r] = -(1 + 0.25) * 2 = -2.5.
    const Policy p = make_policy({2.0, 0.0}, {std::log(0.5), std::log(0.5)});
    const McEstimate estimate = expected_reward(p, identity, reward, 100000, 9u);
    CHECK(std::abs(estimate.mean - -2.5) < 3.0 * estimate.std_error);
  }
}

TEST_CASE("expected reward requires at least two samples") {
  const GeneratorSpec identity = GeneratorSpec::identity(1);
  const RewardSpec reward = RewardSpec::neg_squared_distance({0.0});
  CHECK_THROWS_AS(expected_reward(Policy::standard(1), identity, reward, 1, 1u),
                  std::invalid_argument);
}

TEST_CASE("standard error shrinks like the square root of the sample count") {
  const GeneratorSpec identity = GeneratorSpec::identity(1);
  const RewardSpec reward = RewardSpec::neg_squared_distance({0.0});
  const Policy p = Policy::standard(1);
  const McEstimate small = expected_reward(p, identity, reward, 20000, 11u);
  const McEstimate large = expected_reward(p, identity, reward, 80000, 12u);
  const double ratio = small.std_error / large.std_error;
  CHECK(ratio > 2.0 * 0.8);
  CHECK(ratio < 2.0 * 1.2);
}

TEST_CASE("central differences are exact for deterministic quadratics") {
  // Scalar probe f(mu) = mu^2 via the identity generator with sigma -> 0:
  // the noise contribution vanishes, leaving the polynomial itself.
  const GeneratorSpec identity = GeneratorSpec::identity(1);
  const RewardSpec reward = RewardSpec::neg_squared_distance({0.0});
  const Policy p = make_policy({1.0}, {-30.0});
  const ObjectiveGradientEstimate grad =
      fd_objective_gradient(p, identity, reward, 100, 1e-3, 5u);
  // d/dmu of -(mu)^2 at mu=1 is -2, exactly for a central stencil.
  CHECK(grad.mu[0] == doctest::Approx(-2.0).epsilon(1e-9));
}

TEST_CASE("finite differences recover the objective gradient") {
  const GeneratorSpec identity = GeneratorSpec::identity(1);
  const RewardSpec reward = RewardSpec::neg_squared_distance({0.0});
  {
    // At the optimum the mean-gradient vanishes.
    const Policy p = make_policy({0.0}, {0.0});
    const ObjectiveGradientEstimate grad =
        fd_objective_gradient(p, identity, reward, 100000, 1e-3, 21u);
    CHECK(std::abs(grad.mu[0]) < 3.0 * grad.mu_std_error[0]);
  }
  {
    // Unit offset: d E[r] / d mu = -2.
    const Policy p = make_policy({1.0}, {0.0});
    const ObjectiveGradientEstimate grad =
        fd_objective_gradient(p, identity, reward, 100000, 1e-3, 22u);
    CHECK(std::abs(grad.mu[0] - -2.0) < 3.0 * grad.mu_std_error[0]);
    // d E[r] / d log_sigma = -2 sigma^2 = -2.
    CHECK(std::abs(grad.log_sigma[0] - -2.0) < 3.0 * grad.log_sigma_std_error[0]);
  }
}

TEST_CASE("common random numbers keep the finite-difference noise small") {
  // Without shared draws the difference of two Monte-Carlo means at h=1e-3
  // would have a standard error of roughly std(r) * sqrt(2/n) / (2h) ~ 30;
  // with them it collapses by orders of magnitude.
  const GeneratorSpec identity = GeneratorSpec::identity(1);
  const RewardSpec reward = RewardSpec::neg_squared_distance({0.0});
  const Policy p = make_policy({1.0}, {0.0});
  const ObjectiveGradientEstimate grad =
      fd_objective_gradient(p, identity, reward, 10000, 1e-3, 23u);
  CHECK(grad.mu_std_error[0] < 0.1);
}

TEST_CASE("mode hit rate on mixtures") {
  const GaussianMixture single = GaussianMixture::isotropic({1.0}, {{0.0}}, 1.0);
  const GaussianMixture symmetric =
      GaussianMixture::isotropic({0.5, 0.5}, {{-3.0}, {3.0}}, 1.0);
  const GaussianMixture skewed =
      GaussianMixture::isotropic({0.95, 0.05}, {{-3.0}, {3.0}}, 1.0);
  const NoiseSchedule desk = make_linear_schedule(50, 0.002, 0.4);
  const Policy p = Policy::standard(1);

  {
    const GeneratorSpec gen = GeneratorSpec::exact_ddim(single, desk);
    const McEstimate rate = mode_hit_rate(p, gen, single, 0, 2000, 3u);
    CHECK(rate.mean == 1.0);
  }
  {
    const GeneratorSpec gen = GeneratorSpec::exact_ddim(symmetric, desk);
    const McEstimate rate = mode_hit_rate(p, gen, symmetric, 1, 4000, 4u);
    CHECK(std::abs(rate.mean - 0.5) < 3.0 * rate.std_error);
  }
  {
    // The reverse chain preserves mixture weights, so the rare mode shows
    // up at its prior weight.
    const GeneratorSpec gen = GeneratorSpec::exact_ddim(skewed, desk);
    const McEstimate rate = mode_hit_rate(p, gen, skewed, 1, 10000, 5u);
    CHECK(std::abs(rate.mean - 0.05) < std::max(3.0 * rate.std_error, 0.01));
  }
}

TEST_CASE("component log-density level matches the closed form") {
  // For draws from N(m, 1) inside a well-separated mixture the expected
  // mixture log-density is log(w) - 0.5*log(2*pi) - 0.5.
  const GaussianMixture skewed =
      GaussianMixture::isotropic({0.95, 0.05}, {{-3.0}, {3.0}}, 1.0);
  const McEstimate level = component_log_density_level(skewed, 1, 20000, 6u);
  const double expected = std::log(0.05) - 0.5 * std::log(2.0 * M_PI) - 0.5;
  CHECK(std::abs(level.mean - expected) < std::max(3.0 * level.std_error, 1e-3));
}
