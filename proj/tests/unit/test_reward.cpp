#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "noisetuner/reward.hpp"

using namespace noisetuner;

namespace {

GaussianMixture standard_normal_1d() {
  return GaussianMixture::isotropic({1.0}, {{0.0}}, 1.0);
}

GaussianMixture two_modes() {
  return GaussianMixture::isotropic({0.5, 0.5}, {{-3.0}, {3.0}}, 1.0);
}

}  // namespace

TEST_CASE("negative squared distance is zero at the target") {
  const RewardSpec spec = RewardSpec::neg_squared_distance({1.0, -2.0});
  CHECK(evaluate(spec, {1.0, -2.0}) == 0.0);
  CHECK(evaluate(spec, {2.0, -2.0}) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(evaluate(spec, {1.0}), std::invalid_argument);
}

TEST_CASE("mode indicator fires at the target mean") {
  const RewardSpec spec = RewardSpec::mode_indicator(two_modes(), 1);
  CHECK(evaluate(spec, {3.0}) == 1.0);
  CHECK(evaluate(spec, {-3.0}) == 0.0);
}

TEST_CASE("mode indicator only ever returns zero or one") {
  const RewardSpec spec = RewardSpec::mode_indicator(two_modes(), 0);
  for (double z = -6.0; z <= 6.0; z += 0.37) {
    const double r = evaluate(spec, {z});
    CHECK((r == 0.0 || r == 1.0));
  }
}

TEST_CASE("mixture log density matches the standard normal at its mode") {
  const RewardSpec spec = RewardSpec::mixture_log_density_reward(standard_normal_1d());
  CHECK(evaluate(spec, {0.0}) == doctest::Approx(-0.918939).epsilon(1e-6));
}

TEST_CASE("weighted sum is linear in its members") {
  const RewardSpec a = RewardSpec::neg_squared_distance({0.0});
  const RewardSpec b = RewardSpec::mixture_log_density_reward(standard_normal_1d());
  const RewardSpec combined = RewardSpec::weighted_sum({a, b}, {0.25, -1.5});
  for (double z = -2.0; z <= 2.0; z += 0.31) {
    const double direct = 0.25 * evaluate(a, {z}) + -1.5 * evaluate(b, {z});
    CHECK(std::abs(evaluate(combined, {z}) - direct) < 1e-12);
  }
}

TEST_CASE("rewards reject non-finite outputs") {
  const RewardSpec spec = RewardSpec::neg_squared_distance({0.0});
  CHECK_THROWS_AS(evaluate(spec, {std::numeric_limits<double>::quiet_NaN()}),
                  std::invalid_argument);
  CHECK_THROWS_AS(evaluate(spec, {std::numeric_limits<double>::infinity()}),
                  std::invalid_argument);
}

TEST_CASE("optional affine normalization shifts and scales") {
  RewardSpec spec = RewardSpec::neg_squared_distance({0.0});
  spec.scale = 0.5;
  spec.shift = 1.0;
  CHECK(evaluate(spec, {2.0}) == doctest::Approx(0.5 * -4.0 + 1.0));
}

TEST_CASE("reward spec validation") {
  RewardSpec bad = RewardSpec::mode_indicator(two_modes(), 1);
  bad.target_component = 5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_THROWS_AS(RewardSpec::weighted_sum({}, {}), std::invalid_argument);
}

TEST_CASE("evaluate is deterministic") {
  const RewardSpec spec = RewardSpec::mixture_log_density_reward(two_modes());
  CHECK(evaluate(spec, {0.77}) == evaluate(spec, {0.77}));
}
