#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "noisetuner/adamw.hpp"
#include "noisetuner/policy_gradient.hpp"
#include "noisetuner/trainer.hpp"

using namespace noisetuner;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SampleRecord on_policy_record(const Policy& policy, std::vector<double> z, double calibrated) {
  SampleRecord record;
  record.action = Action{std::move(z)};
  record.output = record.action.z;
  record.reward = calibrated;
  record.baseline = 0.0;
  record.calibrated = calibrated;
  record.logp_old = log_prob(policy, record.action);
  return record;
}

TrainConfig quadratic_config(std::size_t dim, std::vector<double> target) {
  TrainConfig config;
  config.dim = dim;
  config.generator = GeneratorSpec::identity(dim);
  config.reward = RewardSpec::neg_squared_distance(std::move(target));
  return config;
}

}  // namespace

TEST_CASE("ratio clip weight keeps in-band ratios and zeroes the rest") {
  CHECK(ratio_clip_weight(1.0, 0.02) == 1.0);
  CHECK(ratio_clip_weight(1.05, 0.02) == 0.0);
  CHECK(ratio_clip_weight(0.99, 0.02) == doctest::Approx(0.99));
  CHECK(ratio_clip_weight(0.9, 0.02) == 0.0);
  CHECK(ratio_clip_weight(5.0, kInf) == 5.0);
}

TEST_CASE("clamp style pins out-of-band ratios to the band edge") {
  CHECK(ratio_clip_weight(1.05, 0.02, ClipStyle::kClamp) == doctest::Approx(1.02));
  CHECK(ratio_clip_weight(0.9, 0.02, ClipStyle::kClamp) == doctest::Approx(0.98));
  CHECK(ratio_clip_weight(1.01, 0.02, ClipStyle::kClamp) == doctest::Approx(1.01));
}

TEST_CASE("ratio clip weight validates inputs") {
  CHECK_THROWS_AS(ratio_clip_weight(0.0, 0.02), std::invalid_argument);
  CHECK_THROWS_AS(ratio_clip_weight(-1.0, 0.02), std::invalid_argument);
  CHECK_THROWS_AS(ratio_clip_weight(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("zero calibrated reward gives a zero gradient") {
  const Policy policy = Policy::standard(2);
  const std::vector<SampleRecord> records{on_policy_record(policy, {0.7, -0.4}, 0.0)};
  const PolicyGradientResult g = policy_gradient(policy, records, 0.02, RatioMode::kPerDimGeoMean);
  CHECK(g.mu[0] == 0.0);
  CHECK(g.mu[1] == 0.0);
  CHECK(g.log_sigma[0] == 0.0);
  CHECK(g.log_sigma[1] == 0.0);
}

TEST_CASE("single on-policy record composes reward with the score") {
  const Policy policy = Policy::standard(1);
  const std::vector<SampleRecord> records{on_policy_record(policy, {2.0}, 1.0)};
  const PolicyGradientResult g = policy_gradient(policy, records, 0.02, RatioMode::kPerDimGeoMean);
  CHECK(g.mu[0] == doctest::Approx(-2.0));
  CHECK(g.log_sigma[0] == doctest::Approx(-3.0));
  CHECK(g.eta_mean == doctest::Approx(1.0));
  CHECK(g.drop_fraction == 0.0);
}

TEST_CASE("out-of-band records contribute exactly zero") {
  const Policy policy = Policy::standard(1);
  SampleRecord in_band = on_policy_record(policy, {2.0}, 1.0);
  SampleRecord out_of_band = on_policy_record(policy, {1.0}, 5.0);
  out_of_band.logp_old -= 1.0;  // eta = e far outside [0.98, 1.02]
  const std::vector<SampleRecord> both{in_band, out_of_band};
  const PolicyGradientResult g = policy_gradient(policy, both, 0.02, RatioMode::kPerDimGeoMean);
  // The in-band contribution (-2, -3) averaged over two records.
  CHECK(g.mu[0] == doctest::Approx(-1.0));
  CHECK(g.log_sigma[0] == doctest::Approx(-1.5));
  CHECK(g.drop_fraction == doctest::Approx(0.5));
}

TEST_CASE("policy_gradient rejects an empty record list") {
  CHECK_THROWS_AS(
      policy_gradient(Policy::standard(1), {}, 0.02, RatioMode::kPerDimGeoMean),
      std::invalid_argument);
}

TEST_CASE("with the clip disabled the estimator is plain calibrated REINFORCE") {
  Rng rng(404);
  Policy policy;
  policy.mu = {0.2, -0.5};
  policy.log_sigma = {0.1, -0.2};
  std::vector<SampleRecord> records;
  for (int i = 0; i < 32; ++i) {
    const Action a = sample(policy, 1, rng.next_u64())[0];
    SampleRecord r = on_policy_record(policy, a.z, rng.next_normal());
    records.push_back(r);
  }
  const PolicyGradientResult clipped =
      policy_gradient(policy, records, kInf, RatioMode::kPerDimGeoMean);

  std::vector<double> vanilla_mu(2, 0.0);
  std::vector<double> vanilla_ls(2, 0.0);
  for (const SampleRecord& record : records) {
    const ScoreGradient s = score(policy, record.action);
    for (std::size_t j = 0; j < 2; ++j) {
      vanilla_mu[j] += -record.calibrated * s.mu[j];
      vanilla_ls[j] += -record.calibrated * s.log_sigma[j];
    }
  }
  for (std::size_t j = 0; j < 2; ++j) {
    CHECK(std::abs(clipped.mu[j] - vanilla_mu[j] / records.size()) < 1e-12);
    CHECK(std::abs(clipped.log_sigma[j] - vanilla_ls[j] / records.size()) < 1e-12);
  }
}

TEST_CASE("drop fraction grows with the policy displacement") {
  const Policy old_policy = Policy::standard(2);
  Rng rng(606);
  std::vector<SampleRecord> records;
  for (int i = 0; i < 64; ++i) {
    const Action a = sample(old_policy, 1, rng.next_u64())[0];
    records.push_back(on_policy_record(old_policy, a.z, 1.0));
  }
  double previous = -1.0;
  for (double scale : {0.0, 0.005, 0.01, 0.02, 0.04}) {
    Policy moved = old_policy;
    moved.mu[0] += scale;
    moved.mu[1] -= scale;
    const PolicyGradientResult g =
        policy_gradient(moved, records, 0.02, RatioMode::kPerDimGeoMean);
    CHECK(g.drop_fraction >= previous);
    previous = g.drop_fraction;
  }
  CHECK(previous > 0.0);  // the largest displacement must actually drop samples
}

TEST_CASE("adamw leaves parameters alone when gradient and decay are zero") {
  std::vector<double> params{0.4, -0.2};
  AdamwParams hyper;
  hyper.weight_decay = 0.0;
  OptimState state = OptimState::zeros(2, hyper);
  adamw_step(params, {0.0, 0.0}, state, 0.01);
  CHECK(params[0] == 0.4);
  CHECK(params[1] == -0.2);
  CHECK(state.step_count == 1);
}

TEST_CASE("first adamw step moves by about the learning rate") {
  std::vector<double> params{0.0};
  AdamwParams hyper;
  hyper.weight_decay = 0.0;
  OptimState state = OptimState::zeros(1, hyper);
  adamw_step(params, {1.0}, state, 0.001);
  CHECK(params[0] == doctest::Approx(-0.001).epsilon(1e-6));
}

TEST_CASE("adamw is deterministic given identical state") {
  std::vector<double> params_a{0.3, 0.1};
  std::vector<double> params_b{0.3, 0.1};
  OptimState state_a = OptimState::zeros(2);
  OptimState state_b = OptimState::zeros(2);
  for (int i = 0; i < 5; ++i) {
    const std::vector<double> grad{0.1 * i, -0.2};
    adamw_step(params_a, grad, state_a, 0.01);
    adamw_step(params_b, grad, state_b, 0.01);
  }
  CHECK(params_a[0] == params_b[0]);
  CHECK(params_a[1] == params_b[1]);
}

TEST_CASE("adamw applies decoupled weight decay") {
  std::vector<double> params{1.0};
  OptimState state = OptimState::zeros(1);  // default decay 0.01
  adamw_step(params, {0.0}, state, 0.1);
  CHECK(params[0] == doctest::Approx(1.0 - 0.1 * 0.01 * 1.0));
}

TEST_CASE("adamw rejects non-finite gradients and shape mismatches") {
  std::vector<double> params{0.0};
  OptimState state = OptimState::zeros(1);
  CHECK_THROWS_AS(adamw_step(params, {std::numeric_limits<double>::quiet_NaN()}, state, 0.01),
                  std::invalid_argument);
  CHECK_THROWS_AS(adamw_step(params, {1.0, 2.0}, state, 0.01), std::invalid_argument);
}

TEST_CASE("a fully calibrated baseline freezes the policy") {
  TrainConfig config = quadratic_config(2, {0.0, 0.0});
  config.reward.scale = 0.0;  // constant reward
  config.reward.shift = 0.7;
  config.batch_size = 4;
  TrainState state = make_train_state(config);
  // Pre-fit the baseline to the constant.
  std::fill(state.net.w1.begin(), state.net.w1.end(), 0.0);
  std::fill(state.net.w2.begin(), state.net.w2.end(), 0.0);
  std::fill(state.net.w3.begin(), state.net.w3.end(), 0.0);
  state.net.b3[0] = 0.7;

  const IterationMetrics metrics = train_step(state, config);
  CHECK(metrics.calibrated_mean == 0.0);
  CHECK(metrics.baseline_value == doctest::Approx(0.7));
  for (double m : state.policy.mu) CHECK(m == 0.0);
  for (double ls : state.policy.log_sigma) CHECK(ls == 0.0);
}

TEST_CASE("one optimization step matches a scalar hand-simulation") {
  TrainConfig config = quadratic_config(1, {5.0});
  config.batch_size = 1;
  config.seed = 99;
  TrainState state = make_train_state(config);
  const BaselineNet net_before = state.net;
  const Policy policy_before = state.policy;

  const IterationMetrics metrics = train_step(state, config);

  // Reproduce the iteration by hand from the recorded action.
  REQUIRE(state.replay.size() == 1);
  const Action z = state.replay.back().front().action;
  const double reward = -(z.z[0] - 5.0) * (z.z[0] - 5.0);
  const double baseline = predict(net_before, policy_before);
  const double calibrated = reward - baseline;
  CHECK(metrics.reward_mean == reward);
  CHECK(metrics.baseline_value == baseline);

  const ScoreGradient s = score(policy_before, z);
  std::vector<double> params{0.0, 0.0};
  std::vector<double> grad{-calibrated * s.mu[0], -calibrated * s.log_sigma[0]};
  OptimState optim = OptimState::zeros(2, config.adamw);
  adamw_step(params, grad, optim, config.lr);
  CHECK(state.policy.mu[0] == params[0]);
  CHECK(state.policy.log_sigma[0] == params[1]);

  // Sign contract: the mean moves toward rewarded actions (or not at all).
  const double delta_mu = state.policy.mu[0] - policy_before.mu[0];
  const double expected_sign = calibrated * (z.z[0] - policy_before.mu[0]);
  CHECK(delta_mu * expected_sign >= 0.0);
}

TEST_CASE("train_step is deterministic from identical state") {
  TrainConfig config = quadratic_config(2, {1.0, -1.0});
  config.batch_size = 3;
  config.seed = 1234;
  TrainState a = make_train_state(config);
  TrainState b = make_train_state(config);
  for (int k = 0; k < 5; ++k) {
    const IterationMetrics ma = train_step(a, config);
    const IterationMetrics mb = train_step(b, config);
    CHECK(ma.reward_mean == mb.reward_mean);
    CHECK(ma.baseline_value == mb.baseline_value);
  }
  CHECK(a.policy.mu == b.policy.mu);
  CHECK(a.policy.log_sigma == b.policy.log_sigma);
  CHECK(a.net.w1 == b.net.w1);
}

TEST_CASE("the logged baseline is the prediction before any update") {
  TrainConfig config = quadratic_config(1, {2.0});
  config.batch_size = 2;
  config.seed = 31;
  TrainState state = make_train_state(config);
  for (int k = 0; k < 4; ++k) {
    const double expected = predict(state.net, state.policy);
    const IterationMetrics metrics = train_step(state, config);
    CHECK(metrics.baseline_value == expected);
  }
}

TEST_CASE("the replay window keeps the configured number of batches") {
  TrainConfig config = quadratic_config(1, {1.0});
  config.replay_window = 2;
  config.batch_size = 2;
  TrainState state = make_train_state(config);
  for (int k = 0; k < 5; ++k) train_step(state, config);
  CHECK(state.replay.size() == 2);
  CHECK(state.replay.back().front().iteration == 4);
  CHECK(state.replay.front().front().iteration == 3);
}

TEST_CASE("inner epochs re-clip against the moved policy") {
  TrainConfig config = quadratic_config(1, {3.0});
  config.batch_size = 8;
  config.inner_epochs = 2;
  config.clip_margin = 1e-9;  // any movement pushes ratios out of band
  config.lr = 0.05;
  TrainState state = make_train_state(config);
  double drop_total = 0.0;
  for (int k = 0; k < 3; ++k) {
    drop_total += train_step(state, config).clip_drop_fraction;
  }
  CHECK(drop_total > 0.0);
}

TEST_CASE("train_step aborts when the policy diverges") {
  TrainConfig config = quadratic_config(1, {1.0});
  config.lr = kInf;
  TrainState state = make_train_state(config);
  CHECK_THROWS_AS(train_step(state, config), std::runtime_error);
}

TEST_CASE("zero-step training returns the untouched initial policy") {
  TrainConfig config = quadratic_config(3, {1.0, 1.0, 1.0});
  config.total_steps = 0;
  const TrainResult result = run_training(config);
  CHECK(result.iterations_run == 0);
  CHECK(result.policy.mu == std::vector<double>{0.0, 0.0, 0.0});
  CHECK(result.policy.log_sigma == std::vector<double>{0.0, 0.0, 0.0});
}

TEST_CASE("short quadratic run moves the mean toward the target") {
  TrainConfig config = quadratic_config(1, {0.5});
  config.total_steps = 120;
  config.batch_size = 4;
  config.lr = 0.01;
  config.seed = 5;
  const TrainResult result = run_training(config);
  CHECK(result.iterations_run == 120);
  CHECK(static_cast<int>(result.trajectory.size()) == 120);
  CHECK(std::abs(result.policy.mu[0] - 0.5) < 0.25);
}

TEST_CASE("gaussian smoothing preserves length and flattens noise") {
  std::vector<double> values(100);
  Rng rng(9);
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = 0.05 * static_cast<double>(i) + rng.next_normal();
  }
  const std::vector<double> smoothed = gaussian_smooth(values, 5.0);
  REQUIRE(smoothed.size() == values.size());
  double rough_raw = 0.0;
  double rough_smooth = 0.0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    rough_raw += std::abs(values[i] - values[i - 1]);
    rough_smooth += std::abs(smoothed[i] - smoothed[i - 1]);
  }
  CHECK(rough_smooth < 0.5 * rough_raw);
}
