#include "noisetuner/baseline_net.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace noisetuner {

namespace {

struct Forward {
  std::vector<double> pre1, h1, pre2, h2;
  double y = 0.0;
};

Forward forward_pass(const BaselineNet& net, const std::vector<double>& x) {
  if (x.size() != net.input_width) {
    throw std::invalid_argument("baseline net: feature width mismatch");
  }
  const std::size_t in = net.input_width;
  const std::size_t hid = net.hidden_width;
  Forward f;
  f.pre1.resize(hid);
  f.h1.resize(hid);
  f.pre2.resize(hid);
  f.h2.resize(hid);
  for (std::size_t i = 0; i < hid; ++i) {
    double acc = net.b1[i];
    const double* row = net.w1.data() + i * in;
    for (std::size_t j = 0; j < in; ++j) acc += row[j] * x[j];
    f.pre1[i] = acc;
    f.h1[i] = acc > 0.0 ? acc : 0.0;
  }
  for (std::size_t i = 0; i < hid; ++i) {
    double acc = net.b2[i];
    const double* row = net.w2.data() + i * hid;
    for (std::size_t j = 0; j < hid; ++j) acc += row[j] * f.h1[j];
    f.pre2[i] = acc;
    f.h2[i] = acc > 0.0 ? acc : 0.0;
  }
  double acc = net.b3[0];
  for (std::size_t j = 0; j < hid; ++j) acc += net.w3[j] * f.h2[j];
  f.y = acc;
  return f;
}

void fill_uniform(std::vector<double>& weights, std::size_t fan_in, std::size_t fan_out,
                  Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (double& w : weights) {
    w = bound * (2.0 * rng.next_unit() - 1.0);
  }
}

}  // namespace

std::size_t BaselineNet::parameter_count() const {
  return w1.size() + b1.size() + w2.size() + b2.size() + w3.size() + b3.size();
}

BaselineNet make_baseline_net(std::size_t policy_dim, std::size_t hidden_width,
                              BaselineInput input_mode, std::uint64_t seed) {
  if (policy_dim == 0 || hidden_width == 0) {
    throw std::invalid_argument("make_baseline_net: zero width");
  }
  BaselineNet net;
  net.input_mode = input_mode;
  net.input_width = input_mode == BaselineInput::kFullParams ? 2 * policy_dim : 8;
  net.hidden_width = hidden_width;
  net.w1.resize(hidden_width * net.input_width);
  net.b1.assign(hidden_width, 0.0);
  net.w2.resize(hidden_width * hidden_width);
  net.b2.assign(hidden_width, 0.0);
  net.w3.resize(hidden_width);
  net.b3.assign(1, 0.0);
  Rng rng(seed);
  fill_uniform(net.w1, net.input_width, hidden_width, rng);
  fill_uniform(net.w2, hidden_width, hidden_width, rng);
  fill_uniform(net.w3, hidden_width, 1, rng);
  AdamwParams hyper;
  hyper.weight_decay = 0.0;  // decay would bias the fit toward zero
  net.optim = OptimState::zeros(net.parameter_count(), hyper);
  return net;
}

std::vector<double> baseline_features(const Policy& policy, BaselineInput mode) {
  if (mode == BaselineInput::kFullParams) {
    std::vector<double> features;
    features.reserve(2 * policy.dim());
    features.insert(features.end(), policy.mu.begin(), policy.mu.end());
    features.insert(features.end(), policy.log_sigma.begin(), policy.log_sigma.end());
    return features;
  }
  auto summarize = [](const std::vector<double>& v, std::vector<double>& out) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= static_cast<double>(v.size());
    out.push_back(mean);
    out.push_back(std::sqrt(var));
    out.push_back(*std::min_element(v.begin(), v.end()));
    out.push_back(*std::max_element(v.begin(), v.end()));
  };
  std::vector<double> features;
  features.reserve(8);
  summarize(policy.mu, features);
  summarize(policy.log_sigma, features);
  return features;
}

double predict(const BaselineNet& net, const std::vector<double>& features) {
  return forward_pass(net, features).y;
}

double predict(const BaselineNet& net, const Policy& policy) {
  return predict(net, baseline_features(policy, net.input_mode));
}

BaselineGradients baseline_gradients(const BaselineNet& net, const std::vector<double>& x,
                                     const std::vector<double>& rewards) {
  if (rewards.empty()) {
    throw std::invalid_argument("baseline_gradients: empty reward list");
  }
  const Forward f = forward_pass(net, x);
  const double m = static_cast<double>(rewards.size());
  double loss = 0.0;
  double residual_sum = 0.0;
  for (double r : rewards) {
    loss += (f.y - r) * (f.y - r);
    residual_sum += f.y - r;
  }
  loss /= m;

  const std::size_t in = net.input_width;
  const std::size_t hid = net.hidden_width;
  BaselineGradients g;
  g.loss = loss;
  g.w1.assign(hid * in, 0.0);
  g.b1.assign(hid, 0.0);
  g.w2.assign(hid * hid, 0.0);
  g.b2.assign(hid, 0.0);
  g.w3.assign(hid, 0.0);
  g.b3.assign(1, 0.0);

  const double g_y = 2.0 * residual_sum / m;
  g.b3[0] = g_y;
  std::vector<double> g_pre2(hid);
  for (std::size_t i = 0; i < hid; ++i) {
    g.w3[i] = g_y * f.h2[i];
    g_pre2[i] = f.pre2[i] > 0.0 ? g_y * net.w3[i] : 0.0;
  }
  std::vector<double> g_h1(hid, 0.0);
  for (std::size_t i = 0; i < hid; ++i) {
    g.b2[i] = g_pre2[i];
    double* row = g.w2.data() + i * hid;
    const double* w_row = net.w2.data() + i * hid;
    for (std::size_t j = 0; j < hid; ++j) {
      row[j] = g_pre2[i] * f.h1[j];
      g_h1[j] += g_pre2[i] * w_row[j];
    }
  }
  for (std::size_t i = 0; i < hid; ++i) {
    const double g_pre1 = f.pre1[i] > 0.0 ? g_h1[i] : 0.0;
    g.b1[i] = g_pre1;
    double* row = g.w1.data() + i * in;
    for (std::size_t j = 0; j < in; ++j) {
      row[j] = g_pre1 * x[j];
    }
  }
  return g;
}

double update(BaselineNet& net, const Policy& policy, const std::vector<double>& rewards,
              double lr) {
  for (double r : rewards) {
    if (!std::isfinite(r)) {
      throw std::invalid_argument("baseline update: non-finite reward");
    }
  }
  const std::vector<double> x = baseline_features(policy, net.input_mode);
  const BaselineGradients g = baseline_gradients(net, x, rewards);

  std::vector<double> params;
  params.reserve(net.parameter_count());
  auto append = [&params](const std::vector<double>& v) {
    params.insert(params.end(), v.begin(), v.end());
  };
  append(net.w1);
  append(net.b1);
  append(net.w2);
  append(net.b2);
  append(net.w3);
  append(net.b3);

  std::vector<double> grad;
  grad.reserve(net.parameter_count());
  auto append_grad = [&grad](const std::vector<double>& v) {
    grad.insert(grad.end(), v.begin(), v.end());
  };
  append_grad(g.w1);
  append_grad(g.b1);
  append_grad(g.w2);
  append_grad(g.b2);
  append_grad(g.w3);
  append_grad(g.b3);

  adamw_step(params, grad, net.optim, lr);

  std::size_t offset = 0;
  auto take = [&params, &offset](std::vector<double>& v) {
    std::copy(params.begin() + static_cast<std::ptrdiff_t>(offset),
              params.begin() + static_cast<std::ptrdiff_t>(offset + v.size()), v.begin());
    offset += v.size();
  };
  take(net.w1);
  take(net.b1);
  take(net.w2);
  take(net.b2);
  take(net.w3);
  take(net.b3);
  return g.loss;
}

}  // namespace noisetuner
