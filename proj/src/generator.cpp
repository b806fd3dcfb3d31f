#include "noisetuner/generator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace noisetuner {

void GeneratorSpec::validate() const {
  switch (kind) {
    case GeneratorKind::kIdentity:
      if (dim == 0) throw std::invalid_argument("GeneratorSpec: identity needs dim >= 1");
      break;
    case GeneratorKind::kLinear:
      if (dim == 0) throw std::invalid_argument("GeneratorSpec: linear needs dim >= 1");
      if (matrix.size() != dim * dim) {
        throw std::invalid_argument("GeneratorSpec: linear matrix must be dim x dim");
      }
      if (offset.size() != dim) {
        throw std::invalid_argument("GeneratorSpec: linear offset must have length dim");
      }
      break;
    case GeneratorKind::kExactDdim: {
      mixture.validate();
      schedule.validate();
      if (mixture.dim() != dim) {
        throw std::invalid_argument("GeneratorSpec: mixture dim != generator dim");
      }
      if (stride < 1 || schedule.steps() % stride != 0) {
        throw std::invalid_argument("GeneratorSpec: stride must divide the step count evenly");
      }
      break;
    }
  }
}

GeneratorSpec GeneratorSpec::identity(std::size_t dim) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::kIdentity;
  spec.dim = dim;
  spec.validate();
  return spec;
}

GeneratorSpec GeneratorSpec::linear(std::vector<double> matrix, std::vector<double> offset) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::kLinear;
  spec.dim = offset.size();
  spec.matrix = std::move(matrix);
  spec.offset = std::move(offset);
  spec.validate();
  return spec;
}

GeneratorSpec GeneratorSpec::exact_ddim(GaussianMixture mixture, NoiseSchedule schedule,
                                        int stride) {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::kExactDdim;
  spec.dim = mixture.dim();
  spec.mixture = std::move(mixture);
  spec.schedule = std::move(schedule);
  spec.stride = stride;
  spec.validate();
  return spec;
}

std::vector<double> ddim_update(const std::vector<double>& z_t,
                                const std::vector<double>& z0_hat, double alpha_bar_t,
                                double alpha_bar_prev) {
  if (z_t.size() != z0_hat.size()) {
    throw std::invalid_argument("ddim_update: z_t and z0_hat dims differ");
  }
  if (!(alpha_bar_t < 1.0)) {
    throw std::invalid_argument("ddim_update: alpha_bar_t must be < 1");
  }
  const double signal_prev = std::sqrt(alpha_bar_prev);
  const double signal_t = std::sqrt(alpha_bar_t);
  const double noise_prev = std::sqrt(1.0 - alpha_bar_prev);
  const double inv_noise_t = 1.0 / std::sqrt(1.0 - alpha_bar_t);
  std::vector<double> z_prev(z_t.size());
  for (std::size_t j = 0; j < z_t.size(); ++j) {
    const double predicted_noise = (z_t[j] - signal_t * z0_hat[j]) * inv_noise_t;
    z_prev[j] = signal_prev * z0_hat[j] + noise_prev * predicted_noise;
  }
  return z_prev;
}

std::vector<double> ddim_step(const GaussianMixture& mixture, const NoiseSchedule& schedule,
                              const std::vector<double>& z_t, int t, int t_prev) {
  if (!(0 <= t_prev && t_prev < t && t <= schedule.steps())) {
    throw std::invalid_argument("ddim_step: need 0 <= t_prev < t <= T, got t=" +
                                std::to_string(t) + " t_prev=" + std::to_string(t_prev));
  }
  const double alpha_bar_t = schedule.alpha_bar[static_cast<std::size_t>(t)];
  const double alpha_bar_prev = schedule.alpha_bar[static_cast<std::size_t>(t_prev)];
  const std::vector<double> z0_hat = posterior_mean(mixture, z_t, alpha_bar_t);
  return ddim_update(z_t, z0_hat, alpha_bar_t, alpha_bar_prev);
}

std::vector<double> generate(const GeneratorSpec& spec, const Action& z_T) {
  if (z_T.z.size() != spec.dim) {
    throw std::invalid_argument("generate: action dim " + std::to_string(z_T.z.size()) +
                                " != generator dim " + std::to_string(spec.dim));
  }
  switch (spec.kind) {
    case GeneratorKind::kIdentity:
      return z_T.z;
    case GeneratorKind::kLinear: {
      std::vector<double> out(spec.dim);
      for (std::size_t i = 0; i < spec.dim; ++i) {
        double acc = spec.offset[i];
        const double* row = spec.matrix.data() + i * spec.dim;
        for (std::size_t j = 0; j < spec.dim; ++j) {
          acc += row[j] * z_T.z[j];
        }
        out[i] = acc;
      }
      return out;
    }
    case GeneratorKind::kExactDdim: {
      std::vector<double> z = z_T.z;
      for (int t = spec.schedule.steps(); t > 0; t -= spec.stride) {
        z = ddim_step(spec.mixture, spec.schedule, z, t, t - spec.stride);
      }
      return z;
    }
  }
  throw std::logic_error("generate: unknown generator kind");
}

}  // namespace noisetuner
