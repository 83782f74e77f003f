#include "sonde/simulate.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "sonde/rng.hpp"

namespace sonde {

namespace {

void check_grid(const std::vector<double>& grid, double horizon) {
  if (grid.empty()) throw std::invalid_argument("simulate: empty time grid");
  if (grid.front() < 0.0) throw std::invalid_argument("simulate: negative time");
  for (std::size_t j = 1; j < grid.size(); ++j) {
    if (!(grid[j] > grid[j - 1]))
      throw std::invalid_argument("simulate: time grid must be strictly increasing");
  }
  if (grid.back() > horizon * (1.0 + 1e-12))
    throw std::invalid_argument("simulate: time grid exceeds the model horizon");
}

std::vector<double> draw_noise(const ModelSpec& model, std::uint64_t seed,
                               std::uint32_t replication) {
  std::vector<double> xi(static_cast<std::size_t>(model.modes));
  for (int k = 1; k <= model.modes; ++k) {
    xi[static_cast<std::size_t>(k - 1)] =
        rng::standard_normal(seed, replication, static_cast<std::uint32_t>(k));
  }
  return xi;
}

}  // namespace

std::size_t FourierPath::first_positive_time_index() const {
  for (std::size_t j = 0; j < times.size(); ++j) {
    if (times[j] > 0.0) return j;
  }
  throw std::logic_error("FourierPath: no strictly positive grid time");
}

FourierPath simulate_shell(const ModelSpec& model, std::vector<double> time_grid,
                           std::uint64_t seed, std::uint32_t replication) {
  if (model.noise != NoiseType::shell)
    throw std::invalid_argument("simulate_shell: model is not a shell model");
  model.validate();
  check_grid(time_grid, model.horizon);

  FourierPath path;
  path.model = model;
  path.times = std::move(time_grid);
  path.seed = seed;
  path.replication = replication;
  path.xi = draw_noise(model, seed, replication);

  const std::size_t T = path.times.size();
  path.values.resize(static_cast<std::size_t>(model.modes) * T);
  path.log_ratio.resize(static_cast<std::size_t>(model.modes) * T);

  for (int k = 1; k <= model.modes; ++k) {
    const double u0 = model.initial_coefficient(k);
    const double rate = -model.drift(k) + model.noise_scale(k) * path.xi[static_cast<std::size_t>(k - 1)];
    for (std::size_t j = 0; j < T; ++j) {
      const std::size_t idx = static_cast<std::size_t>(k - 1) * T + j;
      const double lr = rate * path.times[j];
      if (u0 == 0.0) {
        path.values[idx] = 0.0;
        path.log_ratio[idx] = std::numeric_limits<double>::quiet_NaN();
      } else {
        path.values[idx] = u0 * std::exp(lr);
        path.log_ratio[idx] = lr;
      }
    }
  }
  return path;
}

FourierPath simulate_additive(const ModelSpec& model, std::vector<double> time_grid,
                              std::uint64_t seed, std::uint32_t replication) {
  if (model.noise != NoiseType::additive)
    throw std::invalid_argument("simulate_additive: model is not an additive model");
  model.validate();
  check_grid(time_grid, model.horizon);

  FourierPath path;
  path.model = model;
  path.times = std::move(time_grid);
  path.seed = seed;
  path.replication = replication;
  path.xi = draw_noise(model, seed, replication);

  const std::size_t T = path.times.size();
  path.values.resize(static_cast<std::size_t>(model.modes) * T);

  for (int k = 1; k <= model.modes; ++k) {
    const double u0 = model.initial_coefficient(k);
    const double rate = model.theta0 * model.mu_k(k);
    const double gain = model.sigma0 * model.q_k(k) / rate;
    const double noise = path.xi[static_cast<std::size_t>(k - 1)];
    for (std::size_t j = 0; j < T; ++j) {
      const double decay = std::exp(-rate * path.times[j]);
      const double relax = -std::expm1(-rate * path.times[j]);  // 1 - e^{-rate t}, full precision
      path.values[static_cast<std::size_t>(k - 1) * T + j] = u0 * decay + gain * relax * noise;
    }
  }
  return path;
}

FourierPath simulate(const ModelSpec& model, std::uint64_t seed, std::uint32_t replication) {
  auto grid = model.default_time_grid();
  return model.noise == NoiseType::shell ? simulate_shell(model, std::move(grid), seed, replication)
                                         : simulate_additive(model, std::move(grid), seed, replication);
}

FieldSample reconstruct_field(const FourierPath& path, const FieldRequest& request) {
  const ModelSpec& model = path.model;
  if (model.noise != NoiseType::additive)
    throw std::invalid_argument("reconstruct_field: only supported for the additive model");
  if (model.initial.kind != InitialCondition::Kind::zero)
    throw std::invalid_argument("reconstruct_field: requires zero initial data");
  if (model.basis.dimension != 1)
    throw std::invalid_argument("reconstruct_field: requires the default one-dimensional basis");
  if (!(request.time >= 0.0 && request.time <= model.horizon))
    throw std::invalid_argument("reconstruct_field: time outside [0, T]");
  if (request.truncation < 1) throw std::invalid_argument("reconstruct_field: truncation >= 1");
  if (!(request.resolution > 0.0))
    throw std::invalid_argument("reconstruct_field: resolution must be positive");
  if (!(request.x_min >= 0.0 && request.x_max <= model.basis.length + 1e-12 &&
        request.x_min < request.x_max))
    throw std::invalid_argument("reconstruct_field: bad spatial window");

  const int K = request.truncation;

  FieldSample field;
  field.time = request.time;
  field.truncation = K;
  field.tail_bound = 1.0 / static_cast<double>(K);  // sum_{k>K} k^-2 < 1/K
  field.seed = path.seed;
  field.replication = path.replication;

  for (double x = request.x_min; x <= request.x_max + 1e-12; x += request.resolution)
    field.x.push_back(x);

  // per-mode series amplitude against the orthonormal sine basis
  const double L = model.basis.length;
  const double norm = std::sqrt(2.0 / L);
  std::vector<double> amp(static_cast<std::size_t>(K));
  for (int k = 1; k <= K; ++k) {
    const double rate = model.theta0 * model.mu_k(k);
    const double relax = -std::expm1(-rate * request.time);
    const double noise = (k <= model.modes)
                             ? path.xi[static_cast<std::size_t>(k - 1)]
                             : rng::standard_normal(path.seed, path.replication,
                                                    static_cast<std::uint32_t>(k));
    amp[static_cast<std::size_t>(k - 1)] = norm * model.sigma0 * model.q_k(k) / rate * relax * noise;
  }

  if (request.want_u) field.u.resize(field.x.size());
  if (request.want_ux) field.ux.resize(field.x.size());

  const double pi_over_L = 3.14159265358979323846 / L;
  for (std::size_t j = 0; j < field.x.size(); ++j) {
    const double w = field.x[j] * pi_over_L;
    const double c1 = std::cos(w);
    const double s1 = std::sin(w);
    // angle-addition recurrence over k instead of K libm calls per point
    double ck = 1.0;
    double sk = 0.0;
    double acc_u = 0.0;
    double acc_ux = 0.0;
    for (int k = 1; k <= K; ++k) {
      const double c_next = ck * c1 - sk * s1;
      const double s_next = sk * c1 + ck * s1;
      ck = c_next;
      sk = s_next;
      const double a = amp[static_cast<std::size_t>(k - 1)];
      acc_u += a * sk;
      acc_ux += a * static_cast<double>(k) * pi_over_L * ck;
    }
    if (request.want_u) field.u[j] = acc_u;
    if (request.want_ux) field.ux[j] = acc_ux;
  }
  return field;
}

}  // namespace sonde
