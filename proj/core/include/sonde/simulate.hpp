#pragma once

#include <cstdint>
#include <vector>

#include "sonde/model.hpp"

namespace sonde {

/// Exact Fourier-mode trajectories u_k(t_j) for modes k = 1..N.
///
/// Both models are solved in closed form per mode, so there is no
/// time-stepping error: the only randomness is one standard normal xi_k per
/// mode, drawn from the counter-based stream at (seed, replication, k).
///
/// For the shell model the trajectory is exponential and the stored value
/// can underflow to zero for strongly damped modes; log_ratio keeps the
/// exactly computed ln(u_k(t)/u_k(0)), which is what inference consumes.
struct FourierPath {
  ModelSpec model;
  std::vector<double> times;
  std::vector<double> xi;  // one draw per mode

  // row-major [mode][time]
  std::vector<double> values;
  std::vector<double> log_ratio;  // shell only; empty for additive

  std::uint64_t seed = 0;
  std::uint32_t replication = 0;

  int mode_count() const { return model.modes; }
  std::size_t grid_size() const { return times.size(); }

  double value(int k, std::size_t j) const {
    return values[static_cast<std::size_t>(k - 1) * times.size() + j];
  }
  double log_ratio_at(int k, std::size_t j) const {
    return log_ratio[static_cast<std::size_t>(k - 1) * times.size() + j];
  }

  /// Index of the earliest strictly positive grid time.
  std::size_t first_positive_time_index() const;
};

/// Solution (or its spatial derivative) sampled on a grid in physical space
/// at one fixed time, by truncated eigenfunction series.
struct FieldSample {
  double time = 0.0;
  std::vector<double> x;
  std::vector<double> u;   // empty if not requested
  std::vector<double> ux;  // empty if not requested
  int truncation = 0;      // K, number of series terms
  double tail_bound = 0.0; // sum_{k>K} k^-2, truncation-error estimate
  std::uint64_t seed = 0;
  std::uint32_t replication = 0;
};

/// Shell model: u_k(t) = u_k(0) exp(-(theta0 mu_k + nu_k) t + (sigma0 q_k + p_k) xi_k t).
/// Modes with u_k(0) == 0 stay exactly zero (their log_ratio is NaN).
FourierPath simulate_shell(const ModelSpec& model, std::vector<double> time_grid,
                           std::uint64_t seed, std::uint32_t replication = 0);

/// Additive model:
/// u_k(t) = u_k(0) e^(-theta0 mu_k t) + sigma0 q_k / (theta0 mu_k) (1 - e^(-theta0 mu_k t)) xi_k.
FourierPath simulate_additive(const ModelSpec& model, std::vector<double> time_grid,
                              std::uint64_t seed, std::uint32_t replication = 0);

/// Dispatch on model.noise with the model's default grid.
FourierPath simulate(const ModelSpec& model, std::uint64_t seed, std::uint32_t replication = 0);

struct FieldRequest {
  double time = 0.2;
  double x_min = 0.0;
  double x_max = 3.14159265358979323846;
  double resolution = 0.0015;
  int truncation = 30000;
  bool want_u = true;
  bool want_ux = true;
};

/// Truncated-series reconstruction of u(t, .) / u_x(t, .) for the additive
/// model with zero initial data on the default sine basis. Modes beyond the
/// path's count are extended from the same noise stream, so the result is a
/// pure function of (model, seed, replication, request).
FieldSample reconstruct_field(const FourierPath& path, const FieldRequest& request);

}  // namespace sonde
