#include "sonde/model.hpp"

#include <cmath>
#include <stdexcept>

namespace sonde {

std::string to_string(NoiseType t) { return t == NoiseType::shell ? "shell" : "additive"; }

void ParameterBox::validate() const {
  if (!(theta_min <= theta_max)) throw std::invalid_argument("ParameterBox: theta_min > theta_max");
  if (!(sigma_min > 0.0)) throw std::invalid_argument("ParameterBox: sigma_min must be positive");
  if (!(sigma_min <= sigma_max)) throw std::invalid_argument("ParameterBox: sigma_min > sigma_max");
}

bool ParameterBox::contains(double theta, double sigma) const {
  return theta >= theta_min && theta <= theta_max && sigma >= sigma_min && sigma <= sigma_max;
}

InitialCondition InitialCondition::constant(double v) {
  InitialCondition ic;
  ic.kind = Kind::constant;
  ic.value = v;
  return ic;
}

InitialCondition InitialCondition::parabola() {
  InitialCondition ic;
  ic.kind = Kind::parabola;
  return ic;
}

InitialCondition InitialCondition::explicit_list(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("InitialCondition: empty explicit list");
  InitialCondition ic;
  ic.kind = Kind::explicit_list;
  ic.values = std::move(v);
  return ic;
}

double InitialCondition::coefficient(int k, const SpectralBasis& basis) const {
  if (k < 1) throw std::invalid_argument("InitialCondition: index must be >= 1");
  switch (kind) {
    case Kind::zero:
      return 0.0;
    case Kind::constant:
      return value;
    case Kind::parabola: {
      // sine-series coefficients of x(L-x): (u0, h_k) = 2 sqrt(2/L) (1-(-1)^k) (L/(k pi))^3
      // on the default domain L = pi this is 2 sqrt(2/pi) (1-(-1)^k) / k^3;
      // even modes vanish by symmetry
      if (k % 2 == 0) return 0.0;
      const double L = basis.length;
      const double kk = static_cast<double>(k);
      const double pi = 3.14159265358979323846;
      return 4.0 * std::sqrt(2.0 / L) * (L * L * L) / (kk * kk * kk * pi * pi * pi);
    }
    case Kind::explicit_list:
      if (static_cast<std::size_t>(k) > values.size())
        throw std::out_of_range("InitialCondition: index past end of explicit list");
      return values[static_cast<std::size_t>(k - 1)];
  }
  throw std::logic_error("InitialCondition: bad kind");
}

std::string InitialCondition::describe() const {
  switch (kind) {
    case Kind::zero:
      return "zero";
    case Kind::constant:
      return "constant";
    case Kind::parabola:
      return "parabola";
    case Kind::explicit_list:
      return "explicit[" + std::to_string(values.size()) + "]";
  }
  return "?";
}

std::vector<int> ModelSpec::dead_modes() const {
  std::vector<int> dead;
  for (int k = 1; k <= modes; ++k) {
    if (initial_coefficient(k) == 0.0) dead.push_back(k);
  }
  return dead;
}

void ModelSpec::validate() const {
  box.validate();
  if (!(sigma0 > 0.0)) throw std::invalid_argument("ModelSpec: sigma0 must be positive");
  if (modes < 1) throw std::invalid_argument("ModelSpec: mode count must be >= 1");
  if (!(horizon > 0.0)) throw std::invalid_argument("ModelSpec: horizon must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("ModelSpec: dt must be positive");

  const int explicit_limit = [&] {
    int lim = 0;
    for (const auto* fam : {&mu, &nu, &q, &p}) {
      if (fam->is_explicit()) {
        lim = lim == 0 ? fam->max_index() : std::min(lim, fam->max_index());
      }
    }
    return lim;
  }();
  if (explicit_limit != 0 && explicit_limit < modes)
    throw std::invalid_argument("ModelSpec: explicit family shorter than the mode count");

  for (int k = 1; k <= modes; ++k) {
    if (!(q_k(k) > 0.0)) throw std::invalid_argument("ModelSpec: q_k must be strictly positive");
    if (p_k(k) < 0.0) throw std::invalid_argument("ModelSpec: p_k must be nonnegative");
    if (!std::isfinite(mu_k(k)) || !std::isfinite(nu_k(k)))
      throw std::invalid_argument("ModelSpec: non-finite drift coefficient");
    if (!(drift(k) > 0.0))
      throw std::invalid_argument("ModelSpec: theta0*mu_k + nu_k must be positive (k=" +
                                  std::to_string(k) + ")");
  }

  if (noise == NoiseType::additive) {
    if (!nu.is_zero()) throw std::invalid_argument("ModelSpec: additive model requires nu == 0");
    if (!p.is_zero()) throw std::invalid_argument("ModelSpec: additive model requires p == 0");
    for (int k = 1; k <= modes; ++k) {
      if (theta0 * mu_k(k) == 0.0)
        throw std::invalid_argument("ModelSpec: additive model requires theta0*mu_k != 0");
    }
  } else {
    // A fully dark initial condition leaves nothing to observe. Individual
    // zero modes are tolerated: their trajectories are exactly zero and the
    // estimators skip them.
    bool any_alive = false;
    for (int k = 1; k <= modes; ++k) {
      if (initial_coefficient(k) != 0.0) {
        any_alive = true;
        break;
      }
    }
    if (!any_alive)
      throw std::invalid_argument("ModelSpec: shell model requires a nonzero initial coefficient");
  }

  if (!basis.has_exact_eigenvalues())
    throw std::invalid_argument("ModelSpec: simulation requires exact eigenvalues (d == 1)");
}

std::vector<double> ModelSpec::default_time_grid() const {
  std::vector<double> grid;
  const int steps = static_cast<int>(std::llround(horizon / dt));
  grid.reserve(static_cast<std::size_t>(steps) + 1);
  for (int j = 0; j <= steps; ++j) grid.push_back(dt * static_cast<double>(j));
  if (grid.back() < horizon) grid.push_back(horizon);
  return grid;
}

ModelSpec fractional_laplacian_model(NoiseType noise, double beta, std::optional<double> beta0,
                                     int dimension, CoefficientFamily q, CoefficientFamily p) {
  if (dimension < 1) throw std::invalid_argument("fractional_laplacian_model: dimension >= 1");
  ModelSpec model;
  model.noise = noise;
  model.basis.dimension = dimension;
  // lambda_k = k^2 exactly for d == 1; the exponent rule otherwise
  const double exponent = 2.0 / static_cast<double>(dimension);
  model.mu = beta == 0.0 ? CoefficientFamily::constant(1.0)
                         : CoefficientFamily::power(1.0, exponent * beta);
  if (noise == NoiseType::shell) {
    if (!beta0.has_value())
      throw std::invalid_argument("fractional_laplacian_model: shell model requires beta0");
    model.nu = *beta0 == 0.0 ? CoefficientFamily::constant(1.0)
                             : CoefficientFamily::power(1.0, exponent * *beta0);
    model.p = std::move(p);
  } else {
    model.nu = CoefficientFamily::zero_family();
    model.p = CoefficientFamily::zero_family();
  }
  model.q = std::move(q);
  return model;
}

ModelSpec example_shell_model() {
  ModelSpec model = fractional_laplacian_model(NoiseType::shell, 1.0, 0.5, 1,
                                               CoefficientFamily::power(1.0, 1.0),
                                               CoefficientFamily::power(1.0, 1.0));
  model.theta0 = 0.5;
  model.sigma0 = 0.6;
  model.box = ParameterBox{0.05, 2.0, 0.1, 2.0};
  model.initial = InitialCondition::parabola();
  model.horizon = 1.0;
  model.dt = 0.01;
  model.modes = 60;
  model.validate();
  return model;
}

ModelSpec example_additive_model() {
  ModelSpec model = fractional_laplacian_model(NoiseType::additive, 1.0, std::nullopt, 1,
                                               CoefficientFamily::constant(1.0),
                                               CoefficientFamily::zero_family());
  model.theta0 = 0.1;
  model.sigma0 = 0.1;
  model.box = ParameterBox{0.01, 1.0, 0.01, 1.0};
  model.initial = InitialCondition::zero();
  model.horizon = 1.0;
  model.dt = 0.01;
  model.modes = 60;
  model.validate();
  return model;
}

}  // namespace sonde
