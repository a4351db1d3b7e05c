#include "softgpi/plant.hpp"

#include <cmath>
#include <string>

#include "softgpi/errors.hpp"

namespace softgpi {

double dc_gain(const PlantCoefficients& c) {
  if (c.gamma2 == 0.0) throw DomainError("dc_gain: gamma2 is zero (no static equilibrium)");
  return c.gamma0 / c.gamma2;
}

DisturbancePoly::DisturbancePoly(std::vector<double> coefficients)
    : coeffs_(std::move(coefficients)) {
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw ConfigError("disturbance coefficient is not finite");
  }
}

int DisturbancePoly::degree() const {
  return coeffs_.empty() ? 0 : static_cast<int>(coeffs_.size()) - 1;
}

double DisturbancePoly::operator()(double t) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

ZohTransition zoh_transition(const PlantCoefficients& c, double dt) {
  // A = [0 1; -g2 -g1]. With a = g1/2 and M = A + aI we have M^2 = (a^2 - g2) I,
  // so exp(A t) = exp(-a t) (C(t) I + S(t) M) with C, S the cosh/sinh (or
  // cos/sin) pair of sqrt(a^2 - g2).
  const double a = 0.5 * c.gamma1;
  const double d = a * a - c.gamma2;
  const double z = d * dt * dt;

  double ch = 0.0;
  double sh = 0.0;  // S(dt), carries the factor dt
  if (std::abs(z) < 1e-6) {
    ch = 1.0 + z / 2.0 + z * z / 24.0 + z * z * z / 720.0;
    sh = dt * (1.0 + z / 6.0 + z * z / 120.0 + z * z * z / 5040.0);
  } else if (d > 0.0) {
    const double w = std::sqrt(d);
    ch = std::cosh(w * dt);
    sh = std::sinh(w * dt) / w;
  } else {
    const double w = std::sqrt(-d);
    ch = std::cos(w * dt);
    sh = std::sin(w * dt) / w;
  }
  const double decay = std::exp(-a * dt);

  ZohTransition tr{};
  tr.phi[0][0] = decay * (ch + a * sh);
  tr.phi[0][1] = decay * sh;
  tr.phi[1][0] = decay * (-c.gamma2 * sh);
  tr.phi[1][1] = decay * (ch - a * sh);

  // Constant input w shifts the equilibrium to (w / g2, 0):
  // x+ = x_eq + phi (x - x_eq)  =>  gamma = (I - phi) [1/g2, 0]^T.
  tr.gamma[0] = (1.0 - tr.phi[0][0]) / c.gamma2;
  tr.gamma[1] = -tr.phi[1][0] / c.gamma2;
  return tr;
}

SecondOrderPlant::SecondOrderPlant(const PlantCoefficients& coefficients, PlantState initial)
    : coeffs_(coefficients), state_(initial) {
  const auto& c = coeffs_;
  if (!(std::isfinite(c.gamma0) && std::isfinite(c.gamma1) && std::isfinite(c.gamma2))) {
    throw ConfigError("plant coefficients must be finite");
  }
  if (!(c.gamma0 > 0.0) || !(c.gamma1 >= 0.0) || !(c.gamma2 > 0.0)) {
    throw ConfigError("plant requires gamma0 > 0, gamma1 >= 0, gamma2 > 0");
  }
}

const PlantState& SecondOrderPlant::step(double u, const DisturbancePoly& dist, double t,
                                         double dt) {
  if (!(dt > 0.0)) throw DomainError("plant step: dt must be positive");
  if (!std::isfinite(u)) throw DomainError("plant step: input is not finite");
  if (dt != cached_dt_) {
    cached_ = zoh_transition(coeffs_, dt);
    cached_dt_ = dt;
  }
  const double w = coeffs_.gamma0 * u + dist(t);
  const PlantState x = state_;
  state_.theta = cached_.phi[0][0] * x.theta + cached_.phi[0][1] * x.theta_dot + cached_.gamma[0] * w;
  state_.theta_dot =
      cached_.phi[1][0] * x.theta + cached_.phi[1][1] * x.theta_dot + cached_.gamma[1] * w;
  return state_;
}

std::pair<PlantCoefficients, PlantCoefficients> default_plants() {
  return {PlantCoefficients{0.0005725, 0.05725, 0.044},
          PlantCoefficients{0.0003665, 0.213, 0.04079}};
}

Sensor::Sensor(const SensorModel& model) : model_(model), rng_(model.seed) {
  if (!(model.noise_std >= 0.0)) throw ConfigError("sensor noise_std must be >= 0");
  if (!(model.quantization_step >= 0.0)) throw ConfigError("sensor quantization_step must be >= 0");
}

double Sensor::measure(double theta) {
  double y = theta;
  if (model_.noise_std > 0.0) y += model_.noise_std * normal_(rng_);
  if (model_.quantization_step > 0.0) {
    y = std::round(y / model_.quantization_step) * model_.quantization_step;
  }
  return y;
}

}  // namespace softgpi
