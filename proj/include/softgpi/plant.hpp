#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace softgpi {

/// Default sampling period of the control loop [s].
inline constexpr double kDefaultSamplingPeriod = 0.065;

/// Coefficients of G(s) = gamma0 / (s^2 + gamma1 s + gamma2), PWM% -> rad.
struct PlantCoefficients {
  double gamma0 = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;

  friend bool operator==(const PlantCoefficients&, const PlantCoefficients&) = default;
};

/// gamma0 / gamma2 [rad per PWM%]. Throws DomainError if gamma2 == 0.
double dc_gain(const PlantCoefficients& c);

/// Additive acceleration disturbance rho(t) = sum_i coefficients[i] t^i [rad/s^2].
class DisturbancePoly {
 public:
  DisturbancePoly() = default;
  explicit DisturbancePoly(std::vector<double> coefficients);

  static DisturbancePoly constant(double c) { return DisturbancePoly({c}); }

  /// Polynomial degree r; an empty polynomial has degree 0 and evaluates to 0.
  int degree() const;
  const std::vector<double>& coefficients() const { return coeffs_; }
  double operator()(double t) const;

 private:
  std::vector<double> coeffs_;
};

struct PlantState {
  double theta = 0.0;      ///< [rad]
  double theta_dot = 0.0;  ///< [rad/s]
};

/// 2x2 zero-order-hold transition for one sampling period.
///
/// x[k+1] = phi x[k] + gamma * w with w = gamma0 u + rho held over the period.
struct ZohTransition {
  double phi[2][2];
  double gamma[2];
};

ZohTransition zoh_transition(const PlantCoefficients& c, double dt);

/// One actuator-arm degree of freedom:
///   theta'' = gamma0 u - gamma1 theta' - gamma2 theta + rho(t)
/// advanced by exact zero-order-hold discretization.
class SecondOrderPlant {
 public:
  /// Throws ConfigError unless gamma0 > 0, gamma1 >= 0, gamma2 > 0.
  explicit SecondOrderPlant(const PlantCoefficients& coefficients, PlantState initial = {});

  const PlantCoefficients& coefficients() const { return coeffs_; }
  const PlantState& state() const { return state_; }
  void set_state(PlantState s) { state_ = s; }

  /// Advance from t to t + dt with u and rho(t) held constant.
  /// u is not clamped here. Throws DomainError if dt <= 0 or u is not finite.
  const PlantState& step(double u, const DisturbancePoly& dist, double t, double dt);

 private:
  PlantCoefficients coeffs_;
  PlantState state_;
  double cached_dt_ = -1.0;
  ZohTransition cached_{};
};

/// Identified models of the abduction and flexion actuators.
std::pair<PlantCoefficients, PlantCoefficients> default_plants();

struct SensorModel {
  double noise_std = 0.0;          ///< additive Gaussian std [rad]
  double quantization_step = 0.0;  ///< [rad], 0 disables
  std::uint64_t seed = 0;

  /// Robustness profile used by `--noise noisy`.
  static SensorModel noisy(std::uint64_t seed = 0) { return {0.002, 0.0, seed}; }
};

/// Stateful IMU stand-in: one random stream per instance.
class Sensor {
 public:
  /// Throws ConfigError on negative noise or quantization.
  explicit Sensor(const SensorModel& model);

  double measure(double theta);
  double measure(const PlantState& s) { return measure(s.theta); }
  const SensorModel& model() const { return model_; }

 private:
  SensorModel model_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace softgpi
