#pragma once

#include "softgpi/plant.hpp"
#include "softgpi/trajectory.hpp"

namespace softgpi {

/// PWM saturation of the pneumatic pumps [%].
inline constexpr double kPwmMin = 0.0;
inline constexpr double kPwmMax = 100.0;

/// Closed-loop design: target polynomial (s^2 + 2 xi wn s + wn^2)^2.
struct GpiDesign {
  double xi = 0.9;
  double omega_n = 6.1;  ///< [rad/s]
};

/// Constants of the lead compensator (k2 s^2 + k1 s + k0) / (s (s + k3)).
struct GpiGains {
  double k0 = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
};

/// Assigns the closed-loop characteristic polynomial
///   s^4 + (k3+g1) s^3 + (k2 + k3 g1 + g2) s^2 + (k3 g2 + k1) s + k0
/// to (s^2 + 2 xi wn s + wn^2)^2.
/// Throws ConfigError for a non-positive design or when k3 <= 0.
GpiGains compute_gains(const PlantCoefficients& plant, const GpiDesign& design);

/// Max relative deviation between the closed-loop coefficients implied by
/// `gains` and the target expansion for `design`.
double verify_characteristic(const GpiGains& gains, const PlantCoefficients& plant,
                             const GpiDesign& design);

/// Feedforward u_d = (theta_d'' + g1 theta_d' + g2 theta_d) / g0.
/// Throws DomainError if gamma0 == 0.
double nominal_input(const TrajectorySample& sample, const PlantCoefficients& plant);

/// Which input drives the integral reconstruction of the velocity.
enum class ReconstructionSource {
  kApplied,  ///< clamped command actually sent to the pump (default)
  kRaw,      ///< unclamped controller output
};

struct GpiOptions {
  ReconstructionSource source = ReconstructionSource::kApplied;
  /// Skip the error-integral update on ticks where the output is saturated
  /// and the error pushes further into the limit.
  bool conditional_integration = true;
  double u_min = kPwmMin;
  double u_max = kPwmMax;
};

struct GpiState {
  double integral_e = 0.0;         ///< trapezoidal integral of e [rad s]
  double double_integral_e = 0.0;  ///< trapezoidal integral of integral_e [rad s^2]
  double theta_int = 0.0;          ///< reconstruction of u: theta_dot_0/g0 + integral u dt
  double theta_int_d = 0.0;        ///< same reconstruction for the nominal input u_d
  double e0 = 0.0;                 ///< error latched on the first tick
  double prev_e = 0.0;
  double prev_integral_e = 0.0;
  double prev_u = 0.0;   ///< integrand of theta_int on the previous tick
  double prev_ud = 0.0;  ///< integrand of theta_int_d on the previous tick
  bool armed = false;        ///< set by reset()
  bool initialized = false;  ///< first tick done
};

struct ControlOutput {
  double u_command = 0.0;  ///< clamped to [u_min, u_max]
  double u_raw = 0.0;
  double u_nominal = 0.0;
  double error = 0.0;  ///< theta_meas - theta_d
  bool saturated = false;
};

/// Prepares a state for a new run.
void reset(GpiState& state);

/// One GPI tick:
///
///   u = u_d - k3 (theta_int - theta_int_d)
///         + (1/g0) [ -k2 (e - e0) - k1 int e - k0 int int e ]
///
/// theta_int integrates the input and theta_int_d the nominal input, both by
/// the trapezoidal rule and seeded with theta_d'(0)/g0. The current input
/// appears in its own trapezoid, so u is obtained from the resulting linear
/// equation in closed form.
///
/// Throws StateError if `state` was not reset, DomainError if dt <= 0.
ControlOutput control_step(GpiState& state, const GpiGains& gains, const PlantCoefficients& plant,
                           double theta_meas, const TrajectorySample& sample, double dt,
                           const GpiOptions& options = {});

/// Per-joint controller bundling gains, model and state.
class GpiController {
 public:
  GpiController(const PlantCoefficients& plant, const GpiDesign& design, GpiOptions options = {});
  GpiController(const PlantCoefficients& plant, const GpiGains& gains, GpiOptions options = {});

  void reset() { softgpi::reset(state_); }
  ControlOutput step(double theta_meas, const TrajectorySample& sample, double dt) {
    return control_step(state_, gains_, plant_, theta_meas, sample, dt, options_);
  }

  const GpiGains& gains() const { return gains_; }
  const GpiState& state() const { return state_; }
  const PlantCoefficients& plant() const { return plant_; }

 private:
  PlantCoefficients plant_;
  GpiGains gains_;
  GpiOptions options_;
  GpiState state_;
};

}  // namespace softgpi
