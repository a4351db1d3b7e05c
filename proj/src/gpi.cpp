#include "softgpi/gpi.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "softgpi/errors.hpp"

namespace softgpi {

GpiGains compute_gains(const PlantCoefficients& p, const GpiDesign& d) {
  if (!(d.xi > 0.0) || !(d.omega_n > 0.0)) {
    throw ConfigError("GPI design requires xi > 0 and omega_n > 0");
  }
  const double wn = d.omega_n;
  const double wn2 = wn * wn;
  const double lead = 4.0 * d.xi * wn - p.gamma1;

  GpiGains g;
  g.k0 = wn2 * wn2;
  g.k1 = 4.0 * wn2 * wn * d.xi - p.gamma2 * lead;
  g.k2 = 2.0 * wn2 + 4.0 * d.xi * d.xi * wn2 - p.gamma1 * lead - p.gamma2;
  g.k3 = lead;
  if (!(g.k3 > 0.0)) {
    throw ConfigError("GPI design gives k3 <= 0: omega_n too small for the plant damping");
  }
  return g;
}

double verify_characteristic(const GpiGains& k, const PlantCoefficients& p, const GpiDesign& d) {
  const double wn = d.omega_n;
  const double wn2 = wn * wn;
  const std::array<double, 4> closed{
      k.k3 + p.gamma1,
      k.k2 + k.k3 * p.gamma1 + p.gamma2,
      k.k3 * p.gamma2 + k.k1,
      k.k0,
  };
  const std::array<double, 4> target{
      4.0 * d.xi * wn,
      2.0 * wn2 + 4.0 * d.xi * d.xi * wn2,
      4.0 * d.xi * wn2 * wn,
      wn2 * wn2,
  };
  double worst = 0.0;
  for (std::size_t i = 0; i < closed.size(); ++i) {
    const double scale = std::max(std::abs(target[i]), 1e-300);
    worst = std::max(worst, std::abs(closed[i] - target[i]) / scale);
  }
  return worst;
}

double nominal_input(const TrajectorySample& s, const PlantCoefficients& p) {
  if (p.gamma0 == 0.0) throw DomainError("nominal input undefined for gamma0 = 0");
  return (s.theta_d_ddot + p.gamma1 * s.theta_d_dot + p.gamma2 * s.theta_d) / p.gamma0;
}

void reset(GpiState& state) {
  state = GpiState{};
  state.armed = true;
}

ControlOutput control_step(GpiState& st, const GpiGains& k, const PlantCoefficients& p,
                           double theta_meas, const TrajectorySample& sample, double dt,
                           const GpiOptions& opt) {
  if (!st.armed) throw StateError("GPI state used before reset");
  if (!(dt > 0.0)) throw DomainError("control step: dt must be positive");

  const double ud = nominal_input(sample, p);
  const double e = theta_meas - sample.theta_d;
  const double half = 0.5 * dt;

  double integral_e = 0.0;
  double double_integral_e = 0.0;
  double theta_int_base = 0.0;  // theta_int without the current-input node
  double theta_int_d = 0.0;
  double implicit = 0.0;        // weight of u in its own trapezoid node

  if (!st.initialized) {
    st.e0 = e;
    const double seed = sample.theta_d_dot / p.gamma0;
    theta_int_base = seed;
    theta_int_d = seed;
  } else {
    integral_e = st.integral_e + half * (st.prev_e + e);
    double_integral_e = st.double_integral_e + half * (st.integral_e + integral_e);
    theta_int_base = st.theta_int + half * st.prev_u;
    theta_int_d = st.theta_int_d + half * (st.prev_ud + ud);
    implicit = half;
  }

  const double bracket =
      (-k.k2 * (e - st.e0) - k.k1 * integral_e - k.k0 * double_integral_e) / p.gamma0;
  // u = ud - k3 (theta_int_base + implicit u - theta_int_d) + bracket
  const double u_raw =
      (ud - k.k3 * (theta_int_base - theta_int_d) + bracket) / (1.0 + k.k3 * implicit);
  const double u_cmd = std::clamp(u_raw, opt.u_min, opt.u_max);
  const bool saturated = (u_cmd != u_raw);

  // Error > 0 lowers u through the integral terms, error < 0 raises it.
  const bool winding = (u_raw > opt.u_max && e < 0.0) || (u_raw < opt.u_min && e > 0.0);
  if (st.initialized && !(opt.conditional_integration && winding)) {
    st.integral_e = integral_e;
    st.double_integral_e = double_integral_e;
  }

  const double u_integrand = (opt.source == ReconstructionSource::kApplied) ? u_cmd : u_raw;
  st.theta_int = theta_int_base + implicit * u_integrand;
  st.theta_int_d = theta_int_d;
  st.prev_u = u_integrand;
  st.prev_ud = ud;
  st.prev_e = e;
  st.prev_integral_e = st.integral_e;
  st.initialized = true;

  return {u_cmd, u_raw, ud, e, saturated};
}

GpiController::GpiController(const PlantCoefficients& plant, const GpiDesign& design,
                             GpiOptions options)
    : GpiController(plant, compute_gains(plant, design), options) {}

GpiController::GpiController(const PlantCoefficients& plant, const GpiGains& gains,
                             GpiOptions options)
    : plant_(plant), gains_(gains), options_(options) {
  softgpi::reset(state_);
}

}  // namespace softgpi
