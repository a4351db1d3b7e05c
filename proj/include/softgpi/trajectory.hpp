#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <vector>

#include "softgpi/kinematics.hpp"

namespace softgpi {

/// Desired joint-space reference at one instant.
struct TrajectorySample {
  double t = 0.0;             ///< [s]
  double theta_d = 0.0;       ///< [rad]
  double theta_d_dot = 0.0;   ///< [rad/s]
  double theta_d_ddot = 0.0;  ///< [rad/s^2]
};

/// Quintic time scaling theta_d(t) = a0 t^5 + a1 t^4 + a2 t^3 + a3 t^2 + a4 t + a5.
///
/// Note the ordering: a[0] multiplies the highest power.
struct QuinticCoeffs {
  std::array<double, 6> a{};
  double duration = 0.0;  ///< T [s]
};

struct QuinticBoundary {
  double theta0 = 0.0;
  double thetaf = 0.0;
  double duration = 10.0;
  double v0 = 0.0;
  double vf = 0.0;
  double acc0 = 0.0;
  double accf = 0.0;
};

/// Solves the 6x6 boundary-value system. Throws DomainError if T <= 0.
QuinticCoeffs quintic_coeffs(const QuinticBoundary& bc);

inline QuinticCoeffs quintic_coeffs(double theta0, double thetaf, double duration) {
  return quintic_coeffs(QuinticBoundary{theta0, thetaf, duration});
}

/// Evaluates the polynomial and its analytic derivatives. For t > T the
/// terminal angle is held with zero rates. Throws DomainError for t < 0.
TrajectorySample sample_quintic(const QuinticCoeffs& coeffs, double t);

/// theta_d = A/2 sin(f t + h) + A/2 with f in rad/s.
struct HarmonicParams {
  double amplitude = 1.0;  ///< A [rad]
  double frequency = 0.0;  ///< f [rad/s]
  double phase = 0.0;      ///< h [rad]

  /// Builds parameters from a per-centisecond frequency (as plotted on a
  /// centisecond time axis); the phase is reduced modulo 2 pi.
  static HarmonicParams from_centisecond(double amplitude, double f_per_cs, double h);
};

/// Throws DomainError if amplitude <= 0.
TrajectorySample harmonic_sample(const HarmonicParams& p, double t);

/// Clamp theta_d into the joint ROM; a clamped sample becomes a flat hold.
TrajectorySample project_to_rom(const TrajectorySample& s, Joint joint);

/// One row of a recorded (taught) trajectory.
struct TaughtRecord {
  double t = 0.0;
  double theta = 0.0;
  double theta_dot = 0.0;
};

struct TeachOptions {
  int smoothing_window = 3;                 ///< moving-average length in ticks
  std::optional<double> resample_period{};  ///< controller period, if different
};

/// Turns recorded (t, theta, theta_dot) into reference samples with
/// acceleration from central differences of the smoothed velocity.
/// Throws FormatError on fewer than 3 records or nonuniform spacing.
std::vector<TrajectorySample> load_taught(const std::vector<TaughtRecord>& records,
                                          const TeachOptions& options = {});

/// Reads a CSV with header `t,theta,theta_dot`.
/// Throws FileError if the file cannot be opened, FormatError on bad content.
std::vector<TaughtRecord> read_taught_csv(const std::filesystem::path& path);

void write_taught_csv(const std::filesystem::path& path, const std::vector<TaughtRecord>& records);

/// Looks up a uniformly spaced sample sequence at time t. Holds the final
/// sample (with zero rates) past the end.
TrajectorySample sample_sequence(const std::vector<TrajectorySample>& seq, double t);

}  // namespace softgpi
