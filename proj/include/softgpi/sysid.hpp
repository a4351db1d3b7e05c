#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "softgpi/plant.hpp"

namespace softgpi {

/// One sample of an open-loop identification experiment.
struct IoRecord {
  double t = 0.0;      ///< [s]
  double u = 0.0;      ///< [PWM %]
  double theta = 0.0;  ///< [rad]
};

struct FitResult {
  PlantCoefficients gammas;
  double fit_percent = 0.0;
  /// Continuous-time least-squares initializer (before output-error refinement).
  PlantCoefficients initial;
  double initial_cost = 0.0;  ///< sum of squared output errors of `initial`
  double cost = 0.0;          ///< same for `gammas`
  int iterations = 0;
};

struct SysidOptions {
  int smoothing_window = 5;
  int max_iterations = 4000;
  double initial_step = 0.25;  ///< relative step in log-parameter space
  double min_step = 1e-10;
};

/// NRMSE fit 100 (1 - ||y - y_hat|| / ||y - mean(y)||).
/// Throws DomainError on length mismatch, fewer than 2 samples or constant y.
double fit_percent(std::span<const double> measured, std::span<const double> simulated);

/// Zero-initial-state response of gamma0/(s^2+gamma1 s+gamma2) to a
/// zero-order-held input sampled at Ts. Element k is the output at t = k Ts.
std::vector<double> simulate_candidate(const PlantCoefficients& gammas, std::span<const double> u,
                                       double ts);

/// Two-stage continuous-time fit: least squares on the smoothed ODE, then a
/// derivative-free output-error refinement.
///
/// Throws DataError for fewer than 50 records or nonuniform spacing, and
/// IllConditioned when the regression has no unique solution (e.g. constant u).
FitResult fit_second_order(const std::vector<IoRecord>& records, const SysidOptions& options = {});

/// Staircase excitation {0, 25, 50, 75, 100, 50, 0} with `ticks_per_level` samples per level.
std::vector<double> staircase_input(int ticks_per_level = 100);

/// Simulated open-loop experiment: u through the plant, optional sensor noise.
std::vector<IoRecord> synthesize_io(const PlantCoefficients& gammas, std::span<const double> u,
                                    double ts, const SensorModel& sensor = {});

/// CSV with header `t,u,theta`.
std::vector<IoRecord> read_io_csv(const std::filesystem::path& path);
void write_io_csv(const std::filesystem::path& path, const std::vector<IoRecord>& records);

}  // namespace softgpi
