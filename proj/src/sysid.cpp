#include "softgpi/sysid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numeric>

#include <Eigen/Dense>

#include "softgpi/csv.hpp"
#include "softgpi/errors.hpp"

namespace softgpi {
namespace {

using Params = std::array<double, 3>;  // log(gamma0), log(gamma1), log(gamma2)

PlantCoefficients from_log(const Params& p) {
  return {std::exp(p[0]), std::exp(p[1]), std::exp(p[2])};
}

double sum_squared_error(std::span<const double> y, std::span<const double> y_hat) {
  double acc = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    const double r = y[k] - y_hat[k];
    acc += r * r;
  }
  return acc;
}

/// Full-window centered moving average; output index k corresponds to input k + half.
std::vector<double> centered_average(std::span<const double> x, int window) {
  const int half = window / 2;
  const int n = static_cast<int>(x.size());
  std::vector<double> y;
  for (int k = half; k + half < n; ++k) {
    double acc = 0.0;
    for (int j = k - half; j <= k + half; ++j) acc += x[j];
    y.push_back(acc / (2 * half + 1));
  }
  return y;
}

double check_uniform(const std::vector<IoRecord>& r) {
  const double dt = r[1].t - r[0].t;
  if (!(dt > 0.0)) throw DataError("identification data: time must be strictly increasing");
  const double tol = 1e-6 * std::max(1.0, dt);
  for (std::size_t k = 1; k < r.size(); ++k) {
    if (std::abs((r[k].t - r[k - 1].t) - dt) > tol) {
      throw DataError("identification data is not uniformly sampled");
    }
  }
  return dt;
}

/// Stage 1: theta'' = g0 u - g1 theta' - g2 theta by linear least squares on
/// smoothed central differences.
PlantCoefficients least_squares_init(const std::vector<IoRecord>& r, double dt, int window) {
  std::vector<double> theta, u_mid;
  theta.reserve(r.size());
  u_mid.reserve(r.size());
  for (std::size_t k = 0; k < r.size(); ++k) {
    theta.push_back(r[k].theta);
    // The second difference at t_k averages the held input over
    // [t_{k-1}, t_{k+1}], i.e. u_{k-1} and u_k with equal weight.
    u_mid.push_back(k == 0 ? r[0].u : 0.5 * (r[k - 1].u + r[k].u));
  }
  const std::vector<double> ts = centered_average(theta, window);
  const std::vector<double> us = centered_average(u_mid, window);

  const std::size_t n = ts.size();
  if (n < 3) throw DataError("identification data too short after smoothing");
  Eigen::MatrixXd a(n - 2, 3);
  Eigen::VectorXd b(n - 2);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double vel = (ts[k + 1] - ts[k - 1]) / (2.0 * dt);
    const double acc = (ts[k + 1] - 2.0 * ts[k] + ts[k - 1]) / (dt * dt);
    a(k - 1, 0) = us[k];
    a(k - 1, 1) = -vel;
    a(k - 1, 2) = -ts[k];
    b(k - 1) = acc;
  }

  // Column scaling, then a rank check on the normal matrix.
  Eigen::Vector3d scale;
  for (int j = 0; j < 3; ++j) {
    const double norm = a.col(j).norm();
    if (norm == 0.0) throw IllConditioned("regressor column is identically zero");
    scale(j) = norm;
    a.col(j) /= norm;
  }
  const Eigen::Matrix3d normal = a.transpose() * a;
  // Symmetric PSD, so the eigenvalues are the singular values (ascending).
  const Eigen::Vector3d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(normal).eigenvalues();
  if (!(ev(0) > 1e-12 * ev(2))) {
    throw IllConditioned("least-squares normal matrix is singular");
  }
  const Eigen::Vector3d x = normal.ldlt().solve(a.transpose() * b);
  return {x(0) / scale(0), x(1) / scale(1), x(2) / scale(2)};
}

/// Replaces non-positive entries so that the log-parameterization is defined.
PlantCoefficients positive(PlantCoefficients c) {
  c.gamma0 = std::max(c.gamma0, 1e-9);
  c.gamma1 = std::max(c.gamma1, 1e-6);
  c.gamma2 = std::max(c.gamma2, 1e-6);
  return c;
}

}  // namespace

double fit_percent(std::span<const double> y, std::span<const double> y_hat) {
  if (y.size() != y_hat.size()) throw DomainError("fit_percent: length mismatch");
  if (y.size() < 2) throw DomainError("fit_percent: need at least two samples");
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
  double spread = 0.0;
  for (double v : y) spread += (v - mean) * (v - mean);
  if (spread == 0.0) throw DomainError("fit_percent: measured signal is constant");
  return 100.0 * (1.0 - std::sqrt(sum_squared_error(y, y_hat)) / std::sqrt(spread));
}

std::vector<double> simulate_candidate(const PlantCoefficients& gammas, std::span<const double> u,
                                       double ts) {
  SecondOrderPlant plant(gammas);
  const DisturbancePoly none;
  std::vector<double> out;
  out.reserve(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) {
    out.push_back(plant.state().theta);
    plant.step(u[k], none, static_cast<double>(k) * ts, ts);
  }
  return out;
}

FitResult fit_second_order(const std::vector<IoRecord>& records, const SysidOptions& opt) {
  if (records.size() < 50) throw DataError("identification needs at least 50 records");
  const double dt = check_uniform(records);

  std::vector<double> u, y;
  u.reserve(records.size());
  y.reserve(records.size());
  for (const auto& r : records) {
    u.push_back(r.u);
    y.push_back(r.theta);
  }
  const auto [umin, umax] = std::minmax_element(u.begin(), u.end());
  if (*umax - *umin <= 1e-12 * std::max(1.0, std::abs(*umax))) {
    throw IllConditioned("input is constant: model is not identifiable");
  }

  FitResult result;
  result.initial = least_squares_init(records, dt, opt.smoothing_window);

  auto cost = [&](const Params& p) {
    return sum_squared_error(y, simulate_candidate(from_log(p), u, dt));
  };

  const PlantCoefficients start = positive(result.initial);
  Params base{std::log(start.gamma0), std::log(start.gamma1), std::log(start.gamma2)};
  double best = cost(base);
  result.initial_cost = best;

  // Hooke-Jeeves pattern search in log-parameter space.
  double step = opt.initial_step;
  int it = 0;
  auto explore = [&](Params p, double& f) {
    for (int j = 0; j < 3; ++j) {
      for (double dir : {+1.0, -1.0}) {
        Params trial = p;
        trial[j] += dir * step;
        const double ft = cost(trial);
        ++it;
        if (ft < f) {
          f = ft;
          p = trial;
          break;
        }
      }
    }
    return p;
  };
  while (step > opt.min_step && it < opt.max_iterations) {
    double f_new = best;
    Params next = explore(base, f_new);
    if (f_new < best) {
      // Pattern moves along the last successful direction while they help.
      while (it < opt.max_iterations) {
        Params pattern;
        for (int j = 0; j < 3; ++j) pattern[j] = 2.0 * next[j] - base[j];
        base = next;
        best = f_new;
        double f_pat = cost(pattern);
        ++it;
        Params moved = explore(pattern, f_pat);
        if (f_pat < best) {
          next = moved;
          f_new = f_pat;
        } else {
          break;
        }
      }
    } else {
      step *= 0.5;
    }
  }

  result.gammas = from_log(base);
  result.cost = best;
  result.iterations = it;
  result.fit_percent = fit_percent(y, simulate_candidate(result.gammas, u, dt));
  return result;
}

std::vector<double> staircase_input(int ticks_per_level) {
  static constexpr std::array<double, 7> kLevels{0.0, 25.0, 50.0, 75.0, 100.0, 50.0, 0.0};
  std::vector<double> u;
  u.reserve(kLevels.size() * static_cast<std::size_t>(std::max(ticks_per_level, 0)));
  for (double level : kLevels) u.insert(u.end(), static_cast<std::size_t>(ticks_per_level), level);
  return u;
}

std::vector<IoRecord> synthesize_io(const PlantCoefficients& gammas, std::span<const double> u,
                                    double ts, const SensorModel& sensor_model) {
  const std::vector<double> clean = simulate_candidate(gammas, u, ts);
  Sensor sensor(sensor_model);
  std::vector<IoRecord> out;
  out.reserve(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) {
    out.push_back({static_cast<double>(k) * ts, u[k], sensor.measure(clean[k])});
  }
  return out;
}

std::vector<IoRecord> read_io_csv(const std::filesystem::path& path) {
  const csv::Table table = csv::read(path, {"t", "u", "theta"});
  std::vector<IoRecord> out;
  out.reserve(table.rows.size());
  for (const auto& r : table.rows) out.push_back({r[0], r[1], r[2]});
  return out;
}

void write_io_csv(const std::filesystem::path& path, const std::vector<IoRecord>& records) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot write '" + path.string() + "'");
  f.precision(17);
  f << "t,u,theta\n";
  for (const auto& r : records) f << r.t << ',' << r.u << ',' << r.theta << '\n';
  if (!f) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace softgpi
