#include "softgpi/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include <Eigen/Dense>

#include "softgpi/csv.hpp"
#include "softgpi/errors.hpp"

namespace softgpi {

QuinticCoeffs quintic_coeffs(const QuinticBoundary& bc) {
  const double T = bc.duration;
  if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("quintic duration must be positive");

  // Solve in normalized time tau = t / T, where the system matrix is fixed and
  // well conditioned, then rescale: coefficient of t^j is b_j / T^j.
  // Unknowns b_0..b_5 multiply tau^0..tau^5.
  Eigen::Matrix<double, 6, 6> m = Eigen::Matrix<double, 6, 6>::Zero();
  Eigen::Matrix<double, 6, 1> rhs;
  for (int j = 0; j < 6; ++j) {
    m(0, j) = (j == 0) ? 1.0 : 0.0;      // theta(0)
    m(1, j) = (j == 1) ? 1.0 : 0.0;      // theta'(0)
    m(2, j) = (j == 2) ? 2.0 : 0.0;      // theta''(0)
    m(3, j) = 1.0;                       // theta(1)
    m(4, j) = j;                         // theta'(1)
    m(5, j) = j * (j - 1);               // theta''(1)
  }
  rhs << bc.theta0, bc.v0 * T, bc.acc0 * T * T, bc.thetaf, bc.vf * T, bc.accf * T * T;
  const Eigen::Matrix<double, 6, 1> b = m.fullPivLu().solve(rhs);

  QuinticCoeffs q;
  q.duration = T;
  for (int j = 0; j < 6; ++j) q.a[5 - j] = b(j) / std::pow(T, j);
  return q;
}

TrajectorySample sample_quintic(const QuinticCoeffs& q, double t) {
  if (t < 0.0) throw DomainError("quintic sampled at negative time");
  const auto& a = q.a;
  const double te = std::min(t, q.duration);
  double p = 0.0;
  double dp = 0.0;
  double ddp = 0.0;
  // Horner over the paper's ordering: a[0] t^5 + ... + a[5].
  for (int i = 0; i < 6; ++i) {
    ddp = ddp * te + 2.0 * dp;
    dp = dp * te + p;
    p = p * te + a[i];
  }
  if (t > q.duration) return {t, p, 0.0, 0.0};
  return {t, p, dp, ddp};
}

HarmonicParams HarmonicParams::from_centisecond(double amplitude, double f_per_cs, double h) {
  const double two_pi = 2.0 * std::numbers::pi;
  double phase = std::fmod(h, two_pi);
  if (phase < 0.0) phase += two_pi;
  return {amplitude, f_per_cs * 100.0, phase};
}

TrajectorySample harmonic_sample(const HarmonicParams& p, double t) {
  if (!(p.amplitude > 0.0)) throw DomainError("harmonic amplitude must be positive");
  const double arg = p.frequency * t + p.phase;
  const double half = 0.5 * p.amplitude;
  const double s = std::sin(arg);
  const double c = std::cos(arg);
  return {t, half * s + half, half * p.frequency * c, -half * p.frequency * p.frequency * s};
}

TrajectorySample project_to_rom(const TrajectorySample& s, Joint joint) {
  const RangeOfMotion rom = range_of_motion(joint);
  if (rom.contains(s.theta_d)) return s;
  return {s.t, std::clamp(s.theta_d, rom.min, rom.max), 0.0, 0.0};
}

namespace {

double uniform_period(const std::vector<double>& t) {
  const double dt = t[1] - t[0];
  if (!(dt > 0.0)) throw FormatError("taught trajectory time must be strictly increasing");
  const double tol = 1e-6 * std::max(1.0, dt);
  for (std::size_t k = 1; k < t.size(); ++k) {
    if (std::abs((t[k] - t[k - 1]) - dt) > tol) {
      throw FormatError("taught trajectory is not uniformly sampled (row " + std::to_string(k) +
                        ")");
    }
  }
  return dt;
}

/// Centered moving average; near the ends the window shrinks symmetrically.
std::vector<double> moving_average(const std::vector<double>& x, int window) {
  const int n = static_cast<int>(x.size());
  const int half = std::max(0, (window - 1) / 2);
  std::vector<double> y(x.size());
  for (int k = 0; k < n; ++k) {
    const int h = std::min({half, k, n - 1 - k});
    double acc = 0.0;
    for (int j = k - h; j <= k + h; ++j) acc += x[j];
    y[k] = acc / (2 * h + 1);
  }
  return y;
}

/// Central differences inside, second-order one-sided differences at the ends.
std::vector<double> differentiate(const std::vector<double>& v, double dt) {
  const std::size_t n = v.size();
  std::vector<double> d(n);
  for (std::size_t k = 1; k + 1 < n; ++k) d[k] = (v[k + 1] - v[k - 1]) / (2.0 * dt);
  d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * dt);
  d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * dt);
  return d;
}

TrajectorySample lerp(const TrajectorySample& a, const TrajectorySample& b, double w, double t) {
  return {t, a.theta_d + w * (b.theta_d - a.theta_d),
          a.theta_d_dot + w * (b.theta_d_dot - a.theta_d_dot),
          a.theta_d_ddot + w * (b.theta_d_ddot - a.theta_d_ddot)};
}

}  // namespace

std::vector<TrajectorySample> load_taught(const std::vector<TaughtRecord>& records,
                                          const TeachOptions& options) {
  if (records.size() < 3) throw FormatError("taught trajectory needs at least 3 records");
  if (options.smoothing_window < 1) throw FormatError("smoothing window must be >= 1");

  std::vector<double> t, vel;
  t.reserve(records.size());
  vel.reserve(records.size());
  for (const auto& r : records) {
    t.push_back(r.t);
    vel.push_back(r.theta_dot);
  }
  const double dt = uniform_period(t);

  // Differencing and the moving average are both shift-invariant and commute
  // in the interior; differencing first keeps the end samples consistent.
  const std::vector<double> acc = moving_average(differentiate(vel, dt), options.smoothing_window);

  std::vector<TrajectorySample> out;
  out.reserve(records.size());
  const double t0 = records.front().t;
  for (std::size_t k = 0; k < records.size(); ++k) {
    out.push_back({records[k].t - t0, records[k].theta, records[k].theta_dot, acc[k]});
  }

  if (options.resample_period && std::abs(*options.resample_period - dt) > 1e-12) {
    const double ts = *options.resample_period;
    if (!(ts > 0.0)) throw FormatError("resample period must be positive");
    const double end = out.back().t;
    std::vector<TrajectorySample> resampled;
    for (std::size_t k = 0;; ++k) {
      const double tk = static_cast<double>(k) * ts;
      if (tk > end + 1e-12) break;
      const double pos = tk / dt;
      const std::size_t i = std::min(static_cast<std::size_t>(pos), out.size() - 2);
      resampled.push_back(lerp(out[i], out[i + 1], pos - static_cast<double>(i), tk));
    }
    return resampled;
  }
  return out;
}

std::vector<TaughtRecord> read_taught_csv(const std::filesystem::path& path) {
  const csv::Table table = csv::read(path, {"t", "theta", "theta_dot"});
  std::vector<TaughtRecord> out;
  out.reserve(table.rows.size());
  for (const auto& r : table.rows) out.push_back({r[0], r[1], r[2]});
  return out;
}

void write_taught_csv(const std::filesystem::path& path, const std::vector<TaughtRecord>& records) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot write '" + path.string() + "'");
  f << "t,theta,theta_dot\n";
  f.precision(17);
  for (const auto& r : records) f << r.t << ',' << r.theta << ',' << r.theta_dot << '\n';
  if (!f) throw IoError("write failed for '" + path.string() + "'");
}

TrajectorySample sample_sequence(const std::vector<TrajectorySample>& seq, double t) {
  if (seq.empty()) throw DomainError("empty trajectory");
  if (seq.size() == 1 || t <= seq.front().t) {
    TrajectorySample s = seq.front();
    s.t = t;
    return s;
  }
  const double dt = seq[1].t - seq[0].t;
  const double pos = (t - seq.front().t) / dt;
  const auto last = seq.size() - 1;
  if (pos >= static_cast<double>(last)) {
    if (pos - static_cast<double>(last) < 1e-9) {
      TrajectorySample s = seq.back();
      s.t = t;
      return s;
    }
    return {t, seq.back().theta_d, 0.0, 0.0};
  }
  // Snap to a stored sample when the controller grid coincides with the record grid.
  const double nearest = std::round(pos);
  if (std::abs(pos - nearest) < 1e-9) {
    TrajectorySample s = seq[static_cast<std::size_t>(nearest)];
    s.t = t;
    return s;
  }
  const auto i = static_cast<std::size_t>(pos);
  return lerp(seq[i], seq[i + 1], pos - static_cast<double>(i), t);
}

}  // namespace softgpi
