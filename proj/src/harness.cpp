#include "softgpi/harness.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "softgpi/csv.hpp"
#include "softgpi/errors.hpp"

namespace softgpi {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

std::uint64_t sensor_seed(std::uint64_t base, Joint j) {
  // splitmix64 finalizer over (seed, joint) keeps the two joints' streams
  // independent of which other joints are active.
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(joint_index(j) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

const std::vector<std::string> kRunHeader{"t",     "joint",     "theta_d", "theta_true",
                                          "theta_meas", "u_raw", "u_command", "e"};

}  // namespace

std::size_t tick_count(double duration, double ts) {
  const double ratio = duration / ts;
  // Guard against 13 / 0.065 = 200.00000000000003.
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) < 1e-9 * std::max(1.0, nearest)) {
    return static_cast<std::size_t>(nearest);
  }
  return static_cast<std::size_t>(std::ceil(ratio));
}

ReferenceGenerator::ReferenceGenerator(const JointConfig& joint, double ts)
    : joint_(joint.joint), spec_(joint.trajectory) {
  std::visit(Overloaded{
                 [](const SetpointSpec&) {},
                 [&](const QuinticSpec& q) {
                   quintic_ = quintic_coeffs(q.theta0, q.thetaf, q.duration);
                 },
                 [&](const HarmonicSpec& h) {
                   harmonic_ = HarmonicParams::from_centisecond(h.amplitude, h.f_per_cs, h.h);
                 },
                 [&](const TaughtSpec& s) {
                   if (!std::filesystem::exists(s.path)) {
                     throw FileError("taught trajectory file not found: " + s.path.string());
                   }
                   TeachOptions opt;
                   opt.smoothing_window = s.smoothing_window;
                   opt.resample_period = ts;
                   taught_ = load_taught(read_taught_csv(s.path), opt);
                 },
             },
             spec_);
}

TrajectorySample ReferenceGenerator::operator()(double t) const {
  TrajectorySample s;
  if (const auto* sp = std::get_if<SetpointSpec>(&spec_)) {
    s = {t, sp->theta, 0.0, 0.0};
  } else if (quintic_) {
    s = sample_quintic(*quintic_, t);
  } else if (harmonic_) {
    s = harmonic_sample(*harmonic_, t);
  } else {
    s = sample_sequence(taught_, t);
  }
  return project_to_rom(s, joint_);
}

RunLog run_scenario(const ScenarioConfig& config) {
  validate(config);

  struct Loop {
    Joint joint;
    ReferenceGenerator reference;
    SecondOrderPlant plant;
    GpiController controller;
    Sensor sensor;
    DisturbancePoly disturbance;
    std::vector<TickRecord> log;
  };

  const std::size_t n = tick_count(config.duration, config.ts);
  std::vector<Loop> loops;
  loops.reserve(config.joints.size());
  for (const JointConfig& jc : config.joints) {
    const PlantCoefficients coeffs = jc.plant.value_or(default_plant(jc.joint));
    const GpiDesign design = jc.design.value_or(default_design(jc.joint));
    ReferenceGenerator ref(jc, config.ts);
    const TrajectorySample r0 = ref(0.0);
    const PlantState initial{jc.initial_theta.value_or(r0.theta_d),
                             jc.initial_theta ? 0.0 : r0.theta_d_dot};
    SensorModel sm = config.sensor;
    sm.seed = sensor_seed(config.seed, jc.joint);
    Loop loop{jc.joint,
              std::move(ref),
              SecondOrderPlant(coeffs, initial),
              GpiController(coeffs, design, config.controller),
              Sensor(sm),
              jc.disturbance,
              {}};
    loop.log.reserve(n);
    loops.push_back(std::move(loop));
  }

  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * config.ts;
    for (Loop& lp : loops) {
      const TrajectorySample ref = lp.reference(t);
      const double theta_true = lp.plant.state().theta;
      const double theta_meas = lp.sensor.measure(theta_true);
      const ControlOutput out = lp.controller.step(theta_meas, ref, config.ts);
      lp.plant.step(out.u_command, lp.disturbance, t, config.ts);
      lp.log.push_back(
          {t, ref.theta_d, theta_true, theta_meas, out.u_raw, out.u_command, out.error});
    }
  }

  RunLog log;
  log.scenario = config.name;
  for (Loop& lp : loops) log.joints.emplace(lp.joint, std::move(lp.log));
  log.summary = steady_state_metrics(log, config.steady_state_window_fraction);
  return log;
}

JointSummary steady_state_metrics(const std::vector<TickRecord>& ticks, double window_fraction) {
  if (ticks.empty()) throw DomainError("steady_state_metrics: empty log");
  if (!(window_fraction > 0.0 && window_fraction <= 1.0)) {
    throw DomainError("steady_state_metrics: window fraction must lie in (0, 1]");
  }
  const std::size_t n = ticks.size();
  const auto w = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::ceil(window_fraction * static_cast<double>(n) - 1e-9)), 1, n);

  auto saturated = [](const TickRecord& r) { return r.u_raw < kPwmMin || r.u_raw > kPwmMax; };

  JointSummary s;
  s.window_ticks = w;
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t sat = 0;
  for (std::size_t k = n - w; k < n; ++k) {
    sum += ticks[k].e;
    sum_sq += ticks[k].e * ticks[k].e;
    sat += saturated(ticks[k]) ? 1 : 0;
  }
  const double mean = sum / static_cast<double>(w);
  s.mse = sum_sq / static_cast<double>(w);
  double var = 0.0;
  for (std::size_t k = n - w; k < n; ++k) var += (ticks[k].e - mean) * (ticks[k].e - mean);
  s.sde = std::sqrt(var / static_cast<double>(w));
  s.saturated_fraction = static_cast<double>(sat) / static_cast<double>(w);
  s.saturated_fraction_run =
      static_cast<double>(std::count_if(ticks.begin(), ticks.end(), saturated)) /
      static_cast<double>(n);
  s.final_error = ticks.back().e;
  return s;
}

RunSummary steady_state_metrics(const RunLog& log, double window_fraction) {
  RunSummary out;
  for (const auto& [joint, ticks] : log.joints) {
    out.joints.emplace(joint, steady_state_metrics(ticks, window_fraction));
  }
  return out;
}

std::string format_csv(const RunLog& log) {
  std::string out = "t,joint,theta_d,theta_true,theta_meas,u_raw,u_command,e\n";
  std::size_t n = 0;
  for (const auto& [j, ticks] : log.joints) n = std::max(n, ticks.size());
  char buf[512];
  for (std::size_t k = 0; k < n; ++k) {
    for (const auto& [j, ticks] : log.joints) {
      if (k >= ticks.size()) continue;
      const TickRecord& r = ticks[k];
      std::snprintf(buf, sizeof buf, "%.6f,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t,
                    static_cast<int>(j), r.theta_d, r.theta_true, r.theta_meas, r.u_raw,
                    r.u_command, r.e);
      out += buf;
    }
  }
  return out;
}

void emit_csv(const RunLog& log, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write '" + path.string() + "'");
  f << format_csv(log);
  if (!f) throw IoError("write failed for '" + path.string() + "'");
}

RunLog parse_run_csv(const std::string& text) {
  const csv::Table table = csv::parse(text, kRunHeader);
  RunLog log;
  for (const auto& r : table.rows) {
    const int j = static_cast<int>(r[1]);
    if (j != 1 && j != 2) throw FormatError("run CSV: joint must be 1 or 2");
    log.joints[static_cast<Joint>(j)].push_back({r[0], r[2], r[3], r[4], r[5], r[6], r[7]});
  }
  return log;
}

RunLog read_run_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  RunLog log = parse_run_csv(ss.str());
  log.scenario = path.stem().string();
  return log;
}

std::string summary_header() { return "scenario,joint,mse_e-3,sde_e-3,sat_frac,final_err"; }

std::string summary_lines(const std::string& scenario, const RunSummary& summary) {
  std::string out;
  char buf[256];
  for (const auto& [j, s] : summary.joints) {
    std::snprintf(buf, sizeof buf, "%s,%d,%.6f,%.6f,%.4f,%.6e\n", scenario.c_str(),
                  static_cast<int>(j), s.mse / 1e-3, s.sde / 1e-3, s.saturated_fraction,
                  s.final_error);
    out += buf;
  }
  return out;
}

}  // namespace softgpi
