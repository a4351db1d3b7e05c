#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "softgpi/gpi.hpp"
#include "softgpi/kinematics.hpp"
#include "softgpi/plant.hpp"
#include "softgpi/trajectory.hpp"

namespace softgpi {

/// Constant reference theta_d (regulation).
struct SetpointSpec {
  double theta = 0.0;
};

/// Quintic end-point interpolation with zero boundary rates.
struct QuinticSpec {
  double theta0 = 0.2;
  double thetaf = 0.2;
  double duration = 10.0;  ///< T [s]
};

/// Harmonic reference; frequency given per centisecond.
struct HarmonicSpec {
  double amplitude = 1.0;
  double f_per_cs = 1.6e-3;
  double h = 300.0;
};

/// Recorded trajectory file (`t,theta,theta_dot`).
struct TaughtSpec {
  std::filesystem::path path;
  int smoothing_window = 3;
};

using TrajectorySpec = std::variant<SetpointSpec, QuinticSpec, HarmonicSpec, TaughtSpec>;

struct JointConfig {
  Joint joint = Joint::kAbduction;
  TrajectorySpec trajectory = QuinticSpec{};
  std::optional<PlantCoefficients> plant;  ///< defaults to default_plants()
  std::optional<GpiDesign> design;         ///< defaults to default_design(joint)
  DisturbancePoly disturbance;
  std::optional<double> initial_theta;     ///< defaults to the projected theta_d(0)
};

struct ScenarioConfig {
  std::string name;
  std::string description;
  std::vector<JointConfig> joints;
  double duration = 20.0;                      ///< [s]
  double ts = kDefaultSamplingPeriod;          ///< [s]
  SensorModel sensor;                          ///< seed is taken from `seed`
  std::uint64_t seed = 0;
  double steady_state_window_fraction = 0.2;
  GpiOptions controller;
};

/// xi = 0.9 for both joints; omega_n = 6.1 (abduction) and 10.25 (flexion) rad/s.
GpiDesign default_design(Joint j);
PlantCoefficients default_plant(Joint j);

/// Throws ConfigError on duration/Ts/window/joint problems.
void validate(const ScenarioConfig& config);

/// Number of control ticks, ceil(duration / Ts).
std::size_t tick_count(double duration, double ts);

struct TickRecord {
  double t = 0.0;
  double theta_d = 0.0;
  double theta_true = 0.0;
  double theta_meas = 0.0;
  double u_raw = 0.0;
  double u_command = 0.0;
  double e = 0.0;
};

struct JointSummary {
  double mse = 0.0;                   ///< [rad^2]
  double sde = 0.0;                   ///< [rad]
  double saturated_fraction = 0.0;    ///< over the steady-state window
  double saturated_fraction_run = 0.0;
  double final_error = 0.0;           ///< e on the last tick [rad]
  std::size_t window_ticks = 0;
};

struct RunSummary {
  std::map<Joint, JointSummary> joints;
};

struct RunLog {
  std::string scenario;
  std::map<Joint, std::vector<TickRecord>> joints;
  RunSummary summary;
};

/// Simulates the closed loop tick by tick for every configured joint.
/// Throws ConfigError (invalid config) or FileError (missing taught file).
RunLog run_scenario(const ScenarioConfig& config);

/// MSE and SDE of e over the final `window_fraction` of ticks. Throws
/// DomainError on an empty log or a fraction outside (0, 1].
JointSummary steady_state_metrics(const std::vector<TickRecord>& ticks, double window_fraction);
RunSummary steady_state_metrics(const RunLog& log, double window_fraction);

/// Run CSV: header `t,joint,theta_d,theta_true,theta_meas,u_raw,u_command,e`.
void emit_csv(const RunLog& log, const std::filesystem::path& path);
std::string format_csv(const RunLog& log);
RunLog parse_run_csv(const std::string& text);
RunLog read_run_csv(const std::filesystem::path& path);

/// Summary report lines `scenario,joint,mse_e-3,sde_e-3,sat_frac,final_err`.
std::string summary_header();
std::string summary_lines(const std::string& scenario, const RunSummary& summary);

/// q1..q8, q4-loaded, harmonic-a..f and teach-sinusoid. `data_dir` locates
/// the bundled taught trajectory.
std::map<std::string, ScenarioConfig> builtin_scenarios(
    const std::filesystem::path& data_dir = "data");

/// JSON scenario documents; relative taught paths resolve against `base_dir`.
ScenarioConfig scenario_from_json(const std::string& text, const std::filesystem::path& base_dir = {});
ScenarioConfig load_scenario(const std::filesystem::path& path);
std::string scenario_to_json(const ScenarioConfig& config);

/// Reference sample for one joint of a scenario at time t, after ROM projection.
class ReferenceGenerator {
 public:
  ReferenceGenerator(const JointConfig& joint, double ts);
  TrajectorySample operator()(double t) const;

 private:
  Joint joint_;
  TrajectorySpec spec_;
  std::optional<QuinticCoeffs> quintic_;
  std::optional<HarmonicParams> harmonic_;
  std::vector<TrajectorySample> taught_;
};

}  // namespace softgpi
