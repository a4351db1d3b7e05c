#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "softgpi/errors.hpp"
#include "softgpi/harness.hpp"

namespace softgpi {
namespace {

using nlohmann::json;

constexpr double kRest = 0.2;  // starting angle of the point-to-point moves

JointConfig quintic_joint(Joint j, double target, double duration = 10.0) {
  JointConfig c;
  c.joint = j;
  c.trajectory = QuinticSpec{kRest, target, duration};
  return c;
}

ScenarioConfig make(std::string name, std::string description, std::vector<JointConfig> joints,
                    double duration = 20.0) {
  ScenarioConfig s;
  s.name = std::move(name);
  s.description = std::move(description);
  s.joints = std::move(joints);
  s.duration = duration;
  return s;
}

Joint joint_from_int(int j) {
  if (j != 1 && j != 2) throw ConfigError("joint must be 1 or 2");
  return static_cast<Joint>(j);
}

template <class T>
T get_or(const json& obj, const char* key, T fallback) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : it->get<T>();
}

TrajectorySpec trajectory_from_json(const json& t, const std::filesystem::path& base_dir) {
  const std::string type = t.at("type").get<std::string>();
  if (type == "setpoint") return SetpointSpec{t.at("theta").get<double>()};
  if (type == "quintic") {
    return QuinticSpec{get_or(t, "theta0", kRest), t.at("thetaf").get<double>(),
                       get_or(t, "duration", 10.0)};
  }
  if (type == "harmonic") {
    return HarmonicSpec{t.at("amplitude").get<double>(), t.at("f_per_cs").get<double>(),
                        get_or(t, "h", 300.0)};
  }
  if (type == "taught") {
    std::filesystem::path p = t.at("path").get<std::string>();
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    return TaughtSpec{p, get_or(t, "smoothing_window", 3)};
  }
  throw ConfigError("unknown trajectory type '" + type + "'");
}

json trajectory_to_json(const TrajectorySpec& spec) {
  if (const auto* s = std::get_if<SetpointSpec>(&spec)) {
    return {{"type", "setpoint"}, {"theta", s->theta}};
  }
  if (const auto* q = std::get_if<QuinticSpec>(&spec)) {
    return {{"type", "quintic"}, {"theta0", q->theta0}, {"thetaf", q->thetaf},
            {"duration", q->duration}};
  }
  if (const auto* h = std::get_if<HarmonicSpec>(&spec)) {
    return {{"type", "harmonic"}, {"amplitude", h->amplitude}, {"f_per_cs", h->f_per_cs},
            {"h", h->h}};
  }
  const auto& t = std::get<TaughtSpec>(spec);
  return {{"type", "taught"}, {"path", t.path.string()}, {"smoothing_window", t.smoothing_window}};
}

}  // namespace

GpiDesign default_design(Joint j) {
  return j == Joint::kAbduction ? GpiDesign{0.9, 6.1} : GpiDesign{0.9, 10.25};
}

PlantCoefficients default_plant(Joint j) {
  const auto [g1, g2] = default_plants();
  return j == Joint::kAbduction ? g1 : g2;
}

void validate(const ScenarioConfig& c) {
  if (!(c.duration > 0.0) || !std::isfinite(c.duration)) {
    throw ConfigError("scenario '" + c.name + "': duration must be positive");
  }
  if (!(c.ts > 0.0) || !std::isfinite(c.ts)) {
    throw ConfigError("scenario '" + c.name + "': Ts must be positive");
  }
  if (!(c.steady_state_window_fraction > 0.0 && c.steady_state_window_fraction <= 1.0)) {
    throw ConfigError("scenario '" + c.name + "': window fraction must lie in (0, 1]");
  }
  if (c.joints.empty()) throw ConfigError("scenario '" + c.name + "': no joints");
  bool seen[2] = {false, false};
  for (const auto& j : c.joints) {
    const int i = joint_index(j.joint);
    if (seen[i]) throw ConfigError("scenario '" + c.name + "': joint listed twice");
    seen[i] = true;
    if (const auto* q = std::get_if<QuinticSpec>(&j.trajectory); q && !(q->duration > 0.0)) {
      throw ConfigError("scenario '" + c.name + "': quintic duration must be positive");
    }
  }
  if (!(c.sensor.noise_std >= 0.0) || !(c.sensor.quantization_step >= 0.0)) {
    throw ConfigError("scenario '" + c.name + "': sensor parameters must be non-negative");
  }
}

std::map<std::string, ScenarioConfig> builtin_scenarios(const std::filesystem::path& data_dir) {
  constexpr Joint J1 = Joint::kAbduction;
  constexpr Joint J2 = Joint::kFlexion;
  std::map<std::string, ScenarioConfig> out;
  auto add = [&](ScenarioConfig s) { out.emplace(s.name, std::move(s)); };

  add(make("q1", "abduction 0.2 -> 0.6981 rad", {quintic_joint(J1, 0.6981)}));
  add(make("q2", "abduction 0.2 -> 1.0472 rad, T = 15 s", {quintic_joint(J1, 1.0472, 15.0)}, 25.0));
  add(make("q3", "flexion 0.2 -> 0.3491 rad", {quintic_joint(J2, 0.3491)}));
  add(make("q4", "flexion 0.2 -> 0.5585 rad", {quintic_joint(J2, 0.5585)}));

  ScenarioConfig loaded = make("q4-loaded", "q4 with a constant load disturbance",
                               {quintic_joint(J2, 0.5585)});
  loaded.joints[0].disturbance = DisturbancePoly::constant(-0.02);
  add(std::move(loaded));

  const struct {
    const char* name;
    double a1, a2;
  } combined[] = {{"q5", 0.6981, 0.3491},
                  {"q6", 0.6981, 0.5585},
                  {"q7", 1.3963, 0.3491},
                  {"q8", 1.3963, 0.5585}};
  for (const auto& c : combined) {
    char desc[96];
    std::snprintf(desc, sizeof desc, "both joints -> (%.4f, %.4f) rad", c.a1, c.a2);
    add(make(c.name, desc, {quintic_joint(J1, c.a1), quintic_joint(J2, c.a2)}));
  }

  const struct {
    const char* name;
    double amplitude, f;
  } harmonic[] = {{"harmonic-a", 1.0, 1.6e-3}, {"harmonic-b", 1.0, 2.6e-3},
                  {"harmonic-c", 1.0, 3.6e-3}, {"harmonic-d", 1.0, 4.3e-3},
                  {"harmonic-e", 3.0, 1.3e-3}, {"harmonic-f", 3.0, 2.6e-3}};
  for (const auto& h : harmonic) {
    JointConfig jc;
    jc.joint = J1;
    jc.trajectory = HarmonicSpec{h.amplitude, h.f, 300.0};
    char desc[96];
    std::snprintf(desc, sizeof desc, "abduction harmonic A = %g, f = %g per cs", h.amplitude, h.f);
    add(make(h.name, desc, {jc}, 100.0));
  }

  JointConfig taught;
  taught.joint = J1;
  taught.trajectory = TaughtSpec{data_dir / "taught_sinusoid.csv", 3};
  add(make("teach-sinusoid", "replay of a recorded abduction sinusoid", {taught}, 5.0));
  return out;
}

ScenarioConfig scenario_from_json(const std::string& text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario JSON: ") + e.what());
  }
  try {
    ScenarioConfig s;
    s.name = get_or<std::string>(doc, "name", "scenario");
    s.description = get_or<std::string>(doc, "description", "");
    s.duration = get_or(doc, "duration", s.duration);
    s.ts = get_or(doc, "Ts", s.ts);
    s.seed = get_or<std::uint64_t>(doc, "seed", 0);
    s.steady_state_window_fraction =
        get_or(doc, "steady_state_window_fraction", s.steady_state_window_fraction);
    if (auto it = doc.find("sensor"); it != doc.end()) {
      s.sensor.noise_std = get_or(*it, "noise_std", 0.0);
      s.sensor.quantization_step = get_or(*it, "quantization_step", 0.0);
    }
    if (auto it = doc.find("controller"); it != doc.end()) {
      const std::string src = get_or<std::string>(*it, "reconstruction", "applied");
      if (src == "applied") {
        s.controller.source = ReconstructionSource::kApplied;
      } else if (src == "raw") {
        s.controller.source = ReconstructionSource::kRaw;
      } else {
        throw ConfigError("controller.reconstruction must be 'applied' or 'raw'");
      }
      s.controller.conditional_integration = get_or(*it, "conditional_integration", true);
    }
    for (const json& jj : doc.at("joints")) {
      JointConfig jc;
      jc.joint = joint_from_int(jj.at("joint").get<int>());
      jc.trajectory = trajectory_from_json(jj.at("trajectory"), base_dir);
      if (auto it = jj.find("plant"); it != jj.end()) {
        jc.plant = PlantCoefficients{it->at("gamma0").get<double>(), it->at("gamma1").get<double>(),
                                     it->at("gamma2").get<double>()};
      }
      if (auto it = jj.find("design"); it != jj.end()) {
        jc.design = GpiDesign{it->at("xi").get<double>(), it->at("omega_n").get<double>()};
      }
      if (auto it = jj.find("disturbance"); it != jj.end()) {
        jc.disturbance = DisturbancePoly(it->get<std::vector<double>>());
      }
      if (auto it = jj.find("initial_theta"); it != jj.end()) jc.initial_theta = it->get<double>();
      s.joints.push_back(std::move(jc));
    }
    validate(s);
    return s;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario JSON: ") + e.what());
  }
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open scenario '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return scenario_from_json(ss.str(), path.parent_path());
}

std::string scenario_to_json(const ScenarioConfig& s) {
  json doc;
  doc["name"] = s.name;
  doc["description"] = s.description;
  doc["duration"] = s.duration;
  doc["Ts"] = s.ts;
  doc["seed"] = s.seed;
  doc["steady_state_window_fraction"] = s.steady_state_window_fraction;
  doc["sensor"] = {{"noise_std", s.sensor.noise_std},
                   {"quantization_step", s.sensor.quantization_step}};
  doc["controller"] = {
      {"reconstruction", s.controller.source == ReconstructionSource::kApplied ? "applied" : "raw"},
      {"conditional_integration", s.controller.conditional_integration}};
  json joints = json::array();
  for (const auto& j : s.joints) {
    json jj;
    jj["joint"] = static_cast<int>(j.joint);
    jj["trajectory"] = trajectory_to_json(j.trajectory);
    if (j.plant) {
      jj["plant"] = {{"gamma0", j.plant->gamma0}, {"gamma1", j.plant->gamma1},
                     {"gamma2", j.plant->gamma2}};
    }
    if (j.design) jj["design"] = {{"xi", j.design->xi}, {"omega_n", j.design->omega_n}};
    if (!j.disturbance.coefficients().empty()) jj["disturbance"] = j.disturbance.coefficients();
    if (j.initial_theta) jj["initial_theta"] = *j.initial_theta;
    joints.push_back(std::move(jj));
  }
  doc["joints"] = std::move(joints);
  return doc.dump(2);
}

}  // namespace softgpi
