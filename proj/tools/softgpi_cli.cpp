// softgpi: run closed-loop scenarios, identify plants, summarize logs.
#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "softgpi/errors.hpp"
#include "softgpi/harness.hpp"
#include "softgpi/sysid.hpp"

namespace fs = std::filesystem;
using namespace softgpi;

namespace {

struct Job {
  ScenarioConfig config;
  std::string label;
};

ScenarioConfig resolve(const std::string& name, const fs::path& data_dir) {
  if (fs::exists(name) && fs::is_regular_file(name)) return load_scenario(name);
  auto builtins = builtin_scenarios(data_dir);
  auto it = builtins.find(name);
  if (it == builtins.end()) throw ConfigError("unknown scenario '" + name + "' (try `list`)");
  return it->second;
}

int cmd_run(const std::vector<std::string>& names, const fs::path& out_dir,
            std::optional<std::uint64_t> seed, const std::string& noise, int repeat,
            std::uint64_t seed_base, unsigned jobs, const fs::path& data_dir) {
  std::vector<Job> queue;
  for (const auto& n : names) {
    ScenarioConfig base = resolve(n, data_dir);
    if (noise == "noisy") base.sensor = SensorModel::noisy();
    if (seed) base.seed = *seed;
    if (repeat <= 1) {
      queue.push_back({base, base.name});
      continue;
    }
    for (int r = 0; r < repeat; ++r) {
      ScenarioConfig c = base;
      c.seed = seed_base + static_cast<std::uint64_t>(r);
      queue.push_back({c, base.name + "_seed" + std::to_string(c.seed)});
    }
  }
  if (!out_dir.empty()) fs::create_directories(out_dir);

  std::vector<std::string> lines(queue.size());
  std::vector<std::string> errors(queue.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < queue.size(); i = next++) {
      try {
        const RunLog log = run_scenario(queue[i].config);
        if (!out_dir.empty()) emit_csv(log, out_dir / (queue[i].label + ".csv"));
        lines[i] = summary_lines(queue[i].label, log.summary);
      } catch (const Error& e) {
        errors[i] = queue[i].label + ": " + e.what();
      }
    }
  };
  const unsigned n_threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(queue.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  // Output in submission order regardless of completion order.
  std::cout << summary_header() << '\n';
  int status = 0;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    if (!errors[i].empty()) {
      std::cerr << "error: " << errors[i] << '\n';
      status = 1;
    } else {
      std::cout << lines[i];
    }
  }
  return status;
}

int cmd_list(const fs::path& data_dir) {
  for (const auto& [name, s] : builtin_scenarios(data_dir)) {
    std::printf("%-16s %6.1f s  %s\n", name.c_str(), s.duration, s.description.c_str());
  }
  return 0;
}

int cmd_sysid(const fs::path& path) {
  const FitResult r = fit_second_order(read_io_csv(path));
  std::printf("gamma0 %.6g\ngamma1 %.6g\ngamma2 %.6g\nfit %.2f %%\n", r.gammas.gamma0,
              r.gammas.gamma1, r.gammas.gamma2, r.fit_percent);
  return 0;
}

int cmd_metrics(const fs::path& path, double window) {
  const RunLog log = read_run_csv(path);
  std::cout << summary_header() << '\n' << summary_lines(log.scenario, steady_state_metrics(log, window));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GPI control of soft pneumatic shoulder actuators"};
  app.require_subcommand(1);

  fs::path data_dir = "data";
  app.add_option("--data-dir", data_dir, "directory holding bundled trajectory files");

  auto* run = app.add_subcommand("run", "simulate scenarios (JSON files or builtin names)");
  std::vector<std::string> names;
  fs::path out_dir;
  std::optional<std::uint64_t> seed;
  std::string noise = "nominal";
  int repeat = 1;
  std::uint64_t seed_base = 0;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  run->add_option("scenario", names)->required();
  run->add_option("--out", out_dir, "write one CSV per run into this directory");
  run->add_option("--seed", seed);
  run->add_option("--noise", noise)->check(CLI::IsMember({"nominal", "noisy"}));
  run->add_option("--repeat", repeat)->check(CLI::PositiveNumber);
  run->add_option("--seed-base", seed_base);
  run->add_option("--jobs", jobs)->check(CLI::PositiveNumber);

  app.add_subcommand("list", "list builtin scenarios");

  auto* sysid = app.add_subcommand("sysid", "fit gamma0/(s^2+gamma1 s+gamma2) to t,u,theta data");
  fs::path io_path;
  sysid->add_option("io_csv", io_path)->required();

  auto* metrics = app.add_subcommand("metrics", "steady-state metrics of a run CSV");
  fs::path log_path;
  double window = 0.2;
  metrics->add_option("log_csv", log_path)->required();
  metrics->add_option("--window", window, "steady-state window fraction");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(names, out_dir, seed, noise, repeat, seed_base, jobs, data_dir);
    if (app.got_subcommand("list")) return cmd_list(data_dir);
    if (*sysid) return cmd_sysid(io_path);
    if (*metrics) return cmd_metrics(log_path, window);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
