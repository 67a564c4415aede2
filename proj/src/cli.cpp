#include "niekf/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "niekf/config.hpp"
#include "niekf/experiment.hpp"
#include "niekf/io.hpp"
#include "niekf/observability.hpp"

namespace niekf {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string logs;
  std::string filter;
  std::string init_error = "none";
  std::uint64_t trial = 0;
  int trials = 0;
  int k = 10;
  double t0 = 0.0;
  bool stationary = false;
  std::string trace;
  std::string truth;
  std::optional<double> start;
};

RunConfig config_or_default(const std::string& path) {
  return path.empty() ? RunConfig() : load_run_config(path);
}

std::string logs_config(const Options& o) {
  if (!o.config.empty()) return o.config;
  const fs::path p = fs::path(o.logs) / "scenario.cfg";
  return fs::exists(p) ? p.string() : std::string();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

ordered_json rmse_json(const RmseRecord& r) {
  ordered_json j;
  for (std::size_t i = 0; i < kRmseComponents.size(); ++i) {
    j[std::string(kRmseComponents[i])] = r.values[i];
  }
  return j;
}

std::string fixed(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

const char* unit_of(std::size_t component) {
  if (component < 3) return "m/s";
  if (component < 6) return "deg";
  return "m";
}

void print_rmse_table(std::ostream& out, const std::vector<std::string>& labels,
                      const std::vector<RmseRecord>& records) {
  out << "component   unit";
  for (const auto& l : labels) out << "  " << std::string(10 - std::min<std::size_t>(10, l.size()), ' ') << l;
  out << "\n";
  for (std::size_t i = 0; i < kRmseComponents.size(); ++i) {
    std::string name(kRmseComponents[i]);
    out << name << std::string(12 - name.size(), ' ') << unit_of(i)
        << std::string(4 - std::string(unit_of(i)).size(), ' ');
    for (const auto& r : records) {
      const std::string v = fixed(r.values[i]);
      out << "  " << std::string(10 - std::min<std::size_t>(10, v.size()), ' ') << v;
    }
    out << "\n";
  }
}

int cmd_simulate(const Options& o, std::ostream& out) {
  RunConfig config = config_or_default(o.config);
  config.scenario.rig.seed = resolve_seed(o.seed, config.scenario.rig.seed);
  const Dataset data = simulate(config.scenario);
  const fs::path dir(o.out);
  fs::create_directories(dir);
  write_sensor_log(dir.string(), data.sensors);
  write_truth_csv((dir / "truth.csv").string(), data.truth);
  write_text(dir / "scenario.cfg", render_run_config(config));

  ordered_json manifest;
  manifest["command"] = "simulate";
  manifest["seed"] = config.scenario.rig.seed;
  manifest["duration"] = config.scenario.duration;
  manifest["config"] = "scenario.cfg";
  manifest["files"] = {
      {"imu_robot.csv", {{"rows", data.sensors.robot_imu.size()}, {"rate", config.scenario.rig.robot_rate}}},
      {"imu_ground.csv", {{"rows", data.sensors.ground_imu.size()}, {"rate", config.scenario.rig.ground_rate}}},
      {"encoders.csv", {{"rows", data.sensors.encoders.size()}, {"rate", config.scenario.rig.encoder_rate}}},
      {"truth.csv", {{"rows", data.truth.size()}, {"rate", config.scenario.rig.robot_rate}}}};
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  out << "wrote " << data.sensors.robot_imu.size() << " robot IMU, "
      << data.sensors.ground_imu.size() << " ground IMU, " << data.sensors.encoders.size()
      << " encoder samples to " << dir.string() << "\n";
  return kExitOk;
}

int cmd_estimate(const Options& o, std::ostream& out) {
  const RunConfig config = config_or_default(logs_config(o));
  const FilterKind kind = parse_filter_kind(o.filter);
  const SensorLog log = read_sensor_log(o.logs);
  const fs::path truth_path = fs::path(o.logs) / "truth.csv";
  std::vector<TruthRow> truth;
  if (fs::exists(truth_path)) truth = read_truth_csv(truth_path.string());

  SE23 x0 = config.filter.initial_state;
  ordered_json summary;
  summary["filter"] = std::string(to_string(kind));
  if (!truth.empty()) x0 = truth.front().relative;
  if (o.init_error == "sample") {
    if (truth.empty()) throw std::runtime_error("--init-error sample needs truth.csv in --logs");
    const std::uint64_t seed = resolve_seed(o.seed, config.scenario.rig.seed);
    const InitialError e = sample_initial_error(seed, o.trial, config.init_error);
    x0 = apply_initial_error(truth.front().relative, e);
    summary["seed"] = seed;
    summary["trial"] = o.trial;
    summary["initial_error"] = {{"rpy_deg", {e.rpy.x() * kRadToDeg, e.rpy.y() * kRadToDeg, e.rpy.z() * kRadToDeg}},
                                {"dv", {e.dv.x(), e.dv.y(), e.dv.z()}},
                                {"dp", {e.dp.x(), e.dp.y(), e.dp.z()}}};
  }

  const RunResult result = estimate(kind, log, config, x0);
  const fs::path dir(o.out.empty() ? o.logs : o.out);
  fs::create_directories(dir);
  const std::string name = std::string(to_string(kind));
  write_trace_csv((dir / ("trace_" + name + ".csv")).string(), result.trace);
  summary["samples"] = result.trace.size();
  summary["skipped_updates"] = result.skipped_updates;
  out << name << ": " << result.trace.size() << " steps, " << result.skipped_updates
      << " skipped updates\n";
  if (!truth.empty()) {
    const double start = o.start.value_or(config.steady_state_start);
    const RmseRecord r = rmse_report(trace_states(result.trace), relative_states(truth), start);
    summary["steady_state_start"] = start;
    summary["rmse"] = rmse_json(r);
    print_rmse_table(out, {name}, {r});
  }
  write_text(dir / ("summary_" + name + ".json"), summary.dump(2) + "\n");
  return kExitOk;
}

int cmd_compare(const Options& o, std::ostream& out) {
  RunConfig config = config_or_default(logs_config(o));
  if (o.start) config.steady_state_start = *o.start;
  Dataset data;
  data.sensors = read_sensor_log(o.logs);
  data.truth = read_truth_csv((fs::path(o.logs) / "truth.csv").string());
  const std::uint64_t seed = resolve_seed(o.seed, config.scenario.rig.seed);
  const int trials = o.trials > 0 ? o.trials : config.trials;
  const std::vector<TrialRmse> results = compare_filters(data, config, seed, trials);

  const fs::path dir(o.out.empty() ? o.logs : o.out);
  fs::create_directories(dir);
  std::string rows = "trial,filter";
  for (const auto c : kRmseComponents) rows += "," + std::string(c);
  rows += "\n";
  RmseRecord mean_p, mean_s;
  std::size_t wins = 0;
  for (const auto& r : results) {
    for (const auto* rec : {&r.proposed, &r.srs}) {
      rows += std::to_string(r.trial) + (rec == &r.proposed ? ",proposed" : ",srs");
      for (double v : rec->values) rows += "," + format_double(v);
      rows += "\n";
    }
    for (std::size_t i = 0; i < 9; ++i) {
      mean_p.values[i] += r.proposed.values[i] / trials;
      mean_s.values[i] += r.srs.values[i] / trials;
    }
    bool better = r.proposed.values[5] < r.srs.values[5];
    for (std::size_t i = 6; i < 9; ++i) better = better && r.proposed.values[i] < r.srs.values[i];
    wins += better ? 1 : 0;
  }
  write_text(dir / "compare_trials.csv", rows);
  std::string summary = "component,proposed,srs\n";
  for (std::size_t i = 0; i < 9; ++i) {
    summary += std::string(kRmseComponents[i]) + "," + format_double(mean_p.values[i]) + "," +
               format_double(mean_s.values[i]) + "\n";
  }
  write_text(dir / "compare_summary.csv", summary);

  out << "mean steady-state RMSE over " << trials << " trials (t >= "
      << fixed(config.steady_state_start, 2) << " s, seed " << seed << ")\n";
  print_rmse_table(out, {"proposed", "srs"}, {mean_p, mean_s});
  out << "proposed below srs on yaw and all positions in " << wins << "/" << trials
      << " trials\n";
  return kExitOk;
}

int cmd_observability(const Options& o, std::ostream& out) {
  RunConfig config = config_or_default(o.config);
  if (o.stationary) config.scenario.ground = GroundMotionParams::stationary();
  const ObservabilityReport rep = scenario_observability(config.scenario, o.t0, o.k);
  out << "steps: " << o.k << "\n";
  out << "rank: " << rep.rank << "\n";
  out << "classification: " << to_string(rep.classification) << "\n";
  out << "singular_values:";
  for (Eigen::Index i = 0; i < rep.singular_values.size(); ++i) {
    out << " " << format_double(rep.singular_values[i]);
  }
  out << "\nnull_space:\n";
  for (const auto& v : rep.null_space) {
    out << " ";
    for (Eigen::Index i = 0; i < 9; ++i) out << " " << fixed(std::abs(v[i]) < 5e-13 ? 0.0 : v[i], 12);
    out << "\n";
  }
  return kExitOk;
}

int cmd_rmse(const Options& o, std::ostream& out) {
  const auto trace = read_trace_csv(o.trace);
  const auto truth = read_truth_csv(o.truth);
  const RmseRecord r =
      rmse_report(trace_states(trace), relative_states(truth), o.start.value_or(5.0));
  print_rmse_table(out, {"rmse"}, {r});
  return kExitOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Invariant EKF for legged robots on moving ground", "niekf"};
  app.require_subcommand(1);
  Options o;

  auto* sim = app.add_subcommand("simulate", "Synthesize sensor logs and ground truth");
  sim->add_option("--config", o.config, "Scenario config file")->check(CLI::ExistingFile);
  sim->add_option("--seed", o.seed, "Noise seed (default: NIEKF_SEED, then the config)");
  sim->add_option("--out", o.out, "Output directory")->required();

  auto* est = app.add_subcommand("estimate", "Run a filter over a log directory");
  est->add_option("--filter", o.filter, "Filter")->required()->check(CLI::IsMember({"proposed", "srs"}));
  est->add_option("--logs", o.logs, "Log directory")->required()->check(CLI::ExistingDirectory);
  est->add_option("--config", o.config, "Config (default: <logs>/scenario.cfg)")->check(CLI::ExistingFile);
  est->add_option("--init-error", o.init_error, "Initial error")->check(CLI::IsMember({"sample", "none"}));
  est->add_option("--seed", o.seed, "Initial-error seed");
  est->add_option("--trial", o.trial, "Initial-error trial index");
  est->add_option("--start", o.start, "Steady-state start for the RMSE summary (s)");
  est->add_option("--out", o.out, "Output directory (default: --logs)");

  auto* cmp = app.add_subcommand("compare", "RMSE of both filters over sampled initial errors");
  cmp->add_option("--logs", o.logs, "Log directory")->required()->check(CLI::ExistingDirectory);
  cmp->add_option("--config", o.config, "Config (default: <logs>/scenario.cfg)")->check(CLI::ExistingFile);
  cmp->add_option("--trials", o.trials, "Number of trials")->check(CLI::PositiveNumber);
  cmp->add_option("--seed", o.seed, "Initial-error seed");
  cmp->add_option("--start", o.start, "Steady-state start (s)");
  cmp->add_option("--out", o.out, "Output directory (default: --logs)");

  auto* obs = app.add_subcommand("observability", "Local observability of the scenario");
  obs->add_option("--config", o.config, "Scenario config file")->check(CLI::ExistingFile);
  obs->add_option("--k", o.k, "Number of steps")->check(CLI::PositiveNumber);
  obs->add_option("--t0", o.t0, "Start time (s)");
  obs->add_flag("--stationary", o.stationary, "Hold the ground still");

  auto* rm = app.add_subcommand("rmse", "RMSE of a trace against truth");
  rm->add_option("--trace", o.trace, "Trace CSV")->required()->check(CLI::ExistingFile);
  rm->add_option("--truth", o.truth, "Truth CSV")->required()->check(CLI::ExistingFile);
  rm->add_option("--start", o.start, "Steady-state start (s), default 5");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (sim->parsed()) return cmd_simulate(o, out);
    if (est->parsed()) return cmd_estimate(o, out);
    if (cmp->parsed()) return cmd_compare(o, out);
    if (obs->parsed()) return cmd_observability(o, out);
    return cmd_rmse(o, out);
  } catch (const CsvError& e) {
    err << "niekf: parse error: " << e.what() << "\n";
    return kExitCsv;
  } catch (const std::exception& e) {
    err << "niekf: " << e.what() << "\n";
    return kExitFailure;
  }
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return dispatch(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace niekf
