#include "niekf/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "niekf/baseline.hpp"

namespace niekf {

std::string_view to_string(FilterKind kind) {
  return kind == FilterKind::Proposed ? "proposed" : "srs";
}

FilterKind parse_filter_kind(std::string_view name) {
  if (name == "proposed") return FilterKind::Proposed;
  if (name == "srs") return FilterKind::Srs;
  throw std::invalid_argument("unknown filter '" + std::string(name) + "'");
}

Dataset simulate(const Scenario& scenario) {
  SimulationLogs logs = synthesize_sensors(scenario);
  Dataset data;
  data.sensors = std::move(logs.sensors);
  data.truth.reserve(logs.truth.size());
  for (const auto& rec : logs.truth) data.truth.push_back(truth_row(rec));
  return data;
}

SE23 sampled_initial_estimate(const SE23& truth0, const InitialErrorRanges& ranges,
                              std::uint64_t seed, std::uint64_t trial) {
  return apply_initial_error(truth0, sample_initial_error(seed, trial, ranges));
}

NoiseParams per_sample_to_density(const NoiseParams& per_sample, double robot_period,
                                  double ground_period) {
  if (!(robot_period > 0.0) || !(ground_period > 0.0)) {
    throw std::invalid_argument("sample periods must be positive");
  }
  NoiseParams n = per_sample;
  n.sd_omega_B *= std::sqrt(robot_period);
  n.sd_accel_B *= std::sqrt(robot_period);
  n.sd_omega_D *= std::sqrt(ground_period);
  n.sd_accel_D *= std::sqrt(ground_period);
  return n;
}

template <typename Sample>
double median_period(const std::vector<Sample>& samples) {
  if (samples.size() < 2) throw std::invalid_argument("stream needs at least two samples");
  std::vector<double> dt;
  dt.reserve(samples.size() - 1);
  for (std::size_t i = 1; i < samples.size(); ++i) dt.push_back(samples[i].t - samples[i - 1].t);
  const auto mid = dt.begin() + static_cast<std::ptrdiff_t>(dt.size() / 2);
  std::nth_element(dt.begin(), mid, dt.end());
  return *mid;
}

template double median_period(const std::vector<ImuSample>&);
template double median_period(const std::vector<JointState>&);

RunResult estimate(FilterKind kind, const SensorLog& log, const RunConfig& config,
                   const SE23& x0) {
  const double robot_period = median_period(log.robot_imu);
  if (kind == FilterKind::Proposed) {
    FilterConfig fc = config.filter;
    fc.noise = per_sample_to_density(config.filter.noise, robot_period,
                                     median_period(log.ground_imu));
    fc.initial_state = x0;
    return run(log, fc, config.scenario.chain);
  }
  SrsConfig sc = config.srs;
  sc.noise.sd_omega *= std::sqrt(robot_period);
  sc.noise.sd_accel *= std::sqrt(robot_period);
  sc.initial_state = x0;
  return srs_run(log, sc, config.scenario.chain);
}

std::vector<TrialRmse> compare_filters(const Dataset& data, const RunConfig& config,
                                       std::uint64_t seed, int trials) {
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  if (data.truth.empty()) throw std::invalid_argument("compare: truth log is empty");
  const std::vector<StateSample> truth = relative_states(data.truth);
  std::vector<TrialRmse> out;
  out.reserve(static_cast<std::size_t>(trials));
  for (int i = 0; i < trials; ++i) {
    TrialRmse r;
    r.trial = static_cast<std::uint64_t>(i);
    const SE23 x0 = sampled_initial_estimate(data.truth.front().relative, config.init_error, seed,
                                             r.trial);
    r.proposed = rmse_report(trace_states(estimate(FilterKind::Proposed, data.sensors, config, x0).trace),
                             truth, config.steady_state_start);
    r.srs = rmse_report(trace_states(estimate(FilterKind::Srs, data.sensors, config, x0).trace),
                        truth, config.steady_state_start);
    out.push_back(r);
  }
  return out;
}

ObservabilityReport scenario_observability(const Scenario& scenario, double t0, int k) {
  if (k < 1) throw std::invalid_argument("observability: k must be positive");
  const double dt = 1.0 / scenario.rig.robot_rate;
  std::vector<FilterState> states;
  std::vector<ImuSample> inputs;
  std::vector<JointState> joints;
  for (int j = 0; j < k; ++j) {
    const double t = t0 + j * dt;
    const GroundTruthRecord rec = ground_truth(t, scenario);
    FilterState s;
    s.X = rec.relative;
    s.t = t;
    states.push_back(s);
    inputs.push_back(ideal_imu(rec.ground, scenario.ground.gravity, t, Frame::GroundD));
    const RelativeKinematics rel = relative_motion(t, scenario);
    JointState q;
    q.t = t;
    q.q = rel.q;
    q.qdot = rel.qdot;
    joints.push_back(q);
  }
  return build_observability(states, inputs, joints, scenario.chain, k);
}

}  // namespace niekf
