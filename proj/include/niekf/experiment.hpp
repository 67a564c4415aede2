#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "niekf/config.hpp"
#include "niekf/filter.hpp"
#include "niekf/io.hpp"
#include "niekf/observability.hpp"
#include "niekf/report.hpp"

namespace niekf {

enum class FilterKind { Proposed, Srs };

std::string_view to_string(FilterKind kind);
/// Accepts "proposed" and "srs"; throws std::invalid_argument otherwise.
FilterKind parse_filter_kind(std::string_view name);

/// Simulated logs with truth rows as written to truth.csv.
struct Dataset {
  SensorLog sensors;
  std::vector<TruthRow> truth;
};

Dataset simulate(const Scenario& scenario);

/// Truth at t0 perturbed by the error drawn for (seed, trial).
SE23 sampled_initial_estimate(const SE23& truth0, const InitialErrorRanges& ranges,
                              std::uint64_t seed, std::uint64_t trial);

/// Sensor noise SDs per sample to the continuous-time densities the filters
/// integrate (sd * sqrt(period)); the contact-velocity SD is a per-update
/// value and is passed through.
NoiseParams per_sample_to_density(const NoiseParams& per_sample, double robot_period,
                                  double ground_period);

/// Median spacing of a stream's timestamps; throws std::invalid_argument
/// with fewer than two samples.
template <typename Sample>
double median_period(const std::vector<Sample>& samples);

/// Run either filter from `x0`. IMU noise in `config` is per sample and is
/// converted with the log's own sample periods. Both filters report the base
/// state relative to the ground; the baseline treats the ground as the world.
RunResult estimate(FilterKind kind, const SensorLog& log, const RunConfig& config,
                   const SE23& x0);

struct TrialRmse {
  std::uint64_t trial = 0;
  RmseRecord proposed;
  RmseRecord srs;
};

/// Both filters on the same logs for trials 0..n-1, results in trial order.
std::vector<TrialRmse> compare_filters(const Dataset& data, const RunConfig& config,
                                       std::uint64_t seed, int trials);

/// Local observability of the scenario's noise-free trajectory over `k`
/// robot-IMU steps starting at `t0`.
ObservabilityReport scenario_observability(const Scenario& scenario, double t0, int k);

}  // namespace niekf
