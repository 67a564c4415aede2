#pragma once

#include <optional>
#include <string>

#include "niekf/baseline.hpp"
#include "niekf/filter.hpp"
#include "niekf/sim.hpp"

namespace niekf {

/// Everything a CLI command needs besides its flags. Loaded from an INI-style
/// file with sections [scenario], [ground], [rig], [chain], [pose], [filter],
/// [srs], [init_error] and [compare]; see configs/treadmill.cfg.
struct RunConfig {
  Scenario scenario = treadmill_scenario();
  FilterConfig filter;
  SrsConfig srs;
  InitialErrorRanges init_error;
  double steady_state_start = 5.0;
  int trials = 20;

  RunConfig();
  /// Throws std::invalid_argument on the first inconsistent field.
  void validate() const;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Keys absent from the file keep their defaults. Unknown sections or keys
/// and unparsable values throw ConfigError.
RunConfig parse_run_config(const std::string& text, const std::string& origin = "<config>");
RunConfig load_run_config(const std::string& path);

/// Full key set, reloadable by parse_run_config.
std::string render_run_config(const RunConfig& config);

/// --seed if given, else NIEKF_SEED if set, else `fallback`. Throws
/// ConfigError if NIEKF_SEED is not an unsigned integer.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, std::uint64_t fallback);

}  // namespace niekf
