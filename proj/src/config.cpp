#include "niekf/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "niekf/io.hpp"

namespace niekf {

namespace {

namespace pt = boost::property_tree;

constexpr double kDeg = std::numbers::pi / 180.0;

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      throw std::invalid_argument("'" + tok + "' is not a number");
    }
    out.push_back(v);
  }
  return out;
}

double parse_scalar(const std::string& text) {
  const auto v = parse_list(text);
  if (v.size() != 1) throw std::invalid_argument("expected one number, got '" + text + "'");
  return v[0];
}

Vec3 parse_vec3(const std::string& text) {
  const auto v = parse_list(text);
  if (v.size() != 3) throw std::invalid_argument("expected three numbers, got '" + text + "'");
  return {v[0], v[1], v[2]};
}

template <typename Derived>
std::string render_list(const Eigen::MatrixBase<Derived>& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) out += (i ? " " : "") + format_double(v(i));
  return out;
}

struct Field {
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

using FieldTable = std::vector<std::pair<std::string, std::vector<std::pair<std::string, Field>>>>;

template <typename Ref>
Field number(Ref ref, double scale = 1.0) {
  return {[ref, scale](RunConfig& c, const std::string& s) { ref(c) = parse_scalar(s) * scale; },
          [ref, scale](const RunConfig& c) {
            return format_double(ref(const_cast<RunConfig&>(c)) / scale);
          }};
}

template <typename Ref>
Field vec3(Ref ref) {
  return {[ref](RunConfig& c, const std::string& s) { ref(c) = parse_vec3(s); },
          [ref](const RunConfig& c) { return render_list(ref(const_cast<RunConfig&>(c))); }};
}

template <typename Ref>
Field interval(Ref ref, double scale = 1.0) {
  return {[ref, scale](RunConfig& c, const std::string& s) {
            const auto v = parse_list(s);
            if (v.size() != 2) throw std::invalid_argument("expected 'lo hi', got '" + s + "'");
            ref(c) = {v[0] * scale, v[1] * scale};
          },
          [ref, scale](const RunConfig& c) {
            const Interval& i = ref(const_cast<RunConfig&>(c));
            return format_double(i.lo / scale) + " " + format_double(i.hi / scale);
          }};
}

template <typename Ref>
Field diag9(Ref ref) {
  return {[ref](RunConfig& c, const std::string& s) {
            const auto v = parse_list(s);
            if (v.size() != 9) throw std::invalid_argument("expected nine numbers");
            ref(c) = Eigen::Map<const Tangent9>(v.data());
          },
          [ref](const RunConfig& c) { return render_list(ref(const_cast<RunConfig&>(c))); }};
}

#define NIEKF_REF(expr) [](RunConfig & c) -> auto& { return expr; }

FieldTable fields() {
  return {
      {"scenario", {{"duration", number(NIEKF_REF(c.scenario.duration))}}},
      {"ground",
       {{"pitch_amplitude_deg", number(NIEKF_REF(c.scenario.ground.pitch_amplitude), kDeg)},
        {"pitch_frequency", number(NIEKF_REF(c.scenario.ground.pitch_frequency))},
        {"sway_amplitude", number(NIEKF_REF(c.scenario.ground.sway_amplitude))},
        {"sway_frequency", number(NIEKF_REF(c.scenario.ground.sway_frequency))},
        {"spin_rate", number(NIEKF_REF(c.scenario.ground.spin_rate))},
        {"pitch_axis", vec3(NIEKF_REF(c.scenario.ground.pitch_axis))},
        {"sway_axis", vec3(NIEKF_REF(c.scenario.ground.sway_axis))},
        {"gravity", vec3(NIEKF_REF(c.scenario.ground.gravity))}}},
      {"rig",
       {{"robot_rate", number(NIEKF_REF(c.scenario.rig.robot_rate))},
        {"ground_rate", number(NIEKF_REF(c.scenario.rig.ground_rate))},
        {"encoder_rate", number(NIEKF_REF(c.scenario.rig.encoder_rate))},
        {"sd_omega_B", number(NIEKF_REF(c.scenario.rig.noise.sd_omega_B))},
        {"sd_accel_B", number(NIEKF_REF(c.scenario.rig.noise.sd_accel_B))},
        {"sd_omega_D", number(NIEKF_REF(c.scenario.rig.noise.sd_omega_D))},
        {"sd_accel_D", number(NIEKF_REF(c.scenario.rig.noise.sd_accel_D))},
        {"sd_q", number(NIEKF_REF(c.scenario.rig.sd_q))},
        {"sd_qdot", number(NIEKF_REF(c.scenario.rig.sd_qdot))},
        {"seed", {[](RunConfig& c, const std::string& s) {
                    std::uint64_t v = 0;
                    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
                    if (ec != std::errc() || ptr != s.data() + s.size()) {
                      throw std::invalid_argument("seed must be an unsigned integer");
                    }
                    c.scenario.rig.seed = v;
                  },
                  [](const RunConfig& c) { return std::to_string(c.scenario.rig.seed); }}}}},
      {"pose",
       {{"position", vec3(NIEKF_REF(c.scenario.pose.p))}}},
      {"filter",
       {{"sd_omega_B", number(NIEKF_REF(c.filter.noise.sd_omega_B))},
        {"sd_accel_B", number(NIEKF_REF(c.filter.noise.sd_accel_B))},
        {"sd_omega_D", number(NIEKF_REF(c.filter.noise.sd_omega_D))},
        {"sd_accel_D", number(NIEKF_REF(c.filter.noise.sd_accel_D))},
        {"sd_contact_vel", number(NIEKF_REF(c.filter.noise.sd_contact_vel))},
        {"initial_cov_diag", diag9(NIEKF_REF(c.filter.initial_cov_diag))},
        {"reorthonormalize_threshold", number(NIEKF_REF(c.filter.reorthonormalize_threshold))},
        {"max_condition", number(NIEKF_REF(c.filter.max_condition))}}},
      {"srs",
       {{"sd_omega", number(NIEKF_REF(c.srs.noise.sd_omega))},
        {"sd_accel", number(NIEKF_REF(c.srs.noise.sd_accel))},
        {"sd_encoder", number(NIEKF_REF(c.srs.noise.sd_encoder))},
        {"sd_contact", number(NIEKF_REF(c.srs.noise.sd_contact))},
        {"initial_cov_diag", diag9(NIEKF_REF(c.srs.initial_cov_diag))}}},
      {"init_error",
       {{"rot_deg", interval(NIEKF_REF(c.init_error.rot), kDeg)},
        {"vel", interval(NIEKF_REF(c.init_error.vel))},
        {"pos", interval(NIEKF_REF(c.init_error.pos))}}},
      {"compare",
       {{"steady_state_start", number(NIEKF_REF(c.steady_state_start))},
        {"trials", {[](RunConfig& c, const std::string& s) {
                      const double v = parse_scalar(s);
                      if (v != static_cast<double>(static_cast<int>(v))) {
                        throw std::invalid_argument("trials must be an integer");
                      }
                      c.trials = static_cast<int>(v);
                    },
                    [](const RunConfig& c) { return std::to_string(c.trials); }}}}},
  };
}

#undef NIEKF_REF

// Keys that need custom handling: pose rotation (stored as a rotation
// vector), joint angles, and the variable-length chain.
void apply_pose_rotation(RunConfig& c, const std::string& s) {
  c.scenario.pose.R = exp_so3(parse_vec3(s));
}

void apply_chain(RunConfig& c, const pt::ptree& section, const std::string& origin) {
  std::set<std::string> seen;
  auto get = [&](const std::string& key) -> std::optional<std::string> {
    seen.insert(key);
    if (auto v = section.get_optional<std::string>(pt::ptree::path_type(key, '\0'))) return *v;
    return std::nullopt;
  };
  if (auto n = get("joints")) {
    const double count = parse_scalar(*n);
    if (count < 1 || count != static_cast<double>(static_cast<int>(count))) {
      throw ConfigError(origin + ": [chain] joints must be a positive integer");
    }
    c.scenario.chain.joints.assign(static_cast<std::size_t>(count), Joint{});
    for (int i = 1; i <= static_cast<int>(count); ++i) {
      const std::string prefix = "joint" + std::to_string(i);
      const auto axis = get(prefix + "_axis");
      const auto offset = get(prefix + "_offset");
      if (!axis || !offset) {
        throw ConfigError(origin + ": [chain] missing " + prefix + "_axis or " + prefix +
                          "_offset");
      }
      c.scenario.chain.joints[static_cast<std::size_t>(i - 1)] = {parse_vec3(*axis),
                                                                  parse_vec3(*offset)};
    }
  }
  if (auto f = get("foot_offset")) c.scenario.chain.foot_offset = parse_vec3(*f);
  for (const auto& kv : section) {
    if (!seen.count(kv.first)) throw ConfigError(origin + ": unknown key [chain] " + kv.first);
  }
}

}  // namespace

RunConfig::RunConfig() {
  const Tangent9 cov = (Tangent9() << Vec3::Constant(std::pow(23.0 * kDeg, 2)),
                        Vec3::Constant(1.0), Vec3::Constant(9.0))
                           .finished();
  filter.initial_cov_diag = cov;
  srs.initial_cov_diag = cov;
}

void RunConfig::validate() const {
  scenario.validate();
  filter.validate();
  init_error.validate();
  if (!(steady_state_start >= 0.0) || !(steady_state_start < scenario.duration)) {
    throw std::invalid_argument("steady_state_start must lie in [0, duration)");
  }
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  if ((srs.initial_cov_diag.array() <= 0.0).any()) {
    throw std::invalid_argument("srs initial covariance diagonal must be positive");
  }
}

RunConfig parse_run_config(const std::string& text, const std::string& origin) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(origin + ":" + std::to_string(e.line()) + ": " + e.message());
  }

  RunConfig config;
  const FieldTable table = fields();
  for (const auto& [section, values] : tree) {
    if (!values.data().empty()) throw ConfigError(origin + ": key '" + section + "' outside a section");
    try {
      if (section == "chain") {
        apply_chain(config, values, origin);
        continue;
      }
      const auto it = std::find_if(table.begin(), table.end(),
                                   [&](const auto& s) { return s.first == section; });
      if (it == table.end()) throw ConfigError(origin + ": unknown section [" + section + "]");
      for (const auto& [key, value] : values) {
        const std::string& raw = value.data();
        if (section == "pose" && key == "rotation") {
          apply_pose_rotation(config, raw);
          continue;
        }
        if (section == "pose" && key == "q") {
          const auto q = parse_list(raw);
          config.scenario.pose.q = Eigen::Map<const VecX>(q.data(), static_cast<Eigen::Index>(q.size()));
          continue;
        }
        const auto f = std::find_if(it->second.begin(), it->second.end(),
                                    [&](const auto& kv) { return kv.first == key; });
        if (f == it->second.end()) {
          throw ConfigError(origin + ": unknown key [" + section + "] " + key);
        }
        f->second.set(config, raw);
      }
    } catch (const std::invalid_argument& e) {
      throw ConfigError(origin + ": [" + section + "] " + e.what());
    }
  }
  config.srs.gravity = config.scenario.ground.gravity;
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return config;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config(text.str(), path);
}

std::string render_run_config(const RunConfig& config) {
  std::ostringstream out;
  for (const auto& [section, values] : fields()) {
    out << "[" << section << "]\n";
    for (const auto& [key, field] : values) {
      out << key << " = " << field.get(config) << "\n";
    }
    if (section == "pose") {
      out << "rotation = " << render_list(log_so3(config.scenario.pose.R)) << "\n";
      out << "q = " << render_list(config.scenario.pose.q) << "\n";
    }
    out << "\n";
  }
  const KinematicChain& chain = config.scenario.chain;
  out << "[chain]\njoints = " << chain.size() << "\n";
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const std::string prefix = "joint" + std::to_string(i + 1);
    out << prefix << "_axis = " << render_list(chain.joints[i].axis) << "\n";
    out << prefix << "_offset = " << render_list(chain.joints[i].offset) << "\n";
  }
  out << "foot_offset = " << render_list(chain.foot_offset) << "\n";
  return out.str();
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, std::uint64_t fallback) {
  if (flag) return *flag;
  const char* env = std::getenv("NIEKF_SEED");
  if (env == nullptr || *env == '\0') return fallback;
  std::uint64_t seed = 0;
  const char* end = env + std::char_traits<char>::length(env);
  const auto [ptr, ec] = std::from_chars(env, end, seed);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(std::string("NIEKF_SEED is not an unsigned integer: ") + env);
  }
  return seed;
}

}  // namespace niekf
