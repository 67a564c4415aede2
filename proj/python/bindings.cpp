#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "niekf/cli.hpp"
#include "niekf/config.hpp"
#include "niekf/experiment.hpp"
#include "niekf/io.hpp"
#include "niekf/observability.hpp"

namespace py = pybind11;
using namespace niekf;

namespace {

ImuSample sample(const Vec3& omega, const Vec3& accel, Frame frame) {
  ImuSample s;
  s.omega = omega;
  s.accel = accel;
  s.frame = frame;
  return s;
}

RunConfig config_from(const std::string& text) {
  return text.empty() ? RunConfig{} : parse_run_config(text, "<python>");
}

py::dict rmse_dict(const RmseRecord& r) {
  py::dict d;
  for (std::size_t i = 0; i < r.values.size(); ++i) d[py::str(std::string(kRmseComponents[i]))] = r.values[i];
  return d;
}

}  // namespace

PYBIND11_MODULE(_niekf, m) {
  m.doc() = "Invariant EKF for legged robots on moving ground";

  m.def("exp_se23", [](const Tangent9& xi) { return exp_se23(xi).matrix(); }, py::arg("xi"));
  m.def("log_se23", [](const Mat5& x) { return log_se23(SE23::from_matrix(x)); }, py::arg("x"));
  m.def("adjoint", [](const Mat5& x) { return adjoint(SE23::from_matrix(x)); }, py::arg("x"));

  m.def("zmatrix",
        [](const Vec3& omega, const Vec3& accel, double dt) {
          return zmatrix(sample(omega, accel, Frame::RobotB), dt);
        },
        py::arg("omega"), py::arg("accel"), py::arg("dt"));
  m.def("matrix_A", &matrix_A, py::arg("omega_d"), py::arg("accel_d"));
  m.def("phi_blocks", &phi_blocks, py::arg("omega_d"), py::arg("accel_d"), py::arg("dt"));
  m.def("process_f",
        [](const Mat5& x, const Vec3& wb, const Vec3& ab, const Vec3& wd, const Vec3& ad) {
          return process_f(x, sample(wb, ab, Frame::RobotB), sample(wd, ad, Frame::GroundD));
        },
        py::arg("x"), py::arg("omega_b"), py::arg("accel_b"), py::arg("omega_d"), py::arg("accel_d"));

  m.def("propagate_mean",
        [](const Mat5& x, const Vec3& wb, const Vec3& ab, const Vec3& wd, const Vec3& ad, double dt) {
          return propagate_mean(SE23::from_matrix(x), sample(wb, ab, Frame::RobotB),
                                sample(wd, ad, Frame::GroundD), dt)
              .matrix();
        },
        py::arg("x"), py::arg("omega_b"), py::arg("accel_b"), py::arg("omega_d"), py::arg("accel_d"),
        py::arg("dt"));

  m.def("biped_leg_fk", [](const VecX& q) { return forward_kinematics(biped_leg_chain(), q); },
        py::arg("q"));
  m.def("biped_leg_jacobian", [](const VecX& q) { return leg_jacobian(biped_leg_chain(), q); },
        py::arg("q"));

  m.def("default_config", []() { return render_run_config(RunConfig{}); });

  m.def(
      "observability",
      [](const std::string& config, double t0, int k, bool stationary) {
        RunConfig c = config_from(config);
        if (stationary) c.scenario.ground = GroundMotionParams::stationary();
        const ObservabilityReport rep = scenario_observability(c.scenario, t0, k);
        py::dict d;
        d["rank"] = rep.rank;
        d["classification"] = to_string(rep.classification);
        d["singular_values"] = Eigen::VectorXd(rep.singular_values);
        d["null_space"] = rep.null_space;
        return d;
      },
      py::arg("config") = "", py::arg("t0") = 0.0, py::arg("k") = 10, py::arg("stationary") = false);

  m.def(
      "compare",
      [](const std::string& config, int trials, std::uint64_t seed) {
        const RunConfig c = config_from(config);
        const Dataset data = simulate(c.scenario);
        py::list out;
        for (const TrialRmse& t : compare_filters(data, c, seed, trials)) {
          py::dict d;
          d["trial"] = t.trial;
          d["proposed"] = rmse_dict(t.proposed);
          d["srs"] = rmse_dict(t.srs);
          out.append(d);
        }
        return out;
      },
      py::arg("config") = "", py::arg("trials") = 1, py::arg("seed") = 0);

  m.def(
      "cli",
      [](const std::vector<std::string>& args) {
        std::vector<std::string> full{"niekf"};
        full.insert(full.end(), args.begin(), args.end());
        std::ostringstream out, err;
        const int code = dispatch(full, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run a niekf subcommand; returns (exit_code, stdout, stderr).");
}
