// SPDX-License-Identifier: Apache-2.0
//
// rasim: rotatable-antenna spectrum-sharing simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Python bindings for the rasim core.

#include "rasim/ao_driver.hpp"
#include "rasim/beamforming.hpp"
#include "rasim/errors.hpp"
#include "rasim/harness.hpp"
#include "rasim/pointing_opt.hpp"
#include "rasim/validation.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>

namespace py = pybind11;
using namespace rasim;

namespace
{
    py::dict row_dict(const ResultRow &r)
    {
        py::dict d;
        d["scheme"] = r.scheme;
        d["variable"] = r.variable;
        d["value"] = r.value;
        d["sinr_db"] = r.sinr_db;
        d["sinr_linear"] = r.sinr_linear;
        d["interference_dbm"] = r.interference_dbm;
        d["txpower_dbm"] = r.txpower_dbm;
        d["iterations"] = r.iterations;
        d["wall_ms"] = r.wall_ms;
        d["seed"] = r.seed;
        return d;
    }

    py::dict sweep_dict(const SweepResult &res)
    {
        py::list rows, failures;
        for (const auto &r : res.rows)
            rows.append(row_dict(r));
        for (const auto &f : res.failures)
            failures.append(py::dict(py::arg("scheme") = f.scheme, py::arg("variable") = f.variable,
                                     py::arg("value") = f.value, py::arg("message") = f.message));
        std::ostringstream csv;
        write_sweep_csv(csv, res.rows, false);
        py::dict d;
        d["rows"] = rows;
        d["failures"] = failures;
        d["csv"] = csv.str();
        return d;
    }

    RunConfig config_from(const py::object &cfg)
    {
        if (cfg.is_none())
            return parse_config("");
        if (py::isinstance<py::str>(cfg))
            return parse_config(cfg.cast<std::string>());
        return cfg.cast<RunConfig>();
    }
} // namespace

PYBIND11_MODULE(_rasim, m)
{
    m.doc() = "Rotatable-antenna spectrum-sharing simulator";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<InfeasibleStartError>(m, "InfeasibleStartError", PyExc_RuntimeError);
    py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

    py::class_<GainPattern>(m, "GainPattern")
        .def_static("directional", &GainPattern::directional, py::arg("p"), py::arg("aperture"),
                    py::arg("wavelength"))
        .def_static("isotropic", &GainPattern::isotropic, py::arg("aperture"), py::arg("wavelength"))
        .def_readwrite("p", &GainPattern::p)
        .def_readwrite("g0", &GainPattern::g0)
        .def_readwrite("aperture", &GainPattern::aperture)
        .def_readwrite("wavelength", &GainPattern::wavelength);

    py::class_<Scenario>(m, "Scenario")
        .def_static("reference", &Scenario::reference)
        .def_property_readonly("n", &Scenario::n)
        .def_property_readonly("m", &Scenario::m)
        .def_property_readonly("st_positions",
                               [](const Scenario &s) { return s.st.positions; })
        .def_readwrite("sr", &Scenario::sr)
        .def_readwrite("pr", &Scenario::pr)
        .def_readwrite("pattern", &Scenario::pattern)
        .def_readwrite("p_max", &Scenario::p_max)
        .def_readwrite("p0", &Scenario::p0)
        .def_readwrite("noise_power", &Scenario::noise_power)
        .def_readwrite("interference_limit", &Scenario::interference_limit)
        .def_readwrite("theta_max", &Scenario::theta_max)
        .def("validate", &Scenario::validate);

    py::enum_<BeamBranch>(m, "BeamBranch")
        .value("MaximumRatio", BeamBranch::MaximumRatio)
        .value("Constrained", BeamBranch::Constrained)
        .value("Parallel", BeamBranch::Parallel);

    py::enum_<Scheme>(m, "Scheme")
        .value("Rotatable", Scheme::Rotatable)
        .value("Fixed", Scheme::Fixed)
        .value("Random", Scheme::Random)
        .value("Isotropic", Scheme::Isotropic);

    py::class_<AlgoConfig>(m, "AlgoConfig")
        .def(py::init<>())
        .def_readwrite("epsilon", &AlgoConfig::epsilon)
        .def_readwrite("max_outer", &AlgoConfig::max_outer)
        .def_readwrite("seed", &AlgoConfig::seed)
        .def_readwrite("random_realizations", &AlgoConfig::random_realizations);

    py::class_<RunConfig>(m, "RunConfig")
        .def_property_readonly("algo", [](const RunConfig &c) { return c.algo; })
        .def_readonly("n_antennas", &RunConfig::n_antennas)
        .def_readonly("p_max_dbm", &RunConfig::p_max_dbm)
        .def_readonly("gamma_w", &RunConfig::gamma_w)
        .def_readonly("power_sweep_dbm", &RunConfig::power_sweep_dbm)
        .def_readonly("antenna_sweep", &RunConfig::antenna_sweep)
        .def("scenario", py::overload_cast<>(&RunConfig::scenario, py::const_))
        .def("canonical", [](const RunConfig &c) { return canonical_config(c); })
        .def("hash", [](const RunConfig &c) { return config_hash(c); });

    m.def("parse_config", [](const std::string &text) { return parse_config(text); }, py::arg("json_text"));
    m.def("load_config", &load_config, py::arg("path"));

    m.def("channel_vector",
          [](const Scenario &sc, const Eigen::Matrix3Xd &f, const Vec3 &target) {
              return ChannelVector(st_channel_vector(PointingMatrix(f), target, sc));
          },
          py::arg("scenario"), py::arg("f"), py::arg("target"),
          "ST channel toward `target` for boresight columns `f` (3 x N).");

    m.def("optimal_beamformer",
          [](const ChannelVector &h_ss, const ChannelVector &h_sp, double p_max, double gamma) {
              const Beamformer bf = optimal_beamformer(h_ss, h_sp, p_max, gamma);
              return py::make_tuple(BeamVector(bf.w), bf.branch);
          },
          py::arg("h_ss"), py::arg("h_sp"), py::arg("p_max"), py::arg("gamma"));
    m.def("interference_power", &interference_power, py::arg("w"), py::arg("h_sp"));
    m.def("lipschitz_bound", py::overload_cast<const Eigen::VectorXcd &, double, double>(&lipschitz_Lg),
          py::arg("c"), py::arg("p"), py::arg("kappa"));

    m.def("sca",
          [](const Scenario &sc, const BeamVector &w, const Eigen::Matrix3Xd &f0) {
              const ScaResult r = sca_pointing_opt(w, PointingMatrix(f0), sc);
              py::dict d;
              d["f"] = Eigen::Matrix3Xd(r.f.matrix());
              d["iterations"] = r.iterations;
              d["converged"] = r.converged;
              d["signal"] = signal_power(w, r.f, sc);
              d["leakage"] = leakage_power(w, r.f, sc);
              d["diagnostic"] = r.diagnostic;
              return d;
          },
          py::arg("scenario"), py::arg("w"), py::arg("f0"), "Pointing optimization for a fixed beamformer.");

    m.def("alternating_optimize",
          [](const Scenario &sc, const AlgoConfig &cfg) {
              const AoResult r = alternating_optimize(sc, cfg);
              py::list sinr;
              for (const auto &t : r.trace)
                  sinr.append(t.sinr);
              py::dict d;
              d["w"] = BeamVector(r.w);
              d["f"] = Eigen::Matrix3Xd(r.f.matrix());
              d["sinr_trace"] = sinr;
              d["iterations"] = r.iterations;
              d["converged"] = r.converged;
              d["diagnostic"] = r.diagnostic;
              return d;
          },
          py::arg("scenario"), py::arg("config") = AlgoConfig{});

    m.def("evaluate_scheme",
          [](const Scenario &sc, Scheme s, const AlgoConfig &cfg) {
              const SchemeResult r = evaluate_scheme(sc, s, cfg);
              py::dict d;
              d["sinr"] = r.sinr;
              d["interference"] = r.interference;
              d["tx_power"] = r.tx_power;
              d["iterations"] = r.iterations;
              return d;
          },
          py::arg("scenario"), py::arg("scheme"), py::arg("config") = AlgoConfig{});

    m.def("sweep_power", [](const py::object &cfg) { return sweep_dict(sweep_power(config_from(cfg))); },
          py::arg("config") = py::none(), "Config may be a RunConfig, JSON text or None for defaults.");
    m.def("sweep_antennas", [](const py::object &cfg) { return sweep_dict(sweep_antennas(config_from(cfg))); },
          py::arg("config") = py::none());
    m.def("gain_pattern",
          [](const py::object &cfg) {
              const PatternResult res = gain_pattern(config_from(cfg));
              std::ostringstream csv;
              write_pattern_csv(csv, res.rows);
              return csv.str();
          },
          py::arg("config") = py::none(), "Pattern CSV text.");

    m.def("validate",
          [](const py::object &cfg, std::uint64_t seed, const std::vector<std::string> &only) {
              ValidationOptions opt;
              opt.seed = seed;
              opt.only = only;
              const ValidationReport rep = run_validation(config_from(cfg), opt);
              return py::make_tuple(rep.passed(), rep.to_json());
          },
          py::arg("config") = py::none(), py::arg("seed") = 1, py::arg("only") = std::vector<std::string>{},
          "Runs the oracle checks; returns (passed, report JSON text).");

    m.attr("__version__") = std::string(version());
}
