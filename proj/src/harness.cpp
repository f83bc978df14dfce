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

#include "rasim/harness.hpp"

#include "rasim/errors.hpp"

#include "json.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#ifndef RASIM_VERSION
#define RASIM_VERSION "0.0.0"
#endif

namespace rasim
{
    namespace
    {
        using nlohmann::json;
        constexpr double kDeg = std::numbers::pi / 180.0;

        const std::set<std::string> &known_keys()
        {
            static const std::set<std::string> keys{
                "n_antennas",     "m_antennas",       "wavelength_m",    "spacing_m",
                "aperture_m2",    "sr_angle_deg",     "sr_distance_m",   "pr_position_m",
                "pt_position_m",  "p_max_dbm",        "p0_dbm",          "noise_dbm",
                "gamma_dbm",      "gamma_w",          "directivity_p",   "theta_max_deg",
                "schemes",        "seed",             "power_sweep_dbm", "antenna_sweep",
                "pattern_step_deg", "probe_distance_m", "epsilon",       "max_outer_iterations",
                "kappa",          "delta",            "sca_max_iterations", "sca_rel_tol",
                "curvature",      "random_realizations", "output_dir",     "upa_long_axis",
            };
            return keys;
        }

        [[noreturn]] void fail(const std::string &msg) { throw ConfigError("config: " + msg); }

        double get_number(const json &j, const char *key)
        {
            const json &v = j.at(key);
            if (!v.is_number())
                fail(std::string(key) + " must be a number");
            const double d = v.get<double>();
            if (!std::isfinite(d))
                fail(std::string(key) + " must be finite");
            return d;
        }

        int get_int(const json &j, const char *key)
        {
            const json &v = j.at(key);
            if (!v.is_number_integer())
                fail(std::string(key) + " must be an integer");
            const auto i = v.get<long long>();
            if (i < -1000000000LL || i > 1000000000LL)
                fail(std::string(key) + " is out of range");
            return static_cast<int>(i);
        }

        Vec3 get_vec3(const json &j, const char *key)
        {
            const json &v = j.at(key);
            if (!v.is_array() || v.size() != 3)
                fail(std::string(key) + " must be a 3-element array [x, y, z]");
            Vec3 out;
            for (int k = 0; k < 3; ++k)
            {
                if (!v[k].is_number())
                    fail(std::string(key) + " entries must be numbers");
                out(k) = v[k].get<double>();
            }
            return out;
        }

        template <class Fn>
        void if_present(const json &j, const char *key, Fn &&fn)
        {
            if (j.contains(key))
                fn();
        }

        double elapsed_ms(std::chrono::steady_clock::time_point t0)
        {
            return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        }

        json to_json(const RunConfig &c)
        {
            json j;
            j["n_antennas"] = c.n_antennas;
            j["m_antennas"] = c.m_antennas;
            j["upa_long_axis"] = std::string(1, c.upa_long_axis);
            j["wavelength_m"] = c.wavelength_m;
            j["spacing_m"] = c.spacing_m > 0.0 ? c.spacing_m : c.wavelength_m / 2.0;
            j["aperture_m2"] = c.aperture_m2 > 0.0 ? c.aperture_m2 : c.wavelength_m * c.wavelength_m / 4.0;
            j["sr_angle_deg"] = c.sr_angle_deg;
            j["sr_distance_m"] = c.sr_distance_m;
            j["pr_position_m"] = {c.pr_position_m.x(), c.pr_position_m.y(), c.pr_position_m.z()};
            j["pt_position_m"] = {c.pt_position_m.x(), c.pt_position_m.y(), c.pt_position_m.z()};
            j["p_max_dbm"] = c.p_max_dbm;
            j["p0_dbm"] = c.p0_dbm;
            j["noise_dbm"] = c.noise_dbm;
            j["gamma_w"] = c.gamma_w;
            j["directivity_p"] = c.directivity_p;
            j["theta_max_deg"] = c.theta_max_deg;
            json schemes = json::array();
            for (Scheme s : c.schemes)
                schemes.push_back(std::string(scheme_name(s)));
            j["schemes"] = schemes;
            j["seed"] = c.algo.seed;
            j["power_sweep_dbm"] = c.power_sweep_dbm;
            j["antenna_sweep"] = c.antenna_sweep;
            j["pattern_step_deg"] = c.pattern_step_deg;
            j["probe_distance_m"] = c.probe_distance_m;
            j["epsilon"] = c.algo.epsilon;
            j["max_outer_iterations"] = c.algo.max_outer;
            j["kappa"] = c.algo.sca.kappa;
            j["delta"] = c.algo.sca.delta;
            j["sca_max_iterations"] = c.algo.sca.max_iterations;
            j["sca_rel_tol"] = c.algo.sca.rel_tol;
            j["curvature"] = c.algo.sca.curvature == CurvaturePolicy::Adaptive ? "adaptive" : "global";
            j["random_realizations"] = c.algo.random_realizations;
            j["output_dir"] = c.output_dir;
            return j;
        }

        ResultRow make_row(const SchemeResult &r, const RunConfig &cfg, std::string_view variable, double value,
                           double wall_ms)
        {
            ResultRow row;
            row.scheme = std::string(scheme_name(r.scheme));
            row.variable = std::string(variable);
            row.value = value;
            row.sinr_linear = r.sinr;
            row.sinr_db = to_db(r.sinr);
            row.interference_dbm = watt_to_dbm(r.interference);
            row.txpower_dbm = watt_to_dbm(r.tx_power);
            row.iterations = r.iterations;
            row.wall_ms = wall_ms;
            row.seed = cfg.algo.seed;
            return row;
        }

        // One row per (scheme, point); failures and invariant violations are recorded, not thrown.
        template <class ScenarioAt>
        SweepResult sweep(const RunConfig &cfg, std::string_view variable, const std::vector<double> &values,
                          ScenarioAt &&scenario_at)
        {
            SweepResult out;
            for (Scheme s : cfg.schemes)
                for (double v : values)
                {
                    const std::string name(scheme_name(s));
                    try
                    {
                        const Scenario sc = scenario_at(v);
                        const auto t0 = std::chrono::steady_clock::now();
                        const SchemeResult r = evaluate_scheme(sc, s, cfg.algo);
                        const double ms = elapsed_ms(t0);
                        if (r.interference > sc.interference_limit * (1.0 + 1e-6))
                        {
                            out.failures.push_back({name, std::string(variable), v,
                                                    "interference " + format_number(r.interference) +
                                                        " W exceeds the limit"});
                            continue;
                        }
                        if (r.ao && !r.ao->diagnostic.empty())
                            out.failures.push_back({name, std::string(variable), v, "solver: " + r.ao->diagnostic});
                        out.rows.push_back(make_row(r, cfg, variable, v, ms));
                    }
                    catch (const std::exception &e)
                    {
                        out.failures.push_back({name, std::string(variable), v, e.what()});
                    }
                }
            return out;
        }
    } // namespace

    std::string_view version() { return RASIM_VERSION; }

    Scenario RunConfig::scenario() const { return scenario(n_antennas, p_max_dbm); }

    Scenario RunConfig::scenario(int n, double pmax_dbm) const
    {
        const double spacing = spacing_m > 0.0 ? spacing_m : wavelength_m / 2.0;
        const double aperture = aperture_m2 > 0.0 ? aperture_m2 : wavelength_m * wavelength_m / 4.0;
        const auto [short_side, long_side] = factor_array(n);
        const double phi = sr_angle_deg * kDeg;

        Scenario sc;
        sc.st = upa_long_axis == 'x' ? ArrayGeometry::upa(long_side, short_side, spacing)
                                     : ArrayGeometry::upa(short_side, long_side, spacing);
        sc.pt = ArrayGeometry::ula_x(m_antennas, spacing, pt_position_m);
        sc.sr = Vec3(sr_distance_m * std::cos(phi), 0.0, sr_distance_m * std::sin(phi));
        sc.pr = pr_position_m;
        sc.pattern = GainPattern::directional(directivity_p, aperture, wavelength_m);
        sc.p_max = dbm_to_watt(pmax_dbm);
        sc.p0 = dbm_to_watt(p0_dbm);
        sc.noise_power = dbm_to_watt(noise_dbm);
        sc.interference_limit = gamma_w;
        sc.theta_max = theta_max_deg * kDeg;
        sc.sr_angle = phi;
        return sc;
    }

    void RunConfig::validate() const
    {
        if (n_antennas < 1 || m_antennas < 1)
            fail("n_antennas and m_antennas must be >= 1");
        if (upa_long_axis != 'x' && upa_long_axis != 'y')
            fail("upa_long_axis must be \"x\" or \"y\"");
        if (!(wavelength_m > 0.0))
            fail("wavelength_m must be positive");
        if (spacing_m < 0.0 || aperture_m2 < 0.0)
            fail("spacing_m and aperture_m2 must be positive (or 0 for the default)");
        if (!(sr_distance_m > 0.0))
            fail("sr_distance_m must be positive");
        if (!(gamma_w > 0.0))
            fail("the interference limit must be positive");
        if (!(directivity_p >= 0.0))
            fail("directivity_p must be >= 0");
        if (!(theta_max_deg > 0.0) || theta_max_deg > 90.0)
            fail("theta_max_deg must lie in (0, 90]");
        if (schemes.empty())
            fail("schemes must not be empty");
        if (std::set<Scheme>(schemes.begin(), schemes.end()).size() != schemes.size())
            fail("schemes must not repeat");
        for (std::size_t k = 1; k < power_sweep_dbm.size(); ++k)
            if (!(power_sweep_dbm[k] > power_sweep_dbm[k - 1]))
                fail("power_sweep_dbm must be strictly increasing");
        for (std::size_t k = 0; k < antenna_sweep.size(); ++k)
            if (antenna_sweep[k] < 1 || (k > 0 && antenna_sweep[k] <= antenna_sweep[k - 1]))
                fail("antenna_sweep must be strictly increasing and >= 1");
        if (!(pattern_step_deg > 0.0) || pattern_step_deg > 180.0)
            fail("pattern_step_deg must lie in (0, 180]");
        if (!(probe_distance_m > 0.0))
            fail("probe_distance_m must be positive");
        if (!(algo.sca.delta < 1.0))
            fail("delta must be below 1");
        if (!(algo.sca.rel_tol >= 0.0))
            fail("sca_rel_tol must be >= 0");
        try
        {
            algo.validate();
            scenario().validate();
        }
        catch (const std::invalid_argument &e)
        {
            fail(e.what());
        }
    }

    RunConfig parse_config(std::string_view text)
    {
        json j;
        try
        {
            j = text.find_first_not_of(" \t\r\n") == std::string_view::npos ? json::object() : json::parse(text);
        }
        catch (const json::parse_error &e)
        {
            fail(std::string("parse error: ") + e.what());
        }
        if (!j.is_object())
            fail("top level must be a JSON object");
        for (const auto &item : j.items())
            if (!known_keys().count(item.key()))
                fail("unknown key '" + item.key() + "'");
        if (j.contains("gamma_dbm") && j.contains("gamma_w"))
            fail("give either gamma_dbm or gamma_w, not both");

        RunConfig c;
        if_present(j, "n_antennas", [&] { c.n_antennas = get_int(j, "n_antennas"); });
        if_present(j, "m_antennas", [&] { c.m_antennas = get_int(j, "m_antennas"); });
        if_present(j, "upa_long_axis", [&] {
            const json &v = j.at("upa_long_axis");
            if (v != "x" && v != "y")
                fail("upa_long_axis must be \"x\" or \"y\"");
            c.upa_long_axis = v.get<std::string>()[0];
        });
        if_present(j, "wavelength_m", [&] { c.wavelength_m = get_number(j, "wavelength_m"); });
        if_present(j, "spacing_m", [&] { c.spacing_m = get_number(j, "spacing_m"); });
        if_present(j, "aperture_m2", [&] { c.aperture_m2 = get_number(j, "aperture_m2"); });
        if_present(j, "sr_angle_deg", [&] { c.sr_angle_deg = get_number(j, "sr_angle_deg"); });
        if_present(j, "sr_distance_m", [&] { c.sr_distance_m = get_number(j, "sr_distance_m"); });
        if_present(j, "pr_position_m", [&] { c.pr_position_m = get_vec3(j, "pr_position_m"); });
        if_present(j, "pt_position_m", [&] { c.pt_position_m = get_vec3(j, "pt_position_m"); });
        if_present(j, "p_max_dbm", [&] { c.p_max_dbm = get_number(j, "p_max_dbm"); });
        if_present(j, "p0_dbm", [&] { c.p0_dbm = get_number(j, "p0_dbm"); });
        if_present(j, "noise_dbm", [&] { c.noise_dbm = get_number(j, "noise_dbm"); });
        if_present(j, "gamma_dbm", [&] { c.gamma_w = dbm_to_watt(get_number(j, "gamma_dbm")); });
        if_present(j, "gamma_w", [&] { c.gamma_w = get_number(j, "gamma_w"); });
        if_present(j, "directivity_p", [&] { c.directivity_p = get_number(j, "directivity_p"); });
        if_present(j, "theta_max_deg", [&] { c.theta_max_deg = get_number(j, "theta_max_deg"); });
        if_present(j, "schemes", [&] {
            const json &v = j.at("schemes");
            if (!v.is_array())
                fail("schemes must be an array of names");
            c.schemes.clear();
            for (const auto &s : v)
            {
                const auto parsed = s.is_string() ? parse_scheme(s.get<std::string>()) : std::nullopt;
                if (!parsed)
                    fail("unknown scheme " + s.dump() + " (expected ra, fixed, random, isotropic)");
                c.schemes.push_back(*parsed);
            }
        });
        if_present(j, "seed", [&] {
            const json &v = j.at("seed");
            if (!v.is_number_unsigned())
                fail("seed must be a non-negative integer");
            c.algo.seed = v.get<std::uint64_t>();
        });
        if_present(j, "power_sweep_dbm", [&] {
            const json &v = j.at("power_sweep_dbm");
            if (!v.is_array() || v.empty())
                fail("power_sweep_dbm must be a non-empty array");
            c.power_sweep_dbm.clear();
            for (const auto &x : v)
            {
                if (!x.is_number())
                    fail("power_sweep_dbm entries must be numbers");
                c.power_sweep_dbm.push_back(x.get<double>());
            }
        });
        if_present(j, "antenna_sweep", [&] {
            const json &v = j.at("antenna_sweep");
            if (!v.is_array() || v.empty())
                fail("antenna_sweep must be a non-empty array");
            c.antenna_sweep.clear();
            for (const auto &x : v)
            {
                if (!x.is_number_integer())
                    fail("antenna_sweep entries must be integers");
                c.antenna_sweep.push_back(x.get<int>());
            }
        });
        if_present(j, "pattern_step_deg", [&] { c.pattern_step_deg = get_number(j, "pattern_step_deg"); });
        if_present(j, "probe_distance_m", [&] { c.probe_distance_m = get_number(j, "probe_distance_m"); });
        if_present(j, "epsilon", [&] { c.algo.epsilon = get_number(j, "epsilon"); });
        if_present(j, "max_outer_iterations", [&] { c.algo.max_outer = get_int(j, "max_outer_iterations"); });
        if_present(j, "kappa", [&] { c.algo.sca.kappa = get_number(j, "kappa"); });
        if_present(j, "delta", [&] { c.algo.sca.delta = get_number(j, "delta"); });
        if_present(j, "sca_max_iterations", [&] { c.algo.sca.max_iterations = get_int(j, "sca_max_iterations"); });
        if_present(j, "sca_rel_tol", [&] { c.algo.sca.rel_tol = get_number(j, "sca_rel_tol"); });
        if_present(j, "curvature", [&] {
            const json &v = j.at("curvature");
            if (v == "adaptive")
                c.algo.sca.curvature = CurvaturePolicy::Adaptive;
            else if (v == "global")
                c.algo.sca.curvature = CurvaturePolicy::Global;
            else
                fail("curvature must be \"adaptive\" or \"global\"");
        });
        if_present(j, "random_realizations", [&] { c.algo.random_realizations = get_int(j, "random_realizations"); });
        if_present(j, "output_dir", [&] {
            if (!j.at("output_dir").is_string())
                fail("output_dir must be a string");
            c.output_dir = j.at("output_dir").get<std::string>();
        });
        c.validate();
        return c;
    }

    RunConfig load_config(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            fail("cannot read '" + path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse_config(ss.str());
    }

    std::string canonical_config(const RunConfig &cfg) { return to_json(cfg).dump(); }

    std::string config_hash(const RunConfig &cfg)
    {
        // The output location does not change results, so it is left out of the hash.
        RunConfig keyed = cfg;
        keyed.output_dir = RunConfig{}.output_dir;
        std::uint64_t h = 14695981039346656037ULL;
        for (unsigned char ch : canonical_config(keyed))
        {
            h ^= ch;
            h *= 1099511628211ULL;
        }
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
        return buf;
    }

    SweepResult run_single(const RunConfig &cfg)
    {
        cfg.validate();
        return sweep(cfg, "p_max_dbm", {cfg.p_max_dbm}, [&](double v) { return cfg.scenario(cfg.n_antennas, v); });
    }

    SweepResult sweep_power(const RunConfig &cfg)
    {
        cfg.validate();
        return sweep(cfg, "p_max_dbm", cfg.power_sweep_dbm,
                     [&](double v) { return cfg.scenario(cfg.n_antennas, v); });
    }

    SweepResult sweep_antennas(const RunConfig &cfg)
    {
        cfg.validate();
        const std::vector<double> values(cfg.antenna_sweep.begin(), cfg.antenna_sweep.end());
        return sweep(cfg, "n_antennas", values,
                     [&](double v) { return cfg.scenario(static_cast<int>(v), cfg.p_max_dbm); });
    }

    PatternResult gain_pattern(const RunConfig &cfg)
    {
        cfg.validate();
        PatternResult out;
        const Scenario sc = cfg.scenario();
        const int steps = static_cast<int>(std::floor(180.0 / cfg.pattern_step_deg + 1e-9));
        for (Scheme s : cfg.schemes)
        {
            const std::string name(scheme_name(s));
            try
            {
                const SchemeResult r = evaluate_scheme(sc, s, cfg.algo);
                for (int k = 0; k <= steps; ++k)
                {
                    const double phi_deg = k * cfg.pattern_step_deg;
                    const double phi = phi_deg * kDeg;
                    const Vec3 probe(cfg.probe_distance_m * std::cos(phi), 0.0, cfg.probe_distance_m * std::sin(phi));
                    double power = 0.0;
                    for (const auto &real : r.realizations)
                        power += std::norm(real.w.dot(st_channel_vector(real.f, probe, r.scenario)));
                    power /= static_cast<double>(r.realizations.size());
                    out.rows.push_back({name, phi_deg, power, to_db(power)});
                }
            }
            catch (const std::exception &e)
            {
                out.failures.push_back({name, "phi_deg", 0.0, e.what()});
            }
        }
        return out;
    }

    std::string format_number(double v)
    {
        if (std::isnan(v))
            return "nan";
        if (std::isinf(v))
            return v > 0 ? "inf" : "-inf";
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, res.ptr);
    }

    void write_sweep_csv(std::ostream &os, const std::vector<ResultRow> &rows, bool include_timing)
    {
        os << kSweepHeader << '\n';
        for (const auto &r : rows)
            os << r.scheme << ',' << r.variable << ',' << format_number(r.value) << ',' << format_number(r.sinr_db)
               << ',' << format_number(r.sinr_linear) << ',' << format_number(r.interference_dbm) << ','
               << format_number(r.txpower_dbm) << ',' << r.iterations << ','
               << format_number(include_timing ? r.wall_ms : 0.0) << ',' << r.seed << '\n';
    }

    void write_pattern_csv(std::ostream &os, const std::vector<PatternRow> &rows)
    {
        os << kPatternHeader << '\n';
        for (const auto &r : rows)
            os << r.scheme << ',' << format_number(r.phi_deg) << ',' << format_number(r.gain_db) << ','
               << format_number(r.power_w) << '\n';
    }

    void write_manifest(std::ostream &os, const RunConfig &cfg, std::string_view command,
                        const std::vector<std::string> &outputs, const std::vector<PointFailure> &failures)
    {
        json m;
        m["tool"] = "rasim";
        m["version"] = std::string(version());
        m["command"] = std::string(command);
        m["config_hash"] = config_hash(cfg);
        m["config"] = to_json(cfg);
        m["seeds"] = {{"base_seed", cfg.algo.seed},
                      {"rng", "mt19937_64"},
                      {"random_realizations", cfg.algo.random_realizations}};
        m["outputs"] = outputs;
        json f = json::array();
        for (const auto &p : failures)
            f.push_back({{"scheme", p.scheme}, {"variable", p.variable}, {"value", p.value}, {"message", p.message}});
        m["failures"] = f;
        os << m.dump(2) << '\n';
    }

} // namespace rasim
