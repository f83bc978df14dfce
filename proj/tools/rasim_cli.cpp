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

// Command-line front end: single runs, sweeps, gain patterns and the validation suite.

#include "rasim/errors.hpp"
#include "rasim/harness.hpp"
#include "rasim/validation.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace
{
    enum Exit : int
    {
        kOk = 0,
        kConfigError = 1,
        kSolverFailure = 2,
        kValidationFailure = 3,
    };

    struct Common
    {
        std::string config;
        std::string out;
        std::uint64_t seed = 0;
        bool seed_set = false;
        std::string schemes;
        bool timing = false;
    };

    std::vector<std::string> split_list(const std::string &s)
    {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty())
                out.push_back(item);
        return out;
    }

    rasim::RunConfig resolve_config(const Common &c)
    {
        rasim::RunConfig cfg = c.config.empty() ? rasim::parse_config("{}") : rasim::load_config(c.config);
        if (!c.out.empty())
            cfg.output_dir = c.out;
        if (c.seed_set)
            cfg.algo.seed = c.seed;
        if (!c.schemes.empty())
        {
            cfg.schemes.clear();
            for (const auto &name : split_list(c.schemes))
            {
                const auto s = rasim::parse_scheme(name);
                if (!s)
                    throw rasim::ConfigError("--schemes: unknown scheme '" + name + "'");
                cfg.schemes.push_back(*s);
            }
        }
        cfg.validate();
        return cfg;
    }

    std::filesystem::path prepare_out(const rasim::RunConfig &cfg)
    {
        const std::filesystem::path dir(cfg.output_dir);
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec)
            throw rasim::ConfigError("cannot create output directory '" + dir.string() + "': " + ec.message());
        return dir;
    }

    template <class Writer>
    void write_file(const std::filesystem::path &path, Writer &&writer)
    {
        std::ofstream os(path, std::ios::binary | std::ios::trunc);
        if (!os)
            throw rasim::ConfigError("cannot write '" + path.string() + "'");
        writer(os);
        if (!os)
            throw rasim::ConfigError("write failed for '" + path.string() + "'");
    }

    void print_rows(const std::vector<rasim::ResultRow> &rows)
    {
        std::printf("%-10s %-11s %10s %12s %16s\n", "scheme", "variable", "value", "sinr_db", "interference_dbm");
        for (const auto &r : rows)
            std::printf("%-10s %-11s %10g %12.4f %16.4f\n", r.scheme.c_str(), r.variable.c_str(), r.value, r.sinr_db,
                        r.interference_dbm);
    }

    void print_failures(const std::vector<rasim::PointFailure> &failures)
    {
        for (const auto &f : failures)
            std::fprintf(stderr, "failure: scheme=%s %s=%g: %s\n", f.scheme.c_str(), f.variable.c_str(), f.value,
                         f.message.c_str());
    }

    int sweep_command(const Common &c, const std::string &command, const std::string &file,
                      rasim::SweepResult (*fn)(const rasim::RunConfig &))
    {
        const rasim::RunConfig cfg = resolve_config(c);
        const auto dir = prepare_out(cfg);
        const rasim::SweepResult res = fn(cfg);
        write_file(dir / file, [&](std::ostream &os) { rasim::write_sweep_csv(os, res.rows, c.timing); });
        write_file(dir / "manifest.json",
                   [&](std::ostream &os) { rasim::write_manifest(os, cfg, command, {file}, res.failures); });
        print_rows(res.rows);
        print_failures(res.failures);
        std::printf("wrote %s\n", (dir / file).string().c_str());
        return res.ok() ? kOk : kSolverFailure;
    }

    int pattern_command(const Common &c)
    {
        const rasim::RunConfig cfg = resolve_config(c);
        const auto dir = prepare_out(cfg);
        const rasim::PatternResult res = rasim::gain_pattern(cfg);
        write_file(dir / "pattern.csv", [&](std::ostream &os) { rasim::write_pattern_csv(os, res.rows); });
        write_file(dir / "manifest.json",
                   [&](std::ostream &os) { rasim::write_manifest(os, cfg, "pattern", {"pattern.csv"}, res.failures); });
        print_failures(res.failures);
        std::printf("wrote %s (%zu rows)\n", (dir / "pattern.csv").string().c_str(), res.rows.size());
        return res.ok() ? kOk : kSolverFailure;
    }

    int validate_command(const Common &c, const rasim::ValidationOptions &opt, const std::string &report_path)
    {
        const rasim::RunConfig cfg = resolve_config(c);
        rasim::ValidationOptions o = opt;
        o.seed = cfg.algo.seed;
        const rasim::ValidationReport rep = rasim::run_validation(cfg, o);
        for (const auto &chk : rep.checks)
            std::printf("%s %-17s metric=%-14s threshold=%s (%.0f ms)\n    %s\n", chk.passed ? "PASS" : "FAIL",
                        chk.id.c_str(), rasim::format_number(chk.metric).c_str(),
                        rasim::format_number(chk.threshold).c_str(), chk.wall_ms, chk.detail.c_str());
        const std::filesystem::path path =
            report_path.empty() ? prepare_out(cfg) / "validation.json" : std::filesystem::path(report_path);
        write_file(path, [&](std::ostream &os) { os << rep.to_json() << '\n'; });
        std::printf("%s: %s\n", rep.passed() ? "all checks passed" : "validation failed", path.string().c_str());
        return rep.passed() ? kOk : kValidationFailure;
    }
} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"rasim: rotatable-antenna spectrum-sharing simulator"};
    app.set_version_flag("--version", std::string(rasim::version()));
    app.require_subcommand(1);

    Common common;
    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--config", common.config, "JSON run configuration (defaults when omitted)");
        sub->add_option("--out", common.out, "output directory (overrides output_dir)");
        sub->add_option_function<std::uint64_t>(
            "--seed", [&](const std::uint64_t &s) { common.seed = s, common.seed_set = true; }, "base RNG seed");
        sub->add_option("--schemes", common.schemes, "comma-separated subset of ra,fixed,random,isotropic");
    };

    auto *run = app.add_subcommand("run", "evaluate every scheme at the configured scenario");
    auto *sp = app.add_subcommand("sweep-power", "SINR versus the ST power budget");
    auto *sn = app.add_subcommand("sweep-n", "SINR versus the number of ST antennas");
    auto *pat = app.add_subcommand("pattern", "received power on the probe ring versus angle");
    auto *val = app.add_subcommand("validate", "run the oracle-backed acceptance suite");
    for (auto *sub : {run, sp, sn, pat, val})
        add_common(sub);
    for (auto *sub : {run, sp, sn})
        sub->add_flag("--timing", common.timing, "write measured wall_ms (otherwise 0, for reproducible files)");

    rasim::ValidationOptions vopt;
    std::string only, report;
    val->add_option("--only", only, "comma-separated check ids");
    val->add_option("--report", report, "JSON report path (default OUT/validation.json)");
    val->add_option("--inject-gradient-corruption", vopt.gradient_corruption)->group("");
    val->add_option("--inject-lipschitz-scale", vopt.lipschitz_scale)->group("");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try
    {
        if (*run)
            return sweep_command(common, "run", "run.csv", rasim::run_single);
        if (*sp)
            return sweep_command(common, "sweep-power", "sweep_power.csv", rasim::sweep_power);
        if (*sn)
            return sweep_command(common, "sweep-n", "sweep_n.csv", rasim::sweep_antennas);
        if (*pat)
            return pattern_command(common);
        vopt.only = split_list(only);
        return validate_command(common, vopt, report);
    }
    catch (const rasim::ConfigError &e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kConfigError;
    }
    catch (const std::exception &e)
    {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return kSolverFailure;
    }
}
