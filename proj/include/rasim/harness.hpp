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

#ifndef RASIM_HARNESS_HPP
#define RASIM_HARNESS_HPP

// Run configuration, scheme sweeps and result persistence.

#include "rasim/ao_driver.hpp"
#include "rasim/channel.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace rasim
{
    struct RunConfig
    {
        int n_antennas = 4;
        int m_antennas = 4;
        // factor_array gives the N = a * b split with a <= b; 'x' lays the longer side b along x
        // (the plane holding SR and PR), 'y' along y.
        char upa_long_axis = 'x';
        double wavelength_m = 0.125;
        double spacing_m = 0.0;      // 0 selects wavelength / 2
        double aperture_m2 = 0.0;    // 0 selects wavelength^2 / 4
        double sr_angle_deg = 60.0;  // SR at sr_distance_m * [cos, 0, sin]
        double sr_distance_m = 50.0;
        Vec3 pr_position_m{-30.0, 0.0, 30.0};
        Vec3 pt_position_m{-55.0, 0.0, 0.0}; // center of the PT ULA along x
        double p_max_dbm = 23.0;
        double p0_dbm = 23.0;
        double noise_dbm = -80.0;
        double gamma_w = 1e-11; // interference limit, stored in watts
        double directivity_p = 4.0;
        double theta_max_deg = 60.0;

        std::vector<Scheme> schemes{std::begin(kAllSchemes), std::end(kAllSchemes)};
        std::vector<double> power_sweep_dbm{15.0, 18.0, 21.0, 24.0, 27.0, 30.0};
        std::vector<int> antenna_sweep{2, 4, 8, 16};
        double pattern_step_deg = 0.5;
        double probe_distance_m = 50.0;

        AlgoConfig algo;
        std::string output_dir = "results";

        // Scenario with the configured parameters; n_antennas and p_max_dbm can be overridden.
        Scenario scenario() const;
        Scenario scenario(int n_antennas, double p_max_dbm) const;

        // Throws ConfigError.
        void validate() const;
    };

    // JSON text -> RunConfig. Missing keys keep their defaults; unknown keys are rejected.
    // Throws ConfigError.
    RunConfig parse_config(std::string_view json_text);
    RunConfig load_config(const std::string &path);

    // Normalized JSON text of every field (sorted keys, shortest round-trip numbers).
    std::string canonical_config(const RunConfig &cfg);
    // 64-bit FNV-1a of the canonical text with output_dir excluded, as 16 hex digits.
    std::string config_hash(const RunConfig &cfg);

    struct ResultRow
    {
        std::string scheme;
        std::string variable; // "p_max_dbm" or "n_antennas"
        double value = 0.0;
        double sinr_linear = 0.0;
        double sinr_db = 0.0;
        double interference_dbm = 0.0;
        double txpower_dbm = 0.0;
        int iterations = 0;
        double wall_ms = 0.0;
        std::uint64_t seed = 0;
    };

    struct PointFailure
    {
        std::string scheme;
        std::string variable;
        double value = 0.0;
        std::string message;
    };

    struct SweepResult
    {
        std::vector<ResultRow> rows; // ordered by (scheme in config order, sweep value)
        std::vector<PointFailure> failures;
        bool ok() const { return failures.empty(); }
    };

    // Every configured scheme at the configured scenario.
    SweepResult run_single(const RunConfig &cfg);
    // Every scheme over power_sweep_dbm.
    SweepResult sweep_power(const RunConfig &cfg);
    // Every scheme over antenna_sweep (UPA factorization per N).
    SweepResult sweep_antennas(const RunConfig &cfg);

    struct PatternRow
    {
        std::string scheme;
        double phi_deg = 0.0;
        double power_w = 0.0; // |w^H h_probe(phi)|^2, mean over realizations for the random scheme
        double gain_db = 0.0; // 10 log10(power_w)
    };

    struct PatternResult
    {
        std::vector<PatternRow> rows;
        std::vector<PointFailure> failures;
        bool ok() const { return failures.empty(); }
    };

    // Received power on the probe ring [d cos phi, 0, d sin phi], phi in [0, 180] deg.
    PatternResult gain_pattern(const RunConfig &cfg);

    inline constexpr std::string_view kSweepHeader =
        "scheme,variable,value,sinr_db,sinr_linear,interference_dbm,txpower_dbm,iterations,wall_ms,seed";
    inline constexpr std::string_view kPatternHeader = "scheme,phi_deg,gain_db,power_w";

    // Shortest round-trip decimal; "inf", "-inf", "nan" for non-finite values.
    std::string format_number(double v);

    // With include_timing = false the wall_ms column is written as 0 so reruns are byte-identical.
    void write_sweep_csv(std::ostream &os, const std::vector<ResultRow> &rows, bool include_timing);
    void write_pattern_csv(std::ostream &os, const std::vector<PatternRow> &rows);

    // manifest.json: tool, version, command, config hash, canonical config, seeds, outputs, failures.
    void write_manifest(std::ostream &os, const RunConfig &cfg, std::string_view command,
                        const std::vector<std::string> &outputs, const std::vector<PointFailure> &failures);

    std::string_view version();

} // namespace rasim

#endif
