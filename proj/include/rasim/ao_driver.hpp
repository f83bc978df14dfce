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

#ifndef RASIM_AO_DRIVER_HPP
#define RASIM_AO_DRIVER_HPP

#include "rasim/beamforming.hpp"
#include "rasim/channel.hpp"
#include "rasim/pointing_opt.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace rasim
{
    struct AlgoConfig
    {
        double epsilon = 1e-3;  // relative SINR change that stops the alternation
        int max_outer = 50;
        ScaConfig sca;
        std::uint64_t seed = 1;
        int random_realizations = 100;

        void validate() const;
    };

    struct AoIterate
    {
        int iteration = 0;
        double sinr = 0.0;         // from the channel model
        double j_model = 0.0;      // regularized J
        double u_model = 0.0;      // regularized U
        double tx_power = 0.0;     // ||w||^2
        double interference = 0.0; // |w^H h_SP(F)|^2 from the channel model
        int sca_iterations = 0;
        double wall_ms = 0.0;
    };

    struct AoResult
    {
        BeamVector w;
        PointingMatrix f;
        std::vector<AoIterate> trace; // entry 0: closed-form beamformer at the reference pointing
        int iterations = 0;
        bool converged = false;
        std::string diagnostic; // non-empty when an SCA step failed and the last feasible iterate was returned
    };

    // Alternates the closed-form beamformer and SCA pointing optimization starting from F = [e3 ... e3].
    AoResult alternating_optimize(const Scenario &sc, const AlgoConfig &cfg = {});

    enum class Scheme
    {
        Rotatable,
        Fixed,
        Random,
        Isotropic,
    };

    std::string_view scheme_name(Scheme s);
    std::optional<Scheme> parse_scheme(std::string_view name);
    inline constexpr Scheme kAllSchemes[] = {Scheme::Rotatable, Scheme::Fixed, Scheme::Random, Scheme::Isotropic};

    struct Realization
    {
        BeamVector w;
        PointingMatrix f;
    };

    struct SchemeResult
    {
        Scheme scheme = Scheme::Fixed;
        double sinr = 0.0;         // mean over realizations for the random scheme
        double interference = 0.0; // mean |w^H h_SP|^2
        double tx_power = 0.0;     // mean ||w||^2
        int iterations = 0;        // AO outer iterations (RA), 1 for closed-form schemes
        Scenario scenario;         // as evaluated (isotropic pattern swapped in for that scheme)
        std::vector<Realization> realizations;
        std::optional<AoResult> ao;
    };

    // Uniform over the reachable spherical cap: azimuth ~ U[0, 2pi), cos(zenith) ~ U[cos theta_max, 1].
    PointingMatrix random_pointing(int n, double theta_max, std::mt19937_64 &rng);

    SchemeResult evaluate_scheme(const Scenario &sc, Scheme scheme, const AlgoConfig &cfg = {});

} // namespace rasim

#endif
