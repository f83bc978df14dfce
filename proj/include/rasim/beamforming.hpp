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

#ifndef RASIM_BEAMFORMING_HPP
#define RASIM_BEAMFORMING_HPP

#include "rasim/channel.hpp"

namespace rasim
{
    enum class BeamBranch
    {
        MaximumRatio,  // interference constraint inactive, w = sqrt(P) h_SS / ||h_SS||
        Constrained,   // interference pinned at Gamma, power split between h_SP and its nullspace
        Parallel,      // h_SS parallel to h_SP, all power along the shared direction
    };

    struct Beamformer
    {
        BeamVector w;
        BeamBranch branch = BeamBranch::MaximumRatio;
    };

    // Closed-form maximizer of |w^H h_SS|^2 s.t. ||w||^2 <= P_max, |w^H h_SP|^2 <= Gamma.
    // Throws std::invalid_argument for h_SS = 0, mismatched lengths or non-positive P_max/Gamma.
    Beamformer optimal_beamformer(const ChannelVector &h_ss, const ChannelVector &h_sp, double p_max, double gamma);

    // |w^H h_SS|^2 / (|v^H h_PS|^2 + sigma^2)
    double sinr(const BeamVector &w, const ChannelVector &h_ss, const BeamVector &v, const ChannelVector &h_ps,
                double noise_power);

    // |w^H h_SP|^2
    double interference_power(const BeamVector &w, const ChannelVector &h_sp);

} // namespace rasim

#endif
