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

#include "rasim/beamforming.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rasim
{
    Beamformer optimal_beamformer(const ChannelVector &h_ss, const ChannelVector &h_sp, double p_max, double gamma)
    {
        if (h_ss.size() != h_sp.size() || h_ss.size() == 0)
            throw std::invalid_argument("optimal_beamformer: channel vectors must be non-empty and of equal length");
        if (!(p_max > 0.0) || !(gamma > 0.0))
            throw std::invalid_argument("optimal_beamformer: P_max and Gamma must be positive");
        const double ss_norm = h_ss.norm();
        if (!(ss_norm > 0.0))
            throw std::invalid_argument("optimal_beamformer: h_SS is zero");

        const double sqrt_p = std::sqrt(p_max);
        const double sp_norm = h_sp.norm();
        const cdouble cross = h_sp.dot(h_ss); // h_SP^H h_SS

        if (sp_norm == 0.0 || std::norm(cross) / (ss_norm * ss_norm) <= gamma / p_max)
            return {sqrt_p * h_ss / ss_norm, BeamBranch::MaximumRatio};

        const ChannelVector sp_hat = h_sp / sp_norm;
        const cdouble proj = sp_hat.dot(h_ss); // hat{h}_SP^H h_SS
        // Rotate hat{h}_SP so that its contribution to w^H h_SS is real and positive.
        const ChannelVector sp_aligned = std::polar(1.0, std::arg(proj)) * sp_hat;
        const double rho = std::sqrt(gamma / (p_max * sp_norm * sp_norm));

        const ChannelVector residual = h_ss - proj * sp_hat;
        const double res_norm = residual.norm();
        if (res_norm < 1e-12 * ss_norm)
            return {sqrt_p * std::min(1.0, rho) * sp_aligned, BeamBranch::Parallel};

        BeamVector w = sqrt_p * (rho * sp_aligned + std::sqrt(1.0 - rho * rho) * residual / res_norm);
        return {std::move(w), BeamBranch::Constrained};
    }

    double sinr(const BeamVector &w, const ChannelVector &h_ss, const BeamVector &v, const ChannelVector &h_ps,
                double noise_power)
    {
        if (!(noise_power > 0.0))
            throw std::invalid_argument("sinr: noise power must be positive");
        return std::norm(w.dot(h_ss)) / (std::norm(v.dot(h_ps)) + noise_power);
    }

    double interference_power(const BeamVector &w, const ChannelVector &h_sp) { return std::norm(w.dot(h_sp)); }

} // namespace rasim
