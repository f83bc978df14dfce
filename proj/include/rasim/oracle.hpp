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

#ifndef RASIM_ORACLE_HPP
#define RASIM_ORACLE_HPP

// Brute-force and numeric references. Nothing here calls into the optimizers it is used to check.

#include "rasim/beamforming.hpp"
#include "rasim/channel.hpp"
#include "rasim/pointing.hpp"
#include "rasim/subproblem.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace rasim::oracle
{
    struct GridSpec
    {
        double zenith_step;  // radians
        double azimuth_step; // radians

        // 1 deg x 2 deg for a single antenna, 4 deg x 8 deg for two.
        static GridSpec default_for(int n_antennas);
    };

    // Unit boresights on the zenith/azimuth grid over the cap zenith <= theta_max
    // (zenith 0 appears once, theta_max is included).
    std::vector<Vec3> cap_grid(double theta_max, const GridSpec &grid);

    struct GridSearchResult
    {
        PointingMatrix f;
        double j = 0.0; // |w^H h_SS|^2
        double u = 0.0; // |w^H h_SP|^2
        bool found = false;
        std::size_t evaluated = 0;
    };

    // Exhaustive max of |w^H h_SS(F)|^2 over grid pointings with |w^H h_SP(F)|^2 <= Gamma. N <= 2.
    GridSearchResult grid_search_pointing(const BeamVector &w, const Scenario &sc, const GridSpec &grid);

    struct NumericBeamformer
    {
        BeamVector w;
        double objective = 0.0; // |w^H h_SS|^2
    };

    // Golden-section search over the power split inside span{h_SP, h_SS}, phases aligned with h_SS.
    // Gamma = 0 is allowed (pure nulling).
    NumericBeamformer numeric_beamformer_P2(const ChannelVector &h_ss, const ChannelVector &h_sp, double p_max,
                                            double gamma);

    using ScalarField = std::function<double(const StackedVector &)>;
    using VectorField = std::function<StackedVector(const StackedVector &)>;

    // Central differences (fn(x + h e_k) - fn(x - h e_k)) / 2h.
    StackedVector finite_diff_grad(const ScalarField &fn, const StackedVector &x, double h);

    // Central-difference Jacobian of a vector field, symmetrized.
    Eigen::MatrixXd finite_diff_hessian(const VectorField &grad, const StackedVector &x, double h);

    double symmetric_spectral_norm(const Eigen::MatrixXd &m);

    // Pointing with every boresight drawn uniformly over the zenith cap. With `front_of` set,
    // boresights are redrawn until f_n^T u_n >= min_cos for that direction set.
    PointingMatrix sample_pointing(int n, double theta_max, std::mt19937_64 &rng,
                                   const Eigen::Matrix3Xd *front_of = nullptr, double min_cos = 0.0);

    struct LipschitzEstimate
    {
        double max_ratio = 0.0;
        int pairs = 0;
    };

    // max ||grad U(y) - grad U(x)|| / ||y - x|| over random feasible pairs. With `unclamped_only`,
    // both points keep every PR cosine positive, so the connecting segment stays in the smooth region.
    LipschitzEstimate empirical_lipschitz(const BeamVector &w, const Scenario &sc, int samples, std::uint64_t seed,
                                          double kappa, bool unclamped_only);

    // Midpoint-rule integral of G over the unit sphere (should be 4 pi).
    double pattern_sphere_integral(const GainPattern &pat, int zenith_cells, int azimuth_cells);

    struct SubproblemReference
    {
        StackedVector x;
        double objective = 0.0;
        bool found = false;
        std::size_t evaluated = 0;
    };

    // Best unit-boresight grid point (resolution in radians) of the per-iteration program. N <= 2.
    SubproblemReference grid_subproblem(const SubproblemSpec &spec, double theta_max, double resolution);

    // Log-barrier Newton solve of the same program; needs a strictly feasible shrunk anchor.
    SubproblemReference barrier_subproblem(const SubproblemSpec &spec);

} // namespace rasim::oracle

#endif
