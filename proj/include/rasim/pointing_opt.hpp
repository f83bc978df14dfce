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

#ifndef RASIM_POINTING_OPT_HPP
#define RASIM_POINTING_OPT_HPP

#include "rasim/beamforming.hpp"
#include "rasim/channel.hpp"
#include "rasim/pointing.hpp"
#include "rasim/subproblem.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace rasim
{
    // Pointing-independent per-element quantities for the SR and PR links.
    // The amplitudes carry the propagation phase exp(-j 2 pi d / lambda), so that
    // sum_n conj(w_n) a_n cos^p reproduces w^H h exactly on the front hemisphere.
    struct LinkGeometry
    {
        Eigen::Matrix3Xd u_sr, u_pr;    // unit directions element -> SR / PR
        Eigen::VectorXcd a_sr, a_pr;    // sqrt(S G0 / (4 pi d^2)) exp(-j 2 pi d / lambda)

        static LinkGeometry from(const Scenario &sc);
    };

    // Cosines, regularized cosines and weighted amplitudes at one pointing.
    struct CosineCache
    {
        Eigen::VectorXd beta, alpha;         // f_n^T u_SR,n and f_n^T u_PR,n
        Eigen::VectorXd beta_reg, alpha_reg; // max(., 0) + kappa
        std::vector<bool> beta_clamped, alpha_clamped;
        Eigen::Matrix3Xd u_sr, u_pr;
        Eigen::VectorXcd e, c; // conj(w_n) a_SR,n and conj(w_n) a_PR,n
        double p = 0.0;
        double kappa = 0.0;

        int size() const { return static_cast<int>(beta.size()); }
    };

    CosineCache build_cosine_cache(const StackedVector &f, const BeamVector &w, const LinkGeometry &geo, double p,
                                   double kappa);
    CosineCache build_cosine_cache(const StackedVector &f, const BeamVector &w, const Scenario &sc, double kappa);

    double objective_J(const CosineCache &cache);  // |sum e_n beta_reg^p|^2
    double constraint_U(const CosineCache &cache); // |sum c_n alpha_reg^p|^2

    // Zero blocks where the cosine was clamped.
    StackedVector grad_J(const CosineCache &cache);
    StackedVector grad_U(const CosineCache &cache);

    // Analytic 3N x 3N Hessian of U on the unclamped region.
    Eigen::MatrixXd hessian_U(const CosineCache &cache);

    // 2p(p+|p-1|) C_max C_sum x ((1+kappa)^{2(p-1)} for p >= 1, kappa^{p-2} for 0 < p < 1).
    // Throws std::invalid_argument for p <= 0 or c = 0.
    double lipschitz_Lg(const Eigen::VectorXcd &c, double p, double kappa);
    inline double lipschitz_Lg(const CosineCache &cache) { return lipschitz_Lg(cache.c, cache.p, cache.kappa); }

    // First-order expansion of J at the cache point `anchor`.
    double surrogate_J_tilde(const StackedVector &f, const StackedVector &anchor, const CosineCache &anchor_cache);

    // Quadratic upper bound of U at `anchor`; throws std::invalid_argument for L < L_g.
    double upper_U_tilde(const StackedVector &f, const StackedVector &anchor, const CosineCache &anchor_cache,
                         double lipschitz);

    // Same expression without the L >= L_g guard.
    double quadratic_bound(const StackedVector &f, const StackedVector &anchor, double u_anchor,
                           const StackedVector &grad_anchor, double lipschitz);

    // How the curvature of the quadratic bound on U is chosen each iteration.
    //   Global:   L = lipschitz_scale * L_g (the bound majorizes U everywhere).
    //   Adaptive: start below L_g and double L until the step passes the physical
    //             interference and ascent checks; L_g is the ceiling, so the worst case
    //             is the Global step.
    enum class CurvaturePolicy
    {
        Global,
        Adaptive,
    };

    struct ScaConfig
    {
        double kappa = 1e-12;
        double delta = 0.1;
        int max_iterations = 30;
        double rel_tol = 1e-4;
        double lipschitz_scale = 1.0; // L = scale * L_g, scale >= 1
        int max_backtracks = 40;
        CurvaturePolicy curvature = CurvaturePolicy::Adaptive;
        double curvature_floor = 1e-8; // smallest trial L as a fraction of the ceiling
        SubproblemConfig subproblem;
    };

    struct ScaIterate
    {
        double j_model = 0.0;   // regularized J at the accepted point
        double u_model = 0.0;   // regularized U
        double j = 0.0;         // |w^H h_SS(F)|^2 from the channel model
        double u = 0.0;         // |w^H h_SP(F)|^2 from the channel model
        double lipschitz = 0.0; // L used to build the bound
        double radius = 0.0;    // ball radius of the subproblem
        double step = 0.0;      // accepted fraction of the subproblem step
        int subproblem_iterations = 0;
    };

    struct ScaResult
    {
        PointingMatrix f;
        std::vector<ScaIterate> history; // entry 0 describes the start point
        int iterations = 0;
        bool converged = false;
        std::string diagnostic;
    };

    // Physical objective / interference of (w, F) via the channel model.
    double signal_power(const BeamVector &w, const PointingMatrix &f, const Scenario &sc);
    double leakage_power(const BeamVector &w, const PointingMatrix &f, const Scenario &sc);

    // Successive convex approximation of max J s.t. U <= Gamma, zenith cap, unit norm.
    // Every accepted iterate is renormalized to unit boresights and satisfies the
    // physical interference limit; the physical objective never decreases.
    // Throws InfeasibleStartError when f0 violates the zenith cap or U(f0) > Gamma (1 + 1e-6).
    ScaResult sca_pointing_opt(const BeamVector &w, const PointingMatrix &f0, const Scenario &sc,
                               const ScaConfig &cfg = {});

} // namespace rasim

#endif
