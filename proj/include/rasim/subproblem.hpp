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

#ifndef RASIM_SUBPROBLEM_HPP
#define RASIM_SUBPROBLEM_HPP

#include "rasim/geometry.hpp"
#include "rasim/pointing.hpp"

#include <string>
#include <vector>

namespace rasim
{
    // Per-iteration convex program over the stacked pointing vector x (length 3N):
    //
    //   maximize    g^T x
    //   subject to  ||x - center|| <= radius                  (quadratic bound on U below Gamma)
    //               cos(theta_max) <= x_n^T e3 <= 1            for every antenna n
    //               ||x_n|| <= 1                               (relaxed unit norm)
    //               anchor_n^T x_n >= 1 - delta                (trust halfspace)
    struct SubproblemSpec
    {
        StackedVector gradient;
        StackedVector center;
        double radius = 0.0;
        StackedVector anchor;
        double cos_theta_max = 0.5;
        double delta = 0.1;

        int n() const { return static_cast<int>(anchor.size() / 3); }
        void validate() const;
    };

    struct Ball
    {
        StackedVector center;
        double radius = 0.0;
    };

    // {x : U_i + grad_i^T (x - x_i) + L/2 ||x - x_i||^2 <= Gamma} written as a Euclidean ball.
    // Throws InfeasibleStartError when U_i > Gamma makes the radicand negative.
    Ball ball_from_U_tilde(const StackedVector &anchor, const StackedVector &grad_u, double u_anchor, double lipschitz,
                           double gamma);

    StackedVector project_ball(const StackedVector &x, const StackedVector &center, double radius);
    // Projection onto {y : a^T y >= b}.
    StackedVector project_halfspace(const StackedVector &x, const StackedVector &a, double b);
    // Projects block n (entries 3n..3n+2) onto the unit ball, other blocks untouched.
    StackedVector project_block_ball(const StackedVector &x, int n);

    // Exact Euclidean projection of one antenna block onto
    // {y : ||y|| <= 1, e3^T y >= cos_theta_max, anchor^T y >= 1 - delta}.
    Vec3 project_antenna_set(const Vec3 &x, const Vec3 &anchor, double cos_theta_max, double delta);

    // Exact maximizer of g^T y over the same per-antenna set.
    Vec3 maximize_linear_antenna_set(const Vec3 &g, const Vec3 &anchor, double cos_theta_max, double delta);

    struct SubproblemConfig
    {
        int max_iterations = 200;      // bisection steps on the ball multiplier
        double feasibility_tol = 1e-8; // normalized, per constraint
    };

    struct SubproblemResult
    {
        StackedVector x;
        double objective = 0.0;
        double anchor_objective = 0.0;
        double multiplier = 0.0; // ball multiplier, 0 when the ball is inactive
        int iterations = 0;
        bool converged = false;
        std::string diagnostic;
    };

    // Contract: the returned x is feasible within feasibility_tol and g^T x >= g^T anchor.
    // Requires a feasible anchor; on non-convergence returns the best feasible point with converged = false.
    SubproblemResult solve_subproblem(const SubproblemSpec &spec, const SubproblemConfig &cfg = {});

    // Signed, normalized constraint values; positive means violated.
    struct FeasibilityReport
    {
        double ball = 0.0;
        std::vector<double> zenith_lower;
        std::vector<double> zenith_upper;
        std::vector<double> unit_norm;
        std::vector<double> trust;

        double max_violation() const;
        bool feasible(double tol = 1e-8) const { return max_violation() <= tol; }
    };

    FeasibilityReport feasibility_report(const SubproblemSpec &spec, const StackedVector &x);

} // namespace rasim

#endif
