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

#include "rasim/subproblem.hpp"

#include "rasim/errors.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rasim
{
    namespace
    {
        // {y : normal^T y >= offset}, unit normal.
        struct Halfspace
        {
            Vec3 normal;
            double offset;
        };

        using AntennaSet = std::array<Halfspace, 2>; // intersected with the unit ball

        constexpr double kCandidateTol = 1e-12;

        AntennaSet antenna_set(const Vec3 &anchor, double cos_theta_max, double delta)
        {
            const double an = anchor.norm();
            if (!(an > 0.0))
                throw std::invalid_argument("antenna set: anchor block is zero");
            return {Halfspace{kZenithAxis, cos_theta_max}, Halfspace{anchor / an, (1.0 - delta) / an}};
        }

        double violation(const Vec3 &y, const AntennaSet &set)
        {
            double v = y.norm() - 1.0;
            for (const auto &h : set)
                v = std::max(v, h.offset - h.normal.dot(y));
            return v;
        }

        Vec3 plane_projection(const Vec3 &x, const Halfspace &h) { return x + (h.offset - h.normal.dot(x)) * h.normal; }

        // Point on {n1^T y = b1, n2^T y = b2} nearest to x, if the planes are not parallel.
        bool line_projection(const Vec3 &x, const Halfspace &h1, const Halfspace &h2, Vec3 &out)
        {
            const double c = h1.normal.dot(h2.normal);
            const double det = 1.0 - c * c;
            if (det < 1e-14)
                return false;
            const double r1 = h1.offset - h1.normal.dot(x);
            const double r2 = h2.offset - h2.normal.dot(x);
            const double l1 = (r1 - c * r2) / det;
            const double l2 = (r2 - c * r1) / det;
            out = x + l1 * h1.normal + l2 * h2.normal;
            return true;
        }

        // Up to two points where the line of h1 and h2 pierces the unit sphere.
        int line_sphere(const Halfspace &h1, const Halfspace &h2, std::array<Vec3, 2> &out)
        {
            Vec3 p0;
            if (!line_projection(Vec3::Zero(), h1, h2, p0))
                return 0;
            const double rem = 1.0 - p0.squaredNorm();
            if (rem < 0.0)
                return 0;
            const Vec3 dir = h1.normal.cross(h2.normal).normalized();
            const double t = std::sqrt(rem);
            out[0] = p0 + t * dir;
            out[1] = p0 - t * dir;
            return 2;
        }

        // Any unit vector orthogonal to n.
        Vec3 orthogonal_unit(const Vec3 &n)
        {
            const Vec3 seed = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
            return n.cross(seed).normalized();
        }

        // Closest candidate (projection) or best candidate (linear maximization) among the
        // stationary points of every active-set combination of ball, h1, h2.
        template <typename Score>
        Vec3 select_candidate(const std::vector<Vec3> &cands, const AntennaSet &set, Score score)
        {
            const Vec3 *best = nullptr;
            double best_score = -std::numeric_limits<double>::infinity();
            const Vec3 *least_bad = nullptr;
            double least_violation = std::numeric_limits<double>::infinity();
            for (const auto &c : cands)
            {
                if (!c.allFinite())
                    continue;
                const double v = violation(c, set);
                if (v < least_violation)
                {
                    least_violation = v;
                    least_bad = &c;
                }
                if (v > kCandidateTol)
                    continue;
                const double s = score(c);
                if (s > best_score)
                {
                    best_score = s;
                    best = &c;
                }
            }
            if (best)
                return *best;
            if (least_bad)
                return *least_bad;
            throw SolverError("antenna set: no finite candidate");
        }

        Vec3 project_onto(const Vec3 &x, const AntennaSet &set)
        {
            if (violation(x, set) <= 0.0)
                return x;
            std::vector<Vec3> cands;
            cands.reserve(12);
            const double xn = x.norm();
            if (xn > 0.0)
                cands.push_back(x / xn);
            for (const auto &h : set)
            {
                const Vec3 q = plane_projection(x, h);
                cands.push_back(q);
                const double rho2 = 1.0 - h.offset * h.offset;
                if (rho2 >= 0.0)
                {
                    const Vec3 center = h.offset * h.normal;
                    const Vec3 radial = q - center;
                    const double rn = radial.norm();
                    if (rn > 0.0)
                        cands.push_back(center + std::sqrt(rho2) * radial / rn);
                }
            }
            // Line point as p0 + s d, with p0 the line point nearest the origin: the residual in
            // both planes stays at rounding level even for targets far from the unit ball.
            Vec3 p0;
            if (line_projection(Vec3::Zero(), set[0], set[1], p0))
            {
                const Vec3 dir = set[0].normal.cross(set[1].normal).normalized();
                cands.push_back(p0 + dir.dot(x - p0) * dir);
            }
            std::array<Vec3, 2> pierce;
            for (int k = 0, m = line_sphere(set[0], set[1], pierce); k < m; ++k)
                cands.push_back(pierce[k]);
            // -||c - x||^2 up to the constant ||x||^2, which would swamp the comparison for far targets.
            return select_candidate(cands, set, [&x](const Vec3 &c) { return 2.0 * x.dot(c) - c.squaredNorm(); });
        }

        Vec3 maximize_over(const Vec3 &g, const AntennaSet &set)
        {
            std::vector<Vec3> cands;
            cands.reserve(8);
            const double gn = g.norm();
            if (gn > 0.0)
                cands.push_back(g / gn);
            for (const auto &h : set)
            {
                const double rho2 = 1.0 - h.offset * h.offset;
                if (rho2 < 0.0)
                    continue;
                const Vec3 center = h.offset * h.normal;
                const Vec3 tangential = g - g.dot(h.normal) * h.normal;
                const double tn = tangential.norm();
                const Vec3 dir = tn > 1e-14 * std::max(gn, 1e-300) ? Vec3(tangential / tn) : orthogonal_unit(h.normal);
                cands.push_back(center + std::sqrt(rho2) * dir);
            }
            std::array<Vec3, 2> pierce;
            for (int k = 0, m = line_sphere(set[0], set[1], pierce); k < m; ++k)
                cands.push_back(pierce[k]);
            return select_candidate(cands, set, [&g](const Vec3 &c) { return g.dot(c); });
        }

        Vec3 block(const StackedVector &x, int n) { return x.segment<3>(3 * n); }

    } // namespace

    void SubproblemSpec::validate() const
    {
        const auto len = anchor.size();
        if (len == 0 || len % 3 != 0)
            throw std::invalid_argument("SubproblemSpec: anchor length must be a positive multiple of 3");
        if (gradient.size() != len || center.size() != len)
            throw std::invalid_argument("SubproblemSpec: gradient/center length mismatch");
        if (!(radius >= 0.0))
            throw std::invalid_argument("SubproblemSpec: radius must be non-negative");
        if (!(delta > 0.0))
            throw std::invalid_argument("SubproblemSpec: delta must be positive");
    }

    Ball ball_from_U_tilde(const StackedVector &anchor, const StackedVector &grad_u, double u_anchor, double lipschitz,
                           double gamma)
    {
        if (!(lipschitz > 0.0))
            throw std::invalid_argument("ball_from_U_tilde: L must be positive");
        if (anchor.size() != grad_u.size())
            throw std::invalid_argument("ball_from_U_tilde: length mismatch");
        const double radicand = grad_u.squaredNorm() / (lipschitz * lipschitz) + 2.0 * (gamma - u_anchor) / lipschitz;
        if (radicand < 0.0)
            throw InfeasibleStartError("ball_from_U_tilde: anchor violates U <= Gamma");
        return {anchor - grad_u / lipschitz, std::sqrt(radicand)};
    }

    StackedVector project_ball(const StackedVector &x, const StackedVector &center, double radius)
    {
        const StackedVector d = x - center;
        const double dn = d.norm();
        if (dn <= radius)
            return x;
        return center + (radius / dn) * d;
    }

    StackedVector project_halfspace(const StackedVector &x, const StackedVector &a, double b)
    {
        const double an2 = a.squaredNorm();
        if (!(an2 > 0.0))
            throw std::invalid_argument("project_halfspace: zero normal");
        const double slack = a.dot(x) - b;
        if (slack >= 0.0)
            return x;
        return x - (slack / an2) * a;
    }

    StackedVector project_block_ball(const StackedVector &x, int n)
    {
        if (n < 0 || 3 * n + 3 > x.size())
            throw std::out_of_range("project_block_ball: block index out of range");
        StackedVector y = x;
        const double bn = y.segment<3>(3 * n).norm();
        if (bn > 1.0)
            y.segment<3>(3 * n) /= bn;
        return y;
    }

    Vec3 project_antenna_set(const Vec3 &x, const Vec3 &anchor, double cos_theta_max, double delta)
    {
        return project_onto(x, antenna_set(anchor, cos_theta_max, delta));
    }

    Vec3 maximize_linear_antenna_set(const Vec3 &g, const Vec3 &anchor, double cos_theta_max, double delta)
    {
        return maximize_over(g, antenna_set(anchor, cos_theta_max, delta));
    }

    SubproblemResult solve_subproblem(const SubproblemSpec &spec, const SubproblemConfig &cfg)
    {
        spec.validate();
        const int n = spec.n();
        std::vector<AntennaSet> sets;
        sets.reserve(n);
        for (int k = 0; k < n; ++k)
            sets.push_back(antenna_set(block(spec.anchor, k), spec.cos_theta_max, spec.delta));

        SubproblemResult res;
        res.anchor_objective = spec.gradient.dot(spec.anchor);
        res.x = spec.anchor;
        res.objective = res.anchor_objective;

        const double gnorm = spec.gradient.norm();
        if (gnorm == 0.0 || spec.radius == 0.0)
        {
            res.converged = true;
            return res;
        }

        // Ball constraint dualized: for multiplier mu > 0 the maximizer of
        // g^T x - mu/2 ||x - c||^2 over the per-antenna sets is the blockwise projection of c + g/mu.
        auto primal = [&](double mu) {
            StackedVector x(3 * n);
            for (int k = 0; k < n; ++k)
            {
                const Vec3 target = block(spec.center, k) + block(spec.gradient, k) / mu;
                x.segment<3>(3 * k) = project_onto(target, sets[k]);
            }
            return x;
        };
        auto distance = [&](const StackedVector &x) { return (x - spec.center).norm(); };

        StackedVector best(3 * n);
        for (int k = 0; k < n; ++k)
            best.segment<3>(3 * k) = maximize_over(block(spec.gradient, k), sets[k]);

        if (distance(best) <= spec.radius)
        {
            res.multiplier = 0.0;
            res.converged = true;
        }
        else
        {
            const double mu0 = gnorm / spec.radius;
            double hi = mu0, lo = mu0;
            int steps = 0;
            StackedVector x_hi = primal(hi);
            while (distance(x_hi) > spec.radius && steps < cfg.max_iterations)
            {
                hi *= 2.0;
                x_hi = primal(hi);
                ++steps;
            }
            while (distance(primal(lo)) <= spec.radius && steps < cfg.max_iterations)
            {
                lo *= 0.5;
                ++steps;
            }
            if (lo == hi)
                lo = hi * 0.5;
            while (steps < cfg.max_iterations && hi / lo - 1.0 > 1e-15)
            {
                const double mid = std::sqrt(lo * hi);
                StackedVector x_mid = primal(mid);
                if (distance(x_mid) <= spec.radius)
                {
                    hi = mid;
                    x_hi = std::move(x_mid);
                }
                else
                    lo = mid;
                ++steps;
            }
            res.iterations = steps;
            res.multiplier = hi;
            res.converged = hi / lo - 1.0 <= 1e-12;
            if (!res.converged)
                res.diagnostic = "ball multiplier bisection hit the iteration budget";
            best = std::move(x_hi);
        }

        const auto report = feasibility_report(spec, best);
        const double obj = spec.gradient.dot(best);
        if (!report.feasible(cfg.feasibility_tol))
        {
            res.converged = false;
            res.diagnostic = "solution violates constraints by " + std::to_string(report.max_violation()) +
                             "; returning anchor";
            return res;
        }
        if (obj >= res.anchor_objective)
        {
            res.x = std::move(best);
            res.objective = obj;
        }
        return res;
    }

    double FeasibilityReport::max_violation() const
    {
        double v = ball;
        for (const auto *vec : {&zenith_lower, &zenith_upper, &unit_norm, &trust})
            for (double x : *vec)
                v = std::max(v, x);
        return v;
    }

    FeasibilityReport feasibility_report(const SubproblemSpec &spec, const StackedVector &x)
    {
        spec.validate();
        if (x.size() != spec.anchor.size())
            throw std::invalid_argument("feasibility_report: length mismatch");
        FeasibilityReport rep;
        const double dist = (x - spec.center).norm();
        rep.ball = spec.radius > 0.0 ? (dist - spec.radius) / spec.radius : dist;
        for (int k = 0; k < spec.n(); ++k)
        {
            const Vec3 y = block(x, k);
            const Vec3 a = block(spec.anchor, k);
            rep.zenith_lower.push_back(spec.cos_theta_max - y.z());
            rep.zenith_upper.push_back(y.z() - 1.0);
            rep.unit_norm.push_back(y.norm() - 1.0);
            rep.trust.push_back(((1.0 - spec.delta) - a.dot(y)) / a.norm());
        }
        return rep;
    }

} // namespace rasim
