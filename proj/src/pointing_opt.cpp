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

#include "rasim/pointing_opt.hpp"

#include "rasim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rasim
{
    namespace
    {
        constexpr double kPi = std::numbers::pi;

        // Regularized power sum and its per-element derivative weights.
        cdouble weighted_sum(const Eigen::VectorXcd &coef, const Eigen::VectorXd &cos_reg, double p)
        {
            cdouble s = 0.0;
            for (Eigen::Index n = 0; n < coef.size(); ++n)
                s += coef(n) * std::pow(cos_reg(n), p);
            return s;
        }

        StackedVector power_sum_gradient(const Eigen::VectorXcd &coef, const Eigen::VectorXd &cos_reg,
                                         const std::vector<bool> &clamped, const Eigen::Matrix3Xd &dirs, double p)
        {
            const cdouble total = weighted_sum(coef, cos_reg, p);
            StackedVector g = StackedVector::Zero(3 * coef.size());
            for (Eigen::Index n = 0; n < coef.size(); ++n)
            {
                if (clamped[n])
                    continue;
                const double s = 2.0 * std::real(std::conj(total) * (p * std::pow(cos_reg(n), p - 1.0) * coef(n)));
                g.segment<3>(3 * n) = s * dirs.col(n);
            }
            return g;
        }

        void fill_cosines(const StackedVector &f, const Eigen::Matrix3Xd &dirs, double kappa, Eigen::VectorXd &raw,
                          Eigen::VectorXd &reg, std::vector<bool> &clamped)
        {
            const auto n = dirs.cols();
            raw.resize(n);
            reg.resize(n);
            clamped.assign(n, false);
            for (Eigen::Index k = 0; k < n; ++k)
            {
                raw(k) = f.segment<3>(3 * k).dot(dirs.col(k));
                clamped[k] = !(raw(k) > 0.0);
                reg(k) = std::max(raw(k), 0.0) + kappa;
            }
        }

        StackedVector normalize_blocks(StackedVector x)
        {
            for (Eigen::Index k = 0; k < x.size() / 3; ++k)
                x.segment<3>(3 * k).normalize();
            return x;
        }
    } // namespace

    LinkGeometry LinkGeometry::from(const Scenario &sc)
    {
        const int n = sc.n();
        LinkGeometry geo{Eigen::Matrix3Xd(3, n), Eigen::Matrix3Xd(3, n), Eigen::VectorXcd(n), Eigen::VectorXcd(n)};
        const auto &pat = sc.pattern;
        auto amplitude = [&pat](double d) {
            return std::polar(std::sqrt(pat.aperture * pat.g0 / (4.0 * kPi * d * d)), -2.0 * kPi * d / pat.wavelength);
        };
        for (int k = 0; k < n; ++k)
        {
            const Vec3 &t = sc.st.positions[k];
            geo.u_sr.col(k) = unit_direction(sc.sr, t);
            geo.u_pr.col(k) = unit_direction(sc.pr, t);
            geo.a_sr(k) = amplitude((sc.sr - t).norm());
            geo.a_pr(k) = amplitude((sc.pr - t).norm());
        }
        return geo;
    }

    CosineCache build_cosine_cache(const StackedVector &f, const BeamVector &w, const LinkGeometry &geo, double p,
                                   double kappa)
    {
        const auto n = geo.u_sr.cols();
        if (f.size() != 3 * n || w.size() != n)
            throw std::invalid_argument("build_cosine_cache: size mismatch between pointing, beamformer and geometry");
        if (!(kappa > 0.0))
            throw std::invalid_argument("build_cosine_cache: kappa must be positive");
        CosineCache cache;
        cache.p = p;
        cache.kappa = kappa;
        cache.u_sr = geo.u_sr;
        cache.u_pr = geo.u_pr;
        fill_cosines(f, geo.u_sr, kappa, cache.beta, cache.beta_reg, cache.beta_clamped);
        fill_cosines(f, geo.u_pr, kappa, cache.alpha, cache.alpha_reg, cache.alpha_clamped);
        cache.e = w.conjugate().cwiseProduct(geo.a_sr);
        cache.c = w.conjugate().cwiseProduct(geo.a_pr);
        return cache;
    }

    CosineCache build_cosine_cache(const StackedVector &f, const BeamVector &w, const Scenario &sc, double kappa)
    {
        return build_cosine_cache(f, w, LinkGeometry::from(sc), sc.pattern.p, kappa);
    }

    double objective_J(const CosineCache &cache) { return std::norm(weighted_sum(cache.e, cache.beta_reg, cache.p)); }

    double constraint_U(const CosineCache &cache) { return std::norm(weighted_sum(cache.c, cache.alpha_reg, cache.p)); }

    StackedVector grad_J(const CosineCache &cache)
    {
        return power_sum_gradient(cache.e, cache.beta_reg, cache.beta_clamped, cache.u_sr, cache.p);
    }

    StackedVector grad_U(const CosineCache &cache)
    {
        return power_sum_gradient(cache.c, cache.alpha_reg, cache.alpha_clamped, cache.u_pr, cache.p);
    }

    Eigen::MatrixXd hessian_U(const CosineCache &cache)
    {
        const int n = cache.size();
        const double p = cache.p;
        const cdouble total = weighted_sum(cache.c, cache.alpha_reg, p);
        Eigen::VectorXcd db(n); // dB/d(alpha_n)
        for (int k = 0; k < n; ++k)
            db(k) = cache.alpha_clamped[k] ? cdouble(0.0) : p * std::pow(cache.alpha_reg(k), p - 1.0) * cache.c(k);

        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(3 * n, 3 * n);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k)
            {
                double s = 2.0 * std::real(std::conj(db(i)) * db(k));
                if (i == k && !cache.alpha_clamped[k])
                    s += 2.0 * std::real(std::conj(total) * p * (p - 1.0) * std::pow(cache.alpha_reg(k), p - 2.0) *
                                         cache.c(k));
                h.block<3, 3>(3 * i, 3 * k) = s * cache.u_pr.col(i) * cache.u_pr.col(k).transpose();
            }
        return h;
    }

    double lipschitz_Lg(const Eigen::VectorXcd &c, double p, double kappa)
    {
        if (!(p > 0.0))
            throw std::invalid_argument("lipschitz_Lg: p must be positive (U does not depend on the pointing for p = 0)");
        if (!(kappa > 0.0))
            throw std::invalid_argument("lipschitz_Lg: kappa must be positive");
        const double c_max = c.cwiseAbs().maxCoeff();
        const double c_sum = c.cwiseAbs().sum();
        if (!(c_max > 0.0))
            throw std::invalid_argument("lipschitz_Lg: all coefficients are zero");
        const double shape = p >= 1.0 ? std::pow(1.0 + kappa, 2.0 * (p - 1.0)) : std::pow(kappa, p - 2.0);
        return 2.0 * p * (p + std::abs(p - 1.0)) * c_max * c_sum * shape;
    }

    double surrogate_J_tilde(const StackedVector &f, const StackedVector &anchor, const CosineCache &anchor_cache)
    {
        return objective_J(anchor_cache) + grad_J(anchor_cache).dot(f - anchor);
    }

    double quadratic_bound(const StackedVector &f, const StackedVector &anchor, double u_anchor,
                           const StackedVector &grad_anchor, double lipschitz)
    {
        const StackedVector d = f - anchor;
        return u_anchor + grad_anchor.dot(d) + 0.5 * lipschitz * d.squaredNorm();
    }

    double upper_U_tilde(const StackedVector &f, const StackedVector &anchor, const CosineCache &anchor_cache,
                         double lipschitz)
    {
        const double lg = lipschitz_Lg(anchor_cache);
        if (lipschitz < lg * (1.0 - 1e-12))
            throw std::invalid_argument("upper_U_tilde: L must not be smaller than L_g");
        return quadratic_bound(f, anchor, constraint_U(anchor_cache), grad_U(anchor_cache), lipschitz);
    }

    double signal_power(const BeamVector &w, const PointingMatrix &f, const Scenario &sc)
    {
        return std::norm(w.dot(st_channel_vector(f, sc.sr, sc)));
    }

    double leakage_power(const BeamVector &w, const PointingMatrix &f, const Scenario &sc)
    {
        return std::norm(w.dot(st_channel_vector(f, sc.pr, sc)));
    }

    ScaResult sca_pointing_opt(const BeamVector &w, const PointingMatrix &f0, const Scenario &sc, const ScaConfig &cfg)
    {
        sc.validate();
        if (w.size() != sc.n() || f0.size() != sc.n())
            throw std::invalid_argument("sca_pointing_opt: beamformer/pointing size does not match the ST array");
        if (!(cfg.lipschitz_scale >= 1.0))
            throw std::invalid_argument("sca_pointing_opt: lipschitz_scale must be >= 1 (L >= L_g)");
        if (!f0.is_feasible(sc.theta_max))
            throw InfeasibleStartError("sca_pointing_opt: start pointing violates the unit-norm or zenith constraint");

        const double gamma = sc.interference_limit;
        const double u0 = leakage_power(w, f0, sc);
        if (u0 > gamma * (1.0 + 1e-6))
            throw InfeasibleStartError("sca_pointing_opt: start pointing violates the interference limit");
        const double u_limit = std::max(gamma, u0);

        const LinkGeometry geo = LinkGeometry::from(sc);
        const double p = sc.pattern.p;
        StackedVector x = f0.stacked();
        double j_phys = signal_power(w, f0, sc);

        ScaResult res;
        {
            const CosineCache c0 = build_cosine_cache(x, w, geo, p, cfg.kappa);
            res.history.push_back({objective_J(c0), constraint_U(c0), j_phys, u0, 0.0, 0.0, 0.0, 0});
        }

        if (p == 0.0)
        {
            res.f = f0;
            res.converged = true;
            res.diagnostic = "isotropic-in-pointing pattern; nothing to optimize";
            return res;
        }

        const double cos_cap = std::cos(sc.theta_max);
        double l_prev = 0.0;
        for (int it = 1; it <= cfg.max_iterations; ++it)
        {
            res.iterations = it;
            const CosineCache cache = build_cosine_cache(x, w, geo, p, cfg.kappa);
            const StackedVector g = grad_J(cache);
            if (g.norm() == 0.0)
            {
                res.converged = true;
                res.diagnostic = "stationary point";
                break;
            }
            const StackedVector gu = grad_U(cache);
            const double u_model = constraint_U(cache);
            const double l_ceiling = cfg.lipschitz_scale * lipschitz_Lg(cache);
            double lip = l_ceiling;
            if (cfg.curvature == CurvaturePolicy::Adaptive)
                lip = std::min(l_ceiling, std::max(l_ceiling * cfg.curvature_floor, 0.25 * l_prev));

            bool accepted = false, stalled = false;
            double t = 1.0, j_new = 0.0, u_new = 0.0, radius = 0.0;
            int sub_iterations = 0;
            StackedVector y;
            auto physical = [&](const StackedVector &cand) {
                const PointingMatrix fy = PointingMatrix::from_stacked(cand);
                j_new = signal_power(w, fy, sc);
                u_new = leakage_power(w, fy, sc);
            };
            while (!accepted && !stalled)
            {
                const Ball ball = ball_from_U_tilde(x, gu, u_model, lip, std::max(gamma, u_model));
                SubproblemSpec spec{g, ball.center, ball.radius, x, cos_cap, cfg.delta};
                const SubproblemResult sub = solve_subproblem(spec, cfg.subproblem);
                radius = ball.radius;
                sub_iterations += sub.iterations;
                const StackedVector d = sub.x - x;
                const bool at_ceiling = lip >= l_ceiling;

                if (!at_ceiling)
                {
                    // Trial curvature: one full step, strict ascent required.
                    if (d.norm() > 0.0)
                    {
                        y = normalize_blocks(x + d);
                        physical(y);
                        if (u_new <= u_limit && j_new > j_phys)
                        {
                            accepted = true;
                            break;
                        }
                    }
                    lip = std::min(l_ceiling, 2.0 * lip);
                    continue;
                }

                if (d.norm() == 0.0)
                {
                    res.diagnostic = sub.converged ? "subproblem returned the anchor" : sub.diagnostic;
                    stalled = true;
                    break;
                }
                // The subproblem lives on the relaxed set ||f_n|| <= 1; pull the step back onto
                // unit boresights and shorten it until the physical limits hold again.
                t = 1.0;
                for (int k = 0; k <= cfg.max_backtracks; ++k, t *= 0.5)
                {
                    y = normalize_blocks(x + t * d);
                    physical(y);
                    if (u_new <= u_limit && j_new >= j_phys)
                    {
                        accepted = true;
                        break;
                    }
                }
                if (!accepted)
                {
                    res.diagnostic = "no feasible ascent step";
                    stalled = true;
                }
            }
            if (stalled)
            {
                res.converged = true;
                break;
            }
            l_prev = lip;

            const double rel = j_phys > 0.0 ? (j_new - j_phys) / j_phys : (j_new > 0.0 ? 1.0 : 0.0);
            x = std::move(y);
            j_phys = j_new;
            const CosineCache next = build_cosine_cache(x, w, geo, p, cfg.kappa);
            res.history.push_back({objective_J(next), constraint_U(next), j_new, u_new, lip, radius, t,
                                   sub_iterations});
            if (rel < cfg.rel_tol)
            {
                res.converged = true;
                break;
            }
        }
        res.f = PointingMatrix::from_stacked(x);
        return res;
    }

} // namespace rasim
