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

#include "rasim/oracle.hpp"

#include "rasim/pointing_opt.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace rasim::oracle
{
    namespace
    {
        constexpr double kPi = std::numbers::pi;
        constexpr double kDeg = kPi / 180.0;
    } // namespace

    GridSpec GridSpec::default_for(int n_antennas)
    {
        if (n_antennas <= 1)
            return {1.0 * kDeg, 2.0 * kDeg};
        return {4.0 * kDeg, 8.0 * kDeg};
    }

    std::vector<Vec3> cap_grid(double theta_max, const GridSpec &grid)
    {
        if (!(grid.zenith_step > 0.0) || !(grid.azimuth_step > 0.0))
            throw std::invalid_argument("cap_grid: resolutions must be positive");
        std::vector<double> zeniths;
        for (int k = 0; k * grid.zenith_step <= theta_max + 1e-12; ++k)
            zeniths.push_back(std::min(k * grid.zenith_step, theta_max));
        if (theta_max - zeniths.back() > 1e-12)
            zeniths.push_back(theta_max);
        const int n_az = std::max(1, static_cast<int>(std::lround(2.0 * kPi / grid.azimuth_step)));

        std::vector<Vec3> pts;
        pts.push_back(kZenithAxis);
        for (std::size_t k = 1; k < zeniths.size(); ++k)
            for (int j = 0; j < n_az; ++j)
                pts.push_back(orientation_to_pointing({zeniths[k], j * grid.azimuth_step}));
        return pts;
    }

    GridSearchResult grid_search_pointing(const BeamVector &w, const Scenario &sc, const GridSpec &grid)
    {
        const int n = sc.n();
        if (n > 2)
            throw std::invalid_argument("grid_search_pointing: only N <= 2 is tractable");
        if (w.size() != n)
            throw std::invalid_argument("grid_search_pointing: beamformer size mismatch");
        const auto pts = cap_grid(sc.theta_max, grid);
        const std::size_t k = pts.size();

        // Per-antenna contributions conj(w_n) h_n(f) to w^H h.
        std::vector<std::vector<cdouble>> to_sr(n, std::vector<cdouble>(k)), to_pr(n, std::vector<cdouble>(k));
        for (int a = 0; a < n; ++a)
            for (std::size_t i = 0; i < k; ++i)
            {
                to_sr[a][i] = std::conj(w(a)) * channel_coeff(pts[i], sc.st.positions[a], sc.sr, sc.pattern);
                to_pr[a][i] = std::conj(w(a)) * channel_coeff(pts[i], sc.st.positions[a], sc.pr, sc.pattern);
            }

        GridSearchResult res;
        // Rounding slack so a start point sitting exactly on the limit stays admissible.
        const double gamma = sc.interference_limit * (1.0 + 1e-9);
        double best = -1.0;
        std::size_t bi = 0, bj = 0;
        if (n == 1)
        {
            for (std::size_t i = 0; i < k; ++i)
            {
                const double u = std::norm(to_pr[0][i]);
                const double j = std::norm(to_sr[0][i]);
                if (u <= gamma && j > best)
                {
                    best = j;
                    bi = i;
                    res.u = u;
                }
            }
        }
        else
        {
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t l = 0; l < k; ++l)
                {
                    const double u = std::norm(to_pr[0][i] + to_pr[1][l]);
                    if (u > gamma)
                        continue;
                    const double j = std::norm(to_sr[0][i] + to_sr[1][l]);
                    if (j > best)
                    {
                        best = j;
                        bi = i;
                        bj = l;
                        res.u = u;
                    }
                }
        }
        res.evaluated = n == 1 ? k : k * k;
        if (best < 0.0)
            return res;
        res.found = true;
        res.j = best;
        Eigen::Matrix3Xd cols(3, n);
        cols.col(0) = pts[bi];
        if (n == 2)
            cols.col(1) = pts[bj];
        res.f = PointingMatrix(std::move(cols));
        return res;
    }

    NumericBeamformer numeric_beamformer_P2(const ChannelVector &h_ss, const ChannelVector &h_sp, double p_max,
                                            double gamma)
    {
        if (!(h_ss.norm() > 0.0))
            throw std::invalid_argument("numeric_beamformer_P2: h_SS is zero");
        if (!(p_max > 0.0) || !(gamma >= 0.0))
            throw std::invalid_argument("numeric_beamformer_P2: need P_max > 0 and Gamma >= 0");

        // Orthonormal basis of span{h_SP, h_SS} by Gram-Schmidt.
        const double sp_norm = h_sp.norm();
        ChannelVector q1, q2;
        if (sp_norm > 0.0)
        {
            q1 = h_sp / sp_norm;
            const ChannelVector r = h_ss - q1.dot(h_ss) * q1;
            if (r.norm() > 1e-12 * h_ss.norm())
                q2 = r / r.norm();
        }
        else
            q2 = h_ss / h_ss.norm();

        // Coefficients of h_SS in the basis; phases of w are matched to them so that
        // w^H h_SS = sqrt(P) (cos t |b1| + sin t |b2|).
        const cdouble b1 = q1.size() ? q1.dot(h_ss) : cdouble(0.0);
        const cdouble b2 = q2.size() ? q2.dot(h_ss) : cdouble(0.0);
        auto beam = [&](double t) {
            BeamVector w = BeamVector::Zero(h_ss.size());
            if (q1.size())
                w += std::cos(t) * std::polar(1.0, std::arg(b1)) * q1;
            if (q2.size())
                w += std::sin(t) * std::polar(1.0, std::arg(b2)) * q2;
            return BeamVector(std::sqrt(p_max) * w);
        };
        auto objective = [&](double t) { return p_max * std::pow(std::cos(t) * std::abs(b1) + std::sin(t) * std::abs(b2), 2); };

        // Interference P cos^2(t) ||h_SP||^2 <= Gamma restricts t from below.
        double t_lo = 0.0;
        if (q1.size())
        {
            const double c = std::sqrt(gamma / (p_max * sp_norm * sp_norm));
            t_lo = c >= 1.0 ? 0.0 : std::acos(c);
        }
        double t_hi = q2.size() ? kPi / 2.0 : t_lo;

        if (!q2.size())
        {
            // h_SS parallel to h_SP: the only freedom is the power, capped by Gamma.
            const double scale = q1.size() ? std::min(1.0, std::sqrt(gamma / (p_max * sp_norm * sp_norm))) : 1.0;
            BeamVector w = std::sqrt(p_max) * scale * std::polar(1.0, std::arg(b1)) * q1;
            return {w, std::norm(w.dot(h_ss))};
        }

        const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
        double a = t_lo, b = t_hi;
        double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
        double fc = objective(c), fd = objective(d);
        while (b - a > 1e-12)
        {
            if (fc >= fd)
            {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = objective(c);
            }
            else
            {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = objective(d);
            }
        }
        double t_best = 0.5 * (a + b);
        for (double t : {t_lo, t_hi})
            if (objective(t) > objective(t_best))
                t_best = t;
        const BeamVector w = beam(std::max(t_best, t_lo));
        return {w, std::norm(w.dot(h_ss))};
    }

    StackedVector finite_diff_grad(const ScalarField &fn, const StackedVector &x, double h)
    {
        if (!(h > 0.0))
            throw std::invalid_argument("finite_diff_grad: step must be positive");
        StackedVector g(x.size());
        StackedVector xp = x, xm = x;
        for (Eigen::Index k = 0; k < x.size(); ++k)
        {
            xp(k) = x(k) + h;
            xm(k) = x(k) - h;
            g(k) = (fn(xp) - fn(xm)) / (2.0 * h);
            xp(k) = xm(k) = x(k);
        }
        return g;
    }

    Eigen::MatrixXd finite_diff_hessian(const VectorField &grad, const StackedVector &x, double h)
    {
        const auto n = x.size();
        Eigen::MatrixXd hess(n, n);
        StackedVector xp = x, xm = x;
        for (Eigen::Index k = 0; k < n; ++k)
        {
            xp(k) = x(k) + h;
            xm(k) = x(k) - h;
            hess.col(k) = (grad(xp) - grad(xm)) / (2.0 * h);
            xp(k) = xm(k) = x(k);
        }
        return 0.5 * (hess + hess.transpose());
    }

    double symmetric_spectral_norm(const Eigen::MatrixXd &m)
    {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
        return es.eigenvalues().cwiseAbs().maxCoeff();
    }

    PointingMatrix sample_pointing(int n, double theta_max, std::mt19937_64 &rng, const Eigen::Matrix3Xd *front_of,
                                   double min_cos)
    {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const double cmin = std::cos(theta_max);
        Eigen::Matrix3Xd cols(3, n);
        for (int k = 0; k < n; ++k)
        {
            for (int tries = 0;; ++tries)
            {
                const double cz = 1.0 - unit(rng) * (1.0 - cmin);
                const double az = 2.0 * kPi * unit(rng);
                const double sz = std::sqrt(std::max(0.0, 1.0 - cz * cz));
                const Vec3 f(sz * std::cos(az), sz * std::sin(az), cz);
                if (!front_of || f.dot(front_of->col(k)) >= min_cos)
                {
                    cols.col(k) = f;
                    break;
                }
                if (tries > 100000)
                    throw std::runtime_error("sample_pointing: no boresight in the cap satisfies the cosine bound");
            }
        }
        return PointingMatrix(std::move(cols));
    }

    LipschitzEstimate empirical_lipschitz(const BeamVector &w, const Scenario &sc, int samples, std::uint64_t seed,
                                          double kappa, bool unclamped_only)
    {
        if (samples < 2)
            throw std::invalid_argument("empirical_lipschitz: need at least two samples");
        const LinkGeometry geo = LinkGeometry::from(sc);
        std::mt19937_64 rng(seed);
        const Eigen::Matrix3Xd *front = unclamped_only ? &geo.u_pr : nullptr;
        auto grad = [&](const StackedVector &x) {
            return grad_U(build_cosine_cache(x, w, geo, sc.pattern.p, kappa));
        };
        LipschitzEstimate est;
        for (int s = 0; s < samples; ++s)
        {
            const StackedVector x = sample_pointing(sc.n(), sc.theta_max, rng, front, 1e-9).stacked();
            const StackedVector y = sample_pointing(sc.n(), sc.theta_max, rng, front, 1e-9).stacked();
            const double dist = (y - x).norm();
            if (!(dist > 0.0))
                continue;
            est.max_ratio = std::max(est.max_ratio, (grad(y) - grad(x)).norm() / dist);
            ++est.pairs;
        }
        return est;
    }

    double pattern_sphere_integral(const GainPattern &pat, int zenith_cells, int azimuth_cells)
    {
        const double dz = kPi / zenith_cells, da = 2.0 * kPi / azimuth_cells;
        double total = 0.0;
        for (int i = 0; i < zenith_cells; ++i)
        {
            const double z = (i + 0.5) * dz;
            double ring = 0.0;
            for (int j = 0; j < azimuth_cells; ++j)
                ring += directional_gain(kZenithAxis, orientation_to_pointing({z, (j + 0.5) * da}), pat);
            total += ring * std::sin(z) * dz * da;
        }
        return total;
    }

    SubproblemReference grid_subproblem(const SubproblemSpec &spec, double theta_max, double resolution)
    {
        spec.validate();
        const int n = spec.n();
        if (n > 2)
            throw std::invalid_argument("grid_subproblem: only N <= 2 is tractable");
        const auto pts = cap_grid(theta_max, {resolution, resolution});

        struct Cand
        {
            double dist2;
            double value;
            Vec3 f;
        };
        std::vector<std::vector<Cand>> per(n);
        for (int k = 0; k < n; ++k)
        {
            const Vec3 a = spec.anchor.segment<3>(3 * k);
            const Vec3 o = spec.center.segment<3>(3 * k);
            const Vec3 g = spec.gradient.segment<3>(3 * k);
            for (const auto &f : pts)
            {
                if (f.z() < spec.cos_theta_max - 1e-12 || a.dot(f) < 1.0 - spec.delta)
                    continue;
                per[k].push_back({(f - o).squaredNorm(), g.dot(f), f});
            }
        }

        SubproblemReference ref;
        const double r2 = spec.radius * spec.radius;
        double best = -std::numeric_limits<double>::infinity();
        if (n == 1)
        {
            for (const auto &c : per[0])
                if (c.dist2 <= r2 && c.value > best)
                {
                    best = c.value;
                    ref.x = c.f;
                }
            ref.evaluated = per[0].size();
        }
        else
        {
            // Sort the second antenna by distance; a prefix maximum then answers
            // "best second block within the remaining radius" by binary search.
            auto &second = per[1];
            std::sort(second.begin(), second.end(), [](const Cand &a, const Cand &b) { return a.dist2 < b.dist2; });
            std::vector<std::size_t> arg(second.size());
            for (std::size_t i = 0; i < second.size(); ++i)
                arg[i] = (i == 0 || second[i].value > second[arg[i - 1]].value) ? i : arg[i - 1];
            for (const auto &c : per[0])
            {
                const double rem = r2 - c.dist2;
                if (rem < 0.0)
                    continue;
                auto it = std::upper_bound(second.begin(), second.end(), rem,
                                           [](double v, const Cand &x) { return v < x.dist2; });
                if (it == second.begin())
                    continue;
                const Cand &s = second[arg[static_cast<std::size_t>(it - second.begin()) - 1]];
                if (c.value + s.value > best)
                {
                    best = c.value + s.value;
                    ref.x.resize(6);
                    ref.x << c.f, s.f;
                }
            }
            ref.evaluated = per[0].size() * per[1].size();
        }
        ref.found = std::isfinite(best);
        ref.objective = ref.found ? best : 0.0;
        return ref;
    }

    namespace
    {
        struct Barrier
        {
            const SubproblemSpec &spec;
            std::vector<Vec3> normals;
            std::vector<double> offsets;

            explicit Barrier(const SubproblemSpec &s) : spec(s)
            {
                for (int k = 0; k < s.n(); ++k)
                {
                    const Vec3 a = s.anchor.segment<3>(3 * k);
                    normals.push_back(a / a.norm());
                    offsets.push_back((1.0 - s.delta) / a.norm());
                }
            }

            int count() const { return 1 + 3 * spec.n(); }

            // Smallest constraint slack; all slacks must be > 0 inside.
            double min_slack(const StackedVector &x) const
            {
                double m = spec.radius * spec.radius - (x - spec.center).squaredNorm();
                for (int k = 0; k < spec.n(); ++k)
                {
                    const Vec3 y = x.segment<3>(3 * k);
                    m = std::min({m, 1.0 - y.squaredNorm(), y.z() - spec.cos_theta_max, normals[k].dot(y) - offsets[k]});
                }
                return m;
            }

            // Value, gradient and Hessian of -t g^T x - sum log(slack).
            double eval(const StackedVector &x, double t, StackedVector *grad, Eigen::MatrixXd *hess) const
            {
                const auto dim = x.size();
                double val = -t * spec.gradient.dot(x);
                if (grad)
                    *grad = -t * spec.gradient;
                if (hess)
                    hess->setZero(dim, dim);

                const StackedVector dx = x - spec.center;
                const double sb = spec.radius * spec.radius - dx.squaredNorm();
                val -= std::log(sb);
                if (grad)
                    *grad += 2.0 * dx / sb;
                if (hess)
                {
                    *hess += 4.0 * dx * dx.transpose() / (sb * sb);
                    hess->diagonal().array() += 2.0 / sb;
                }
                for (int k = 0; k < spec.n(); ++k)
                {
                    const Vec3 y = x.segment<3>(3 * k);
                    const double su = 1.0 - y.squaredNorm();
                    const double sz = y.z() - spec.cos_theta_max;
                    const double st = normals[k].dot(y) - offsets[k];
                    val -= std::log(su) + std::log(sz) + std::log(st);
                    if (grad)
                    {
                        grad->segment<3>(3 * k) += 2.0 * y / su - kZenithAxis / sz - normals[k] / st;
                    }
                    if (hess)
                    {
                        auto blk = hess->block<3, 3>(3 * k, 3 * k);
                        blk += 4.0 * y * y.transpose() / (su * su);
                        blk.diagonal().array() += 2.0 / su;
                        blk += kZenithAxis * kZenithAxis.transpose() / (sz * sz);
                        blk += normals[k] * normals[k].transpose() / (st * st);
                    }
                }
                return val;
            }
        };
    } // namespace

    SubproblemReference barrier_subproblem(const SubproblemSpec &spec)
    {
        spec.validate();
        const Barrier bar(spec);
        SubproblemReference ref;

        StackedVector x;
        bool interior = false;
        for (double shrink : {1e-4, 1e-3, 1e-2, 5e-2})
        {
            x = (1.0 - shrink) * spec.anchor;
            if (bar.min_slack(x) > 0.0)
            {
                interior = true;
                break;
            }
        }
        if (!interior)
            return ref;

        const double gnorm = std::max(spec.gradient.norm(), 1e-300);
        const int m = bar.count();
        double t = 1.0 / gnorm;
        StackedVector grad;
        Eigen::MatrixXd hess;
        for (int outer = 0; outer < 80 && m / t > 1e-14 * gnorm; ++outer)
        {
            for (int newton = 0; newton < 200; ++newton)
            {
                const double f0 = bar.eval(x, t, &grad, &hess);
                const StackedVector step = hess.ldlt().solve(-grad);
                const double decrement = -grad.dot(step);
                if (decrement / 2.0 < 1e-12)
                    break;
                double s = 1.0;
                while (s > 1e-20)
                {
                    const StackedVector xn = x + s * step;
                    if (bar.min_slack(xn) > 0.0 && bar.eval(xn, t, nullptr, nullptr) <= f0 - 0.25 * s * decrement)
                        break;
                    s *= 0.5;
                }
                if (s <= 1e-20)
                    break;
                x += s * step;
            }
            t *= 10.0;
        }
        ref.x = x;
        ref.objective = spec.gradient.dot(x);
        ref.found = true;
        return ref;
    }

} // namespace rasim::oracle
