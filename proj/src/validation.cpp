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

#include "rasim/validation.hpp"

#include "rasim/beamforming.hpp"
#include "rasim/errors.hpp"
#include "rasim/oracle.hpp"
#include "rasim/pointing_opt.hpp"
#include "rasim/subproblem.hpp"

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

namespace rasim
{
    namespace
    {
        constexpr double kPi = std::numbers::pi;
        constexpr double kDeg = kPi / 180.0;

        double uniform(std::mt19937_64 &rng, double a, double b)
        {
            return a + (b - a) * std::generate_canonical<double, 53>(rng);
        }

        BeamVector random_beam(int n, double power, std::mt19937_64 &rng)
        {
            std::normal_distribution<double> g(0.0, 1.0);
            BeamVector w(n);
            for (int k = 0; k < n; ++k)
                w(k) = cdouble(g(rng), g(rng));
            return std::sqrt(power) * w / w.norm();
        }

        // Random SR/PR placement around the configured scenario.
        RunConfig random_run(const RunConfig &base, std::mt19937_64 &rng, int n, double p)
        {
            RunConfig c = base;
            c.n_antennas = n;
            c.directivity_p = p;
            c.sr_angle_deg = uniform(rng, 20.0, 160.0);
            c.sr_distance_m = uniform(rng, 30.0, 80.0);
            const double a = uniform(rng, 95.0, 175.0) * kDeg;
            const double d = uniform(rng, 25.0, 60.0);
            c.pr_position_m = Vec3(d * std::cos(a), 0.0, d * std::sin(a));
            c.p_max_dbm = uniform(rng, 15.0, 30.0);
            return c;
        }

        Beamformer closed_form_at(const PointingMatrix &f, const Scenario &sc)
        {
            return optimal_beamformer(st_channel_vector(f, sc.sr, sc), st_channel_vector(f, sc.pr, sc), sc.p_max,
                                      sc.interference_limit);
        }

        // Unit boresight near `f`: normalized Gaussian perturbation of size ~ scale, kept inside the cap.
        StackedVector perturb(const StackedVector &f, double scale, double cos_cap, std::mt19937_64 &rng)
        {
            std::normal_distribution<double> g(0.0, 1.0);
            StackedVector y = f;
            for (Eigen::Index k = 0; k < f.size() / 3; ++k)
            {
                for (int tries = 0; tries < 1000; ++tries)
                {
                    Vec3 v = f.segment<3>(3 * k) + scale * Vec3(g(rng), g(rng), g(rng));
                    v.normalize();
                    if (v.z() >= cos_cap)
                    {
                        y.segment<3>(3 * k) = v;
                        break;
                    }
                }
            }
            return y;
        }

        std::string fmt(double v) { return format_number(v); }

        CheckResult start(std::string id, std::string description)
        {
            CheckResult r;
            r.id = std::move(id);
            r.description = std::move(description);
            return r;
        }

        // ---------------------------------------------------------------- checks

        CheckResult check_gradient(const RunConfig &cfg, const ValidationOptions &opt)
        {
            CheckResult r = start("gradient", "analytic grad J, grad U vs central differences (h = 1e-6), N = 4, "
                                      "p in {1,2,4}, 20 interior points each; max relative error < 1e-5");
            r.threshold = 1e-5;
            std::mt19937_64 rng(opt.seed ^ 0x67726164ULL);
            double worst = 0.0;
            int points = 0;
            for (double p : {1.0, 2.0, 4.0})
            {
                RunConfig c = cfg;
                c.n_antennas = 4;
                c.directivity_p = p;
                const Scenario sc = c.scenario();
                const LinkGeometry geo = LinkGeometry::from(sc);
                const double kappa = cfg.algo.sca.kappa;
                for (int i = 0; i < 20; ++i)
                {
                    // Interior: every SR cosine and every |PR cosine| at least 0.05 away from the kink.
                    PointingMatrix f;
                    for (int tries = 0;; ++tries)
                    {
                        f = oracle::sample_pointing(sc.n(), sc.theta_max, rng, &geo.u_sr, 0.05);
                        const CosineCache cc = build_cosine_cache(f.stacked(), BeamVector::Ones(sc.n()), geo, p, kappa);
                        if (cc.alpha.cwiseAbs().minCoeff() >= 0.05)
                            break;
                        if (tries > 10000)
                            throw SolverError("gradient check: no interior sample found");
                    }
                    const BeamVector w = closed_form_at(f, sc).w;
                    const StackedVector x = f.stacked();
                    const CosineCache cache = build_cosine_cache(x, w, geo, p, kappa);
                    const double corrupt = 1.0 + opt.gradient_corruption;
                    const StackedVector gj = corrupt * grad_J(cache), gu = corrupt * grad_U(cache);
                    const StackedVector fj = oracle::finite_diff_grad(
                        [&](const StackedVector &y) { return objective_J(build_cosine_cache(y, w, geo, p, kappa)); }, x,
                        1e-6);
                    const StackedVector fu = oracle::finite_diff_grad(
                        [&](const StackedVector &y) { return constraint_U(build_cosine_cache(y, w, geo, p, kappa)); },
                        x, 1e-6);
                    const double ej = (gj - fj).norm() / std::max(fj.norm(), 1e-300);
                    const double eu = (gu - fu).norm() / std::max(fu.norm(), 1e-300);
                    worst = std::max({worst, ej, eu});
                    ++points;
                }
            }
            r.metric = worst;
            r.passed = worst < r.threshold;
            r.detail = std::to_string(points) + " points, max relative error " + fmt(worst);
            return r;
        }

        CheckResult check_lipschitz(const RunConfig &cfg, const ValidationOptions &opt)
        {
            CheckResult r = start("lipschitz", "max ||grad U(y) - grad U(x)|| / ||y - x|| over 1000 feasible pairs and "
                                       "||numeric Hessian|| at 20 points, both <= L_g, p in {1,4}; metric = "
                                       "worst ratio to L_g");
            r.threshold = 1.0;
            std::mt19937_64 rng(opt.seed ^ 0x6c697073ULL);
            double worst = 0.0;
            std::ostringstream detail;
            for (double p : {1.0, 4.0})
            {
                RunConfig c = cfg;
                c.directivity_p = p;
                const Scenario sc = c.scenario();
                const LinkGeometry geo = LinkGeometry::from(sc);
                const double kappa = cfg.algo.sca.kappa;
                const std::vector<BeamVector> beams{closed_form_at(PointingMatrix::uniform(sc.n()), sc).w,
                                                    random_beam(sc.n(), sc.p_max, rng)};
                // p = 1 has a gradient jump where a PR cosine crosses zero, so pairs stay on the smooth side.
                const bool smooth_only = p < 2.0;
                for (const auto &w : beams)
                {
                    const double lg = lipschitz_Lg(build_cosine_cache(PointingMatrix::uniform(sc.n()).stacked(), w,
                                                                      geo, p, kappa));
                    const auto est = oracle::empirical_lipschitz(w, sc, 1000, rng(), kappa, smooth_only);
                    double hess = 0.0;
                    for (int i = 0; i < 20; ++i)
                    {
                        const StackedVector x =
                            oracle::sample_pointing(sc.n(), sc.theta_max, rng, smooth_only ? &geo.u_pr : nullptr, 0.05)
                                .stacked();
                        const Eigen::MatrixXd h = oracle::finite_diff_hessian(
                            [&](const StackedVector &y) { return grad_U(build_cosine_cache(y, w, geo, p, kappa)); }, x,
                            1e-6);
                        hess = std::max(hess, oracle::symmetric_spectral_norm(h));
                    }
                    worst = std::max({worst, est.max_ratio / lg, hess / lg});
                    detail << "p=" << p << ": ratio/L_g " << fmt(est.max_ratio / lg) << " (" << est.pairs
                           << " pairs), hessian/L_g " << fmt(hess / lg) << "; ";
                }
            }
            r.metric = worst;
            r.passed = worst <= r.threshold;
            r.detail = detail.str();
            return r;
        }

        CheckResult check_beamformer(const RunConfig &, const ValidationOptions &opt)
        {
            CheckResult r = start("beamformer", "closed-form beamformer vs 2-D subspace search, 200 instances, "
                                        "N in {2,4,8}: relative gap <= 1e-6, constrained branch |w^H h_SP|^2 = Gamma "
                                        "within 1e-10, power and interference feasible");
            r.threshold = 1e-6;
            std::mt19937_64 rng(opt.seed ^ 0x6265616dULL);
            std::normal_distribution<double> g(0.0, 1.0);
            double gap = 0.0, eq = 0.0;
            int infeasible = 0, constrained = 0;
            for (int i = 0; i < 200; ++i)
            {
                const int n = std::array{2, 4, 8}[i % 3];
                ChannelVector hss(n), hsp(n);
                for (int k = 0; k < n; ++k)
                {
                    hss(k) = 1e-3 * cdouble(g(rng), g(rng));
                    hsp(k) = 1e-4 * cdouble(g(rng), g(rng));
                }
                const double p = uniform(rng, 0.03, 1.0);
                const double crit = p * std::norm(hsp.dot(hss)) / hss.squaredNorm();
                const double gamma = crit * std::pow(10.0, uniform(rng, -2.0, 1.0));
                const Beamformer bf = optimal_beamformer(hss, hsp, p, gamma);
                const auto ref = oracle::numeric_beamformer_P2(hss, hsp, p, gamma);
                const double obj = std::norm(bf.w.dot(hss));
                gap = std::max(gap, (ref.objective - obj) / ref.objective);
                const double interf = interference_power(bf.w, hsp);
                if (bf.w.squaredNorm() > p * (1.0 + 1e-12) || interf > gamma * (1.0 + 1e-10))
                    ++infeasible;
                if (bf.branch == BeamBranch::Constrained)
                {
                    ++constrained;
                    eq = std::max(eq, std::abs(interf - gamma) / gamma);
                }
            }
            r.metric = gap;
            r.passed = gap <= 1e-6 && eq <= 1e-10 && infeasible == 0;
            r.detail = "max gap " + fmt(gap) + ", constrained-branch equality error " + fmt(eq) + " over " +
                       std::to_string(constrained) + " instances, infeasible outputs " + std::to_string(infeasible);
            return r;
        }

        CheckResult check_majorization(const RunConfig &cfg, const ValidationOptions &opt)
        {
            CheckResult r = start("majorization", "quadratic bound equals U at the anchor and upper-bounds U at 100 "
                                          "feasible points (50 global, 50 local) per instance, 20 instances; "
                                          "metric = max normalized excess U - bound");
            r.threshold = 1e-12;
            std::mt19937_64 rng(opt.seed ^ 0x6d616a6fULL);
            double excess = 0.0;
            int untight = 0, violations = 0;
            for (int i = 0; i < 20; ++i)
            {
                const int n = std::array{2, 4, 8}[i % 3];
                const double p = std::array{1.0, 2.0, 4.0}[(i / 3) % 3];
                const Scenario sc = random_run(cfg, rng, n, p).scenario();
                const LinkGeometry geo = LinkGeometry::from(sc);
                const double kappa = cfg.algo.sca.kappa;
                const double cos_cap = std::cos(sc.theta_max);
                const BeamVector w = random_beam(n, sc.p_max, rng);
                const StackedVector fi = oracle::sample_pointing(n, sc.theta_max, rng).stacked();
                const CosineCache ci = build_cosine_cache(fi, w, geo, p, kappa);
                const double ui = constraint_U(ci);
                const StackedVector gi = grad_U(ci);
                const double lip = opt.lipschitz_scale * lipschitz_Lg(ci);
                if (quadratic_bound(fi, fi, ui, gi, lip) != ui)
                    ++untight;
                for (int k = 0; k < 100; ++k)
                {
                    const StackedVector y =
                        k < 50 ? oracle::sample_pointing(n, sc.theta_max, rng).stacked()
                               : perturb(fi, std::pow(10.0, uniform(rng, -4.0, -0.5)), cos_cap, rng);
                    const double u = constraint_U(build_cosine_cache(y, w, geo, p, kappa));
                    const double bound = quadratic_bound(y, fi, ui, gi, lip);
                    const StackedVector d = y - fi;
                    const double scale = ui + std::abs(gi.dot(d)) + 0.5 * lip * d.squaredNorm() + u;
                    const double e = (u - bound) / scale;
                    excess = std::max(excess, e);
                    if (e > r.threshold)
                        ++violations;
                }
            }
            r.metric = excess;
            r.passed = untight == 0 && violations == 0;
            r.detail = "anchor mismatches " + std::to_string(untight) + ", bound violations " +
                       std::to_string(violations) + " of 2000, max normalized excess " + fmt(excess) +
                       (opt.lipschitz_scale != 1.0 ? ", L scaled by " + fmt(opt.lipschitz_scale) : "");
            return r;
        }

        CheckResult check_subproblem(const RunConfig &cfg, const ValidationOptions &opt)
        {
            CheckResult r = start("subproblem", "per-iteration program, 50 random N = 2 instances: objective not below "
                                        "the 0.5 deg grid optimum by more than 1e-4 relative, within 1e-4 of a "
                                        "log-barrier reference, feasibility violation <= 1e-8");
            r.threshold = 1e-4;
            std::mt19937_64 rng(opt.seed ^ 0x73756270ULL);
            double grid_short = 0.0, barrier_gap = 0.0, violation = 0.0;
            int grid_found = 0, ball_active = 0;
            for (int i = 0; i < 50; ++i)
            {
                const double p = std::array{1.0, 2.0, 4.0}[i % 3];
                const Scenario sc = random_run(cfg, rng, 2, p).scenario();
                const LinkGeometry geo = LinkGeometry::from(sc);
                const BeamVector w = random_beam(2, sc.p_max, rng);
                const StackedVector fi = oracle::sample_pointing(2, sc.theta_max, rng).stacked();
                const CosineCache ci = build_cosine_cache(fi, w, geo, p, cfg.algo.sca.kappa);
                const double ui = constraint_U(ci);
                const double gamma = ui * (1.0 + std::pow(10.0, uniform(rng, -3.0, 0.5)));
                const double lip = lipschitz_Lg(ci) * std::pow(10.0, uniform(rng, -6.0, 0.0));
                const Ball ball = ball_from_U_tilde(fi, grad_U(ci), ui, lip, gamma);
                const SubproblemSpec spec{grad_J(ci), ball.center, ball.radius, fi, std::cos(sc.theta_max),
                                          cfg.algo.sca.delta};

                const SubproblemResult sol = solve_subproblem(spec, cfg.algo.sca.subproblem);
                if (sol.multiplier > 0.0)
                    ++ball_active;
                violation = std::max(violation, feasibility_report(spec, sol.x).max_violation());
                const auto grid = oracle::grid_subproblem(spec, sc.theta_max, 0.5 * kDeg);
                if (grid.found)
                {
                    ++grid_found;
                    grid_short = std::max(grid_short, (grid.objective - sol.objective) / std::abs(grid.objective));
                }
                const auto bar = oracle::barrier_subproblem(spec);
                if (bar.found)
                    barrier_gap = std::max(barrier_gap, std::abs(bar.objective - sol.objective) / std::abs(bar.objective));
            }
            r.metric = std::max(grid_short, barrier_gap);
            r.passed = grid_short <= 1e-4 && barrier_gap <= 1e-4 && violation <= 1e-8;
            r.detail = "grid shortfall " + fmt(grid_short) + " (" + std::to_string(grid_found) +
                       " with a feasible grid point), barrier gap " + fmt(barrier_gap) + ", max violation " +
                       fmt(violation) + ", ball active in " + std::to_string(ball_active);
            return r;
        }

        CheckResult check_sca_grid(const RunConfig &cfg, const ValidationOptions &opt)
        {
            CheckResult r = start("sca_grid", "SCA pointing for N = 1 at 10 random SR placements in the reachable cone "
                                              "with a slack interference limit vs the 1 deg grid optimum; metric = "
                                              "min J_sca / J_grid >= 0.99. Placements with the limit active at the "
                                              "start are reported, not gated");
            r.threshold = 0.99;
            r.lower_is_better = false;
            std::mt19937_64 rng(opt.seed ^ 0x73636167ULL);
            const PointingMatrix f0 = PointingMatrix::uniform(1);
            auto ratio_for = [&](const Scenario &sc, const BeamVector &w) {
                const ScaResult sca = sca_pointing_opt(w, f0, sc, cfg.algo.sca);
                const auto grid = oracle::grid_search_pointing(w, sc, oracle::GridSpec::default_for(1));
                return grid.found ? signal_power(w, sca.f, sc) / grid.j : 0.0;
            };
            double worst = std::numeric_limits<double>::infinity();
            double active_worst = std::numeric_limits<double>::infinity();
            int active_ok = 0;
            std::ostringstream detail;
            for (int i = 0; i < 10; ++i)
            {
                RunConfig c = cfg;
                c.n_antennas = 1;
                c.sr_angle_deg = uniform(rng, 90.0 - cfg.theta_max_deg, 90.0 + cfg.theta_max_deg);
                c.sr_distance_m = uniform(rng, 20.0, 80.0);
                Scenario sc = c.scenario();
                // Slack: even boresight toward the PR at full power stays below the limit.
                const BeamVector w = BeamVector::Constant(1, cdouble(std::sqrt(sc.p_max), 0.0));
                const double d = (sc.pr - sc.st.positions[0]).norm();
                sc.interference_limit =
                    10.0 * sc.p_max * sc.pattern.aperture * sc.pattern.g0 / (4.0 * kPi * d * d);
                const double ratio = ratio_for(sc, w);
                worst = std::min(worst, ratio);
                detail << fmt(std::round(c.sr_angle_deg * 10) / 10) << "deg:" << fmt(std::round(ratio * 1e5) / 1e5)
                       << ' ';
            }
            for (int i = 0; i < 10; ++i)
            {
                RunConfig c = cfg;
                c.n_antennas = 1;
                c.sr_angle_deg = uniform(rng, 15.0, 165.0);
                c.sr_distance_m = uniform(rng, 20.0, 80.0);
                const Scenario sc = c.scenario();
                const double ratio = ratio_for(sc, closed_form_at(f0, sc).w);
                active_worst = std::min(active_worst, ratio);
                active_ok += ratio >= r.threshold;
            }
            r.metric = worst;
            r.passed = worst >= r.threshold;
            r.detail = "J_sca / J_grid by SR angle: " + detail.str() + "| limit active at start (informational): " +
                       std::to_string(active_ok) + "/10 reach 0.99, worst " + fmt(active_worst);
            return r;
        }

        CheckResult check_ao(const RunConfig &cfg, const ValidationOptions &opt)
        {
            CheckResult r = start("ao_monotone", "alternating optimization on the default and 20 random scenarios: SINR "
                                         "trace non-decreasing within 1e-9 relative, converged within 50 outer "
                                         "iterations at epsilon = 1e-3, interference <= Gamma (1 + 1e-6) at every "
                                         "iterate; metric = max relative SINR decrease");
            r.threshold = 1e-9;
            std::mt19937_64 rng(opt.seed ^ 0x616f6d6fULL);
            AlgoConfig algo = cfg.algo;
            algo.epsilon = 1e-3;
            algo.max_outer = 50;
            double decrease = 0.0, worst_interf = 0.0;
            int not_converged = 0, max_iter = 0;
            for (int i = 0; i <= 20; ++i)
            {
                const Scenario sc =
                    i == 0 ? cfg.scenario() : random_run(cfg, rng, std::array{2, 4, 8}[i % 3], cfg.directivity_p).scenario();
                const AoResult ao = alternating_optimize(sc, algo);
                if (!ao.converged || !ao.diagnostic.empty())
                    ++not_converged;
                max_iter = std::max(max_iter, ao.iterations);
                for (std::size_t k = 0; k < ao.trace.size(); ++k)
                {
                    worst_interf = std::max(worst_interf, ao.trace[k].interference / sc.interference_limit);
                    if (k > 0)
                        decrease = std::max(decrease, (ao.trace[k - 1].sinr - ao.trace[k].sinr) / ao.trace[k - 1].sinr);
                }
            }
            r.metric = decrease;
            r.passed = decrease <= 1e-9 && not_converged == 0 && max_iter <= 50 && worst_interf <= 1.0 + 1e-6;
            r.detail = "max decrease " + fmt(decrease) + ", max outer iterations " + std::to_string(max_iter) +
                       ", unconverged " + std::to_string(not_converged) + ", max interference / Gamma " +
                       fmt(worst_interf);
            return r;
        }

        CheckResult check_ordering(const RunConfig &cfg, const ValidationOptions &)
        {
            CheckResult r = start("scheme_ordering", "power and antenna sweeps: ra >= fixed, ra >= isotropic, random <= "
                                             "fixed at every point; every scheme non-decreasing in P_max and N; "
                                             "metric = number of violated comparisons");
            r.threshold = 0.0;
            RunConfig c = cfg;
            c.schemes.assign(std::begin(kAllSchemes), std::end(kAllSchemes));
            int bad = 0;
            std::ostringstream detail;
            for (const bool power : {true, false})
            {
                const SweepResult sw = power ? sweep_power(c) : sweep_antennas(c);
                const char *axis = power ? "P_max" : "N";
                if (!sw.ok())
                {
                    bad += static_cast<int>(sw.failures.size());
                    detail << axis << ": " << sw.failures.size() << " failed points; ";
                }
                std::map<std::string, std::vector<double>> by;
                for (const auto &row : sw.rows)
                    by[row.scheme].push_back(row.sinr_linear);
                const auto &ra = by["ra"], &fx = by["fixed"], &rn = by["random"], &iso = by["isotropic"];
                const std::size_t pts = std::min({ra.size(), fx.size(), rn.size(), iso.size()});
                const auto ge = [](double a, double b) { return a >= b * (1.0 - 1e-9); };
                for (std::size_t k = 0; k < pts; ++k)
                {
                    if (!ge(ra[k], fx[k]))
                        ++bad, detail << axis << "[" << k << "] ra < fixed; ";
                    if (!ge(ra[k], iso[k]))
                        ++bad, detail << axis << "[" << k << "] ra < isotropic; ";
                    if (!ge(fx[k], rn[k]))
                        ++bad, detail << axis << "[" << k << "] random > fixed; ";
                }
                for (const auto &[name, v] : by)
                    for (std::size_t k = 1; k < v.size(); ++k)
                        if (!ge(v[k], v[k - 1]))
                            ++bad, detail << axis << " " << name << " decreases at index " << k << "; ";
                detail << axis << " points " << pts << "; ";
            }
            r.metric = bad;
            r.passed = bad == 0;
            r.detail = detail.str();
            return r;
        }

        CheckResult check_pattern(const RunConfig &cfg, const ValidationOptions &)
        {
            CheckResult r = start("gain_pattern", "probe-ring gain: ra above fixed at the SR angle and below fixed at the "
                                          "PR angle; metric = smaller of the two margins in dB, >= 1 dB");
            r.threshold = 1.0;
            r.lower_is_better = false;
            RunConfig c = cfg;
            c.schemes = {Scheme::Rotatable, Scheme::Fixed};
            const PatternResult pat = gain_pattern(c);
            const double pr_deg = std::atan2(cfg.pr_position_m.z(), cfg.pr_position_m.x()) / kDeg;
            auto at = [&](const std::string &scheme, double deg) {
                const double snapped = std::round(deg / c.pattern_step_deg) * c.pattern_step_deg;
                for (const auto &row : pat.rows)
                    if (row.scheme == scheme && std::abs(row.phi_deg - snapped) < 1e-9)
                        return row.gain_db;
                return std::numeric_limits<double>::quiet_NaN();
            };
            const double sr_margin = at("ra", cfg.sr_angle_deg) - at("fixed", cfg.sr_angle_deg);
            const double pr_margin = at("fixed", pr_deg) - at("ra", pr_deg);
            r.metric = std::min(sr_margin, pr_margin);
            r.passed = pat.ok() && r.metric >= r.threshold;
            r.detail = "SR angle " + fmt(cfg.sr_angle_deg) + " deg: ra - fixed = " + fmt(sr_margin) + " dB; PR angle " +
                       fmt(pr_deg) + " deg: fixed - ra = " + fmt(pr_margin) + " dB";
            return r;
        }

        CheckResult check_integral(const RunConfig &cfg, const ValidationOptions &)
        {
            CheckResult r = start("pattern_integral", "integral of the element gain over the sphere equals 4 pi within 0.1% "
                                              "for p in {1,2,4}; metric = max relative error");
            r.threshold = 1e-3;
            double worst = 0.0;
            std::ostringstream detail;
            const double wl = cfg.wavelength_m;
            for (double p : {1.0, 2.0, 4.0})
            {
                const double v =
                    oracle::pattern_sphere_integral(GainPattern::directional(p, wl * wl / 4.0, wl), 1800, 360);
                const double e = std::abs(v - 4.0 * kPi) / (4.0 * kPi);
                worst = std::max(worst, e);
                detail << "p=" << p << ": " << fmt(v) << "; ";
            }
            r.metric = worst;
            r.passed = worst <= r.threshold;
            r.detail = detail.str();
            return r;
        }

        CheckResult check_determinism(const RunConfig &cfg, const ValidationOptions &)
        {
            CheckResult r = start("determinism", "two power sweeps with the same config and seed write byte-identical CSV; "
                                         "metric = number of differing bytes");
            r.threshold = 0.0;
            std::string text[2];
            for (auto &t : text)
            {
                std::ostringstream os;
                write_sweep_csv(os, sweep_power(cfg).rows, false);
                t = os.str();
            }
            std::size_t diff = text[0].size() > text[1].size() ? text[0].size() - text[1].size()
                                                               : text[1].size() - text[0].size();
            for (std::size_t k = 0; k < std::min(text[0].size(), text[1].size()); ++k)
                diff += text[0][k] != text[1][k];
            r.metric = static_cast<double>(diff);
            r.passed = diff == 0 && !text[0].empty();
            r.detail = std::to_string(text[0].size()) + " bytes per run";
            return r;
        }

        using CheckFn = CheckResult (*)(const RunConfig &, const ValidationOptions &);
        const std::vector<std::pair<std::string, CheckFn>> &registry()
        {
            static const std::vector<std::pair<std::string, CheckFn>> checks{
                {"gradient", check_gradient},       {"lipschitz", check_lipschitz},
                {"beamformer", check_beamformer},   {"majorization", check_majorization},
                {"subproblem", check_subproblem},   {"sca_grid", check_sca_grid},
                {"ao_monotone", check_ao},          {"scheme_ordering", check_ordering},
                {"gain_pattern", check_pattern},    {"pattern_integral", check_integral},
                {"determinism", check_determinism},
            };
            return checks;
        }
    } // namespace

    bool ValidationReport::passed() const
    {
        return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const auto &c) { return c.passed; });
    }

    std::string ValidationReport::to_json() const
    {
        nlohmann::json j;
        j["passed"] = passed();
        j["checks"] = nlohmann::json::array();
        for (const auto &c : checks)
        {
            const auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(format_number(v)); };
            j["checks"].push_back({{"id", c.id},
                                   {"description", c.description},
                                   {"passed", c.passed},
                                   {"metric", num(c.metric)},
                                   {"threshold", c.threshold},
                                   {"sense", c.lower_is_better ? "metric <= threshold" : "metric >= threshold"},
                                   {"detail", c.detail},
                                   {"wall_ms", c.wall_ms}});
        }
        return j.dump(2);
    }

    const std::vector<std::string> &validation_check_ids()
    {
        static const std::vector<std::string> ids = [] {
            std::vector<std::string> out;
            for (const auto &[id, fn] : registry())
                out.push_back(id);
            return out;
        }();
        return ids;
    }

    ValidationReport run_validation(const RunConfig &cfg, const ValidationOptions &opt)
    {
        for (const auto &id : opt.only)
            if (std::find(validation_check_ids().begin(), validation_check_ids().end(), id) ==
                validation_check_ids().end())
                throw ConfigError("validate: unknown check '" + id + "'");
        cfg.validate();
        ValidationReport rep;
        for (const auto &[id, fn] : registry())
        {
            if (!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), id) == opt.only.end())
                continue;
            const auto t0 = std::chrono::steady_clock::now();
            CheckResult res;
            try
            {
                res = fn(cfg, opt);
            }
            catch (const std::exception &e)
            {
                res.id = id;
                res.passed = false;
                res.metric = std::numeric_limits<double>::quiet_NaN();
                res.detail = std::string("exception: ") + e.what();
            }
            res.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            rep.checks.push_back(std::move(res));
        }
        return rep;
    }

} // namespace rasim
