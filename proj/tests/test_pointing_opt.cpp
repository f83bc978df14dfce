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
#include "rasim/errors.hpp"
#include "rasim/oracle.hpp"
#include "rasim/pointing_opt.hpp"

#include "doctest.h"
#include "test_support.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <stdexcept>

using namespace rasim;

namespace
{
    constexpr double kKappa = 1e-12;

    Scenario with_p(double p, int n = 4)
    {
        Scenario sc = Scenario::reference();
        if (n != sc.n())
        {
            const auto [a, b] = factor_array(n);
            sc.st = ArrayGeometry::upa(b, a, sc.st.spacing);
        }
        sc.pattern = GainPattern::directional(p, sc.pattern.aperture, sc.pattern.wavelength);
        return sc;
    }

    BeamVector reference_beam(const Scenario &sc)
    {
        const PointingMatrix f = PointingMatrix::uniform(sc.n());
        return optimal_beamformer(st_channel_vector(f, sc.sr, sc), st_channel_vector(f, sc.pr, sc), sc.p_max,
                                  sc.interference_limit)
            .w;
    }

    // Interior point: every cosine toward SR and PR bounded away from the clamp.
    StackedVector interior_point(const Scenario &sc, std::mt19937_64 &rng)
    {
        const LinkGeometry geo = LinkGeometry::from(sc);
        for (;;)
        {
            const PointingMatrix f = oracle::sample_pointing(sc.n(), sc.theta_max, rng, &geo.u_sr, 0.05);
            bool ok = true;
            for (int n = 0; n < sc.n(); ++n)
                ok = ok && std::abs(f.column(n).dot(geo.u_pr.col(n))) >= 0.05;
            if (ok)
                return f.stacked();
        }
    }
} // namespace

TEST_SUITE("pointing_opt")
{
    TEST_CASE("cosine cache regularization")
    {
        Scenario sc = with_p(4.0, 1);
        sc.pr = {-30, 0, -30}; // below the array plane, alpha < 0 for upward boresights
        const LinkGeometry geo = LinkGeometry::from(sc);
        const BeamVector w = BeamVector::Constant(1, std::sqrt(sc.p_max));

        const CosineCache aligned = build_cosine_cache(geo.u_sr.col(0), w, geo, 4.0, kKappa);
        CHECK(aligned.beta[0] == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(aligned.beta_reg[0] == doctest::Approx(1.0 + kKappa).epsilon(1e-15));
        CHECK(aligned.alpha_clamped[0]);
        CHECK(aligned.alpha_reg[0] == kKappa);

        const Vec3 u = geo.u_sr.col(0);
        const Vec3 perp = u.cross(Vec3(0, 1, 0)).normalized();
        const CosineCache side = build_cosine_cache(perp, w, geo, 4.0, kKappa);
        CHECK(side.beta_reg[0] == doctest::Approx(kKappa).epsilon(1e-3));
    }

    TEST_CASE("objective and constraint edge cases")
    {
        const Scenario sc = with_p(4.0);
        const StackedVector f = PointingMatrix::uniform(sc.n()).stacked();
        const CosineCache zero = build_cosine_cache(f, BeamVector::Zero(sc.n()), sc, kKappa);
        CHECK(objective_J(zero) == 0.0);
        CHECK(constraint_U(zero) == 0.0);
        CHECK(grad_J(zero).norm() == 0.0);
        CHECK(grad_U(zero).norm() == 0.0);

        // Every PR cosine clamped: U = |sum c_n kappa^p|^2.
        Scenario below = sc;
        below.pr = {-30, 0, -30};
        const BeamVector w = reference_beam(sc);
        const CosineCache cl = build_cosine_cache(f, w, below, 1e-3);
        const double expect = std::norm(cl.c.sum() * std::pow(1e-3, 4.0));
        CHECK(constraint_U(cl) == doctest::Approx(expect).epsilon(1e-12));
        CHECK(grad_U(cl).norm() == 0.0);

        // Isotropic-in-pointing pattern, single element: J = |e_1|^2.
        Scenario iso = with_p(4.0, 1);
        iso.pattern = GainPattern::isotropic(sc.pattern.aperture, sc.pattern.wavelength);
        const BeamVector w1 = BeamVector::Constant(1, cdouble(0.3, 0.1));
        const CosineCache c1 = build_cosine_cache(PointingMatrix::uniform(1).stacked(), w1, iso, kKappa);
        CHECK(objective_J(c1) == doctest::Approx(std::norm(c1.e[0])).epsilon(1e-14));
    }

    TEST_CASE("model agrees with the channel module")
    {
        std::mt19937_64 rng(31);
        for (double p : {1.0, 2.0, 4.0})
        {
            const Scenario sc = with_p(p, 2);
            const BeamVector w = test::random_complex(2, rng);
            const StackedVector f = interior_point(sc, rng);
            const CosineCache cache = build_cosine_cache(f, w, sc, kKappa);
            const PointingMatrix fm = PointingMatrix::from_stacked(f);
            CHECK(test::rel_err(objective_J(cache), signal_power(w, fm, sc)) < 1e-9);
            CHECK(test::rel_err(constraint_U(cache), leakage_power(w, fm, sc)) < 1e-9);
        }
    }

    TEST_CASE("single element linear pattern gradient")
    {
        const Scenario sc = with_p(1.0, 1);
        const LinkGeometry geo = LinkGeometry::from(sc);
        const BeamVector w = BeamVector::Constant(1, cdouble(0.2, -0.1));
        const CosineCache cache = build_cosine_cache(geo.u_sr.col(0), w, geo, 1.0, kKappa);
        const StackedVector g = grad_J(cache);
        const Vec3 expect = 2.0 * std::norm(cache.e[0]) * geo.u_sr.col(0);
        CHECK((g - StackedVector(expect)).norm() <= 1e-9 * expect.norm());
    }

    TEST_CASE("gradients and Hessian against finite differences")
    {
        std::mt19937_64 rng(32);
        for (double p : {1.0, 2.0, 4.0})
        {
            const Scenario sc = with_p(p);
            const LinkGeometry geo = LinkGeometry::from(sc);
            const BeamVector w = reference_beam(sc);
            auto jf = [&](const StackedVector &x) { return objective_J(build_cosine_cache(x, w, geo, p, kKappa)); };
            auto uf = [&](const StackedVector &x) { return constraint_U(build_cosine_cache(x, w, geo, p, kKappa)); };
            auto gu = [&](const StackedVector &x) { return grad_U(build_cosine_cache(x, w, geo, p, kKappa)); };
            for (int i = 0; i < 20; ++i)
            {
                const StackedVector x = interior_point(sc, rng);
                const CosineCache cache = build_cosine_cache(x, w, geo, p, kKappa);
                const StackedVector gj = grad_J(cache), gU = grad_U(cache);
                const StackedVector fj = oracle::finite_diff_grad(jf, x, 1e-6);
                const StackedVector fu = oracle::finite_diff_grad(uf, x, 1e-6);
                CHECK((gj - fj).norm() <= 1e-5 * std::max(fj.norm(), 1e-300));
                CHECK((gU - fu).norm() <= 1e-5 * std::max(fu.norm(), 1e-300));
                const Eigen::MatrixXd h = hessian_U(cache);
                const Eigen::MatrixXd fh = oracle::finite_diff_hessian(gu, x, 1e-6);
                CHECK((h - fh).norm() <= 1e-4 * fh.norm());
            }
        }
    }

    TEST_CASE("Lipschitz constant")
    {
        Eigen::VectorXcd c(3);
        c << cdouble(3, 4), cdouble(0, 1), cdouble(-2, 0);
        const double cmax = 5.0, csum = 8.0;
        CHECK(lipschitz_Lg(c, 1.0, 1e-6) == doctest::Approx(2.0 * cmax * csum).epsilon(1e-15));
        CHECK(lipschitz_Lg(c, 4.0, 1e-6) ==
              doctest::Approx(56.0 * cmax * csum * std::pow(1.0 + 1e-6, 6.0)).epsilon(1e-14));
        CHECK_THROWS_AS(lipschitz_Lg(c, 0.0, 1e-6), std::invalid_argument);
        CHECK_THROWS_AS(lipschitz_Lg(Eigen::VectorXcd::Zero(3), 4.0, 1e-6), std::invalid_argument);

        for (double p : {1.0, 4.0})
        {
            const Scenario sc = with_p(p);
            const BeamVector w = reference_beam(sc);
            const StackedVector f = PointingMatrix::uniform(sc.n()).stacked();
            const double lg = lipschitz_Lg(build_cosine_cache(f, w, sc, kKappa));
            const auto est = oracle::empirical_lipschitz(w, sc, 1000, 9, kKappa, p < 2.0);
            CHECK(est.pairs > 0);
            CHECK(est.max_ratio <= lg);
        }
    }

    TEST_CASE("linear surrogate of J")
    {
        std::mt19937_64 rng(33);
        const Scenario sc = with_p(4.0);
        const BeamVector w = reference_beam(sc);
        const StackedVector x = interior_point(sc, rng);
        const CosineCache cache = build_cosine_cache(x, w, sc, kKappa);
        const double j = objective_J(cache);
        const StackedVector g = grad_J(cache);
        CHECK(surrogate_J_tilde(x, x, cache) == j);
        const double t = 0.01 / g.norm();
        CHECK(test::rel_err(surrogate_J_tilde(x + t * g, x, cache), j + t * g.squaredNorm()) < 1e-12);

        StackedVector dir(x.size());
        for (int k = 0; k < dir.size(); ++k)
            dir[k] = test::uniform(rng, -1.0, 1.0);
        dir.normalize();
        auto remainder = [&](double s) {
            const StackedVector y = x + s * dir;
            return std::abs(surrogate_J_tilde(y, x, cache) - objective_J(build_cosine_cache(y, w, sc, kKappa)));
        };
        const double r1 = remainder(1e-4), r2 = remainder(5e-5);
        CHECK(r2 <= 0.3 * r1); // quadratic decay gives 0.25
    }

    TEST_CASE("quadratic bound majorizes U")
    {
        std::mt19937_64 rng(34);
        const Scenario sc = with_p(4.0);
        const LinkGeometry geo = LinkGeometry::from(sc);
        const BeamVector w = reference_beam(sc);
        const StackedVector x = PointingMatrix::uniform(sc.n()).stacked();
        const CosineCache cache = build_cosine_cache(x, w, geo, 4.0, kKappa);
        const double lg = lipschitz_Lg(cache);
        CHECK(upper_U_tilde(x, x, cache, lg) == constraint_U(cache));
        CHECK_THROWS_AS(upper_U_tilde(x, x, cache, 0.5 * lg), std::invalid_argument);
        for (int i = 0; i < 100; ++i)
        {
            const StackedVector y = oracle::sample_pointing(sc.n(), sc.theta_max, rng).stacked();
            const double u = constraint_U(build_cosine_cache(y, w, geo, 4.0, kKappa));
            CHECK(upper_U_tilde(y, x, cache, lg) >= u);
        }
        const StackedVector zero = StackedVector::Zero(x.size());
        const StackedVector d = StackedVector::Constant(x.size(), 0.1);
        CHECK(quadratic_bound(x + d, x, 2.0, zero, 3.0) == doctest::Approx(2.0 + 1.5 * d.squaredNorm()));
    }

    TEST_CASE("SCA on the reference scenario")
    {
        const Scenario sc = with_p(4.0);
        const BeamVector w = reference_beam(sc);
        const PointingMatrix f0 = PointingMatrix::uniform(sc.n());
        const ScaResult res = sca_pointing_opt(w, f0, sc);
        CHECK(res.f.is_feasible(sc.theta_max));
        CHECK(signal_power(w, res.f, sc) > signal_power(w, f0, sc));
        CHECK(leakage_power(w, res.f, sc) <= sc.interference_limit * (1 + 1e-6));
        for (std::size_t i = 1; i < res.history.size(); ++i)
        {
            CHECK(res.history[i].j >= res.history[i - 1].j);
            CHECK(res.history[i].u <= sc.interference_limit * (1 + 1e-6));
        }
        const ScaResult again = sca_pointing_opt(w, f0, sc);
        CHECK(again.f == res.f);
    }

    TEST_CASE("SCA stationary and degenerate inputs")
    {
        const Scenario sc = with_p(4.0);
        const PointingMatrix f0 = PointingMatrix::uniform(sc.n());
        const ScaResult zero = sca_pointing_opt(BeamVector::Zero(sc.n()), f0, sc);
        CHECK(zero.converged);
        CHECK(zero.iterations <= 1);
        CHECK(zero.f == f0);

        Scenario iso = sc;
        iso.pattern = GainPattern::isotropic(sc.pattern.aperture, sc.pattern.wavelength);
        const ScaResult flat = sca_pointing_opt(reference_beam(iso), f0, iso);
        CHECK(flat.f == f0);
        CHECK(flat.iterations == 0);

        const PointingMatrix tilted = PointingMatrix::uniform(sc.n(), Vec3(1, 0, 0));
        CHECK_THROWS_AS(sca_pointing_opt(reference_beam(sc), tilted, sc), InfeasibleStartError);
        const BeamVector loud = 1e3 * BeamVector::Ones(sc.n());
        CHECK_THROWS_AS(sca_pointing_opt(loud, f0, sc), InfeasibleStartError);
    }

    TEST_CASE("SCA single element reaches the grid optimum")
    {
        Scenario sc = with_p(4.0, 1);
        sc.interference_limit = 1.0; // slack
        const BeamVector w = BeamVector::Constant(1, std::sqrt(sc.p_max));
        const ScaResult res = sca_pointing_opt(w, PointingMatrix::uniform(1), sc);
        const auto grid = oracle::grid_search_pointing(w, sc, oracle::GridSpec::default_for(1));
        REQUIRE(grid.found);
        CHECK(signal_power(w, res.f, sc) >= 0.99 * grid.j);
        const Vec3 u = LinkGeometry::from(sc).u_sr.col(0);
        CHECK(std::acos(std::min(1.0, res.f.column(0).dot(u))) < 1.0 * 3.14159265358979 / 180.0);
    }
}
