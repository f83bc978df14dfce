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

#include "rasim/channel.hpp"

#include "doctest.h"
#include "test_support.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace rasim;
using std::numbers::pi;

namespace
{
    constexpr double kLambda = 0.125;
    const GainPattern kPattern = GainPattern::directional(4.0, kLambda * kLambda / 4.0, kLambda);
} // namespace

TEST_SUITE("channel")
{
    TEST_CASE("unit conversions")
    {
        CHECK(dbm_to_watt(30.0) == doctest::Approx(1.0));
        CHECK(dbm_to_watt(29.0) == doctest::Approx(0.7943282347).epsilon(1e-9));
        CHECK(watt_to_dbm(1e-11) == doctest::Approx(-80.0));
        CHECK(to_db(100.0) == doctest::Approx(20.0));
    }

    TEST_CASE("directional_gain")
    {
        const Vec3 u{0, 0, 1};
        CHECK(directional_gain(u, u, kPattern) == doctest::Approx(18.0).epsilon(1e-15));
        CHECK(directional_gain({1, 0, 0}, u, kPattern) == 0.0);
        CHECK(directional_gain({0, 0, -1}, u, kPattern) == 0.0);
        const auto p1 = GainPattern::directional(1.0, kPattern.aperture, kLambda);
        CHECK(p1.g0 == 6.0);
        const Vec3 f{std::sqrt(3.0) / 2, 0, 0.5}; // f^T u = 0.5
        CHECK(directional_gain(f, u, p1) == doctest::Approx(1.5).epsilon(1e-14));
        const auto iso = GainPattern::isotropic(kPattern.aperture, kLambda);
        CHECK(iso.is_isotropic());
        CHECK(directional_gain(f, u, iso) == doctest::Approx(1.0));
    }

    TEST_CASE("GainPattern validation")
    {
        CHECK_THROWS(GainPattern::directional(-1.0, 0.1, kLambda));
        CHECK_THROWS(GainPattern::directional(4.0, 0.0, kLambda));
    }

    TEST_CASE("channel_coeff magnitude, occlusion and phase")
    {
        const Vec3 origin = Vec3::Zero();
        const cdouble h = channel_coeff(kZenithAxis, origin, {0, 0, 50}, kPattern);
        // sqrt(0.00390625 * 18 / (4 pi 2500)), evaluated independently.
        CHECK(std::abs(h) == doctest::Approx(1.49603355e-3).epsilon(1e-8));
        CHECK(std::abs(channel_coeff(kZenithAxis, origin, {0, 0, -50}, kPattern)) == 0.0);

        const cdouble at_lambda = channel_coeff(kZenithAxis, origin, {0, 0, kLambda}, kPattern);
        CHECK(std::abs(std::arg(at_lambda)) < 1e-12);
        const cdouble quarter = channel_coeff(kZenithAxis, origin, {0, 0, 50 + kLambda / 4}, kPattern);
        CHECK(std::arg(quarter) == doctest::Approx(-pi / 2).epsilon(1e-9));
    }

    TEST_CASE("st_channel_vector")
    {
        Scenario sc = Scenario::reference();
        const PointingMatrix f = PointingMatrix::uniform(sc.n());
        const ChannelVector h = st_channel_vector(f, sc.sr, sc);
        REQUIRE(h.size() == sc.n());
        for (int n = 0; n < sc.n(); ++n)
            CHECK(std::abs(h[n] - channel_coeff(f.column(n), sc.st.positions[n], sc.sr, sc.pattern)) == 0.0);

        // On-axis SR: per-element magnitude sqrt(S G(eps_n) / (4 pi d_n^2)).
        sc.sr = {0, 0, 40};
        const ChannelVector axis = st_channel_vector(f, sc.sr, sc);
        for (int n = 0; n < sc.n(); ++n)
        {
            const Vec3 d = sc.sr - sc.st.positions[n];
            const double g = directional_gain(kZenithAxis, d.normalized(), sc.pattern);
            CHECK(std::abs(axis[n]) ==
                  doctest::Approx(std::sqrt(sc.pattern.aperture * g / (4 * pi * d.squaredNorm()))).epsilon(1e-12));
        }

        // Boresights facing away from the SR: zero vector.
        PointingMatrix away = PointingMatrix::uniform(sc.n(), Vec3(0, 0, -1));
        CHECK(st_channel_vector(away, sc.sr, sc).norm() == 0.0);
    }

    TEST_CASE("st_channel_vector single element")
    {
        Scenario sc = Scenario::reference();
        sc.st = ArrayGeometry::upa(1, 1, kLambda / 2);
        const Vec3 f = orientation_to_pointing({0.3, 0.4});
        const ChannelVector h = st_channel_vector(PointingMatrix::uniform(1, f), sc.sr, sc);
        REQUIRE(h.size() == 1);
        CHECK(h[0] == channel_coeff(f, sc.st.positions[0], sc.sr, sc.pattern));
    }

    TEST_CASE("pt_channels Friis magnitude")
    {
        Scenario sc = Scenario::reference();
        sc.pt = ArrayGeometry::ula_x(1, kLambda / 2, {-55, 0, 0});
        const double d = (sc.pr - sc.pt.positions[0]).norm();
        const PtChannels near = pt_channels(sc);
        CHECK(std::abs(near.to_pr[0]) == doctest::Approx(kLambda / (4 * pi * d)).epsilon(1e-14));

        sc.pt = ArrayGeometry::ula_x(1, kLambda / 2, sc.pr + 2.0 * (sc.pt.positions[0] - sc.pr));
        const PtChannels far = pt_channels(sc);
        CHECK(std::abs(far.to_pr[0]) == doctest::Approx(std::abs(near.to_pr[0]) / 2).epsilon(1e-14));

        const PtChannels four = pt_channels(Scenario::reference());
        CHECK(four.to_pr.size() == 4);
        CHECK(four.to_sr.size() == 4);
    }

    TEST_CASE("pt_beamformer")
    {
        ChannelVector h(1);
        h[0] = std::polar(2e-3, 0.7);
        const BeamVector v = pt_beamformer(h, 0.2);
        CHECK(std::abs(v[0]) == doctest::Approx(std::sqrt(0.2)));
        CHECK(std::arg(v[0]) == doctest::Approx(0.7));

        std::mt19937_64 rng(3);
        for (int i = 0; i < 20; ++i)
        {
            const ChannelVector hp = test::random_complex(4, rng);
            const ChannelVector hs = test::random_complex(4, rng);
            const BeamVector vv = pt_beamformer(hp, 0.2);
            CHECK(vv.squaredNorm() == doctest::Approx(0.2).epsilon(1e-13));
            CHECK(std::norm(vv.dot(hs)) <= 0.2 * hs.squaredNorm() * (1 + 1e-12));
        }
    }

    TEST_CASE("reference scenario")
    {
        const Scenario sc = Scenario::reference();
        CHECK_NOTHROW(sc.validate());
        CHECK(sc.n() == 4);
        CHECK(sc.m() == 4);
        CHECK(sc.p_max == doctest::Approx(dbm_to_watt(23.0)));
        CHECK(sc.interference_limit == doctest::Approx(1e-11));
        CHECK(sc.theta_max == doctest::Approx(pi / 3));
        CHECK((sc.sr - Vec3(25, 0, 50 * std::sin(pi / 3))).norm() < 1e-12);
    }
}
