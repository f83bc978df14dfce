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
#include "rasim/oracle.hpp"

#include "doctest.h"
#include "test_support.hpp"

#include <cmath>
#include <stdexcept>

using namespace rasim;

TEST_SUITE("beamforming")
{
    TEST_CASE("orthogonal channels give maximum ratio transmission")
    {
        ChannelVector hss(2), hsp(2);
        hss << cdouble(1, 1), 0.0;
        hsp << 0.0, cdouble(0, 2);
        const Beamformer bf = optimal_beamformer(hss, hsp, 0.5, 1e-9);
        CHECK(bf.branch == BeamBranch::MaximumRatio);
        CHECK((bf.w - std::sqrt(0.5) * hss / hss.norm()).norm() < 1e-15);
    }

    TEST_CASE("loose interference limit gives maximum ratio transmission")
    {
        std::mt19937_64 rng(11);
        for (int i = 0; i < 50; ++i)
        {
            const ChannelVector hss = test::random_complex(4, rng);
            const ChannelVector hsp = test::random_complex(4, rng);
            const double p = 0.2;
            const Beamformer bf = optimal_beamformer(hss, hsp, p, p * hsp.squaredNorm() * 1.01);
            CHECK(bf.branch == BeamBranch::MaximumRatio);
            CHECK((bf.w - std::sqrt(p) * hss / hss.norm()).norm() < 1e-14);
        }
    }

    TEST_CASE("tight limit pins interference and matches the numeric optimum")
    {
        std::mt19937_64 rng(12);
        for (int i = 0; i < 50; ++i)
        {
            const ChannelVector hss = test::random_complex(4, rng);
            const ChannelVector hsp = test::random_complex(4, rng);
            const double p = 0.2;
            const double crit = p * std::norm(hsp.dot(hss)) / hss.squaredNorm();
            const double gamma = crit * 1e-2;
            const Beamformer bf = optimal_beamformer(hss, hsp, p, gamma);
            REQUIRE(bf.branch == BeamBranch::Constrained);
            CHECK(test::rel_err(interference_power(bf.w, hsp), gamma) < 1e-10);
            CHECK(bf.w.squaredNorm() <= p * (1 + 1e-12));
            const auto ref = oracle::numeric_beamformer_P2(hss, hsp, p, gamma);
            CHECK(test::rel_err(std::norm(bf.w.dot(hss)), ref.objective) < 1e-6);
        }
    }

    TEST_CASE("parallel channels")
    {
        ChannelVector hss(3);
        hss << cdouble(1, 0), cdouble(0, 1), cdouble(0.5, -0.5);
        const ChannelVector hsp = cdouble(0.3, 0.4) * hss;
        const double p = 1.0, gamma = 1e-3;
        const Beamformer bf = optimal_beamformer(hss, hsp, p, gamma);
        CHECK(bf.branch == BeamBranch::Parallel);
        CHECK(interference_power(bf.w, hsp) <= gamma * (1 + 1e-10));
        CHECK(test::rel_err(interference_power(bf.w, hsp), gamma) < 1e-10);
    }

    TEST_CASE("invalid input")
    {
        ChannelVector h = ChannelVector::Ones(2);
        CHECK_THROWS_AS(optimal_beamformer(ChannelVector::Zero(2), h, 1.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(optimal_beamformer(h, ChannelVector::Ones(3), 1.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(optimal_beamformer(h, h, 0.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(optimal_beamformer(h, h, 1.0, -1.0), std::invalid_argument);
    }

    TEST_CASE("sinr and interference_power")
    {
        ChannelVector h(2);
        h << 1.0, 0.0;
        BeamVector w(2);
        w << 0.0, 1.0;
        const ChannelVector hps = ChannelVector::Ones(2);
        CHECK(sinr(w, h, BeamVector::Zero(2), hps, 1e-10) == 0.0);
        CHECK(interference_power(w, h) == 0.0);

        const double sigma2 = 1e-10;
        BeamVector w2(2);
        w2 << std::sqrt(sigma2), 0.0;
        CHECK(sinr(w2, h, BeamVector::Zero(2), hps, sigma2) == doctest::Approx(1.0).epsilon(1e-14));

        std::mt19937_64 rng(5);
        const ChannelVector hsp = test::random_complex(4, rng);
        const BeamVector unit = hsp / hsp.norm();
        CHECK(interference_power(unit, hsp) == doctest::Approx(hsp.squaredNorm()).epsilon(1e-14));
    }

    TEST_CASE("numeric oracle limits")
    {
        ChannelVector hss(2), hsp(2);
        hss << 1.0, 0.0;
        hsp << 0.0, 1.0;
        const auto orth = oracle::numeric_beamformer_P2(hss, hsp, 2.0, 1e-6);
        CHECK(orth.objective == doctest::Approx(2.0).epsilon(1e-10));

        std::mt19937_64 rng(21);
        const ChannelVector a = test::random_complex(4, rng);
        const ChannelVector b = test::random_complex(4, rng);
        const ChannelVector bh = b / b.norm();
        const ChannelVector residual = a - bh.dot(a) * bh;
        const auto zero = oracle::numeric_beamformer_P2(a, b, 0.3, 0.0);
        CHECK(test::rel_err(zero.objective, 0.3 * residual.squaredNorm()) < 1e-9);
        CHECK(std::norm(zero.w.dot(b)) < 1e-12 * b.squaredNorm());
    }
}
