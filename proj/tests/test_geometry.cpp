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

#include "rasim/geometry.hpp"

#include "doctest.h"
#include "test_support.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace rasim;
using std::numbers::pi;

TEST_SUITE("geometry")
{
    TEST_CASE("orientation_to_pointing reference values")
    {
        CHECK((orientation_to_pointing({0.0, 1.234}) - Vec3(0, 0, 1)).norm() < 1e-15);
        CHECK((orientation_to_pointing({pi / 2, 0.0}) - Vec3(1, 0, 0)).norm() < 1e-15);
        CHECK((orientation_to_pointing({pi / 3, pi / 2}) - Vec3(0, std::sqrt(3.0) / 2, 0.5)).norm() < 1e-15);
    }

    TEST_CASE("pointing_to_orientation reference values")
    {
        auto o = pointing_to_orientation({0, 0, 1});
        CHECK(o.zenith == 0.0);
        CHECK(o.azimuth == 0.0);
        o = pointing_to_orientation({1, 0, 0});
        CHECK(o.zenith == doctest::Approx(pi / 2).epsilon(1e-14));
        CHECK(o.azimuth == doctest::Approx(0.0));
        o = pointing_to_orientation({0, std::sqrt(3.0) / 2, 0.5});
        CHECK(o.zenith == doctest::Approx(pi / 3).epsilon(1e-14));
        CHECK(o.azimuth == doctest::Approx(pi / 2).epsilon(1e-14));
    }

    TEST_CASE("pointing_to_orientation rejects invalid input")
    {
        CHECK_THROWS_AS(pointing_to_orientation({0, 0, 2}), std::invalid_argument);
        CHECK_THROWS_AS(pointing_to_orientation({0, 0.6, -0.8}), std::invalid_argument);
    }

    TEST_CASE("unit norm and round trip over random orientations")
    {
        std::mt19937_64 rng(7);
        for (int i = 0; i < 1000; ++i)
        {
            Orientation o{test::uniform(rng, 1e-3, pi / 2), test::uniform(rng, 0.0, 2 * pi - 1e-9)};
            const Vec3 f = orientation_to_pointing(o);
            CHECK(std::abs(f.norm() - 1.0) < 1e-12);
            const Orientation back = pointing_to_orientation(f);
            CHECK(std::abs(back.zenith - o.zenith) < 1e-9);
            CHECK(std::abs(back.azimuth - o.azimuth) < 1e-9);
        }
    }

    TEST_CASE("upa_positions layout and centering")
    {
        auto one = upa_positions(1, 1, 0.0625);
        REQUIRE(one.size() == 1);
        CHECK(one[0].norm() == 0.0);

        auto four = upa_positions(2, 2, 0.0625);
        REQUIRE(four.size() == 4);
        const Vec3 expect[] = {{-0.03125, -0.03125, 0}, {0.03125, -0.03125, 0}, {-0.03125, 0.03125, 0},
                               {0.03125, 0.03125, 0}};
        for (int i = 0; i < 4; ++i)
            CHECK((four[i] - expect[i]).norm() < 1e-15);

        auto col = upa_positions(1, 2, 0.1);
        CHECK((col[0] - Vec3(0, -0.05, 0)).norm() < 1e-15);
        CHECK((col[1] - Vec3(0, 0.05, 0)).norm() < 1e-15);

        for (int nx = 1; nx <= 5; ++nx)
            for (int ny = 1; ny <= 5; ++ny)
            {
                Vec3 sum = Vec3::Zero();
                for (const auto &p : upa_positions(nx, ny, 0.0625))
                    sum += p;
                CHECK(sum.norm() < 1e-12);
            }
    }

    TEST_CASE("unit_direction")
    {
        CHECK((unit_direction({0, 0, 50}, {0, 0, 0}) - Vec3(0, 0, 1)).norm() < 1e-15);
        const Vec3 sr{50 * std::cos(pi / 3), 0, 50 * std::sin(pi / 3)};
        CHECK((unit_direction(sr, Vec3::Zero()) - Vec3(0.5, 0, std::sqrt(3.0) / 2)).norm() < 1e-15);
        CHECK((unit_direction({-30, 0, 30}, Vec3::Zero()) - Vec3(-1, 0, 1) / std::sqrt(2.0)).norm() < 1e-15);
        CHECK_THROWS_AS(unit_direction({1, 2, 3}, {1, 2, 3}), std::invalid_argument);
    }

    TEST_CASE("factor_array")
    {
        CHECK(factor_array(1) == std::pair{1, 1});
        CHECK(factor_array(2) == std::pair{1, 2});
        CHECK(factor_array(4) == std::pair{2, 2});
        CHECK(factor_array(8) == std::pair{2, 4});
        CHECK(factor_array(12) == std::pair{3, 4});
        CHECK(factor_array(16) == std::pair{4, 4});
        CHECK(factor_array(7) == std::pair{1, 7});
    }

    TEST_CASE("ArrayGeometry builders")
    {
        auto upa = ArrayGeometry::upa(2, 4, 0.0625);
        CHECK(upa.size() == 8);
        CHECK(upa.nx == 2);
        CHECK(upa.ny == 4);
        auto ula = ArrayGeometry::ula_x(4, 0.0625, {-55, 0, 0});
        REQUIRE(ula.size() == 4);
        Vec3 mean = Vec3::Zero();
        for (const auto &p : ula.positions)
        {
            CHECK(p.y() == 0.0);
            CHECK(p.z() == 0.0);
            mean += p / 4.0;
        }
        CHECK((mean - Vec3(-55, 0, 0)).norm() < 1e-12);
        CHECK(ula.positions[1].x() - ula.positions[0].x() == doctest::Approx(0.0625));
    }
}
