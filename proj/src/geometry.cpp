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

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rasim
{
    Vec3 orientation_to_pointing(const Orientation &o)
    {
        const double sz = std::sin(o.zenith);
        return {sz * std::cos(o.azimuth), sz * std::sin(o.azimuth), std::cos(o.zenith)};
    }

    Orientation pointing_to_orientation(const Vec3 &f)
    {
        if (!f.allFinite() || std::abs(f.norm() - 1.0) > 1e-9)
            throw std::invalid_argument("pointing_to_orientation: pointing vector must have unit norm");
        if (f.z() < 0.0)
            throw std::invalid_argument("pointing_to_orientation: pointing vector lies in the back hemisphere");

        Orientation o;
        const double rho = std::hypot(f.x(), f.y());
        o.zenith = std::atan2(rho, f.z());
        if (rho == 0.0)
            return o;
        double az = std::atan2(f.y(), f.x());
        if (az < 0.0)
            az += 2.0 * std::numbers::pi;
        if (az >= 2.0 * std::numbers::pi)
            az = 0.0;
        o.azimuth = az;
        return o;
    }

    std::vector<Vec3> upa_positions(int nx, int ny, double spacing)
    {
        if (nx < 1 || ny < 1)
            throw std::invalid_argument("upa_positions: Nx and Ny must be positive");
        if (!(spacing > 0.0))
            throw std::invalid_argument("upa_positions: spacing must be positive");

        std::vector<Vec3> out;
        out.reserve(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny));
        const double x0 = 0.5 * (nx - 1), y0 = 0.5 * (ny - 1);
        for (int iy = 0; iy < ny; ++iy)
            for (int ix = 0; ix < nx; ++ix)
                out.emplace_back((ix - x0) * spacing, (iy - y0) * spacing, 0.0);
        return out;
    }

    Vec3 unit_direction(const Vec3 &target, const Vec3 &source)
    {
        const Vec3 d = target - source;
        const double len = d.norm();
        if (!(len > 0.0))
            throw std::invalid_argument("unit_direction: target and source coincide");
        return d / len;
    }

    std::pair<int, int> factor_array(int n)
    {
        if (n < 1)
            throw std::invalid_argument("factor_array: N must be positive, got " + std::to_string(n));
        int nx = 1;
        for (int k = 1; static_cast<long>(k) * k <= n; ++k)
            if (n % k == 0)
                nx = k;
        return {nx, n / nx};
    }

    ArrayGeometry ArrayGeometry::upa(int nx, int ny, double spacing)
    {
        return {nx, ny, spacing, upa_positions(nx, ny, spacing)};
    }

    ArrayGeometry ArrayGeometry::ula_x(int m, double spacing, const Vec3 &center)
    {
        auto pos = upa_positions(m, 1, spacing);
        for (auto &p : pos)
            p += center;
        return {m, 1, spacing, std::move(pos)};
    }

} // namespace rasim
