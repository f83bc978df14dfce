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

#ifndef RASIM_GEOMETRY_HPP
#define RASIM_GEOMETRY_HPP

#include <Eigen/Core>

#include <utility>
#include <vector>

namespace rasim
{
    using Vec3 = Eigen::Vector3d;

    inline const Vec3 kZenithAxis{0.0, 0.0, 1.0}; // e3, the array normal

    // Boresight direction in spherical coordinates, radians.
    // zenith in [0, pi/2] measured from +z, azimuth in [0, 2pi) measured from +x.
    struct Orientation
    {
        double zenith = 0.0;
        double azimuth = 0.0;
    };

    Vec3 orientation_to_pointing(const Orientation &o);

    // Inverse of orientation_to_pointing on the upper hemisphere.
    // Throws std::invalid_argument for non-unit input or f_z < 0.
    // The azimuth of the degenerate pointing (0,0,1) is 0.
    Orientation pointing_to_orientation(const Vec3 &f);

    // Nx*Ny element positions on the z = 0 plane, pitch `spacing`, centroid at the origin.
    // Index n = ix + Nx*iy (x fastest).
    std::vector<Vec3> upa_positions(int nx, int ny, double spacing);

    // (target - source) / ||target - source||; throws for coincident points.
    Vec3 unit_direction(const Vec3 &target, const Vec3 &source);

    // Split N into Nx*Ny with Nx the largest divisor of N not above sqrt(N).
    std::pair<int, int> factor_array(int n);

    struct ArrayGeometry
    {
        int nx = 1;
        int ny = 1;
        double spacing = 0.0;
        std::vector<Vec3> positions;

        static ArrayGeometry upa(int nx, int ny, double spacing);

        // Uniform linear array along x, centered at `center`.
        static ArrayGeometry ula_x(int m, double spacing, const Vec3 &center);

        int size() const { return static_cast<int>(positions.size()); }
    };

} // namespace rasim

#endif
