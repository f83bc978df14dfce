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

#ifndef RASIM_POINTING_HPP
#define RASIM_POINTING_HPP

#include "rasim/geometry.hpp"

#include <Eigen/Core>

namespace rasim
{
    using StackedVector = Eigen::VectorXd; // 3N real vector, blocks of 3 per antenna

    // Boresight directions of all N antennas, one unit column per antenna.
    class PointingMatrix
    {
    public:
        PointingMatrix() = default;
        explicit PointingMatrix(Eigen::Matrix3Xd columns) : cols_(std::move(columns)) {}

        // All N boresights equal to `f` (e3 by default, the reference orientation).
        static PointingMatrix uniform(int n, const Vec3 &f = kZenithAxis);
        static PointingMatrix from_stacked(const StackedVector &stacked);

        int size() const { return static_cast<int>(cols_.cols()); }
        Vec3 column(int n) const { return cols_.col(n); }
        void set_column(int n, const Vec3 &f) { cols_.col(n) = f; }
        const Eigen::Matrix3Xd &matrix() const { return cols_; }

        StackedVector stacked() const;

        // Each column scaled to exact unit norm.
        PointingMatrix normalized() const;

        // Unit norm within `norm_tol` and cos(theta_max) <= f_n^T e3 <= 1 within `zenith_tol`.
        bool is_feasible(double theta_max, double norm_tol = 1e-6, double zenith_tol = 1e-9) const;

        bool operator==(const PointingMatrix &other) const { return cols_ == other.cols_; }

    private:
        Eigen::Matrix3Xd cols_;
    };

} // namespace rasim

#endif
