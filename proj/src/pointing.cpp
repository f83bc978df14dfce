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

#include "rasim/pointing.hpp"

#include <cmath>
#include <stdexcept>

namespace rasim
{
    PointingMatrix PointingMatrix::uniform(int n, const Vec3 &f)
    {
        if (n < 1)
            throw std::invalid_argument("PointingMatrix::uniform: N must be positive");
        Eigen::Matrix3Xd cols(3, n);
        cols.colwise() = f;
        return PointingMatrix(std::move(cols));
    }

    PointingMatrix PointingMatrix::from_stacked(const StackedVector &stacked)
    {
        if (stacked.size() == 0 || stacked.size() % 3 != 0)
            throw std::invalid_argument("PointingMatrix::from_stacked: length must be a positive multiple of 3");
        return PointingMatrix(Eigen::Map<const Eigen::Matrix3Xd>(stacked.data(), 3, stacked.size() / 3));
    }

    StackedVector PointingMatrix::stacked() const
    {
        return Eigen::Map<const StackedVector>(cols_.data(), cols_.size());
    }

    PointingMatrix PointingMatrix::normalized() const
    {
        Eigen::Matrix3Xd cols = cols_;
        cols.colwise().normalize();
        return PointingMatrix(std::move(cols));
    }

    bool PointingMatrix::is_feasible(double theta_max, double norm_tol, double zenith_tol) const
    {
        const double cmin = std::cos(theta_max);
        for (int n = 0; n < size(); ++n)
        {
            const Vec3 f = cols_.col(n);
            if (!f.allFinite() || std::abs(f.norm() - 1.0) > norm_tol)
                return false;
            if (f.z() < cmin - zenith_tol || f.z() > 1.0 + zenith_tol)
                return false;
        }
        return true;
    }

} // namespace rasim
