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

#ifndef RASIM_TEST_SUPPORT_HPP
#define RASIM_TEST_SUPPORT_HPP

#include "rasim/channel.hpp"

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <random>

namespace rasim::test
{
    inline double uniform(std::mt19937_64 &rng, double lo, double hi)
    {
        return lo + (hi - lo) * std::generate_canonical<double, 53>(rng);
    }

    inline Eigen::VectorXcd random_complex(int n, std::mt19937_64 &rng)
    {
        Eigen::VectorXcd v(n);
        for (int i = 0; i < n; ++i)
            v[i] = {uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)};
        return v;
    }

    inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }
} // namespace rasim::test

#endif
