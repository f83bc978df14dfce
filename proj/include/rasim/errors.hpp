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

#ifndef RASIM_ERRORS_HPP
#define RASIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rasim
{
    // Numerical failure inside an optimizer (non-convergence, infeasible anchor, ...).
    class SolverError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // The start point handed to an optimizer violates its constraints.
    class InfeasibleStartError : public SolverError
    {
    public:
        using SolverError::SolverError;
    };

    // Malformed or out-of-range run configuration.
    class ConfigError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

} // namespace rasim

#endif
