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

#ifndef RASIM_VALIDATION_HPP
#define RASIM_VALIDATION_HPP

// Oracle-backed acceptance suite.

#include "rasim/harness.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rasim
{
    struct ValidationOptions
    {
        std::uint64_t seed = 1;
        // Test hooks: scale the analytic gradient by (1 + gradient_corruption) in the gradient
        // check, and build the majorization bound with lipschitz_scale * L_g.
        double gradient_corruption = 0.0;
        double lipschitz_scale = 1.0;
        // Check ids to run; empty runs all.
        std::vector<std::string> only;
    };

    struct CheckResult
    {
        std::string id;          // stable short name, e.g. "gradient"
        std::string description; // what was checked and against which threshold
        bool passed = false;
        double metric = 0.0;    // worst observed value
        double threshold = 0.0; // pass bound for `metric`
        bool lower_is_better = true; // pass when metric <= threshold, else metric >= threshold
        std::string detail;
        double wall_ms = 0.0;
    };

    struct ValidationReport
    {
        std::vector<CheckResult> checks;
        bool passed() const;
        std::string to_json() const;
    };

    // Ids in execution order.
    const std::vector<std::string> &validation_check_ids();

    // Throws ConfigError for an unknown id in `only`.
    ValidationReport run_validation(const RunConfig &cfg, const ValidationOptions &opt = {});

} // namespace rasim

#endif
