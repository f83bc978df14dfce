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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "rasim/harness.hpp"
#include "rasim/validation.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>

int main(int argc, char **argv)
{
    rasim::RunConfig cfg = argc > 1 ? rasim::load_config(argv[1]) : rasim::parse_config("{}");
    rasim::ValidationOptions opt;
    opt.seed = cfg.algo.seed;
    const rasim::ValidationReport rep = rasim::run_validation(cfg, opt);
    for (const auto &c : rep.checks)
        std::printf("%s %-17s metric=%s %s %s | %s [%.0f ms]\n", c.passed ? "PASS" : "FAIL", c.id.c_str(),
                    rasim::format_number(c.metric).c_str(), c.lower_is_better ? "<=" : ">=",
                    rasim::format_number(c.threshold).c_str(), c.detail.c_str(), c.wall_ms);
    std::printf("%s (%zu checks)\n", rep.passed() ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED", rep.checks.size());
    return rep.passed() ? EXIT_SUCCESS : EXIT_FAILURE;
}
