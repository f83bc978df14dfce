# SPDX-License-Identifier: Apache-2.0
#
# rasim: rotatable-antenna spectrum-sharing simulator
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ------------------------------------------------------------------------
"""Rotatable-antenna spectrum-sharing simulator."""

from ._rasim import (  # noqa: F401
    AlgoConfig,
    BeamBranch,
    ConfigError,
    GainPattern,
    InfeasibleStartError,
    RunConfig,
    Scenario,
    Scheme,
    SolverError,
    __version__,
    alternating_optimize,
    channel_vector,
    evaluate_scheme,
    gain_pattern,
    interference_power,
    lipschitz_bound,
    load_config,
    optimal_beamformer,
    parse_config,
    sca,
    sweep_antennas,
    sweep_power,
    validate,
)
