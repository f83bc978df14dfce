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
"""Smoke tests for the Python bindings."""

import json
import math

import numpy as np
import pytest

rasim = pytest.importorskip("rasim")


def test_reference_scenario():
    sc = rasim.Scenario.reference()
    assert sc.n == 4
    assert sc.m == 4
    assert sc.p_max == pytest.approx(10 ** (-0.7))


def test_beamformer_pins_interference():
    rng = np.random.default_rng(1)
    h_ss = rng.normal(size=4) + 1j * rng.normal(size=4)
    h_sp = rng.normal(size=4) + 1j * rng.normal(size=4)
    crit = 0.2 * abs(np.vdot(h_sp, h_ss)) ** 2 / np.vdot(h_ss, h_ss).real
    w, branch = rasim.optimal_beamformer(h_ss, h_sp, 0.2, 1e-2 * crit)
    assert branch == rasim.BeamBranch.Constrained
    assert rasim.interference_power(w, h_sp) == pytest.approx(1e-2 * crit, rel=1e-10)
    assert np.vdot(w, w).real <= 0.2 * (1 + 1e-12)


def test_channel_vector_shape():
    sc = rasim.Scenario.reference()
    f = np.tile([[0.0], [0.0], [1.0]], (1, sc.n))
    h = rasim.channel_vector(sc, f, sc.sr)
    assert h.shape == (4,)
    assert np.all(np.abs(h) > 0)


def test_sca_improves_signal():
    sc = rasim.Scenario.reference()
    f0 = np.tile([[0.0], [0.0], [1.0]], (1, sc.n))
    h_ss = rasim.channel_vector(sc, f0, sc.sr)
    h_sp = rasim.channel_vector(sc, f0, sc.pr)
    w, _ = rasim.optimal_beamformer(h_ss, h_sp, sc.p_max, sc.interference_limit)
    res = rasim.sca(sc, w, f0)
    assert res["signal"] > abs(np.vdot(w, h_ss)) ** 2
    assert res["leakage"] <= sc.interference_limit * (1 + 1e-6)
    assert np.allclose(np.linalg.norm(res["f"], axis=0), 1.0)


def test_schemes_and_ao():
    sc = rasim.Scenario.reference()
    ao = rasim.alternating_optimize(sc)
    assert ao["diagnostic"] == ""
    trace = ao["sinr_trace"]
    assert all(b >= a for a, b in zip(trace, trace[1:]))
    ra = rasim.evaluate_scheme(sc, rasim.Scheme.Rotatable)["sinr"]
    fixed = rasim.evaluate_scheme(sc, rasim.Scheme.Fixed)["sinr"]
    assert ra > fixed


def test_config_errors():
    cfg = rasim.parse_config('{"p_max_dbm": 29}')
    assert cfg.scenario().p_max == pytest.approx(10 ** (-0.1))
    with pytest.raises(rasim.ConfigError):
        rasim.parse_config('{"bogus": 1}')
    with pytest.raises(ValueError):
        rasim.parse_config('{"gamma_w": -1}')


def test_sweep_power_csv():
    res = rasim.sweep_power('{"power_sweep_dbm": [15, 25], "random_realizations": 5}')
    assert res["failures"] == []
    assert len(res["rows"]) == 8
    header = res["csv"].splitlines()[0]
    assert header == ("scheme,variable,value,sinr_db,sinr_linear,interference_dbm,"
                      "txpower_dbm,iterations,wall_ms,seed")
    for row in res["rows"]:
        assert row["sinr_db"] == pytest.approx(10 * math.log10(row["sinr_linear"]))


def test_gain_pattern_csv():
    text = rasim.gain_pattern('{"pattern_step_deg": 45, "schemes": ["ra", "fixed"]}')
    lines = text.splitlines()
    assert lines[0] == "scheme,phi_deg,gain_db,power_w"
    assert len(lines) == 1 + 2 * 5


def test_validate_subset():
    passed, report = rasim.validate(only=["beamformer", "pattern_integral"])
    assert passed
    checks = json.loads(report)["checks"]
    assert [c["id"] for c in checks] == ["beamformer", "pattern_integral"]
