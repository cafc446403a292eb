import math

import numpy as np
import pytest

import openmhd


def small(name, n=8, horizon=0.01, dt=2e-3):
    c = openmhd.scenario_config(name)
    c["grid"]["nx"] = c["grid"]["ny"] = n
    c["time"].update(horizon=horizon, window=horizon, dt=dt)
    return c


def test_scenarios_are_listed_sorted():
    names = openmhd.list_scenarios()
    assert names == sorted(names)
    assert {"stationary", "inflow-channel", "manufactured-full"} <= set(names)


def test_exponent_condition():
    assert openmhd.exponent_condition_holds(4.0, 4.0)
    assert not openmhd.exponent_condition_holds(2.0, 4.0, 3)


def test_stationary_run_by_name_and_dict():
    r = openmhd.run(small("stationary"))
    assert r["exit_code"] == 0
    rep = r["report"]
    assert rep["converged"] is True
    assert rep["diagnostics"]["all_pass"] is True
    assert rep["fixed_point"]["converged"] is True
    rho = r["final"]["rho"]
    assert rho.shape == (9, 9)
    assert r["final"]["b"].shape == (3, 9, 9)
    np.testing.assert_allclose(rho, 1.0, atol=1e-12)
    assert math.isclose(r["times"][-1], 0.01)


def test_translation_tracks_reference():
    r = openmhd.run(small("translation-inflow", n=16, horizon=0.1, dt=4e-3))
    assert r["exit_code"] == 0
    assert r["report"]["errors"]["rho"]["l2_final"] < 0.02


def test_invalid_config_raises_with_issues():
    c = small("stationary")
    c["norms"]["p"] = 2.0
    with pytest.raises(openmhd.OpenMHDError) as info:
        openmhd.validate_config(c)
    assert info.value.code == "ExponentConditionViolated"
    assert len(info.value.issues) >= 1


def test_unknown_scenario():
    with pytest.raises(openmhd.OpenMHDError) as info:
        openmhd.scenario_config("")
    assert info.value.code == "UnknownScenario"


def test_report_is_written(tmp_path):
    r = openmhd.run(small("stationary"), out_dir=str(tmp_path))
    assert r["written_to"] == str(tmp_path)
    assert (tmp_path / "report.json").exists()
    assert any((tmp_path / "fields").iterdir())


def test_convergence_study_shape():
    c = small("translation-inflow", n=8, horizon=0.064, dt=8e-3)
    s = openmhd.convergence_study(c, 2)
    assert len(s["levels"]) == 2
    assert s["levels"][1]["nx"] == 16
