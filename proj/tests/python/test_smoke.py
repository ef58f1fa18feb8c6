"""Smoke tests for the python module: thin checks that the bindings wire
through to the core and return sane numbers."""

import json
import math

import numpy as np
import pytest

import _sectorlab as sl


def test_character_table_s3():
    table = sl.character_table("S3")
    assert sorted(table["dims"]) == [1, 1, 2]
    assert len(table["conjugacy_classes"]) == 3


def test_character_table_rejects_unknown_group():
    with pytest.raises(sl.SectorlabError):
        sl.character_table("E8")


def test_sector_decomposition_z2():
    u = np.diag([1.0, -1.0]).astype(complex)
    dec = sl.decompose_sectors("Z2", {1: u})
    assert dec["center_dim"] == 2
    assert len(dec["sectors"]) == 2
    for s in dec["sectors"]:
        assert s["multiplicity"] == 1
        assert s["irrep_dim"] == 1
    w = dec["global_unitary"]
    assert np.allclose(w @ w.conj().T, np.eye(2))


def test_charge_readout_balanced_state():
    u = np.diag([1.0, -1.0]).astype(complex)
    rho = np.full((2, 2), 0.5, dtype=complex)
    charges = sl.charge_readout("Z2", {1: u}, rho)
    assert len(charges) == 2
    for w in charges.values():
        assert abs(w - 0.5) < 1e-12


def test_gibbs_state_matches_closed_form():
    h = np.diag([0.0, 1.0]).astype(complex)
    for beta in (0.5, 1.0, 2.0):
        rho = sl.gibbs_state(h, beta)
        z = 1.0 + math.exp(-beta)
        assert abs(rho[0, 0].real - 1.0 / z) < 1e-12
        assert abs(rho[1, 1].real - math.exp(-beta) / z) < 1e-12


def test_thermal_analysis_plus_state_not_thermal():
    h = np.diag([0.0, 1.0]).astype(complex)
    plus = np.full((2, 2), 0.5, dtype=complex)
    out = sl.thermal_analysis(h, [0.5, 1.0, 2.0],
                              [np.eye(2, dtype=complex), h], plus)
    assert not out["feasible"]
    assert out["nu_minus_mass"] > 1e-6
    assert not out["norm_bound_ok"]
    gibbs = sl.gibbs_state(h, 1.0)
    out2 = sl.thermal_analysis(h, [0.5, 1.0, 2.0],
                               [np.eye(2, dtype=complex), h], gibbs)
    assert out2["feasible"]
    assert out2["nu_minus_mass"] < 1e-8


def test_measurement_of_plus_state():
    sz = np.diag([1.0, -1.0]).astype(complex)
    plus = np.full((2, 2), 0.5, dtype=complex)
    out = sl.measurement(sz, plus)
    assert out["scheme_ok"]
    assert out["max_deviation"] < 1e-12
    assert np.allclose(out["distribution"], [0.5, 0.5])
    # Conditional states collapse onto the eigenprojections.
    conds = out["conditional_states"]
    assert np.allclose(conds[0], np.diag([0.0, 1.0]))
    assert np.allclose(conds[1], np.diag([1.0, 0.0]))


def test_run_model_ssb_report():
    spec = json.dumps({
        "group": {"name": "Z2"},
        "algebra": {"blocks": [2, 2]},
        "action": {"generators": [{"element": 1, "block_perm": [1, 0]}]},
        "representation": {"blocks": [0]},
        "subgroup": [0],
        "analyses": [{"name": "ssb"}],
    })
    report = json.loads(sl.run_model(spec))
    res = report["results"][0]
    assert res["status"] == "broken"
    assert res["three_centre_dims"] == [2, 1, 2]
    assert res["goldstone_gap"] == 4
    assert res["broken_element_intertwiner_dims"]["1"] == 0


def test_run_model_roundtrip_and_determinism():
    spec = json.dumps({
        "group": {"name": "Z2"},
        "unitary_rep": {
            "generators": [{"element": 1, "matrix": [[1, 0], [0, -1]]}]
        },
        "states": {"plus": {"vector": [[0.7071067811865475, 0],
                                       [0.7071067811865475, 0]]}},
        "analyses": [{"name": "sectors", "states": ["plus"]}],
    })
    a = sl.run_model(spec, seed=7)
    b = sl.run_model(spec, seed=7)
    assert a == b
    report = json.loads(a)
    assert report["results"][0]["center_dim"] == 2
    charge = report["results"][0]["state_reports"]["plus"][
        "charge_distribution"]
    assert all(abs(v - 0.5) < 1e-9 for v in charge.values())
