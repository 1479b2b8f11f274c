import numpy as np
import pytest

import pdasreg

SIX_POINT = [6, 4, 2, 9, 11, 4]
CYCLE_Y = [603, 996, 502, 19, 56, 139]


def test_pav_and_pdas_agree_on_small_example():
    a = pdasreg.pav(SIX_POINT)
    b = pdasreg.pdas_ir(SIX_POINT)
    np.testing.assert_array_equal(a["theta"], [4, 4, 4, 8, 8, 8])
    np.testing.assert_array_equal(b["theta"], a["theta"])
    assert a["report"].merge_count == 4
    assert b["report"].status == "Optimal"
    assert b["blocks"] == [(0, 2), (3, 5)]
    np.testing.assert_allclose(b["z"], [2, 2, 0, 1, 4])
    assert b["report"].objective == pytest.approx(17.0)


def test_weighted_ir_and_warm_start():
    r = pdasreg.pdas_ir([2.0, 1.0], w=[1.0, 3.0])
    np.testing.assert_allclose(r["theta"], [1.25, 1.25])
    y = pdasreg.generate("linear", 500, 3)
    cold = pdasreg.pdas_ir(y)
    warm = pdasreg.pdas_ir(y, warm_start=cold["blocks"])
    np.testing.assert_allclose(warm["theta"], cold["theta"], atol=1e-12)
    assert warm["report"].iterations == 0
    assert pdasreg.kkt_check_ir(y, cold["theta"], cold["z"], 1e-8)


def test_ir_matches_oracle():
    rng = np.random.default_rng(5)
    y = rng.normal(size=40).cumsum()
    ours = pdasreg.pdas_ir(y)
    ref = pdasreg.dual_cd_ir(y)
    assert pdasreg.objective_ir(y, ours["theta"]) == pytest.approx(
        pdasreg.objective_ir(y, ref["theta"]), rel=1e-9, abs=1e-9
    )


def test_plain_cycles_and_safeguards_converge():
    plain = pdasreg.tf(CYCLE_Y, 100.0, order=2, variant="plain", warm_start="NPPP")
    assert plain["report"].status == "Cycled"
    assert plain["report"].cycle_period == 4
    ref = pdasreg.exhaustive_tf(CYCLE_Y, 100.0, order=2)
    for variant in ("sf1", "sf2"):
        r = pdasreg.tf(CYCLE_Y, 100.0, order=2, variant=variant)
        assert r["report"].status == "Optimal"
        assert len(r["partition"]) == 4
        np.testing.assert_allclose(r["theta"], ref["theta"], atol=1e-8)
        assert pdasreg.optimality_check_tf(CYCLE_Y, r["theta"], r["z"], 100.0, order=2)


def test_tf_positive_penalty_matches_oracle():
    y = pdasreg.generate("uniform", 60, 9)
    r = pdasreg.tf(y, 10.0, order=1, penalty="l1pos")
    ref = pdasreg.dual_cd_tf(y, 10.0, order=1, penalty="l1pos")
    obj = pdasreg.objective_tf(y, r["theta"], 10.0, order=1, penalty="l1pos")
    ref_obj = pdasreg.objective_tf(y, ref["theta"], 10.0, order=1, penalty="l1pos")
    assert obj == pytest.approx(ref_obj, rel=1e-9)


def test_generate_is_deterministic():
    a = pdasreg.generate("uniform", 100, 42)
    b = pdasreg.generate("uniform", 100, 42)
    np.testing.assert_array_equal(a, b)
    assert a.min() >= 0.0 and a.max() <= 10.0
    p = pdasreg.generate("perturb", 100, 1, base=a)
    assert np.abs(p - a).max() < 1.0


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        pdasreg.pdas_ir([1.0, 2.0], w=[1.0, -1.0])
    with pytest.raises(ValueError):
        pdasreg.tf([1.0, 2.0], 1.0, order=3)
    with pytest.raises(ValueError):
        pdasreg.tf(CYCLE_Y, 1.0, order=2, warm_start="NPX")
    with pytest.raises(ValueError):
        pdasreg.exhaustive_tf(np.zeros(20), 1.0, order=1)
    with pytest.raises(pdasreg.NotConverged):
        pdasreg.dual_cd_tf(CYCLE_Y, 100.0, order=2, max_sweeps=1)
    assert issubclass(pdasreg.NotConverged, pdasreg.Error)
