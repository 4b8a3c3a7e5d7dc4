import math

import pytest

import fxt_mvi


def test_example1_certificate():
    cert = fxt_mvi.preset_certificate("example1")
    assert cert["c"] == pytest.approx(1 / math.sqrt(5.84), abs=1e-15)
    assert cert["alpha1_window"] == (0.0, 1.0)
    assert cert["k_star"] == 6829
    assert not cert["uncertified_alpha1"]


def test_example2_flags_uncertified_alpha():
    cert = fxt_mvi.preset_certificate("example2")
    assert cert["uncertified_alpha1"]
    assert cert["k_star"] is None
    assert cert["alpha1_window"][0] > 0.97


def test_bounds_rejects_lambda_outside_window():
    with pytest.raises(fxt_mvi.Error, match="outside"):
        fxt_mvi.bounds(11, 5, 0.9, 20, 20, 0.8, 1.2)
    assert fxt_mvi.lambda_upper_bound(11, 5) == pytest.approx(0.88)


def test_prox_maps():
    assert fxt_mvi.prox_l1([3.0, -0.5], 1.0) == [2.0, 0.0]
    assert fxt_mvi.project_ball([5.0, 6.0], [2.0, 2.0], 1.0) == pytest.approx([2.6, 2.8])
    assert fxt_mvi.project_box([-2.0, 3.0], [0.0, 0.0], [1.0, 1.0]) == [0.0, 1.0]


def test_xi_round_trip():
    a1, a2 = fxt_mvi.xi_params(10.0)
    assert (a1, a2) == pytest.approx((0.8, 1.2))


def test_solve_example1_converges():
    run = fxt_mvi.solve("example1", [0.0, 0.0], tol=1e-10)
    assert run["termination"] == "residual_met"
    assert run["error"][-1] < 1e-9
    assert run["reference"] == pytest.approx([2.707, 2.707], abs=5e-4)


def test_dataset_is_deterministic():
    a = fxt_mvi.generate_dataset(42)
    b = fxt_mvi.generate_dataset(42)
    assert a == b
    labels, features = a
    assert len(labels) == 100 and len(features[0]) == 3


def test_cli_in_process():
    code, out, err = fxt_mvi.run_cli(["bounds", "--preset", "example2"])
    assert code == 0
    assert "flag=uncertified_alpha1" in out
    code, _, err = fxt_mvi.run_cli(["bounds", "--mu", "11", "--L", "5", "--lambda", "0.9"])
    assert code == 1 and "lambda outside (0, 0.88)" in err


def test_property_suite_passes():
    results = fxt_mvi.property_suite(1)
    assert results and all(passed for _, passed, _ in results)
