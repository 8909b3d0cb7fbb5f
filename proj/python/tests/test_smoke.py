import json

import numpy as np
import pytest

import mpart


def fast_config(seed=7):
    cfg = mpart.SolverConfig()
    cfg.seed = seed
    cfg.multistarts = 8
    return cfg


def test_instance_round_trip(tmp_path):
    inst = mpart.random_instance(2, 2, 60, 3)
    path = tmp_path / "inst.json"
    inst.save(str(path))
    again = mpart.Instance.load(str(path))
    assert again.to_json() == inst.to_json()
    assert json.loads(inst.to_json())["dimension"] == 2


def test_custom_mass():
    atoms = np.random.default_rng(0).uniform(-1, 1, size=(2, 40))
    mu = mpart.MassDistribution("blob", atoms)
    assert len(mu) == 40
    assert mu.weights.shape == (40,)
    inst = mpart.Instance(2, [mu, mu])
    assert inst.dimension == 2


def test_cone_found_and_verified():
    inst = mpart.random_instance(2, 2, 60, 11)
    result = mpart.solve_cone(inst, 2, fast_config())
    assert result["status"] == "Found"
    report = mpart.verify(inst, result)
    assert report["pass"]


def test_fan_origin_only_is_infeasible():
    inst = mpart.random_instance(2, 2, 40, 5)
    result = mpart.solve_fan(inst, [0.5, 0.5], fast_config(), lift="never")
    assert result["status"] == "Infeasible"


def test_simplex_counterexample_not_found():
    inst = mpart.make_simplex_counterexample(2)
    result = mpart.solve_cone(inst, 2, fast_config())
    assert result["status"] == "NotFound"


def test_hs_planted():
    inst = mpart.make_planted_hs_instance(2, 40, 3)
    result = mpart.hs_after_transform(inst, fast_config())
    assert result["status"] == "Found"
    svg = mpart.plot_svg(inst, result)
    assert svg.startswith("<svg") or svg.startswith("<?xml")


def test_feasibility_and_lift():
    ok, why = mpart.feasibility(2, 2, 3, "fan_origin")
    assert not ok and why
    p = mpart.gnomonic_lift(np.array([1.0, 2.0]))
    assert np.linalg.norm(p) == pytest.approx(1.0)
    assert np.allclose(mpart.gnomonic_project(p), [1.0, 2.0])


def test_winding_and_degree():
    circle = [(np.cos(t), np.sin(t)) for t in np.linspace(0, 2 * np.pi, 64, endpoint=False)]
    assert mpart.winding_number(circle) == 1
    assert mpart.sphere_map_degree(lambda x: -x, 3) == -1


def test_bad_k_is_infeasible():
    result = mpart.solve_cone(mpart.random_instance(2, 2, 20, 1), 1)
    assert result["status"] == "Infeasible"


def test_bad_input_raises():
    with pytest.raises(mpart.MpartError):
        mpart.MassDistribution("bad", np.ones((2, 3)), np.array([1.0, -1.0, 1.0]))
