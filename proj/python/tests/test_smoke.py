import math

import pytest

import transference as t


def test_group_and_coprimality():
    g = t.Group(101, 3)
    assert (g.N, g.k, g.arity) == (101, 3, 2)
    with pytest.raises(t.CoprimalityViolation):
        t.Group(100, 3)
    with pytest.raises(t.PreconditionError):
        t.Group(101, 2)


def test_weight_fn_roundtrip(tmp_path):
    g = t.Group(7, 3)
    f = t.WeightFn(g, [0.0, 0.5, 1.0, 0.25, 0.0, 0.0, 1.0])
    assert len(f) == 7 and f[2] == 1.0
    assert math.isclose(f.mean(), 2.75 / 7)
    path = str(tmp_path / "f.json")
    f.save(path)
    assert t.WeightFn.load(path).values == f.values
    with pytest.raises(t.PreconditionError):
        t.WeightFn(g, [1.0] * 6)


def test_generate_and_counts():
    g = t.Group(101, 3)
    nu, f = t.generate(g, "random_sparse", p=0.3, delta=0.5, seed=3)
    assert math.isclose(nu.mean(), 1.0, rel_tol=1e-12)
    assert all(a <= b for a, b in zip(f.values, nu.values))
    direct = t.ap_density(f, 3, "direct")
    assert math.isclose(direct, t.ap_density(f, 3, "fourier"), rel_tol=1e-9)
    assert t.ap_gap(f, f) == 0.0
    with pytest.raises(t.WrongK):
        t.ap_density(t.WeightFn.constant(t.Group(11, 4), 1.0), 4, "fourier")


def test_lfc_constant_majorant():
    g = t.Group(11, 3)
    nu = t.WeightFn.constant(g, 1.0, "nu")
    rep = t.lfc_exact(nu, "1" * 12)
    assert rep["estimate"] == 1.0 and rep["deviation"] == 0.0
    mc = t.lfc_monte_carlo(nu, "1" * 12, samples=1000, seed=1)
    assert mc["estimate"] == 1.0


def test_discrepancy_and_box_bound():
    g = t.Group(31, 3)
    nu, f = t.generate(g, seed=2)
    one = t.WeightFn.constant(g, 1.0, "nu")
    rep = t.discrepancy_search(nu, one, j=1, restarts=4, seed=5)
    box = t.box_norm_bound(nu, j=1)
    assert 0.0 <= rep["value"] <= box["value"] + 1e-9
    again = t.discrepancy_search(nu, one, j=1, restarts=4, seed=5)
    assert again == rep


def test_dense_model_contract():
    g = t.Group(301, 3)
    nu, f = t.generate(g, p=0.2, delta=0.5, seed=4)
    r = t.extract_dense_model(f, nu, epsilon=0.03, restarts=8, seed=5)
    assert r["converged"]
    assert all(0.0 <= v <= 1.0 for v in r["model"])
    assert abs(sum(r["model"]) / 301 - f.mean()) <= 1e-12
    model = t.WeightFn(g, r["model"], "fmodel")
    assert len(t.verify_model(f, model, restarts=2, seed=1)) == 3


def test_pipeline(tmp_path):
    cfg = {"N": 101, "samples": 2000, "patterns": 4, "restarts": 2,
           "output_dir": str(tmp_path / "out")}
    a = t.run_pipeline(cfg, include_timing=False)
    b = t.run_pipeline(dict(cfg, output_dir=str(tmp_path / "again")), include_timing=False)
    assert "timing" not in a
    a["config"].pop("output_dir")
    b["config"].pop("output_dir")
    assert a == b
    assert (tmp_path / "out" / "report.json").exists()
    with pytest.raises(t.PreconditionError):
        t.run_pipeline({"bogus": 1})
    assert t.default_config()["N"] == 3001
