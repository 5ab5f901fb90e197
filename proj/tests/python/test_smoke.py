"""Smoke tests for the python module: plan, classify, integrate, verify."""

import math

import pytest

import kronkit as kk


def test_plan_and_classify():
    doc = kk.plan_ham(3, 3, "atropic", 0, omega=[1.0, math.sqrt(2), 1 / math.sqrt(2)])
    assert doc["kind"] == "ham-noncompact"
    sys = kk.System(doc)
    cls = sys.classify()
    assert cls["class"] == "atropic"
    assert cls["form_is_exact"] is False
    assert cls["intersection_dim"] == 1
    fam = sys.family()
    assert fam["d"] == 0


def test_origin_frequency_matches_plan():
    omega = [1.0, math.sqrt(2), 1 / math.sqrt(2)]
    sys = kk.System(kk.plan_ham(3, 3, "atropic", 0, omega=omega))
    freq = sys.frequency(["0"], ["0"], ["0"])
    assert max(abs(a - b) for a, b in zip(freq, omega)) < 1e-9

    run = kk.frequencies(sys, [0.0] * sys.dim, dt=1e-3, horizon=20.0)
    assert max(abs(a - b) for a, b in zip(run["omega"], omega)) < 1e-6


def test_integrate_returns_arrays():
    sys = kk.System(kk.plan_ham(2, 1, "strictly-isotropic", 0, omega=[2.0]))
    out = kk.integrate(sys, [0.0, 0.0, 0.0, 0.0], dt=1e-2, horizon=1.0)
    assert out["stop"] == "completed"
    assert out["states"].shape == (101, 4)
    assert out["t"][-1] == pytest.approx(1.0)
    assert out["states"][-1][1] == pytest.approx(2.0, rel=1e-12)


def test_expr_and_brackets():
    sys = kk.System(kk.plan_ham(2, 1, "strictly-isotropic", 0, omega=[1.0]))
    q = kk.Expr("q1", {"q1": "line"})
    p = kk.Expr("p1", {"p1": "line"})
    one = kk.Expr("1")
    assert sys.poisson_bracket(q, p) == one
    H = sys.hamiltonian()
    assert sys.poisson_bracket(kk.Expr("u1", {"u1": "line"}), H).is_zero()

    e = kk.Expr("sin(w)^2 + cos(w)^2", {"w": "angle"})
    assert e == one
    d = kk.Expr("p1^3/3", {"p1": "line"}).derivative("p1")
    assert d == kk.Expr("p1^2", {"p1": "line"})


def test_reversibility_binding():
    sys = kk.System(kk.plan_ham(3, 3, "atropic", 0, omega=[1.0, 0.5, 0.25]))
    rep = sys.reversibility()
    assert rep["reversible"] is True
    assert tuple(rep["type"]) == (4, 2)  # (s+2k+l, s+l) for (s,k,l) = (1,1,1)


def test_exceptional_period_closed_form():
    out = kk.exceptional_period(1, 1.0, 3.0)
    assert out["varpi_closed_form"] == pytest.approx(2.0)
    assert out["relative_error"] < 1e-6


def test_recurrence_and_diophantine():
    rec = kk.recurrence_time([2 * math.pi / 10], T=1.0, eps=1e-9)
    assert rec["Theta"] == 10.0

    dio = kk.diophantine([1.0, 2.0], tau=1.0, j_max=10, exact=["1", "2"])
    assert dio["resonant"] is True
    assert dio["witness_exact"] is True

    with pytest.raises(kk.KronError):
        kk.recurrence_time([1.0, 1.6180339887], T=1.0, eps=1e-13)


def test_verify_suites():
    reports = kk.verify_ham(3, 3, "atropic", 0, omega=[1.0, 0.7, 0.3], samples=40)
    assert all(r["verdict"] != "failed" for r in reports)
    ids = {r["id"] for r in reports}
    assert "uniqueness-evidence" in ids and "classification" in ids

    rev = kk.verify_rev(2, 2, 1, 1, 2, omega=[0.9, 1.7], samples=40)
    assert all(r["verdict"] != "failed" for r in rev)


def test_uniqueness_scan_counts():
    sys = kk.System(kk.plan_ham(3, 3, "atropic", 0, omega=[1.0, 0.5, 0.25], compact=True))
    claim = kk.uniqueness_scan(sys, samples=60, seed=5)
    assert claim["verdict"] == "evidence-only"
    assert claim["details"]["escapes"] == 60
