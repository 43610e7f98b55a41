import math

import pytest

import bergman


def test_weight_constant_of_one():
    cfg = bergman.Exponents(p=2, q=2, alpha=0)
    k = bergman.weight_constant("const(1)", cfg)
    assert k["value"] == pytest.approx(1.0, rel=1e-12)
    assert k["intervals"] > 0


def test_constant_weight_bp_value():
    cfg = bergman.Exponents(p=3, q=3, alpha=1)
    k = bergman.weight_constant("const(1)", cfg, kind="bp")
    assert k["value"] == pytest.approx(2.0 ** -3, rel=1e-10)


def test_apply_and_function_round_trip():
    f = bergman.Function.parse("box(0,1)")
    assert str(f) == "box(0,1)"
    v = bergman.apply("bergman", f, 0.5, 0.5)
    assert v == bergman.apply("bergman", "box(0,1)", 0.5, 0.5)
    assert v > 0
    s = bergman.apply("s", "trunc(-1.5,1)", 0.2, 0.3, a=0.7)
    t = bergman.apply("t", "trunc(-1.5,1)", 0.2, 0.3, a=0.7)
    assert s <= t


def test_shifted_kernel_closed_form():
    assert bergman.apply("bergman", "kern(1,3)", 0.0, 1.0) == pytest.approx(4.0 / 9.0, rel=1e-8)


def test_norm_ratio():
    r = bergman.norm_ratio("bergman", "box(0,1)", bergman.Exponents(), tol=1e-5)
    assert r["source"] == pytest.approx(1.0)
    assert r["ratio"] == pytest.approx(3.0834755, rel=1e-5)


def test_dyadic_and_tiling():
    cfg = bergman.Exponents()
    value, boxes = bergman.dyadic_apply("box(0,1)", cfg, 0.5, 0.5, beta=1 / 3)
    assert boxes > 0 and value > 0
    assert bergman.tiling_violations(0.0, samples=2000) == 0
    assert bergman.tiling_violations(1 / 3, samples=2000) == 0


def test_schur_and_lemma():
    assert bergman.admissible(2, 2, 0, 0)
    assert not bergman.admissible(2, 2, 1, -0.6)
    r, s, t = bergman.solve_rst(2, 2, 0, 0)
    assert 0 < s < r and 0 < t < 1
    with pytest.raises(bergman.InfeasibleError):
        bergman.solve_rst(2, 2, 1, -0.6)
    res = bergman.lemma_scaling(2, 0, 2, [0.5, 1, 2, 4])
    assert res["slope"] == pytest.approx(res["expected_slope"], rel=1e-2)


def test_errors():
    with pytest.raises(bergman.InputError):
        bergman.Function.parse("box(")
    with pytest.raises(bergman.DivergenceError):
        bergman.apply("bergman", "modpow(-2.5)", 0.0, 1.0)
    with pytest.raises(bergman.Error):
        bergman.Exponents(p=0.5)
    with pytest.raises(bergman.InputError):
        bergman.Point(0.0, -1.0)


def test_cli_entry():
    code, out, err = bergman.run_cli(["weight-constant", "-o", "-"])
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "#bergman-csv 1 weight-constant"
    row = dict(zip(lines[1].split(","), lines[2].split(",")))
    assert math.isclose(float(row["value"]), 1.0, rel_tol=1e-12)
    assert bergman.run_cli(["schur", "--alpha", "1", "--a", "-0.6"])[0] == 2
