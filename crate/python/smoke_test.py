"""Smoke test for the corrdyn extension module.

Build and install first:
    maturin build --release -m crates/python/Cargo.toml -o dist && pip install dist/corrdyn-*.whl
"""

import math

import corrdyn


def main():
    corr = corrdyn.Correspondence("f=1,0,0,1;g=0,0,1")
    assert (corr.d, corr.e) == (3, 2)

    try:
        corr.normalize()
    except ValueError as exc:
        print("normalize:", exc)
    form, pre, post = corrdyn.Correspondence("f=0,0,0,1;g=0,0,1").normalize()
    print("normal form:", form, pre, post)

    crit = corr.critical_points()
    assert len(crit) == corr.d * corr.e - 1, crit
    for y in corr.branch_step(2 + 0j):
        assert abs(y * y - 9) < 1e-9

    g = corr.green_min(0j, depth=12)
    assert 0.0 <= g.lo <= g.hi, g
    big = corr.green_min(1e6 + 0j, depth=12)
    assert big.lo > 0.0, big
    assert math.isfinite(corr.lambda_local()) and math.isfinite(corr.lambda_local(p=3))
    print("green_min(0):", g)

    mean, stderr = corr.expected_green_mc(1 + 1j, samples=64, seed=3)
    assert mean >= 0.0 and stderr >= 0.0
    assert (mean, stderr) == corr.expected_green_mc(1 + 1j, samples=64, seed=3)

    nf = corrdyn.NormalForm("s=2,3;t=1")
    print("places:", nf.support_places(), "hweil:", nf.weil_height(), "hcrit:", nf.crit_height(depth=12))
    assert nf.weil_height() > 0.0
    assert corrdyn.NormalForm("s=1,1;t=1").weil_height() == 0.0

    fam = corrdyn.UnicriticalFamily(3, 2)
    assert fam.fn_poly(3) == [0, 0, 0, 0, 2, 2, 2, 0, 0, 1]
    assert fam.has_primitive_prime_factor(2) == (True, [2, 1])
    certs = fam.period_search(3, 2)
    print("threshold:", fam.bound_threshold(), "certificates:", len(certs))
    try:
        fam.fn_poly(30)
    except corrdyn.BudgetExceeded as exc:
        print("budget:", exc)
    else:
        raise AssertionError("expected BudgetExceeded")
    try:
        corrdyn.UnicriticalFamily(4, 2)
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError for p=4")

    assert corrdyn.member(0j)[0] == "survived"
    status, k = corrdyn.member(5 + 0j)
    assert status == "escaped" and 1 <= k <= 24

    pixels, w, h, summary = corrdyn.render(width=32, height=32, depth=10)
    assert len(pixels) == w * h == 1024
    print("render:", summary)

    code, out, _ = corrdyn.cli(["fn", "--p", "3", "--e", "2", "--n", "3"])
    assert code == 0 and out == "p=3; coeffs=0,0,0,0,2,2,2,0,0,1\n"

    print("ok")


if __name__ == "__main__":
    main()
