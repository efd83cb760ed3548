"""Smoke test for the optb extension module.

Build and install first:
    pip install --no-build-isolation ./crates/py
then run `python python/smoke_test.py`.
"""

import cmath

import optb


def close(a, b, tol=1e-10):
    return abs(a - b) <= tol * (1 + abs(b))


def main():
    m4 = optb.Bundle(4)
    assert m4.n == 4 and not m4.has_extra_component
    assert close(m4.torsion_lambda_at(0j), 4)
    assert all(passed for _, passed, _ in m4.identities([(1, 0), (2, 1)]))

    try:
        optb.Bundle(2)
    except ValueError:
        pass
    else:
        raise AssertionError("M_2 is not hyperbolic")

    word = optb.MonodromyWord("L R^-6")
    assert word == optb.MonodromyWord.bundle(4)
    assert word.torsion_polynomial() == "-4*x1*x3^3 + x3^4 + 3*x2*x3^2 + 6*x1*x3 - 3*x3^2 - 2*x2 + 4"
    assert (word * word.inverse()).apply() == ("x1", "x2", "x3")

    assert optb.cheb(3) == "y^2 - 1"
    b = cmath.rect(1.3, 0.4)
    assert close(optb.cheb_eval(5, b + 1 / b), (b**5 - b**-5) / (b - 1 / b))

    sf = optb.SlopeFns(4, 1, 0)
    report = sf.fiber_sum(1.25 + 0.5j)
    assert report["normalized_residual"] < 1e-8
    assert len(report["roots"]) == report["fiber_degree"]
    assert max(sf.generic_residuals(seed=3, count=4)) < 1e-8
    try:
        sf.fiber_sum(2)
    except optb.NonGenericError:
        pass
    else:
        raise AssertionError("c = 2 is a fibered trace")

    cc = optb.SlopeFns(-3, 3, 1).cross_check(samples=10, seed=1)
    assert cc["max_relative_deviation"] < 1e-8 and len(cc["rows"]) >= 10

    m6 = optb.Bundle(6)
    assert close(m6.extra_torsion(1, 0, 1j), 1)
    c = 0.75 + 1.25j
    extra = m6.fiber_sum_extra(5, 1, c)
    assert close(complex(*extra["sum"]), optb.extra_closed_form(6, c))

    passed, _ = optb.jacobi_selftest(seed=5, trials=20)
    assert passed
    assert optb.run_cli(["identities", "--n", "-3", "--output", "/dev/null"]) == 0
    print("optb", optb.__version__, "smoke test passed")


if __name__ == "__main__":
    main()
