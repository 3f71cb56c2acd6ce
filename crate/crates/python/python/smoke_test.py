"""Smoke test for the compiled extension. Run after `maturin develop`."""

import flatmodels as fm


def main():
    f9 = fm.FieldSpec(3, 2)
    assert f9.q == 9
    assert f9.modulus == [1, 0, 1]
    assert len(f9.elements()) == 9
    x = [0, 1]
    assert f9.mul(x, x) == [2, 0]
    assert f9.mul(x, f9.inv(x)) == [1, 0]

    r = fm.Ramification(5, 4)
    assert (r.e0, r.e1) == (1, 0)
    assert r.model_count(5) == 8
    assert r.census_count(5) == 8
    assert r.coefficients() == [3, 1, 0, 0, 0]
    assert r.zeta_factors(5) == [(0, 3), (1, 1)]
    assert r.dimension() == 1
    assert fm.Ramification(5, 2).dimension() == 0

    big = fm.Ramification(13, 200).model_count(13**3)
    assert big > 2**64

    cells = r.census()
    assert {"s", "t", "case", "r", "h"} <= set(cells[0])
    assert sum(5 ** c["h"] for c in cells) == 8

    report = fm.Ramification(3, 4).oracle(k=2)
    assert report["total"] == fm.Ramification(3, 4).model_count(9)
    assert report["cross_check_failures"] == []

    # v = 1 in cell (0, 1) for p = 5, e = 7
    f5 = fm.FieldSpec(5)
    assert fm.Ramification(5, 7).conditions(f5, 0, 1, {0: [1]}) == (True, True)

    ex = fm.example_decomposition(7)
    assert ex["total"] == 10 and ex["aut_order"] == 7 * 8 * 36

    for bad in [lambda: fm.FieldSpec(4), lambda: r.model_count(7)]:
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    checks = fm.verify("quick")
    assert checks and all(ok for _, ok, _ in checks), checks
    print("ok")


if __name__ == "__main__":
    main()
