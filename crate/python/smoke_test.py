"""Smoke test for the littlewood extension module.

Build and install first:

    pip install maturin
    cd crates/py && maturin develop --release
"""

from fractions import Fraction as F

import littlewood as lw


def main():
    assert lw.fib(10) == 55
    assert lw.golden_convergent(6) == F(5, 8)
    assert lw.cf_expand(F(5, 8)) == [1, 1, 1, 2]
    assert lw.zeckendorf(100) == [11, 6, 4]
    assert lw.fib_gcd(12, 18) == 8
    assert lw.dist_int(F(7, 10)) == F(3, 10)
    assert lw.select_kstar(10) == 7

    rec = lw.min_product(7, 1)
    assert rec["value"] == F(5, 169) and rec["x_min"] == 1
    assert rec["scaled"] == F(5, 13)
    assert lw.check_q5(7, 1).passed
    assert not lw.check_q5(6, 1).passed

    q1 = lw.check_q1(6, 7)
    assert q1.passed and q1.lhs_fraction() == 2 and q1.witness == ["3/4"]
    assert lw.gap_convergents(6, 5).lhs == "1/40"

    w = lw.find_witness(6, (0, 1), (0, 1), strategy="brute")
    assert w is not None and w.a == 1
    assert w.verify((0, 1), (0, 1)).passed
    assert lw.find_witness(6, (F(1, 4), F(1, 2)), (0, F(1, 4))) is None

    cert = lw.Certificate.build(2)
    assert cert.depth == 2 and cert.verify().passed
    stage1 = cert.stages()[1]
    assert (stage1["n"], stage1["a"], stage1["alpha"]) == (5, 2, F(2, 5))
    again = lw.Certificate.from_json(cert.to_json())
    assert again.to_json() == cert.to_json()
    alpha, beta, err = cert.approximants(1)
    assert err == F(1, 50)
    bound = cert.littlewood_lower_bound(1, 2)
    assert bound.rhs == lw.THEOREM_CONSTANT

    disc = lw.star_discrepancy(6, 1)
    assert disc["dstar"] == F(5, 8)
    assert lw.star_discrepancy_points([F(1, 4), F(3, 4)]) == F(1, 4)

    try:
        lw.min_product(6, 2)
    except ValueError:
        pass
    else:
        raise AssertionError("non-coprime numerator accepted")

    print("smoke test ok:", cert, bound)


if __name__ == "__main__":
    main()
