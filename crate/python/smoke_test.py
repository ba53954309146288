#!/usr/bin/env python3
"""End-to-end smoke test for the qgraft Python module."""

import json

import qgraft as qg


def main():
    # scalar field round trip and arithmetic
    a = qg.Scalar("q^2 + q^-2")
    b = qg.Scalar("q^2") + qg.Scalar("q^-2")
    assert a == b, (str(a), str(b))
    assert str(qg.Scalar("q") * qg.Scalar("q^-1")) == "1"
    assert qg.Scalar("q^2 - 1") / qg.Scalar("q - q^-1") == qg.Scalar("q")
    try:
        qg.Scalar("1") / qg.Scalar("0")
    except ZeroDivisionError:
        pass
    else:
        raise AssertionError("division by zero must raise")
    assert qg.Scalar("q^2").evaluate("3") == "81"  # q = s^2 = 9 at s = 3
    print("ok scalar arithmetic")

    # single R-matrix, YBE, serialization
    r2 = qg.standard_r(2)
    assert r2.dims() == [2] and r2.nrows() == 4
    assert qg.check_ybe(r2)
    assert str(qg.frt_constant(r2)) == "q^-4"
    assert qg.Matrix.from_json(r2.to_json()) == r2
    assert str(r2.get(0, 1, 1, 0)) == "q - q^-1"
    print("ok standard R, YBE, json round trip")

    # natural x dual tensor pair
    big = qg.tensor_r([qg.standard_r(2), qg.standard_r(2, "dual")])
    assert big.dims() == [2, 2] and big.nrows() == 16
    assert qg.check_ybe(big)
    pr = qg.pair(big, "-1")
    assert str(pr.lam) == "1"
    raw = sorted(str(e) for e in pr.raw_eigenvalues())
    assert raw == sorted(["-1", "q^2", "q^-2"]), raw
    c_prod = qg.frt_constant(qg.standard_r(2)) * qg.frt_constant(
        qg.standard_r(2, "dual")
    )
    assert qg.frt_constant(big) == c_prod
    print("ok tensor pair, spectrum, multiplicative frt constant")

    # braided algebra of the pair
    assert len(qg.quadratic_relations(pr)) == 6
    assert [qg.pairing_rank(pr, d) for d in (1, 2, 3)] == [4, 10, 20]
    assert qg.radical_dimension(pr, 2) == 6
    assert qg.radical_dimension(pr, 3) == 0
    print("ok pairing ranks and radical dimensions")

    # rewrite engine on the quantum plane
    plane = "gens x y; order x < y; rel y*x - q*x*y;"
    assert qg.hilbert_series(plane, 4) == [1, 2, 3, 4, 5]
    assert qg.reduce_word(plane, "y*x", 4) == [("q", ["x", "y"])]
    print("ok quantum plane hilbert series and normal form")

    # grafting pipeline reports
    rep = qg.graft("rank1")
    assert rep["classification"] == "A_2", rep["classification"]
    rep = qg.graft("typeA", 2, 2)
    assert rep["classification"] == "A_3"
    assert rep["checks"]["ybe"] and rep["checks"]["majid"]
    assert json.loads(qg.graft_report("typeA", 2, 2)) == rep
    print("ok graft pipeline reports")

    print("all smoke tests passed")


if __name__ == "__main__":
    main()
