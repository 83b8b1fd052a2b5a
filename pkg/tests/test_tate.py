import math
from fractions import Fraction

import pytest

from qellr.tate import (MonomialUnit, SplitIsomorphism, TateError, TatePoint, a4_series, a6_series, a_map, b_map,
                        check_all, identity, invert, multiplication_table, multiply, pullback_square,
                        real_fixed_points, split_iso, torsion_points, torsion_vs_qell)


def lambert(precision, weight):
    """Coefficients of sum_n n^weight q^n / (1 - q^n), expanding each geometric series."""
    out = [0] * precision
    for n in range(1, precision):
        for k in range(n, precision, n):
            out[k] += n ** weight
    return out


@pytest.mark.parametrize("N", range(1, 7))
def test_check_all(N):
    res = check_all(N)
    assert res["pass"], res
    assert all(res["group_axioms"].values())


@pytest.mark.parametrize("N", range(1, 7))
@pytest.mark.parametrize("d", [1, 2, 3, 6])
def test_point_counts_by_ring(N, d):
    # zeta^a q^(i/N) needs i/N in (1/d)Z: a is free, i runs over multiples of N / gcd(N, d)
    assert len(torsion_points(N, d)) == N * math.gcd(N, d)


@pytest.mark.parametrize("N", range(1, 7))
def test_fixed_points_of_the_inversion(N):
    res = split_iso(N)
    assert res["fixed_points"] == res["two_torsion"] == math.gcd(2, N) ** 2
    fixed = [p for p in torsion_points(N) if invert(p) == p]
    assert len(fixed) == math.gcd(2, N) ** 2


def test_group_law_by_hand():
    # N = 3: (q^(2/3), 2) + (q^(2/3), 2) = (q^(4/3) q^-1, 1)
    p = TatePoint(MonomialUnit.make(1, 0, Fraction(2, 3), 3), 2, 3)
    s = multiply(p, p)
    assert s.i == 1 and s.xi == MonomialUnit.make(1, 0, Fraction(1, 3), 3)
    assert invert(p) == TatePoint(MonomialUnit.make(1, 0, Fraction(1, 3), 3), 1, 3)
    assert multiply(multiply(s, p), identity(3)) == identity(3)


def test_multiplication_table_is_a_latin_square():
    for N in range(1, 6):
        T = multiplication_table(N)
        assert all(sorted(row) == list(range(N * N)) for row in T)
        assert all(sorted(col) == list(range(N * N)) for col in zip(*T))


def test_exact_sequence_maps():
    N = 4
    assert all(b_map(a_map(N, j)) == 0 for j in range(N))
    p = torsion_points(N)[-1]
    assert b_map(p) == Fraction(p.i, N)
    iso = SplitIsomorphism(N)
    assert iso.backward(iso.forward(3, 2)) == (3, 2)
    assert SplitIsomorphism.involution(N, 1, 1) == (3, 3)


def test_weierstrass_coefficients():
    assert a4_series(5) == [0, -5, -45, -140, -365]
    assert a6_series(5) == [0, 1, 23, 154, 647]
    P = 12
    s3, s5 = lambert(P, 3), lambert(P, 5)
    assert a4_series(P) == [-5 * c for c in s3]
    assert a6_series(P) == [(7 * a + 5 * b) // 12 for a, b in zip(s5, s3)]
    assert all((7 * a + 5 * b) % 12 == 0 for a, b in zip(s5, s3))


@pytest.mark.parametrize("N", range(1, 5))
def test_comparisons_with_equivariant_theories(N):
    tq = torsion_vs_qell(N)
    assert tq["pass"] and tq["tate_relations"] == tq["qell_relations"]
    assert tq["ranks"] == [N] * N
    rf = real_fixed_points(N)
    assert rf["pass"] and rf["rank"] == N * N
    ps = pullback_square(N)
    assert ps["pass"] and ps["real_rank"] == ps["complex_rank"] == N * N


@pytest.mark.parametrize("data", [
    {"xi": {"sign": 1, "zeta": 0, "q_num": 1, "q_den": 3}, "i": 0},
    {"xi": {"sign": 1, "zeta": 0, "q_num": 0, "q_den": 1}, "i": 5},
    {"xi": {"sign": 2, "zeta": 0, "q_num": 0, "q_den": 1}, "i": 0},
    {"xi": {"sign": 1, "zeta": 0, "q_num": 1, "q_den": 0}, "i": 1},
    {"xi": {"sign": 1}, "i": 0},
    {"i": 0},
])
def test_point_json_validation(data):
    with pytest.raises(TateError):
        TatePoint.from_json(data, 3)


def test_point_json_round_trip():
    for p in torsion_points(4):
        assert TatePoint.from_json(p.to_json(), 4) == p


def test_mixed_rings_rejected():
    with pytest.raises(TateError):
        MonomialUnit.one(2) * MonomialUnit.one(3)
    with pytest.raises(TateError):
        multiply(identity(2), identity(3))
