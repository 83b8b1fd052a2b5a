import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qellr.cochains import (Cochain, CochainError, central_extension, coboundary_matrix, cochain_from_json,
                            cochain_to_json, cohomologous, cyclic_cocycle3, differential,
                            homomorphisms_to_cyclic, is_cocycle, product, random_cochain, random_cocycle,
                            restrict, solve_mod, zero_cochain)
from qellr.groups import (GradedGroup, cyclic, dihedral, direct_product, graded_cyclic, split_graded, symmetric,
                          trivially_graded)

BASES = {
    "Z3": trivially_graded(cyclic(3)),
    "V4": trivially_graded(direct_product(cyclic(2), cyclic(2))),
    "D4": dihedral(2),
    "D6": dihedral(3),
    "Z4": graded_cyclic(4),
}


def naive_differential(c, t):
    """sum of the face terms written out directly; the first face carries pi(g_1) when twisted."""
    G = c.base
    n = len(t) - 1
    sign = G.pi[t[0]] if c.twisted else 1
    total = sign * c(*t[1:])
    for p in range(n):
        total += (-1) ** (p + 1) * c(*(t[:p] + (G.mul(t[p], t[p + 1]),) + t[p + 2:]))
    total += (-1) ** (n + 1) * c(*t[:n])
    return total % c.modulus


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(sorted(BASES)), st.integers(1, 3), st.booleans(), st.sampled_from([2, 4, 6]),
       st.integers(0, 10 ** 6))
def test_differential_matches_face_formula(name, degree, twisted, m, seed):
    c = random_cochain(BASES[name], degree, twisted, m, seed)
    dc = differential(c)
    n = c.base.order
    for t in itertools.product(range(n), repeat=degree + 1):
        assert dc(*t) == naive_differential(c, t)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(sorted(BASES)), st.integers(1, 3), st.booleans(), st.sampled_from([2, 3, 12]),
       st.integers(0, 10 ** 6))
def test_d_squared_is_zero(name, degree, twisted, m, seed):
    c = random_cochain(BASES[name], degree, twisted, m, seed)
    assert differential(differential(c)).is_zero()


def test_lazy_and_dense_differentials_agree():
    c = random_cochain(BASES["D6"], 2, True, 6, 5)
    lazy = Cochain(c.base, 2, 6, True, evaluator=lambda t: c(*t))
    assert not lazy.is_dense
    assert differential(lazy) == differential(c)


def _count_cohomology(base, degree, m, twisted=False):
    """|Z^n| / |B^n| by enumerating every normalized cochain."""
    n = base.order
    cells = list(itertools.product(range(1, n), repeat=degree))
    cocycles = 0
    for vals in itertools.product(range(m), repeat=len(cells)):
        arr = np.zeros((n,) * degree, dtype=np.int64)
        for cell, v in zip(cells, vals):
            arr[cell] = v
        c = Cochain(base, degree, m, twisted, values=arr)
        cocycles += all(naive_differential(c, t) == 0 for t in itertools.product(range(n), repeat=degree + 1))
    lower = list(itertools.product(range(1, n), repeat=degree - 1))
    boundaries = set()
    for vals in itertools.product(range(m), repeat=len(lower)):
        arr = np.zeros((n,) * (degree - 1), dtype=np.int64)
        for cell, v in zip(lower, vals):
            arr[cell] = v
        boundaries.add(differential(Cochain(base, degree - 1, m, twisted, values=arr)).array().tobytes())
    return cocycles, len(boundaries)


def test_klein_four_second_cohomology_mod_two():
    # H^2(Z2 x Z2; Z/2) has order 8
    Z, B = _count_cohomology(BASES["V4"], 2, 2)
    assert (Z, B) == (16, 2)
    assert Z // B == 8


def test_cyclic_cohomology_orders():
    # H^2(Z3; Z/3) = Z/3 and H^2(Z3; Z/2) = 0
    assert _count_cohomology(BASES["Z3"], 2, 3) == (9, 3)
    assert _count_cohomology(BASES["Z3"], 2, 2) == (4, 4)


def test_twisted_h1_of_graded_z2():
    # crossed homomorphisms Z2 -> Z/4 with the sign action: f(w) arbitrary, boundaries are even values
    Z2 = GradedGroup(cyclic(2), [1, -1])
    Z, B = _count_cohomology(Z2, 1, 4, twisted=True)
    assert (Z, B) == (4, 2)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_cyclic_three_cocycle_has_order_n(n):
    for k in range(n + 1):
        a = cyclic_cocycle3(n, k)
        assert is_cocycle(a)
        trivial = cohomologous(zero_cochain(a.base, 3, n), a) is not None
        assert trivial == (k % n == 0)


@pytest.mark.parametrize("name", ["D4", "D6", "Z4"])
@pytest.mark.parametrize("degree,twisted", [(2, True), (2, False), (3, False)])
def test_random_cocycles_are_cocycles(name, degree, twisted):
    for seed in range(4):
        assert is_cocycle(random_cocycle(BASES[name], degree, 4, seed=seed, twisted=twisted))


def test_cohomologous_finds_witness():
    base = BASES["D6"]
    a = random_cocycle(base, 2, 6, seed=1, twisted=True)
    g = random_cochain(base, 1, True, 6, 9)
    b = product(a, differential(g))
    w = cohomologous(a, b)
    assert w is not None and product(a, differential(w)) == b
    with pytest.raises(CochainError):
        cohomologous(a, random_cochain(base, 2, True, 6, 3))


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([2, 4, 6, 8, 9, 12]), st.integers(1, 5), st.integers(1, 5), st.integers(0, 10 ** 6))
def test_solve_mod_on_consistent_systems(m, rows, cols, seed):
    rng = np.random.default_rng(seed)
    A = rng.integers(0, m, size=(rows, cols))
    x = rng.integers(0, m, size=cols)
    b = A @ x % m
    sol = solve_mod(A, b, m)
    assert sol is not None
    assert np.array_equal(A @ sol % m, b)


def test_solve_mod_detects_inconsistency():
    A = np.array([[2], [0]])
    assert solve_mod(A, np.array([1, 0]), 4) is None
    assert solve_mod(np.array([[3]]), np.array([1]), 9) is None


def test_coboundary_matrix_shape():
    A, unknowns, eqs = coboundary_matrix(BASES["Z3"], 2, False)
    assert A.shape == (4, 2) and len(unknowns) == 2 and len(eqs) == 4


@pytest.mark.parametrize("n,d", [(n, d) for n in range(1, 7) for d in range(1, 7)])
def test_homomorphism_count_on_cyclic_groups(n, d):
    assert len(homomorphisms_to_cyclic(cyclic(n), d)) == math.gcd(n, d)


def test_homomorphisms_from_symmetric_group():
    assert len(homomorphisms_to_cyclic(symmetric(3), 2)) == 2
    assert len(homomorphisms_to_cyclic(symmetric(3), 3)) == 1


@pytest.mark.parametrize("name", ["D4", "D6", "Z4"])
def test_central_extension_structure(name):
    base = BASES[name]
    theta = random_cocycle(base, 2, 4, seed=2, twisted=True)
    ext = central_extension(theta)
    E = ext.group
    assert E.order == base.order * theta.modulus
    for x in range(base.order):
        for z in range(theta.modulus):
            e, c = ext.element(x, 0), ext.element(0, z)
            # odd elements invert the central circle
            assert E.mul(E.mul(e, c), E.inv(e)) == ext.element(0, base.pi[x] * z)
    with pytest.raises(CochainError):
        central_extension(random_cochain(base, 2, True, 4, 1))


def test_plain_cocycle_on_graded_base_rejected():
    with pytest.raises(CochainError):
        central_extension(zero_cochain(BASES["D4"], 2, 2, twisted=False))


def test_restriction_commutes_with_d():
    G = split_graded(symmetric(3))
    sub = G.subgroup(G.kernel_elements)
    c = random_cochain(G, 2, True, 6, 4)
    assert differential(restrict(c, sub)) == restrict(differential(c), sub)


def test_product_adds_circle_values():
    base = BASES["Z3"]
    a = random_cochain(base, 2, False, 2, 1)
    b = random_cochain(base, 2, False, 3, 2)
    s = product(a, b)
    assert s.modulus == 6
    for t in itertools.product(range(3), repeat=2):
        assert s.value(*t) == (Fraction(a(*t), 2) + Fraction(b(*t), 3)) % 1


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(sorted(BASES)), st.integers(1, 3), st.booleans(), st.integers(0, 10 ** 6))
def test_json_round_trip(name, degree, twisted, seed):
    c = random_cochain(BASES[name], degree, twisted, 6, seed)
    back = cochain_from_json(cochain_to_json(c), BASES[name])
    assert back == c and back.twisted == c.twisted


@pytest.mark.parametrize("data", [
    {"modulus": 2, "entries": []},
    {"degree": 2, "modulus": 2, "entries": [{"tuple": [1], "num": 1, "den": 2}]},
    {"degree": 2, "modulus": 2, "entries": [{"tuple": [1, 1], "num": 1, "den": 3}]},
    {"degree": 2, "modulus": 2, "entries": [{"tuple": [0, 1], "num": 1, "den": 2}]},
    {"degree": 2, "modulus": 2, "entries": [{"tuple": [1, 1]}]},
])
def test_malformed_cochain_json(data):
    with pytest.raises(CochainError):
        cochain_from_json(data, BASES["D4"])


def test_evaluator_is_normalized():
    c = Cochain(BASES["D6"], 2, 5, False, evaluator=lambda t: 1)
    assert c(0, 3) == 0 and c(2, 3) == 1
    assert c.array()[0].sum() == 0
