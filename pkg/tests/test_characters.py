import cmath
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qellr.characters import (CharacterError, character_table, check_orthogonality, frobenius_schur,
                              graded_indicator, induce_character, real_irrep_count, real_type,
                              regular_class_count, restrict_character, twisted_irreps)
from qellr.cochains import central_extension, random_cocycle, zero_cochain
from qellr.cyclotomic import Cyclotomic, QPoly, cyclotomic_poly, euler_phi
from qellr.groups import (GroupError, cyclic, dihedral, direct_product, graded_cyclic, graded_product, quaternion,
                          real_conjugacy_classes, split_graded, symmetric, symmetric_graded, trivially_graded)

PLAIN = {"Z5": cyclic(5), "S3": symmetric(3), "D8": dihedral(4).group, "Q8": quaternion(8), "S4": symmetric(4),
         "Z2xZ4": direct_product(cyclic(2), cyclic(4))}
GRADED = {"D6": dihedral(3), "D8": dihedral(4), "Z4": graded_cyclic(4), "S3": symmetric_graded(3),
          "S3xZ2": split_graded(symmetric(3)), "Q8xZ2": split_graded(quaternion(8)),
          "Z3xZ4": graded_product(trivially_graded(cyclic(3)), graded_cyclic(4))}
_tables = {}


def table(name):
    if name not in _tables:
        _tables[name] = character_table(PLAIN[name])
    return _tables[name]


def as_complex(c: Cyclotomic) -> complex:
    # coordinates are in the power basis 1, z, ..., z^(phi(n) - 1)
    return sum(int(a) * cmath.exp(2j * cmath.pi * k / c.n) for k, a in enumerate(c.c)) / c.d


# ---------------------------------------------------------------- cyclotomic arithmetic


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 12), st.lists(st.integers(-3, 3), min_size=1, max_size=12),
       st.lists(st.integers(-3, 3), min_size=1, max_size=12))
def test_cyclotomic_ring_matches_complex_numbers(n, xs, ys):
    a = Cyclotomic.from_exponents(n, {k: v for k, v in enumerate(xs)})
    b = Cyclotomic.from_exponents(n, {k: v for k, v in enumerate(ys)})
    for got, want in ((a + b, as_complex(a) + as_complex(b)), (a * b, as_complex(a) * as_complex(b)),
                      (a.conj(), as_complex(a).conjugate())):
        assert abs(as_complex(got) - want) < 1e-9


@pytest.mark.parametrize("n", range(1, 13))
def test_roots_of_unity(n):
    z = Cyclotomic.root(n, 1)
    assert z ** n == 1
    assert len(cyclotomic_poly(n)) - 1 == euler_phi(n)
    total = Cyclotomic.zero(n)
    for k in range(n):
        total = total + Cyclotomic.root(n, k)
    assert total == (1 if n == 1 else 0)


def test_cyclotomic_json_and_rational():
    x = Cyclotomic.rational(Fraction(3, 4), 6) + Cyclotomic.root(6, 2)
    assert Cyclotomic.from_json(x.to_json()) == x
    assert not x.is_rational()
    assert (Cyclotomic.root(4, 1) ** 2).to_rational() == -1


def test_qpoly_arithmetic():
    p = QPoly.monomial(Fraction(1, 2), Cyclotomic.rational(2)) + QPoly.monomial(0, Cyclotomic.rational(1))
    sq = p * p
    assert sq == (QPoly.monomial(1, Cyclotomic.rational(4)) + QPoly.monomial(Fraction(1, 2), Cyclotomic.rational(4))
                  + QPoly.monomial(0, Cyclotomic.rational(1)))
    assert (p - p).is_zero()
    assert p.truncate(Fraction(1, 2)) == QPoly.monomial(0, Cyclotomic.rational(1))
    assert p.shift(1) == QPoly.monomial(Fraction(3, 2), Cyclotomic.rational(2)) + QPoly.monomial(1, Cyclotomic.rational(1))


# ---------------------------------------------------------------- ordinary tables


@pytest.mark.parametrize("name,degrees", [
    ("Z5", [1] * 5), ("S3", [1, 1, 2]), ("D8", [1, 1, 1, 1, 2]), ("Q8", [1, 1, 1, 1, 2]),
    ("S4", [1, 1, 2, 3, 3]), ("Z2xZ4", [1] * 8)])
def test_degrees(name, degrees):
    T = table(name)
    assert sorted(T.degrees) == degrees
    assert len(T) == len(PLAIN[name].conjugacy_classes())
    assert check_orthogonality(T)


@pytest.mark.parametrize("name", sorted(PLAIN))
def test_square_root_counts(name):
    # sum_chi nu(chi) chi(g) = #{x : x^2 = g}
    G, T = PLAIN[name], table(name)
    fs = [frobenius_schur(T, i) for i in range(len(T))]
    for g in range(G.order):
        total = sum((T.value(i, g) * f for i, f in enumerate(fs)), Cyclotomic.zero(T.order))
        assert total == sum(1 for h in range(G.order) if G.mul(h, h) == g)


def test_indicators_of_known_groups():
    assert sorted(frobenius_schur(table("Q8"), i) for i in range(5)) == [-1, 1, 1, 1, 1]
    assert sorted(frobenius_schur(table("D8"), i) for i in range(5)) == [1] * 5
    assert sorted(frobenius_schur(table("Z5"), i) for i in range(5)) == [0, 0, 0, 0, 1]


@pytest.mark.parametrize("name", sorted(PLAIN))
def test_permutation_character_decomposes(name):
    # the regular character is sum deg(chi) chi
    G, T = PLAIN[name], table(name)
    reg = [Cyclotomic.rational(G.order if c == 0 else 0) for c in T.classes.reps]
    assert T.decompose(reg) == T.degrees


# ---------------------------------------------------------------- graded indicators and Real types


@pytest.mark.parametrize("name", sorted(GRADED))
def test_graded_square_root_counts(name):
    # sum_chi eps(chi) chi(g) = #{odd w : w^2 = g}
    G = GRADED[name]
    ker = G.kernel()
    T = character_table(ker)
    eps = [graded_indicator(G, T, i) for i in range(len(T))]
    for x in range(ker.order):
        total = sum((T.value(i, x) * e for i, e in enumerate(eps)), Cyclotomic.zero(T.order))
        g = ker.to_root(x)
        assert total == sum(1 for w in G.odd_elements if G.mul(w, w) == g)


@pytest.mark.parametrize("name", sorted(GRADED))
def test_real_irreducibles_count_real_classes(name):
    G = GRADED[name]
    T = character_table(G.kernel())
    tags = [real_type(G, T, i) for i in range(len(T))]
    assert real_irrep_count(tags) == len(real_conjugacy_classes(G))
    for i, t in enumerate(tags):
        if t.kind == "C":
            assert t.partner != i and tags[t.partner].partner == i


def test_cyclic_under_dihedral_is_all_real():
    for n in range(1, 8):
        G = dihedral(n)
        T = character_table(G.kernel())
        assert {real_type(G, T, i).kind for i in range(len(T))} == {"R"}


def test_cyclic_under_parity_grading_is_complex():
    # Z_8 graded mod 2: the odd elements act trivially, so non-real characters pair up
    G = graded_cyclic(8)
    T = character_table(G.kernel())
    kinds = sorted(real_type(G, T, i).kind for i in range(len(T)))
    assert kinds.count("C") % 2 == 0 and "C" in kinds


def test_bad_indicator_inputs_rejected():
    G = GRADED["D6"]
    T = character_table(G.kernel())
    with pytest.raises(GroupError):
        graded_indicator(trivially_graded(cyclic(3)), character_table(cyclic(3)), 0)
    with pytest.raises(CharacterError):
        real_irrep_count([real_type(G, T, 0), type(real_type(G, T, 0))("C", 0)])


# ---------------------------------------------------------------- twisted irreducibles


@pytest.mark.parametrize("name", sorted(GRADED))
def test_twisted_irreducibles(name):
    G = GRADED[name]
    for seed in range(3):
        theta = random_cocycle(G, 2, 2, seed=seed, twisted=True)
        ext = central_extension(theta)
        irr = twisted_irreps(ext)
        assert sum(ir.degree ** 2 for ir in irr) == len(G.kernel_elements)
        complex_count = len(twisted_irreps(ext, with_real_types=False))
        assert complex_count == regular_class_count(ext) == len(irr)


def test_klein_four_projective_irreducible():
    V = trivially_graded(direct_product(cyclic(2), cyclic(2)))
    degrees = set()
    for seed in range(8):
        ext = central_extension(random_cocycle(V, 2, 2, seed=seed))
        degrees.add(tuple(sorted(ir.degree for ir in twisted_irreps(ext))))
    assert degrees <= {(1, 1, 1, 1), (2,)}
    assert (2,) in degrees


def test_untwisted_extension_recovers_the_table():
    G = GRADED["S3xZ2"]
    ext = central_extension(zero_cochain(G, 2, 1, twisted=True))
    assert sorted(ir.degree for ir in twisted_irreps(ext)) == [1, 1, 2]


# ---------------------------------------------------------------- induction


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["S3", "S4", "D8", "Q8"]), st.data())
def test_frobenius_reciprocity(name, data):
    G = PLAIN[name]
    subs = [s for s in __import__("qellr.groups", fromlist=["all_subgroups"]).all_subgroups(G) if len(s) > 1]
    H = G.subgroup(data.draw(st.sampled_from(subs)))
    TG, TH = table(name), character_table(H)
    i = data.draw(st.integers(0, len(TG) - 1))
    j = data.draw(st.integers(0, len(TH) - 1))
    chi = list(TG.rows[i])
    psi = list(TH.rows[j])
    lhs = TG.inner(induce_character(psi, H, G), chi)
    rhs = TH.inner(psi, restrict_character(chi, G, H))
    assert lhs == rhs
