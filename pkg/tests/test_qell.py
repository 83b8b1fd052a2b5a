from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qellr.cochains import random_cocycle
from qellr.cyclotomic import QPoly
from qellr.groups import (cyclic, dihedral, graded_cyclic, quaternion, split_graded, symmetric, symmetric_graded)
from qellr.qell import (QEllClass, QEllError, QEllStructure, change_of_group, character_sheet, class_from_json,
                        fixed_subring_rank, forget_sheet, forgetful, kunneth, multiply, qell_point, qellr_point,
                        random_class, rep_ring_involution, sheet_equivariance_defects, tate_completion,
                        transfer_ideal, trivial_cover_reduction)

GRADED = {"D4": dihedral(2), "D6": dihedral(3), "D8": dihedral(4), "Z4": graded_cyclic(4),
          "S3": symmetric_graded(3), "S3xZ2": split_graded(symmetric(3)), "Q8xZ2": split_graded(quaternion(8))}
_structs = {}


def struct(name, real=True, seed=None):
    key = (name, real, seed)
    if key not in _structs:
        G = GRADED[name]
        alpha = random_cocycle(G, 3, 4, seed=seed) if seed is not None else None
        _structs[key] = QEllStructure(G, None, alpha, real=real)
    return _structs[key]


def commuting_pair_orbits(G, real):
    """Orbits of commuting kernel pairs under s.(g, h) = (s.g, s.h), by enumeration."""
    K = G.kernel_elements
    movers = range(G.order) if real else K
    act = G.real_act if real else G.conj
    seen, count = set(), 0
    for g in K:
        for h in K:
            if G.mul(g, h) != G.mul(h, g) or (g, h) in seen:
                continue
            count += 1
            seen.update((act(s, g), act(s, h)) for s in movers)
    return count


@pytest.mark.parametrize("name", sorted(GRADED))
def test_untwisted_rank_counts_commuting_pairs(name):
    assert struct(name).rank == commuting_pair_orbits(GRADED[name], True)
    assert struct(name, real=False).rank == commuting_pair_orbits(GRADED[name], False)


@pytest.mark.parametrize("n", range(1, 7))
def test_dihedral_point_presentations(n):
    S = qellr_point(dihedral(n))
    assert S.rank == n * n
    assert len(S.presentations) == n
    for ci, pres in S.presentations.items():
        m = S.components[ci].g
        assert pres.relations == [f"x_{m}^{n} - q^{m}"]
        assert pres.verified and pres.rank == n
    assert qell_point(dihedral(n)).rank == n * n


def test_dihedral_levels_and_slopes():
    # component of the rotation r^m: slopes k / ord(r^m)
    S = qellr_point(dihedral(6))
    for c in S.components:
        d = dihedral(6).group.element_order(c.g)
        assert c.level == d
        assert sorted({b.slope for b in c.basis}) == [Fraction(k, d) for k in range(d)]


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["D6", "S3xZ2", "Z4"]), st.sampled_from([None, 0, 1]), st.integers(0, 10 ** 6))
def test_class_json_round_trip(name, seed, cseed):
    S = struct(name, seed=seed)
    x = random_class(S, cseed)
    assert class_from_json(S, x.to_json()) == x
    assert class_from_json(S, {"class": x.to_json()}) == x
    assert x.rotation_ok()


def test_class_json_rejects_bad_terms():
    S = struct("D6")
    g = S.components[1].g
    with pytest.raises(QEllError):
        class_from_json(S, [{"class": g, "basis": 99}])
    with pytest.raises(QEllError):
        class_from_json(S, [{"class": g, "basis": 1, "q_exponent": "1/7"}])
    with pytest.raises(QEllError):
        class_from_json(S, [{"basis": 0}])
    with pytest.raises(QEllError):
        class_from_json(S, {"nothing": 1})


@pytest.mark.parametrize("name", sorted(GRADED))
@pytest.mark.parametrize("seed", [None, 0, 3])
def test_forgetful_commutes_with_characters(name, seed):
    S = struct(name, seed=seed)
    for k in range(3):
        x = random_class(S, k)
        assert forget_sheet(character_sheet(x)) == character_sheet(forgetful(x))
        assert sheet_equivariance_defects(character_sheet(x)) == 0


@pytest.mark.parametrize("name", ["D6", "S3", "S3xZ2", "Z4"])
def test_product_is_pointwise_on_characters(name):
    S = struct(name)
    for k in range(3):
        a, b = random_class(S, k), random_class(S, k + 10)
        ca, cb, cab = character_sheet(a), character_sheet(b), character_sheet(multiply(a, b))
        for key in ca.values:
            assert cab.values[key] == ca.values[key] * cb.values[key]
        assert multiply(a, b) == multiply(b, a)


@pytest.mark.parametrize("name", sorted(GRADED))
def test_one_is_the_unit(name):
    S = struct(name)
    one = S.one()
    assert len(one.terms) == len(S.components)
    for k in range(3):
        x = random_class(S, k)
        assert multiply(one, x) == x
    sheet = character_sheet(one)
    assert all(v == QPoly.monomial(0, 1) for v in sheet.values.values())


def test_untwisted_classes_act_on_twisted_ones():
    S, T = struct("S3xZ2"), struct("S3xZ2", seed=1)
    with pytest.raises(QEllError):
        T.one()
    y = random_class(T, 4)
    assert multiply(S.one(), y) == y
    with pytest.raises(QEllError):
        multiply(y, S.one())


def test_tate_completion_truncates():
    S = struct("D8")
    x = random_class(S, 2, terms=8, span=3)
    series = tate_completion(x, 1)
    assert all(e < 1 for (_, _, e) in series.terms)
    assert all(series.terms[t] == c for t, c in x.terms.items() if t[2] < 1)
    assert series.rank_per_window(0) == S.components[0].rank
    bad = QEllClass(S, {(1, 0, S.components[1].basis[0].slope + Fraction(1, 2)): 1})
    with pytest.raises(QEllError):
        tate_completion(bad, 5)


def test_transfer_ideal_of_d6_by_hand():
    # only the reflection subgroup qualifies; inducing its Real unit gives the regular character of Z3
    T = transfer_ideal(dihedral(3))
    assert len(T.subgroups) == 1
    assert [c["image_rank"] for c in T.components] == [1, 0, 0]
    assert T.generators[0] == [[1, 1, 1]]
    assert all(c["quotient_free_rank"] == c["rank"] - c["image_rank"] for c in T.components)


def test_transfer_ideal_empty_for_graded_cyclic():
    # the only subgroup with an odd element is the whole group
    T = transfer_ideal(graded_cyclic(4))
    assert T.subgroups == [] and all(c["image_rank"] == 0 for c in T.components)


@pytest.mark.parametrize("n1,n2", [(2, 3), (3, 3), (2, 4)])
def test_kunneth_of_units(n1, n2):
    a, b = qellr_point(dihedral(n1)), qellr_point(dihedral(n2))
    prod = kunneth(a.one(), b.one())
    assert prod == prod.structure.one()
    x, y = random_class(a, 1), random_class(b, 2)
    z = kunneth(x, y)
    assert sum(abs(c) for c in z.terms.values()) > 0 and z.rotation_ok()


def test_kunneth_characters_multiply():
    a, b = qellr_point(dihedral(2)), qellr_point(dihedral(3))
    x, y = random_class(a, 5), random_class(b, 6)
    z = kunneth(x, y)
    K = z.structure.base
    cx, cy, cz = character_sheet(x).values, character_sheet(y).values, character_sheet(z).values
    for (g, _, h), v in cz.items():
        (g1, g2), (h1, h2) = K.group.labels[g], K.group.labels[h]
        assert v == cx[(g1, 0, h1)] * cy[(g2, 0, h2)]


@pytest.mark.parametrize("name", ["D6", "D8", "S3", "S3xZ2", "Q8xZ2"])
def test_rep_ring_involution_fixes_forgetful_images(name):
    inv = rep_ring_involution(GRADED[name])
    assert inv.is_involution
    assert fixed_subring_rank(inv) <= inv.structure.rank
    for b in struct(name).basis_elements():
        f = forgetful(b)
        assert inv.apply(QEllClass(inv.structure, f.terms)).terms == f.terms


def test_dihedral_involution_is_trivial():
    # every rotation is fixed by the reflection up to Real conjugation
    inv = rep_ring_involution(dihedral(4))
    assert all(k == v for k, v in inv.perm.items())
    assert fixed_subring_rank(inv) == 16


def test_trivial_cover_reduction_is_bijective():
    for G in (cyclic(3), symmetric(3)):
        assert trivial_cover_reduction(G).bijective


@pytest.mark.parametrize("keep", [lambda S, g: g == 0, lambda S, g: S.element_order(g) != 2],
                         ids=["Z2", "A3xZ2"])
def test_change_of_group_is_bijective(keep):
    S = symmetric(3)
    G = split_graded(S)
    sub = [x for x, (g, _) in enumerate(G.group.labels) if keep(S, g)]
    cg = change_of_group(G, sub)
    assert cg.bijective
    x = random_class(cg.big, 3)
    assert cg.inverse(cg.apply(x)) == x
