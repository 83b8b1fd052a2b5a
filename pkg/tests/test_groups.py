import math

import pytest
from hypothesis import given, settings, strategies as st

from qellr.groups import (GradedGroup, GroupError, OrderBoundExceeded, build_graded_group,
                          build_group, commuting_pair_classes, compose, coset_space, cycles_of, cyclic,
                          dihedral, direct_product, fiber_product, graded_cyclic, graded_product,
                          graded_wreath, inclusion_map, is_homomorphism, parse_permutation, perm_inverse,
                          quaternion, quotient, real_conjugacy_classes, split_graded, symmetric,
                          symmetric_graded, trivially_graded)

GRADED = {
    "D4": lambda: dihedral(2),
    "D6": lambda: dihedral(3),
    "D8": lambda: dihedral(4),
    "Z4": lambda: graded_cyclic(4),
    "S3": lambda: symmetric_graded(3),
    "S3xZ2": lambda: split_graded(symmetric(3)),
    "Q8xZ2": lambda: split_graded(quaternion(8)),
}
_cache = {}


def graded(name):
    if name not in _cache:
        _cache[name] = GRADED[name]()
    return _cache[name]


def brute_real_orbits(G):
    """Orbits of the kernel under s.g = s g^pi(s) s^-1, computed from the table directly."""
    T = G.group.table
    inv = lambda a: next(b for b in range(G.order) if T[a][b] == 0)
    orbits = set()
    for g in G.kernel_elements:
        orb = set()
        for s in range(G.order):
            x = g if G.pi[s] == 1 else inv(g)
            orb.add(int(T[T[s][x]][inv(s)]))
        orbits.add(frozenset(orb))
    return orbits


def test_family_orders():
    assert [cyclic(n).order for n in range(1, 6)] == [1, 2, 3, 4, 5]
    assert [dihedral(n).order for n in range(1, 6)] == [2, 4, 6, 8, 10]
    assert symmetric(4).order == 24
    assert quaternion(8).order == 8
    assert split_graded(symmetric(3)).order == 12
    assert graded_product(dihedral(3), trivially_graded(cyclic(2))).order == 12


def test_quaternion_has_unique_involution():
    Q = quaternion(8)
    assert sorted(Q.element_order(x) for x in range(8)) == [1, 2, 4, 4, 4, 4, 4, 4]
    assert not Q.is_abelian()


def test_dihedral_rotation_is_index_one():
    D = dihedral(5)
    assert D.group.element_order(1) == 5
    assert sorted(D.kernel_elements) == list(range(5))
    assert D.omega == min(D.odd_elements)


@pytest.mark.parametrize("name", sorted(GRADED))
def test_real_classes_match_brute_force(name):
    G = graded(name)
    data = real_conjugacy_classes(G)
    assert {frozenset(m) for m in data.members.values()} == brute_real_orbits(G)
    for y in G.kernel_elements:
        rep = data.class_of[y]
        assert G.real_act(data.conjugator[y], y) == rep
    for g in data.classes:
        odd_fix = any(G.pi[s] == -1 and G.real_act(s, g) == g for s in range(G.order))
        assert data.sign[g] == (-1 if odd_fix else 1)


def test_dihedral_real_classes_are_all_points():
    # reflections invert then conjugate, which fixes every rotation
    for n in range(1, 7):
        data = real_conjugacy_classes(dihedral(n))
        assert len(data) == n
        assert set(data.sign.values()) == {-1}


def test_split_s3_real_classes():
    data = real_conjugacy_classes(split_graded(symmetric(3)))
    assert sorted(len(m) for m in data.members.values()) == [1, 2, 3]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(sorted(GRADED)), st.data())
def test_real_act_is_a_left_action(name, data):
    G = graded(name)
    s = data.draw(st.integers(0, G.order - 1))
    t = data.draw(st.integers(0, G.order - 1))
    g = data.draw(st.sampled_from(list(G.kernel_elements)))
    assert G.real_act(G.mul(s, t), g) == G.real_act(s, G.real_act(t, g))
    assert G.pi[G.real_act(s, g)] == 1


@pytest.mark.parametrize("name", ["D4", "D6", "Z4"])
def test_commuting_pairs_match_brute_force(name):
    G = graded(name)
    data = commuting_pair_classes(G)
    K = G.kernel_elements
    pairs = [(g, h) for g in K for h in K if G.mul(g, h) == G.mul(h, g)]
    orbits = {frozenset((G.real_act(s, g), G.real_act(s, h)) for s in range(G.order)) for g, h in pairs}
    assert len(data) == len(orbits)


@pytest.mark.parametrize("name,N", [("D4", 0), ("D4", 1), ("D4", 2), ("D6", 2), ("Z4", 2), ("D4", 3)])
def test_wreath_structure(name, N):
    G = graded(name)
    W = graded_wreath(G, N)
    k, o = len(G.kernel_elements), len(G.odd_elements)
    assert W.order == (k ** N + o ** N) * math.factorial(N) if N else W.order == 1
    assert W.group.labels[0] == (tuple([0] * N), tuple(range(N)))
    assert is_homomorphism(W.group, cyclic(2), [0 if p == 1 else 1 for p in W.pi])


def test_wreath_product_rule_by_hand():
    # (g; s)(h; t) = (g_i h_{s^-1(i)}; s t) in Z4 wr S2
    G = graded_cyclic(4)
    W = graded_wreath(G, 2)
    a = W.group.index(((1, 3), (1, 0)))
    b = W.group.index(((0, 2), (0, 1)))
    assert W.group.labels[W.mul(a, b)] == ((3, 3), (1, 0))
    assert W.group.labels[W.mul(a, a)] == ((0, 0), (0, 1))
    assert W.pi[a] == -1 and W.pi[b] == 1


def test_wreath_one_is_the_base():
    G = graded("S3")
    W = graded_wreath(G, 1)
    iso = [W.group.index(((x,), (0,))) for x in range(G.order)]
    assert is_homomorphism(G.group, W.group, iso)
    assert [W.pi[i] for i in iso] == list(G.pi)


def test_wreath_order_bound(monkeypatch):
    monkeypatch.setenv("QELLR_ORDER_BOUND", "50")
    with pytest.raises(OrderBoundExceeded):
        graded_wreath(dihedral(3), 3)


def test_build_group_order_bound(monkeypatch):
    monkeypatch.setenv("QELLR_ORDER_BOUND", "10")
    with pytest.raises(OrderBoundExceeded):
        build_group({"generators": ["(1 2)", "(1 2 3 4)"]})


def test_permutations():
    assert compose((1, 2, 0), (1, 0, 2)) == (2, 1, 0)
    assert perm_inverse((1, 2, 0)) == (2, 0, 1)
    assert cycles_of((1, 0, 3, 4, 2)) == [(0, 1), (2, 3, 4)]
    assert cycles_of(()) == []
    assert parse_permutation("(1 3)", 3) == (2, 1, 0)
    assert parse_permutation([2, 0, 1]) == (2, 0, 1)
    with pytest.raises(GroupError):
        parse_permutation("(0 1)")


@settings(max_examples=80, deadline=None)
@given(st.permutations(list(range(6))))
def test_cycles_partition_and_follow_the_permutation(p):
    cyc = cycles_of(p)
    assert sorted(i for c in cyc for i in c) == list(range(6))
    for c in cyc:
        assert c[0] == min(c)
        for a, b in zip(c, c[1:] + c[:1]):
            assert p[a] == b


def test_build_group_from_generators_and_grading():
    G = build_graded_group({"generators": ["(1 2 3)", "(1 2)"], "pi_of_generators": [1, -1]})
    assert G.order == 6 and len(G.kernel_elements) == 3
    with pytest.raises(GroupError):
        build_graded_group({"generators": ["(1 2)", "(1 2)"], "pi_of_generators": [-1, 1]})
    with pytest.raises(GroupError):
        build_graded_group({"generators": ["(1 2 3)"], "pi_of_generators": [-1]})


def test_build_group_from_table_relabels_identity():
    # Z3 with the identity stored at position 2
    table = [[1, 2, 0], [2, 0, 1], [0, 1, 2]]
    G = build_group({"order": 3, "table": table})
    assert G.labels[0] == 2
    assert G.is_abelian()
    with pytest.raises(GroupError):
        build_group({"order": 4, "table": table})
    with pytest.raises(GroupError):
        build_group({"table": [[0, 1], [1, 1]]})


def test_bad_grading_rejected():
    with pytest.raises(GroupError):
        GradedGroup(cyclic(3), [1, -1, -1])


def test_coset_space_is_a_right_action():
    G = graded("D6")
    X = coset_space(G, [0, G.omega])
    assert X.size == 3
    rows = G.group.rows
    for x in range(X.size):
        for a in range(G.order):
            for b in range(G.order):
                assert X.act[X.act[x][a]][b] == X.act[x][rows[a][b]]
    assert sorted(len(o) for o in X.orbits()) == [3]


def test_quotient_and_subgroups():
    S4 = symmetric(4)
    V = [x for x in range(24) if S4.element_order(x) in (1, 2) and
         sum(1 for i, j in enumerate(S4.labels[x]) if i != j) in (0, 4)]
    Q, proj = quotient(S4, V)
    assert Q.order == 6 and not Q.is_abelian()
    with pytest.raises(GroupError):
        quotient(S4, S4.closure([S4.index((1, 0, 2, 3))]))
    sub = S4.subgroup(V)
    assert sorted(inclusion_map(sub, S4)) == sorted(V)


def test_fiber_product_grading():
    F = fiber_product(graded("D4"), graded("Z4"))
    assert F.order == 2 * 2 + 2 * 2
    assert all(F.pi[i] == graded("D4").pi[x] == graded("Z4").pi[y] for i, (x, y) in enumerate(F.labels))


def test_direct_product_table():
    P = direct_product(cyclic(2), cyclic(3))
    assert P.is_abelian() and P.exponent == 6
