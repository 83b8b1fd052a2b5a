from fractions import Fraction

import pytest

from qellr.characters import character_table
from qellr.cochains import random_cocycle
from qellr.cyclotomic import Cyclotomic
from qellr.enhanced import (EnhancedModelError, check_real_central, embed_level, enhanced_model, i_g_isomorphism,
                            model_character, model_irreps)
from qellr.groups import (cyclic, dihedral, graded_product, is_homomorphism, real_conjugacy_classes, split_graded,
                          symmetric, symmetric_graded, trivially_graded)

S3xZ3 = graded_product(symmetric_graded(3), trivially_graded(cyclic(3)))


def rows_hit(model):
    """Distinct kernel-table rows realised by the model's irreducible characters."""
    ker = model.carrier.kernel()
    T = character_table(ker)
    rows = set()
    for ir in model_irreps(model):
        vals = model_character(model, ir)
        rows.add(T.find_row([vals[x] for x in T.classes.reps]))
    return T, rows


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_rotation_generates_the_loop(n):
    # (1, e) has order L and its a-th power is the lift of g
    D = dihedral(n)
    for g in range(n):
        M = enhanced_model(D, g, 2 * D.group.element_order(g))
        r = M.element(1, 0)
        assert M.carrier.group.element_order(r) == M.level
        assert M.carrier.power(r, M.a) == M.core_element(M.g_core)
        assert all(M.element(M.level + 3, x) == M.element(3, x) for x in range(M.core.order))
        assert M.order == M.a * M.core.order


@pytest.mark.parametrize("seed", range(4))
def test_lift_of_g_is_real_central(seed):
    G = dihedral(4)
    ahat = random_cocycle(G, 3, 4, seed=seed)
    for g in real_conjugacy_classes(G).classes:
        assert check_real_central(enhanced_model(G, g, None, ahat))


def test_grading_of_carrier_is_a_homomorphism():
    G = split_graded(symmetric(3))
    ahat = random_cocycle(G, 3, 6, seed=1)
    for g in real_conjugacy_classes(G).classes:
        M = enhanced_model(G, g, None, ahat)
        assert is_homomorphism(M.carrier.group, cyclic(2), [0 if p == 1 else 1 for p in M.carrier.pi])


@pytest.mark.parametrize("n", range(2, 6))
def test_cyclic_models_are_all_real(n):
    D = dihedral(n)
    for g in range(n):
        base = enhanced_model(D, g)
        for k in (1, 2):
            M = enhanced_model(D, g, k * base.lift_order)
            irr = model_irreps(M)
            assert {ir.real_type for ir in irr} == {"R"}
            T, rows = rows_hit(M)
            assert len(rows) == len(irr) == len(T)


def test_slopes_of_untwisted_dihedral_models():
    # the lift of a rotation of order d acts on the characters by the d-th roots of unity
    M = enhanced_model(dihedral(6), 2)
    assert sorted({ir.slope for ir in model_irreps(M)}) == [Fraction(k, 3) for k in range(3)]
    M2 = enhanced_model(dihedral(6), 2, 6)
    assert sorted({ir.slope for ir in model_irreps(M2)}) == [Fraction(k, 3) for k in range(6)]


def test_twisted_models_hit_the_standard_central_character():
    for seed in range(2):
        ahat = random_cocycle(S3xZ3, 3, 6, seed=seed)
        for g in real_conjugacy_classes(S3xZ3).classes:
            M = enhanced_model(S3xZ3, g, None, ahat)
            T, rows = rows_hit(M)
            c = M.carrier.kernel().embedding.index(M.central(1))
            std = [i for i in range(len(T)) if T.value(i, c) == Cyclotomic.root(M.extension.m, 1) * T.degrees[i]]
            assert len(rows) == len(model_irreps(M)) == len(std)


@pytest.mark.parametrize("seed", range(3))
def test_i_g_isomorphism(seed):
    ahat = random_cocycle(S3xZ3, 3, 6, seed=seed)
    data = real_conjugacy_classes(S3xZ3)
    checked = 0
    for g in data.classes:
        if data.sign[g] != 1:
            with pytest.raises(EnhancedModelError):
                i_g_isomorphism(ahat, g)
            continue
        ig = i_g_isomorphism(ahat, g)
        assert ig.is_homomorphism() and ig.is_bijective()
        assert ig.negates_center() and ig.negates_rotation()
        checked += 1
    assert checked >= 2


def test_level_must_be_a_multiple_of_the_lift_order():
    D = dihedral(4)
    with pytest.raises(EnhancedModelError):
        enhanced_model(D, 1, 6)
    ahat = random_cocycle(S3xZ3, 3, 6, seed=1)
    g = next(g for g in real_conjugacy_classes(S3xZ3).classes if enhanced_model(S3xZ3, g, None, ahat).lift_order == 9)
    with pytest.raises(EnhancedModelError):
        enhanced_model(S3xZ3, g, 3, ahat)


def test_level_embedding_is_a_homomorphism():
    D = dihedral(3)
    coarse, fine = enhanced_model(D, 1, 3), enhanced_model(D, 1, 6)
    im = embed_level(coarse, fine)
    assert is_homomorphism(coarse.carrier.group, fine.carrier.group, im)
    with pytest.raises(EnhancedModelError):
        embed_level(fine, coarse)
