"""
Power operations: the wreath twist of cochains, power representations,
cycle bookkeeping for elements of Ghat wr Sigma_N, and the power
operation on QEllR / QEll of a point.

Wreath elements are labelled ((g_1, ..., g_N), sigma) with sigma an image
tuple on 0..N-1; see ``graded_wreath`` for the product.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .cochains import Cochain, differential, product
from .cyclotomic import Cyclotomic, QPoly
from .groups import (FiniteGroup, GradedGroup, compose, cycles_of, fiber_product, graded_wreath,
                     is_homomorphism, perm_inverse, real_conjugacy_classes)
from .qell import QEllClass, QEllStructure, TateSeries, _root_at, character_sheet, tate_completion


class PowerOperationError(ValueError):
    pass


# ---------------------------------------------------------------- wreath twist


def wreath_twist(alpha: Cochain, N: int, wreath: Optional[GradedGroup] = None) -> Cochain:
    """The N-th wreath twist of an n-cochain on Ghat, an n-cochain on Ghat wr Sigma_N.

    Value at (a_1, ..., a_n) with a_r = (g_r; s_r) is
    sum_j alpha(g_{1, j}, g_{2, s_1^-1(j)}, g_{3, (s_1 s_2)^-1(j)}, ...).
    """
    W = wreath if wreath is not None else graded_wreath(alpha.base, N)
    labels = W.group.labels
    n = alpha.degree
    ident = tuple(range(N))

    def ev(tup):
        cols = [labels[a] for a in tup]
        invs = []
        cur = ident
        for gs, s in cols:
            invs.append(perm_inverse(cur))
            cur = compose(cur, s)
        total = 0
        for j in range(N):
            total += alpha(*(cols[r][0][invs[r][j]] for r in range(n)))
        return total

    if N == 0 or n == 0:
        return Cochain(W, n, alpha.modulus, alpha.twisted, evaluator=lambda t: 0 if N == 0 else ev(t))
    return Cochain(W, n, alpha.modulus, alpha.twisted, evaluator=ev)


def _index_of(W: GradedGroup) -> Dict:
    return {lab: i for i, lab in enumerate(W.group.labels)}


def sum_embedding(WM: GradedGroup, WN: GradedGroup, WMN: GradedGroup, FP: GradedGroup,
                  misaligned: bool = False) -> List[int]:
    """((g; s), (h; t)) -> (g, h; s + t) from the fibre product into the bigger wreath."""
    M = len(WM.group.labels[0][1])
    idx = _index_of(WMN)
    out = []
    for (x, y) in FP.group.labels:
        gs, s = WM.group.labels[x]
        hs, t = WN.group.labels[y]
        perm = tuple(s) + tuple(M + v for v in t)
        vec = tuple(gs) + tuple(hs)
        if misaligned:
            vec = vec[1:] + vec[:1]
        out.append(idx[(vec, perm)])
    return out


def block_embedding(WN: GradedGroup, outer: GradedGroup, WMN: GradedGroup, N: int,
                    misaligned: bool = False) -> List[int]:
    """(f_1..f_M; s) in (Ghat wr Sigma_N) wr Sigma_M -> Ghat wr Sigma_MN.

    The permutation sends position (j, k) to (s(j), t_{s(j)}(k)), positions
    numbered j*N + k.
    """
    idx = _index_of(WMN)
    out = []
    for fs, s in outer.group.labels:
        M = len(s)
        parts = [WN.group.labels[f] for f in fs]
        vec = tuple(itertools.chain.from_iterable(p[0] for p in parts))
        perm = [0] * (M * N)
        for j in range(M):
            tj = parts[s[j]][1]
            for k in range(N):
                perm[j * N + k] = s[j] * N + tj[k]
        if misaligned:
            vec = vec[1:] + vec[:1]
        out.append(idx[(vec, tuple(perm))])
    return out


def _pull(c: Cochain, source: GradedGroup, images: Sequence[int]) -> Cochain:
    return Cochain(source, c.degree, c.modulus, c.twisted, evaluator=lambda t: c(*(images[x] for x in t)))


def _external(c1: Cochain, c2: Cochain, FP: GradedGroup) -> Cochain:
    """Sum of the pullbacks along the two projections of the fibre product."""
    labels = FP.group.labels
    m = math.lcm(c1.modulus, c2.modulus)
    a, b = m // c1.modulus, m // c2.modulus
    return Cochain(FP, c1.degree, m, c1.twisted,
                   evaluator=lambda t: a * c1(*(labels[x][0] for x in t)) + b * c2(*(labels[x][1] for x in t)))


def _compare(c1: Cochain, c2: Cochain, group_order: int, samples: int, rng: random.Random,
             exhaustive_limit: int = 20000) -> Dict[str, object]:
    n = c1.degree
    m = math.lcm(c1.modulus, c2.modulus)
    a, b = m // c1.modulus, m // c2.modulus
    if group_order ** n <= exhaustive_limit:
        tuples = itertools.product(range(group_order), repeat=n)
        exhaustive = True
    else:
        tuples = (tuple(rng.randrange(group_order) for _ in range(n)) for _ in range(samples))
        exhaustive = False
    checked = bad = 0
    for t in tuples:
        checked += 1
        if (a * c1(*t) - b * c2(*t)) % m:
            bad += 1
    return {"pass": bad == 0, "checked": checked, "mismatches": bad, "exhaustive": exhaustive}


def verify_twist_identities(alpha: Cochain, beta: Optional[Cochain], M: int, N: int,
                            samples: int = 400, seed: int = 0, misaligned: bool = False) -> Dict[str, dict]:
    """Check the cochain-map property and the three wreath twist identities.

    ``misaligned`` rotates the group entries against the permutation in the
    block embeddings; the identities are then expected to fail.
    """
    rng = random.Random(seed)
    base = alpha.base
    out: Dict[str, dict] = {}
    WN = graded_wreath(base, N)
    pn = wreath_twist(alpha, N, WN)
    out["cochain_map"] = _compare(differential(pn), wreath_twist(differential(alpha), N, WN),
                                  WN.order, samples, rng)

    WM = graded_wreath(base, M)
    WMN = graded_wreath(base, M + N)
    FP = fiber_product(WM, WN)
    iota = sum_embedding(WM, WN, WMN, FP, misaligned)
    lhs = _external(wreath_twist(alpha, M, WM), pn, FP)
    rhs = _pull(wreath_twist(alpha, M + N, WMN), FP, iota)
    res = _compare(lhs, rhs, FP.order, samples, rng)
    res["embedding_is_homomorphism"] = is_homomorphism(FP.group, WMN.group, iota)
    out["sum"] = res

    outer = graded_wreath(WN, M)
    WP = graded_wreath(base, M * N)
    iota = block_embedding(WN, outer, WP, N, misaligned)
    lhs = wreath_twist(pn, M, outer)
    rhs = _pull(wreath_twist(alpha, M * N, WP), outer, iota)
    res = _compare(lhs, rhs, outer.order, samples, rng)
    res["embedding_is_homomorphism"] = (is_homomorphism(outer.group, WP.group, iota)
                                        if outer.order <= 400 else None)
    out["composite"] = res

    if beta is not None:
        FF = fiber_product(WN, WN)
        diag = [FF.group.labels.index((x, x)) for x in range(WN.order)]
        if misaligned:
            diag = diag[1:] + diag[:1]
        lhs = wreath_twist(product(alpha, beta), N, WN)
        rhs = _pull(_external(pn, wreath_twist(beta, N, WN), FF), WN, diag)
        out["product"] = _compare(lhs, rhs, WN.order, samples, rng)
    return out


# ---------------------------------------------------------------- power representations


def _cycle_product(grp: FiniteGroup, gs: Sequence[int], cyc: Sequence[int]) -> int:
    """g_{i_k} ... g_{i_1} for the cycle (i_1, ..., i_k)."""
    p = 0
    for i in cyc:
        p = grp.mul(gs[i], p)
    return p


def power_character(base: GradedGroup, chi: Callable[[int], Cyclotomic], N: int,
                    wreath: Optional[GradedGroup] = None) -> Dict[int, Cyclotomic]:
    """Character of the N-th tensor power on the even part of Ghat wr Sigma_N.

    ``chi`` is a character of the kernel of Ghat given on base indices.
    """
    W = wreath if wreath is not None else graded_wreath(base, N)
    out = {}
    for y in W.kernel_elements:
        gs, s = W.group.labels[y]
        v = Cyclotomic.rational(1)
        for cyc in cycles_of(s):
            v = v * chi(_cycle_product(base.group, gs, cyc))
        out[y] = v
    return out


def twisted_power_character(ext, irrep, N: int, wreath: Optional[GradedGroup] = None) -> Dict[int, Cyclotomic]:
    """Same for a theta-twisted irreducible: cycle products are taken in the extension.

    Returns values at ((g; s), 0) for even (g; s).
    """
    base = ext.base
    W = wreath if wreath is not None else graded_wreath(base, N)
    eg = ext.group.group
    out = {}
    for y in W.kernel_elements:
        gs, s = W.group.labels[y]
        v = Cyclotomic.rational(1)
        for cyc in cycles_of(s):
            p = ext.element(0, 0)
            for i in cyc:
                p = eg.mul(ext.element(gs[i], 0), p)
            x, z = ext.split(p)
            v = v * irrep.value(x, z)
        out[y] = v
    return out


# ---------------------------------------------------------------- cycle data


@dataclass
class CycleData:
    """Cycles of sigma with their products, grouped into blocks.

    Cycles are tuples (i_1, ..., i_k) with sigma(i_l) = i_{l+1}, smallest
    entry first.  Two cycles share a block when they have the same length
    and Real conjugate products.
    """
    cycles: List[Tuple[int, ...]]
    products: List[int]
    blocks: Dict[int, List[List[int]]]
    representatives: Dict[int, List[int]]
    cycle_of: Dict[int, int] = field(default_factory=dict)

    def to_json(self, labels=None) -> dict:
        lab = (lambda x: labels[x]) if labels is not None else (lambda x: x)
        return {"cycles": [list(c) for c in self.cycles],
                "products": [lab(p) for p in self.products],
                "blocks": {str(k): v for k, v in sorted(self.blocks.items())},
                "representatives": {str(k): v for k, v in sorted(self.representatives.items())}}


def _class_key(base: GradedGroup) -> Callable[[int], int]:
    if base.is_graded:
        data = real_conjugacy_classes(base)
        return lambda g: data.class_of[g]
    cls = base.group.conjugacy_classes()
    return lambda g: cls.reps[cls.class_of[g]]


def cycle_data(base: GradedGroup, gs: Sequence[int], sigma: Sequence[int]) -> CycleData:
    cycles = cycles_of(sigma)
    products = [_cycle_product(base.group, gs, c) for c in cycles]
    key = _class_key(base)
    blocks: Dict[int, List[List[int]]] = {}
    grouped: Dict[Tuple[int, int], List[int]] = {}
    for ci, (c, p) in enumerate(zip(cycles, products)):
        grouped.setdefault((len(c), key(p)), []).append(ci)
    for (k, _), members in sorted(grouped.items(), key=lambda kv: kv[1][0]):
        blocks.setdefault(k, []).append(members)
    reps = {k: [b[0] for b in bl] for k, bl in blocks.items()}
    cycle_of = {i: ci for ci, c in enumerate(cycles) for i in c}
    return CycleData(cycles, products, blocks, reps, cycle_of)


@dataclass
class BetaCoefficient:
    """Fibre map of (h; tau) from the base point of cycle i to that of cycle j.

    ``element`` and ``alternative`` are the two product expressions; they
    agree whenever (h; tau) Real-centralizes (g; sigma).  ``offset`` is m
    with tau(i_k) = j_m, taken in 0..k-1.
    """
    source: int
    target: int
    offset: int
    odd: bool
    element: int
    alternative: int

    @property
    def consistent(self) -> bool:
        return self.element == self.alternative


def beta(base: GradedGroup, data: CycleData, gs: Sequence[int], hs: Sequence[int],
         tau: Sequence[int], i: int) -> BetaCoefficient:
    grp = base.group
    inv = grp.inverse
    cyc = data.cycles[i]
    k = len(cyc)
    j = data.cycle_of[tau[cyc[-1]]]
    dst = data.cycles[j]
    if len(dst) != k:
        raise PowerOperationError("tau does not preserve cycle lengths")
    m = (dst.index(tau[cyc[-1]]) + 1) % k
    odd = base.pi[hs[0]] == -1
    # g_{j_1}^-1 ... g_{j_m}^-1 h_{j_m}, with j_0 = j_k
    second = hs[dst[(m - 1) % k]]
    for l in range(m, 0, -1):
        second = grp.mul(inv[gs[dst[l - 1]]], second)
    if not odd:
        # h_{j_k} g_{i_{k-m+1}}^-1 ... g_{i_k}^-1
        first = hs[dst[-1]]
        for l in range(k - m + 1, k + 1):
            first = grp.mul(first, inv[gs[cyc[l - 1]]])
    else:
        # h_{j_k} g_{i_m} ... g_{i_1}
        tail = 0
        for l in range(1, m + 1):
            tail = grp.mul(gs[cyc[l - 1]], tail)
        first = grp.mul(hs[dst[-1]], tail)
    return BetaCoefficient(i, j, m, odd, second, first)


def beta_in_transporter(base: GradedGroup, data: CycleData, b: BetaCoefficient) -> bool:
    """beta . p_i^{pi(beta)} . beta^-1 == p_j."""
    return base.real_act(b.element, data.products[b.source]) == data.products[b.target]


def tau_respects_cycles(data: CycleData, tau: Sequence[int], b: BetaCoefficient) -> bool:
    """tau(i_l) = j_{l+m} (even) or j_{m-l} (odd) for every l."""
    src, dst = data.cycles[b.source], data.cycles[b.target]
    k = len(src)
    for l in range(1, k + 1):
        want = (l + b.offset) if not b.odd else (b.offset - l)
        if tau[src[l - 1]] != dst[(want - 1) % k]:
            return False
    return True


# ---------------------------------------------------------------- Real classes of the wreath


def _ordinary_class_key(base: GradedGroup) -> Tuple[Callable[[int], int], Callable[[int], int]]:
    """Ordinary kernel class of an element, and the class swap induced by an odd element."""
    ker = base.kernel_elements
    cls_of: Dict[int, int] = {}
    for g in ker:
        if g in cls_of:
            continue
        for s in ker:
            cls_of.setdefault(base.conj(s, g), g)
    if base.is_graded:
        w = base.omega
        swap = {c: cls_of[base.real_act(w, c)] for c in set(cls_of.values())}
    else:
        swap = {c: c for c in set(cls_of.values())}
    return cls_of.__getitem__, swap.__getitem__


def wreath_cycle_type(base: GradedGroup, label) -> Tuple:
    """Invariant of Real conjugacy in the wreath: the multiset of (length, class of
    product), modulo the global class swap coming from the odd elements."""
    gs, s = label
    cls, swap = _ordinary_class_key(base)
    cycles = cycles_of(s)
    plain = tuple(sorted((len(c), cls(_cycle_product(base.group, gs, c))) for c in cycles))
    swapped = tuple(sorted((k, swap(c)) for k, c in plain))
    return min(plain, swapped)


def wreath_real_class_count(base: GradedGroup, N: int) -> int:
    """Count of Real classes of the wreath kernel, from cycle types alone."""
    cls, swap = _ordinary_class_key(base)
    classes = sorted(set(cls(g) for g in base.kernel_elements))
    pairs = [(k, c) for k in range(1, N + 1) for c in classes]
    types = set()

    def fill(start: int, remaining: int, acc: List[Tuple[int, int]]):
        if remaining == 0:
            plain = tuple(sorted(acc))
            swapped = tuple(sorted((k, swap(c)) for k, c in plain))
            types.add(min(plain, swapped))
            return
        for idx in range(start, len(pairs)):
            k, c = pairs[idx]
            if k <= remaining:
                fill(idx, remaining - k, acc + [(k, c)])

    fill(0, N, [])
    return len(types)


# ---------------------------------------------------------------- the power operation


class _LoopValues:
    """x evaluated at (p, B) for any kernel element p and B in its centralizer."""

    def __init__(self, x: QEllClass):
        self.struct = x.structure
        self.sheet = character_sheet(x).values
        self._memo: Dict[Tuple[int, int], QPoly] = {}

    def __call__(self, p: int, B: int) -> QPoly:
        key = (p, B)
        if key not in self._memo:
            struct = self.struct
            base = struct.base
            ci, k = struct.locate(p, 0)
            comp = struct.components[ci]
            val = self.sheet[(comp.g, comp.point, base.conj(k, B))]
            self._memo[key] = val.conj() if base.pi[k] == -1 else val
        return self._memo[key]


def _rescale(poly: QPoly, cycle_count: int, length: int, shift: int) -> QPoly:
    """q^e -> exp(2 pi i e shift/length) q^(e cycle_count/length)."""
    out = QPoly()
    for e, c in poly.terms.items():
        out = out + QPoly.monomial(e * cycle_count / length, c * _root_at(e * shift / length))
    return out


def power_sheet_value(values: _LoopValues, base: GradedGroup, y_label, z_label) -> QPoly:
    """Value of the N-th power of x at the loop [t, z] over the object y = (g; sigma)."""
    gs, sigma = y_label
    hs, tau = z_label
    data = cycle_data(base, gs, sigma)
    grp = base.group
    seen = set()
    total = QPoly.monomial(0, 1)
    for start in range(len(data.cycles)):
        if start in seen:
            continue
        cur, B, shift, count = start, 0, 0, 0
        while True:
            seen.add(cur)
            b = beta(base, data, gs, hs, tau, cur)
            B = grp.mul(b.element, B)
            shift += b.offset
            count += 1
            cur = b.target
            if cur == start:
                break
        p = data.products[start]
        if grp.mul(B, p) != grp.mul(p, B):
            raise PowerOperationError("composite does not centralize the cycle product")
        total = total * _rescale(values(p, B), count, len(data.cycles[start]), shift)
    return total


def _trivial_structure(real: bool) -> QEllStructure:
    from .groups import cyclic
    if real:
        return QEllStructure(GradedGroup(cyclic(2), [1, -1]), real=True)
    return QEllStructure(cyclic(1), real=False)


def qellr_power(x: QEllClass, N: int, target: Optional[QEllStructure] = None) -> QEllClass:
    """The N-th power operation of an untwisted class on a point.

    Works for Real and complex structures alike; the result lives in the
    theory of the wreath product (of the trivial group when N = 0).
    """
    struct = x.structure
    if struct.alpha is not None:
        raise PowerOperationError("power operations are only implemented for untwisted classes; "
                                  "the twisted case needs the twisted power representation data")
    if struct.X.size != 1:
        raise PowerOperationError("power operations are implemented on a point only")
    if N < 0:
        raise PowerOperationError("N must be non-negative")
    if N == 0:
        triv = target if target is not None else _trivial_structure(struct.real)
        return triv.one()
    base = struct.base
    if target is None:
        target = QEllStructure(graded_wreath(base, N), real=struct.real)
    W = target.base
    labels = W.group.labels
    values = _LoopValues(x)
    terms: Dict[Tuple[int, int, Fraction], int] = {}
    for ci, comp in enumerate(target.components):
        y = labels[comp.g]
        polys = []
        for (x_local, z) in comp.rep_coords:
            if z:
                raise PowerOperationError("unexpected central coordinate in an untwisted component")
            polys.append(power_sheet_value(values, base, y, labels[comp.to_base[x_local]]))
        exponents = sorted(set(e for p in polys for e in p.terms))
        for E in exponents:
            col = [p.terms.get(E, Cyclotomic.zero(1)) for p in polys]
            mults = comp.decompose(col)
            for bi, c in comp.to_basis(mults).items():
                if (E - comp.basis[bi].slope).denominator != 1:
                    raise PowerOperationError("rotation condition fails in the power operation")
                terms[(ci, bi, E)] = terms.get((ci, bi, E), 0) + c
    return QEllClass(target, terms)


def stringy_power(x: QEllClass, N: int, precision: int,
                  target: Optional[QEllStructure] = None) -> TateSeries:
    """The power operation on the Tate completion, kept modulo q^precision."""
    return tate_completion(qellr_power(x, N, target), precision)


def power_to_json(y: QEllClass) -> dict:
    return {"structure": y.structure.to_json(), "class": y.to_json()}
