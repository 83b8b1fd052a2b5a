"""
Loop transgression of cochains on BG to cochains on the inertia groupoid
G//G, and the two reflection-twisted variants landing on the unoriented
loop groupoid G//_R Ghat.

A simplex of the groupoid is written ``(morphisms, obj)`` with morphisms
leftmost first: ``((s_n, ..., s_1), g)`` is the chain g -> s_1.g -> ...
All values are integers modulo the cochain modulus.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from .cochains import Cochain, CochainError, restrict
from .groups import GradedGroup, inclusion_map, real_centralizer, real_conjugacy_classes, trivially_graded


class GroupoidCochain:
    """A cochain on G//_R Ghat (or G//G when the base is trivially graded).

    Objects are kernel elements, morphisms act by Real conjugation.
    ``twisted`` means the coefficient system is T_pi.
    """

    def __init__(self, base: GradedGroup, degree: int, modulus: int, twisted: bool,
                 evaluator: Callable[[Tuple[int, ...], int], int]):
        self.base = base
        self.degree = degree
        self.modulus = modulus
        self.twisted = twisted and base.is_graded
        self._eval = evaluator

    def __call__(self, morphisms: Tuple[int, ...], obj: int) -> int:
        return int(self._eval(tuple(morphisms), obj)) % self.modulus

    def restrict_to(self, g: int, sub: Optional[GradedGroup] = None) -> Cochain:
        """The component at the object g, as a cochain on its stabilizer."""
        grp = sub if sub is not None else real_centralizer(self.base, g) if self.base.is_graded \
            else trivially_graded(self.base.group.centralizer(g))
        emb = inclusion_map(grp.group, self.base.group)
        n = grp.order
        arr = np.zeros((n,) * self.degree, dtype=np.int64)
        for tup in itertools.product(range(1, n), repeat=self.degree):
            arr[tup] = self(tuple(emb[x] for x in tup), g)
        return Cochain(grp, self.degree, self.modulus, self.twisted, values=arr)


def groupoid_differential(c: GroupoidCochain) -> GroupoidCochain:
    """Alternating face sum with the same sign pattern as the group differential.

    The face dropping the leftmost morphism is multiplied by pi of that
    morphism when twisted; the face dropping the first-applied morphism
    moves the object along it.
    """
    base, n = c.base, c.degree
    rows = base.group.rows
    pi = base.pi if c.twisted else (1,) * base.order

    def ev(ms, x):
        total = pi[ms[0]] * c(ms[1:], x)
        for p in range(n):
            total += (-1) ** (p + 1) * c(ms[:p] + (rows[ms[p]][ms[p + 1]],) + ms[p + 2:], x)
        total += (-1) ** (n + 1) * c(ms[:n], base.real_act(ms[n], x) if n + 1 > 0 else x)
        return total

    return GroupoidCochain(base, n + 1, c.modulus, c.twisted, ev)


# ---------------------------------------------------------------- Willerton


def _plain_on_kernel(alpha: Cochain) -> Cochain:
    if alpha.base.is_graded:
        ker = alpha.base.group.subgroup(alpha.base.kernel_elements)
        return restrict(alpha, trivially_graded(ker))
    return alpha


def transgression_cochain(alpha: Cochain) -> GroupoidCochain:
    """Transgression of a plain (n+1)-cochain, as a cochain on G//G.

    tau(lam)([g_n|...|g_1] x) = sum_i (-1)^(n-i) lam[g_n|...|g_{i+1}| x_i |g_i|...|g_1]
    with x_i = (g_i ... g_1) x (g_i ... g_1)^-1.
    """
    if alpha.degree < 1:
        raise CochainError("transgression needs degree at least 1")
    lam = _plain_on_kernel(alpha)
    grp = lam.base.group
    n = lam.degree - 1
    base = lam.base

    def ev(gs, x):
        total = 0
        cur = x
        # gs = (g_n, ..., g_1); walk i = 0..n with cur = x_i
        for i in range(n + 1):
            left = gs[:n - i]
            right = gs[n - i:]
            total += (-1) ** (n - i) * lam(*(left + (cur,) + right))
            if i < n:
                gi = gs[n - 1 - i]
                cur = grp.conj(gi, cur)
        return total

    return GroupoidCochain(base, n, lam.modulus, False, ev)


def transgress(alpha: Cochain, g: int) -> Cochain:
    """tau(alpha)_g, a cochain on the centralizer of g (in the kernel when graded)."""
    if alpha.base.is_graded and alpha.base.pi[g] != 1:
        raise CochainError("g must lie in the kernel")
    tc = transgression_cochain(alpha)
    lam_base = tc.base
    local = g
    if alpha.base.is_graded:
        ker = lam_base.group
        local = alpha.base.kernel_elements.index(g)
        cent = trivially_graded(ker.centralizer(local))
        out = tc.restrict_to(local, cent)
    else:
        out = tc.restrict_to(local)
    return out


# ---------------------------------------------------------------- Real transgressions


def _require_graded(c: Cochain):
    if not c.base.is_graded:
        raise CochainError("Real transgression needs a non-trivially graded base")


def real_transgression_cochain3(ahat: Cochain) -> GroupoidCochain:
    """Reflection twisted transgression of a plain 3-cochain on BGhat.

    Exponents (pi - 1)/2 become the selectors 0 (even) and -1 (odd).
    """
    _require_graded(ahat)
    if ahat.degree != 3 or ahat.twisted:
        raise CochainError("expected a plain 3-cochain")
    base = ahat.base
    grp = base.group
    rows, inv, pi = grp.rows, grp.inverse, base.pi
    a = ahat

    def ev(ms, g):
        s2, s1 = ms
        p1, p2 = pi[s1], pi[s2]
        e1, e2 = (p1 - 1) // 2, (p2 - 1) // 2
        ginv = inv[g]
        total = e1 * e2 * a(g, ginv, g)
        gp1 = g if p1 == 1 else ginv
        gm1 = ginv if p1 == 1 else g
        c_minus = grp.conj(s1, gm1)
        c_plus = grp.conj(s1, gp1)
        inner = a(c_minus, c_plus, s1) + a(s1, gm1, gp1) - a(c_minus, s1, gp1)
        total += -e2 * inner
        s21 = rows[s2][s1]
        g21 = g if pi[s21] == 1 else ginv
        total += a(s2, s1, g21) + a(grp.conj(s21, g21), s2, s1) - a(s2, grp.conj(s1, g21), s1)
        return total

    return GroupoidCochain(base, 2, ahat.modulus, True, ev)


def real_transgression_cochain2(lam: Cochain) -> GroupoidCochain:
    """Degree-2 companion of the reflection twisted transgression.

    Same shape as the twisted-input formula below but with the opposite
    sign on the [g^-1|g] term; that is the only choice for which the
    degree-3 formula intertwines the differentials on the whole groupoid
    (checked in the tests).
    """
    _require_graded(lam)
    if lam.degree != 2 or lam.twisted:
        raise CochainError("expected a plain 2-cochain")
    return _ref_deg2(lam, twisted_output=True, selector=1)


def _ref_deg2(theta: Cochain, twisted_output: bool, selector: int = -1) -> GroupoidCochain:
    base = theta.base
    grp = base.group
    inv, pi = grp.inverse, base.pi

    def ev(ms, g):
        (s,) = ms
        e = selector if pi[s] == -1 else 0
        gp = g if pi[s] == 1 else inv[g]
        return e * theta(inv[g], g) + theta(grp.conj(s, gp), s) - theta(s, gp)

    return GroupoidCochain(base, 1, theta.modulus, twisted_output, ev)


def real_transgression_ref_cochain2(theta: Cochain) -> GroupoidCochain:
    """Reflection transgression of a twisted 2-cochain to a plain 1-cochain."""
    _require_graded(theta)
    if theta.degree != 2 or not theta.twisted:
        raise CochainError("expected a twisted 2-cochain")
    return _ref_deg2(theta, twisted_output=False)


def real_transgression_ref_cochain1(mu: Cochain) -> GroupoidCochain:
    """Degree-1 companion: the 0-cochain g -> mu[g] on objects."""
    _require_graded(mu)
    if mu.degree != 1 or not mu.twisted:
        raise CochainError("expected a twisted 1-cochain")
    return GroupoidCochain(mu.base, 0, mu.modulus, False, lambda ms, g: mu(g))


def real_transgress_deg3(ahat: Cochain, g: int) -> Cochain:
    """The twisted 2-cocycle on C^R(g) obtained from a 3-cochain on BGhat."""
    if ahat.base.pi[g] != 1:
        raise CochainError("g must lie in the kernel")
    return real_transgression_cochain3(ahat).restrict_to(g)


def real_transgress_deg2(theta: Cochain, g: int) -> Cochain:
    """The plain 1-cochain on C^R(g) obtained from a twisted 2-cochain."""
    if theta.base.pi[g] != 1:
        raise CochainError("g must lie in the kernel")
    return real_transgression_ref_cochain2(theta).restrict_to(g)


@dataclass
class TransgressionOutput:
    """Per-class components of a transgressed cochain."""
    kind: str
    base: GradedGroup
    components: Dict[int, Cochain]
    class_of: Dict[int, int] = field(default_factory=dict)
    conjugator: Dict[int, int] = field(default_factory=dict)

    def component_for(self, g: int) -> Tuple[int, int, Cochain]:
        """Representative, conjugator c with c.g = rep, and the component."""
        rep = self.class_of[g]
        return rep, self.conjugator[g], self.components[rep]


def transgress_all(alpha: Cochain, kind: str = "real3") -> TransgressionOutput:
    """Transgress over every class representative.

    kind: "plain" (tau on ordinary classes of the kernel), "real3" (the
    reflection twisted transgression of a 3-cochain) or "ref2".
    """
    base = alpha.base
    if kind == "plain":
        ker = base.group.subgroup(base.kernel_elements) if base.is_graded else base.group
        cls = ker.conjugacy_classes()
        comps, class_of, conj = {}, {}, {}
        for i, rep in enumerate(cls.reps):
            comps[ker.to_root(rep) if base.is_graded else rep] = transgress(alpha, ker.to_root(rep) if base.is_graded else rep)
        for x in range(ker.order):
            rep = cls.reps[cls.class_of[x]]
            c = next(y for y in range(ker.order) if ker.conj(y, x) == rep)
            key = ker.to_root(x) if base.is_graded else x
            class_of[key] = ker.to_root(rep) if base.is_graded else rep
            conj[key] = ker.to_root(c) if base.is_graded else c
        return TransgressionOutput(kind, base, comps, class_of, conj)
    data = real_conjugacy_classes(base)
    fn = real_transgress_deg3 if kind == "real3" else real_transgress_deg2
    comps = {rep: fn(alpha, rep) for rep in data.classes}
    return TransgressionOutput(kind, base, comps, dict(data.class_of), dict(data.conjugator))
