"""
Degree-0 quasi-elliptic cohomology of finite group actions, complex and Real.

A structure splits into components indexed by a class representative g
(ordinary classes of the kernel, or Real classes) and an orbit of the
stabilizing group on the fixed points X^g.  Each component is a free
Z[q^{+-1}]-module on the twisted irreducibles U of the stabilizer (grouped
by Real type when the stabilizer contains odd elements), and U sits in
q-degree lam where U(g) = exp(2 pi i lam).

Classes are finite integer combinations of (component, basis element,
q-exponent); the exponent of a basis element is always its slope plus an
integer.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .characters import CharacterError, TwistedIrrep, twisted_irreps
from .cochains import (Cochain, _as_graded, central_extension, is_cocycle, pullback, restrict,
                       zero_cochain)
from .cyclotomic import Cyclotomic, QPoly
from .groups import (FiniteGroup, GSet, GradedGroup, fiber_product, fixed_points, inclusion_map,
                     point_set, real_conjugacy_classes, split_graded, subgroups_up_to_conjugacy,
                     trivially_graded)
from .transgression import GroupoidCochain, _ref_deg2, real_transgression_cochain3, transgression_cochain


class QEllError(ValueError):
    pass


Term = Tuple[int, int, Fraction]


def _slope_of(value: Cyclotomic) -> Fraction:
    k = value.root_exponent()
    if k is None:
        raise QEllError("g does not act by a root of unity")
    return Fraction(k, value.n) % 1


def _root_at(e: Fraction) -> Cyclotomic:
    e = Fraction(e) % 1
    return Cyclotomic.root(e.denominator, e.numerator)


@dataclass
class BasisElement:
    irrep: int
    real_type: str
    degree: int
    slope: Fraction
    underlying: Tuple[Tuple[int, int], ...]


class Component:
    """One (class, orbit) summand: twisted irreducibles of the point stabilizer."""

    def __init__(self, structure: "QEllStructure", g: int, point: int, stabilizer_elements: Sequence[int],
                 sign: int = 1, orbit: Sequence[int] = ()):
        base = structure.base
        self.g = g
        self.point = point
        self.sign = sign
        self.orbit = tuple(orbit)
        self.stabilizer = base.subgroup(stabilizer_elements)
        self.to_base = list(self.stabilizer.group.embedding)
        self.local = {x: i for i, x in enumerate(self.to_base)}
        gc = structure.groupoid_twist
        if gc is None:
            self.twist = zero_cochain(self.stabilizer, 2, 1, twisted=self.stabilizer.is_graded)
        else:
            self.twist = gc.restrict_to(g, self.stabilizer)
        self.ext = central_extension(self.twist, check_cocycle=False)
        self.m = self.ext.m
        graded = structure.real and self.stabilizer.is_graded
        self.irreps: List[TwistedIrrep] = twisted_irreps(self.ext, with_real_types=graded)
        self.table = self.irreps[0].table if self.irreps else None
        self.row_to_irrep = {ir.row: i for i, ir in enumerate(self.irreps)}
        g_local = self.local[g]
        lift = self.ext.group.group
        self.level = lift.element_order(self.ext.element(g_local, 0))
        self.slopes = [_slope_of(ir.value(g_local, 0) / ir.degree) for ir in self.irreps]
        self.basis: List[BasisElement] = []
        for i, ir in enumerate(self.irreps):
            kind = ir.real_type
            if kind == "C":
                if ir.partner < i:
                    continue
                under = ((i, 1), (ir.partner, 1))
            elif kind == "H":
                under = ((i, 2),)
            else:
                under = ((i, 1),)
            self.basis.append(BasisElement(i, kind, ir.degree, self.slopes[i], under))
        self.basis_of_irrep: Dict[int, int] = {}
        for bi, b in enumerate(self.basis):
            for i, _ in b.underlying:
                self.basis_of_irrep[i] = bi
        # class representatives of the extension kernel as (base-local x, z)
        ker = self.table.group if self.table is not None else None
        if ker is not None:
            emb = ker.embedding if self.ext.group.is_graded else list(range(ker.order))
            self.rep_coords = [self.ext.split(emb[r]) for r in self.table.classes.reps]
        else:
            self.rep_coords = []

    @property
    def rank(self) -> int:
        return len(self.basis)

    def kernel_elements(self) -> List[int]:
        """Base indices of the ungraded part of the stabilizer."""
        return [self.to_base[x] for x in self.stabilizer.kernel_elements]

    def character(self, irrep: int, h: int, z: int = 0) -> Cyclotomic:
        return self.irreps[irrep].value(self.local[h], z)

    def to_basis(self, mults: Dict[int, int]) -> Dict[int, int]:
        """Rewrite multiplicities of irreducibles in this component's basis."""
        out: Dict[int, int] = {}
        for bi, b in enumerate(self.basis):
            i = b.irrep
            c = mults.get(i, 0)
            if b.real_type == "H":
                if c % 2:
                    raise QEllError("odd multiplicity of a quaternionic irreducible")
                c //= 2
            elif b.real_type == "C" and mults.get(self.irreps[i].partner, 0) != c:
                raise QEllError("complex-type pair with unequal multiplicities")
            if c:
                out[bi] = c
        back: Dict[int, int] = {}
        for bi, c in out.items():
            for i, k in self.basis[bi].underlying:
                back[i] = back.get(i, 0) + c * k
        if {i: c for i, c in mults.items() if c} != back:
            raise QEllError("not the underlying character of a Real class")
        return out

    def decompose(self, class_values: Sequence[Cyclotomic]) -> Dict[int, int]:
        """Multiplicities of the twisted irreducibles in a class function on the extension kernel."""
        full = self.table.decompose(class_values)
        out = {}
        for row, c in enumerate(full):
            if c:
                if row not in self.row_to_irrep:
                    raise QEllError("class function has the wrong central character")
                out[self.row_to_irrep[row]] = c
        return out

    def to_json(self, labels=None) -> dict:
        def lab(x):
            return labels[x] if labels is not None else x
        return {
            "class": self.g, "class_label": _jsonable(lab(self.g)), "sign": self.sign,
            "point": self.point, "stabilizer_order": self.stabilizer.order, "modulus": self.m,
            "level": self.level,
            "basis": [{"irrep": b.irrep, "degree": b.degree, "real_type": b.real_type,
                       "q_exponent": str(b.slope)} for b in self.basis],
        }


def _jsonable(x):
    if isinstance(x, tuple):
        return [_jsonable(y) for y in x]
    return x


def _ordinary_classes(base: GradedGroup) -> List[int]:
    seen, reps = set(), []
    kernel = base.kernel_elements
    for g in kernel:
        if g in seen:
            continue
        seen.update(base.conj(s, g) for s in kernel)
        reps.append(g)
    return reps


def groupoid_twist(base: GradedGroup, alpha: Optional[Cochain]) -> Optional[GroupoidCochain]:
    """The transgressed 2-cocycle on the loop groupoid (Real one over a graded base)."""
    if alpha is None:
        return None
    if alpha.degree != 3:
        raise QEllError("twist must be a 3-cochain")
    if alpha.base.group is not base.group and not (
            alpha.base.order == base.order and np.array_equal(alpha.base.group.table, base.group.table)):
        raise QEllError("twist lives on a different group")
    if not is_cocycle(alpha):
        raise QEllError("twist is not a cocycle")
    if base.is_graded:
        return real_transgression_cochain3(alpha)
    return transgression_cochain(alpha)


class QEllStructure:
    """Componentwise data of QEll (real=False) or QEllR (real=True) of X // base."""

    def __init__(self, base, X: Optional[GSet] = None, alpha: Optional[Cochain] = None,
                 real: bool = True, jobs: int = 1):
        base = _as_graded(base)
        if real and not base.is_graded:
            raise QEllError("the Real theory needs a non-trivial grading")
        self.base = base
        self.X = X if X is not None else point_set(base)
        if self.X.group.order != base.order:
            raise QEllError("G-set is for a different group")
        self.alpha = alpha
        self.real = real
        self.groupoid_twist = groupoid_twist(base, alpha)
        if real:
            data = real_conjugacy_classes(base)
            reps, signs = list(data.classes), dict(data.sign)
            movers = list(range(base.order))
        else:
            reps = _ordinary_classes(base)
            signs = {g: 1 for g in reps}
            movers = list(base.kernel_elements)
        self.movers = movers
        self.class_reps = reps
        self.signs = signs
        specs = []
        for g in reps:
            cent = [s for s in movers if base.real_act(s, g) == g]
            for orbit in self.X.orbits(cent, fixed_points(self.X, g)):
                x = orbit[0]
                specs.append((g, x, self.X.stabilizer(x, cent), signs[g], orbit))

        def build(spec):
            g, x, stab, sign, orbit = spec
            return Component(self, g, x, stab, sign, orbit)

        if jobs > 1 and len(specs) > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                self.components: List[Component] = list(pool.map(build, specs))
        else:
            self.components = [build(s) for s in specs]
        self._index = {(c.g, c.point): i for i, c in enumerate(self.components)}
        self._companion: Optional[QEllStructure] = None

    # ------------------------------------------------------------ bookkeeping

    @property
    def modulus(self) -> int:
        return self.alpha.modulus if self.alpha is not None else 1

    @property
    def rank(self) -> int:
        return sum(c.rank for c in self.components)

    def component_for(self, g: int, x: int = 0) -> Optional[int]:
        return self._index.get((g, x))

    def locate(self, g: int, x: int) -> Tuple[int, int]:
        """(component index, smallest k) with k.g the class rep and x.k^-1 its point."""
        base, act = self.base, self.X.act
        for k in self.movers:
            key = (base.real_act(k, g), act[x][base.inv(k)])
            if key in self._index:
                return self._index[key], k
        raise QEllError("pair (g, x) lies in no component")

    def companion(self) -> "QEllStructure":
        """The complex structure over the same data (the target of the forgetful map)."""
        if not self.real:
            return self
        if self._companion is None:
            self._companion = QEllStructure(self.base, self.X, self.alpha, real=False)
        return self._companion

    def basis_element(self, comp: int, index: int, shift: int = 0) -> "QEllClass":
        b = self.components[comp].basis[index]
        return QEllClass(self, {(comp, index, b.slope + shift): 1})

    def basis_elements(self) -> List["QEllClass"]:
        return [self.basis_element(ci, bi) for ci, c in enumerate(self.components) for bi in range(c.rank)]

    def one(self) -> "QEllClass":
        """Unit for the componentwise product: the trivial representation in every component."""
        if self.alpha is not None:
            raise QEllError("twisted theories have no unit")
        terms = {}
        for ci, c in enumerate(self.components):
            for bi, b in enumerate(c.basis):
                ir = c.irreps[b.irrep]
                if ir.degree == 1 and all(c.character(b.irrep, h) == 1 for h in c.kernel_elements()):
                    terms[(ci, bi, Fraction(0))] = 1
        return QEllClass(self, terms)

    def zero(self) -> "QEllClass":
        return QEllClass(self, {})

    def to_json(self) -> dict:
        labels = self.base.labels
        return {
            "theory": "QEllR" if self.real else "QEll",
            "group_order": self.base.order,
            "twisted": self.alpha is not None,
            "modulus": self.modulus,
            "rank": self.rank,
            "components": [c.to_json(labels) for c in self.components],
        }


# ---------------------------------------------------------------- classes


class QEllClass:
    """Finite integer combination of q^e times basis elements."""

    def __init__(self, structure: QEllStructure, terms: Dict[Term, int]):
        self.structure = structure
        self.terms = {(ci, bi, Fraction(e)): int(c) for (ci, bi, e), c in terms.items() if c}

    def __add__(self, other: "QEllClass") -> "QEllClass":
        self._same(other)
        out = dict(self.terms)
        for t, c in other.terms.items():
            out[t] = out.get(t, 0) + c
        return QEllClass(self.structure, out)

    def __neg__(self):
        return QEllClass(self.structure, {t: -c for t, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k: int):
        return QEllClass(self.structure, {t: k * c for t, c in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, QEllClass) and other.structure is self.structure and other.terms == self.terms

    __hash__ = None

    def _same(self, other):
        if other.structure is not self.structure:
            raise QEllError("classes live in different structures")

    def q_shift(self, k: int) -> "QEllClass":
        """Multiply by q^k."""
        return QEllClass(self.structure, {(ci, bi, e + k): c for (ci, bi, e), c in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def rotation_ok(self) -> bool:
        comps = self.structure.components
        for (ci, bi, e) in self.terms:
            comp = comps[ci]
            b = comp.basis[bi]
            if (e - b.slope).denominator != 1 or (e * comp.level).denominator != 1:
                return False
            lift = comp.character(b.irrep, comp.g)
            if lift != _root_at(e) * b.degree:
                return False
        return True

    def component_terms(self, ci: int) -> Dict[Tuple[int, Fraction], int]:
        return {(bi, e): c for (cj, bi, e), c in self.terms.items() if cj == ci}

    def to_json(self) -> list:
        comps = self.structure.components
        return [{"class": comps[ci].g, "point": comps[ci].point, "basis": bi, "q_exponent": str(e),
                 "coefficient": c} for (ci, bi, e), c in sorted(self.terms.items())]

    def __repr__(self):
        return f"QEllClass({dict(sorted(self.terms.items()))})"


def class_from_json(structure: QEllStructure, data) -> QEllClass:
    """Inverse of QEllClass.to_json; also accepts {"class": [...]} as written by the power command."""
    if isinstance(data, dict):
        data = data.get("class", data.get("terms"))
    if not isinstance(data, list):
        raise QEllError("a class is a list of terms")
    terms: Dict[Term, int] = {}
    try:
        for t in data:
            ci = structure.component_for(int(t["class"]), int(t.get("point", 0)))
            if ci is None:
                raise QEllError(f"no component for class {t['class']} at point {t.get('point', 0)}")
            bi = int(t["basis"])
            if not 0 <= bi < structure.components[ci].rank:
                raise QEllError("basis index out of range")
            e = Fraction(str(t.get("q_exponent", "0")))
            if (e - structure.components[ci].basis[bi].slope).denominator != 1:
                raise QEllError("q-exponent is not the basis slope plus an integer")
            key = (ci, bi, e)
            terms[key] = terms.get(key, 0) + int(t.get("coefficient", 1))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, QEllError):
            raise
        raise QEllError(f"malformed class JSON: {exc}") from None
    return QEllClass(structure, terms)


def random_class(structure: QEllStructure, seed: int, terms: int = 4, span: int = 2) -> QEllClass:
    import random
    rng = random.Random(seed)
    pool = [(ci, bi) for ci, c in enumerate(structure.components) for bi in range(c.rank)]
    out: Dict[Term, int] = {}
    if not pool:
        return structure.zero()
    for _ in range(terms):
        ci, bi = rng.choice(pool)
        e = structure.components[ci].basis[bi].slope + rng.randint(-span, span)
        out[(ci, bi, e)] = out.get((ci, bi, e), 0) + rng.choice([-2, -1, 1, 2, 3])
    return QEllClass(structure, out)


# ---------------------------------------------------------------- transport


def _phi(gc: Optional[GroupoidCochain], k: int, h: int, g: int, base: GradedGroup) -> int:
    """Central part of (k,0)(h,0)(k,0)^-1 along the morphism k out of the object g."""
    if gc is None:
        return 0
    khk = base.conj(k, h)
    return gc((k, h), g) - gc((khk, k), g)


def transport_irreps(src_struct: QEllStructure, src: Component, k: int, tgt: Component,
                     tgt_root: Optional[Sequence[int]] = None) -> Dict[int, int]:
    """Irreducible i of src -> index of k_*(U_i) = F(U_i o T_k^-1) among tgt's irreducibles.

    k runs from src.g to tgt.g (Real conjugation) and moves src.point to
    tgt.point; F is complex conjugation when k is odd.  tgt_root maps tgt's
    base-local indices into src_struct.base (defaults to tgt.to_base).
    """
    base = src_struct.base
    gc = src_struct.groupoid_twist
    roots = tgt.to_base if tgt_root is None else [tgt_root[x] for x in tgt.to_base]
    kinv = base.inv(k)
    odd = base.pi[k] == -1
    m = src.m
    if tgt.m != m:
        raise QEllError("moduli differ")
    coords = []
    for (x1, z1) in tgt.rep_coords:
        h = base.conj(kinv, roots[x1])
        if h not in src.local:
            raise QEllError("conjugating element does not match the stabilizers")
        z = base.pi[k] * (z1 - _phi(gc, k, h, src.g, base))
        coords.append((src.local[h], z))
    out = {}
    for i, ir in enumerate(src.irreps):
        vals = [ir.value(x, z) for (x, z) in coords]
        if odd:
            vals = [v.conj() for v in vals]
        try:
            row = tgt.table.find_row(vals)
        except CharacterError:
            raise QEllError("transported character is not an irreducible of the target") from None
        if row not in tgt.row_to_irrep:
            raise QEllError("transported character has the wrong central character")
        out[i] = tgt.row_to_irrep[row]
    return out


def _transport_mults(src_struct, src, mults, k, tgt, tgt_root=None) -> Dict[int, int]:
    perm = transport_irreps(src_struct, src, k, tgt, tgt_root)
    out: Dict[int, int] = {}
    for i, c in mults.items():
        out[perm[i]] = out.get(perm[i], 0) + c
    return out


def _forgetful_targets(struct: QEllStructure, comp: Component) -> List[Tuple[int, int]]:
    """Complex components reached from a Real component, with the smallest transporting k."""
    cplx = struct.companion()
    base, act = struct.base, struct.X.act
    out = []
    for ti, t in enumerate(cplx.components):
        for k in range(base.order):
            if base.real_act(k, comp.g) == t.g and act[comp.point][base.inv(k)] == t.point:
                out.append((ti, k))
                break
    return out


def forgetful(x: QEllClass) -> QEllClass:
    """c: QEllR -> QEll.  R -> U, C -> U + U', H -> 2U, spread over the ordinary classes covered."""
    struct = x.structure
    if not struct.real:
        return x
    cplx = struct.companion()
    out: Dict[Term, int] = {}
    cache: Dict[int, List] = {}
    for (ci, bi, e), c in x.terms.items():
        comp = struct.components[ci]
        if ci not in cache:
            cache[ci] = [(ti, transport_irreps(struct, comp, k, cplx.components[ti]))
                         for ti, k in _forgetful_targets(struct, comp)]
        for ti, perm in cache[ci]:
            for i, mult in comp.basis[bi].underlying:
                key = (ti, perm[i], e)
                out[key] = out.get(key, 0) + c * mult
    return QEllClass(cplx, out)


# ---------------------------------------------------------------- products


def _basis_class_values(comp: Component, bi: int) -> List[Cyclotomic]:
    vals = []
    for (x, z) in comp.rep_coords:
        total = Cyclotomic.zero(1)
        for i, k in comp.basis[bi].underlying:
            total = total + comp.irreps[i].value(x, z) * k
        vals.append(total)
    return vals


def multiply(a: QEllClass, b: QEllClass) -> QEllClass:
    """Product with an untwisted class a: character products, exponents add.

    When b is untwisted this is the ring structure; otherwise it is the
    module action of the untwisted ring on twisted classes.
    """
    sa, sb = a.structure, b.structure
    if sa.alpha is not None:
        raise QEllError("the left factor must be untwisted")
    if sa.base.group is not sb.base.group or sa.real != sb.real or len(sa.components) != len(sb.components):
        raise QEllError("factors live over different actions")
    out: Dict[Term, int] = {}
    for (ci, bi, ea), ca in a.terms.items():
        comp_a = sa.components[ci]
        comp_b = sb.components[ci]
        if (comp_a.g, comp_a.point) != (comp_b.g, comp_b.point):
            raise QEllError("component lists do not line up")
        fa = {}
        for (x, z) in comp_b.rep_coords:
            h = comp_b.to_base[x]
            fa[(x, z)] = sum((comp_a.character(i, h) * k for i, k in comp_a.basis[bi].underlying),
                             Cyclotomic.zero(1))
        for (cj, bj, eb), cb in b.terms.items():
            if cj != ci:
                continue
            fb = _basis_class_values(comp_b, bj)
            prod = [fa[xz] * v for xz, v in zip(comp_b.rep_coords, fb)]
            for bk, c in comp_b.to_basis(comp_b.decompose(prod)).items():
                key = (ci, bk, ea + eb)
                out[key] = out.get(key, 0) + ca * cb * c
    return QEllClass(sb, out)


def power(a: QEllClass, n: int) -> QEllClass:
    out = a.structure.one()
    for _ in range(n):
        out = multiply(a, out)
    return out


@dataclass
class RingPresentation:
    """Z[q^{+-1}]-algebra presentation of one component (degree-0 part)."""
    component: int
    generators: List[str]
    relations: List[str]
    rank: int
    ground_ring: str = "K^0(pt)"
    documented_symbols: Tuple[str, ...] = ()
    verified: bool = False

    def to_json(self) -> dict:
        return {"generators": self.generators, "relations": self.relations, "rank": self.rank,
                "ground_ring": self.ground_ring, "documented_symbols": list(self.documented_symbols),
                "verified": self.verified}


def cyclic_presentation(struct: QEllStructure, ci: int) -> Optional[RingPresentation]:
    """x_m^n = q^m for a component whose stabilizer kernel is cyclic of order n and contains g = r^m.

    Checked directly: the powers x^0..x^(n-1) must be q-shifts of distinct
    basis elements covering the component and x^n must equal q^m times 1.
    """
    if struct.alpha is not None:
        return None
    comp = struct.components[ci]
    if struct.X.size != 1:
        return None
    base = struct.base
    kernel = comp.kernel_elements()
    n = len(kernel)
    gens = [r for r in kernel if base.group.element_order(r) == n]
    if not gens:
        return None
    r = gens[0]
    m = next(j for j in range(n) if base.power(r, j) == comp.g)
    zeta = Cyclotomic.root(n, 1)
    pick = [bi for bi, b in enumerate(comp.basis) if b.degree == 1 and comp.character(b.irrep, r) == zeta]
    if not pick:
        return None
    x = struct.basis_element(ci, pick[0])
    seen = set()
    cur = QEllClass(struct, {})
    unit = {bi: b for bi, b in enumerate(comp.basis)
            if b.degree == 1 and all(comp.character(b.irrep, h) == 1 for h in kernel)}
    one_terms = {(ci, bi, Fraction(0)): 1 for bi in unit}
    cur = QEllClass(struct, one_terms)
    ok = len(unit) == 1
    for j in range(n):
        terms = list(cur.terms.items())
        if len(terms) != 1 or terms[0][1] != 1:
            ok = False
            break
        (cj, bj, e), _ = terms[0]
        if bj in seen or (e - comp.basis[bj].slope).denominator != 1:
            ok = False
            break
        seen.add(bj)
        cur = multiply(x, cur)
    ok = ok and len(seen) == comp.rank and cur == QEllClass(struct, one_terms).q_shift(m)
    symbols = ("eta", "mu") if struct.real else ()
    return RingPresentation(ci, [f"x_{m}"], [f"x_{m}^{n} - q^{m}"], comp.rank,
                            "KO^0(pt)" if struct.real and comp.stabilizer.is_graded else "K^0(pt)",
                            symbols, ok)


def qell_point(group, alpha: Optional[Cochain] = None, jobs: int = 1) -> QEllStructure:
    """QEll of a point (ungraded view of a graded group)."""
    struct = QEllStructure(group, None, alpha, real=False, jobs=jobs)
    _attach_presentations(struct)
    return struct


def qellr_point(group: GradedGroup, alpha: Optional[Cochain] = None, jobs: int = 1) -> QEllStructure:
    struct = QEllStructure(group, None, alpha, real=True, jobs=jobs)
    _attach_presentations(struct)
    return struct


def qellr_gset(group: GradedGroup, X: GSet, alpha: Optional[Cochain] = None, jobs: int = 1) -> QEllStructure:
    return QEllStructure(group, X, alpha, real=True, jobs=jobs)


def qell_gset(group, X: GSet, alpha: Optional[Cochain] = None, jobs: int = 1) -> QEllStructure:
    return QEllStructure(group, X, alpha, real=False, jobs=jobs)


def _attach_presentations(struct: QEllStructure):
    struct.presentations = {}
    if struct.alpha is not None:
        return
    for ci in range(len(struct.components)):
        pres = cyclic_presentation(struct, ci)
        if pres is not None:
            struct.presentations[ci] = pres


def structure_json(struct: QEllStructure) -> dict:
    out = struct.to_json()
    pres = getattr(struct, "presentations", {})
    for ci, comp in enumerate(out["components"]):
        if ci in pres:
            comp["relations"] = pres[ci].to_json()
    return out


# ---------------------------------------------------------------- character sheets


@dataclass
class CharacterSheet:
    """Values at (g, x, h): g a class rep, x its orbit point, h in the even stabilizer."""
    structure: QEllStructure
    values: Dict[Tuple[int, int, int], QPoly]

    def __eq__(self, other):
        if not isinstance(other, CharacterSheet) or set(self.values) != set(other.values):
            return False
        return all(self.values[k] == other.values[k] for k in self.values)

    __hash__ = None

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.values.values())

    def to_json(self) -> list:
        return [{"g": g, "point": x, "h": h, "value": v.to_json()}
                for (g, x, h), v in sorted(self.values.items())]


def character_sheet(x: QEllClass) -> CharacterSheet:
    """ph for Real classes, ch for complex ones: sum of coeff * chi_U(h, 0) * q^e."""
    struct = x.structure
    vals: Dict[Tuple[int, int, int], QPoly] = {}
    for ci, comp in enumerate(struct.components):
        for h in comp.kernel_elements():
            vals[(comp.g, comp.point, h)] = QPoly()
    for (ci, bi, e), c in x.terms.items():
        comp = struct.components[ci]
        for h in comp.kernel_elements():
            v = sum((comp.character(i, h) * k for i, k in comp.basis[bi].underlying), Cyclotomic.zero(1))
            key = (comp.g, comp.point, h)
            vals[key] = vals[key] + QPoly.monomial(e, v * c)
    return CharacterSheet(struct, vals)


pontryagin_character = character_sheet
chern_character = character_sheet


def forget_sheet(sheet: CharacterSheet) -> CharacterSheet:
    """c on character sheets: move each Real component's values to the ordinary classes it covers."""
    struct = sheet.structure
    if not struct.real:
        return sheet
    cplx = struct.companion()
    base, act = struct.base, struct.X.act
    gc = struct.groupoid_twist
    vals = {}
    for t in cplx.components:
        src, k = None, None
        for comp in struct.components:
            for s in range(base.order):
                if base.real_act(s, comp.g) == t.g and act[comp.point][base.inv(s)] == t.point:
                    src, k = comp, s
                    break
            if src is not None:
                break
        zeta = Cyclotomic.root(src.m, 1) if src.m > 1 else Cyclotomic.rational(1)
        for h1 in t.kernel_elements():
            h = base.conj(base.inv(k), h1)
            z = -base.pi[k] * _phi(gc, k, h, src.g, base)
            v = sheet.values[(src.g, src.point, h)] * (zeta ** (z % src.m))
            vals[(t.g, t.point, h1)] = v.conj() if base.pi[k] == -1 else v
    return CharacterSheet(cplx, vals)


def sheet_equivariance_defects(sheet: CharacterSheet) -> int:
    """Number of (s, h) with ph(g, s.h) != zeta^{tau_ref(theta_g)([s]h)} ph(g, h)."""
    struct = sheet.structure
    base = struct.base
    bad = 0
    for comp in struct.components:
        tau = _ref_deg2(comp.twist, twisted_output=False) if comp.twist.modulus > 1 else None
        zeta = Cyclotomic.root(comp.m, 1)
        for s_loc in range(comp.stabilizer.order):
            s = comp.to_base[s_loc]
            for h in comp.kernel_elements():
                sh = base.real_act(s, h)
                lhs = sheet.values[(comp.g, comp.point, sh)]
                k = tau((s_loc,), comp.local[h]) if tau is not None else 0
                rhs = sheet.values[(comp.g, comp.point, h)] * (zeta ** k)
                bad += lhs != rhs
    return bad


# ---------------------------------------------------------------- Tate completion


@dataclass
class TateSeries:
    """Base change to Laurent series in q, kept modulo q^P."""
    structure: QEllStructure
    precision: int
    terms: Dict[Term, int]

    def coefficients(self, ci: int) -> Dict[int, Dict[Fraction, int]]:
        out: Dict[int, Dict[Fraction, int]] = {}
        for (cj, bi, e), c in self.terms.items():
            if cj == ci:
                out.setdefault(bi, {})[e] = c
        return out

    def rank_per_window(self, ci: int) -> int:
        """Rank of the component over truncated series: one free generator per basis element."""
        return self.structure.components[ci].rank

    def to_json(self) -> dict:
        comps = self.structure.components
        return {"precision": self.precision,
                "terms": [{"class": comps[ci].g, "point": comps[ci].point, "basis": bi,
                           "q_exponent": str(e), "coefficient": c}
                          for (ci, bi, e), c in sorted(self.terms.items())]}


def tate_completion(x: QEllClass, precision: int) -> TateSeries:
    """Drop exponents >= precision and re-check the rotation condition on what is left."""
    kept = {t: c for t, c in x.terms.items() if t[2] < precision}
    probe = QEllClass(x.structure, kept)
    if not probe.rotation_ok():
        raise QEllError("rotation condition fails")
    return TateSeries(x.structure, precision, kept)


# ---------------------------------------------------------------- change of group


def induced_set(group: GradedGroup, sub: GradedGroup, X: GSet) -> Tuple[GSet, List[int]]:
    """X x_H G with (x, a) ~ (x.h, h^-1 a), and the map x -> [x, e]."""
    emb = inclusion_map(sub.group, group.group)
    inv = group.inv
    classes: Dict[Tuple[int, int], int] = {}
    reps = []
    for x in range(X.size):
        for a in range(group.order):
            if (x, a) in classes:
                continue
            idx = len(reps)
            for hl in range(sub.order):
                classes[(X.act[x][hl], group.mul(inv(emb[hl]), a))] = idx
            reps.append((x, a))
    act = [[classes[(x, group.mul(a, b))] for b in range(group.order)] for (x, a) in reps]
    Y = GSet(group, act, check=False, labels=reps)
    return Y, [classes[(x, 0)] for x in range(X.size)]


@dataclass
class ChangeOfGroup:
    big: QEllStructure
    small: QEllStructure
    component_map: Dict[int, Tuple[int, int]]
    basis_map: Dict[Tuple[int, int], Tuple[int, int]]
    bijective: bool

    def apply(self, x: QEllClass) -> QEllClass:
        """QEllR(X x_H G // G) -> QEllR(X // H)."""
        out: Dict[Term, int] = {}
        for (ci, bi, e), c in x.terms.items():
            tj, tb = self.basis_map[(ci, bi)]
            out[(tj, tb, e)] = out.get((tj, tb, e), 0) + c
        return QEllClass(self.small, out)

    def inverse(self, y: QEllClass) -> QEllClass:
        back = {v: k for k, v in self.basis_map.items()}
        out: Dict[Term, int] = {}
        for (ci, bi, e), c in y.terms.items():
            sj, sb = back[(ci, bi)]
            out[(sj, sb, e)] = out.get((sj, sb, e), 0) + c
        return QEllClass(self.big, out)


def change_of_group(group: GradedGroup, sub_elements: Iterable[int], X: Optional[GSet] = None,
                    alpha: Optional[Cochain] = None, real: bool = True) -> ChangeOfGroup:
    group = _as_graded(group)
    sub = group.subgroup(sorted(set(sub_elements)))
    if X is None:
        X = point_set(sub)
    Y, j = induced_set(group, sub, X)
    alpha_sub = restrict(alpha, sub) if alpha is not None else None
    big = QEllStructure(group, Y, alpha, real=real)
    small = QEllStructure(sub, X, alpha_sub, real=real)
    emb = inclusion_map(sub.group, group.group)
    comp_map, basis_map = {}, {}
    for si, sc in enumerate(small.components):
        bi_, k = big.locate(emb[sc.g], j[sc.point])
        comp_map[si] = (bi_, k)
        src = big.components[bi_]
        perm = transport_irreps(big, src, group.inv(k), sc, tgt_root=emb)
        for b_idx, b in enumerate(src.basis):
            mults = {perm[i]: c for i, c in b.underlying}
            image = sc.to_basis(mults)
            if len(image) != 1 or list(image.values()) != [1]:
                raise QEllError("change of group does not send basis to basis")
            tb = next(iter(image))
            if sc.basis[tb].slope != b.slope:
                raise QEllError("change of group moved a q-exponent")
            basis_map[(bi_, b_idx)] = (si, tb)
    hit_comps = {v[0] for v in comp_map.values()}
    bij = (len(hit_comps) == len(big.components) == len(small.components)
           and len(set(basis_map.values())) == len(basis_map) == small.rank == big.rank)
    return ChangeOfGroup(big, small, comp_map, basis_map, bij)


# ---------------------------------------------------------------- induction and transfer


def _induce_on_component(src: Component, tgt: Component, class_values: Sequence[Cyclotomic]) -> List[Cyclotomic]:
    """Induce a class function from src's extension kernel to tgt's (same object, src inside tgt)."""
    big = tgt.table.group
    src_ker = src.table.group
    src_class = src.table.classes.class_of
    src_emb = src_ker.embedding if src.ext.group.is_graded else list(range(src_ker.order))
    tgt_emb = big.embedding if tgt.ext.group.is_graded else list(range(big.order))
    tgt_pos = {e: i for i, e in enumerate(tgt_emb)}
    where: Dict[int, int] = {}
    for i, e in enumerate(src_emb):
        x, z = src.ext.split(e)
        where[tgt_pos[tgt.ext.element(tgt.local[src.to_base[x]], z)]] = src_class[i]
    out = []
    rows, inv = big.rows, big.inverse
    for r in tgt.table.classes.reps:
        total = Cyclotomic.zero(1)
        for t in range(big.order):
            y = rows[rows[t][r]][inv[t]]
            if y in where:
                total = total + class_values[where[y]]
        out.append(total / src_ker.order)
    return out


def _omega_twist(tgt: Component, class_values: Sequence[Cyclotomic]) -> List[Cyclotomic]:
    """conj(f(w^-1 y w)) for the smallest odd w of the stabilizer, as a class function."""
    ext = tgt.ext
    grp = ext.group.group
    w = ext.element(tgt.stabilizer.omega, 0)
    ker = tgt.table.group
    pos = {e: i for i, e in enumerate(ker.embedding)}
    cls = tgt.table.classes
    out = []
    for r in cls.reps:
        y = ker.embedding[r]
        y2 = grp.conj(grp.inverse[w], y)
        out.append(class_values[cls.class_of[pos[y2]]].conj())
    return out


def push_to_point(struct: QEllStructure, x: QEllClass, point_struct: QEllStructure) -> QEllClass:
    """f_! along X -> pt: Real induction from point stabilizers to the full Real centralizers."""
    out: Dict[Term, int] = {}
    for (ci, bi, e), c in x.terms.items():
        src = struct.components[ci]
        ti = point_struct.component_for(src.g, 0)
        tgt = point_struct.components[ti]
        f = _induce_on_component(src, tgt, _basis_class_values(src, bi))
        if struct.real and tgt.stabilizer.is_graded and not src.stabilizer.is_graded:
            f = [a + b for a, b in zip(f, _omega_twist(tgt, f))]
        for tb, k in tgt.to_basis(tgt.decompose(f)).items():
            key = (ti, tb, e)
            out[key] = out.get(key, 0) + c * k
    return QEllClass(point_struct, out)


class Induction:
    """Induction from a graded subgroup, at the level of a point: f_! after change of group."""

    def __init__(self, group: GradedGroup, sub_elements: Iterable[int], alpha: Optional[Cochain] = None,
                 real: bool = True, target: Optional[QEllStructure] = None):
        self.change = change_of_group(group, sub_elements, None, alpha, real)
        self.target = target if target is not None else QEllStructure(group, None, alpha, real)

    @property
    def source(self) -> QEllStructure:
        return self.change.small

    def __call__(self, a: QEllClass) -> QEllClass:
        return push_to_point(self.change.big, self.change.inverse(a), self.target)


def induction(group: GradedGroup, sub_elements: Iterable[int], a: QEllClass,
              alpha: Optional[Cochain] = None) -> QEllClass:
    return Induction(group, sub_elements, alpha, a.structure.real)(a)


@dataclass
class TransferIdeal:
    structure: QEllStructure
    subgroups: List[Tuple[int, ...]]
    generators: Dict[int, List[List[int]]]
    components: List[dict]

    def to_json(self) -> dict:
        return {"subgroups": [list(s) for s in self.subgroups], "components": self.components}


def transfer_ideal(group: GradedGroup, alpha: Optional[Cochain] = None) -> TransferIdeal:
    """Images of induction from graded subgroups with a proper kernel, and the quotient per component."""
    from sympy import Matrix
    from sympy.matrices.normalforms import invariant_factors

    group = _as_graded(group)
    target = QEllStructure(group, None, alpha, real=True)
    kernel_size = len(group.kernel_elements)
    subs = []
    for elems in subgroups_up_to_conjugacy(group.group):
        odd = any(group.pi[x] == -1 for x in elems)
        ker = sum(1 for x in elems if group.pi[x] == 1)
        if odd and ker < kernel_size:
            subs.append(tuple(elems))
    gens: Dict[int, List[List[int]]] = {ci: [] for ci in range(len(target.components))}
    for elems in subs:
        ind = Induction(group, elems, alpha, True, target)
        for b in ind.source.basis_elements():
            img = ind(b)
            rows: Dict[int, List[int]] = {}
            for (ci, bi, e), c in img.terms.items():
                if e != target.components[ci].basis[bi].slope:
                    raise QEllError("induction moved a q-exponent")
                rows.setdefault(ci, [0] * target.components[ci].rank)[bi] += c
            for ci, v in rows.items():
                gens[ci].append(v)
    comps = []
    for ci, comp in enumerate(target.components):
        vecs = gens[ci]
        if vecs:
            M = Matrix(vecs)
            rank = M.rank()
            inv = [abs(int(d)) for d in invariant_factors(M) if d != 0]
        else:
            rank, inv = 0, []
        comps.append({"class": comp.g, "rank": comp.rank, "image_rank": rank,
                      "quotient_free_rank": comp.rank - rank,
                      "quotient_torsion": [d for d in inv if d > 1]})
    return TransferIdeal(target, subs, gens, comps)


# ---------------------------------------------------------------- Kunneth


def kunneth(a: QEllClass, b: QEllClass) -> QEllClass:
    """External product of point classes, landing over the fibre product over Z_2."""
    s1, s2 = a.structure, b.structure
    if s1.X.size != 1 or s2.X.size != 1:
        raise QEllError("the external product is implemented for points")
    if s1.real != s2.real:
        raise QEllError("mixed theories")
    K = fiber_product(s1.base, s2.base)
    pairs = K.group.labels
    p1 = [x for (x, _) in pairs]
    p2 = [y for (_, y) in pairs]
    index = {lab: i for i, lab in enumerate(pairs)}
    alpha = None
    if s1.alpha is not None or s2.alpha is not None:
        m = math.lcm(s1.modulus, s2.modulus)
        parts = []
        for s, proj in ((s1, p1), (s2, p2)):
            if s.alpha is not None:
                parts.append(pullback(s.alpha.with_modulus(m), K, proj, twisted=False))
        alpha = parts[0] if len(parts) == 1 else parts[0] + parts[1]
    target = QEllStructure(K, None, alpha, real=s1.real)
    if s1.real and not K.is_graded:
        raise QEllError("fibre product lost the grading")
    out: Dict[Term, int] = {}
    M = target.modulus
    for (c1, b1, e1), k1 in a.terms.items():
        comp1 = s1.components[c1]
        for (c2, b2, e2), k2 in b.terms.items():
            comp2 = s2.components[c2]
            g = index[(comp1.g, comp2.g)]
            movers = target.movers
            stab = [s for s in movers if K.real_act(s, g) == g]
            local = Component(target, g, 0, stab, 1)
            vals = []
            for (x, z) in local.rep_coords:
                h1, h2 = pairs[local.to_base[x]]
                v1 = sum((comp1.character(i, h1) * k for i, k in comp1.basis[b1].underlying), Cyclotomic.zero(1))
                v2 = sum((comp2.character(i, h2) * k for i, k in comp2.basis[b2].underlying), Cyclotomic.zero(1))
                vals.append(v1 * v2 * (Cyclotomic.root(M, z) if M > 1 else 1))
            mults = local.decompose(vals)
            ti, k = target.locate(g, 0)
            moved = _transport_mults(target, local, mults, k, target.components[ti])
            for tb, c in target.components[ti].to_basis(moved).items():
                key = (ti, tb, e1 + e2)
                out[key] = out.get(key, 0) + k1 * k2 * c
    return QEllClass(target, out)


# ---------------------------------------------------------------- trivial double cover


@dataclass
class TrivialCoverReduction:
    real: QEllStructure
    complex: QEllStructure
    basis_map: Dict[Tuple[int, int], Tuple[int, int]]
    bijective: bool


def doubled_set(X: GSet, graded: GradedGroup) -> GSet:
    """X disjoint X over G x Z_2, the odd generator swapping the copies."""
    act = []
    n = X.size
    for copy in (0, 1):
        for x in range(n):
            row = []
            for idx, (g, y) in enumerate(graded.group.labels):
                img = X.act[x][g]
                row.append(img + n * ((copy + y) % 2))
            act.append(row)
    return GSet(graded, act, check=False, labels=[(c, x) for c in (0, 1) for x in range(n)])


def trivial_cover_reduction(group: FiniteGroup, X: Optional[GSet] = None,
                            alpha: Optional[Cochain] = None) -> TrivialCoverReduction:
    """QEllR(X u X // G x Z_2) against QEll(X // G): forget, keep the first copy, compare."""
    plain = trivially_graded(group)
    X = X if X is not None else point_set(plain)
    split = split_graded(group)
    Y = doubled_set(X, split)
    proj = [g for (g, _) in split.group.labels]
    ahat = pullback(alpha, split, proj, twisted=False) if alpha is not None else None
    real = QEllStructure(split, Y, ahat, real=True)
    direct = QEllStructure(plain, X, alpha, real=False)
    cplx = real.companion()
    embed = {g: split.group.labels.index((g, 0)) for g in range(group.order)}
    # direct component (g, x) <-> complex-over-split component (g, 0), x)
    match = {}
    for di, dc in enumerate(direct.components):
        ci = cplx.component_for(embed[dc.g], dc.point)
        if ci is None:
            raise QEllError("no matching component on the first copy")
        match[ci] = di
    basis_map = {}
    for x in real.basis_elements():
        (rc, rb, _), = x.terms
        image = forgetful(x)
        first = {(ci, bi): c for (ci, bi, e), c in image.terms.items() if ci in match}
        if len(first) != 1 or list(first.values()) != [1]:
            raise QEllError("forgetful image is not a single basis element on the first copy")
        (ci, bi), = first
        cc, dc = cplx.components[ci], direct.components[match[ci]]
        ir = cc.irreps[cc.basis[bi].irrep]
        vals = [ir.value(cc.local[embed[dc.to_base[h]]], z) for (h, z) in dc.rep_coords]
        row = dc.table.find_row(vals)
        basis_map[(rc, rb)] = (match[ci], dc.basis_of_irrep[dc.row_to_irrep[row]])
    bij = len(set(basis_map.values())) == len(basis_map) == direct.rank
    return TrivialCoverReduction(real, direct, basis_map, bij)


# ---------------------------------------------------------------- the involution on QEll of A


@dataclass
class RepRingInvolution:
    structure: QEllStructure
    omega: int
    perm: Dict[Tuple[int, int], Tuple[int, int]]

    @property
    def is_involution(self) -> bool:
        return all(self.perm[self.perm[k]] == k for k in self.perm)

    def orbits(self) -> List[Tuple[Tuple[int, int], ...]]:
        seen, out = set(), []
        for k in sorted(self.perm):
            if k in seen:
                continue
            orb = tuple(sorted({k, self.perm[k]}))
            seen.update(orb)
            out.append(orb)
        return out

    def apply(self, x: QEllClass) -> QEllClass:
        out: Dict[Term, int] = {}
        for (ci, bi, e), c in x.terms.items():
            cj, bj = self.perm[(ci, bi)]
            out[(cj, bj, e)] = out.get((cj, bj, e), 0) + c
        return QEllClass(self.structure, out)


def rep_ring_involution(group: GradedGroup, omega: Optional[int] = None) -> RepRingInvolution:
    """(g, U) -> (omega.g, conj(U o Ad_omega^-1)) on untwisted QEll of the kernel."""
    group = _as_graded(group)
    if not group.is_graded:
        raise QEllError("needs a non-trivial grading")
    w = group.omega if omega is None else omega
    if group.pi[w] != -1:
        raise QEllError("omega must be odd")
    struct = QEllStructure(group, None, None, real=False)
    perm = {}
    for ci, comp in enumerate(struct.components):
        tj, k = struct.locate(group.real_act(w, comp.g), 0)
        k = group.mul(k, w)
        tgt = struct.components[tj]
        moved = transport_irreps(struct, comp, k, tgt)
        for bi, b in enumerate(comp.basis):
            perm[(ci, bi)] = (tj, tgt.basis_of_irrep[moved[b.irrep]])
    return RepRingInvolution(struct, w, perm)


def fixed_subring_rank(inv: RepRingInvolution) -> int:
    return len(inv.orbits())
