"""
Finite models of enhanced (Real, twisted) centralizers.

The rotation line R is replaced by the cyclic group of residues j/a mod o,
where o is the order of the lifted element (g, 0) in the stabilizer core E
and a = L/o.  The model is (Z_L x|_pi E) / <(-a, (g,0))>, kept in the normal
form (j, x) with 0 <= j < a.  Every irreducible has the shape V_lam (x) U with
U an irreducible of E and U(g) = exp(2 pi i lam); lam is stored as a rational
slope and is only determined modulo a at level L.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from .characters import character_table, real_type, twisted_irreps
from .cochains import CentralExtensionGroup, Cochain, central_extension, is_cocycle
from .cyclotomic import Cyclotomic
from .groups import (FiniteGroup, GradedGroup, inclusion_map, real_centralizer,
                     trivially_graded)
from .transgression import real_transgression_cochain3, transgress


class EnhancedModelError(ValueError):
    pass


def _stabilizer_data(grp: GradedGroup, g: int, ahat: Optional[Cochain], real: bool):
    """Stabilizer (as graded group), its transgressed twist, and the core group E."""
    if grp.pi[g] != 1:
        raise EnhancedModelError("g must lie in the ungraded part")
    if ahat is not None:
        if ahat.degree != 3:
            raise EnhancedModelError("twist must be a 3-cocycle")
        if not is_cocycle(ahat):
            raise EnhancedModelError("twist is not a cocycle")
    if real and grp.is_graded:
        stab = real_centralizer(grp, g)
        theta = None
        if ahat is not None:
            theta = real_transgression_cochain3(ahat).restrict_to(g, stab)
    else:
        ker = grp.kernel() if grp.is_graded else grp.group
        local = inclusion_map(ker, grp.group).index(g)
        stab = trivially_graded(ker.centralizer(local))
        theta = None
        if ahat is not None:
            theta = transgress(ahat, g)
            stab = theta.base
    return stab, theta


@dataclass
class EnhancedGroupModel:
    base: GradedGroup
    g: int
    level: int
    stabilizer: GradedGroup
    twist: Optional[Cochain]
    extension: Optional[CentralExtensionGroup]
    core: GradedGroup
    g_core: int
    lift_order: int
    carrier: GradedGroup

    @property
    def a(self) -> int:
        return self.level // self.lift_order

    @property
    def order(self) -> int:
        return self.carrier.order

    def element(self, j: int, x: int) -> int:
        """Index of the class of (j, x), j any integer (mod L), x in the core."""
        a, core = self.a, self.core
        j %= self.level
        k = core.pi[x] * (j // a)
        y = core.mul(x, core.power(self.g_core, k % self.lift_order))
        return (j % a) * core.order + y

    def split(self, idx: int) -> Tuple[int, int]:
        return divmod(idx, self.core.order)

    def rotation(self, idx: int) -> Fraction:
        """Loop rotation of an element, as a residue in [0, 1)."""
        j, _ = self.split(idx)
        return Fraction(j, self.a) % 1

    def o2_image(self, idx: int) -> Tuple[Fraction, int]:
        j, x = self.split(idx)
        return Fraction(j, self.a) % 1, self.core.pi[x]

    def core_element(self, x: int) -> int:
        return self.element(0, x)

    def central(self, z: int) -> int:
        if self.extension is None:
            raise EnhancedModelError("untwisted model has no central Z_m")
        return self.element(0, self.extension.element(0, z))

    def stabilizer_image(self, x: int) -> int:
        """Index in the base group of the image of a core element."""
        y = self.extension.split(x)[0] if self.extension is not None else x
        return inclusion_map(self.stabilizer.group, self.base.group)[y]


def lifted_order(core: GradedGroup, g_core: int) -> int:
    return core.group.element_order(g_core)


def enhanced_model(grp: GradedGroup, g: int, level: Optional[int] = None,
                   ahat: Optional[Cochain] = None, real: bool = True) -> EnhancedGroupModel:
    """Finite model of the (twisted) enhanced Real centralizer of g at a level.

    real=False (or an ungraded base) gives the ordinary enhanced centralizer of
    g in the ungraded part.  The level must be a multiple of the order of the
    lift (g, 0); that order equals |g| in the untwisted case.
    """
    stab, theta = _stabilizer_data(grp, g, ahat, real)
    g_local = inclusion_map(stab.group, grp.group).index(g)
    ext = None
    core = stab
    g_core = g_local
    if theta is not None:
        ext = central_extension(theta)
        core = ext.group
        g_core = ext.element(g_local, 0)
    o = lifted_order(core, g_core)
    if level is None:
        level = o
    if level <= 0 or level % grp.group.element_order(g):
        raise EnhancedModelError(f"level {level} is not a multiple of |g| = {grp.group.element_order(g)}")
    if level % o:
        raise EnhancedModelError(f"level {level} is not a multiple of the lifted order {o}")
    a = level // o
    n = core.order
    T = core.group.table
    pi = np.array(core.pi, dtype=np.int64)
    gpow = np.array([core.power(g_core, k) for k in range(o)], dtype=np.int64)
    idx = np.arange(a * n)
    J, X = idx // n, idx % n
    J2, X2 = J.reshape(-1, 1), X.reshape(-1, 1)
    J1, X1 = J.reshape(1, -1), X.reshape(1, -1)
    raw = (J2 + pi[X2] * J1) % level
    y = T[X2, X1]
    k = (pi[y] * (raw // a)) % o
    newx = T[y, gpow[k]]
    table = (raw % a) * n + newx
    labels = [(Fraction(j, a), core.group.labels[x] if core.group.labels else x) for j in range(a) for x in range(n)]
    carrier = GradedGroup(FiniteGroup(table, labels=labels, check=(a * n <= 64)),
                          [core.pi[x] for j in range(a) for x in range(n)], check=False)
    return EnhancedGroupModel(grp, g, level, stab, theta, ext, core, g_core, o, carrier)


def check_real_central(model: EnhancedGroupModel) -> bool:
    """(s)(g,0)(s)^-1 == (g,0)^pi(s) for every s in the core."""
    core, gc = model.core, model.g_core
    ginv = core.inv(gc)
    for s in range(core.order):
        lhs = core.prod(s, gc, core.inv(s))
        if lhs != (gc if core.pi[s] == 1 else ginv):
            return False
    return True


def embed_level(model: EnhancedGroupModel, finer: EnhancedGroupModel) -> List[int]:
    """Images of the level-L model inside the level-L' model (L | L')."""
    if finer.level % model.level or finer.core.order != model.core.order:
        raise EnhancedModelError("finer model must share the core and refine the level")
    scale = finer.a // model.a
    out = []
    for idx in range(model.order):
        j, x = model.split(idx)
        out.append(finer.element(j * scale, x))
    return out


# ---------------------------------------------------------------- irreducibles


@dataclass(frozen=True)
class ModelIrrep:
    """V_slope (x) U for a twisted irreducible U of the core's ungraded part."""
    core_irrep: int       # index into twisted_irreps / kernel table rows
    slope: Fraction       # determined modulo the model's a
    degree: int
    real_type: str


def core_irreps(model: EnhancedGroupModel) -> List[Tuple[List[Cyclotomic], int, str, Optional[int]]]:
    """Characters of the core's ungraded part with the standard central action.

    Each entry is (values per kernel element index, degree, real type, partner).
    """
    core = model.core
    if model.extension is not None:
        out = []
        irr = twisted_irreps(model.extension, with_real_types=core.is_graded)
        ker = core.kernel() if core.is_graded else core.group
        for ir in irr:
            vals = [ir.table.value(ir.row, i) for i in range(ker.order)]
            out.append((vals, ir.degree, ir.real_type, ir.partner))
        return out
    ker = core.kernel() if core.is_graded else core.group
    table = character_table(ker)
    out = []
    for i in range(len(table.rows)):
        vals = [table.value(i, x) for x in range(ker.order)]
        if core.is_graded:
            tag = real_type(core, table, i)
            out.append((vals, table.degrees[i], tag.kind, tag.partner))
        else:
            out.append((vals, table.degrees[i], "complex", None))
    return out


def _kernel_index(core: GradedGroup, x: int) -> int:
    if not core.is_graded:
        return x
    return core.kernel().embedding.index(x)


def irrep_slope(model: EnhancedGroupModel, values: List[Cyclotomic], degree: int) -> Fraction:
    """The slope lam in [0, 1) with U(g, 0) = exp(2 pi i lam) U(e)."""
    val = values[_kernel_index(model.core, model.g_core)]
    scalar = val / degree
    o = model.lift_order
    for k in range(o):
        if scalar == Cyclotomic.root(o, k):
            return Fraction(k, o)
    raise EnhancedModelError("lifted g does not act by a root of unity of its order")


def model_irreps(model: EnhancedGroupModel) -> List[ModelIrrep]:
    """All irreducibles of the model's ungraded part, slopes in [0, a)."""
    out = []
    for i, (vals, deg, rt, _) in enumerate(core_irreps(model)):
        lam = irrep_slope(model, vals, deg)
        for shift in range(model.a):
            out.append(ModelIrrep(i, lam + shift, deg, rt))
    return out


def model_character(model: EnhancedGroupModel, irrep: ModelIrrep) -> List[Cyclotomic]:
    """Values of V_slope (x) U on the model's ungraded elements (by carrier index)."""
    vals = core_irreps(model)[irrep.core_irrep][0]
    core = model.core
    out = []
    L = model.level
    for idx in model.carrier.kernel_elements if model.carrier.is_graded else range(model.order):
        j, x = model.split(idx)
        # t = j / a contributes exp(2 pi i slope j / a) = zeta_L^(slope * o * j)
        e = irrep.slope * model.lift_order * j
        assert e.denominator == 1
        rot = Cyclotomic.root(L, int(e) % L)
        out.append(rot * vals[_kernel_index(core, x)])
    return out


# ---------------------------------------------------------------- i_g


@dataclass
class IgIsomorphism:
    """(t, (h, z)) -> (-t, (w h w^-1, f(h) - z)) between twisted enhanced centralizers."""
    source: EnhancedGroupModel
    target: EnhancedGroupModel
    omega: int
    f: Dict[int, int]
    images: List[int] = field(default_factory=list)

    def is_homomorphism(self) -> bool:
        S, T = self.source.carrier.group, self.target.carrier.group
        im = self.images
        rows_s, rows_t = S.rows, T.rows
        for a in range(S.order):
            ia = im[a]
            for b in range(S.order):
                if im[rows_s[a][b]] != rows_t[ia][im[b]]:
                    return False
        return True

    def is_bijective(self) -> bool:
        return sorted(self.images) == list(range(self.target.order))

    def negates_center(self) -> bool:
        m = self.source.extension.m
        return all(self.images[self.source.central(z)] == self.target.central(-z) for z in range(m))

    def negates_rotation(self) -> bool:
        return all(self.target.rotation(self.images[i]) == (-self.source.rotation(i)) % 1
                   for i in range(self.source.order))


def i_g_isomorphism(ahat: Cochain, g: int, omega: Optional[int] = None,
                    level: Optional[int] = None) -> IgIsomorphism:
    """The isomorphism of twisted enhanced centralizers from g to w g^-1 w^-1.

    g must have sign +1 (no odd element fixes it under Real conjugation).
    """
    grp = ahat.base
    if not grp.is_graded:
        raise EnhancedModelError("needs a graded base")
    w = grp.omega if omega is None else omega
    if grp.pi[w] != -1:
        raise EnhancedModelError("omega must be odd")
    if any(grp.pi[s] == -1 for s in real_centralizer(grp, g).group.embedding):
        raise EnhancedModelError("g has sign -1; the map would target its own class")
    gt = grp.conj(w, grp.inv(g))
    src = enhanced_model(grp, g, level, ahat, real=False)
    lvl = math.lcm(src.level, enhanced_model(grp, gt, None, ahat, real=False).level)
    src = enhanced_model(grp, g, lvl, ahat, real=False) if lvl != src.level else src
    tgt = enhanced_model(grp, gt, lvl, ahat, real=False)
    tau = real_transgression_cochain3(ahat)
    m = ahat.modulus
    emb_s = inclusion_map(src.stabilizer.group, grp.group)
    emb_t = inclusion_map(tgt.stabilizer.group, grp.group)
    tpos = {x: i for i, x in enumerate(emb_t)}
    f = {}
    for h in emb_s:
        f[h] = (tau((w, h), g) - tau((grp.conj(w, h), w), g)) % m
    ext_s, ext_t = src.extension, tgt.extension
    images = []
    for idx in range(src.order):
        j, x = src.split(idx)
        hl, z = ext_s.split(x)
        h = emb_s[hl]
        y = ext_t.element(tpos[grp.conj(w, h)], f[h] - z)
        images.append(tgt.element(-j, y))
    return IgIsomorphism(src, tgt, w, f, images)
