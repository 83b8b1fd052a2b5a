"""
Mackey decomposition of twisted (Real) representations along a normal,
trivially graded subgroup H of a graded group.

The twisted irreducibles of H are permuted by the graded group; odd
elements act by conjugation followed by complex conjugation.  For each
orbit representative rho we record the stabilizer, its image Q(rho) in
the quotient, and (for linear rho) the central extension of Q(rho)
obtained by pushing the preimage of the stabilizer out along rho.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .characters import (CharacterError, character_table, real_irrep_count, real_type,
                         twisted_irreps)
from .cochains import (CentralExtensionGroup, Cochain, central_extension, cohomologous,
                       is_cocycle, pullback, random_cocycle, zero_cochain)
from .cyclotomic import Cyclotomic
from .enhanced import _stabilizer_data
from .groups import (GradedGroup, cyclic, dihedral, graded_cyclic,
                     graded_product, inclusion_map, quaternion, quotient, rotation_semidirect,
                     split_graded, symmetric, trivially_graded)


class MackeyError(ValueError):
    pass


@dataclass
class MackeyOrbit:
    representative: int                 # row of rho in the table of the preimage of H
    members: Tuple[int, ...]
    stabilizer: Tuple[int, ...]         # elements of the graded group fixing rho
    quotient: GradedGroup               # Q(rho) = stabilizer / H
    degree: int
    extension: Optional[CentralExtensionGroup] = None   # nu_rho, only for linear rho
    count: int = 0                      # Real-counted irreducibles lying over rho

    @property
    def real(self) -> bool:
        return self.quotient.is_graded


@dataclass
class MackeyData:
    group: GradedGroup
    normal: Tuple[int, ...]
    theta: Cochain
    extension: CentralExtensionGroup
    rho_values: List[Tuple[Cyclotomic, ...]]
    orbits: List[MackeyOrbit] = field(default_factory=list)

    @property
    def orbit_count_sum(self) -> int:
        return sum(o.count for o in self.orbits)

    def direct_count(self) -> int:
        return direct_real_count(self.extension)

    def counts_agree(self) -> bool:
        return self.orbit_count_sum == self.direct_count()

    def summary(self) -> dict:
        return {
            "group_order": self.group.order,
            "normal": list(self.normal),
            "irreps_of_normal": len(self.rho_values),
            "orbits": [{
                "representative": o.representative,
                "size": len(o.members),
                "degree": o.degree,
                "stabilizer_order": len(o.stabilizer),
                "quotient_order": o.quotient.order,
                "real": o.real,
                "extension_modulus": o.extension.m if o.extension is not None else None,
                "count": o.count,
            } for o in self.orbits],
            "orbit_sum": self.orbit_count_sum,
            "direct": self.direct_count(),
        }


def direct_real_count(ext: CentralExtensionGroup) -> int:
    """R + H + C/2 for a graded extension, the plain count otherwise."""
    irr = twisted_irreps(ext)
    if not ext.group.is_graded:
        return len(irr)
    tags = [ir.real_type for ir in irr]
    c = tags.count("C")
    if c % 2:
        raise CharacterError("unpaired complex type")
    return tags.count("R") + tags.count("H") + c // 2


def _count(grp: GradedGroup, table, rows: Sequence[int]) -> int:
    if not grp.is_graded:
        return len(rows)
    return real_irrep_count([real_type(grp, table, r) for r in rows])


def mackey_decompose(grp: GradedGroup, normal: Sequence[int], theta: Optional[Cochain] = None) -> MackeyData:
    normal = tuple(sorted(set(normal)))
    if any(grp.pi[h] != 1 for h in normal):
        raise MackeyError("the normal subgroup must be trivially graded")
    if not grp.group.is_subgroup(normal):
        raise MackeyError("not a subgroup")
    nset = set(normal)
    if any(grp.conj(s, h) not in nset for s in range(grp.order) for h in normal):
        raise MackeyError("subgroup is not normal")
    if theta is None:
        theta = zero_cochain(grp, 2, 1, twisted=grp.is_graded)
    ext = central_extension(theta)
    m = ext.m
    full = ext.group.group
    tH = full.subgroup([h * m + z for h in normal for z in range(m)])
    inc = inclusion_map(tH, full)
    local = {x: i for i, x in enumerate(inc)}
    table = character_table(tH)
    cls = table.classes
    zeta = Cyclotomic.root(m, 1)
    central = local[ext.element(0, 1)]
    irr = [i for i, row in enumerate(table.rows) if table.value(i, central) == zeta * row[0].to_rational()]
    irr_set = set(irr)

    def act(s: int, row: int) -> int:
        st = ext.element(s, 0)
        sinv = full.inverse[st]
        vals = []
        for r in cls.reps:
            y = local[full.prod(sinv, inc[r], st)]
            v = table.value(row, y)
            vals.append(v.conj() if grp.pi[s] == -1 else v)
        return table.find_row(vals)

    perm = {s: {r: act(s, r) for r in irr} for s in range(grp.order)}
    if any(set(p.values()) != irr_set for p in perm.values()):
        raise MackeyError("action does not preserve the twisted irreducibles")
    data = MackeyData(grp, normal, theta, ext, [table.rows[i] for i in irr])
    seen = set()
    for r in irr:
        if r in seen:
            continue
        members = tuple(sorted({perm[s][r] for s in range(grp.order)}))
        seen |= set(members)
        stab = tuple(s for s in range(grp.order) if perm[s][r] == r)
        data.orbits.append(_orbit_data(grp, normal, ext, tH, table, r, members, stab))
    return data


def _orbit_data(grp, normal, ext, tH, table, r, members, stab) -> MackeyOrbit:
    m = ext.m
    stab_grp = grp.subgroup(stab)
    sub_local = {x: i for i, x in enumerate(stab_grp.group.embedding)}
    qgrp, proj = quotient(stab_grp.group, [sub_local[h] for h in normal])
    qpi = [0] * qgrp.order
    for i, x in enumerate(stab_grp.group.embedding):
        qpi[proj[i]] = grp.pi[x]
    quo = GradedGroup(qgrp, qpi, check=False)
    degree = int(table.rows[r][0].to_rational())
    orbit = MackeyOrbit(r, members, stab, quo, degree)

    # Clifford side: irreducibles of the preimage of the stabilizer lying over rho
    pre = ext.group.subgroup([x * m + z for x in stab for z in range(m)])
    pre_ker = pre.kernel() if pre.is_graded else pre.group
    ptab = character_table(pre_ker)
    to_full = inclusion_map(pre_ker, ext.group.group)
    ploc = {x: i for i, x in enumerate(to_full)}
    th_inc = inclusion_map(tH, ext.group.group)
    zeta = Cyclotomic.root(m, 1)
    cen = ploc[ext.element(0, 1)]
    over = []
    for i, row in enumerate(ptab.rows):
        if ptab.value(i, cen) != zeta * row[0].to_rational():
            continue
        inner = Cyclotomic.zero(1)
        for y in range(tH.order):
            inner = inner + ptab.value(i, ploc[th_inc[y]]) * table.value(r, y).conj()
        if not (inner / tH.order).is_zero():
            over.append(i)
    orbit.count = _count(pre, ptab, over)

    if degree == 1:
        orbit.extension = _pushout_extension(grp, ext, tH, table, r, stab, stab_grp, proj, quo)
    return orbit


def _pushout_extension(grp, ext, tH, table, r, stab, stab_grp, proj, quo) -> CentralExtensionGroup:
    """Extension of Q(rho) by the image of rho: nu[q2|q1] = rho(s(q2) s(q1) s(q2 q1)^-1)."""
    m = ext.m
    full = ext.group.group
    M = math.lcm(m, tH.exponent)
    loc = {x: i for i, x in enumerate(inclusion_map(tH, full))}
    section = [None] * quo.order
    for i, x in enumerate(stab_grp.group.embedding):
        if section[proj[i]] is None:
            section[proj[i]] = ext.element(x, 0)

    def rho_add(x: int) -> int:
        v = table.value(r, loc[x]).lift(M)
        k = v.root_exponent()
        if k is None:
            raise MackeyError("rho is not linear")
        return k

    n = quo.order
    vals = [[0] * n for _ in range(n)]
    for q2 in range(n):
        for q1 in range(n):
            c = full.prod(section[q2], section[q1], full.inverse[section[quo.group.rows[q2][q1]]])
            vals[q2][q1] = rho_add(c)
    nu = Cochain(quo, 2, M, twisted=quo.is_graded, values=vals)
    if not is_cocycle(nu):
        raise MackeyError("pushout cochain is not a cocycle")
    return central_extension(nu, check_cocycle=False)


def nu_count(orbit: MackeyOrbit) -> Optional[int]:
    """Real-counted nu-twisted irreducibles of Q(rho); None for non-linear rho."""
    if orbit.extension is None:
        return None
    return direct_real_count(orbit.extension)


# ---------------------------------------------------------------- configurations


@dataclass
class MackeyConfiguration:
    name: str
    group: GradedGroup
    normal: Tuple[int, ...]
    theta: Cochain
    expected_twist: Optional[Cochain] = None   # for the rotation configuration


def _sub_elements(grp: GradedGroup, pred) -> Tuple[int, ...]:
    return tuple(x for x in range(grp.order) if pred(x))


def rotation_configuration(n: int = 3, m_power: int = 1, level: Optional[int] = None,
                           ahat: Optional[Cochain] = None, seed: int = 0,
                           base: Optional[GradedGroup] = None, g: Optional[int] = None) -> MackeyConfiguration:
    """Z_L x| C^R(g) with H = Z_L and the twist pulled back from theta_g on C^R(g).

    Every rho is fixed and the pushout extension recovers theta_g.
    """
    if base is None:
        base = dihedral(n)
        g = base.power(1, m_power) if g is None else g
    if ahat is None:
        ahat = random_cocycle(base, 3, 2 * n, seed=seed)
    stab, theta_g = _stabilizer_data(base, g, ahat, True)
    L = level or base.group.element_order(g)
    K = rotation_semidirect(stab, L)
    to_stab = [x % stab.order for x in range(K.order)]
    theta = pullback(theta_g, K, to_stab, twisted=K.is_graded)
    normal = tuple(j * stab.order for j in range(L))
    return MackeyConfiguration(f"rotation Z_{L} x| C^R(g)", K, normal, theta, theta_g)


def standard_configurations(seed: int = 0) -> List[MackeyConfiguration]:
    out = []
    d6 = dihedral(3)
    out.append(MackeyConfiguration("Real central Z_3 in D_6", d6, tuple(d6.kernel_elements),
                                   zero_cochain(d6, 2, 1, twisted=True)))
    zm2 = graded_product(trivially_graded(cyclic(3)), graded_cyclic(2))
    out.append(MackeyConfiguration("central Z_3 in Z_3 x Z_2", zm2,
                                   _sub_elements(zm2, lambda x: zm2.pi[x] == 1),
                                   zero_cochain(zm2, 2, 1, twisted=True)))
    d8 = trivially_graded(dihedral(4).group)
    rot = tuple(dihedral(4).kernel_elements)
    out.append(MackeyConfiguration("D8 ungraded, H = Z_4", d8, rot,
                                   random_cocycle(d8, 2, 2, seed=seed)))
    out.append(rotation_configuration(2, 1, seed=seed))
    out.append(rotation_configuration(4, 1, seed=seed + 1))
    s3z2 = split_graded(symmetric(3))
    a3 = tuple(x for x in range(s3z2.order) if s3z2.pi[x] == 1 and s3z2.group.element_order(x) in (1, 3))
    out.append(MackeyConfiguration("S3 x Z2, H = Z_3", s3z2, a3,
                                   random_cocycle(s3z2, 2, 2, seed=seed + 1, twisted=True)))
    d8g = dihedral(4)
    center = tuple(x for x in range(d8g.order) if all(d8g.mul(x, y) == d8g.mul(y, x) for y in range(d8g.order)))
    out.append(MackeyConfiguration("graded D8, H = center", d8g, center,
                                   random_cocycle(d8g, 2, 2, seed=seed + 2, twisted=True)))
    q8z2 = split_graded(quaternion(8))
    qc = tuple(x for x in range(q8z2.order) if q8z2.pi[x] == 1
               and all(q8z2.mul(x, y) == q8z2.mul(y, x) for y in range(q8z2.order)))
    out.append(MackeyConfiguration("Q8 x Z2, H = center", q8z2, qc,
                                   random_cocycle(q8z2, 2, 2, seed=seed + 3, twisted=True)))
    z4z2 = split_graded(cyclic(4))
    out.append(MackeyConfiguration("Z4 x Z2, H = Z_4", z4z2, tuple(z4z2.kernel_elements),
                                   random_cocycle(z4z2, 2, 4, seed=seed + 4, twisted=True)))
    out.append(MackeyConfiguration("S3 x Z2, H = S_3", s3z2, tuple(s3z2.kernel_elements),
                                   random_cocycle(s3z2, 2, 2, seed=seed + 5, twisted=True)))
    return out


def check_configuration(cfg: MackeyConfiguration) -> Dict[str, object]:
    data = mackey_decompose(cfg.group, cfg.normal, cfg.theta)
    nu_ok = all(nu_count(o) in (None, o.count) for o in data.orbits)
    twist_ok = None
    if cfg.expected_twist is not None:
        twist_ok = True
        for o in data.orbits:
            if o.extension is None or o.quotient.order != cfg.expected_twist.base.order:
                twist_ok = False
                break
            nu = o.extension.theta
            M = math.lcm(nu.modulus, cfg.expected_twist.modulus)
            # Q(rho) is indexed like C^R(g) since H = Z_L x {e} and the section picks j = 0
            expected = Cochain(nu.base, 2, cfg.expected_twist.modulus, nu.twisted,
                               values=cfg.expected_twist.array())
            if cohomologous(nu.with_modulus(M), expected.with_modulus(M)) is None:
                twist_ok = False
                break
    return {
        "name": cfg.name,
        "orbit_sum": data.orbit_count_sum,
        "direct": data.direct_count(),
        "orbits": len(data.orbits),
        "nu_counts_match": nu_ok,
        "twist_recovered": twist_ok,
        "pass": data.counts_agree() and nu_ok and twist_ok is not False,
    }
