"""
Character tables of finite groups by the Burnside-Dixon method, Real type
classification of irreducibles of a graded group's kernel, and twisted
(projective) irreducibles read off from central extensions.

Eigenvectors of the class multiplication matrices are computed over a prime
field F_p with p = 1 mod exponent and then lifted to exact cyclotomic values
through the eigenvalue multiplicities of each element.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .cochains import CentralExtensionGroup
from .cyclotomic import Cyclotomic
from .groups import ConjugacyClasses, FiniteGroup, GradedGroup, GroupError, inclusion_map

_TABLE_CACHE: Dict[str, "CharacterTable"] = {}


class CharacterError(ValueError):
    pass


# ---------------------------------------------------------------- linear algebra mod p


def _rref_mod(rows: List[List[int]], p: int) -> Tuple[List[List[int]], List[int]]:
    A = [[x % p for x in r] for r in rows]
    pivots: List[int] = []
    r = 0
    ncols = len(A[0]) if A else 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(A)) if A[i][c]), None)
        if pr is None:
            continue
        A[r], A[pr] = A[pr], A[r]
        inv = pow(A[r][c], -1, p)
        A[r] = [x * inv % p for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [(a - f * b) % p for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def _nullspace_mod(rows: List[List[int]], p: int, ncols: int) -> List[List[int]]:
    if not rows:
        return [[int(i == j) for i in range(ncols)] for j in range(ncols)]
    R, pivots = _rref_mod(rows, p)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-R[i][f]) % p
        basis.append(v)
    return basis


def _charpoly_mod(M: List[List[int]], p: int) -> List[int]:
    """Characteristic polynomial (low to high) via Hessenberg reduction."""
    n = len(M)
    H = [[x % p for x in row] for row in M]
    for m in range(1, n - 1):
        i = next((i for i in range(m, n) if H[i][m - 1]), None)
        if i is None:
            continue
        if i != m:
            H[i], H[m] = H[m], H[i]
            for row in H:
                row[i], row[m] = row[m], row[i]
        inv = pow(H[m][m - 1], -1, p)
        for i in range(m + 1, n):
            u = H[i][m - 1] * inv % p
            if u:
                H[i] = [(a - u * b) % p for a, b in zip(H[i], H[m])]
                for row in H:
                    row[m] = (row[m] + u * row[i]) % p
    polys = [[1]]
    for k in range(1, n + 1):
        prev = polys[k - 1]
        pk = [0] + prev
        hkk = H[k - 1][k - 1]
        for d, c in enumerate(prev):
            pk[d] -= hkk * c
        t = 1
        for i in range(1, k):
            t = t * H[k - i][k - i - 1] % p
            coef = H[k - i - 1][k - 1] * t % p
            if coef:
                for d, c in enumerate(polys[k - i - 1]):
                    pk[d] -= coef * c
        polys.append([c % p for c in pk])
    return polys[n]


def _roots_mod(poly: List[int], p: int) -> List[int]:
    roots = []
    for x in range(p):
        acc = 0
        for c in reversed(poly):
            acc = (acc * x + c) % p
        if acc == 0:
            roots.append(x)
    return roots


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _dixon_prime(exponent: int, order: int) -> int:
    p = exponent + 1
    while not (_is_prime(p) and p > 2 * math.isqrt(order) + 2):
        p += exponent
    return p


def _root_of_unity_mod(e: int, p: int) -> int:
    factors = [q for q in range(2, p) if (p - 1) % q == 0 and _is_prime(q)]
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return pow(g, (p - 1) // e, p)
    return 1


# ---------------------------------------------------------------- tables


@dataclass
class CharacterTable:
    """Irreducible characters as exact cyclotomic values per conjugacy class."""
    group: FiniteGroup
    classes: ConjugacyClasses
    order: int
    rows: List[Tuple[Cyclotomic, ...]]

    @property
    def degrees(self) -> List[int]:
        return [int(r[0].to_rational()) for r in self.rows]

    def __len__(self):
        return len(self.rows)

    def value(self, i: int, g: int) -> Cyclotomic:
        return self.rows[i][self.classes.class_of[g]]

    def class_function(self, values_by_element: Sequence[Cyclotomic]) -> List[Cyclotomic]:
        return [values_by_element[r] for r in self.classes.reps]

    def inner(self, f1: Sequence[Cyclotomic], f2: Sequence[Cyclotomic]) -> Cyclotomic:
        total = Cyclotomic.zero(self.order)
        for size, a, b in zip(self.classes.sizes, f1, f2):
            total = total + a * b.conj() * size
        return total / self.group.order

    def decompose(self, f: Sequence[Cyclotomic]) -> List[int]:
        """Multiplicities of the irreducibles in a class function (must be a character combination)."""
        out = []
        for row in self.rows:
            c = self.inner(f, row)
            if not c.is_rational() or c.to_rational().denominator != 1:
                raise CharacterError("class function is not a virtual character")
            out.append(int(c.to_rational()))
        return out

    def find_row(self, values: Sequence[Cyclotomic]) -> int:
        for i, row in enumerate(self.rows):
            if all(a == b for a, b in zip(row, values)):
                return i
        raise CharacterError("no irreducible with these values")

    def to_json(self) -> dict:
        return {
            "order": self.group.order,
            "cyclotomic_order": self.order,
            "class_representatives": list(self.classes.reps),
            "class_sizes": list(self.classes.sizes),
            "rows": [[v.to_json() for v in row] for row in self.rows],
        }


def _class_matrices(group: FiniteGroup, cls: ConjugacyClasses) -> List[List[List[int]]]:
    k = len(cls)
    rows, inv = group.rows, group.inverse
    mats = []
    for r in range(k):
        M = [[0] * k for _ in range(k)]
        for t in range(k):
            gt = cls.reps[t]
            for x in cls.members[r]:
                s = cls.class_of[rows[inv[x]][gt]]
                M[s][t] += 1
        mats.append(M)
    return mats


def _split_spaces(mats: List[List[List[int]]], p: int, k: int, seed: int) -> List[List[int]]:
    spaces = [[[int(i == j) for i in range(k)] for j in range(k)]]
    rng = random.Random(seed)
    order = list(range(1, k))
    rounds = 0
    while any(len(B) > 1 for B in spaces):
        rounds += 1
        if rounds > 4 * k + 20:
            raise CharacterError("failed to split class algebra")
        if rounds <= len(order):
            coeffs = {order[rounds - 1]: 1}
        else:
            coeffs = {r: rng.randrange(p) for r in range(1, k)}
        M = np.zeros((k, k), dtype=np.int64)
        for r, c in coeffs.items():
            if c:
                M = (M + c * np.array(mats[r], dtype=np.int64)) % p
        new = []
        for B in spaces:
            d = len(B)
            if d == 1:
                new.append(B)
                continue
            R, pivots = _rref_mod(B, p)
            # coordinates of M b_j in the basis B: solve via the pivot columns
            BP = [[b[c] for c in pivots] for b in B]
            BP_inv = _inverse_mod(BP, p)
            coords = []
            for b in B:
                v = (M @ np.array(b, dtype=np.int64)) % p
                vp = [int(v[c]) for c in pivots]
                coords.append([sum(vp[a] * BP_inv[a][i] for a in range(d)) % p for i in range(d)])
            Rm = [[coords[j][i] for j in range(d)] for i in range(d)]
            poly = _charpoly_mod(Rm, p)
            for lam in _roots_mod(poly, p):
                shifted = [[(Rm[i][j] - (lam if i == j else 0)) % p for j in range(d)] for i in range(d)]
                for u in [_nullspace_mod(shifted, p, d)]:
                    if not u:
                        continue
                    vecs = [[sum(u_vec[i] * B[i][t] for i in range(d)) % p for t in range(k)] for u_vec in u]
                    new.append(vecs)
        if sum(len(B) for B in new) != k:
            raise CharacterError("class algebra eigenspaces do not span")
        spaces = new
    return [B[0] for B in spaces]


def _inverse_mod(A: List[List[int]], p: int) -> List[List[int]]:
    n = len(A)
    aug = [list(A[i]) + [int(i == j) for j in range(n)] for i in range(n)]
    R, pivots = _rref_mod(aug, p)
    if pivots[:n] != list(range(n)):
        raise CharacterError("singular matrix mod p")
    return [row[n:] for row in R]


def character_table(group: FiniteGroup) -> CharacterTable:
    """Exact irreducible character table (cached by table hash)."""
    key = group.key
    if key in _TABLE_CACHE:
        cached = _TABLE_CACHE[key]
        if cached.group is group:
            return cached
        return CharacterTable(group, group.conjugacy_classes(), cached.order, cached.rows)
    cls = group.conjugacy_classes()
    k = len(cls)
    n = group.order
    e = group.exponent
    p = _dixon_prime(e, n)
    mats = _class_matrices(group, cls)
    vecs = _split_spaces(mats, p, k, seed=0)
    z = _root_of_unity_mod(e, p)
    sizes = cls.sizes
    inv_class = [cls.class_of[group.inverse[r]] for r in cls.reps]
    powers = {}
    rows = []
    for w in vecs:
        w0inv = pow(w[0], -1, p)
        omega = [x * w0inv % p for x in w]
        s = sum(omega[t] * omega[inv_class[t]] * pow(sizes[t], -1, p) for t in range(k)) % p
        d2 = n * pow(s, -1, p) % p
        deg = next((d for d in range(1, math.isqrt(n) + 1) if d * d % p == d2), None)
        if deg is None:
            raise CharacterError("degree recovery failed")
        chi_mod = [deg * omega[t] * pow(sizes[t], -1, p) % p for t in range(k)]
        row = []
        for t in range(k):
            g = cls.reps[t]
            o = group.element_order(g)
            if (g, o) not in powers:
                powers[(g, o)] = [cls.class_of[group.power(g, l)] for l in range(o)]
            pw = powers[(g, o)]
            zo = pow(z, e // o, p)
            o_inv = pow(o, -1, p)
            counts = {}
            for kk in range(o):
                m = sum(chi_mod[pw[l]] * pow(zo, (-kk * l) % o, p) for l in range(o)) * o_inv % p
                if m > deg:
                    raise CharacterError("multiplicity lift failed")
                if m:
                    counts[kk * (e // o)] = m
            row.append(Cyclotomic.from_exponents(e, counts))
        rows.append(tuple(row))
    trivial = tuple(Cyclotomic.rational(1, e) for _ in range(k))

    def sort_key(row):
        return (int(row[0].to_rational()), row != trivial, tuple(v.sort_key() for v in row))

    rows.sort(key=sort_key)
    table = CharacterTable(group, cls, e, rows)
    _TABLE_CACHE[key] = table
    return table


def check_orthogonality(table: CharacterTable) -> bool:
    k = len(table.rows)
    for i in range(k):
        for j in range(k):
            c = table.inner(table.rows[i], table.rows[j])
            if c != (1 if i == j else 0):
                return False
    cls = table.classes
    for s in range(k):
        for t in range(k):
            total = Cyclotomic.zero(table.order)
            for row in table.rows:
                total = total + row[s] * row[t].conj()
            expect = Fraction(table.group.order, cls.sizes[s]) if s == t else 0
            if total != expect:
                return False
    return True


# ---------------------------------------------------------------- Real types


def _kernel_position(grp: GradedGroup) -> Dict[int, int]:
    ker = grp.kernel()
    return {ker.embedding[i]: i for i in range(ker.order)}


def graded_indicator(grp: GradedGroup, table: CharacterTable, row: int) -> int:
    """(1/|G|) sum over odd s of chi(s^2); lies in {1, 0, -1} for irreducibles."""
    if not grp.is_graded:
        raise GroupError("graded indicator needs a non-trivial grading")
    pos = _kernel_position(grp)
    total = Cyclotomic.zero(table.order)
    for s in grp.odd_elements:
        total = total + table.value(row, pos[grp.mul(s, s)])
    val = total / len(grp.kernel_elements)
    if not val.is_rational() or val.to_rational() not in (1, 0, -1):
        raise CharacterError(f"graded indicator {val} is not in {{1,0,-1}}; character reducible?")
    return int(val.to_rational())


def frobenius_schur(table: CharacterTable, row: int) -> int:
    grp = table.group
    total = Cyclotomic.zero(table.order)
    for h in range(grp.order):
        total = total + table.value(row, grp.mul(h, h))
    return int((total / grp.order).to_rational())


@dataclass(frozen=True)
class RealTypeTag:
    kind: str                     # "R", "C" or "H"
    partner: Optional[int] = None  # row of the conjugate partner for type C


def omega_twist_partner(grp: GradedGroup, table: CharacterTable, row: int,
                        omega: Optional[int] = None) -> int:
    """Row of h -> conj chi(w^-1 h w) for an odd element w."""
    pos = _kernel_position(grp)
    w = grp.omega if omega is None else omega
    winv = grp.inv(w)
    ker = grp.kernel()
    vals = []
    for r in table.classes.reps:
        h = ker.embedding[r]
        vals.append(table.value(row, pos[grp.prod(winv, h, w)]).conj())
    return table.find_row(vals)


def real_type(grp: GradedGroup, table: CharacterTable, row: int) -> RealTypeTag:
    ind = graded_indicator(grp, table, row)
    if ind == 1:
        return RealTypeTag("R")
    if ind == -1:
        return RealTypeTag("H")
    return RealTypeTag("C", omega_twist_partner(grp, table, row))


def real_irrep_count(tags: Sequence[RealTypeTag]) -> int:
    r = sum(1 for t in tags if t.kind == "R")
    h = sum(1 for t in tags if t.kind == "H")
    c = sum(1 for t in tags if t.kind == "C")
    if c % 2:
        raise CharacterError("unpaired complex type")
    return r + h + c // 2


# ---------------------------------------------------------------- twisted irreducibles


@dataclass
class TwistedIrrep:
    """An irreducible of the extension's kernel on which Z_m acts by z -> zeta_m^z."""
    extension: CentralExtensionGroup
    table: CharacterTable
    row: int
    degree: int
    real_type: str                 # "R", "C", "H" or "complex"
    partner: Optional[int] = None  # index (in the returned list) of the C-type partner

    def value(self, x: int, z: int = 0) -> Cyclotomic:
        """Character value at the extension element (x, z), x in the base kernel."""
        idx = self.extension.element(x, z)
        return self.table.value(self.row, self._pos[idx])

    @property
    def _pos(self) -> Dict[int, int]:
        return _ext_kernel_position(self.extension)


def _ext_kernel_group(ext: CentralExtensionGroup) -> FiniteGroup:
    return ext.group.kernel() if ext.group.is_graded else ext.group.group


def _ext_kernel_position(ext: CentralExtensionGroup) -> Dict[int, int]:
    if "_kpos" not in ext.__dict__:
        if ext.group.is_graded:
            ker = ext.group.kernel()
            ext.__dict__["_kpos"] = {ker.embedding[i]: i for i in range(ker.order)}
        else:
            ext.__dict__["_kpos"] = {i: i for i in range(ext.group.order)}
    return ext.__dict__["_kpos"]


def twisted_irreps(ext: CentralExtensionGroup, with_real_types: bool = True) -> List[TwistedIrrep]:
    """Irreducibles of the ungraded part of the extension with standard central character."""
    cache_key = "_twisted_irreps" + ("R" if with_real_types else "")
    if cache_key in ext.__dict__:
        return ext.__dict__[cache_key]
    ker = _ext_kernel_group(ext)
    table = character_table(ker)
    pos = _ext_kernel_position(ext)
    m = ext.m
    central = pos[ext.element(0, 1)]
    zeta = Cyclotomic.root(m, 1)
    keep = []
    for i, row in enumerate(table.rows):
        val = table.value(i, central)
        if val == zeta * row[0].to_rational():
            keep.append(i)
    graded = ext.group.is_graded and with_real_types
    out = []
    for i in keep:
        if graded:
            tag = real_type(ext.group, table, i)
            out.append(TwistedIrrep(ext, table, i, int(table.rows[i][0].to_rational()), tag.kind,
                                    tag.partner))
        else:
            out.append(TwistedIrrep(ext, table, i, int(table.rows[i][0].to_rational()), "complex"))
    rowpos = {ir.row: j for j, ir in enumerate(out)}
    for ir in out:
        if ir.partner is not None:
            ir.partner = rowpos[ir.partner]
    ext.__dict__[cache_key] = out
    return out


def regular_class_count(ext: CentralExtensionGroup) -> int:
    """Number of theta-regular classes of the base kernel (oracle for twisted irreps)."""
    ker = _ext_kernel_group(ext)
    pos = _ext_kernel_position(ext)
    base = ext.base
    base_ker = [x for x in range(base.order) if base.pi[x] == 1]
    count = 0
    seen = set()
    rows = ker.rows
    for x in base_ker:
        if x in seen:
            continue
        lift = pos[ext.element(x, 0)]
        orbit = set()
        regular = True
        for y in base_ker:
            yl = pos[ext.element(y, 0)]
            if base.mul(x, y) == base.mul(y, x):
                comm = rows[rows[lift][yl]][rows[ker.inverse[lift]][ker.inverse[yl]]]
                if comm != pos[ext.element(0, 0)]:
                    regular = False
            orbit.add(base.group.conj(y, x))
        seen |= orbit
        count += regular
    return count


# ---------------------------------------------------------------- induction and restriction


def restrict_character(values: Sequence[Cyclotomic], group: FiniteGroup, sub: FiniteGroup) -> List[Cyclotomic]:
    """Class function on group (per class) restricted to sub (per class of sub)."""
    inc = inclusion_map(sub, group)
    gcl = group.conjugacy_classes()
    scl = sub.conjugacy_classes()
    return [values[gcl.class_of[inc[r]]] for r in scl.reps]


def induce_character(values: Sequence[Cyclotomic], sub: FiniteGroup, group: FiniteGroup) -> List[Cyclotomic]:
    """Frobenius induction of a class function on sub to group."""
    inc = inclusion_map(sub, group)
    local = {g: i for i, g in enumerate(inc)}
    scl = sub.conjugacy_classes()
    gcl = group.conjugacy_classes()
    order = values[0].n if values else 1
    out = []
    for g in gcl.reps:
        total = Cyclotomic.zero(order)
        for x in range(group.order):
            y = group.conj(x, g)
            if y in local:
                total = total + values[scl.class_of[local[y]]]
        out.append(total / sub.order)
    return out
