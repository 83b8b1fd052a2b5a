"""
N-torsion points of the Tate curve over rings of the form
Z[q^{+-1/d}][zeta_n], restricted to monomial units +-zeta^a q^{b/d}.

A point is a pair (xi, i) with 0 <= i < N and xi^N = q^i; the group law
and the inversion are the casewise formulas on the index i.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .groups import cyclic, dihedral


class TateError(ValueError):
    pass


@dataclass(frozen=True)
class MonomialUnit:
    """sign * zeta_n^zeta * q^q_exp; -1 is folded into zeta when n is even."""
    sign: int
    zeta: int
    q_exp: Fraction
    n: int

    @staticmethod
    def make(sign: int, zeta: int, q_exp, n: int) -> "MonomialUnit":
        if sign not in (1, -1):
            raise TateError("sign must be +1 or -1")
        zeta %= n
        if sign == -1 and n % 2 == 0:
            sign, zeta = 1, (zeta + n // 2) % n
        return MonomialUnit(sign, zeta, Fraction(q_exp), n)

    @staticmethod
    def one(n: int = 1) -> "MonomialUnit":
        return MonomialUnit.make(1, 0, 0, n)

    @staticmethod
    def q_power(e, n: int = 1) -> "MonomialUnit":
        return MonomialUnit.make(1, 0, e, n)

    def __mul__(self, other: "MonomialUnit") -> "MonomialUnit":
        if self.n != other.n:
            raise TateError("units over different cyclotomic rings")
        return MonomialUnit.make(self.sign * other.sign, self.zeta + other.zeta,
                                 self.q_exp + other.q_exp, self.n)

    def inverse(self) -> "MonomialUnit":
        return MonomialUnit.make(self.sign, -self.zeta, -self.q_exp, self.n)

    def __pow__(self, k: int) -> "MonomialUnit":
        return MonomialUnit.make(self.sign ** (k % 2) if k >= 0 else self.sign ** (-k % 2),
                                 self.zeta * k, self.q_exp * k, self.n)

    def in_ring(self, d: int) -> bool:
        """Whether the unit lies in Z[q^{+-1/d}][zeta_n]."""
        return (self.q_exp * d).denominator == 1

    def to_json(self) -> dict:
        return {"sign": self.sign, "zeta": self.zeta, "q_num": self.q_exp.numerator,
                "q_den": self.q_exp.denominator}

    @staticmethod
    def from_json(data: dict, n: int) -> "MonomialUnit":
        try:
            return MonomialUnit.make(int(data["sign"]), int(data["zeta"]),
                                     Fraction(int(data["q_num"]), int(data["q_den"])), n)
        except (KeyError, TypeError, ZeroDivisionError) as exc:
            raise TateError(f"malformed unit: {exc}") from None


@dataclass(frozen=True)
class TatePoint:
    xi: MonomialUnit
    i: int
    N: int

    def __post_init__(self):
        if not 0 <= self.i < self.N:
            raise TateError("index i must lie in [0, N)")
        if self.xi ** self.N != MonomialUnit.q_power(self.i, self.xi.n):
            raise TateError("xi^N is not q^i")

    def to_json(self) -> dict:
        return {"xi": self.xi.to_json(), "i": self.i}

    @staticmethod
    def from_json(data: dict, N: int, n: Optional[int] = None) -> "TatePoint":
        try:
            return TatePoint(MonomialUnit.from_json(data["xi"], n or N), int(data["i"]), N)
        except (KeyError, TypeError) as exc:
            raise TateError(f"malformed point: {exc}") from None


def identity(N: int, n: Optional[int] = None) -> TatePoint:
    return TatePoint(MonomialUnit.one(n or N), 0, N)


def multiply(p1: TatePoint, p2: TatePoint) -> TatePoint:
    if p1.N != p2.N:
        raise TateError("points of different N")
    N = p1.N
    s = p1.i + p2.i
    if s < N:
        return TatePoint(p1.xi * p2.xi, s, N)
    return TatePoint(p1.xi * p2.xi * MonomialUnit.q_power(-1, p1.xi.n), s - N, N)


def invert(p: TatePoint) -> TatePoint:
    if p.i == 0:
        return TatePoint(p.xi.inverse(), 0, p.N)
    return TatePoint(p.xi.inverse() * MonomialUnit.q_power(1, p.xi.n), p.N - p.i, p.N)


def a_map(N: int, j: int) -> TatePoint:
    """mu_N -> T[N]: zeta^j -> (zeta^j, 0)."""
    return TatePoint(MonomialUnit.make(1, j, 0, N), 0, N)


def b_map(p: TatePoint) -> Fraction:
    """T[N] -> Z[1/N]/Z: (xi, i/N) -> i/N mod 1."""
    return Fraction(p.i, p.N) % 1


def torsion_points(N: int, d: Optional[int] = None) -> List[TatePoint]:
    """All monomial-unit N-torsion points over Z[q^{+-1/d}][zeta_N] (d defaults to N)."""
    d = N if d is None else d
    out = []
    for i in range(N):
        e = Fraction(i, N)
        if (e * d).denominator != 1:
            continue
        for a in range(N):
            for sign in ((1,) if N % 2 == 0 else (1, -1)):
                xi = MonomialUnit.make(sign, a, e, N)
                if xi ** N == MonomialUnit.q_power(i, N):
                    out.append(TatePoint(xi, i, N))
    uniq = {(p.xi, p.i): p for p in out}
    return [uniq[k] for k in sorted(uniq, key=lambda k: (k[1], k[0].zeta, k[0].sign))]


def group_axioms(N: int, d: Optional[int] = None) -> Dict[str, bool]:
    pts = torsion_points(N, d)
    keys = {(p.xi, p.i) for p in pts}
    e = identity(N)
    closed = all((multiply(a, b).xi, multiply(a, b).i) in keys for a in pts for b in pts)
    unit = all(multiply(e, a) == a == multiply(a, e) for a in pts)
    inverse = all(multiply(a, invert(a)) == e for a in pts)
    comm = all(multiply(a, b) == multiply(b, a) for a in pts for b in pts)
    assoc = all(multiply(multiply(a, b), c) == multiply(a, multiply(b, c))
                for a in pts for b in pts for c in pts)
    return {"closed": closed, "identity": unit, "inverse": inverse, "commutative": comm,
            "associative": assoc, "order": len(pts) == N * N if (d or N) % N == 0 else True}


def exactness_check(N: int) -> Dict[str, bool]:
    """0 -> mu_N -> T[N] -> Z[1/N]/Z -> 0 over the q^{1/N} ring, plus the inversion diagram."""
    pts = torsion_points(N)
    e = identity(N)
    images = [a_map(N, j) for j in range(N)]
    img_keys = {(p.xi, p.i) for p in images}
    kernel = {(p.xi, p.i) for p in pts if b_map(p) == 0}
    out = {
        "a_injective": len(img_keys) == N,
        "a_homomorphism": all(multiply(a_map(N, j), a_map(N, k)) == a_map(N, j + k)
                              for j in range(N) for k in range(N)),
        "b_after_a_zero": all(b_map(p) == 0 for p in images),
        "kernel_equals_image": kernel == img_keys,
        "b_surjective": {b_map(p) for p in pts} == {Fraction(i, N) for i in range(N)},
        "b_homomorphism": all(b_map(multiply(p, r)) == (b_map(p) + b_map(r)) % 1 for p in pts for r in pts),
        "inversion_on_mu": all(invert(a_map(N, j)) == a_map(N, -j) for j in range(N)),
        "inversion_on_quotient": all(b_map(invert(p)) == (-b_map(p)) % 1 for p in pts),
        "inversion_is_inverse": all(multiply(p, invert(p)) == e for p in pts),
        "inversion_involutive": all(invert(invert(p)) == p for p in pts),
    }
    out["pass"] = all(out.values())
    return out


@dataclass
class SplitIsomorphism:
    """mu_N x Z/N -> T[N], (alpha^j, i/N) -> (zeta^j q^{i/N}, i)."""
    N: int

    def forward(self, j: int, i: int) -> TatePoint:
        N = self.N
        return TatePoint(MonomialUnit.make(1, j, Fraction(i % N, N), N), i % N, N)

    def backward(self, p: TatePoint) -> Tuple[int, int]:
        rest = p.xi * MonomialUnit.q_power(-Fraction(p.i, self.N), p.xi.n)
        if rest.q_exp != 0 or rest.sign != 1:
            raise TateError("point is not in the image of the splitting")
        return rest.zeta % self.N, p.i

    @staticmethod
    def involution(N: int, j: int, i: int) -> Tuple[int, int]:
        return (-j) % N, (N - i) % N


def split_iso(N: int) -> Dict[str, object]:
    iso = SplitIsomorphism(N)
    pairs = [(j, i) for j in range(N) for i in range(N)]
    images = [iso.forward(j, i) for j, i in pairs]
    keys = {(p.xi, p.i) for p in images}
    everything = {(p.xi, p.i) for p in torsion_points(N)}
    hom = all(multiply(iso.forward(j1, i1), iso.forward(j2, i2)) == iso.forward(j1 + j2, i1 + i2)
              for j1, i1 in pairs for j2, i2 in pairs)
    inv_ok = all(iso.backward(invert(iso.forward(j, i))) == SplitIsomorphism.involution(N, j, i)
                 for j, i in pairs)
    fixed = sum(1 for j, i in pairs if SplitIsomorphism.involution(N, j, i) == (j, i))
    two_torsion = sum(1 for j, i in pairs if (2 * j) % N == 0 and (2 * i) % N == 0)
    out = {"bijective": len(keys) == N * N and keys == everything, "homomorphism": hom,
           "involution_matches": inv_ok, "fixed_points": fixed, "two_torsion": two_torsion,
           "round_trip": all(iso.backward(iso.forward(j, i)) == (j, i) for j, i in pairs)}
    out["pass"] = bool(out["bijective"] and hom and inv_ok and fixed == two_torsion and out["round_trip"])
    return out


def multiplication_table(N: int) -> List[List[int]]:
    """Table of T[N] over the q^{1/N} ring, points listed as in torsion_points."""
    pts = torsion_points(N)
    index = {(p.xi, p.i): k for k, p in enumerate(pts)}
    return [[index[(multiply(a, b).xi, multiply(a, b).i)] for b in pts] for a in pts]


# ---------------------------------------------------------------- comparison with QEll


def torsion_vs_qell(N: int) -> Dict[str, object]:
    """Coordinate rings of the T_i[N] against the cyclic presentation of QEll of Z_N."""
    from .qell import qell_point
    tate_rel = [f"x_{i}^{N} - q^{i}" for i in range(N)]
    struct = qell_point(cyclic(N))
    pres = struct.presentations
    qell_rel = []
    ok = len(pres) == N
    for ci, comp in enumerate(struct.components):
        p = pres.get(ci)
        if p is None:
            ok = False
            continue
        ok = ok and p.verified and p.rank == N
        qell_rel.extend(p.relations)
    match = sorted(tate_rel) == sorted(qell_rel)
    return {"tate_relations": tate_rel, "qell_relations": qell_rel, "ranks": [c.rank for c in struct.components],
            "pass": bool(ok and match)}


def real_fixed_points(N: int) -> Dict[str, object]:
    """TR[N]: the Real theory of a point under D_2N, against the fixed part of the involution."""
    from .qell import fixed_subring_rank, qellr_point, rep_ring_involution
    grp = dihedral(N)
    real = qellr_point(grp)
    inv = rep_ring_involution(grp)
    ranks = [c.rank for c in real.components]
    all_real = all(b.real_type == "R" for c in real.components for b in c.basis)
    out = {"rank": real.rank, "component_ranks": ranks, "fixed_rank": fixed_subring_rank(inv),
           "involution": inv.is_involution, "all_real_type": all_real}
    out["pass"] = bool(real.rank == N * N == out["fixed_rank"] and inv.is_involution and all_real)
    return out


def pullback_square(N: int) -> Dict[str, object]:
    """QEll = QEllR (x) over KR_T of K_T on ranks, with c a basis bijection for Z_N in D_2N."""
    from .qell import forgetful, qellr_point
    real = qellr_point(dihedral(N))
    cplx = real.companion()
    images = set()
    single = True
    for b in real.basis_elements():
        img = forgetful(b)
        if len(img.terms) != 1 or list(img.terms.values()) != [1]:
            single = False
        images.update((ci, bi) for (ci, bi, _) in img.terms)
    # KR^0_T(pt) and K^0_T(pt) are both free of rank one over Z[q^{+-1}]
    rank_ok = cplx.rank == real.rank * 1
    out = {"real_rank": real.rank, "complex_rank": cplx.rank, "basis_to_basis": single,
           "surjective": len(images) == cplx.rank}
    out["pass"] = bool(rank_ok and single and out["surjective"])
    return out


# ---------------------------------------------------------------- Weierstrass coefficients


def _divisor_power_sum(m: int, k: int) -> int:
    return sum(d ** k for d in range(1, m + 1) if m % d == 0)


def a4_series(precision: int) -> List[int]:
    """Coefficients of q^0..q^(P-1) in -5 sum n^3 q^n/(1-q^n)."""
    return [0] + [-5 * _divisor_power_sum(m, 3) for m in range(1, precision)] if precision > 0 else []


def a6_series(precision: int) -> List[int]:
    """Coefficients of q^0..q^(P-1) in (1/12) sum (7n^5+5n^3) q^n/(1-q^n); all integral."""
    out = [0] if precision > 0 else []
    for m in range(1, precision):
        num = 7 * _divisor_power_sum(m, 5) + 5 * _divisor_power_sum(m, 3)
        if num % 12:
            raise TateError("non-integral a6 coefficient")
        out.append(num // 12)
    return out


def point_table(N: int) -> List[dict]:
    return [p.to_json() for p in torsion_points(N)]


def check_all(N: int) -> Dict[str, object]:
    axioms = group_axioms(N) if N <= 6 else {"skipped": True}
    res = {"group_axioms": axioms, "exactness": exactness_check(N), "split": split_iso(N)}
    res["pass"] = bool(all(v for k, v in axioms.items() if k != "skipped")
                       and res["exactness"]["pass"] and res["split"]["pass"])
    return res
