"""
Exact arithmetic in cyclotomic fields and Laurent polynomials in fractional
powers of q with cyclotomic coefficients.

An element of Q(zeta_n) is stored by integer coordinates in the power basis
1, z, ..., z^(phi(n)-1) modulo the n-th cyclotomic polynomial, over one
positive common denominator.  Elements of different orders are combined
by lifting both to the lcm of the orders.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Tuple, Union

Number = Union[int, Fraction, "Cyclotomic"]


def _poly_divmod(num: List[int], den: List[int]) -> Tuple[List[int], List[int]]:
    # exact division by a monic integer polynomial, coefficients low to high
    num = list(num)
    q = [0] * max(len(num) - len(den) + 1, 1)
    dl = len(den) - 1
    for i in range(len(num) - 1, dl - 1, -1):
        c = num[i]
        if c:
            q[i - dl] = c
            for j in range(len(den)):
                num[i - dl + j] -= c * den[j]
    return q, num[:dl]


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> Tuple[int, ...]:
    """Coefficients (low to high) of the n-th cyclotomic polynomial."""
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod(poly, list(cyclotomic_poly(d)))
            assert not any(rem)
    return tuple(poly)


@lru_cache(maxsize=None)
def _power_table(n: int) -> Tuple[Tuple[int, ...], ...]:
    """z^j for j in [0, n) expressed in the power basis."""
    phi_poly = cyclotomic_poly(n)
    deg = len(phi_poly) - 1
    out = []
    cur = [0] * deg
    cur[0] = 1
    for j in range(n):
        out.append(tuple(cur))
        top = cur[-1]
        nxt = [0] + cur[:-1]
        if top:
            for i in range(deg):
                nxt[i] -= top * phi_poly[i]
        cur = nxt
    return tuple(out)


def euler_phi(n: int) -> int:
    return len(cyclotomic_poly(n)) - 1


class Cyclotomic:
    """Element of the n-th cyclotomic field."""

    __slots__ = ("n", "c", "d")

    def __init__(self, n: int, coords: Iterable[int], den: int = 1):
        coords = tuple(int(x) for x in coords)
        if den < 0:
            coords, den = tuple(-x for x in coords), -den
        g = math.gcd(den, *coords) if any(coords) else den
        if g > 1:
            coords = tuple(x // g for x in coords)
            den //= g
        if not any(coords):
            den = 1
        self.n = n
        self.c = coords
        self.d = den

    # constructors
    @staticmethod
    def zero(n: int = 1) -> "Cyclotomic":
        return Cyclotomic(n, [0] * euler_phi(n))

    @staticmethod
    def rational(q, n: int = 1) -> "Cyclotomic":
        q = Fraction(q)
        coords = [0] * euler_phi(n)
        coords[0] = q.numerator
        return Cyclotomic(n, coords, q.denominator)

    @staticmethod
    def root(n: int, k: int = 1) -> "Cyclotomic":
        """zeta_n^k with zeta_n = exp(2 pi i / n)."""
        return Cyclotomic(n, _power_table(n)[k % n])

    @staticmethod
    def from_exponents(n: int, counts: Dict[int, int]) -> "Cyclotomic":
        """sum of counts[k] zeta_n^k"""
        table = _power_table(n)
        coords = [0] * euler_phi(n)
        for k, m in counts.items():
            if m:
                for i, v in enumerate(table[k % n]):
                    coords[i] += m * v
        return Cyclotomic(n, coords)

    # structure
    def lift(self, N: int) -> "Cyclotomic":
        """Embed into Q(zeta_N) via zeta_n -> zeta_N^(N/n)."""
        if N == self.n:
            return self
        if N % self.n:
            raise ValueError("target order must be a multiple")
        step = N // self.n
        table = _power_table(N)
        coords = [0] * euler_phi(N)
        for j, v in enumerate(self.c):
            if v:
                for i, t in enumerate(table[(j * step) % N]):
                    coords[i] += v * t
        return Cyclotomic(N, coords, self.d)

    def _common(self, other: "Cyclotomic") -> Tuple["Cyclotomic", "Cyclotomic"]:
        if self.n == other.n:
            return self, other
        N = math.lcm(self.n, other.n)
        return self.lift(N), other.lift(N)

    @staticmethod
    def coerce(x, n: int = 1) -> "Cyclotomic":
        if isinstance(x, Cyclotomic):
            return x
        return Cyclotomic.rational(x, n)

    # arithmetic
    def __add__(self, other):
        if not isinstance(other, Cyclotomic):
            other = Cyclotomic.rational(other, self.n)
        a, b = self._common(other)
        d = a.d * b.d // math.gcd(a.d, b.d)
        fa, fb = d // a.d, d // b.d
        return Cyclotomic(a.n, [x * fa + y * fb for x, y in zip(a.c, b.c)], d)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.n, [-x for x in self.c], self.d)

    def __sub__(self, other):
        return self + (-Cyclotomic.coerce(other, self.n))

    def __rsub__(self, other):
        return Cyclotomic.coerce(other, self.n) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            return Cyclotomic(self.n, [x * f.numerator for x in self.c], self.d * f.denominator)
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        a, b = self._common(other)
        n = a.n
        acc = [0] * n
        for i, x in enumerate(a.c):
            if x:
                for j, y in enumerate(b.c):
                    if y:
                        acc[(i + j) % n] += x * y
        table = _power_table(n)
        coords = [0] * len(a.c)
        for j, v in enumerate(acc):
            if v:
                for i, t in enumerate(table[j]):
                    if t:
                        coords[i] += v * t
        return Cyclotomic(n, coords, a.d * b.d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            return Cyclotomic(self.n, [x * f.denominator for x in self.c], self.d * f.numerator)
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not supported")
        out = Cyclotomic.rational(1, self.n)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def galois(self, k: int) -> "Cyclotomic":
        """Apply zeta -> zeta^k (k coprime to n)."""
        if math.gcd(k, self.n) != 1:
            raise ValueError("Galois exponent must be a unit")
        return self._apply_exponent_map(k)

    def _apply_exponent_map(self, k: int) -> "Cyclotomic":
        table = _power_table(self.n)
        coords = [0] * len(self.c)
        for j, v in enumerate(self.c):
            if v:
                for i, t in enumerate(table[(j * k) % self.n]):
                    coords[i] += v * t
        return Cyclotomic(self.n, coords, self.d)

    def conj(self) -> "Cyclotomic":
        return self._apply_exponent_map(-1)

    # predicates
    def is_zero(self) -> bool:
        return not any(self.c)

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return Fraction(self.c[0], self.d)

    def is_integral(self) -> bool:
        return self.d == 1

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self.c[0], self.d) == other
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        a, b = self._common(other)
        return a.d == b.d and a.c == b.c

    def __hash__(self):
        # equal elements of different orders must hash alike: hash the rational
        # part only when rational, otherwise the reduced representation
        if self.is_rational():
            return hash(Fraction(self.c[0], self.d))
        r = self.reduced()
        return hash((r.n, r.c, r.d))

    def reduced(self) -> "Cyclotomic":
        """The same element expressed at the smallest order that contains it."""
        for m in sorted(d for d in range(1, self.n + 1) if self.n % d == 0):
            if m == self.n:
                return self
            cand = self._descend(m)
            if cand is not None:
                return cand
        return self

    def _descend(self, m: int) -> Optional["Cyclotomic"]:
        # try to write self as an element of Q(zeta_m): solve by matching the
        # lift of the basis of Q(zeta_m), which is a coordinate embedding
        phi_m = euler_phi(m)
        basis = [Cyclotomic.root(m, j).lift(self.n) for j in range(phi_m)]
        # greedy triangular solve: each lifted basis element has a leading coordinate
        coords = [Fraction(x, self.d) for x in self.c]
        sol = [Fraction(0)] * phi_m
        rows = [[Fraction(v) for v in b.c] for b in basis]
        # Gaussian elimination on the transposed system rows^T sol = coords
        n_eq = len(coords)
        mat = [[rows[j][i] for j in range(phi_m)] + [coords[i]] for i in range(n_eq)]
        piv_cols = []
        r = 0
        for col in range(phi_m):
            pr = next((i for i in range(r, n_eq) if mat[i][col] != 0), None)
            if pr is None:
                continue
            mat[r], mat[pr] = mat[pr], mat[r]
            pv = mat[r][col]
            mat[r] = [v / pv for v in mat[r]]
            for i in range(n_eq):
                if i != r and mat[i][col] != 0:
                    f = mat[i][col]
                    mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
            piv_cols.append(col)
            r += 1
        if any(mat[i][-1] != 0 for i in range(r, n_eq)):
            return None
        for i, col in enumerate(piv_cols):
            sol[col] = mat[i][-1]
        den = math.lcm(*[s.denominator for s in sol]) if sol else 1
        return Cyclotomic(m, [int(s * den) for s in sol], den)

    def root_exponent(self) -> Optional[int]:
        """k with self == zeta_n^k, or None."""
        for k in range(self.n):
            if self == Cyclotomic.root(self.n, k):
                return k
        return None

    def sort_key(self, N: Optional[int] = None) -> Tuple:
        x = self.lift(N) if N else self
        return (x.d, x.c)

    def to_json(self) -> dict:
        return {"order": self.n, "coords": [str(Fraction(x, self.d)) for x in self.c]}

    @staticmethod
    def from_json(data: dict) -> "Cyclotomic":
        fr = [Fraction(x) for x in data["coords"]]
        den = math.lcm(*[f.denominator for f in fr]) if fr else 1
        return Cyclotomic(int(data["order"]), [int(f * den) for f in fr], den)

    def __repr__(self):
        terms = []
        for j, v in enumerate(self.c):
            if v:
                f = Fraction(v, self.d)
                terms.append(f"{f}" if j == 0 else f"{f}*z{self.n}^{j}")
        return " + ".join(terms) if terms else "0"


def cyc_sum(values: Iterable[Cyclotomic], n: int = 1) -> Cyclotomic:
    total = Cyclotomic.zero(n)
    for v in values:
        total = total + v
    return total


class QPoly:
    """Finite Laurent polynomial in fractional powers of q with cyclotomic coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Fraction, Cyclotomic]] = None):
        clean = {}
        for e, c in (terms or {}).items():
            c = Cyclotomic.coerce(c)
            if not c.is_zero():
                clean[Fraction(e)] = c
        self.terms = clean

    @staticmethod
    def monomial(exponent, coeff) -> "QPoly":
        return QPoly({Fraction(exponent): Cyclotomic.coerce(coeff)})

    def __add__(self, other: "QPoly") -> "QPoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return QPoly(out)

    def __neg__(self):
        return QPoly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, QPoly):
            out: Dict[Fraction, Cyclotomic] = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = e1 + e2
                    out[e] = out[e] + c1 * c2 if e in out else c1 * c2
            return QPoly(out)
        return QPoly({e: c * other for e, c in self.terms.items()})

    __rmul__ = __mul__

    def shift(self, s) -> "QPoly":
        return QPoly({e + s: c for e, c in self.terms.items()})

    def conj(self) -> "QPoly":
        """Conjugate coefficients, q treated as real."""
        return QPoly({e: c.conj() for e, c in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, QPoly):
            return NotImplemented
        if set(self.terms) != set(other.terms):
            return False
        return all(self.terms[e] == other.terms[e] for e in self.terms)

    __hash__ = None

    def truncate(self, P) -> "QPoly":
        return QPoly({e: c for e, c in self.terms.items() if e < P})

    def to_json(self) -> list:
        return [{"exponent": str(e), "coeff": c.to_json()} for e, c in sorted(self.terms.items())]

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c})q^{e}" for e, c in sorted(self.terms.items()))
