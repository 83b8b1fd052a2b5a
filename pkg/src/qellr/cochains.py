"""
Normalized cochains on the classifying space of a finite graded group, with
values in the torsion circle Q/Z, plain and pi-twisted differentials, and the
central extensions defined by 2-cocycles.

A cochain with modulus m stores integers mod m; the integer v stands for the
circle value v/m.  Tuples are written leftmost entry first, so the n-cochain
value lam[s_n | ... | s_1] is ``c(s_n, ..., s_1)``.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .groups import FiniteGroup, GradedGroup, trivially_graded

DENSE_LIMIT = 10 ** 6


class CochainError(ValueError):
    pass


class CircleValue(Fraction):
    """A rational number reduced modulo 1."""

    def __new__(cls, numerator=0, denominator=None):
        f = Fraction(numerator, denominator) if denominator is not None else Fraction(numerator)
        f = f - math.floor(f)
        return super().__new__(cls, f.numerator, f.denominator)


def _as_graded(base: Union[GradedGroup, FiniteGroup]) -> GradedGroup:
    return base if isinstance(base, GradedGroup) else trivially_graded(base)


class Cochain:
    """Normalized n-cochain; dense numpy storage or a memoized evaluator."""

    def __init__(self, base, degree: int, modulus: int, twisted: bool = False,
                 values: Optional[np.ndarray] = None,
                 evaluator: Optional[Callable[[Tuple[int, ...]], int]] = None):
        self.base = _as_graded(base)
        self.degree = int(degree)
        self.modulus = int(modulus)
        if self.modulus < 1:
            raise CochainError("modulus must be positive")
        self.twisted = bool(twisted) and self.base.is_graded
        if values is not None:
            arr = np.asarray(values, dtype=np.int64) % self.modulus
            if arr.shape != (self.base.order,) * self.degree:
                raise CochainError("value array has the wrong shape")
            self._values = arr
            self._eval = None
        elif evaluator is not None:
            self._values = None
            self._eval = evaluator
            self._memo: Dict[Tuple[int, ...], int] = {}
        else:
            self._values = np.zeros((self.base.order,) * self.degree, dtype=np.int64)
            self._eval = None

    def __repr__(self):
        kind = "twisted" if self.twisted else "plain"
        return f"Cochain(degree={self.degree}, modulus={self.modulus}, {kind}, base order {self.base.order})"

    @property
    def is_dense(self) -> bool:
        return self._values is not None

    def __call__(self, *tup: int) -> int:
        if self._values is not None:
            return int(self._values[tup])
        if 0 in tup:
            return 0
        try:
            return self._memo[tup]
        except KeyError:
            v = int(self._eval(tup)) % self.modulus
            self._memo[tup] = v
            return v

    def value(self, *tup: int) -> CircleValue:
        return CircleValue(self(*tup), self.modulus)

    def array(self) -> np.ndarray:
        """Dense array of values (materializes a lazy cochain)."""
        if self._values is None:
            n = self.base.order
            if n ** self.degree > DENSE_LIMIT * 20:
                raise CochainError("cochain too large to materialize")
            arr = np.zeros((n,) * self.degree, dtype=np.int64)
            for tup in itertools.product(range(1, n), repeat=self.degree):
                arr[tup] = self(*tup)
            self._values = arr
        return self._values

    def materialize(self) -> "Cochain":
        self.array()
        return self

    def with_modulus(self, modulus: int) -> "Cochain":
        """Same circle values expressed with a multiple of the current modulus."""
        if modulus % self.modulus:
            raise CochainError("new modulus must be a multiple of the old one")
        k = modulus // self.modulus
        if self.is_dense:
            return Cochain(self.base, self.degree, modulus, self.twisted, values=self._values * k)
        return Cochain(self.base, self.degree, modulus, self.twisted, evaluator=lambda t: self(*t) * k)

    def scaled(self, k: int) -> "Cochain":
        if self.is_dense:
            return Cochain(self.base, self.degree, self.modulus, self.twisted, values=self._values * k)
        return Cochain(self.base, self.degree, self.modulus, self.twisted, evaluator=lambda t: self(*t) * k)

    def __neg__(self):
        return self.scaled(-1)

    def __add__(self, other: "Cochain") -> "Cochain":
        return product(self, other)

    def __sub__(self, other: "Cochain") -> "Cochain":
        return product(self, -other)

    def is_zero(self) -> bool:
        return not np.any(self.array())

    def is_normalized(self) -> bool:
        arr = self.array()
        for axis in range(self.degree):
            if np.any(np.take(arr, 0, axis=axis)):
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        if self.degree != other.degree or self.base.order != other.base.order:
            return False
        m = math.lcm(self.modulus, other.modulus)
        a = self.array() * (m // self.modulus) % m
        b = other.array() * (m // other.modulus) % m
        return bool(np.array_equal(a, b))

    __hash__ = None


def zero_cochain(base, degree: int, modulus: int = 1, twisted: bool = False) -> Cochain:
    return Cochain(base, degree, modulus, twisted)


def _normalize_array(arr: np.ndarray) -> np.ndarray:
    arr = arr.copy()
    for axis in range(arr.ndim):
        idx = [slice(None)] * arr.ndim
        idx[axis] = 0
        arr[tuple(idx)] = 0
    return arr


def random_cochain(base, degree: int, twisted: bool, modulus: int, seed: int) -> Cochain:
    base = _as_graded(base)
    rng = np.random.default_rng(seed)
    arr = rng.integers(0, modulus, size=(base.order,) * degree, dtype=np.int64)
    return Cochain(base, degree, modulus, twisted, values=_normalize_array(arr))


def _signs(c: Cochain) -> List[int]:
    return list(c.base.pi) if c.twisted else [1] * c.base.order


def differential(c: Cochain) -> Cochain:
    n = c.degree
    k = c.base.order
    m = c.modulus
    sign = _signs(c)
    rows = c.base.group.rows
    if c.is_dense and k ** (n + 1) <= DENSE_LIMIT * 4:
        A = c.array()
        T = c.base.group.table
        axes = [np.arange(k).reshape((1,) * j + (k,) + (1,) * (n - j)) for j in range(n + 1)]
        pi = np.array(sign, dtype=np.int64).reshape((k,) + (1,) * n)
        out = pi * A[tuple(axes[1:])] if n > 0 else pi * A
        out = np.broadcast_to(out, (k,) * (n + 1)).copy()
        for p in range(n):
            merged = T[axes[p], axes[p + 1]]
            idx = tuple(axes[:p]) + (merged,) + tuple(axes[p + 2:])
            term = A[idx]
            out += (-1) ** (p + 1) * term
        if n > 0:
            out += (-1) ** (n + 1) * A[tuple(axes[:n])]
        else:
            out += -A
        return Cochain(c.base, n + 1, m, c.twisted, values=out % m)

    def ev(t):
        total = sign[t[0]] * c(*t[1:])
        for p in range(n):
            total += (-1) ** (p + 1) * c(*(t[:p] + (rows[t[p]][t[p + 1]],) + t[p + 2:]))
        total += (-1) ** (n + 1) * c(*t[:n])
        return total

    return Cochain(c.base, n + 1, m, c.twisted, evaluator=ev)


def is_cocycle(c: Cochain) -> bool:
    return differential(c).is_zero()


def product(c1: Cochain, c2: Cochain) -> Cochain:
    """Pointwise product of T-valued cochains, i.e. the sum of circle values."""
    if c1.degree != c2.degree or c1.base.order != c2.base.order:
        raise CochainError("cochains must share degree and base")
    if c1.twisted != c2.twisted:
        raise CochainError("cannot combine twisted and plain cochains")
    m = math.lcm(c1.modulus, c2.modulus)
    a, b = m // c1.modulus, m // c2.modulus
    if c1.is_dense and c2.is_dense:
        return Cochain(c1.base, c1.degree, m, c1.twisted, values=c1.array() * a + c2.array() * b)
    return Cochain(c1.base, c1.degree, m, c1.twisted, evaluator=lambda t: c1(*t) * a + c2(*t) * b)


# ---------------------------------------------------------------- pullbacks


def _images_into(sub, target: GradedGroup) -> List[int]:
    grp = sub.group if isinstance(sub, GradedGroup) else sub
    images = list(range(grp.order))
    cur = grp
    while cur is not target.group:
        if cur.embedding is None:
            raise CochainError("group is not a subgroup of the cochain base")
        images = [cur.embedding[x] for x in images]
        cur = cur.ambient
    return images


def restrict(c: Cochain, sub, images: Optional[Sequence[int]] = None) -> Cochain:
    """Pull back along a graded homomorphism (default: a subgroup inclusion)."""
    sub = _as_graded(sub)
    if images is None:
        images = _images_into(sub, c.base)
    images = list(images)
    rows, trows = sub.group.rows, c.base.group.rows
    n = sub.order
    if len(images) != n or images[0] != 0:
        raise CochainError("not a homomorphism")
    for a in range(n):
        ia = images[a]
        if sub.pi[a] != c.base.pi[ia]:
            raise CochainError("map does not preserve the grading")
        for b in range(n):
            if images[rows[a][b]] != trows[ia][images[b]]:
                raise CochainError("not a homomorphism")
    twisted = c.twisted and sub.is_graded
    if c.is_dense and n ** c.degree <= DENSE_LIMIT:
        arr = c.array()
        img = np.array(images)
        vals = arr[np.ix_(*([img] * c.degree))] if c.degree else arr
        return Cochain(sub, c.degree, c.modulus, twisted, values=vals)
    return Cochain(sub, c.degree, c.modulus, twisted,
                   evaluator=lambda t: c(*(images[x] for x in t)))


def pullback(c: Cochain, source: GradedGroup, images: Sequence[int], twisted: Optional[bool] = None) -> Cochain:
    """Pull back along an arbitrary homomorphism source -> c.base (grading not checked)."""
    images = list(images)
    tw = c.twisted if twisted is None else twisted
    n = source.order
    if c.is_dense and n ** c.degree <= DENSE_LIMIT:
        img = np.array(images)
        vals = c.array()[np.ix_(*([img] * c.degree))] if c.degree else c.array()
        return Cochain(source, c.degree, c.modulus, tw, values=vals)
    return Cochain(source, c.degree, c.modulus, tw, evaluator=lambda t: c(*(images[x] for x in t)))


# ---------------------------------------------------------------- standard cocycles


def cyclic_cocycle3(n: int, k: int = 1) -> Cochain:
    """The 3-cocycle k a (b + c - [b + c]) / n^2 on Z_n, as a value mod 1."""
    from .groups import cyclic
    grp = cyclic(n)
    a = np.arange(n).reshape(n, 1, 1)
    b = np.arange(n).reshape(1, n, 1)
    c = np.arange(n).reshape(1, 1, n)
    carry = (b + c >= n).astype(np.int64)
    vals = np.broadcast_to(k * a * carry, (n, n, n))
    return Cochain(grp, 3, n, False, values=vals)


def generating_set(group: FiniteGroup) -> List[int]:
    gens: List[int] = []
    span = {0}
    for x in range(group.order):
        if x not in span:
            gens.append(x)
            span = set(group.closure(gens))
    return gens


def homomorphisms_to_cyclic(group: FiniteGroup, n: int) -> List[List[int]]:
    """All homomorphisms group -> Z_n, as image lists."""
    gens = generating_set(group)
    out = []
    for imgs in itertools.product(range(n), repeat=len(gens)):
        images = {0: 0}
        frontier = [0]
        ok = True
        while frontier and ok:
            nxt = []
            for x in frontier:
                for s, v in zip(gens, imgs):
                    y = group.mul(x, s)
                    val = (images[x] + v) % n
                    if y in images:
                        if images[y] != val:
                            ok = False
                            break
                    else:
                        images[y] = val
                        nxt.append(y)
                if not ok:
                    break
            frontier = nxt
        if ok:
            full = [images[x] for x in range(group.order)]
            if all(full[group.mul(a, b)] == (full[a] + full[b]) % n
                   for a in range(group.order) for b in range(group.order)):
                out.append(full)
    return out


def random_cocycle(base, degree: int, modulus: int, seed: int, twisted: bool = False) -> Cochain:
    """A cocycle mixing pulled-back classes with a random coboundary.

    Degree 3 (plain): sums of pullbacks of the cyclic 3-cocycles along
    homomorphisms to Z_d, d | modulus.  Degree 2: cup products of
    Z_d-valued homomorphisms (d = 2 when twisted, since 1/2 = -1/2).  A random
    coboundary is always added.
    """
    base = _as_graded(base)
    rng = np.random.default_rng(seed)
    total = differential(random_cochain(base, degree - 1, twisted, modulus, int(rng.integers(1 << 30))))
    if degree == 3 and not twisted:
        for d in sorted({d for d in range(2, modulus + 1) if modulus % d == 0}):
            homs = homomorphisms_to_cyclic(base.group, d)
            if len(homs) <= 1:
                continue
            for _ in range(2):
                phi = homs[int(rng.integers(len(homs)))]
                k = int(rng.integers(d))
                pulled = pullback(cyclic_cocycle3(d, k), base, phi, twisted=False)
                total = product(total, pulled.with_modulus(math.lcm(pulled.modulus, modulus)))
    elif degree == 2:
        # bilinear phi(x) psi(y) m/d; twisted coefficients only allow d = 2
        divisors = [d for d in range(2, modulus + 1) if modulus % d == 0]
        if twisted:
            divisors = [d for d in divisors if d == 2]
        for d in divisors:
            homs = homomorphisms_to_cyclic(base.group, d)
            if len(homs) <= 1:
                continue
            phi = np.array(homs[int(rng.integers(len(homs)))])
            psi = np.array(homs[int(rng.integers(len(homs)))])
            vals = _normalize_array(np.outer(phi, psi) * (modulus // d) % modulus)
            total = product(total, Cochain(base, 2, modulus, twisted, values=vals))
    return Cochain(base, degree, math.lcm(total.modulus, modulus), twisted,
                   values=total.with_modulus(math.lcm(total.modulus, modulus)).array())


# ---------------------------------------------------------------- central extensions


class CentralExtensionGroup:
    """Extension of a graded group by Z_m from a (twisted) 2-cocycle.

    Element (x, z) has index x*m + z; the product is
    (x2, z2)(x1, z1) = (x2 x1, theta[x2|x1] + z2 + pi(x2) z1).
    """

    def __init__(self, theta: Cochain, group: GradedGroup):
        self.theta = theta
        self.base = theta.base
        self.m = theta.modulus
        self.group = group

    def __repr__(self):
        return f"CentralExtensionGroup(base order {self.base.order}, m={self.m})"

    def element(self, x: int, z: int = 0) -> int:
        return x * self.m + z % self.m

    def split(self, idx: int) -> Tuple[int, int]:
        return divmod(idx, self.m)

    def central(self, z: int) -> int:
        return z % self.m


def central_extension(theta: Cochain, check_cocycle: bool = True) -> CentralExtensionGroup:
    if theta.degree != 2:
        raise CochainError("central extensions need a 2-cochain")
    if check_cocycle and not is_cocycle(theta):
        raise CochainError("input is not a cocycle")
    base = theta.base
    if base.is_graded and not theta.twisted:
        raise CochainError("a non-trivially graded base needs a twisted cocycle")
    n, m = base.order, theta.modulus
    T = base.group.table
    pi = np.array(_signs(theta), dtype=np.int64)
    th = theta.array()
    x2 = np.repeat(np.arange(n), m).reshape(-1, 1)
    z2 = np.tile(np.arange(m), n).reshape(-1, 1)
    x1 = x2.reshape(1, -1)
    z1 = z2.reshape(1, -1)
    prod_x = T[x2, x1]
    prod_z = (th[x2, x1] + z2 + pi[x2] * z1) % m
    table = prod_x * m + prod_z
    labels = [(x, z) for x in range(n) for z in range(m)]
    grp = FiniteGroup(table, labels=labels, check=not check_cocycle)
    gpi = [base.pi[x] for (x, _) in labels]
    return CentralExtensionGroup(theta, GradedGroup(grp, gpi, check=False))


# ---------------------------------------------------------------- cohomologous


def _factorize(m: int) -> List[Tuple[int, int]]:
    out, p = [], 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 1
    if m > 1:
        out.append((m, 1))
    return out


def _valuation(x: int, p: int, cap: int) -> int:
    if x == 0:
        return cap
    v = 0
    while x % p == 0 and v < cap:
        x //= p
        v += 1
    return v


def solve_mod_prime_power(A: np.ndarray, b: np.ndarray, p: int, e: int) -> Optional[np.ndarray]:
    """Solve A x = b over Z/p^e by elimination with minimal-valuation pivots."""
    q = p ** e
    A = A.astype(object) % q if q > 2 ** 30 else A.astype(np.int64) % q
    b = b.astype(A.dtype) % q
    rows, cols = A.shape
    perm = list(range(cols))
    pivots: List[Tuple[int, int]] = []
    r = 0
    while r < rows and r < cols:
        sub = A[r:, r:]
        nz = np.argwhere(sub != 0)
        if len(nz) == 0:
            break
        best, bv = None, e + 1
        # minimal valuation pivot; scan power classes from low to high
        for v in range(e):
            mask = (sub % (p ** (v + 1)) != 0) & (sub != 0)
            hits = np.argwhere(mask)
            if len(hits):
                best, bv = hits[0], v
                break
        if best is None:
            break
        i, j = int(best[0]) + r, int(best[1]) + r
        if i != r:
            A[[r, i]] = A[[i, r]]
            b[[r, i]] = b[[i, r]]
        if j != r:
            A[:, [r, j]] = A[:, [j, r]]
            perm[r], perm[j] = perm[j], perm[r]
        piv = int(A[r, r])
        pv = p ** bv
        unit = piv // pv
        uinv = pow(unit, -1, q)
        col = A[r + 1:, r]
        factors = (col // pv) * uinv % q
        if np.any(factors):
            A[r + 1:] = (A[r + 1:] - np.outer(factors, A[r])) % q
            b[r + 1:] = (b[r + 1:] - factors * b[r]) % q
        pivots.append((bv, unit))
        r += 1
    rank = r
    if np.any(b[rank:] % q):
        return None
    x = [0] * cols
    for r in range(rank - 1, -1, -1):
        bv, unit = pivots[r]
        rhs = (int(b[r]) - sum(int(A[r, j]) * x[j] for j in range(r + 1, cols) if x[j])) % q
        pv = p ** bv
        if rhs % pv:
            return None
        x[r] = (rhs // pv) * pow(unit, -1, q) % (p ** (e - bv))
    out = [0] * cols
    for pos, var in enumerate(perm):
        out[var] = x[pos]
    return np.array(out, dtype=np.int64)


def solve_mod(A: np.ndarray, b: np.ndarray, m: int) -> Optional[np.ndarray]:
    """Solve A x = b over Z/m, combining prime-power solutions by CRT."""
    if m == 1:
        return np.zeros(A.shape[1], dtype=np.int64)
    x = np.zeros(A.shape[1], dtype=object)
    mod = 1
    for p, e in _factorize(m):
        q = p ** e
        sol = solve_mod_prime_power(A, b, p, e)
        if sol is None:
            return None
        # CRT combine x (mod mod) with sol (mod q)
        inv = pow(mod, -1, q)
        x = x + mod * (((sol.astype(object) - x) * inv) % q)
        mod *= q
    return np.array([int(v) % m for v in x], dtype=np.int64)


def coboundary_matrix(base: GradedGroup, degree: int, twisted: bool) -> Tuple[np.ndarray, List[Tuple[int, ...]], List[Tuple[int, ...]]]:
    """Matrix of d from normalized (degree-1)-cochains to degree-cochains, over Z."""
    n = base.order
    unknowns = list(itertools.product(range(1, n), repeat=degree - 1))
    eqs = list(itertools.product(range(1, n), repeat=degree))
    eq_index = np.array([np.ravel_multi_index(t, (n,) * degree) for t in eqs]) if degree else np.array([0])
    cols = []
    big = 1 << 20
    for u in unknowns:
        arr = np.zeros((n,) * (degree - 1), dtype=np.int64)
        arr[u] = 1
        d = differential(Cochain(base, degree - 1, big, twisted, values=arr)).array()
        col = d.reshape(-1)[eq_index]
        col = np.where(col > big // 2, col - big, col)
        cols.append(col)
    A = np.stack(cols, axis=1) if cols else np.zeros((len(eqs), 0), dtype=np.int64)
    return A, unknowns, eqs


def cohomologous(alpha: Cochain, beta: Cochain) -> Optional[Cochain]:
    """A cochain gamma with d(gamma) = beta - alpha, or None when none exists."""
    if alpha.modulus != beta.modulus:
        raise CochainError("modulus mismatch")
    if alpha.degree != beta.degree or alpha.twisted != beta.twisted:
        raise CochainError("degree or twist mismatch")
    if not (is_cocycle(alpha) and is_cocycle(beta)):
        raise CochainError("both inputs must be cocycles")
    base, deg, m = alpha.base, alpha.degree, alpha.modulus
    if deg == 0:
        return Cochain(base, 0, m, alpha.twisted) if alpha == beta else None
    A, unknowns, eqs = coboundary_matrix(base, deg, alpha.twisted)
    diff = (beta.array() - alpha.array()) % m
    b = np.array([diff[t] for t in eqs], dtype=np.int64)
    sol = solve_mod(A, b, m)
    if sol is None:
        return None
    arr = np.zeros((base.order,) * (deg - 1), dtype=np.int64)
    for u, v in zip(unknowns, sol):
        arr[u] = v
    gamma = Cochain(base, deg - 1, m, alpha.twisted, values=arr)
    if not product(alpha, differential(gamma)) == beta:
        raise CochainError("internal error: witness does not cobound")
    return gamma


# ---------------------------------------------------------------- JSON


def cochain_to_json(c: Cochain) -> dict:
    entries = []
    arr = c.array()
    for tup in zip(*np.nonzero(arr)):
        f = Fraction(int(arr[tup]), c.modulus)
        entries.append({"tuple": [int(x) for x in tup], "num": f.numerator, "den": f.denominator})
    return {"degree": c.degree, "modulus": c.modulus, "twisted": c.twisted, "entries": entries}


def cochain_from_json(data: dict, base) -> Cochain:
    base = _as_graded(base)
    try:
        deg, m = int(data["degree"]), int(data["modulus"])
        twisted = bool(data.get("twisted", False))
        arr = np.zeros((base.order,) * deg, dtype=np.int64)
        for e in data.get("entries", []):
            tup = tuple(int(x) for x in e["tuple"])
            f = Fraction(int(e["num"]), int(e["den"]))
            if (f * m).denominator != 1:
                raise CochainError("entry denominator does not divide the modulus")
            if len(tup) != deg:
                raise CochainError("entry tuple has the wrong length")
            arr[tup] = int(f * m) % m
    except (KeyError, TypeError) as exc:
        raise CochainError(f"malformed cocycle JSON: {exc}") from None
    c = Cochain(base, deg, m, twisted, values=arr)
    if not c.is_normalized():
        raise CochainError("cochain is not normalized")
    return c
