"""
Finite groups stored as multiplication tables, Z/2-gradings, Real
conjugation combinatorics, finite G-sets and graded wreath products.

Elements are dense integer indices and the identity is always index 0.
Subgroups keep the ordering of their parent, so class representatives
(the smallest index in an orbit) agree no matter which ambient group a
subgroup was carved out of.
"""

from __future__ import annotations

import hashlib
import itertools
import os
import re
from dataclasses import dataclass, field
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

DEFAULT_ORDER_BOUND = 10000


class GroupError(ValueError):
    pass


class OrderBoundExceeded(GroupError):
    pass


def order_bound() -> int:
    value = os.environ.get("QELLR_ORDER_BOUND")
    if value is None:
        return DEFAULT_ORDER_BOUND
    return int(value)


class FiniteGroup:
    """A finite group given by its multiplication table.

    ``labels`` optionally names the elements (permutations, tuples, pairs);
    ``embedding`` maps local indices to the indices of ``ambient`` when the
    group was built as a subgroup.
    """

    def __init__(self, table, labels: Optional[Sequence[Hashable]] = None,
                 check: bool = True, ambient: Optional["FiniteGroup"] = None,
                 embedding: Optional[Sequence[int]] = None, name: str = ""):
        arr = np.asarray(table, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise GroupError("multiplication table must be a non-empty square array")
        n = arr.shape[0]
        if arr.min() < 0 or arr.max() >= n:
            raise GroupError("table entries out of range")
        if not (np.array_equal(arr[0], np.arange(n)) and np.array_equal(arr[:, 0], np.arange(n))):
            raise GroupError("index 0 is not a two-sided identity")
        self.table = arr
        self.rows: List[List[int]] = arr.tolist()
        self.order = n
        self.labels = tuple(labels) if labels is not None else tuple(range(n))
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        self.ambient = ambient
        self.embedding = tuple(embedding) if embedding is not None else None
        self.name = name
        if check:
            self._check_axioms()
        inv = np.argmin(arr, axis=1)
        if not np.all(arr[np.arange(n), inv] == 0):
            raise GroupError("some element has no inverse")
        self.inverse: List[int] = inv.tolist()
        self._cache: Dict[Hashable, object] = {}

    def _check_axioms(self):
        arr = self.table
        n = self.order
        for row in arr:
            if len(set(row.tolist())) != n:
                raise GroupError("table is not a Latin square")
        if n <= 64:
            left = arr[arr]
            right = arr[np.arange(n)[:, None, None], arr[None, :, :]]
            ok = np.array_equal(left, right)
        else:
            rng = np.random.default_rng(0)
            a, b, c = rng.integers(0, n, size=(3, 20000))
            ok = np.array_equal(arr[arr[a, b], c], arr[a, arr[b, c]])
        if not ok:
            raise GroupError("multiplication table is not associative")

    def __repr__(self):
        return f"FiniteGroup(order={self.order}{', ' + self.name if self.name else ''})"

    @property
    def key(self) -> str:
        """Content hash used for caching derived data."""
        if "key" not in self._cache:
            h = hashlib.sha256(self.table.astype(np.int32).tobytes()).hexdigest()
            self._cache["key"] = h
        return self._cache["key"]

    def index(self, label: Hashable) -> int:
        return self._index[label]

    def mul(self, a: int, b: int) -> int:
        return self.rows[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def prod(self, *elements: int) -> int:
        out = 0
        for x in elements:
            out = self.rows[out][x]
        return out

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inverse[a], -k
        out = 0
        base = a
        while k:
            if k & 1:
                out = self.rows[out][base]
            base = self.rows[base][base]
            k >>= 1
        return out

    def conj(self, x: int, g: int) -> int:
        """x g x^-1"""
        return self.rows[self.rows[x][g]][self.inverse[x]]

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.rows[x][a]
            k += 1
        return k

    @property
    def exponent(self) -> int:
        if "exponent" not in self._cache:
            e = 1
            for a in range(self.order):
                e = np.lcm(e, self.element_order(a))
            self._cache["exponent"] = int(e)
        return self._cache["exponent"]

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def to_root(self, a: int) -> int:
        """Index of a in the outermost group this one was carved from."""
        grp, x = self, a
        while grp.embedding is not None:
            x = grp.embedding[x]
            grp = grp.ambient
        return x

    def root(self) -> "FiniteGroup":
        grp = self
        while grp.ambient is not None:
            grp = grp.ambient
        return grp

    def closure(self, generators: Iterable[int]) -> List[int]:
        seen = {0}
        frontier = [0]
        gens = [g for g in generators]
        while frontier:
            nxt = []
            for x in frontier:
                for s in gens:
                    y = self.rows[x][s]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(seen)

    def is_subgroup(self, elements: Iterable[int]) -> bool:
        s = set(elements)
        if 0 not in s:
            return False
        return all(self.rows[a][self.inverse[b]] in s for a in s for b in s)

    def subgroup(self, elements: Iterable[int], name: str = "") -> "FiniteGroup":
        elems = sorted(set(elements))
        if not elems or elems[0] != 0:
            raise GroupError("subgroup must contain the identity")
        local = {x: i for i, x in enumerate(elems)}
        try:
            table = [[local[self.rows[a][b]] for b in elems] for a in elems]
        except KeyError:
            raise GroupError("subset is not closed under multiplication") from None
        labels = [self.labels[x] for x in elems]
        return FiniteGroup(table, labels=labels, check=False, ambient=self,
                           embedding=elems, name=name)

    def centralizer_elements(self, g: int) -> List[int]:
        return [x for x in range(self.order) if self.rows[x][g] == self.rows[g][x]]

    def centralizer(self, g: int) -> "FiniteGroup":
        return self.subgroup(self.centralizer_elements(g))

    def conjugacy_classes(self) -> "ConjugacyClasses":
        if "classes" not in self._cache:
            n = self.order
            class_of = [-1] * n
            reps, members = [], []
            for g in range(n):
                if class_of[g] >= 0:
                    continue
                orbit = sorted({self.conj(x, g) for x in range(n)})
                for y in orbit:
                    class_of[y] = len(reps)
                reps.append(g)
                members.append(tuple(orbit))
            self._cache["classes"] = ConjugacyClasses(tuple(reps), tuple(class_of), tuple(members))
        return self._cache["classes"]


@dataclass(frozen=True)
class ConjugacyClasses:
    reps: Tuple[int, ...]
    class_of: Tuple[int, ...]
    members: Tuple[Tuple[int, ...], ...]

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(len(m) for m in self.members)

    def __len__(self):
        return len(self.reps)


class GradedGroup:
    """A finite group together with a homomorphism pi to {+1, -1}."""

    def __init__(self, group: FiniteGroup, pi: Sequence[int], check: bool = True, name: str = ""):
        if len(pi) != group.order:
            raise GroupError("grading has wrong length")
        self.group = group
        self.pi = tuple(int(p) for p in pi)
        self.name = name or group.name
        if check:
            if any(p not in (1, -1) for p in self.pi):
                raise GroupError("grading values must be +1 or -1")
            pa = np.array(self.pi)
            if not np.array_equal(pa[group.table], pa[:, None] * pa[None, :]):
                raise GroupError("grading is not a homomorphism")
        self.kernel_elements = tuple(x for x in range(group.order) if self.pi[x] == 1)
        self.odd_elements = tuple(x for x in range(group.order) if self.pi[x] == -1)
        self._cache: Dict[Hashable, object] = {}

    def __repr__(self):
        return f"GradedGroup(order={self.order}, kernel={len(self.kernel_elements)}{', ' + self.name if self.name else ''})"

    # delegation
    @property
    def order(self) -> int:
        return self.group.order

    @property
    def labels(self):
        return self.group.labels

    def mul(self, a, b):
        return self.group.rows[a][b]

    def inv(self, a):
        return self.group.inverse[a]

    def prod(self, *xs):
        return self.group.prod(*xs)

    def power(self, a, k):
        return self.group.power(a, k)

    def conj(self, x, g):
        return self.group.conj(x, g)

    @property
    def key(self) -> str:
        h = hashlib.sha256(self.group.key.encode() + bytes(str(self.pi), "ascii")).hexdigest()
        return h

    @property
    def is_graded(self) -> bool:
        """True when the grading is non-trivial."""
        return bool(self.odd_elements)

    @property
    def omega(self) -> int:
        """The fixed odd element: the smallest odd index."""
        if not self.odd_elements:
            raise GroupError("trivially graded group has no odd element")
        return self.odd_elements[0]

    def kernel(self) -> FiniteGroup:
        if "kernel" not in self._cache:
            self._cache["kernel"] = self.group.subgroup(self.kernel_elements)
        return self._cache["kernel"]

    def subgroup(self, elements: Iterable[int], name: str = "") -> "GradedGroup":
        sub = self.group.subgroup(elements, name=name)
        return GradedGroup(sub, [self.pi[x] for x in sub.embedding], check=False, name=name)

    def real_act(self, s: int, g: int) -> int:
        """Real conjugation s g^{pi(s)} s^-1."""
        rows, inv = self.group.rows, self.group.inverse
        x = g if self.pi[s] == 1 else inv[g]
        return rows[rows[s][x]][inv[s]]


def trivially_graded(group: FiniteGroup) -> GradedGroup:
    return GradedGroup(group, [1] * group.order, check=False, name=group.name)


# ---------------------------------------------------------------- construction

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_permutation(spec, degree: Optional[int] = None) -> Tuple[int, ...]:
    """Parse cycle notation like "(1 2 3)(4 5)" (1-based) or an image list (0-based)."""
    if isinstance(spec, (list, tuple)):
        images = tuple(int(x) for x in spec)
        if sorted(images) != list(range(len(images))):
            raise GroupError(f"not a permutation: {spec}")
        return images
    cycles = []
    for body in _CYCLE_RE.findall(str(spec)):
        pts = [int(tok) for tok in re.split(r"[ ,]+", body.strip()) if tok]
        cycles.append(pts)
    if not cycles and str(spec).strip() not in ("", "()", "e"):
        raise GroupError(f"cannot parse permutation {spec!r}")
    top = max([p for c in cycles for p in c], default=0)
    deg = max(top, degree or 0)
    images = list(range(deg))
    for c in cycles:
        if len(set(c)) != len(c) or min(c, default=1) < 1:
            raise GroupError(f"bad cycle {c}")
        for a, b in zip(c, c[1:] + c[:1]):
            images[a - 1] = b - 1
    return tuple(images)


def compose(a: Sequence[int], b: Sequence[int]) -> Tuple[int, ...]:
    """(a b)(p) = a(b(p))"""
    return tuple(a[x] for x in b)


def _closure_table(gens: List[Hashable], mul: Callable, identity: Hashable) -> Tuple[List, List[List[int]]]:
    bound = order_bound()
    elems = [identity]
    index = {identity: 0}
    i = 0
    while i < len(elems):
        x = elems[i]
        for s in gens:
            y = mul(x, s)
            if y not in index:
                index[y] = len(elems)
                elems.append(y)
                if len(elems) > bound:
                    raise OrderBoundExceeded(f"generated group exceeds the order bound {bound}")
        i += 1
    table = [[index[mul(a, b)] for b in elems] for a in elems]
    return elems, table


def build_group(spec) -> FiniteGroup:
    """Build a group from {"generators": [...]} (permutations) or {"table": [[...]]}."""
    if "table" in spec:
        table = [list(map(int, row)) for row in spec["table"]]
        n = len(table)
        if "order" in spec and int(spec["order"]) != n:
            raise GroupError("declared order does not match table size")
        if any(len(row) != n for row in table):
            raise GroupError("table is not square")
        ident = None
        for e in range(n):
            if table[e] == list(range(n)) and all(table[a][e] == a for a in range(n)):
                ident = e
                break
        if ident is None:
            raise GroupError("table has no identity element")
        order = [ident] + [x for x in range(n) if x != ident]
        pos = {x: i for i, x in enumerate(order)}
        new = [[pos[table[a][b]] for b in order] for a in order]
        return FiniteGroup(new, labels=order)
    gens = spec.get("generators")
    if gens is None:
        raise GroupError("group spec needs 'table' or 'generators'")
    perms = [parse_permutation(g) for g in gens]
    deg = max([len(p) for p in perms], default=0)
    perms = [p + tuple(range(len(p), deg)) for p in perms]
    identity = tuple(range(deg))
    elems, table = _closure_table(perms, compose, identity)
    return FiniteGroup(table, labels=elems, check=False)


def build_graded_group(spec) -> GradedGroup:
    """Graded variant of build_group: needs "pi" (per element) or "pi_of_generators"."""
    grp = build_group(spec)
    if "table" in spec:
        if "pi" not in spec:
            return trivially_graded(grp)
        pi_orig = [int(p) for p in spec["pi"]]
        return GradedGroup(grp, [pi_orig[lab] for lab in grp.labels])
    gen_pi = [int(p) for p in spec.get("pi_of_generators", [1] * len(spec["generators"]))]
    perms = [parse_permutation(g) for g in spec["generators"]]
    deg = len(grp.labels[0])
    perms = [p + tuple(range(len(p), deg)) for p in perms]
    # propagate the grading along a breadth-first spanning tree
    pi = [0] * grp.order
    pi[0] = 1
    gen_idx = [grp.index(p) for p in perms]
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for s, ps in zip(gen_idx, gen_pi):
                y = grp.mul(x, s)
                if pi[y] == 0:
                    pi[y] = pi[x] * ps
                    nxt.append(y)
        frontier = nxt
    if any(pi[s] != ps for s, ps in zip(gen_idx, gen_pi)):
        raise GroupError("pi_of_generators does not define a homomorphism")
    return GradedGroup(grp, pi)


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupError("n must be positive")
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    return FiniteGroup(table, labels=list(range(n)), check=False, name=f"Z{n}")


def graded_cyclic(n: int) -> GradedGroup:
    """Z_n graded by parity; needs n even."""
    if n % 2:
        raise GroupError("a non-trivial grading of Z_n needs n even")
    return GradedGroup(cyclic(n), [(-1) ** k for k in range(n)], name=f"Z{n}/parity")


def dihedral(n: int) -> GradedGroup:
    """D_{2n} = <r, s | r^n, s^2, srs = r^-1>, graded by pi(r)=+1, pi(s)=-1.

    Element r^k s^e has index e*n + k and label (k, e).
    """
    if n < 1:
        raise GroupError("n must be positive")
    labels = [(k, e) for e in range(2) for k in range(n)]

    def idx(k, e):
        return e * n + k % n

    table = [[idx(k1 + (-1) ** e1 * k2, (e1 + e2) % 2) for (k2, e2) in labels] for (k1, e1) in labels]
    grp = FiniteGroup(table, labels=labels, check=False, name=f"D{2 * n}")
    return GradedGroup(grp, [(-1) ** e for (_, e) in labels], check=False, name=f"D{2 * n}")


def symmetric(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupError("n must be positive")
    if n == 1:
        return FiniteGroup([[0]], labels=[(0,)], name="S1")
    gens = [tuple(list(range(1, n)) + [0]), tuple([1, 0] + list(range(2, n)))]
    elems, table = _closure_table(gens, compose, tuple(range(n)))
    order = sorted(range(len(elems)), key=lambda i: elems[i])
    pos = {x: i for i, x in enumerate(order)}
    new = [[pos[table[a][b]] for b in order] for a in order]
    return FiniteGroup(new, labels=[elems[i] for i in order], check=False, name=f"S{n}")


def permutation_sign(p: Sequence[int]) -> int:
    sign, seen = 1, [False] * len(p)
    for i in range(len(p)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = p[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


def symmetric_graded(n: int) -> GradedGroup:
    """Symmetric group graded by the sign character."""
    grp = symmetric(n)
    return GradedGroup(grp, [permutation_sign(p) for p in grp.labels], check=False, name=f"S{n}/sign")


def quaternion(order: int = 8) -> FiniteGroup:
    if order != 8:
        raise GroupError("only the quaternion group of order 8 is provided")
    # labels (sign, unit) with unit in 1,i,j,k encoded 0..3
    unit_mul = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }
    labels = [(s, u) for s in (1, -1) for u in range(4)]
    index = {lab: i for i, lab in enumerate(labels)}
    labels.sort(key=lambda lab: (lab[0] != 1, lab[1]))
    index = {lab: i for i, lab in enumerate(labels)}

    def mul(a, b):
        s, u = unit_mul[(a[1], b[1])]
        return (a[0] * b[0] * s, u)

    table = [[index[mul(a, b)] for b in labels] for a in labels]
    return FiniteGroup(table, labels=labels, check=False, name="Q8")


def direct_product(a: FiniteGroup, b: FiniteGroup) -> FiniteGroup:
    labels = [(x, y) for x in range(a.order) for y in range(b.order)]
    nb = b.order
    table = [[a.rows[x1][x2] * nb + b.rows[y1][y2] for (x2, y2) in labels] for (x1, y1) in labels]
    return FiniteGroup(table, labels=labels, check=False, name=f"{a.name}x{b.name}")


def graded_product(a: GradedGroup, b: GradedGroup) -> GradedGroup:
    """Direct product with grading pi(x, y) = pi(x) pi(y)."""
    grp = direct_product(a.group, b.group)
    pi = [a.pi[x] * b.pi[y] for (x, y) in grp.labels]
    return GradedGroup(grp, pi, check=False, name=grp.name)


def split_graded(group: FiniteGroup) -> GradedGroup:
    """G x Z_2 graded by the second factor."""
    z2 = GradedGroup(cyclic(2), [1, -1], check=False)
    return graded_product(trivially_graded(group), z2)


def rotation_semidirect(grp: GradedGroup, L: int) -> GradedGroup:
    """Z_L x|_pi grp: odd elements invert the cyclic factor.  Index j*|grp| + x."""
    n = grp.order
    T = grp.group.table
    pi = np.array(grp.pi, dtype=np.int64)
    idx = np.arange(L * n)
    J, X = idx // n, idx % n
    table = ((J.reshape(-1, 1) + pi[X].reshape(-1, 1) * J.reshape(1, -1)) % L) * n \
        + T[X.reshape(-1, 1), X.reshape(1, -1)]
    labels = [(j, grp.group.labels[x] if grp.group.labels else x) for j in range(L) for x in range(n)]
    return GradedGroup(FiniteGroup(table, labels=labels, check=False),
                       [grp.pi[x] for j in range(L) for x in range(n)], check=False)


def fiber_product(a: GradedGroup, b: GradedGroup) -> GradedGroup:
    """The fibre product over Z_2: pairs (x, y) with pi(x) = pi(y)."""
    full = graded_product(a, b)
    elems = [i for i, (x, y) in enumerate(full.group.labels) if a.pi[x] == b.pi[y]]
    sub = full.group.subgroup(elems)
    return GradedGroup(sub, [a.pi[x] for (x, _) in sub.labels], check=False,
                       name=f"{a.name}x_Z2{b.name}")


# ---------------------------------------------------------------- Real conjugation


def _require_kernel(grp: GradedGroup, g: int):
    if grp.pi[g] != 1:
        raise GroupError(f"element {g} is not in the kernel of the grading")


def real_conjugate(grp: GradedGroup, s: int, g: int) -> int:
    _require_kernel(grp, g)
    return grp.real_act(s, g)


def real_centralizer_elements(grp: GradedGroup, g: int) -> List[int]:
    return [s for s in range(grp.order) if grp.real_act(s, g) == g]


def real_centralizer(grp: GradedGroup, g: int) -> GradedGroup:
    _require_kernel(grp, g)
    key = ("CR", g)
    if key not in grp._cache:
        grp._cache[key] = grp.subgroup(real_centralizer_elements(grp, g))
    return grp._cache[key]


def real_centralizer_pair(grp: GradedGroup, g: int, h: int) -> GradedGroup:
    _require_kernel(grp, g)
    _require_kernel(grp, h)
    if grp.mul(g, h) != grp.mul(h, g):
        raise GroupError("pair does not commute")
    return grp.subgroup([s for s in range(grp.order)
                         if grp.real_act(s, g) == g and grp.real_act(s, h) == h])


@dataclass(frozen=True)
class RealClassData:
    """Real conjugacy classes of the kernel.

    ``classes`` are the representatives, ``sign[rep]`` is -1 when the class
    carries an odd stabilizing element, ``class_of`` maps kernel elements
    to their representative and ``members`` lists each orbit.
    """
    classes: Tuple[int, ...]
    sign: Dict[int, int]
    class_of: Dict[int, int]
    members: Dict[int, Tuple[int, ...]]
    conjugator: Dict[int, int] = field(default_factory=dict)

    def __len__(self):
        return len(self.classes)


def real_conjugacy_classes(grp: GradedGroup) -> RealClassData:
    if not grp.is_graded:
        raise GroupError("Real conjugacy classes need a non-trivial grading")
    if "real_classes" in grp._cache:
        return grp._cache["real_classes"]
    class_of: Dict[int, int] = {}
    conjugator: Dict[int, int] = {}
    classes, sign, members = [], {}, {}
    for g in grp.kernel_elements:
        if g in class_of:
            continue
        orbit = {}
        for s in range(grp.order):
            y = grp.real_act(s, g)
            if y not in orbit:
                orbit[y] = s
        for y, s in orbit.items():
            class_of[y] = g
            # conjugator c with real_act(c, y) = g, i.e. the inverse of s
            conjugator[y] = grp.inv(s)
        classes.append(g)
        members[g] = tuple(sorted(orbit))
        sign[g] = -1 if any(grp.real_act(s, g) == g for s in grp.odd_elements) else 1
    data = RealClassData(tuple(classes), sign, class_of, members, conjugator)
    grp._cache["real_classes"] = data
    return data


@dataclass(frozen=True)
class CommutingPairClassData:
    pairs: Tuple[Tuple[int, int], ...]
    sign: Dict[Tuple[int, int], int]
    class_of: Dict[Tuple[int, int], Tuple[int, int]]

    def __len__(self):
        return len(self.pairs)


def commuting_pair_classes(grp: GradedGroup) -> CommutingPairClassData:
    if not grp.is_graded:
        raise GroupError("Real conjugacy classes need a non-trivial grading")
    if "pair_classes" in grp._cache:
        return grp._cache["pair_classes"]
    class_of: Dict[Tuple[int, int], Tuple[int, int]] = {}
    pairs, sign = [], {}
    for g in grp.kernel_elements:
        for h in grp.kernel_elements:
            if (g, h) in class_of or grp.mul(g, h) != grp.mul(h, g):
                continue
            odd_fix = False
            for s in range(grp.order):
                img = (grp.real_act(s, g), grp.real_act(s, h))
                class_of[img] = (g, h)
                if img == (g, h) and grp.pi[s] == -1:
                    odd_fix = True
            pairs.append((g, h))
            sign[(g, h)] = -1 if odd_fix else 1
    data = CommutingPairClassData(tuple(pairs), sign, class_of)
    grp._cache["pair_classes"] = data
    return data


# ---------------------------------------------------------------- G-sets


class GSet:
    """A finite set with a right action: act[x][a] = x.a"""

    def __init__(self, group: GradedGroup, act: Sequence[Sequence[int]], check: bool = True,
                 labels: Optional[Sequence[Hashable]] = None):
        self.group = group
        self.act = [list(row) for row in act]
        self.size = len(self.act)
        self.labels = tuple(labels) if labels is not None else tuple(range(self.size))
        if check:
            rows = group.group.rows
            for x in range(self.size):
                if self.act[x][0] != x:
                    raise GroupError("identity does not act trivially")
                for a in range(group.order):
                    xa = self.act[x][a]
                    for b in range(group.order):
                        if self.act[xa][b] != self.act[x][rows[a][b]]:
                            raise GroupError("action is not a right action")

    def orbits(self, elements: Optional[Iterable[int]] = None,
               points: Optional[Iterable[int]] = None) -> List[List[int]]:
        elems = list(range(self.group.order)) if elements is None else list(elements)
        pts = sorted(range(self.size) if points is None else points)
        seen, out = set(), []
        for x in pts:
            if x in seen:
                continue
            orb = sorted({self.act[x][a] for a in elems})
            seen.update(orb)
            out.append(orb)
        return out

    def stabilizer(self, x: int, elements: Optional[Iterable[int]] = None) -> List[int]:
        elems = range(self.group.order) if elements is None else elements
        return [a for a in elems if self.act[x][a] == x]


def point_set(group: GradedGroup) -> GSet:
    return GSet(group, [[0] * group.order], check=False)


def coset_space(group: GradedGroup, subgroup_elements: Iterable[int]) -> GSet:
    """Right cosets H a with the action (H a).b = H ab."""
    sub = sorted(set(subgroup_elements))
    cosets: List[Tuple[int, ...]] = []
    index: Dict[int, int] = {}
    for a in range(group.order):
        if a in index:
            continue
        coset = tuple(sorted({group.mul(h, a) for h in sub}))
        for y in coset:
            index[y] = len(cosets)
        cosets.append(coset)
    act = [[index[group.mul(c[0], b)] for b in range(group.order)] for c in cosets]
    return GSet(group, act, check=False, labels=cosets)


def regular_set(group: GradedGroup) -> GSet:
    return GSet(group, [list(group.group.rows[x]) for x in range(group.order)], check=False)


def fixed_points(X: GSet, g: int) -> List[int]:
    return [x for x in range(X.size) if X.act[x][g] == x]


# ---------------------------------------------------------------- wreath products


def inclusion_map(sub: FiniteGroup, group: FiniteGroup) -> List[int]:
    """Indices in group of the elements of sub (sub carved from group by subgroup())."""
    images = list(range(sub.order))
    cur = sub
    while cur is not group:
        if cur.embedding is None:
            if cur.key == group.key:
                return images
            raise GroupError("not a subgroup of the given group")
        images = [cur.embedding[x] for x in images]
        cur = cur.ambient
    return images


def perm_inverse(p: Sequence[int]) -> Tuple[int, ...]:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def graded_wreath(grp: GradedGroup, N: int) -> GradedGroup:
    """Uniformly graded wreath product: pairs (g_1..g_N; sigma) with all pi(g_i) equal.

    Product (g; s)(h; t) = (g_i h_{s^-1(i)}; s t), permutations composed as
    functions and stored as image tuples on 0..N-1.  Labels are sorted
    lexicographically, so the identity comes first.
    """
    if N < 0:
        raise GroupError("N must be non-negative")
    if N == 0:
        grp0 = FiniteGroup([[0]], labels=[((), ())], check=False, name="trivial")
        return GradedGroup(grp0, [1], check=False, name="trivial")
    perms = list(itertools.permutations(range(N)))
    n_even = len(grp.kernel_elements) ** N
    n_odd = len(grp.odd_elements) ** N
    total = (n_even + n_odd) * len(perms)
    if total > order_bound():
        raise OrderBoundExceeded(f"wreath product of order {total} exceeds the order bound")
    labels = []
    for part in (grp.kernel_elements, grp.odd_elements):
        for gs in itertools.product(part, repeat=N):
            for p in perms:
                labels.append((gs, p))
    labels.sort()
    index = {lab: i for i, lab in enumerate(labels)}
    rows = grp.group.rows
    inv_perm = {p: perm_inverse(p) for p in perms}
    table = []
    for (gs, s) in labels:
        sinv = inv_perm[s]
        row = []
        for (hs, t) in labels:
            prod = tuple(rows[gs[i]][hs[sinv[i]]] for i in range(N))
            row.append(index[(prod, compose(s, t))])
        table.append(row)
    wgrp = FiniteGroup(table, labels=labels, check=False, name=f"{grp.name}wr{N}")
    pi = [grp.pi[gs[0]] for (gs, _) in labels]
    return GradedGroup(wgrp, pi, check=False, name=wgrp.name)


def cycles_of(p: Sequence[int]) -> List[Tuple[int, ...]]:
    """Cycles (i_1, i_2 = p(i_1), ...) with the minimal entry first, ordered by that entry."""
    seen, out = set(), []
    for i in range(len(p)):
        if i in seen:
            continue
        cyc = [i]
        seen.add(i)
        j = p[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = p[j]
        out.append(tuple(cyc))
    return out


# ---------------------------------------------------------------- homomorphisms


def is_homomorphism(src: FiniteGroup, dst: FiniteGroup, images: Sequence[int]) -> bool:
    if len(images) != src.order:
        return False
    return all(images[src.rows[a][b]] == dst.rows[images[a]][images[b]]
               for a in range(src.order) for b in range(src.order))


def quotient(group: FiniteGroup, normal: Iterable[int]) -> Tuple[FiniteGroup, List[int]]:
    """Quotient by a normal subgroup; returns the quotient and the projection."""
    nset = sorted(set(normal))
    proj = [-1] * group.order
    cosets: List[Tuple[int, ...]] = []
    for a in range(group.order):
        if proj[a] >= 0:
            continue
        coset = tuple(sorted({group.mul(a, x) for x in nset}))
        for y in coset:
            proj[y] = len(cosets)
        cosets.append(coset)
    table = [[proj[group.mul(c[0], d[0])] for d in cosets] for c in cosets]
    quo = FiniteGroup(table, labels=cosets, check=False)
    if not is_homomorphism(group, quo, proj):
        raise GroupError("subgroup is not normal")
    return quo, proj


def all_subgroups(group: FiniteGroup) -> List[Tuple[int, ...]]:
    """Every subgroup as a sorted tuple, obtained by repeatedly joining cyclic subgroups."""
    if "subgroups" in group._cache:
        return group._cache["subgroups"]
    cyclic_subs = {tuple(group.closure([g])) for g in range(group.order)}
    found = set(cyclic_subs)
    frontier = list(cyclic_subs)
    while frontier:
        nxt = []
        for sub in frontier:
            sset = set(sub)
            for g in range(group.order):
                if g in sset:
                    continue
                joined = tuple(group.closure(list(sub) + [g]))
                if joined not in found:
                    found.add(joined)
                    nxt.append(joined)
        frontier = nxt
    out = sorted(found, key=lambda s: (len(s), s))
    group._cache["subgroups"] = out
    return out


def subgroups_up_to_conjugacy(group: FiniteGroup) -> List[Tuple[int, ...]]:
    seen, out = set(), []
    for sub in all_subgroups(group):
        if sub in seen:
            continue
        out.append(sub)
        for x in range(group.order):
            seen.add(tuple(sorted(group.conj(x, h) for h in sub)))
    return out
