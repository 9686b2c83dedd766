"""Finite posets as finite T0 spaces.

Convention: open sets are down-sets.  The minimal open neighbourhood of a
point ``x`` is its down-set ``U_x``; continuous maps are exactly the
order-preserving ones.  Subsets are passed around as Python ``int`` bitmasks
in the hot paths and as sorted tuples at API boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import IndexOutOfRange, NotOpen, NotOrderPreserving, NotPartialOrder


def bits(mask: int):
    """Indices of the set bits of ``mask`` in increasing order."""
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def mask_of(points: Iterable[int]) -> int:
    m = 0
    for p in points:
        m |= 1 << p
    return m


@dataclass(frozen=True, eq=False)
class Poset:
    """``down[x]`` is the bitmask of ``{y : y <= x}``."""

    down: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.down)

    @property
    def points(self) -> range:
        return range(len(self.down))

    @cached_property
    def up(self) -> tuple[int, ...]:
        up = [0] * self.size
        for x in self.points:
            for y in bits(self.down[x]):
                up[y] |= 1 << x
        return tuple(up)

    @cached_property
    def comparable(self) -> tuple[int, ...]:
        return tuple(d | u for d, u in zip(self.down, self.up))

    def leq(self, x: int, y: int) -> bool:
        return bool(self.down[y] >> x & 1)

    def lt(self, x: int, y: int) -> bool:
        return x != y and self.leq(x, y)

    def relations(self) -> list[tuple[int, int]]:
        """All strict pairs ``(x, y)`` with ``x < y``, sorted."""
        return [(x, y) for y in self.points for x in bits(self.down[y]) if x != y]

    @cached_property
    def covers(self) -> tuple[tuple[int, int], ...]:
        """Hasse diagram edges ``(x, y)``: ``x < y`` with nothing in between."""
        out = []
        for y in self.points:
            below = self.down[y] & ~(1 << y)
            for x in bits(below):
                between = below & self.up[x] & ~(1 << x)
                if not between:
                    out.append((x, y))
        return tuple(sorted(out))

    @cached_property
    def linear_extension(self) -> tuple[int, ...]:
        """Points sorted so that ``x < y`` implies ``x`` comes first."""
        return tuple(sorted(self.points, key=lambda x: (bin(self.down[x]).count("1"), x)))

    def is_down_set(self, mask: int) -> bool:
        return all(self.down[x] & ~mask == 0 for x in bits(mask))

    def down_closure(self, mask: int) -> int:
        out = 0
        for x in bits(mask):
            out |= self.down[x]
        return out

    def up_closure(self, mask: int) -> int:
        out = 0
        for x in bits(mask):
            out |= self.up[x]
        return out

    def __eq__(self, other):
        return isinstance(other, Poset) and self.down == other.down

    def __hash__(self):
        return hash(self.down)

    def __repr__(self):
        return f"Poset(size={self.size}, relations={self.relations()})"


def poset_from_relations(n: int, relations: Iterable[Sequence[int]]) -> Poset:
    """Reflexive-transitive closure of ``relations`` (pairs ``i <= j``).

    Raises ``NotPartialOrder`` with a witness pair when the closure is not
    antisymmetric.
    """
    down = [1 << x for x in range(n)]
    for pair in relations:
        i, j = pair
        if not (0 <= i < n and 0 <= j < n):
            raise IndexOutOfRange(f"relation ({i},{j}) out of range for {n} points", (i, j))
        down[j] |= 1 << i
    # Warshall on bitmasks
    for k in range(n):
        bk = 1 << k
        dk = down[k]
        for j in range(n):
            if down[j] & bk:
                down[j] |= dk
    for x in range(n):
        for y in bits(down[x]):
            if y != x and down[y] >> x & 1:
                raise NotPartialOrder(f"{x} <= {y} and {y} <= {x}", (min(x, y), max(x, y)))
    return Poset(tuple(down))


def check_partial_order(n: int, leq_pairs: Iterable[Sequence[int]]) -> Poset:
    """Validate an explicit relation (not closed under anything).

    Reports the first failing axiom: reflexivity, antisymmetry, transitivity.
    """
    rel = set(map(tuple, leq_pairs))
    for x in range(n):
        if (x, x) not in rel:
            raise NotPartialOrder(f"not reflexive at {x}", (x,))
    for (x, y) in sorted(rel):
        if not (0 <= x < n and 0 <= y < n):
            raise IndexOutOfRange(f"relation ({x},{y}) out of range", (x, y))
        if x != y and (y, x) in rel:
            raise NotPartialOrder(f"not antisymmetric at ({x},{y})", (x, y))
    for (x, y) in sorted(rel):
        for (y2, z) in sorted(rel):
            if y == y2 and (x, z) not in rel:
                raise NotPartialOrder(f"not transitive at ({x},{y},{z})", (x, y, z))
    down = [0] * n
    for (x, y) in rel:
        down[y] |= 1 << x
    return Poset(tuple(down))


def discrete_poset(n: int) -> Poset:
    return Poset(tuple(1 << x for x in range(n)))


def chain_poset(n: int) -> Poset:
    return Poset(tuple((1 << (x + 1)) - 1 for x in range(n)))


def circle_poset(n: int) -> Poset:
    """The 2n-point circle: vertices ``0..n-1`` below edges ``n..2n-1``.

    Edge ``n+i`` lies above vertices ``i`` and ``(i+1) % n``.
    """
    rel = []
    for i in range(n):
        rel += [(i, n + i), ((i + 1) % n, n + i)]
    return poset_from_relations(2 * n, rel)


def cone_poset(n: int) -> Poset:
    """``circle_poset(n)`` plus an apex (index ``2n``) below everything."""
    rel = [(2 * n, x) for x in range(2 * n)]
    for i in range(n):
        rel += [(i, n + i), ((i + 1) % n, n + i)]
    return poset_from_relations(2 * n + 1, rel)


def subposet(poset: Poset, mask: int) -> tuple[Poset, tuple[int, ...]]:
    """Full subposet on ``mask``; returns it with the list of original indices."""
    pts = tuple(bits(mask))
    idx = {p: i for i, p in enumerate(pts)}
    down = tuple(mask_of(idx[y] for y in bits(poset.down[p] & mask)) for p in pts)
    return Poset(down), pts


def product_discrete(n_group: int, poset: Poset) -> Poset:
    """``G x P`` with the discrete order on the first factor; ``(g, x) -> g*|P| + x``."""
    m = poset.size
    down = []
    for g in range(n_group):
        for x in poset.points:
            down.append(poset.down[x] << (g * m))
    return Poset(tuple(down))


def disjoint_union(a: Poset, b: Poset) -> Poset:
    shift = a.size
    return Poset(a.down + tuple(d << shift for d in b.down))


def connected_components(poset: Poset, mask: int | None = None) -> list[tuple[int, ...]]:
    """Classes of the equivalence generated by comparability.

    In a finite space these are exactly the (path) connected components.
    Restricted to ``mask`` when given.  Sorted by least element.
    """
    if mask is None:
        mask = (1 << poset.size) - 1
    parent = list(poset.points)

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for y in bits(mask):
        for x in bits(poset.down[y] & mask):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)
    groups: dict[int, list[int]] = {}
    for x in bits(mask):
        groups.setdefault(find(x), []).append(x)
    return sorted((tuple(v) for v in groups.values()), key=lambda c: c[0])


def component_labels(poset: Poset) -> tuple[int, ...]:
    lab = [0] * poset.size
    for i, comp in enumerate(connected_components(poset)):
        for x in comp:
            lab[x] = i
    return tuple(lab)


def is_order_preserving(src: Poset, dst: Poset, f: Sequence[int]) -> tuple[int, int] | None:
    """First pair ``x <= y`` with ``f(x) </= f(y)``, or None."""
    for (x, y) in src.covers:
        if not dst.leq(f[x], f[y]):
            return (x, y)
    return None


def require_order_preserving(src: Poset, dst: Poset, f: Sequence[int]) -> None:
    if len(f) != src.size:
        raise IndexOutOfRange(f"map has {len(f)} values for {src.size} points", (len(f),))
    for x, v in enumerate(f):
        if not 0 <= v < dst.size:
            raise IndexOutOfRange(f"image of {x} out of range", (x,))
    bad = is_order_preserving(src, dst, f)
    if bad is not None:
        raise NotOrderPreserving(f"{bad[0]} <= {bad[1]} but images are not ordered", bad)


def open_failure(src: Poset, dst: Poset, f: Sequence[int]) -> tuple[int, int] | None:
    """Openness of ``f`` in finite spaces: ``f(U_x) = U_{f(x)}`` for all x.

    Returns ``(x, y)`` with ``y <= f(x)`` not hit from ``U_x``, or None.
    """
    for x in src.points:
        hit = 0
        for y in bits(src.down[x]):
            hit |= 1 << f[y]
        missing = dst.down[f[x]] & ~hit
        if missing:
            return (x, next(bits(missing)))
    return None


def require_open(src: Poset, dst: Poset, f: Sequence[int]) -> None:
    bad = open_failure(src, dst, f)
    if bad is not None:
        raise NotOpen(f"image of U_{bad[0]} misses {bad[1]}", bad)


def quotient_poset(poset: Poset, perms: Sequence[Sequence[int]]) -> tuple[Poset, tuple[int, ...], tuple[tuple[int, ...], ...]]:
    """Orbit space of ``poset`` under a group of automorphisms.

    ``perms`` lists the permutation of every group element.  Returns the
    quotient poset, the projection, and the classes.  Classes are numbered
    by their least point; ``[x] <= [y]`` iff some ``g x <= y``.
    """
    n = poset.size
    label = [-1] * n
    classes = []
    for x in range(n):
        if label[x] >= 0:
            continue
        orb = sorted({p[x] for p in perms})
        for y in orb:
            label[y] = len(classes)
        classes.append(tuple(orb))
    k = len(classes)
    down = [1 << c for c in range(k)]
    for c, orb in enumerate(classes):
        for x in orb:
            for y in bits(poset.down[x]):
                down[c] |= 1 << label[y]
    for c in range(k):
        for d in bits(down[c]):
            if d != c and down[d] >> c & 1:
                from .errors import AntisymmetryViolation
                raise AntisymmetryViolation(f"classes {d} and {c} are mutually below", (d, c))
    return Poset(tuple(down)), tuple(label), tuple(classes)


def down_sets(poset: Poset, limit: int | None = None) -> list[int] | None:
    """All down-sets as bitmasks, sorted by (size, mask).

    Returns None when there are more than ``limit``.
    """
    order = poset.linear_extension
    # a point may join once everything strictly below it has joined
    result = set()
    stack = [(0, 0)]
    while stack:
        mask, i = stack.pop()
        if i == len(order):
            result.add(mask)
            if limit is not None and len(result) > limit:
                return None
            continue
        x = order[i]
        stack.append((mask, i + 1))
        if poset.down[x] & ~(1 << x) & ~mask == 0:
            stack.append((mask | (1 << x), i + 1))
    return sorted(result, key=lambda m: (bin(m).count("1"), m))


def find_isomorphisms(a: Poset, b: Poset, first_only: bool = True):
    """Order isomorphisms ``a -> b`` by backtracking along a linear extension."""
    if a.size != b.size:
        return []
    prof_a = [(bin(a.down[x]).count("1"), bin(a.up[x]).count("1")) for x in a.points]
    prof_b = [(bin(b.down[x]).count("1"), bin(b.up[x]).count("1")) for x in b.points]
    if sorted(prof_a) != sorted(prof_b):
        return []
    order = a.linear_extension
    f = [-1] * a.size
    used = 0
    out = []

    def rec(i):
        nonlocal used
        if i == len(order):
            out.append(tuple(f))
            return first_only
        x = order[i]
        for y in b.points:
            if used >> y & 1 or prof_b[y] != prof_a[x]:
                continue
            ok = True
            for z in order[:i]:
                if a.leq(z, x) != b.leq(f[z], y) or a.leq(x, z) != b.leq(y, f[z]):
                    ok = False
                    break
            if not ok:
                continue
            f[x] = y
            used |= 1 << y
            if rec(i + 1):
                return True
            used &= ~(1 << y)
            f[x] = -1
        return False

    rec(0)
    return out
