"""Finite groups as Cayley tables, subgroups and homomorphisms.

Elements are the integers ``0..order-1``.  Everything is immutable; derived
data (subgroup lattice, generators) is cached on first use.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .errors import (
    IndexOutOfRange,
    NoIdentity,
    NoInverse,
    NonAssociative,
    NotHomomorphism,
    NotInjective,
    NotSubgroup,
)


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    table: tuple[tuple[int, ...], ...]
    identity: int
    inverse: tuple[int, ...]
    name: str = field(default="", compare=False)

    @property
    def order(self) -> int:
        return len(self.table)

    @property
    def elements(self) -> range:
        return range(len(self.table))

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def prod(self, *elems: int) -> int:
        out = self.identity
        for a in elems:
            out = self.table[out][a]
        return out

    def conj(self, g: int, a: int) -> int:
        """``g a g^-1``."""
        return self.table[self.table[g][a]][self.inverse[g]]

    def power(self, a: int, n: int) -> int:
        if n < 0:
            a, n = self.inverse[a], -n
        out = self.identity
        for _ in range(n):
            out = self.table[out][a]
        return out

    def element_order(self, a: int) -> int:
        n, x = 1, a
        while x != self.identity:
            x = self.table[x][a]
            n += 1
        return n

    @cached_property
    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in self.elements for b in self.elements)

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """A small generating set, chosen greedily in element order."""
        gens: list[int] = []
        span = frozenset([self.identity])
        for a in self.elements:
            if a not in span:
                gens.append(a)
                span = generated_set(self, gens)
            if len(span) == self.order:
                break
        return tuple(gens)

    @cached_property
    def signature(self) -> tuple:
        """Isomorphism invariant: order, abelian flag, element-order multiset."""
        return (self.order, self.is_abelian,
                tuple(sorted(self.element_order(a) for a in self.elements)))

    def __eq__(self, other):
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self is other or (self.table == other.table and self.identity == other.identity)

    def __hash__(self):
        return hash((self.order, self.table[-1], self.identity))

    def __repr__(self):
        return f"FiniteGroup({self.name or '?'}, order={self.order})"


def validate_group(table: Sequence[Sequence[int]], name: str = "") -> FiniteGroup:
    """Check the group axioms on a Cayley table and return the group.

    Raises the error for the first violated axiom, checked in the order:
    shape/range, identity, inverses, associativity.
    """
    n = len(table)
    if n == 0:
        raise IndexOutOfRange("empty table", ())
    rows = []
    for i, row in enumerate(table):
        if len(row) != n:
            raise IndexOutOfRange(f"row {i} has length {len(row)}, expected {n}", (i,))
        for j, v in enumerate(row):
            if not isinstance(v, int) or not 0 <= v < n:
                raise IndexOutOfRange(f"table[{i}][{j}] = {v!r} out of range", (i, j))
        rows.append(tuple(row))
    t = tuple(rows)
    ident = next((e for e in range(n)
                  if all(t[e][a] == a and t[a][e] == a for a in range(n))), None)
    if ident is None:
        raise NoIdentity("no two-sided identity", ())
    inverse = []
    for a in range(n):
        b = next((b for b in range(n) if t[a][b] == ident and t[b][a] == ident), None)
        if b is None:
            raise NoInverse(f"element {a} has no inverse", (a,))
        inverse.append(b)
    for a, b, c in itertools.product(range(n), repeat=3):
        if t[t[a][b]][c] != t[a][t[b][c]]:
            raise NonAssociative(f"({a}*{b})*{c} != {a}*({b}*{c})", (a, b, c))
    return FiniteGroup(t, ident, tuple(inverse), name)


# --- constructors -----------------------------------------------------------

def trivial_group() -> FiniteGroup:
    return FiniteGroup(((0,),), 0, (0,), "1")


def cyclic_group(n: int) -> FiniteGroup:
    t = tuple(tuple((a + b) % n for b in range(n)) for a in range(n))
    return FiniteGroup(t, 0, tuple((-a) % n for a in range(n)), f"Z{n}")


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    """Element ``(a, b)`` is encoded as ``a * |h| + b``."""
    m = h.order
    n = g.order * m
    t = tuple(
        tuple(g.mul(x // m, y // m) * m + h.mul(x % m, y % m) for y in range(n))
        for x in range(n))
    inv = tuple(g.inv(x // m) * m + h.inv(x % m) for x in range(n))
    name = f"{g.name or '?'}x{h.name or '?'}"
    return FiniteGroup(t, g.identity * m + h.identity, inv, name)


def pair(h: FiniteGroup, a: int, b: int) -> int:
    """Encode ``(a, b)`` in ``direct_product(g, h)``."""
    return a * h.order + b


def unpair(h: FiniteGroup, x: int) -> tuple[int, int]:
    return divmod(x, h.order)


def permutation_group(generators: Sequence[Sequence[int]], name: str = "") -> tuple[FiniteGroup, tuple[tuple[int, ...], ...]]:
    """Close a set of permutations under composition.

    Returns the abstract group and the permutation of each element.  Element
    0 is the identity; the rest are numbered in breadth-first order over the
    generators, which makes the numbering deterministic.
    Composition convention: ``(a*b)(x) = a(b(x))``.
    """
    gens = [tuple(p) for p in generators]
    if gens:
        degree = len(gens[0])
        for p in gens:
            if len(p) != degree or sorted(p) != list(range(degree)):
                raise IndexOutOfRange(f"{list(p)} is not a permutation of 0..{degree - 1}", tuple(p))
    else:
        degree = 0
    ident = tuple(range(degree))
    perms = [ident]
    index = {ident: 0}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for s in gens:
                q = tuple(s[p[x]] for x in range(degree))
                if q not in index:
                    index[q] = len(perms)
                    perms.append(q)
                    nxt.append(q)
        frontier = nxt
    n = len(perms)
    t = tuple(tuple(index[tuple(perms[a][perms[b][x]] for x in range(degree))] for b in range(n))
              for a in range(n))
    inv = []
    for p in perms:
        q = [0] * degree
        for x, y in enumerate(p):
            q[y] = x
        inv.append(index[tuple(q)])
    return FiniteGroup(t, 0, tuple(inv), name), tuple(perms)


def dihedral_group(n: int) -> FiniteGroup:
    """Symmetries of an n-gon; element ``r^i s^j`` is ``2*i + j``."""
    def mul(a, b):
        i, j = divmod(a, 2)
        k, l = divmod(b, 2)
        i2 = (i + (k if j == 0 else -k)) % n
        return 2 * i2 + (j ^ l)
    t = tuple(tuple(mul(a, b) for b in range(2 * n)) for a in range(2 * n))
    inv = tuple(next(b for b in range(2 * n) if t[a][b] == 0) for a in range(2 * n))
    return FiniteGroup(t, 0, inv, f"D{n}")


def symmetric_group(n: int) -> FiniteGroup:
    perms = sorted(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    t = tuple(tuple(index[tuple(p[q[x]] for x in range(n))] for q in perms) for p in perms)
    inv = tuple(index[tuple(sorted(range(n), key=lambda x: p[x]))] for p in perms)
    return FiniteGroup(t, 0, inv, f"S{n}")


def quaternion_group() -> FiniteGroup:
    # elements +-1, +-i, +-j, +-k encoded as 2*unit + sign
    units = {(0, 0): (0, 0), (0, 1): (1, 0), (0, 2): (2, 0), (0, 3): (3, 0),
             (1, 0): (1, 0), (1, 1): (0, 1), (1, 2): (3, 0), (1, 3): (2, 1),
             (2, 0): (2, 0), (2, 1): (3, 1), (2, 2): (0, 1), (2, 3): (1, 0),
             (3, 0): (3, 0), (3, 1): (2, 0), (3, 2): (1, 1), (3, 3): (0, 1)}

    def mul(a, b):
        ua, sa = divmod(a, 2)
        ub, sb = divmod(b, 2)
        u, s = units[(ua, ub)]
        return 2 * u + (s ^ sa ^ sb)
    t = tuple(tuple(mul(a, b) for b in range(8)) for a in range(8))
    inv = tuple(next(b for b in range(8) if t[a][b] == 0) for a in range(8))
    return FiniteGroup(t, 0, inv, "Q8")


# --- subgroups --------------------------------------------------------------

def generated_set(group: FiniteGroup, gens) -> frozenset[int]:
    span = {group.identity}
    frontier = [group.identity]
    gens = list(gens)
    while frontier:
        nxt = []
        for a in frontier:
            for s in gens:
                b = group.mul(a, s)
                if b not in span:
                    span.add(b)
                    nxt.append(b)
        frontier = nxt
    return frozenset(span)


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup = field(repr=False)
    elements: frozenset[int]

    def __post_init__(self):
        g = self.parent
        els = self.elements
        if g.identity not in els:
            raise NotSubgroup("missing identity", (g.identity,))
        for a in sorted(els):
            if not 0 <= a < g.order:
                raise IndexOutOfRange(f"element {a} out of range", (a,))
            if g.inv(a) not in els:
                raise NotSubgroup(f"not closed under inverse at {a}", (a,))
            for b in sorted(els):
                if g.mul(a, b) not in els:
                    raise NotSubgroup(f"not closed: {a}*{b}", (a, b))

    @property
    def order(self) -> int:
        return len(self.elements)

    def sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.elements))

    def __contains__(self, a):
        return a in self.elements

    def __le__(self, other: "Subgroup") -> bool:
        return self.elements <= other.elements

    def is_normal(self) -> bool:
        g = self.parent
        return all(g.conj(x, a) in self.elements for x in g.elements for a in self.elements)

    def __repr__(self):
        return f"Subgroup({list(self.sorted())})"


def whole(group: FiniteGroup) -> Subgroup:
    return Subgroup(group, frozenset(group.elements))


def trivial_subgroup(group: FiniteGroup) -> Subgroup:
    return Subgroup(group, frozenset([group.identity]))


def subgroup_generated(group: FiniteGroup, gens) -> Subgroup:
    return Subgroup(group, generated_set(group, gens))


def _subgroup_key(h: Subgroup):
    return (h.order, h.sorted())


def subgroups(group: FiniteGroup) -> list[Subgroup]:
    """All subgroups, sorted by order then by sorted element tuple."""
    cache = group.__dict__.get("_subgroups")
    if cache is not None:
        return list(cache)
    cyclic = {generated_set(group, [a]) for a in group.elements}
    found = set(cyclic)
    frontier = set(cyclic)
    while frontier:
        nxt = set()
        for h in frontier:
            for c in cyclic:
                if c <= h:
                    continue
                j = generated_set(group, sorted(h | c))
                if j not in found:
                    found.add(j)
                    nxt.add(j)
        frontier = nxt
    result = sorted((Subgroup(group, s) for s in found), key=_subgroup_key)
    group.__dict__["_subgroups"] = tuple(result)
    return result


def normal_subgroups(group: FiniteGroup) -> list[Subgroup]:
    return [h for h in subgroups(group) if h.is_normal()]


def left_cosets(group: FiniteGroup, h: Subgroup) -> list[frozenset[int]]:
    """Cosets ``gH`` sorted by smallest element."""
    seen: set[int] = set()
    out = []
    for g in group.elements:
        if g in seen:
            continue
        c = frozenset(group.mul(g, a) for a in h.elements)
        seen |= c
        out.append(c)
    return out


# --- homomorphisms ----------------------------------------------------------

@dataclass(frozen=True)
class Homomorphism:
    source: FiniteGroup = field(repr=False)
    target: FiniteGroup = field(repr=False)
    images: tuple[int, ...]

    def __call__(self, a: int) -> int:
        return self.images[a]

    def kernel(self) -> Subgroup:
        e = self.target.identity
        return Subgroup(self.source, frozenset(a for a in self.source.elements if self.images[a] == e))

    def image(self) -> Subgroup:
        return Subgroup(self.target, frozenset(self.images))

    def is_injective(self) -> bool:
        return len(set(self.images)) == len(self.images)

    def then(self, other: "Homomorphism") -> "Homomorphism":
        """``other`` after ``self``."""
        return Homomorphism(self.source, other.target, tuple(other.images[a] for a in self.images))


def check_homomorphism(source: FiniteGroup, target: FiniteGroup, images: Sequence[int]) -> Homomorphism:
    images = tuple(images)
    if len(images) != source.order:
        raise IndexOutOfRange(f"expected {source.order} images, got {len(images)}", (len(images),))
    for a, v in enumerate(images):
        if not 0 <= v < target.order:
            raise IndexOutOfRange(f"image of {a} out of range", (a,))
    for a in source.elements:
        for b in source.elements:
            if images[source.mul(a, b)] != target.mul(images[a], images[b]):
                raise NotHomomorphism(f"m({a}*{b}) != m({a})*m({b})", (a, b))
    return Homomorphism(source, target, images)


def identity_hom(group: FiniteGroup) -> Homomorphism:
    return Homomorphism(group, group, tuple(group.elements))


def trivial_hom(source: FiniteGroup, target: FiniteGroup) -> Homomorphism:
    return Homomorphism(source, target, (target.identity,) * source.order)


def projection(g: FiniteGroup, h: FiniteGroup, which: int) -> Homomorphism:
    """Coordinate projection out of ``direct_product(g, h)``."""
    prod = direct_product(g, h)
    tgt = g if which == 0 else h
    return Homomorphism(prod, tgt, tuple(unpair(h, x)[which] for x in prod.elements))


def _extend(source: FiniteGroup, target: FiniteGroup, gens, imgs) -> tuple[int, ...] | None:
    """Extend generator images to a homomorphism, or None if inconsistent."""
    images = {source.identity: target.identity}
    frontier = [source.identity]
    while frontier:
        nxt = []
        for a in frontier:
            for s, t in zip(gens, imgs):
                b = source.mul(a, s)
                v = target.mul(images[a], t)
                if b in images:
                    if images[b] != v:
                        return None
                else:
                    images[b] = v
                    nxt.append(b)
        frontier = nxt
    out = tuple(images[a] for a in source.elements)
    for a in source.elements:
        for s, t in zip(gens, imgs):
            if out[source.mul(a, s)] != target.mul(out[a], t):
                return None
    return out


def homomorphisms(source: FiniteGroup, target: FiniteGroup) -> list[Homomorphism]:
    """All homomorphisms, in lexicographic order of generator images."""
    gens = source.generators
    cands = [[t for t in target.elements
              if source.element_order(s) % target.element_order(t) == 0] for s in gens]
    out = []
    seen = set()
    for imgs in itertools.product(*cands):
        ext = _extend(source, target, gens, imgs)
        if ext is not None and ext not in seen:
            seen.add(ext)
            out.append(Homomorphism(source, target, ext))
    return out


def isomorphisms(source: FiniteGroup, target: FiniteGroup) -> list[Homomorphism]:
    if source.signature != target.signature:
        return []
    gens = source.generators
    cands = [[t for t in target.elements if target.element_order(t) == source.element_order(s)]
             for s in gens]
    out = []
    for imgs in itertools.product(*cands):
        ext = _extend(source, target, gens, imgs)
        if ext is not None and len(set(ext)) == source.order:
            out.append(Homomorphism(source, target, ext))
    return out


def injective_homomorphisms(source: FiniteGroup, target: FiniteGroup) -> list[Homomorphism]:
    return [f for f in homomorphisms(source, target) if f.is_injective()]


def inclusion(h: Subgroup) -> tuple[FiniteGroup, Homomorphism]:
    """Realise a subgroup as an abstract group with its embedding."""
    els = h.sorted()
    idx = {a: i for i, a in enumerate(els)}
    g = h.parent
    t = tuple(tuple(idx[g.mul(a, b)] for b in els) for a in els)
    inv = tuple(idx[g.inv(a)] for a in els)
    sub = FiniteGroup(t, idx[g.identity], inv, f"<{','.join(map(str, els))}>")
    return sub, Homomorphism(sub, g, els)


def quotient_group(group: FiniteGroup, normal: Subgroup) -> tuple[FiniteGroup, Homomorphism]:
    """``G/N`` with the canonical projection; cosets numbered by least element."""
    if not normal.is_normal():
        from .errors import NotNormal
        raise NotNormal("subgroup is not normal", normal.sorted())
    cosets = left_cosets(group, normal)
    which = {}
    for i, c in enumerate(cosets):
        for a in c:
            which[a] = i
    reps = [min(c) for c in cosets]
    t = tuple(tuple(which[group.mul(a, b)] for b in reps) for a in reps)
    inv = tuple(which[group.inv(a)] for a in reps)
    q = FiniteGroup(t, which[group.identity], inv, f"{group.name or '?'}/{len(normal.elements)}")
    return q, Homomorphism(group, q, tuple(which[a] for a in group.elements))


def require_injective(f: Homomorphism) -> None:
    if not f.is_injective():
        seen = {}
        for a, v in enumerate(f.images):
            if v in seen:
                raise NotInjective(f"{seen[v]} and {a} have the same image", (seen[v], a))
            seen[v] = a
