"""Finite groups acting on finite posets by order automorphisms.

A ``GSpace`` doubles as its translation groupoid ``G x X``: objects are the
points and the arrows ``(g, x): x -> g x`` are derived on demand.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

from .errors import IndexOutOfRange, NotAction, NotOrderAutomorphism
from .groups import (
    FiniteGroup,
    Subgroup,
    cyclic_group,
    direct_product,
    subgroups,
    trivial_group,
    unpair,
)
from .posets import (
    Poset,
    bits,
    cone_poset,
    circle_poset,
    discrete_poset,
    mask_of,
    quotient_poset,
    subposet,
)


@dataclass(frozen=True, eq=False)
class GSpace:
    poset: Poset
    group: FiniteGroup
    action: tuple[tuple[int, ...], ...]   # action[g][x] = g.x
    name: str = field(default="", compare=False)

    @property
    def size(self) -> int:
        return self.poset.size

    @property
    def points(self) -> range:
        return self.poset.points

    def act(self, g: int, x: int) -> int:
        return self.action[g][x]

    def arrows(self):
        """Arrows of the translation groupoid as ``(g, source, target)``."""
        for g in self.group.elements:
            for x in self.points:
                yield g, x, self.action[g][x]

    def orbit(self, x: int) -> tuple[int, ...]:
        return tuple(sorted({row[x] for row in self.action}))

    def isotropy(self, x: int) -> Subgroup:
        return Subgroup(self.group, frozenset(g for g in self.group.elements if self.action[g][x] == x))

    @cached_property
    def orbit_label(self) -> tuple[int, ...]:
        return self.orbit_space.projection

    @cached_property
    def orbits(self) -> tuple[tuple[int, ...], ...]:
        return self.orbit_space.classes

    @cached_property
    def orbit_space(self) -> "OrbitSpace":
        return orbit_space(self)

    def translate_mask(self, g: int, mask: int) -> int:
        row = self.action[g]
        return mask_of(row[x] for x in bits(mask))

    def saturate(self, mask: int) -> int:
        """Smallest invariant set containing ``mask``."""
        out = 0
        for row in self.action:
            out |= mask_of(row[x] for x in bits(mask))
        return out

    def is_invariant(self, mask: int) -> bool:
        return all(self.translate_mask(g, mask) == mask for g in self.group.generators)

    def acts_freely(self, sub: Subgroup) -> tuple[int, int] | None:
        """First ``(x, l)`` with ``l != e`` in ``sub`` fixing ``x``, or None."""
        e = self.group.identity
        for x in self.points:
            for l in sub.sorted():
                if l != e and self.action[l][x] == x:
                    return (x, l)
        return None

    def __repr__(self):
        return f"GSpace({self.name or '?'}, |G|={self.group.order}, |X|={self.size})"


TranslationGroupoid = GSpace


def make_gspace(poset: Poset, group: FiniteGroup, action: Sequence[Sequence[int]], name: str = "") -> GSpace:
    """Validate an action table and build the G-space.

    Checks that every row is a permutation, that the identity acts trivially,
    that ``g.(h.x) = (gh).x`` and that each ``g`` is an order automorphism.
    """
    n = poset.size
    if len(action) != group.order:
        raise IndexOutOfRange(f"action has {len(action)} rows, group has {group.order} elements", (len(action),))
    rows = []
    for g, row in enumerate(action):
        row = tuple(row)
        if len(row) != n or sorted(row) != list(range(n)):
            raise NotAction(f"element {g} does not act by a permutation", (g,))
        rows.append(row)
    act = tuple(rows)
    if act[group.identity] != tuple(range(n)):
        x = next(x for x in range(n) if act[group.identity][x] != x)
        raise NotAction(f"identity moves point {x}", (group.identity, x))
    for g in group.elements:
        for h in group.elements:
            gh = act[group.mul(g, h)]
            for x in range(n):
                if act[g][act[h][x]] != gh[x]:
                    raise NotAction(f"{g}.({h}.{x}) != ({g}{h}).{x}", (g, h, x))
    for g in group.generators:
        row = act[g]
        for (x, y) in poset.covers:
            if not poset.leq(row[x], row[y]):
                raise NotOrderAutomorphism(f"element {g} breaks {x} <= {y}", (g, x, y))
    # an order-preserving bijection of a finite poset is an automorphism, and
    # the generators being automorphisms covers the whole group
    return GSpace(poset, group, act, name)


def action_from_generators(poset: Poset, group: FiniteGroup, images: Mapping[int, Sequence[int]], name: str = "") -> GSpace:
    """Extend permutations given on generating elements to the whole group."""
    n = poset.size
    gens = sorted(images)
    for g in gens:
        if not 0 <= g < group.order:
            raise IndexOutOfRange(f"generator {g} out of range", (g,))
        p = tuple(images[g])
        if len(p) != n or sorted(p) != list(range(n)):
            raise NotAction(f"image of {g} is not a permutation of {n} points", (g,))
    table = {group.identity: tuple(range(n))}
    frontier = [group.identity]
    while frontier:
        nxt = []
        for a in frontier:
            for s in gens:
                b = group.mul(a, s)
                p = tuple(table[a][images[s][x]] for x in range(n))
                if b in table:
                    if table[b] != p:
                        raise NotAction(f"generator images are inconsistent at element {b}", (b,))
                else:
                    table[b] = p
                    nxt.append(b)
        frontier = nxt
    if len(table) != group.order:
        missing = next(g for g in group.elements if g not in table)
        raise NotAction(f"generators do not generate the group (missing {missing})", (missing,))
    return make_gspace(poset, group, [table[g] for g in group.elements], name)


def trivial_action(poset: Poset, group: FiniteGroup | None = None, name: str = "") -> GSpace:
    group = group or trivial_group()
    ident = tuple(poset.points)
    return GSpace(poset, group, tuple(ident for _ in group.elements), name)


# --- standard models --------------------------------------------------------

def rotation_circle(n: int, group_order: int | None = None) -> GSpace:
    """``Z_k`` rotating the circle model ``C(n)``; ``k`` defaults to ``n``.

    The generator rotates by ``n // k`` steps.
    """
    k = group_order or n
    if n % k:
        raise NotAction(f"Z{k} cannot rotate C({n})", (k, n))
    step = n // k
    g = cyclic_group(k)
    rows = []
    for a in range(k):
        s = a * step
        rows.append(tuple((i + s) % n for i in range(n)) + tuple(n + (i + s) % n for i in range(n)))
    return GSpace(circle_poset(n), g, tuple(rows), f"Z{k}|C({n})")


def rotation_cone(p: int) -> GSpace:
    """``Z_p`` rotating the cone ``D(p)``; the apex (index ``2p``) is fixed."""
    g = cyclic_group(p)
    rows = []
    for a in range(p):
        rows.append(tuple((i + a) % p for i in range(p)) + tuple(p + (i + a) % p for i in range(p)) + (2 * p,))
    return GSpace(cone_poset(p), g, tuple(rows), f"Z{p}|D({p})")


def reflection_circle(n: int) -> GSpace:
    """``Z_2`` reflecting ``C(n)``: ``v_i -> v_{-i}``, ``e_i -> e_{-i-1}``."""
    g = cyclic_group(2)
    refl = tuple((-i) % n for i in range(n)) + tuple(n + (-i - 1) % n for i in range(n))
    return GSpace(circle_poset(n), g, (tuple(range(2 * n)), refl), f"Z2~C({n})")


def swap_pair() -> GSpace:
    """``Z_2`` exchanging two isolated points."""
    return GSpace(discrete_poset(2), cyclic_group(2), ((0, 1), (1, 0)), "Z2|{a,b}")


def half_turn_circle_v4() -> GSpace:
    """``Z2 x Z2`` on ``C(4)``: ``(a, b)`` rotates by ``2a`` steps, ``b`` acts trivially."""
    z2 = cyclic_group(2)
    v4 = direct_product(z2, z2)
    rows = []
    for x in v4.elements:
        a, _ = unpair(z2, x)
        s = 2 * a
        rows.append(tuple((i + s) % 4 for i in range(4)) + tuple(4 + (i + s) % 4 for i in range(4)))
    return GSpace(circle_poset(4), v4, tuple(rows), "V4|C(4)")


# --- invariants -------------------------------------------------------------

def orbit(space: GSpace, x: int) -> tuple[int, ...]:
    if not 0 <= x < space.size:
        raise IndexOutOfRange(f"point {x} out of range", (x,))
    return space.orbit(x)


def isotropy(space: GSpace, x: int) -> Subgroup:
    if not 0 <= x < space.size:
        raise IndexOutOfRange(f"point {x} out of range", (x,))
    return space.isotropy(x)


@dataclass(frozen=True)
class FixedSet:
    poset: Poset
    points: tuple[int, ...]   # original indices, sorted


def fixed_points(space: GSpace, sub: Subgroup) -> FixedSet:
    """The full subposet on points fixed by every element of ``sub``."""
    if sub.parent != space.group:
        raise IndexOutOfRange("subgroup of a different group", ())
    els = sub.sorted()
    mask = mask_of(x for x in space.points if all(space.action[h][x] == x for h in els))
    p, pts = subposet(space.poset, mask)
    return FixedSet(p, pts)


@dataclass(frozen=True)
class OrbitSpace:
    classes: tuple[tuple[int, ...], ...]
    poset: Poset
    projection: tuple[int, ...]


def orbit_space(space: GSpace) -> OrbitSpace:
    """Orbits with the quotient order ``[x] <= [y]`` iff ``g x <= y`` for some g."""
    q, proj, classes = quotient_poset(space.poset, space.action)
    return OrbitSpace(classes, q, proj)


def restrict_group(space: GSpace, sub: Subgroup) -> GSpace:
    from .groups import inclusion
    h, emb = inclusion(sub)
    return GSpace(space.poset, h, tuple(space.action[emb(a)] for a in h.elements), space.name)


def subspace(space: GSpace, mask: int) -> tuple[GSpace, tuple[int, ...]]:
    """Restriction to an invariant subset; returns the space and original indices."""
    if not space.is_invariant(mask):
        raise NotAction("subset is not invariant", tuple(bits(mask)))
    p, pts = subposet(space.poset, mask)
    idx = {x: i for i, x in enumerate(pts)}
    rows = tuple(tuple(idx[row[x]] for x in pts) for row in space.action)
    return GSpace(p, space.group, rows, space.name), pts


def disjoint_sum(a: GSpace, b: GSpace) -> GSpace:
    """Disjoint union of two spaces over the same group."""
    if a.group != b.group:
        raise NotAction("different groups", ())
    from .posets import disjoint_union
    shift = a.size
    rows = tuple(ra + tuple(shift + y for y in rb) for ra, rb in zip(a.action, b.action))
    return GSpace(disjoint_union(a.poset, b.poset), a.group, rows)


def all_subgroups(space: GSpace) -> list[Subgroup]:
    return subgroups(space.group)
