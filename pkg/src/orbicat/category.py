"""Equivariant Lusternik-Schnirelmann category of finite G-spaces.

G-homotopy is modelled by fences in the pointwise order on G-maps
``U -> X``.  Two pointwise comparable G-maps are joined by a chain of
comparable maps that differ on a single orbit each (change the values on a
maximal orbit where they disagree first), so a search over single-orbit
moves explores exactly the homotopy class.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass

from .actions import GSpace
from .errors import BudgetExceeded
from .morita import build_quotient_equivalence, free_quotient_subgroups
from .posets import bits, down_sets, mask_of

DEFAULT_STATE_BUDGET = int(os.environ.get("ORBICAT_HOMOTOPY_BUDGET", "200000"))
DEFAULT_OPEN_BUDGET = 4096


@dataclass(frozen=True)
class InvariantOpen:
    points: tuple[int, ...]

    @property
    def mask(self) -> int:
        return mask_of(self.points)


@dataclass(frozen=True)
class CompressionWitness:
    domain: tuple[int, ...]                 # points of U
    chain: tuple[tuple[int, ...], ...]      # values on ``domain``; first is the inclusion
    orbit: int                              # orbit index of the final image


@dataclass(frozen=True)
class CategoryResult:
    value: int | None                       # None means infinite
    cover: tuple[InvariantOpen, ...]
    witnesses: tuple[CompressionWitness, ...]
    method: str = "direct"
    exact: bool = True
    reductions: tuple[str, ...] = ()

    @property
    def infinite(self) -> bool:
        return self.value is None

    def __str__(self):
        return "infinite" if self.value is None else str(self.value)


INFINITE = None


# --- invariant opens --------------------------------------------------------

def invariant_opens(space: GSpace, limit: int = DEFAULT_OPEN_BUDGET) -> tuple[list[int], bool]:
    """Invariant down-sets as masks, and whether the list is complete.

    They are the preimages of the down-sets of the orbit space.  Past
    ``limit`` only the minimal invariant opens and the whole space are
    returned.
    """
    osp = space.orbit_space
    ds = down_sets(osp.poset, limit)
    lift = lambda cm: mask_of(x for c in bits(cm) for x in osp.classes[c])
    if ds is not None:
        return [lift(m) for m in ds], True
    fam = {lift(osp.poset.down[c]) for c in range(len(osp.classes))}
    fam.add((1 << space.size) - 1)
    return sorted(fam, key=lambda m: (bin(m).count("1"), m)), False


# --- G-maps and homotopy ----------------------------------------------------

class _Domain:
    """Precomputed data for G-maps out of an invariant subset ``U``."""

    def __init__(self, space: GSpace, mask: int):
        self.space = space
        self.pts = tuple(bits(mask))
        self.pos = {x: i for i, x in enumerate(self.pts)}
        seen = set()
        self.orbits = []   # (rep index, [(member index, g with g.rep = member)], isotropy elements)
        for x in self.pts:
            if x in seen:
                continue
            members = {}
            for g in space.group.elements:
                y = space.action[g][x]
                if y not in members:
                    members[y] = g
            seen.update(members)
            iso = tuple(g for g in space.group.elements if space.action[g][x] == x)
            self.orbits.append((self.pos[x], [(self.pos[y], g) for y, g in sorted(members.items())], iso))
        P = space.poset
        # for every member: indices of U-points strictly below / above
        self.below = [tuple(self.pos[y] for y in bits(P.down[x] & mask) if y != x) for x in self.pts]
        self.above = [tuple(self.pos[y] for y in bits(P.up[x] & mask) if y != x) for x in self.pts]
        # candidate values for an orbit rep: points fixed by its isotropy
        self.allowed = []
        for (r, _, iso) in self.orbits:
            self.allowed.append(frozenset(p for p in space.points if all(space.action[g][p] == p for g in iso)))

    def inclusion(self) -> tuple[int, ...]:
        return self.pts

    def moves(self, f: tuple[int, ...]):
        sp = self.space
        P = sp.poset
        for oi, (r, members, iso) in enumerate(self.orbits):
            cur = f[r]
            mem_set = {i for i, _ in members}
            for p in bits(P.comparable[cur]):
                if p == cur or p not in self.allowed[oi]:
                    continue
                new = list(f)
                for i, g in members:
                    new[i] = sp.action[g][p]
                ok = True
                for i, _ in members:
                    v = new[i]
                    for j in self.below[i]:
                        if j not in mem_set and not P.leq(new[j], v):
                            ok = False
                            break
                    if not ok:
                        break
                    for j in self.above[i]:
                        if j not in mem_set and not P.leq(v, new[j]):
                            ok = False
                            break
                    if not ok:
                        break
                if ok:
                    yield tuple(new)


def _chain(parent, f):
    out = [f]
    while parent[f] is not None:
        f = parent[f]
        out.append(f)
    out.reverse()
    return tuple(out)


def _shorten(P, chain):
    """Skip ahead to the furthest map comparable with the current one."""
    def comparable(a, b):
        return all(P.leq(x, y) for x, y in zip(a, b)) or all(P.leq(y, x) for x, y in zip(a, b))
    out = [chain[0]]
    i = 0
    while i < len(chain) - 1:
        j = next(j for j in range(len(chain) - 1, i, -1) if comparable(chain[i], chain[j]))
        out.append(chain[j])
        i = j
    return tuple(out)


def _search(dom: _Domain, start, goal, budget: int):
    """BFS from ``start``; ``goal(f)`` decides success.  Returns (chain or None, exhausted)."""
    parent = {start: None}
    if goal(start):
        return _chain(parent, start), True
    queue = deque([start])
    while queue:
        f = queue.popleft()
        for g in dom.moves(f):
            if g in parent:
                continue
            parent[g] = f
            if goal(g):
                return _chain(parent, g), True
            if len(parent) > budget:
                return None, False
            queue.append(g)
    return None, True


def is_G_map(space: GSpace, domain: tuple[int, ...], values: tuple[int, ...]) -> bool:
    pos = {x: i for i, x in enumerate(domain)}
    for g in space.group.generators:
        for x, v in zip(domain, values):
            if values[pos[space.action[g][x]]] != space.action[g][v]:
                return False
    P = space.poset
    for i, x in enumerate(domain):
        for j, y in enumerate(domain):
            if P.leq(x, y) and not P.leq(values[i], values[j]):
                return False
    return True


def are_G_homotopic(space: GSpace, domain: tuple[int, ...], f: tuple[int, ...], g: tuple[int, ...],
                    budget: int = DEFAULT_STATE_BUDGET) -> tuple[tuple[int, ...], ...] | None:
    """A fence of G-maps ``domain -> X`` from ``f`` to ``g``, or None when absent.

    Raises BudgetExceeded if the search stops before exhausting the class.
    """
    dom = _Domain(space, mask_of(domain))
    f, g = tuple(f), tuple(g)
    chain, exhausted = _search(dom, f, lambda h: h == g, budget)
    if chain is None and not exhausted:
        raise BudgetExceeded(f"more than {budget} maps explored", (budget,))
    return None if chain is None else _shorten(space.poset, chain)


def is_G_categorical(space: GSpace, mask: int, budget: int = DEFAULT_STATE_BUDGET) -> CompressionWitness | None:
    """Compress the invariant open ``mask`` into a single orbit, or None."""
    dom = _Domain(space, mask)
    if not dom.pts:
        return CompressionWitness((), ((),), -1)
    label = space.orbit_label
    goal = lambda f: len({label[v] for v in f}) == 1
    chain, exhausted = _search(dom, dom.inclusion(), goal, budget)
    if chain is None:
        if not exhausted:
            raise BudgetExceeded(f"more than {budget} maps explored", (budget,))
        return None
    chain = _shorten(space.poset, chain)
    return CompressionWitness(dom.pts, chain, label[chain[-1][0]])


def check_compression_witness(space: GSpace, w: CompressionWitness) -> None:
    from .errors import NotEquivariant
    if w.chain[0] != w.domain:
        raise NotEquivariant("chain does not start at the inclusion", ())
    P = space.poset
    for a, b in zip(w.chain, w.chain[1:]):
        le = all(P.leq(x, y) for x, y in zip(a, b))
        ge = all(P.leq(y, x) for x, y in zip(a, b))
        if not (le or ge):
            raise NotEquivariant("consecutive maps are not comparable", (a, b))
    for f in w.chain:
        if not is_G_map(space, w.domain, f):
            raise NotEquivariant("chain contains a map that is not a G-map", (f,))
    if w.domain and len({space.orbit_label[v] for v in w.chain[-1]}) != 1:
        raise NotEquivariant("final map does not land in one orbit", ())


# --- category ---------------------------------------------------------------

def _min_cover(universe: int, sets: list[int]) -> list[int] | None:
    """Exact minimum set cover by branch and bound; ties broken lexicographically."""
    best: list[list[int] | None] = [None]
    order = sorted(range(len(sets)), key=lambda i: (-bin(sets[i]).count("1"), sets[i]))

    def rec(covered, chosen):
        if covered == universe:
            if best[0] is None or len(chosen) < len(best[0]):
                best[0] = list(chosen)
            return
        if best[0] is not None and len(chosen) + 1 >= len(best[0]):
            return
        # branch on the lowest uncovered point
        x = (universe & ~covered & -(universe & ~covered)).bit_length() - 1
        for i in order:
            if sets[i] >> x & 1:
                chosen.append(i)
                rec(covered | sets[i], chosen)
                chosen.pop()

    rec(0, [])
    return best[0]


def cat_G(space: GSpace, budget: int = DEFAULT_STATE_BUDGET, open_limit: int = DEFAULT_OPEN_BUDGET) -> CategoryResult:
    """Least number of G-categorical invariant opens covering ``X``.

    Categorical opens form a down-closed family, so only the maximal ones
    are kept for the cover search.
    """
    if space.size == 0:
        return CategoryResult(0, (), ())
    opens, exact = invariant_opens(space, open_limit)
    osp = space.orbit_space
    # minimal invariant opens decide finiteness
    for c in range(len(osp.classes)):
        m = mask_of(x for d in bits(osp.poset.down[c]) for x in osp.classes[d])
        if is_G_categorical(space, m, budget) is None:
            return CategoryResult(None, (), (), exact=True)
    status: dict[int, CompressionWitness | None] = {}
    opens_set = set(opens)
    for m in opens:       # increasing size
        if m == 0:
            continue
        # every invariant open one orbit smaller must be categorical
        sub_ok = True
        for orb in osp.classes:
            om = mask_of(orb)
            if m & om == om:
                smaller = m & ~om
                if smaller and smaller in opens_set and status.get(smaller, True) is None:
                    sub_ok = False
                    break
        status[m] = is_G_categorical(space, m, budget) if sub_ok else None
    cats = [m for m, w in status.items() if w is not None]
    maximal = [m for m in cats if not any(o != m and o & m == m for o in cats)]
    maximal.sort(key=lambda m: (-bin(m).count("1"), m))
    universe = (1 << space.size) - 1
    chosen = _min_cover(universe, maximal)
    if chosen is None:
        return CategoryResult(None, (), (), exact=exact)
    cover = sorted((maximal[i] for i in chosen), key=lambda m: (-bin(m).count("1"), m))
    return CategoryResult(len(cover), tuple(InvariantOpen(tuple(bits(m))) for m in cover),
                          tuple(status[m] for m in cover), "direct", exact)


def morita_reduce(space: GSpace) -> tuple[GSpace, tuple[str, ...]]:
    """Quotient by a largest free normal covering subgroup until none is left."""
    steps = []
    while True:
        subs = free_quotient_subgroups(space)
        if not subs:
            return space, tuple(steps)
        sub = max(subs, key=lambda s: (s.order, tuple(-x for x in s.sorted())))
        _, space = build_quotient_equivalence(space, sub)
        steps.append(f"quotient by {list(sub.sorted())}")


def cat_grd(space: GSpace, budget: int = DEFAULT_STATE_BUDGET, open_limit: int = DEFAULT_OPEN_BUDGET) -> CategoryResult:
    """Groupoid category, computed as ``cat_G`` of a Morita-reduced presentation."""
    reduced, steps = morita_reduce(space)
    r = cat_G(reduced, budget, open_limit)
    return CategoryResult(r.value, r.cover, r.witnesses, "morita-reduced", r.exact, steps)


def cat_orb(space: GSpace, budget: int = DEFAULT_STATE_BUDGET, open_limit: int = DEFAULT_OPEN_BUDGET) -> CategoryResult:
    """Orbifold category of the Morita class presented by ``space``."""
    return cat_grd(space, budget, open_limit)
