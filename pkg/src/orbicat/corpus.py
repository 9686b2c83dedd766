"""Seeded random G-spaces, Morita moves and spans for tests and demos.

A random space is a disjoint union of coset spaces ``G/H`` (so every orbit
and isotropy type can occur) ordered by random invariant relations that
only run from earlier orbits to later ones, which keeps the closure acyclic.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .actions import GSpace, make_gspace
from .groups import (
    FiniteGroup,
    Homomorphism,
    cyclic_group,
    dihedral_group,
    direct_product,
    homomorphisms,
    injective_homomorphisms,
    left_cosets,
    quaternion_group,
    subgroups,
    trivial_group,
)
from .maps import EquivariantMap, check_equivariant, identity_map
from .morita import (
    GeneralizedMap,
    build_induction_equivalence,
    build_quotient_equivalence,
    free_quotient_subgroups,
    induced_map,
)
from .posets import poset_from_relations


def small_groups() -> list[FiniteGroup]:
    """One presentation of each group used by the corpus (order at most 8)."""
    z2, z4 = cyclic_group(2), cyclic_group(4)
    out = [trivial_group()] + [cyclic_group(n) for n in range(2, 9)]
    out += [direct_product(z2, z2), dihedral_group(3), dihedral_group(4), quaternion_group(),
            direct_product(z2, z4), direct_product(direct_product(z2, z2), z2)]
    return out


_GROUPS: list[FiniteGroup] | None = None


def _groups() -> list[FiniteGroup]:
    global _GROUPS
    if _GROUPS is None:
        _GROUPS = small_groups()
    return _GROUPS


def random_gspace(rng: random.Random, max_group: int = 8, max_points: int = 12,
                  group: FiniteGroup | None = None, free_bias: float = 0.4) -> GSpace:
    if group is None:
        group = rng.choice([g for g in _groups() if g.order <= max_group])
    subs = subgroups(group)
    orbits: list[list[frozenset[int]]] = []
    total = 0
    target = rng.randint(1, max_points)
    while total < target:
        fits = [h for h in subs if group.order // h.order + total <= max_points]
        if not fits:
            break
        if rng.random() < free_bias and fits[0].order == 1:
            h = fits[0]
        else:
            h = rng.choice(fits)
        cosets = left_cosets(group, h)
        orbits.append(cosets)
        total += len(cosets)
        if rng.random() < 0.3:
            break
    # point numbering: orbit by orbit, cosets in listed order
    index = {}
    pts = []
    for oi, cosets in enumerate(orbits):
        for c in cosets:
            index[(oi, c)] = len(pts)
            pts.append((oi, c))
    n = len(pts)

    def act(g, p):
        oi, c = p
        image = frozenset(group.mul(g, a) for a in c)
        return index[(oi, image)]

    rows = [tuple(act(g, p) for p in pts) for g in group.elements]
    rel = set()
    for _ in range(rng.randint(0, 2 * len(orbits))):
        if len(orbits) < 2:
            break
        i, j = sorted(rng.sample(range(len(orbits)), 2))
        a = index[(i, orbits[i][0])]
        b = index[(j, rng.choice(orbits[j]))]
        for g in group.elements:
            rel.add((rows[g][a], rows[g][b]))
    poset = poset_from_relations(n, sorted(rel))
    return make_gspace(poset, group, rows, f"rand{group.order}x{n}")


@dataclass(frozen=True, eq=False)
class Move:
    kind: str                  # "quotient" or "induction"
    map: EquivariantMap


def elementary_moves(space: GSpace, max_points: int = 24, max_group: int = 8) -> list[Move]:
    """All quotient moves and the induction moves into catalogue groups that fit."""
    out = []
    for sub in free_quotient_subgroups(space):
        f, _ = build_quotient_equivalence(space, sub)
        out.append(Move("quotient", f))
    K = space.group
    for G in _groups():
        if G.order <= K.order or G.order % K.order or G.order > max_group:
            continue
        if G.order // K.order * space.size > max_points:
            continue
        embs = injective_homomorphisms(K, G)
        if embs:
            f, _ = build_induction_equivalence(space, G, embs[0])
            out.append(Move("induction", f))
    return out


def random_equivalence(rng: random.Random, **kw) -> EquivariantMap | None:
    space = random_gspace(rng, **kw)
    moves = elementary_moves(space)
    return rng.choice(moves).map if moves else None


def equivalence_chain(rng: random.Random, length: int, **kw) -> list[EquivariantMap]:
    """Composable essential equivalences ``f_1, ..., f_length`` (fewer if stuck)."""
    space = random_gspace(rng, **kw)
    chain = []
    for _ in range(length):
        moves = elementary_moves(space, max_points=16)
        if not moves:
            break
        f = rng.choice(moves).map
        chain.append(f)
        space = f.target
    return chain


@dataclass(frozen=True, eq=False)
class SpanCase:
    span: GeneralizedMap
    construction: str      # "conjugate" or "independent"


def _left_leg(rng: random.Random, **kw) -> EquivariantMap:
    """An essential equivalence onto some ``G x Y``: identity or a quotient move."""
    for _ in range(20):
        space = random_gspace(rng, **kw)
        if rng.random() < 0.5:
            subs = free_quotient_subgroups(space)
            if subs:
                f, _ = build_quotient_equivalence(space, rng.choice(subs))
                return f
        else:
            return identity_map(space)
    return identity_map(space)


def random_span(rng: random.Random, construction: str | None = None, **kw) -> SpanCase:
    """A generalized map between two presentations over the same group ``G``.

    ``conjugate``: right leg ``gamma . eps`` with ``n = gamma m gamma^-1``.
    ``independent``: ``n`` drawn from all homomorphisms ``K -> G`` and the
    right leg ``z -> [e, z]`` into ``G x_n Z`` (or into a point).
    """
    from .morita import make_generalized_map
    left = _left_leg(rng, **kw)
    Z, Y = left.source, left.target
    K, G = Z.group, Y.group
    construction = construction or rng.choice(["conjugate", "independent"])
    if construction == "conjugate":
        gamma = rng.choice(list(G.elements))
        n = Homomorphism(K, G, tuple(G.conj(gamma, left.hom(k)) for k in K.elements))
        right = check_equivariant(n, [Y.action[gamma][y] for y in left.points], Z, Y)
    else:
        n = rng.choice(homomorphisms(K, G))
        if rng.random() < 0.5:
            f, X = induced_map(Z, G, n)
            right = check_equivariant(n, f.points, Z, X)
        else:
            pt = make_gspace(poset_from_relations(1, []), G, [(0,)] * G.order, "pt")
            right = check_equivariant(n, [0] * Z.size, Z, pt)
    return SpanCase(make_generalized_map(left, right), construction)


def corpus_spaces(seed: int, count: int, **kw) -> list[GSpace]:
    rng = random.Random(seed)
    return [random_gspace(rng, **kw) for _ in range(count)]
