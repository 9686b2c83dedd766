"""Equivariant maps between translation groupoids and natural transformations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .actions import GSpace
from .errors import (
    ArrowMismatch,
    IndexOutOfRange,
    NaturalityFailure,
    NotEquivariant,
    NotLocallyConstant,
)
from .groups import Homomorphism, check_homomorphism, identity_hom
from .posets import require_order_preserving


@dataclass(frozen=True, eq=False)
class EquivariantMap:
    """``m x eps : K x Z -> G x X``: a homomorphism plus an equivariant point map."""

    source: GSpace = field(repr=False)
    target: GSpace = field(repr=False)
    hom: Homomorphism = field(repr=False)
    points: tuple[int, ...]

    def __call__(self, z: int) -> int:
        return self.points[z]

    @property
    def images(self) -> tuple[int, ...]:
        return self.hom.images

    def then(self, other: "EquivariantMap") -> "EquivariantMap":
        """``other`` after ``self``."""
        return compose(self, other)

    def same_as(self, other: "EquivariantMap") -> bool:
        return self.points == other.points and self.hom.images == other.hom.images


def check_equivariant(hom, eps: Sequence[int], src: GSpace, dst: GSpace) -> EquivariantMap:
    """Validate ``hom x eps`` as a map ``src -> dst``.

    ``hom`` may be a ``Homomorphism`` or a plain list of images.  Checks, in
    order: homomorphism, continuity (order preservation), equivariance.
    """
    images = hom.images if isinstance(hom, Homomorphism) else tuple(hom)
    m = check_homomorphism(src.group, dst.group, images)
    eps = tuple(eps)
    require_order_preserving(src.poset, dst.poset, eps)
    for k in src.group.elements:
        row_s = src.action[k]
        row_t = dst.action[m.images[k]]
        for z in src.points:
            if eps[row_s[z]] != row_t[eps[z]]:
                raise NotEquivariant(f"eps({k}.{z}) != m({k}).eps({z})", (k, z))
    return EquivariantMap(src, dst, m, eps)


def identity_map(space: GSpace) -> EquivariantMap:
    return EquivariantMap(space, space, identity_hom(space.group), tuple(space.points))


def compose(f: EquivariantMap, g: EquivariantMap) -> EquivariantMap:
    """``g o f``; requires ``f.target`` to be ``g.source``."""
    if f.target is not g.source and (f.target.poset != g.source.poset or f.target.action != g.source.action):
        raise IndexOutOfRange("maps are not composable", ())
    return EquivariantMap(f.source, g.target, f.hom.then(g.hom), tuple(g.points[x] for x in f.points))


@dataclass(frozen=True, eq=False)
class NaturalTransformation:
    """``lam(z)`` is an arrow ``phi(z) -> psi(z)``: ``lam(z) . phi(z) = psi(z)``."""

    source_map: EquivariantMap = field(repr=False)
    target_map: EquivariantMap = field(repr=False)
    values: tuple[int, ...]

    def __call__(self, z: int) -> int:
        return self.values[z]


def check_natural_transformation(lam: Sequence[int], phi: EquivariantMap, psi: EquivariantMap) -> NaturalTransformation:
    """Validate ``lam: phi => psi``.

    Checks the arrow condition, naturality ``n(k) lam(z) = lam(k z) m(k)``
    where ``m``, ``n`` are the homomorphisms of ``phi``, ``psi``, and local
    constancy (continuity into a discrete group).
    """
    lam = tuple(lam)
    Z = phi.source
    G = phi.target.group
    X = phi.target
    if len(lam) != Z.size or any(not 0 <= v < G.order for v in lam):
        raise IndexOutOfRange("transformation values out of range", ())
    for z in Z.points:
        if X.action[lam[z]][phi.points[z]] != psi.points[z]:
            raise ArrowMismatch(f"lam({z}).phi({z}) != psi({z})", (z,))
    m, n = phi.hom.images, psi.hom.images
    for k in Z.group.elements:
        for z in Z.points:
            if G.mul(n[k], lam[z]) != G.mul(lam[Z.action[k][z]], m[k]):
                raise NaturalityFailure(f"n({k}) lam({z}) != lam({k}.{z}) m({k})", (k, z))
    for (a, b) in Z.poset.covers:
        if lam[a] != lam[b]:
            raise NotLocallyConstant(f"lam differs on comparable points {a} <= {b}", (a, b))
    return NaturalTransformation(phi, psi, lam)


def transformations(phi: EquivariantMap, psi: EquivariantMap) -> NaturalTransformation | None:
    """Search for some ``lam: phi => psi`` (one value per connected component).

    The value on one component of each orbit of components determines the
    rest through naturality, so the search is complete and small.
    """
    from .posets import connected_components
    Z = phi.source
    G = phi.target.group
    X = phi.target
    comps = connected_components(Z.poset)
    comp_of = {}
    for i, c in enumerate(comps):
        for z in c:
            comp_of[z] = i
    lam: list[int | None] = [None] * len(comps)

    def allowed(ci, g):
        return all(X.action[g][phi.points[z]] == psi.points[z] for z in comps[ci])

    m, n = phi.hom.images, psi.hom.images

    def propagate(ci, g):
        """Assign and push along the group; return list of assigned or None."""
        assigned = []
        stack = [(ci, g)]
        while stack:
            c, v = stack.pop()
            if lam[c] is not None:
                if lam[c] != v:
                    for a in assigned:
                        lam[a] = None
                    return None
                continue
            if not allowed(c, v):
                for a in assigned:
                    lam[a] = None
                return None
            lam[c] = v
            assigned.append(c)
            z = comps[c][0]
            for k in Z.group.generators:
                c2 = comp_of[Z.action[k][z]]
                # lam(kz) = n(k) lam(z) m(k)^-1
                stack.append((c2, G.mul(G.mul(n[k], v), G.inv(m[k]))))
        return assigned

    def rec(i):
        if i == len(comps):
            return True
        if lam[i] is not None:
            return rec(i + 1)
        for g in G.elements:
            done = propagate(i, g)
            if done is None:
                continue
            if rec(i + 1):
                return True
            for a in done:
                lam[a] = None
        return False

    if not rec(0):
        return None
    values = tuple(lam[comp_of[z]] for z in Z.points)
    return check_natural_transformation(values, phi, psi)
