"""Essential equivalences, the two elementary Morita moves, and spans.

An equivariant map ``m x eps: K x Z -> H x Y`` is an essential equivalence
when

* every orbit of ``Y`` is reached and ``(h, z) -> h eps(z)`` is open, and
* ``K x Z`` is the pullback of ``H x Y`` along ``eps x eps`` *as a space*:
  the arrow sets ``{k | z' = k z}`` and ``{h | eps(z') = h eps(z)}``
  correspond bijectively through ``m``, and the inverse of the comparison
  map is continuous.

On finite posets the continuity half says that no minimal open set ``U_z``
contains two distinct points of one ``ker m``-orbit.  Dropping it would
admit quotients such as ``Z2`` rotating ``C(2)`` onto a contractible chain,
which change every homotopy invariant.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .actions import GSpace
from .errors import (
    BudgetExceeded,
    KernelNotFree,
    LeftLegFails,
    NoIsomorphismFound,
    NotCovering,
    NotEssentiallySurjective,
    NotFree,
    NotFullyFaithful,
    NotNormal,
    NotOpen,
    OrbicatError,
    RightLegFails,
)
from .groups import (
    FiniteGroup,
    Homomorphism,
    Subgroup,
    direct_product,
    identity_hom,
    injective_homomorphisms,
    isomorphisms,
    normal_subgroups,
    quotient_group,
    require_injective,
    unpair,
)
from .maps import (
    EquivariantMap,
    NaturalTransformation,
    check_equivariant,
    check_natural_transformation,
    compose,
    identity_map,
)
from .posets import Poset, bits, open_failure, product_discrete, quotient_poset


# --- essential equivalences -------------------------------------------------

@dataclass(frozen=True, eq=False)
class EssentialEquivalenceCertificate:
    map: EquivariantMap = field(repr=False)
    reach: tuple[tuple[int, int, int], ...]          # (y, z, h) with eps(z) = h.y
    isotropy_pairs: tuple[tuple[int, int, int], ...]  # (z, |K_z|, |H_eps(z)|)
    kernel: Subgroup = field(repr=False)


def covering_failure(space: GSpace, sub: Subgroup) -> tuple[int, int, int] | None:
    """``(z, w, l)`` with ``l != e`` in ``sub`` and ``w, l.w`` both below ``z``.

    None when every minimal open set meets each ``sub``-orbit at most once,
    i.e. when ``Z -> Z/sub`` is a local homeomorphism.
    """
    e = space.group.identity
    els = [l for l in sub.sorted() if l != e]
    for z in space.points:
        dz = space.poset.down[z]
        for l in els:
            row = space.action[l]
            for w in bits(dz):
                if dz >> row[w] & 1:
                    return (z, w, l)
    return None


def check_essential_equivalence(f: EquivariantMap) -> EssentialEquivalenceCertificate:
    K, Z = f.source.group, f.source
    H, Y = f.target.group, f.target
    m, eps = f.hom.images, f.points

    # essentially surjective: each y is h.eps(z) for some (z, h)
    reach = []
    by_point = {}
    for h in sorted(H.elements, key=lambda a: a != H.identity):
        for z in Z.points:
            by_point.setdefault(Y.action[h][eps[z]], (z, h))
    for y in Y.points:
        if y not in by_point:
            raise NotEssentiallySurjective(f"no orbit of Z reaches {y}", (y,))
        z, h = by_point[y]
        # eps(z) = h^-1 . y
        reach.append((y, z, H.inv(h)))
    bad = open_failure(Z.poset, Y.poset, eps)
    if bad is not None:
        raise NotOpen(f"image of U_{bad[0]} misses {bad[1]} below eps({bad[0]})", bad)

    # fully faithful: bijection of arrow sets through m, for every pair
    iso_pairs = []
    for z in Z.points:
        ez = eps[z]
        arrows_k: dict[int, set[int]] = {}
        for k in K.elements:
            arrows_k.setdefault(Z.action[k][z], set()).add(m[k])
        counts_k: dict[int, int] = {}
        for k in K.elements:
            counts_k[Z.action[k][z]] = counts_k.get(Z.action[k][z], 0) + 1
        for z2 in Z.points:
            hs = {h for h in H.elements if Y.action[h][ez] == eps[z2]}
            ks = arrows_k.get(z2, set())
            nk = counts_k.get(z2, 0)
            if nk != len(hs):
                raise NotFullyFaithful(
                    f"arrows {z}->{z2}: {nk} in K, {len(hs)} in H", (z, z2, nk, len(hs)))
            if ks != hs:
                raise NotFullyFaithful(
                    f"arrows {z}->{z2} are not carried onto the arrows between the images", (z, z2))
        iso_pairs.append((z, Z.isotropy(z).order, Y.isotropy(ez).order))
    kernel = f.hom.kernel()
    cov = covering_failure(Z, kernel)
    if cov is not None:
        z, w, l = cov
        raise NotFullyFaithful(
            f"U_{z} contains {w} and {Z.action[l][w]} = {l}.{w} with m({l}) = e; "
            "the comparison map has no continuous inverse", (z, w, l))
    return EssentialEquivalenceCertificate(f, tuple(reach), tuple(iso_pairs), kernel)


def is_essential_equivalence(f: EquivariantMap) -> bool:
    try:
        check_essential_equivalence(f)
    except OrbicatError:
        return False
    return True


# --- elementary moves -------------------------------------------------------

def build_quotient_equivalence(space: GSpace, sub: Subgroup) -> tuple[EquivariantMap, GSpace]:
    """``K x Z -> K/L x Z/L`` for a normal subgroup ``L`` acting freely.

    Also requires ``Z -> Z/L`` to be a local homeomorphism (``NotCovering``);
    without it the projection is not an essential equivalence of spaces.
    """
    if not sub.is_normal():
        g, a = next((g, a) for g in space.group.elements for a in sub.sorted()
                    if space.group.conj(g, a) not in sub.elements)
        raise NotNormal(f"{g} {a} {g}^-1 leaves the subgroup", (g, a))
    bad = space.acts_freely(sub)
    if bad is not None:
        raise NotFree(f"{bad[1]} fixes point {bad[0]}", bad)
    cov = covering_failure(space, sub)
    if cov is not None:
        raise NotCovering(f"U_{cov[0]} contains {cov[1]} and its translate by {cov[2]}", cov)
    q, proj = quotient_group(space.group, sub)
    perms = [space.action[l] for l in sub.sorted()]
    qposet, label, classes = quotient_poset(space.poset, perms)
    reps = [min(g for g in space.group.elements if proj(g) == c) for c in q.elements]
    rows = tuple(tuple(label[space.action[reps[c]][cls[0]]] for cls in classes) for c in q.elements)
    target = GSpace(qposet, q, rows, f"{space.name}/L" if space.name else "")
    return EquivariantMap(space, target, proj, label), target


def induced_map(space: GSpace, group: FiniteGroup, hom: Homomorphism) -> tuple[EquivariantMap, GSpace]:
    """``K x Z -> G x (G x_K Z)``, ``z -> [e, z]``, for any homomorphism ``K -> G``.

    ``G x_K Z`` is the quotient of ``G x Z`` (discrete on ``G``) by
    ``(g, z) ~ (g n(k)^-1, k z)``; point ``(g, z)`` is encoded ``g*|Z| + z``.
    It is an essential equivalence exactly when ``hom`` is injective.
    """
    K = space.group
    n = space.size
    prod = product_discrete(group.order, space.poset)
    perms = []
    for k in K.elements:
        ik = group.inv(hom(k))
        row = space.action[k]
        perms.append(tuple(group.mul(g, ik) * n + row[z] for g in group.elements for z in range(n)))
    qposet, label, classes = quotient_poset(prod, perms)
    rows = tuple(
        tuple(label[group.mul(a, cls[0] // n) * n + cls[0] % n] for cls in classes)
        for a in group.elements)
    target = GSpace(qposet, group, rows, f"ind({space.name})" if space.name else "")
    inc = tuple(label[group.identity * n + z] for z in range(n))
    return EquivariantMap(space, target, hom, inc), target


def build_induction_equivalence(space: GSpace, group: FiniteGroup, embedding: Homomorphism) -> tuple[EquivariantMap, GSpace]:
    """Induction along an embedding ``K -> G``; see ``induced_map``."""
    require_injective(embedding)
    return induced_map(space, group, embedding)


@dataclass(frozen=True, eq=False)
class PronkFactorization:
    """``f = iso o induction o quotient`` up to ``transformation``."""

    kernel: Subgroup
    quotient: EquivariantMap
    induction: EquivariantMap
    iso: EquivariantMap
    transformation: NaturalTransformation

    @property
    def composite(self) -> EquivariantMap:
        return compose(compose(self.quotient, self.induction), self.iso)


def pronk_factorize(f: EquivariantMap) -> PronkFactorization:
    """Factor an essential equivalence into a quotient move, an induction move
    and an equivariant isomorphism onto its target."""
    check_essential_equivalence(f)
    K, Z = f.source.group, f.source
    H, Y = f.target.group, f.target
    L = f.hom.kernel()
    bad = Z.acts_freely(L)
    if bad is not None:
        raise KernelNotFree(f"kernel element {bad[1]} fixes {bad[0]}", bad)
    q, zl = build_quotient_equivalence(Z, L)
    Q = zl.group
    # m factors through K/L
    mbar_images = [None] * Q.order
    for k in K.elements:
        mbar_images[q.hom(k)] = f.hom(k)
    mbar = Homomorphism(Q, H, tuple(mbar_images))
    ind, ind_space = build_induction_equivalence(zl, H, mbar)
    # [h, [z]] -> h eps(z)
    n = zl.size
    rep_of_class = {}
    for z in Z.points:
        rep_of_class.setdefault(q.points[z], z)
    label = {}
    for g in H.elements:
        for c in range(n):
            label.setdefault(ind_space.action[g][ind.points[c]], (g, c))
    values = []
    for p in ind_space.points:
        h, c = label[p]
        values.append(Y.action[h][f.points[rep_of_class[c]]])
    values = tuple(values)
    if sorted(values) != list(Y.points):
        raise NoIsomorphismFound("induced map onto the target is not bijective", values)
    try:
        iso = check_equivariant(identity_hom(H), values, ind_space, Y)
    except OrbicatError as exc:
        raise NoIsomorphismFound(f"induced map is not equivariant: {exc}", values) from exc
    inverse = [0] * len(values)
    for p, y in enumerate(values):
        inverse[y] = p
    for (a, b) in Y.poset.covers:
        if not ind_space.poset.leq(inverse[a], inverse[b]):
            raise NoIsomorphismFound(f"inverse breaks {a} <= {b}", (a, b))
    composite = compose(compose(q, ind), iso)
    lam = check_natural_transformation((H.identity,) * Z.size, composite, f)
    return PronkFactorization(L, q, ind, iso, lam)


# --- generalized maps and Morita spans --------------------------------------

@dataclass(frozen=True, eq=False)
class GeneralizedMap:
    """``H x Y <-left- K x Z -right-> G x X`` with ``left`` essential."""

    left: EquivariantMap
    right: EquivariantMap

    @property
    def apex(self) -> GSpace:
        return self.left.source


def make_generalized_map(left: EquivariantMap, right: EquivariantMap) -> GeneralizedMap:
    if left.source is not right.source and (left.source.poset != right.source.poset
                                            or left.source.action != right.source.action):
        raise LeftLegFails("legs do not share a source", ())
    try:
        check_essential_equivalence(left)
    except OrbicatError as exc:
        raise LeftLegFails(f"left leg is not an essential equivalence: {exc}", exc.witness) from exc
    return GeneralizedMap(left, right)


@dataclass(frozen=True, eq=False)
class MoritaCertificate:
    span: GeneralizedMap
    left: EssentialEquivalenceCertificate
    right: EssentialEquivalenceCertificate
    route: tuple[str, ...] = ()


def check_morita_span(span: GeneralizedMap) -> MoritaCertificate:
    try:
        lc = check_essential_equivalence(span.left)
    except OrbicatError as exc:
        raise LeftLegFails(str(exc), exc.witness) from exc
    try:
        rc = check_essential_equivalence(span.right)
    except OrbicatError as exc:
        raise RightLegFails(str(exc), exc.witness) from exc
    return MoritaCertificate(span, lc, rc)


def weak_pullback(f1: EquivariantMap, f2: EquivariantMap) -> tuple[EquivariantMap, EquivariantMap]:
    """Iso-comma object of two maps into ``H x Y``.

    Points are triples ``(z1, h, z2)`` with ``h eps1(z1) = eps2(z2)``, ordered
    componentwise with ``h`` discrete; ``K1 x K2`` acts by
    ``(k1, k2).(z1, h, z2) = (k1 z1, m2(k2) h m1(k1)^-1, k2 z2)``.
    Returns the two projections.
    """
    A, B, Y = f1.source, f2.source, f1.target
    H = Y.group
    trip = [(z1, h, z2) for z1 in A.points for h in H.elements for z2 in B.points
            if Y.action[h][f1.points[z1]] == f2.points[z2]]
    index = {t: i for i, t in enumerate(trip)}
    down = []
    for (z1, h, z2) in trip:
        m = 0
        for w1 in bits(A.poset.down[z1]):
            for w2 in bits(B.poset.down[z2]):
                j = index.get((w1, h, w2))
                if j is not None:
                    m |= 1 << j
        down.append(m)
    P = Poset(tuple(down))
    G = direct_product(A.group, B.group)
    rows = []
    for x in G.elements:
        k1, k2 = unpair(B.group, x)
        a1, a2 = f1.hom(k1), f2.hom(k2)
        rows.append(tuple(
            index[(A.action[k1][z1], H.mul(H.mul(a2, h), H.inv(a1)), B.action[k2][z2])]
            for (z1, h, z2) in trip))
    space = GSpace(P, G, tuple(rows), "pullback")
    pr1 = EquivariantMap(space, A, Homomorphism(G, A.group, tuple(unpair(B.group, x)[0] for x in G.elements)),
                         tuple(t[0] for t in trip))
    pr2 = EquivariantMap(space, B, Homomorphism(G, B.group, tuple(unpair(B.group, x)[1] for x in G.elements)),
                         tuple(t[2] for t in trip))
    return pr1, pr2


# --- equivariant isomorphism ------------------------------------------------

def invariant_key(space: GSpace) -> tuple:
    """Cheap invariant of a translation groupoid up to equivariant isomorphism."""
    orbs = []
    for orb in space.orbits:
        x = orb[0]
        orbs.append((len(orb), space.isotropy(x).order,
                     bin(space.poset.down[x]).count("1"), bin(space.poset.up[x]).count("1")))
    return (space.group.signature, space.size, tuple(sorted(orbs)))


def morita_invariant_key(space: GSpace) -> tuple:
    """Invariant under essential equivalences: the orbit poset and isotropy orders."""
    osp = space.orbit_space
    per_class = []
    for c, orb in enumerate(osp.classes):
        per_class.append((space.isotropy(orb[0]).order,
                          bin(osp.poset.down[c]).count("1"), bin(osp.poset.up[c]).count("1")))
    return (len(osp.classes), tuple(sorted(per_class)), len(osp.poset.relations()))


def find_equivariant_isomorphism(a: GSpace, b: GSpace) -> EquivariantMap | None:
    """An isomorphism ``alpha x psi: a -> b`` (group and poset both bijective)."""
    if invariant_key(a) != invariant_key(b):
        return None
    reps = [orb[0] for orb in a.orbits]
    prof = lambda s, x: (bin(s.poset.down[x]).count("1"), bin(s.poset.up[x]).count("1"), s.isotropy(x).order)
    for alpha in isomorphisms(a.group, b.group):
        al = alpha.images
        psi = [-1] * a.size
        used = [False] * b.size

        def assign(r, y):
            pts = []
            for g in a.group.elements:
                x, t = a.action[g][r], b.action[al[g]][y]
                if psi[x] == -1:
                    if used[t]:
                        for p in pts:
                            used[psi[p]] = False
                            psi[p] = -1
                        return None
                    psi[x] = t
                    used[t] = True
                    pts.append(x)
                elif psi[x] != t:
                    for p in pts:
                        used[psi[p]] = False
                        psi[p] = -1
                    return None
            for x in pts:
                for w in a.points:
                    if psi[w] == -1:
                        continue
                    if a.poset.leq(x, w) != b.poset.leq(psi[x], psi[w]) or \
                            a.poset.leq(w, x) != b.poset.leq(psi[w], psi[x]):
                        for p in pts:
                            used[psi[p]] = False
                            psi[p] = -1
                        return None
            return pts

        def rec(i):
            if i == len(reps):
                return True
            r = reps[i]
            iso_r = {al[g] for g in a.isotropy(r).elements}
            pr = prof(a, r)
            for y in b.points:
                if used[y] or prof(b, y) != pr or set(b.isotropy(y).elements) != iso_r:
                    continue
                pts = assign(r, y)
                if pts is None:
                    continue
                if rec(i + 1):
                    return True
                for p in pts:
                    used[psi[p]] = False
                    psi[p] = -1
            return False

        if rec(0):
            return EquivariantMap(a, b, alpha, tuple(psi))
    return None


def inverse_isomorphism(f: EquivariantMap) -> EquivariantMap:
    hom_inv = [0] * f.hom.target.order
    for a, b in enumerate(f.hom.images):
        hom_inv[b] = a
    pts = [0] * f.target.size
    for z, y in enumerate(f.points):
        pts[y] = z
    return EquivariantMap(f.target, f.source, Homomorphism(f.hom.target, f.hom.source, tuple(hom_inv)), tuple(pts))


# --- bounded Morita search --------------------------------------------------

def groupoid_size(space: GSpace) -> int:
    """Number of arrows of the translation groupoid."""
    return space.group.order * space.size


def free_quotient_subgroups(space: GSpace) -> list[Subgroup]:
    """Nontrivial normal subgroups whose quotient move is an essential equivalence."""
    out = []
    for sub in normal_subgroups(space.group):
        if sub.order == 1:
            continue
        if space.acts_freely(sub) is None and covering_failure(space, sub) is None:
            out.append(sub)
    return out


def search_morita(a: GSpace, b: GSpace, budget: int) -> MoritaCertificate | None:
    """Look for a Morita span between ``a`` and ``b``.

    Explores quotient and induction moves breadth-first from both sides, never
    building a groupoid with more than ``budget`` arrows.  A returned
    certificate is a proof of equivalence; ``None`` only means nothing was
    found within the budget (except when Morita invariants already differ).
    """
    need = max(groupoid_size(a), groupoid_size(b))
    if budget < need:
        raise BudgetExceeded(f"budget {budget} below input size {need}", (budget, need))
    if morita_invariant_key(a) != morita_invariant_key(b):
        return None

    sides = {0: [(a, identity_map(a), ())], 1: [(b, identity_map(b), ())]}
    seen = {0: {invariant_key(a): [a]}, 1: {invariant_key(b): [b]}}
    frontier = {0: list(sides[0]), 1: list(sides[1])}

    def match(node, side):
        other = 1 - side
        for cand, cmap, croute in sides[other]:
            if invariant_key(cand) != invariant_key(node[0]):
                continue
            iso = find_equivariant_isomorphism(node[0], cand)
            if iso is not None:
                return cand, cmap, croute, iso
        return None

    def certificate(na, nb, iso):
        fa_node, fa, ra = na
        fb_node, fb, rb = nb
        to_b = compose(fa, iso)        # a -> fb_node
        pr1, pr2 = weak_pullback(to_b, fb)
        cert = check_morita_span(GeneralizedMap(pr1, pr2))
        return MoritaCertificate(cert.span, cert.left, cert.right, ra + ("~",) + tuple(reversed(rb)))

    hit = match(sides[0][0], 0)
    if hit is not None:
        cand, cmap, croute, iso = hit
        return certificate(sides[0][0], (cand, cmap, croute), iso)

    groups_seen = [a.group, b.group]
    while frontier[0] or frontier[1]:
        for side in (0, 1):
            nxt = []
            for node, fmap, route in frontier[side]:
                for move, (g, target) in _moves(node, groups_seen, budget):
                    key = invariant_key(target)
                    bucket = seen[side].setdefault(key, [])
                    if any(find_equivariant_isomorphism(target, t) is not None for t in bucket):
                        continue
                    bucket.append(target)
                    new = (target, compose(fmap, g), route + (move,))
                    sides[side].append(new)
                    nxt.append(new)
                    if all(target.group != gg for gg in groups_seen):
                        groups_seen.append(target.group)
                    hit = match(new, side)
                    if hit is not None:
                        cand, cmap, croute, iso = hit
                        if side == 0:
                            return certificate(new, (cand, cmap, croute), iso)
                        return certificate((cand, cmap, croute), new, inverse_isomorphism(iso))
            frontier[side] = nxt
    return None


def _moves(space: GSpace, groups, budget):
    for sub in free_quotient_subgroups(space):
        f, target = build_quotient_equivalence(space, sub)
        yield f"quotient{list(sub.sorted())}", (f, target)
    for grp in groups:
        if grp.order <= space.group.order or grp.order % space.group.order:
            continue
        index = grp.order // space.group.order
        if grp.order * index * space.size > budget:
            continue
        for emb in injective_homomorphisms(space.group, grp):
            f, target = build_induction_equivalence(space, grp, emb)
            yield f"induce{list(emb.images)}", (f, target)
