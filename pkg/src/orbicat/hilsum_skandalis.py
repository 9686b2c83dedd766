"""Principal bibundles between translation groupoids.

A bibundle ``E`` from ``H x Y`` to ``G x X`` carries a left ``G``-action
along ``p: E -> X`` and a right ``H``-action along ``w: E -> Y``:

    p(g e) = g p(e),   w(e h) = h^-1 w(e),   p(e h) = p(e),   w(g e) = w(e).

It is principal when ``w`` is an open surjection, ``G`` acts simply
transitively on the fibers of ``w`` and the inverse of
``(g, e) -> (g e, e)`` is continuous.  The last condition says that no
minimal open set ``U_e`` meets a ``G``-orbit twice.

Right actions are stored as ``right[h][e] = e.h`` so that
``right[h2][right[h1][e]] = right[h1 h2][e]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .actions import GSpace
from .errors import (
    AntisymmetryViolation,
    InconsistentChoices,
    MiddleMismatch,
    NotBibundle,
    NotEssentialEquivalence,
    NotPrincipal,
    OrbicatError,
    PrincipalityLost,
)
from .groups import Homomorphism, direct_product, unpair
from .maps import (
    EquivariantMap,
    NaturalTransformation,
    check_equivariant,
    check_natural_transformation,
    compose,
    identity_map,
)
from .morita import (
    GeneralizedMap,
    PronkFactorization,
    check_essential_equivalence,
    pronk_factorize,
)
from .posets import Poset, bits, connected_components, open_failure, product_discrete, quotient_poset


def _same_space(a: GSpace, b: GSpace) -> bool:
    return a is b or (a.group == b.group and a.poset == b.poset and a.action == b.action)


@dataclass(frozen=True, eq=False)
class Bibundle:
    total: Poset
    left: GSpace = field(repr=False)     # G x X, acting along p
    right: GSpace = field(repr=False)    # H x Y, acting along w
    p: tuple[int, ...]
    w: tuple[int, ...]
    left_action: tuple[tuple[int, ...], ...] = field(repr=False)
    right_action: tuple[tuple[int, ...], ...] = field(repr=False)
    name: str = ""

    @property
    def size(self) -> int:
        return self.total.size

    def mu(self, g: int, e: int) -> int:
        return self.left_action[g][e]

    def nu(self, e: int, h: int) -> int:
        return self.right_action[h][e]

    def fiber(self, y: int) -> tuple[int, ...]:
        return tuple(e for e in range(self.size) if self.w[e] == y)

    def __repr__(self):
        return (f"Bibundle({self.name or '?'}, |E|={self.size}, "
                f"{self.right.name or 'H x Y'} -> {self.left.name or 'G x X'})")


@dataclass(frozen=True)
class PrincipalityCertificate:
    # per y: pairs (y', e') giving the local section over U_y
    section_data: tuple[tuple[tuple[int, int], ...], ...]
    # (g.e, e) -> g, listed as (g.e, e, g)
    bijection_witness: tuple[tuple[int, int, int], ...]


def _is_perm(row, n):
    return len(row) == n and sorted(row) == list(range(n))


def check_bibundle(b: Bibundle) -> Bibundle:
    """Anchors, actions, compatibility and commutation; raises NotBibundle."""
    E, G, H = b.total, b.left.group, b.right.group
    n = E.size
    if len(b.p) != n or len(b.w) != n:
        raise NotBibundle("anchor lengths differ from the total space", ())
    if any(not 0 <= x < b.left.size for x in b.p) or any(not 0 <= y < b.right.size for y in b.w):
        raise NotBibundle("anchor value out of range", ())
    for (a, c) in E.covers:
        if not b.left.poset.leq(b.p[a], b.p[c]):
            raise NotBibundle(f"p breaks {a} <= {c}", (a, c))
        if not b.right.poset.leq(b.w[a], b.w[c]):
            raise NotBibundle(f"w breaks {a} <= {c}", (a, c))
    for name, grp, rows in (("left", G, b.left_action), ("right", H, b.right_action)):
        if len(rows) != grp.order or any(not _is_perm(r, n) for r in rows):
            raise NotBibundle(f"{name} action rows are not permutations", ())
        if rows[grp.identity] != tuple(range(n)):
            raise NotBibundle(f"{name} identity moves a point", ())
        for g in grp.generators:
            for (a, c) in E.covers:
                if not E.leq(rows[g][a], rows[g][c]):
                    raise NotBibundle(f"{name} element {g} breaks {a} <= {c}", (g, a, c))
    L, R = b.left_action, b.right_action
    for g in G.elements:
        for g2 in G.elements:
            gg = L[G.mul(g, g2)]
            for e in range(n):
                if L[g][L[g2][e]] != gg[e]:
                    raise NotBibundle(f"left action law fails at {g},{g2},{e}", (g, g2, e))
    for h in H.elements:
        for h2 in H.elements:
            hh = R[H.mul(h, h2)]
            for e in range(n):
                if R[h2][R[h][e]] != hh[e]:
                    raise NotBibundle(f"right action law fails at {h},{h2},{e}", (h, h2, e))
    for e in range(n):
        for g in G.elements:
            if b.p[L[g][e]] != b.left.action[g][b.p[e]]:
                raise NotBibundle(f"p({g}.{e}) != {g}.p({e})", (g, e))
            if b.w[L[g][e]] != b.w[e]:
                raise NotBibundle(f"w({g}.{e}) != w({e})", (g, e))
        for h in H.elements:
            if b.w[R[h][e]] != b.right.action[H.inv(h)][b.w[e]]:
                raise NotBibundle(f"w({e}.{h}) != {h}^-1.w({e})", (h, e))
            if b.p[R[h][e]] != b.p[e]:
                raise NotBibundle(f"p({e}.{h}) != p({e})", (h, e))
    for g in G.generators:
        for h in H.generators:
            for e in range(n):
                if R[h][L[g][e]] != L[g][R[h][e]]:
                    raise NotBibundle(f"actions do not commute at {g},{e},{h}", (g, e, h))
    return b


def check_principal(b: Bibundle) -> PrincipalityCertificate:
    check_bibundle(b)
    E, G = b.total, b.left.group
    fibers: dict[int, list[int]] = {}
    for e in range(E.size):
        fibers.setdefault(b.w[e], []).append(e)
    for y in b.right.points:
        if y not in fibers:
            raise NotPrincipal(f"w misses {y}", (y,))
    bad = open_failure(E, b.right.poset, b.w)
    if bad is not None:
        raise NotPrincipal(f"w is not open at {bad[0]}", bad)
    witness = []
    for y, fib in sorted(fibers.items()):
        e0 = fib[0]
        orbit = {b.left_action[g][e0]: g for g in G.elements}
        if len(orbit) != G.order:
            raise NotPrincipal(f"left action is not free on the fiber over {y}", (y, e0))
        if set(orbit) != set(fib):
            raise NotPrincipal(f"left action is not transitive on the fiber over {y}", (y,))
        for e in fib:
            for g in G.elements:
                witness.append((b.left_action[g][e], e, g))
    e_id = G.identity
    for e in range(E.size):
        de = E.down[e]
        for g in G.elements:
            if g != e_id and de & E.down[b.left_action[g][e]]:
                a = next(bits(de & E.down[b.left_action[g][e]]))
                raise NotPrincipal(
                    f"{a} lies below both {e} and {g}.{e}; the shearing map has no continuous inverse", (a, e, g))
    sections = []
    for y in b.right.points:
        top = fibers[y][0]
        loc = tuple((b.w[e], e) for e in bits(E.down[top]))
        sections.append(tuple(sorted(loc)))
    return PrincipalityCertificate(tuple(sections), tuple(sorted(witness)))


def is_principal(b: Bibundle) -> bool:
    try:
        check_principal(b)
    except OrbicatError:
        return False
    return True


# --- constructions ----------------------------------------------------------

def hs_from_equivariant(f: EquivariantMap) -> Bibundle:
    """``<phi>`` for ``f x phi: K x Z -> G x X``; total space ``G x Z``.

    ``w(g, z) = z``, ``p(g, z) = g phi(z)``, ``g'.(g, z) = (g' g, z)`` and
    ``(g, z).k = (g f(k), k^-1 z)``.
    """
    Z, X = f.source, f.target
    K, G = Z.group, X.group
    n = Z.size
    total = product_discrete(G.order, Z.poset)
    p = tuple(X.action[g][f.points[z]] for g in G.elements for z in Z.points)
    w = tuple(z for _ in G.elements for z in Z.points)
    left = tuple(tuple(G.mul(a, g) * n + z for g in G.elements for z in Z.points) for a in G.elements)
    right = tuple(tuple(G.mul(g, f.hom(k)) * n + Z.action[K.inv(k)][z] for g in G.elements for z in Z.points)
                  for k in K.elements)
    return Bibundle(total, X, Z, p, w, left, right, f"<{f.source.name}->{f.target.name}>")


def identity_bibundle(space: GSpace) -> Bibundle:
    return hs_from_equivariant(identity_map(space))


def hs_inverse_of_equivalence(f: EquivariantMap) -> Bibundle:
    """``<eps>^-1`` for an essential equivalence ``s x eps: K x Z -> H x Y``.

    Total space ``H x Z`` with ``p(h, z) = z``, ``w(h, z) = h eps(z)``,
    ``k.(h, z) = (h s(k)^-1, k z)`` and ``(h, z).h' = (h'^-1 h, z)``.
    """
    try:
        check_essential_equivalence(f)
    except OrbicatError as exc:
        raise NotEssentialEquivalence(str(exc), exc.witness) from exc
    Z, Y = f.source, f.target
    K, H = Z.group, Y.group
    n = Z.size
    total = product_discrete(H.order, Z.poset)
    p = tuple(z for _ in H.elements for z in Z.points)
    w = tuple(Y.action[h][f.points[z]] for h in H.elements for z in Z.points)
    left = tuple(tuple(H.mul(h, H.inv(f.hom(k))) * n + Z.action[k][z] for h in H.elements for z in Z.points)
                 for k in K.elements)
    right = tuple(tuple(H.mul(H.inv(a), h) * n + z for h in H.elements for z in Z.points) for a in H.elements)
    return Bibundle(total, Z, Y, p, w, left, right, f"<{f.target.name}->{f.source.name}>")


def _quotient_bibundle(pts, down_of, perms, left_of, right_of, p_of, w_of, left, right, name):
    """Build a bibundle on the orbits of ``perms`` acting on a point list.

    ``down_of`` gives down-sets as masks over ``pts`` indices; the other
    callbacks act on indices and are evaluated on class representatives.
    """
    poset = Poset(tuple(down_of))
    try:
        qp, label, classes = quotient_poset(poset, perms)
    except AntisymmetryViolation as exc:
        raise PrincipalityLost(f"quotient order is not antisymmetric: {exc}", exc.witness) from exc
    reps = [c[0] for c in classes]
    G, H = left.group, right.group
    L = tuple(tuple(label[left_of(g, r)] for r in reps) for g in G.elements)
    R = tuple(tuple(label[right_of(h, r)] for r in reps) for h in H.elements)
    p = tuple(p_of(r) for r in reps)
    w = tuple(w_of(r) for r in reps)
    return Bibundle(qp, left, right, p, w, L, R, name)


def hs_compose(inner: Bibundle, outer: Bibundle) -> Bibundle:
    """Composite ``outer o inner``: ``inner`` runs ``K x Z -> H x Y``,
    ``outer`` runs ``H x Y -> G x X``.

    ``E* = (E_outer x_Y E_inner) / H`` with ``(e, e').h = (e h, h^-1 e')``.
    """
    if not _same_space(inner.left, outer.right):
        raise MiddleMismatch("inner target groupoid differs from outer source groupoid", ())
    H = outer.right.group
    pairs = [(e, e2) for e in range(outer.size) for e2 in range(inner.size) if outer.w[e] == inner.p[e2]]
    index = {q: i for i, q in enumerate(pairs)}
    down = []
    for (e, e2) in pairs:
        m = 0
        for a in bits(outer.total.down[e]):
            for c in bits(inner.total.down[e2]):
                j = index.get((a, c))
                if j is not None:
                    m |= 1 << j
        down.append(m)
    perms = [tuple(index[(outer.right_action[h][e], inner.left_action[H.inv(h)][e2])] for (e, e2) in pairs)
             for h in H.elements]
    out = _quotient_bibundle(
        pairs, down, perms,
        lambda g, i: index[(outer.left_action[g][pairs[i][0]], pairs[i][1])],
        lambda k, i: index[(pairs[i][0], inner.right_action[k][pairs[i][1]])],
        lambda i: outer.p[pairs[i][0]],
        lambda i: inner.w[pairs[i][1]],
        outer.left, inner.right, f"{outer.name}o{inner.name}")
    try:
        check_principal(out)
    except OrbicatError as exc:
        raise PrincipalityLost(f"composite is not principal: {exc}", exc.witness) from exc
    return out


def hs_from_generalized(span: GeneralizedMap) -> Bibundle:
    """Bibundle of ``H x Y <-(s, eps)- K x Z -(f, phi)-> G x X``.

    Total space ``(G x H x Z) / K`` with ``(g, h, z) ~ (g f(k), h s(k), k^-1 z)``,
    ``w[g, h, z] = h eps(z)`` and ``p[g, h, z] = g phi(z)``.
    """
    lf, rt = span.left, span.right
    Z, Y, X = lf.source, lf.target, rt.target
    K, H, G = Z.group, Y.group, X.group
    n, nh = Z.size, H.order
    enc = lambda g, h, z: (g * nh + h) * n + z
    dec = lambda i: (i // n // nh, i // n % nh, i % n)
    base = product_discrete(G.order * nh, Z.poset)
    perms = [tuple(enc(G.mul(g, rt.hom(k)), H.mul(h, lf.hom(k)), Z.action[K.inv(k)][z])
                   for g in G.elements for h in H.elements for z in Z.points) for k in K.elements]

    def left_of(a, i):
        g, h, z = dec(i)
        return enc(G.mul(a, g), h, z)

    def right_of(a, i):
        g, h, z = dec(i)
        return enc(g, H.mul(H.inv(a), h), z)

    def p_of(i):
        g, _, z = dec(i)
        return X.action[g][rt.points[z]]

    def w_of(i):
        _, h, z = dec(i)
        return Y.action[h][lf.points[z]]

    return _quotient_bibundle(range(base.size), base.down, perms, left_of, right_of, p_of, w_of,
                              X, Y, "hs(span)")


def double_action_space(b: Bibundle) -> GSpace:
    """``G x H`` acting on ``E`` by ``(g, h).e = g e h^-1``."""
    G, H = b.left.group, b.right.group
    GH = direct_product(G, H)
    rows = []
    for x in GH.elements:
        g, h = unpair(H, x)
        rows.append(tuple(b.left_action[g][b.right_action[H.inv(h)][e]] for e in range(b.size)))
    return GSpace(b.total, GH, tuple(rows), "GxExH")


def generalized_from_hs(b: Bibundle) -> GeneralizedMap:
    """Span ``H x Y <-w- (G x H) x E -p-> G x X``; the left leg is certified."""
    try:
        check_principal(b)
    except OrbicatError as exc:
        raise NotPrincipal(str(exc), exc.witness) from exc
    E = double_action_space(b)
    G, H = b.left.group, b.right.group
    to_h = Homomorphism(E.group, H, tuple(unpair(H, x)[1] for x in E.group.elements))
    to_g = Homomorphism(E.group, G, tuple(unpair(H, x)[0] for x in E.group.elements))
    left = check_equivariant(to_h, b.w, E, b.right)
    right = check_equivariant(to_g, b.p, E, b.left)
    check_essential_equivalence(left)
    return GeneralizedMap(left, right)


# --- searches ---------------------------------------------------------------

def find_global_section(b: Bibundle) -> tuple[int, ...] | None:
    """Order-preserving ``tau: Y -> E`` with ``w tau = id``, or None.

    Backtracks along a linear extension of each connected component of
    ``Y``; an exhausted search certifies absence.
    """
    Y = b.right.poset
    fibers: dict[int, list[int]] = {y: [] for y in Y.points}
    for e in range(b.size):
        fibers[b.w[e]].append(e)
    tau = [-1] * Y.size
    ext = Y.linear_extension
    for comp in connected_components(Y):
        cs = set(comp)
        order = [y for y in ext if y in cs]

        def rec(i):
            if i == len(order):
                return True
            y = order[i]
            for e in fibers[y]:
                ok = True
                for y2 in order[:i]:
                    if Y.leq(y2, y) and not b.total.leq(tau[y2], e):
                        ok = False
                        break
                    if Y.leq(y, y2) and not b.total.leq(e, tau[y2]):
                        ok = False
                        break
                if ok:
                    tau[y] = e
                    if rec(i + 1):
                        return True
            tau[y] = -1
            return False

        if not rec(0):
            return None
    return tuple(tau)


def count_sections(b: Bibundle, limit: int = 10_000) -> int:
    """Number of global sections (capped at ``limit``); used for diagnostics."""
    Y = b.right.poset
    fibers = [[e for e in range(b.size) if b.w[e] == y] for y in Y.points]
    total = 1
    ext = Y.linear_extension
    for comp in connected_components(Y):
        cs = set(comp)
        order = [y for y in ext if y in cs]
        tau = {}
        count = 0

        def rec(i):
            nonlocal count
            if count >= limit:
                return
            if i == len(order):
                count += 1
                return
            y = order[i]
            for e in fibers[y]:
                if all((not Y.leq(y2, y) or b.total.leq(tau[y2], e)) and
                       (not Y.leq(y, y2) or b.total.leq(e, tau[y2])) for y2 in order[:i]):
                    tau[y] = e
                    rec(i + 1)

        rec(0)
        total = min(limit, total * count)
    return total


def find_natural_conjugacy(m: Homomorphism, n: Homomorphism, space: GSpace) -> tuple[int, ...] | None:
    """Locally constant ``lam: Z -> G`` with ``n(k) = lam(k z) m(k) lam(z)^-1``.

    One value per connected component; the value on a component fixes the
    values along its group orbit, so the search is exhaustive.
    """
    G = m.target
    comps = connected_components(space.poset)
    comp_of = {}
    for i, c in enumerate(comps):
        for z in c:
            comp_of[z] = i
    lam: list[int | None] = [None] * len(comps)

    def propagate(ci, v):
        assigned = []
        stack = [(ci, v)]
        while stack:
            c, val = stack.pop()
            if lam[c] is not None:
                if lam[c] != val:
                    for a in assigned:
                        lam[a] = None
                    return None
                continue
            lam[c] = val
            assigned.append(c)
            z = comps[c][0]
            for k in space.group.generators:
                c2 = comp_of[space.action[k][z]]
                stack.append((c2, G.mul(G.mul(n(k), val), G.inv(m(k)))))
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
    values = tuple(lam[comp_of[z]] for z in space.points)
    # full check over every group element, not just generators
    for k in space.group.elements:
        for z in space.points:
            if n(k) != G.mul(G.mul(values[space.action[k][z]], m(k)), G.inv(values[z])):
                raise InconsistentChoices(f"conjugacy propagation failed at {k},{z}", (k, z))
    return values


@dataclass(frozen=True, eq=False)
class GMapResult:
    hom: Homomorphism
    space_map: EquivariantMap          # G x Y -> G x X with identity homomorphism
    witness: NaturalTransformation     # space_map o left  =>  right
    section: tuple[int, ...]           # tau: Y -> E in hs_from_generalized(span)
    bibundle: Bibundle = field(repr=False)
    factorization: PronkFactorization = field(repr=False)


def strictify(span: GeneralizedMap) -> GMapResult | None:
    """Replace a span over one group ``G`` by a ``G``-map, when possible.

    Succeeds exactly when the two homomorphisms out of the apex group are
    naturally conjugate; the map is ``y = g eps(z) -> g lam(z)^-1 phi(z)``.
    """
    lf, rt = span.left, span.right
    Y, X, Z = lf.target, rt.target, lf.source
    G = X.group
    if Y.group != G:
        raise MiddleMismatch("strictification needs both groupoids over one group", ())
    factor = pronk_factorize(lf)
    lam = find_natural_conjugacy(lf.hom, rt.hom, Z)
    if lam is None:
        return None
    values = [-1] * Y.size
    for z in Z.points:
        lz = G.inv(lam[z])
        for g in G.elements:
            y = Y.action[g][lf.points[z]]
            v = X.action[G.mul(g, lz)][rt.points[z]]
            if values[y] == -1:
                values[y] = v
            elif values[y] != v:
                raise InconsistentChoices(f"two choices give different values at {y}", (y, z, g))
    gmap = check_equivariant(tuple(G.elements), values, Y, X)
    witness = check_natural_transformation(lam, compose(lf, gmap), rt)
    bib = hs_from_generalized(span)
    tau = _section_from_conjugacy(span, lam, bib)
    return GMapResult(gmap.hom, gmap, witness, tau, bib, factor)


def _section_from_conjugacy(span: GeneralizedMap, lam, bib: Bibundle) -> tuple[int, ...]:
    """``tau(h eps(z)) = [h lam(z)^-1, h, z]`` located in ``bib``, then validated."""
    lf, rt = span.left, span.right
    Z, Y = lf.source, lf.target
    K, G, H = Z.group, rt.target.group, Y.group
    n, nh = Z.size, H.order

    def key(g, h, z):
        return min((G.mul(g, rt.hom(k)), H.mul(h, lf.hom(k)), Z.action[K.inv(k)][z]) for k in K.elements)

    # classes of hs_from_generalized are numbered by their least encoded member
    least = {}
    for g in G.elements:
        for h in H.elements:
            for z in Z.points:
                least.setdefault(key(g, h, z), (g * nh + h) * n + z)
    rank = {v: i for i, v in enumerate(sorted(least.values()))}
    tau = [-1] * Y.size
    for z in Z.points:
        for h in H.elements:
            y = Y.action[h][lf.points[z]]
            if tau[y] == -1:
                tau[y] = rank[least[key(G.mul(h, G.inv(lam[z])), h, z)]]
    for y in Y.points:
        if bib.w[tau[y]] != y:
            raise InconsistentChoices(f"section misses {y}", (y,))
    for (a, c) in Y.poset.covers:
        if not bib.total.leq(tau[a], tau[c]):
            raise InconsistentChoices(f"section breaks {a} <= {c}", (a, c))
    return tuple(tau)


def bibundle_isomorphic(a: Bibundle, b: Bibundle) -> tuple[int, ...] | None:
    """An order isomorphism ``E_a -> E_b`` over both anchors and both actions."""
    if not (_same_space(a.left, b.left) and _same_space(a.right, b.right)):
        return None
    if a.size != b.size:
        return None
    prof = lambda bb: sorted((bb.p[e], bb.w[e]) for e in range(bb.size))
    if prof(a) != prof(b):
        return None
    A, B = double_action_space(a), double_action_space(b)
    reps = [orb[0] for orb in A.orbits]
    psi = [-1] * a.size
    used = [False] * b.size
    GH = A.group

    def undo(pts):
        for x in pts:
            used[psi[x]] = False
            psi[x] = -1

    def assign(r, t):
        pts = []
        for x in GH.elements:
            s, u = A.action[x][r], B.action[x][t]
            if psi[s] == -1:
                if used[u]:
                    undo(pts)
                    return None
                psi[s] = u
                used[u] = True
                pts.append(s)
            elif psi[s] != u:
                undo(pts)
                return None
        for s in pts:
            for v in range(a.size):
                if psi[v] == -1:
                    continue
                if a.total.leq(s, v) != b.total.leq(psi[s], psi[v]) or \
                        a.total.leq(v, s) != b.total.leq(psi[v], psi[s]):
                    undo(pts)
                    return None
        return pts

    def rec(i):
        if i == len(reps):
            return True
        r = reps[i]
        for t in range(b.size):
            if used[t] or b.p[t] != a.p[r] or b.w[t] != a.w[r]:
                continue
            pts = assign(r, t)
            if pts is None:
                continue
            if rec(i + 1):
                return True
            undo(pts)
        return False

    if not rec(0):
        return None
    return tuple(psi)


def spans_equivalent(s1: GeneralizedMap, s2: GeneralizedMap) -> tuple[int, ...] | None:
    """2-isomorphism of generalized maps, decided on their bibundles."""
    return bibundle_isomorphic(hs_from_generalized(s1), hs_from_generalized(s2))
