"""Fences, generalized paths and the two connectedness notions.

A fence is the finite-space path: consecutive points are comparable.  A
generalized path in ``G x X`` is a list of fences joined by group elements,
``k_i . last(alpha_i) = first(alpha_{i+1})``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .actions import GSpace, fixed_points
from .errors import BrokenFence, BrokenJump, EndpointMismatch, IndexOutOfRange, ShapeMismatch
from .groups import subgroups
from .posets import Poset, connected_components


@dataclass(frozen=True)
class Fence:
    points: tuple[int, ...]

    def __post_init__(self):
        if not self.points:
            raise BrokenFence("a fence needs at least one point", (0, 0))

    @property
    def first(self) -> int:
        return self.points[0]

    @property
    def last(self) -> int:
        return self.points[-1]

    def __len__(self):
        return len(self.points)


def check_fence(poset: Poset, fence: Fence, index: int = 1) -> None:
    for j in range(len(fence) - 1):
        a, b = fence.points[j], fence.points[j + 1]
        if not (0 <= a < poset.size and 0 <= b < poset.size):
            raise IndexOutOfRange(f"fence {index} leaves the space at step {j}", (index, j))
        if not (poset.leq(a, b) or poset.leq(b, a)):
            raise BrokenFence(f"fence {index}: {a} and {b} are not comparable", (index, j))
    if not 0 <= fence.last < poset.size:
        raise IndexOutOfRange(f"fence {index} leaves the space", (index, len(fence) - 1))


@dataclass(frozen=True)
class GeneralizedPath:
    segments: tuple[Fence, ...]
    jumps: tuple[int, ...]

    @property
    def start(self) -> int:
        return self.segments[0].first

    @property
    def end(self) -> int:
        return self.segments[-1].last


def make_path(segments: Sequence[Sequence[int]], jumps: Sequence[int] = ()) -> GeneralizedPath:
    return GeneralizedPath(tuple(Fence(tuple(s)) for s in segments), tuple(jumps))


@dataclass(frozen=True)
class PathCertificate:
    start: int
    end: int
    segments: int


def validate_generalized_path(path: GeneralizedPath, space: GSpace) -> PathCertificate:
    """Check every fence and every jump; indices in errors are 1-based."""
    if len(path.jumps) != len(path.segments) - 1:
        raise BrokenJump(f"{len(path.segments)} segments need {len(path.segments) - 1} jumps", (0,))
    for i, seg in enumerate(path.segments, 1):
        check_fence(space.poset, seg, i)
    for i, k in enumerate(path.jumps, 1):
        if not 0 <= k < space.group.order:
            raise BrokenJump(f"jump {i} is not a group element", (i,))
        a, b = path.segments[i - 1].last, path.segments[i].first
        if space.action[k][a] != b:
            raise BrokenJump(f"jump {i}: {k}.{a} != {b}", (i,))
    return PathCertificate(path.start, path.end, len(path.segments))


@dataclass(frozen=True)
class PathEquivalenceWitness:
    translations: tuple[int, ...]


def pad(path: GeneralizedPath, lengths: Sequence[int]) -> GeneralizedPath:
    """Repeat each segment's last point until it has the requested length."""
    segs = []
    for seg, n in zip(path.segments, lengths):
        segs.append(Fence(seg.points + (seg.last,) * (n - len(seg))))
    return GeneralizedPath(tuple(segs), path.jumps)


def paths_equivalent(p: GeneralizedPath, q: GeneralizedPath, space: GSpace) -> PathEquivalenceWitness | None:
    """Translations ``g_i`` with ``beta_i = g_i alpha_i`` and ``k'_i = g_{i+1} k_i g_i^-1``.

    Segments are first padded to common lengths.  ``g_1`` ranges over the
    group; the jump condition then forces every later ``g_i``.
    """
    if len(p.segments) != len(q.segments):
        raise ShapeMismatch(f"{len(p.segments)} segments against {len(q.segments)}", (len(p.segments), len(q.segments)))
    lengths = [max(len(a), len(b)) for a, b in zip(p.segments, q.segments)]
    p, q = pad(p, lengths), pad(q, lengths)
    G = space.group
    for g1 in G.elements:
        if space.action[g1][p.start] != q.start:
            continue
        gs = [g1]
        ok = True
        for i, seg in enumerate(p.segments):
            g = gs[-1]
            row = space.action[g]
            if any(row[a] != b for a, b in zip(seg.points, q.segments[i].points)):
                ok = False
                break
            if i < len(p.jumps):
                gs.append(G.mul(G.mul(q.jumps[i], g), G.inv(p.jumps[i])))
        if ok:
            return PathEquivalenceWitness(tuple(gs))
    return None


def concatenate(p: GeneralizedPath, q: GeneralizedPath, space: GSpace | None = None) -> GeneralizedPath:
    """``p`` then ``q`` joined by an identity jump."""
    if p.end != q.start:
        raise EndpointMismatch(f"path ends at {p.end}, next starts at {q.start}", (p.end, q.start))
    e = space.group.identity if space is not None else 0
    return GeneralizedPath(p.segments + q.segments, p.jumps + (e,) + q.jumps)


def constant_path(x: int) -> GeneralizedPath:
    return GeneralizedPath((Fence((x,)),), ())


# --- connectedness ----------------------------------------------------------

@dataclass(frozen=True)
class GConnectivity:
    connected: bool
    subgroup: tuple[int, ...] | None = None   # offending subgroup, sorted elements
    reason: str = ""                          # "empty" or "disconnected"
    components: int = 0


def is_G_connected(space: GSpace) -> GConnectivity:
    """Every fixed set ``X^H`` nonempty and connected, ``H`` over all subgroups."""
    for sub in subgroups(space.group):
        fs = fixed_points(space, sub)
        if not fs.points:
            return GConnectivity(False, sub.sorted(), "empty", 0)
        comps = connected_components(fs.poset)
        if len(comps) > 1:
            return GConnectivity(False, sub.sorted(), "disconnected", len(comps))
    return GConnectivity(True)


def _neighbours(space: GSpace, x: int):
    """Moves out of ``x``: ``(y, None)`` along comparability, ``(y, g)`` along jumps."""
    for y in space.points:
        if y != x and space.poset.comparable[x] >> y & 1:
            yield y, None
    seen = {x}
    for g in space.group.elements:
        y = space.action[g][x]
        if y not in seen:
            seen.add(y)
            yield y, g


def _bfs(space: GSpace, a: int):
    parent = {a: None}
    queue = deque([a])
    while queue:
        x = queue.popleft()
        for y, g in _neighbours(space, x):
            if y not in parent:
                parent[y] = (x, g)
                queue.append(y)
    return parent


def _path_from_parents(parent, b: int) -> GeneralizedPath:
    steps = []
    x = b
    while parent[x] is not None:
        prev, g = parent[x]
        steps.append((prev, g, x))
        x = prev
    steps.reverse()
    segs = [[x]]
    jumps = []
    for prev, g, y in steps:
        if g is None:
            segs[-1].append(y)
        else:
            jumps.append(g)
            segs.append([y])
    return make_path(segs, jumps)


def generalized_path(space: GSpace, a: int, b: int) -> GeneralizedPath | None:
    """A generalized path from ``a`` to ``b`` by breadth-first search, or None."""
    parent = _bfs(space, a)
    if b not in parent:
        return None
    return _path_from_parents(parent, b)


@dataclass(frozen=True)
class GroupoidConnectivity:
    connected: bool
    method: str
    components: int
    witnesses: tuple[GeneralizedPath, ...] = ()   # path-search: from point 0 to each point


def is_groupoid_connected(space: GSpace, method: str = "path-search") -> GroupoidConnectivity:
    if method == "quotient":
        n = len(connected_components(space.orbit_space.poset))
        return GroupoidConnectivity(n <= 1, method, n)
    if method != "path-search":
        raise ValueError(f"unknown method {method!r}")
    if space.size == 0:
        return GroupoidConnectivity(True, method, 0)
    remaining = set(space.points)
    comps = 0
    witnesses = ()
    while remaining:
        a = min(remaining)
        parent = _bfs(space, a)
        if comps == 0:
            witnesses = tuple(_path_from_parents(parent, b) for b in space.points if b in parent)
        remaining -= set(parent)
        comps += 1
    return GroupoidConnectivity(comps == 1, method, comps, witnesses if comps == 1 else ())


def lift_quotient_fence(space: GSpace, fence: Sequence[int], start: int, end: int | None = None) -> GeneralizedPath:
    """Lift a fence of orbit classes to a generalized path from ``start``.

    Each step of the fence is lifted inside ``X`` (the projection is open
    for both orders, so a comparable point in the next class always exists).
    When ``end`` is given, a final jump moves to it inside the last orbit.
    """
    osp = space.orbit_space
    label = osp.projection
    fence = tuple(fence)
    if label[start] != fence[0]:
        raise IndexOutOfRange(f"start {start} does not lie over class {fence[0]}", (start,))
    check_fence(osp.poset, Fence(fence))
    pts = [start]
    for c in fence[1:]:
        x = pts[-1]
        cands = [y for y in osp.classes[c] if space.poset.comparable[x] >> y & 1]
        if not cands:
            raise IndexOutOfRange(f"no point over class {c} comparable to {x}", (x, c))
        pts.append(cands[0])
    segs = [pts]
    jumps = []
    if end is not None:
        if label[end] != fence[-1]:
            raise IndexOutOfRange(f"end {end} does not lie over class {fence[-1]}", (end,))
        if end != pts[-1]:
            g = next(g for g in space.group.elements if space.action[g][pts[-1]] == end)
            jumps.append(g)
            segs.append([end])
    path = make_path(segs, jumps)
    validate_generalized_path(path, space)
    return path
