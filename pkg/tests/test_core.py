import itertools

import pytest
from hypothesis import given

from conftest import seeds, space_from_seed
from orbicat.actions import (
    fixed_points,
    isotropy,
    orbit,
    orbit_space,
    rotation_circle,
    rotation_cone,
    swap_pair,
    trivial_action,
)
from orbicat.errors import (
    NoIdentity,
    NoInverse,
    NonAssociative,
    NotAction,
    NotOrderAutomorphism,
    NotPartialOrder,
)
from orbicat.groups import (
    Subgroup,
    cyclic_group,
    dihedral_group,
    direct_product,
    homomorphisms,
    isomorphisms,
    quaternion_group,
    subgroups,
    symmetric_group,
    trivial_group,
    validate_group,
    whole,
)
from orbicat.posets import (
    chain_poset,
    circle_poset,
    connected_components,
    discrete_poset,
    down_sets,
    poset_from_relations,
)


def brute_subgroups(G):
    """Every nonempty subset closed under products (inverses follow in a finite group)."""
    out = []
    for r in range(1, G.order + 1):
        for s in itertools.combinations(G.elements, r):
            ss = set(s)
            if all(G.mul(a, b) in ss for a in s for b in s):
                out.append(frozenset(s))
    return out


def brute_hom_count(K, G):
    return sum(1 for imgs in itertools.product(G.elements, repeat=K.order)
               if all(imgs[K.mul(a, b)] == G.mul(imgs[a], imgs[b]) for a in K.elements for b in K.elements))


# --- groups -----------------------------------------------------------------

def test_validate_group_examples():
    assert validate_group([[0]]).order == 1
    z2 = validate_group([[0, 1], [1, 0]])
    assert [z2.inv(a) for a in z2.elements] == [0, 1]
    with pytest.raises(NoInverse):
        validate_group([[0, 1], [1, 1]])


def test_validate_group_rejections():
    with pytest.raises(NoIdentity):
        validate_group([[1, 1], [1, 1]])
    # a Latin square with identity that is not associative
    t = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(NonAssociative):
        validate_group(t)


@pytest.mark.parametrize("G", [trivial_group(), cyclic_group(2), cyclic_group(4), cyclic_group(6),
                               direct_product(cyclic_group(2), cyclic_group(2)), dihedral_group(3),
                               dihedral_group(4), quaternion_group(), symmetric_group(3)])
def test_subgroups_match_brute_force(G):
    got = sorted(sorted(h.elements) for h in subgroups(G))
    assert got == sorted(sorted(s) for s in brute_subgroups(G))


def test_subgroup_counts():
    assert len(subgroups(trivial_group())) == 1
    assert [h.order for h in subgroups(cyclic_group(2))] == [1, 2]
    v4 = direct_product(cyclic_group(2), cyclic_group(2))
    assert sorted(h.order for h in subgroups(v4)) == [1, 2, 2, 2, 4]


@pytest.mark.parametrize("K,G", [(cyclic_group(2), cyclic_group(4)), (cyclic_group(4), cyclic_group(2)),
                                 (direct_product(cyclic_group(2), cyclic_group(2)), cyclic_group(2)),
                                 (cyclic_group(3), symmetric_group(3)), (dihedral_group(3), cyclic_group(2))])
def test_homomorphism_counts_match_brute_force(K, G):
    assert len(homomorphisms(K, G)) == brute_hom_count(K, G)


def test_automorphism_counts():
    assert len(isomorphisms(cyclic_group(4), cyclic_group(4))) == 2
    v4 = direct_product(cyclic_group(2), cyclic_group(2))
    assert len(isomorphisms(v4, v4)) == 6
    assert len(isomorphisms(quaternion_group(), quaternion_group())) == 24


# --- posets and actions -----------------------------------------------------

def test_partial_order_rejects_cycle():
    with pytest.raises(NotPartialOrder):
        poset_from_relations(2, [(0, 1), (1, 0)])


def test_orbit_examples():
    C = rotation_circle(4)
    assert orbit(C, 0) == (0, 1, 2, 3)
    assert orbit(trivial_action(circle_poset(3)), 4) == (4,)
    assert orbit(swap_pair(), 0) == (0, 1)


def test_isotropy_examples():
    D = rotation_cone(5)
    assert isotropy(D, 10).order == 5
    assert isotropy(rotation_circle(4), 0).order == 1
    t = trivial_action(circle_poset(2), cyclic_group(3))
    assert isotropy(t, 1).order == 3


def test_fixed_point_examples():
    D = rotation_cone(3)
    assert fixed_points(D, whole(D.group)).points == (6,)
    S = swap_pair()
    assert fixed_points(S, whole(S.group)).points == ()
    C = rotation_circle(4)
    assert fixed_points(C, Subgroup(C.group, frozenset([0]))).points == tuple(range(8))


def test_orbit_space_examples():
    t = trivial_action(circle_poset(2))
    assert orbit_space(t).poset == t.poset
    assert len(orbit_space(swap_pair()).classes) == 1
    q = orbit_space(rotation_circle(4))
    assert q.classes == ((0, 1, 2, 3), (4, 5, 6, 7))
    assert q.poset.relations() == [(0, 1)]


def test_connected_components_examples():
    assert len(connected_components(circle_poset(4))) == 1
    assert len(connected_components(discrete_poset(2))) == 2
    assert connected_components(discrete_poset(0)) == []


def test_action_validation():
    from orbicat.actions import make_gspace
    with pytest.raises(NotAction):
        make_gspace(discrete_poset(2), cyclic_group(2), [(1, 0), (1, 0)])
    with pytest.raises(NotAction):
        make_gspace(discrete_poset(3), cyclic_group(2), [(0, 1, 2), (1, 2, 0)])
    with pytest.raises(NotOrderAutomorphism):
        make_gspace(chain_poset(2), cyclic_group(2), [(0, 1), (1, 0)])


def brute_down_sets(P):
    return sorted((m for m in range(1 << P.size) if P.is_down_set(m)), key=lambda m: (bin(m).count("1"), m))


def test_down_sets_match_brute_force():
    for P in (circle_poset(2), circle_poset(3), discrete_poset(3), poset_from_relations(4, [(0, 1), (1, 2), (0, 3)])):
        assert down_sets(P) == brute_down_sets(P)


@given(seeds)
def test_orbit_stabilizer(seed):
    X = space_from_seed(seed)
    for x in X.points:
        assert len(X.orbit(x)) * X.isotropy(x).order == X.group.order
        for g in X.group.elements:
            assert {X.action[g][y] for y in X.orbit(x)} == set(X.orbit(x))


@given(seeds)
def test_fixed_points_antitone(seed):
    X = space_from_seed(seed)
    subs = subgroups(X.group)
    assert fixed_points(X, subs[0]).points == tuple(X.points)
    for a in subs:
        for b in subs:
            if a <= b:
                assert set(fixed_points(X, b).points) <= set(fixed_points(X, a).points)


@given(seeds)
def test_orbit_projection_open_and_surjective(seed):
    X = space_from_seed(seed)
    q = X.orbit_space
    assert set(q.projection) == set(range(len(q.classes)))
    for m in down_sets(X.poset, 256) or []:
        img = 0
        for x in range(X.size):
            if m >> x & 1:
                img |= 1 << q.projection[x]
        assert q.poset.is_down_set(img)
    assert len(connected_components(q.poset)) <= len(connected_components(X.poset))


@given(seeds)
def test_orbits_are_antichains(seed):
    X = space_from_seed(seed)
    for orb in X.orbits:
        for a in orb:
            for b in orb:
                assert a == b or not X.poset.leq(a, b)
