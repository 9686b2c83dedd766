import random

import pytest
from hypothesis import given

from conftest import seeds, space_from_seed
from oracles import contractible, order_preserving_self_maps
from orbicat.actions import (
    disjoint_sum,
    half_turn_circle_v4,
    make_gspace,
    reflection_circle,
    rotation_circle,
    rotation_cone,
    swap_pair,
    trivial_action,
)
from orbicat.category import (
    are_G_homotopic,
    cat_G,
    cat_grd,
    cat_orb,
    check_compression_witness,
    invariant_opens,
    is_G_categorical,
    morita_reduce,
)
from orbicat.corpus import equivalence_chain
from orbicat.groups import cyclic_group
from orbicat.morita import free_quotient_subgroups
from orbicat.posets import chain_poset, circle_poset, cone_poset, discrete_poset, mask_of


def whole(X):
    return (1 << X.size) - 1


def point():
    return trivial_action(discrete_poset(1))


# --- oracle sanity ---------------------------------------------------------

@pytest.mark.parametrize("n", [2, 3, 4])
def test_circles_are_not_contractible(n):
    assert not contractible(circle_poset(n))


@pytest.mark.parametrize("n", [1, 2])
def test_cones_are_contractible(n):
    assert contractible(cone_poset(n))


def test_self_map_counts():
    assert len(order_preserving_self_maps(chain_poset(2))) == 3
    assert len(order_preserving_self_maps(circle_poset(2))) == 36


# --- invariant opens -------------------------------------------------------

def test_invariant_opens_examples():
    ms, exact = invariant_opens(trivial_action(chain_poset(2)))
    assert exact and ms == [0, 0b01, 0b11]
    ms, _ = invariant_opens(rotation_circle(4))
    assert ms == [0, 0x0F, 0xFF]
    ms, _ = invariant_opens(swap_pair())
    assert ms == [0, 0b11]


def test_invariant_opens_fallback():
    X = trivial_action(discrete_poset(6))
    ms, exact = invariant_opens(X, limit=8)
    assert not exact
    assert whole(X) in ms and all(1 << x in ms for x in X.points)


# --- homotopy and categorical opens ----------------------------------------

def test_homotopic_to_itself():
    X = rotation_circle(3)
    ident = tuple(X.points)
    assert are_G_homotopic(X, ident, ident, ident) == (ident,)


def test_cone_identity_to_apex():
    X = rotation_cone(3)
    ident = tuple(X.points)
    chain = are_G_homotopic(X, ident, ident, (6,) * 7)
    assert chain == (ident, (6,) * 7)


def test_circle_identity_not_homotopic_to_constant():
    X = trivial_action(circle_poset(2))
    ident = tuple(X.points)
    for c in X.points:
        assert are_G_homotopic(X, ident, ident, (c,) * 4) is None


def test_categorical_examples():
    S = swap_pair()
    w = is_G_categorical(S, 0b11)
    assert w.chain == ((0, 1),)
    w = is_G_categorical(rotation_cone(5), whole(rotation_cone(5)))
    assert w is not None and set(w.chain[-1]) == {10}
    assert is_G_categorical(trivial_action(circle_poset(2)), 0b1111) is None


# --- category values -------------------------------------------------------

@pytest.mark.parametrize("p", [2, 3, 5])
def test_cone_category_one(p):
    assert cat_G(rotation_cone(p)).value == 1


@pytest.mark.parametrize("n", [2, 3, 4])
def test_circle_category_two(n):
    r = cat_G(trivial_action(circle_poset(n)))
    assert r.value == 2 and r.exact


def test_swap_category_one():
    assert cat_G(swap_pair()).value == 1
    assert cat_grd(swap_pair()).value == 1


def test_infinite_values():
    for X in (rotation_circle(4), rotation_circle(2), reflection_circle(2)):
        assert cat_G(X).infinite
        assert str(cat_G(X)) == "infinite"


def test_finite_symmetric_circles():
    assert cat_G(reflection_circle(4)).value == 2
    assert cat_G(half_turn_circle_v4()).value == 2


def test_reduction_examples():
    X = rotation_circle(4)
    red, steps = morita_reduce(X)
    assert steps == ("quotient by [0, 2]",)
    assert red.group.order == 2 and red.size == 4
    assert cat_grd(X).value == cat_G(red).value == cat_G(rotation_circle(2)).value
    T = trivial_action(circle_poset(3))
    assert cat_grd(T).value == cat_G(T).value == 2
    assert cat_grd(T).reductions == ()
    for X in (rotation_circle(4), T, swap_pair()):
        assert cat_orb(X).value == cat_grd(X).value


def test_cover_is_a_cover():
    X = trivial_action(circle_poset(3))
    r = cat_G(X)
    assert mask_of(p for u in r.cover for p in u.points) == whole(X)
    for w in r.witnesses:
        check_compression_witness(X, w)


# --- properties ------------------------------------------------------------

def add_point(X):
    return disjoint_sum(X, make_gspace(discrete_poset(1), X.group, [(0,)] * X.group.order))


@given(seeds)
def test_witnesses_revalidate(seed):
    X = space_from_seed(seed, max_points=8)
    r = cat_G(X)
    for w in r.witnesses:
        check_compression_witness(X, w)
    if not r.infinite:
        assert mask_of(p for u in r.cover for p in u.points) == whole(X)


@given(seeds)
def test_category_one_iff_whole_space_categorical(seed):
    X = space_from_seed(seed, max_points=8)
    r = cat_G(X)
    assert (r.value == 1) == (is_G_categorical(X, whole(X)) is not None)


@given(seeds)
def test_adding_fixed_point_component_adds_one(seed):
    X = space_from_seed(seed, max_points=8)
    r = cat_G(X)
    s = cat_G(add_point(X))
    if r.infinite:
        assert s.infinite
    else:
        assert s.value == r.value + 1


@given(seeds)
def test_grd_equals_G_without_reduction(seed):
    X = space_from_seed(seed, max_points=8)
    if not free_quotient_subgroups(X):
        assert cat_grd(X).value == cat_G(X).value


@given(seeds)
def test_category_is_morita_invariant(seed):
    for f in equivalence_chain(random.Random(seed), 2, max_points=6):
        assert cat_G(f.source).value == cat_G(f.target).value


@given(seeds)
def test_trivial_action_matches_brute_force(seed):
    X = space_from_seed(seed, max_points=5, group=cyclic_group(1))
    r = cat_G(X)
    assert r.value is not None
    if r.value == 1:
        assert contractible(X.poset)
    else:
        assert not contractible(X.poset)
