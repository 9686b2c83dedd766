import random

import pytest
from hypothesis import given

from conftest import seeds, space_from_seed
from orbicat.actions import (
    reflection_circle,
    rotation_circle,
    swap_pair,
    trivial_action,
)
from orbicat.corpus import elementary_moves, equivalence_chain
from orbicat.errors import (
    BudgetExceeded,
    LeftLegFails,
    NotCovering,
    NotEquivariant,
    NotFree,
    NotFullyFaithful,
    NotInjective,
    NotLocallyConstant,
    NotNormal,
    NotOrderPreserving,
    RightLegFails,
)
from orbicat.groups import (
    Homomorphism,
    Subgroup,
    cyclic_group,
    direct_product,
    dihedral_group,
    identity_hom,
    trivial_group,
    subgroups,
    trivial_subgroup,
    whole,
)
from orbicat.maps import check_equivariant, check_natural_transformation, compose, identity_map
from orbicat.morita import (
    build_induction_equivalence,
    build_quotient_equivalence,
    check_essential_equivalence,
    check_morita_span,
    covering_failure,
    induced_map,
    find_equivariant_isomorphism,
    is_essential_equivalence,
    make_generalized_map,
    pronk_factorize,
    search_morita,
)
from orbicat.posets import connected_components, discrete_poset, find_isomorphisms
from orbicat.workspace import fixture_path, load_workspace


def mod2():
    return Homomorphism(cyclic_group(4), cyclic_group(2), (0, 1, 0, 1))


def wrap_twice():
    return (0, 1, 0, 1, 2, 3, 2, 3)


def first_failure(hom, eps, src, dst):
    """Oracle: scan every (k, z) and every comparable pair directly."""
    for z in src.points:
        for z2 in src.points:
            if src.poset.leq(z, z2) and not dst.poset.leq(eps[z], eps[z2]):
                return "order"
    for k in src.group.elements:
        for z in src.points:
            if eps[src.action[k][z]] != dst.action[hom[k]][eps[z]]:
                return "equivariance"
    return None


def point_space(group=None):
    return trivial_action(discrete_poset(1), group)


# --- equivariant maps and transformations ----------------------------------

def test_identity_is_equivariant():
    for X in (rotation_circle(4), swap_pair(), reflection_circle(3)):
        f = check_equivariant(identity_hom(X.group), tuple(X.points), X, X)
        assert f.points == tuple(X.points)


def test_wrap_twice_is_valid():
    A, B = rotation_circle(4), rotation_circle(2)
    assert first_failure(mod2().images, wrap_twice(), A, B) is None
    f = check_equivariant(mod2(), wrap_twice(), A, B)
    assert f.points == wrap_twice()


def test_wrap_with_vertex_to_edge_fails():
    A, B = rotation_circle(4), rotation_circle(2)
    eps = (2,) + wrap_twice()[1:]
    assert first_failure(mod2().images, eps, A, B) is not None
    with pytest.raises((NotOrderPreserving, NotEquivariant)):
        check_equivariant(mod2(), eps, A, B)


def test_identity_transformation():
    f = identity_map(rotation_circle(3))
    assert check_natural_transformation((0,) * 6, f, f).values == (0,) * 6


def test_central_translation_transformation():
    X = rotation_circle(4)
    phi = identity_map(X)
    g0 = 1
    psi = check_equivariant(identity_hom(X.group), X.action[g0], X, X)
    lam = check_natural_transformation((g0,) * X.size, phi, psi)
    assert set(lam.values) == {g0}


def test_nonconstant_transformation_rejected():
    X = trivial_action(rotation_circle(2).poset, cyclic_group(2))
    f = identity_map(X)
    with pytest.raises(NotLocallyConstant):
        check_natural_transformation((0, 1, 0, 0), f, f)


@given(seeds)
def test_composites_of_accepted_maps_are_accepted(seed):
    chain = equivalence_chain(random.Random(seed), 3, max_points=8)
    if len(chain) < 2:
        return
    h = chain[0]
    for f in chain[1:]:
        h = compose(h, f)
        check_equivariant(h.hom, h.points, h.source, h.target)


# --- essential equivalences and moves --------------------------------------

def test_identity_is_essential():
    cert = check_essential_equivalence(identity_map(rotation_circle(3)))
    assert all(h == 0 for (_, _, h) in cert.reach)


def test_quotient_z4_circle():
    X = rotation_circle(4)
    f, Y = build_quotient_equivalence(X, Subgroup(X.group, frozenset({0, 2})))
    assert Y.group.order == 2 and Y.size == 4
    assert find_isomorphisms(Y.poset, rotation_circle(2).poset) is not None
    check_essential_equivalence(f)


def test_counterexample_right_leg_not_fully_faithful():
    ws = load_workspace(fixture_path("counterexample.grpd"))
    check_essential_equivalence(ws.get("eps"))
    with pytest.raises(NotFullyFaithful):
        check_essential_equivalence(ws.get("phi"))


def test_quotient_trivial_subgroup_is_isomorphic_copy():
    X = reflection_circle(3)
    f, Y = build_quotient_equivalence(X, trivial_subgroup(X.group))
    assert find_equivariant_isomorphism(X, Y) is not None


def test_quotient_swap_gives_point():
    X = swap_pair()
    f, Y = build_quotient_equivalence(X, whole(X.group))
    assert Y.group.order == 1 and Y.size == 1


def test_quotient_rejections():
    S3 = dihedral_group(3)
    X = trivial_action(discrete_poset(1), S3)
    flip = next(h for h in subgroups(S3) if h.order == 2)
    with pytest.raises(NotNormal):
        build_quotient_equivalence(X, flip)
    with pytest.raises(NotFree):
        build_quotient_equivalence(trivial_action(discrete_poset(1), cyclic_group(2)), whole(cyclic_group(2)))
    R = rotation_circle(2)
    with pytest.raises(NotCovering):
        build_quotient_equivalence(R, whole(R.group))


def test_induction_along_identity():
    X = reflection_circle(2)
    f, Y = build_induction_equivalence(X, X.group, identity_hom(X.group))
    assert find_equivariant_isomorphism(X, Y) is not None


def test_induction_point_into_z2():
    f, Y = build_induction_equivalence(point_space(), cyclic_group(2),
                                       Homomorphism(trivial_group(), cyclic_group(2), (0,)))
    assert Y.size == 2 and Y.poset.relations() == []
    assert Y.action[1] == (1, 0)


def test_induction_reflection_into_v4():
    X = reflection_circle(2)
    v4 = direct_product(cyclic_group(2), cyclic_group(2))
    emb = Homomorphism(X.group, v4, (0, 1))
    f, Y = build_induction_equivalence(X, v4, emb)
    assert Y.size == 8
    assert [len(c) for c in connected_components(Y.poset)] == [4, 4]
    check_essential_equivalence(f)


def test_induction_rejects_non_injective():
    X = reflection_circle(2)
    with pytest.raises(NotInjective):
        build_induction_equivalence(X, trivial_group(), Homomorphism(X.group, trivial_group(), (0, 0)))


def test_pronk_identity():
    fac = pronk_factorize(identity_map(rotation_circle(3)))
    assert fac.kernel.order == 1


def test_pronk_covering():
    X = rotation_circle(4)
    f = check_equivariant(mod2(), wrap_twice(), X, rotation_circle(2))
    fac = pronk_factorize(f)
    assert fac.kernel.sorted() == (0, 2)
    assert fac.induction.source.group.order == fac.induction.target.group.order
    assert fac.composite.points == f.points


def test_pronk_two_circles():
    X = reflection_circle(2)
    v4 = direct_product(cyclic_group(2), cyclic_group(2))
    f, Y = build_induction_equivalence(X, v4, Homomorphism(X.group, v4, (0, 1)))
    # collapse the factor that swaps the two copies
    rho = next(g for g in v4.elements if g not in (0, 1))
    q, _ = build_quotient_equivalence(Y, Subgroup(v4, frozenset({0, rho})))
    fac = pronk_factorize(q)
    assert fac.kernel.sorted() == (0, rho)


def test_morita_span_examples():
    X = rotation_circle(4)
    check_morita_span(make_generalized_map(identity_map(X), identity_map(X)))
    f, _ = build_quotient_equivalence(X, Subgroup(X.group, frozenset({0, 2})))
    check_morita_span(make_generalized_map(identity_map(X), f))


def test_right_leg_merging_orbits_fails():
    Z = trivial_action(discrete_poset(2))
    merge = check_equivariant((0,), (0, 0), Z, point_space())
    span = make_generalized_map(identity_map(Z), merge)
    with pytest.raises(RightLegFails):
        check_morita_span(span)
    with pytest.raises(LeftLegFails):
        make_generalized_map(merge, identity_map(Z))


def test_search_examples():
    X = rotation_circle(4)
    assert search_morita(X, X, 64).route == ("~",)
    _, Y = build_quotient_equivalence(X, Subgroup(X.group, frozenset({0, 2})))
    cert = search_morita(X, Y, 64)
    assert cert.route == ("quotient[0, 2]", "~")
    assert search_morita(point_space(cyclic_group(2)), point_space(), 1000) is None
    with pytest.raises(BudgetExceeded):
        search_morita(X, Y, 4)


def test_search_finds_induction():
    cert = search_morita(point_space(), swap_pair(), 64)
    assert cert is not None and cert.route[0].startswith("induce")


# --- properties ------------------------------------------------------------

@given(seeds)
def test_moves_are_essential(seed):
    X = space_from_seed(seed, max_points=8)
    for mv in elementary_moves(X, max_points=16):
        check_essential_equivalence(mv.map)


@given(seeds)
def test_pronk_round_trip(seed):
    chain = equivalence_chain(random.Random(seed), 2, max_points=8)
    if not chain:
        return
    f = chain[0] if len(chain) == 1 else compose(chain[0], chain[1])
    fac = pronk_factorize(f)
    check_natural_transformation(fac.transformation.values, fac.composite, f)


@given(seeds)
def test_essential_equivalences_preserve_isotropy_and_orbit_space(seed):
    chain = equivalence_chain(random.Random(seed), 2, max_points=8)
    for f in chain:
        Z, Y = f.source, f.target
        for z in Z.points:
            img = {f.hom(k) for k in Z.isotropy(z).elements}
            assert img == set(Y.isotropy(f(z)).elements)
            assert Z.isotropy(z).order == len(img)
        oz, oy = Z.orbit_space, Y.orbit_space
        induced = {}
        for z in Z.points:
            induced.setdefault(oz.projection[z], oy.projection[f(z)])
        assert sorted(induced.values()) == list(range(len(oy.classes)))
        for a in induced:
            for b in induced:
                assert oz.poset.leq(a, b) == oy.poset.leq(induced[a], induced[b])


@given(seeds)
def test_induction_to_trivial_group_is_the_full_quotient(seed):
    X = space_from_seed(seed, max_points=6)
    K = X.group
    triv = Homomorphism(K, trivial_group(), (0,) * K.order)
    f, Y = induced_map(X, trivial_group(), triv)
    assert Y.size == len(X.orbits)
    quotient_ok = X.acts_freely(whole(K)) is None and covering_failure(X, whole(K)) is None
    assert is_essential_equivalence(f) == quotient_ok
