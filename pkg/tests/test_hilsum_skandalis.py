import itertools
import random

import pytest
from hypothesis import given

from conftest import seeds
from orbicat.actions import reflection_circle, rotation_circle, swap_pair, trivial_action
from orbicat.corpus import equivalence_chain, random_span
from orbicat.errors import MiddleMismatch, NotEssentialEquivalence
from orbicat.groups import Homomorphism, Subgroup, cyclic_group, dihedral_group, trivial_group
from orbicat.hilsum_skandalis import (
    bibundle_isomorphic,
    check_bibundle,
    check_principal,
    count_sections,
    find_global_section,
    find_natural_conjugacy,
    generalized_from_hs,
    hs_compose,
    hs_from_equivariant,
    hs_from_generalized,
    hs_inverse_of_equivalence,
    identity_bibundle,
    is_principal,
    spans_equivalent,
    strictify,
)
from orbicat.maps import check_equivariant, check_natural_transformation, compose, identity_map
from orbicat.morita import build_quotient_equivalence, check_essential_equivalence, make_generalized_map
from orbicat.posets import circle_poset, discrete_poset, find_isomorphisms
from orbicat.workspace import fixture_path, load_workspace


def covering():
    X = rotation_circle(4)
    f, _ = build_quotient_equivalence(X, Subgroup(X.group, frozenset({0, 2})))
    return f


def counterexample():
    return load_workspace(fixture_path("counterexample.grpd")).get("span1")


def brute_axioms(b):
    """Oracle: every bibundle identity checked pointwise."""
    G, H = b.left.group, b.right.group
    E = b.total
    for e in range(b.size):
        for g in G.elements:
            assert b.p[b.mu(g, e)] == b.left.action[g][b.p[e]]
            assert b.w[b.mu(g, e)] == b.w[e]
            for h in H.elements:
                assert b.mu(g, b.nu(e, h)) == b.nu(b.mu(g, e), h)
        for h in H.elements:
            assert b.p[b.nu(e, h)] == b.p[e]
            assert b.w[b.nu(e, h)] == b.right.action[H.inv(h)][b.w[e]]
        for e2 in range(b.size):
            if E.leq(e, e2):
                assert b.left.poset.leq(b.p[e], b.p[e2])
                assert b.right.poset.leq(b.w[e], b.w[e2])


def brute_principal(b):
    """Oracle: G acts simply transitively on each w-fiber."""
    G = b.left.group
    for e in range(b.size):
        for e2 in range(b.size):
            if b.w[e] == b.w[e2]:
                assert sum(1 for g in G.elements if b.mu(g, e) == e2) == 1


def brute_sections(b):
    """Oracle: all order-preserving sections, by trying every fiber choice."""
    Y = b.right.poset
    fibers = [b.fiber(y) for y in range(Y.size)]
    out = []
    for choice in itertools.product(*fibers):
        if all(b.total.leq(choice[a], choice[c]) for a in range(Y.size) for c in range(Y.size) if Y.leq(a, c)):
            out.append(choice)
    return out


def brute_conjugacy(m, n, Z):
    """Oracle: every map Z -> G, filtered by the defining identity and continuity."""
    G = m.target
    found = []
    for lam in itertools.product(G.elements, repeat=Z.size):
        if any(lam[a] != lam[c] for (a, c) in Z.poset.covers):
            continue
        if all(n(k) == G.prod(lam[Z.action[k][z]], m(k), G.inv(lam[z]))
               for k in Z.group.elements for z in Z.points):
            found.append(lam)
    return found


# --- constructions ---------------------------------------------------------

def test_identity_bibundle_structure():
    X = rotation_circle(3)
    b = identity_bibundle(X)
    assert b.size == 3 * 6
    assert all(b.p[g * 6 + x] == X.action[g][x] for g in X.group.elements for x in X.points)
    brute_axioms(b)
    brute_principal(b)


def test_reflection_identity_bibundle():
    b = hs_from_equivariant(identity_map(reflection_circle(2)))
    assert b.size == 8
    check_bibundle(b)
    check_principal(b)
    brute_axioms(b)
    brute_principal(b)


def test_constant_map_from_point():
    X = reflection_circle(2)
    pt = trivial_action(discrete_poset(1))
    f = check_equivariant(Homomorphism(trivial_group(), X.group, (0,)), (0,), pt, X)
    b = hs_from_equivariant(f)
    assert b.size == 2
    assert set(b.p) == set(X.orbit(0))
    assert is_principal(b)


def test_inverse_of_identity():
    X = reflection_circle(2)
    b = hs_inverse_of_equivalence(identity_map(X))
    assert bibundle_isomorphic(b, identity_bibundle(X)) is not None


def test_inverse_of_covering():
    f = covering()
    inv = hs_inverse_of_equivalence(f)
    assert inv.size == 16
    brute_axioms(inv)
    brute_principal(inv)
    both = hs_compose(inv, hs_from_equivariant(f))
    assert bibundle_isomorphic(both, identity_bibundle(f.target)) is not None
    back = hs_compose(hs_from_equivariant(f), inv)
    assert bibundle_isomorphic(back, identity_bibundle(f.source)) is not None


def test_inverse_rejects_non_equivalence():
    span = counterexample()
    with pytest.raises(NotEssentialEquivalence):
        hs_inverse_of_equivalence(span.right)


def test_compose_identities():
    X = swap_pair()
    i = identity_bibundle(X)
    assert bibundle_isomorphic(hs_compose(i, i), i) is not None


def test_compose_mismatch():
    with pytest.raises(MiddleMismatch):
        hs_compose(identity_bibundle(swap_pair()), identity_bibundle(rotation_circle(2)))


def test_counterexample_bibundle_is_double_cover():
    span = counterexample()
    b = hs_from_generalized(span)
    brute_axioms(b)
    brute_principal(b)
    assert b.size == 8
    assert find_isomorphisms(b.total, circle_poset(4)) is not None
    assert [len(b.fiber(y)) for y in range(4)] == [2, 2, 2, 2]
    composite = hs_compose(hs_inverse_of_equivalence(span.left), hs_from_equivariant(span.right))
    assert bibundle_isomorphic(b, composite) is not None


def test_counterexample_has_no_section():
    b = hs_from_generalized(counterexample())
    assert brute_sections(b) == []
    assert find_global_section(b) is None
    assert count_sections(b) == 0


def test_counterexample_no_conjugacy():
    span = counterexample()
    Z = span.apex
    assert brute_conjugacy(span.left.hom, span.right.hom, Z) == []
    assert find_natural_conjugacy(span.left.hom, span.right.hom, Z) is None
    assert strictify(span) is None


def test_identity_span_gives_identity_bibundle():
    X = reflection_circle(2)
    s = make_generalized_map(identity_map(X), identity_map(X))
    assert bibundle_isomorphic(hs_from_generalized(s), identity_bibundle(X)) is not None
    assert find_global_section(identity_bibundle(X)) is not None


def test_conjugacy_examples():
    X = rotation_circle(3)
    m = identity_map(X).hom
    assert set(find_natural_conjugacy(m, m, X)) == {0}
    D3 = dihedral_group(3)
    Z = trivial_action(circle_poset(2), D3)
    ident = Homomorphism(D3, D3, tuple(D3.elements))
    gamma = 3
    conj = Homomorphism(D3, D3, tuple(D3.conj(gamma, a) for a in D3.elements))
    lam = find_natural_conjugacy(ident, conj, Z)
    assert lam is not None and len(set(lam)) == 1
    assert all(conj(k) == D3.prod(lam[0], k, D3.inv(lam[0])) for k in D3.elements)


def test_strictify_identity_left_leg():
    X = rotation_circle(4)
    f = check_equivariant(tuple(X.group.elements), X.action[1], X, X)
    r = strictify(make_generalized_map(identity_map(X), f))
    assert r.space_map.points == f.points


def test_strictify_quotient_presented_span():
    f = covering()
    r = strictify(make_generalized_map(f, f))
    assert r.space_map.points == tuple(f.target.points)
    assert r.hom.images == tuple(f.target.group.elements)


def test_strictify_needs_one_group():
    X = reflection_circle(2)
    pt = trivial_action(discrete_poset(1), cyclic_group(3))
    right = check_equivariant((0, 0), (0,) * 4, X, pt)
    with pytest.raises(MiddleMismatch):
        strictify(make_generalized_map(identity_map(X), right))


def test_generalized_from_plain_map_strictifies_back():
    X = reflection_circle(2)
    f = check_equivariant(tuple(X.group.elements), X.action[1], X, X)
    s = generalized_from_hs(hs_from_equivariant(f))
    check_essential_equivalence(s.left)
    r = strictify(s)
    assert r is not None
    assert r.space_map.points == f.points


def test_isomorphism_pruned_by_fibers():
    a = identity_bibundle(swap_pair())
    assert bibundle_isomorphic(a, a) == tuple(range(a.size))
    f = covering()
    b1 = hs_from_equivariant(f)
    assert bibundle_isomorphic(b1, hs_from_generalized(counterexample())) is None


# --- properties ------------------------------------------------------------

@given(seeds)
def test_functoriality(seed):
    chain = equivalence_chain(random.Random(seed), 2, max_points=6)
    if len(chain) < 2:
        return
    f, g = chain
    lhs = hs_from_equivariant(compose(f, g))
    rhs = hs_compose(hs_from_equivariant(f), hs_from_equivariant(g))
    assert bibundle_isomorphic(lhs, rhs) is not None


@given(seeds)
def test_associativity(seed):
    chain = equivalence_chain(random.Random(seed), 3, max_points=5)
    if len(chain) < 3:
        return
    a, b, c = (hs_from_equivariant(f) for f in chain)
    assert bibundle_isomorphic(hs_compose(hs_compose(a, b), c), hs_compose(a, hs_compose(b, c))) is not None


@given(seeds)
def test_generalized_bibundles_are_principal(seed):
    case = random_span(random.Random(seed), max_points=6, max_group=4)
    b = hs_from_generalized(case.span)
    check_bibundle(b)
    check_principal(b)
    brute_axioms(b)
    brute_principal(b)


@given(seeds)
def test_round_trip(seed):
    case = random_span(random.Random(seed), max_points=5, max_group=4)
    back = generalized_from_hs(hs_from_generalized(case.span))
    assert spans_equivalent(back, case.span) is not None


@given(seeds)
def test_section_search_matches_brute_force(seed):
    case = random_span(random.Random(seed), max_points=5, max_group=4)
    b = hs_from_generalized(case.span)
    found = find_global_section(b)
    brute = brute_sections(b)
    assert (found is not None) == bool(brute)
    if found is not None:
        assert tuple(found) in brute


@given(seeds)
def test_conjugacy_search_matches_brute_force(seed):
    case = random_span(random.Random(seed), max_points=5, max_group=4)
    m, n, Z = case.span.left.hom, case.span.right.hom, case.span.apex
    lam = find_natural_conjugacy(m, n, Z)
    brute = brute_conjugacy(m, n, Z)
    assert (lam is not None) == bool(brute)
    if lam is not None:
        assert tuple(lam) in brute


@given(seeds)
def test_strictify_agrees_with_conjugacy_and_implies_section(seed):
    case = random_span(random.Random(seed), max_points=6, max_group=4)
    s = case.span
    r = strictify(s)
    lam = find_natural_conjugacy(s.left.hom, s.right.hom, s.apex)
    assert (r is None) == (lam is None)
    if case.construction == "conjugate":
        assert r is not None
    if r is not None:
        G = s.right.target.group
        assert r.hom.images == tuple(G.elements)
        check_equivariant(r.hom, r.space_map.points, s.left.target, s.right.target)
        check_natural_transformation(r.witness.values, compose(s.left, r.space_map), s.right)
        b = hs_from_generalized(s)
        assert all(b.w[r.section[y]] == y for y in range(len(r.section)))
        assert find_global_section(b) is not None
