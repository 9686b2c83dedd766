"""A generalized map that is not equivalent to any equivariant map."""

# %% Load the bundled span: V4 on C(4) mapped twice onto C(2) by both legs.
from orbicat import find_global_section, find_natural_conjugacy, hs_from_generalized, strictify
from orbicat.hilsum_skandalis import count_sections
from orbicat.posets import circle_poset, find_isomorphisms
from orbicat.workspace import fixture_path, load_workspace

ws = load_workspace(fixture_path("counterexample.grpd"))
span = ws.get("span1")
print("left hom", span.left.hom.images, "right hom", span.right.hom.images)

# %% The two homomorphisms are not naturally conjugate.
print("conjugacy:", find_natural_conjugacy(span.left.hom, span.right.hom, span.apex))

# %% Its bibundle is the double cover of C(2) by C(4).
b = hs_from_generalized(span)
print("total space is C(4):", find_isomorphisms(b.total, circle_poset(4)) is not None)
print("w:", b.w)

# %% No global section, hence no strictification.
print("section:", find_global_section(b), "count:", count_sections(b))
print("strictify:", strictify(span))

# %% Replacing the right leg by the left one gives a span that does strictify.
from orbicat import make_generalized_map
r = strictify(make_generalized_map(span.left, span.left))
print("G-map:", r.space_map.points, "lambda:", r.witness.values)
