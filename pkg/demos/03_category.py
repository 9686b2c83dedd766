"""Equivariant LS category on cones, circles and their symmetric versions."""

# %%
from orbicat import cat_G, cat_grd, rotation_circle, rotation_cone, swap_pair, trivial_action
from orbicat.actions import half_turn_circle_v4, reflection_circle
from orbicat.posets import circle_poset

cases = {
    "Z3 on the cone D(3)": rotation_cone(3),
    "trivial group on C(3)": trivial_action(circle_poset(3)),
    "swap": swap_pair(),
    "reflection on C(4)": reflection_circle(4),
    "V4 on C(4)": half_turn_circle_v4(),
    "Z4 on C(4)": rotation_circle(4),
}
for label, X in cases.items():
    r = cat_G(X)
    print(f"{label:24} cat_G = {r}")

# %% A cover and its compression witness for the circle.
r = cat_G(trivial_action(circle_poset(3)))
for u, w in zip(r.cover, r.witnesses):
    print("open", u.points, "compresses via", w.chain)

# %% The groupoid category reduces along free normal subgroups first.
g = cat_grd(rotation_circle(4))
print("cat_grd(Z4 on C(4)) =", g, "after", g.reductions)
