"""Two notions of connectedness for a finite G-space, and where they part ways."""

# %% The swap: Z2 exchanging two isolated points.
from orbicat import is_G_connected, is_groupoid_connected, swap_pair
from orbicat.morita import build_quotient_equivalence
from orbicat.groups import whole

S = swap_pair()
print("G-connected:", is_G_connected(S))
print("groupoid-connected:", is_groupoid_connected(S).connected)

# %% A generalized path from a to b uses one jump by the generator.
conn = is_groupoid_connected(S)
for path in conn.witnesses:
    print([seg.points for seg in path.segments], "jumps", path.jumps)

# %% Quotienting by the free action gives a single point, which is G-connected.
f, P = build_quotient_equivalence(S, whole(S.group))
print("quotient:", P.size, "point(s), G-connected:", is_G_connected(P).connected)
