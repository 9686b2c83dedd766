"""Finding Morita spans by composing quotient and induction moves."""

# %%
from orbicat import pronk_factorize, rotation_circle, search_morita, swap_pair, trivial_action
from orbicat.posets import discrete_poset

X = rotation_circle(4)
Y = rotation_circle(2)
cert = search_morita(X, Y, budget=128)
print("route:", cert.route, "apex points:", cert.span.apex.size)

# %% A point and the swap are related by induction.
cert = search_morita(trivial_action(discrete_poset(1)), swap_pair(), budget=64)
print("route:", cert.route)

# %% Different isotropy rules out an equivalence immediately.
from orbicat import cyclic_group
print(search_morita(trivial_action(discrete_poset(1), cyclic_group(2)), trivial_action(discrete_poset(1)), 64))

# %% Every essential equivalence factors as quotient, induction, isomorphism.
fac = pronk_factorize(cert.span.left)
print("kernel", fac.kernel.sorted(), "composite", fac.composite.points)
