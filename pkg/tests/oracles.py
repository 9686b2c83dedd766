"""Independent brute-force oracles shared by the category and acceptance tests."""


def order_preserving_self_maps(P):
    """Every order-preserving map P -> P, by backtracking along a linear extension."""
    n = P.size
    order = list(P.linear_extension)
    out = []
    f = [-1] * n

    def rec(i):
        if i == n:
            out.append(tuple(f))
            return
        x = order[i]
        for v in range(n):
            if all(P.leq(f[y], v) for y in range(n) if f[y] >= 0 and y != x and P.leq(y, x)) and \
                    all(P.leq(v, f[y]) for y in range(n) if f[y] >= 0 and y != x and P.leq(x, y)):
                f[x] = v
                rec(i + 1)
                f[x] = -1

    rec(0)
    return out


def homotopy_classes(P):
    """Components of the pointwise comparability graph on all self-maps."""
    maps = order_preserving_self_maps(P)
    parent = list(range(len(maps)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, f in enumerate(maps):
        for j in range(i + 1, len(maps)):
            g = maps[j]
            if all(P.leq(a, b) for a, b in zip(f, g)) or all(P.leq(b, a) for a, b in zip(f, g)):
                parent[find(i)] = find(j)
    return {f: find(i) for i, f in enumerate(maps)}


def contractible(P):
    """Identity homotopic to a constant map, decided over all self-maps."""
    cls = homotopy_classes(P)
    ident = tuple(range(P.size))
    return any(cls[(c,) * P.size] == cls[ident] for c in range(P.size))
