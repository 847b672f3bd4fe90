"""Independent re-implementations used as test oracles.

Everything here is written directly from the axiom and definition texts with
plain nested loops, on purpose sharing no helper code with the library.
"""

from functools import lru_cache
from itertools import combinations


def bits(mask):
    return bin(mask).count("1")


def oracle_family_holds(values, n, members, k, kind):
    """Literal re-quantification of the axiom list of each kind."""
    full = (1 << n) - 1
    F = set(members)
    subsets = list(range(1 << n))

    def f(m):
        return values[m]

    if kind == "pi_system":
        if not F:
            return False
        for A in F:
            for B in F:
                if f(A & B) <= k and (A & B) not in F:
                    return False
        return True

    if kind == "superfilter":
        if not F:
            return False
        for A in F:
            if f(A) > k:
                return False
        for A in F:
            for B in subsets:
                if (A | B) == B and f(B) <= k and B not in F:
                    return False
        for A in subsets:
            for B in subsets:
                if f(A) <= k and f(B) <= k and (A | B) in F:
                    if A not in F and B not in F:
                        return False
        return True

    if kind == "prefilter":
        if not F or 0 in F:
            return False
        for A in F:
            if f(A) > k:
                return False
        for B in F:
            for C in F:
                if not any(A | (B & C) == (B & C) and f(A) <= k for A in F):
                    return False
        return True

    if kind == "tangle":
        if not F:
            return False
        for A in F:
            if f(A) > k:
                return False
        for A in subsets:
            if f(A) <= k and A not in F and (full ^ A) not in F:
                return False
        for A in F:
            for B in F:
                for C in F:
                    if A | B | C == full:
                        return False
        for i in range(n):
            if (full ^ (1 << i)) in F:
                return False
        return True

    if kind in ("filter", "ultrafilter"):
        if not F:
            return False
        for A in F:
            if f(A) > k:
                return False
        for A in F:
            for B in F:
                if f(A & B) <= k and (A & B) not in F:
                    return False
        for A in F:
            for B in subsets:
                if (A | B) == B and f(B) <= k and B not in F:
                    return False
        if 0 in F:
            return False
        if kind == "ultrafilter":
            for A in subsets:
                if f(A) <= k and A not in F and (full ^ A) not in F:
                    return False
        return True

    raise ValueError(kind)


def oracle_branch_width(values, n):
    """Exact branch-width by recursive bipartition over subsets."""
    if n == 1:
        return 0
    if n == 2:
        return values[1]
    full = (1 << n) - 1

    @lru_cache(maxsize=None)
    def cost(S):
        if bits(S) == 1:
            return values[S]
        best = None
        sub = (S - 1) & S
        while sub:
            other = S ^ sub
            if other and sub < other:
                c = max(cost(sub), cost(other))
                if best is None or c < best:
                    best = c
            sub = (sub - 1) & S
        return max(values[S], best)

    best = None
    low = 1  # the part containing element 0, to kill permutation symmetry
    for s1 in range(1, 1 << n):
        if not s1 & low or s1 == full:
            continue
        rest = full ^ s1
        rlow = rest & -rest
        s2 = rest
        while s2:
            if s2 & rlow and s2 != rest:
                s3 = rest ^ s2
                c = max(cost(s1), cost(s2), cost(s3))
                if best is None or c < best:
                    best = c
            s2 = (s2 - 1) & rest
    return best


def oracle_generate_from_subbase(values, n, subbase, k):
    """Fixpoint closure: all finite intersections, then efficient up-closure.

    Returns ("empty", witnesses), ("escape", (a, b, missing)), or ("ok", members).
    """
    member_list = sorted(subbase)
    cores = set()
    for size in range(1, len(member_list) + 1):
        for combo in combinations(member_list, size):
            inter = combo[0]
            for m in combo[1:]:
                inter &= m
            cores.add(inter)
    if 0 in cores:
        for size in range(1, len(member_list) + 1):
            for combo in combinations(member_list, size):
                inter = combo[0]
                for m in combo[1:]:
                    inter &= m
                if inter == 0:
                    return ("empty", combo)
    efficient_cores = {c for c in cores if values[c] <= k}
    result = set()
    for b in range(1 << n):
        if values[b] <= k and any(c | b == b for c in efficient_cores):
            result.add(b)
    ordered = sorted(result)
    for i, a in enumerate(ordered):
        for b in ordered[i:]:
            u = a & b
            if values[u] <= k and u not in result:
                return ("escape", (a, b, u))
    return ("ok", result)


def connected_graphs_with_edges(min_edges, max_edges):
    """All connected simple graphs with edge counts in range, up to isomorphism."""
    import networkx as nx

    graphs = []
    for g in nx.graph_atlas_g()[1:]:
        m = g.number_of_edges()
        if min_edges <= m <= max_edges and nx.is_connected(g):
            graphs.append(nx.convert_node_labels_to_integers(g))
    if min_edges <= 7 <= max_edges:
        # the atlas stops at 7 vertices; 7-edge connected graphs on 8 vertices are trees
        for t in nx.nonisomorphic_trees(8):
            graphs.append(nx.convert_node_labels_to_integers(t))
    return graphs


def edge_cut_system(graph):
    from connsys import ConnectivitySystem

    edges = sorted(tuple(sorted(e)) for e in graph.edges())
    labels = [f"e{i}" for i in range(len(edges))]
    return ConnectivitySystem.from_edge_cut(labels, graph.number_of_nodes(), edges)
