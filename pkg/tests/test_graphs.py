"""Tests for graph primitives, Cayley construction, and serialization."""

import random
from collections import deque

import pytest

from cayleydeg.graphs import (
    Graph,
    VertexSet,
    build_cayley,
    builtin_graph,
    components,
    counterexample_checks,
    counterexample_graph,
    export_graph,
    import_graph,
    induced_max_degree,
)
from cayleydeg.groups import make_generating_set, make_group


def test_vertex_set_basics():
    A = VertexSet.from_members(8, [5, 1, 3])
    assert A.size == 3
    assert A.members() == [1, 3, 5]
    assert 3 in A and 2 not in A
    assert list(A) == [1, 3, 5]
    assert VertexSet.full(4).members() == [0, 1, 2, 3]
    with pytest.raises(ValueError):
        VertexSet.from_members(4, [4])


def test_graph_rejects_loops_and_duplicates():
    with pytest.raises(ValueError, match="loop"):
        Graph(3, [(1, 1)])
    with pytest.raises(ValueError, match="duplicate"):
        Graph(3, [(0, 1), (1, 0)])
    with pytest.raises(ValueError):
        Graph(3, [(0, 3)])


def test_graph_degree_bookkeeping():
    X = Graph(4, [(0, 1), (0, 2), (0, 3), (1, 2)])
    assert X.edge_count == 4
    assert X.degree(0) == 3 and X.degree(3) == 1
    assert X.max_degree() == 3
    assert not X.is_regular()
    assert builtin_graph("cycle:5").is_regular()


def test_cayley_graph_is_hypercube():
    # Z_2^3 with the standard basis must be Q3: adjacency iff Hamming distance 1
    G = make_group([2, 2, 2])
    S = make_generating_set(G, [1, 2, 4])
    X = build_cayley(G, S).graph
    assert X.n == 8 and X.edge_count == 12
    for u in range(8):
        for v in range(u + 1, 8):
            expected = bin(u ^ v).count("1") == 1
            assert (v in X.neighbors(u)) == expected


def test_cayley_graph_regularity():
    rng = random.Random(4096)
    for spec in ["z10", "d5", "q8", "s4"]:
        G = make_group(spec)
        # random symmetric identity-free set
        elems = set()
        while len(elems) < 3:
            g = rng.randrange(1, G.order)
            elems.add(g)
            elems.add(G.inv(g))
        S = make_generating_set(G, elems, allow_nongenerating=True)
        X = build_cayley(G, S).graph
        assert X.is_regular()
        assert X.degree(0) == S.size


def test_components_of_nongenerating_set():
    G = make_group([12])
    S = make_generating_set(G, [4, 8], allow_nongenerating=True)
    X = build_cayley(G, S).graph
    comps = [c.members() for c in components(X)]
    assert comps == [[0, 4, 8], [1, 5, 9], [2, 6, 10], [3, 7, 11]]

    G6 = make_group([6])
    S6 = make_generating_set(G6, [2, 4], allow_nongenerating=True)
    comps6 = [c.members() for c in components(build_cayley(G6, S6).graph)]
    assert comps6 == [[0, 2, 4], [1, 3, 5]]


def test_induced_max_degree_small_cases():
    X = builtin_graph("complete:5")
    deg, arg = induced_max_degree(X, [0, 2, 4])
    assert (deg, arg) == (2, 0)
    deg, arg = induced_max_degree(X, [3])
    assert (deg, arg) == (0, 3)
    deg, arg = induced_max_degree(X, [])
    assert (deg, arg) == (0, None)


def test_induced_max_degree_matches_naive():
    rng = random.Random(7)
    for _ in range(30):
        n = rng.randint(4, 12)
        edges = set()
        for u in range(n):
            for v in range(u + 1, n):
                if rng.random() < 0.4:
                    edges.add((u, v))
        X = Graph(n, sorted(edges))
        members = rng.sample(range(n), rng.randint(0, n))
        U = set(members)
        naive = max(
            (sum(1 for w in X.neighbors(v) if w in U) for v in U), default=0
        )
        deg, arg = induced_max_degree(X, members)
        assert deg == naive
        if members:
            assert arg in U


def _girth(X):
    """Shortest cycle length by BFS from every vertex."""
    best = None
    for root in range(X.n):
        dist = {root: 0}
        parent = {root: None}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v in X.neighbors(u):
                if v not in dist:
                    dist[v] = dist[u] + 1
                    parent[v] = u
                    queue.append(v)
                elif parent[u] != v:
                    cycle = dist[u] + dist[v] + 1
                    if best is None or cycle < best:
                        best = cycle
    return best


def test_petersen_catalog_graph():
    X = builtin_graph("petersen")
    assert X.n == 10 and X.edge_count == 15
    assert X.is_regular() and X.degree(0) == 3
    assert _girth(X) == 5


def test_catalog_errors():
    with pytest.raises(ValueError):
        builtin_graph("cycle:2")
    with pytest.raises(ValueError):
        builtin_graph("unknown")


def test_counterexample_family_checks():
    for n in range(1, 6):
        inst = counterexample_graph(n)
        X = inst.graph
        assert X.n == 4 * n + 2
        assert X.is_regular() and X.degree(0) == n + 1
        checks = counterexample_checks(inst)
        structural = ["regular", "bipartite", "subset_size", "induced_max_degree"]
        assert all(checks[k] for k in structural), (n, checks)
        # degree 1 beats sqrt(n+1) exactly when 2 < n+1
        assert checks["bound_violated"] == (n >= 2)
        # the chosen majority-side subset induces a perfect matching
        deg, _ = induced_max_degree(X, inst.subset)
        assert deg == 1
        assert inst.subset.size == X.n // 2 + 1


def test_counterexample_n1_is_hexagon():
    X = counterexample_graph(1).graph
    assert X.n == 6 and X.edge_count == 6
    assert X.is_regular() and X.degree(0) == 2
    assert _girth(X) == 6  # a single 6-cycle


def test_counterexample_rejects_bad_n():
    with pytest.raises(ValueError):
        counterexample_graph(0)


def test_export_json_exact_bytes():
    X = Graph(3, [(0, 1), (0, 2), (1, 2)])
    assert export_graph(X, "json") == b'{"n":3,"edges":[[0,1],[0,2],[1,2]]}'


def test_json_round_trip():
    rng = random.Random(55)
    for _ in range(10):
        n = rng.randint(1, 9)
        edges = {
            (u, v)
            for u in range(n)
            for v in range(u + 1, n)
            if rng.random() < 0.5
        }
        X = Graph(n, sorted(edges))
        Y = import_graph(export_graph(X, "json"), "json")
        assert X == Y


def test_dot_round_trip_and_isolated_vertices():
    X = Graph(5, [(0, 3), (1, 3)])  # vertices 2 and 4 are isolated
    text = export_graph(X, "dot").decode()
    assert "graph {" in text
    Y = import_graph(text, "dot")
    assert Y == X


def test_import_errors():
    with pytest.raises(ValueError):
        import_graph('{"n": 2}', "json")
    with pytest.raises(ValueError):
        import_graph("digraph { 0 -> 1; }", "dot")
    with pytest.raises(ValueError):
        import_graph("graph { 0 -- ; }", "dot")
    with pytest.raises(ValueError):
        export_graph(Graph(1, []), "xml")
