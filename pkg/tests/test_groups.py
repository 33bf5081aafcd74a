"""Tests for group construction, validation, and generating sets."""

import math
import random

import pytest

from cayleydeg.errors import BudgetExceeded
from cayleydeg.groups import (
    FiniteGroup,
    element_order,
    enumerate_symmetric_generating_sets,
    make_generating_set,
    make_group,
    parse_group_spec,
)

# Latin square with identity and two-sided inverses that is not associative:
# (1*2)*3 = 4 but 1*(2*3) = 2.  Order five, found by exhaustive search.
NONASSOC_LOOP = [
    [0, 1, 2, 3, 4],
    [1, 0, 3, 4, 2],
    [2, 4, 0, 1, 3],
    [3, 2, 4, 0, 1],
    [4, 3, 1, 2, 0],
]


def test_cyclic_product_basics():
    G = make_group([4, 2])
    assert G.order == 8
    assert G.name == "z4x2"
    assert G.identity == 0
    assert G.is_abelian
    # encode puts the first modulus in the most significant position
    assert G.encode([1, 0]) == 2
    assert G.decode(3) == (1, 1)
    assert G.mul(G.encode([3, 1]), G.encode([2, 1])) == G.encode([1, 0])
    assert G.inv(G.encode([1, 1])) == G.encode([3, 1])


def test_cyclic_product_rejects_bad_moduli():
    with pytest.raises(ValueError):
        make_group([])
    with pytest.raises(ValueError):
        make_group([4, 1])
    with pytest.raises(ValueError):
        make_group([0])


def test_group_axioms_hold_for_builtins():
    for spec in ["z6", "z2x2x2", "d4", "s3", "q8", "a4"]:
        G = make_group(spec)
        e = G.identity
        for a in G.elements():
            assert G.mul(a, e) == a
            assert G.mul(e, a) == a
            assert G.mul(a, G.inv(a)) == e
            assert G.mul(G.inv(a), a) == e


def test_associativity_exhaustive_small():
    G = make_group("d4")
    for a in G.elements():
        for b in G.elements():
            for c in G.elements():
                assert G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c))


def test_nonassociative_loop_rejected():
    # passes the Latin / identity / inverse layers, dies on associativity
    with pytest.raises(ValueError, match="associat"):
        make_group({"table": NONASSOC_LOOP})


def test_table_validation_errors():
    with pytest.raises(ValueError):
        make_group({"table": [[0, 1], [0, 1]]})  # repeated row entry column-wise
    with pytest.raises(ValueError):
        make_group({"table": [[1, 0], [0, 1]]})  # identity not at index 0
    with pytest.raises(ValueError):
        make_group({"table": [[0, 1, 2], [1, 2, 0]]})  # not square


def test_custom_table_accepted():
    # Z3 given explicitly as a table
    G = make_group({"table": [[0, 1, 2], [1, 2, 0], [2, 0, 1]]})
    assert G.order == 3
    assert G.is_abelian
    assert element_order(G, 1) == 3


def test_dihedral_structure():
    n = 5
    G = make_group(f"dihedral:{n}")
    assert G.order == 2 * n
    assert not G.is_abelian
    r, s = 1, n
    assert element_order(G, r) == n
    assert element_order(G, s) == 2
    # s r s = r^-1
    assert G.mul(G.mul(s, r), s) == G.inv(r)


def test_symmetric_and_alternating():
    S4 = make_group("sym:4")
    assert S4.order == 24
    A4 = make_group("alt:4")
    assert A4.order == 12
    assert not A4.is_abelian
    # A4 has no element of order 6
    orders = {element_order(A4, g) for g in A4.elements()}
    assert orders == {1, 2, 3}


def test_quaternion_group():
    Q = make_group("q8")
    assert Q.order == 8
    assert not Q.is_abelian
    orders = sorted(element_order(Q, g) for g in Q.elements())
    assert orders == [1, 2, 4, 4, 4, 4, 4, 4]
    # exactly one element of order 2 (the central -1)
    assert orders.count(2) == 1


def test_element_order_lagrange():
    rng = random.Random(981)
    for spec in ["z12", "z6x2", "d6", "s4", "q8"]:
        G = make_group(spec)
        for _ in range(20):
            g = rng.randrange(G.order)
            k = element_order(G, g)
            assert G.order % k == 0
            # g^k = e and no smaller positive power works
            acc = G.identity
            for i in range(1, k):
                acc = G.mul(acc, g)
                assert acc != G.identity
            assert G.mul(acc, g) == G.identity


def test_parse_group_spec_forms():
    assert parse_group_spec("z6").order == 6
    assert parse_group_spec("z2x3").order == 6
    assert parse_group_spec("cyclic:7").order == 7
    assert parse_group_spec("d4").name == parse_group_spec("dihedral:4").name
    assert parse_group_spec("s3").order == 6
    assert parse_group_spec("a4").order == 12
    assert parse_group_spec("quaternion8").order == 8
    assert parse_group_spec('{"table": [[0,1],[1,0]]}').order == 2
    assert parse_group_spec("sym:1").order == 1
    with pytest.raises(ValueError):
        parse_group_spec("zz")
    with pytest.raises(ValueError):
        parse_group_spec("sym:6")  # 720 is past the supported table range


def test_generating_set_splits_involutions_and_pairs():
    G = make_group([6])
    S = make_generating_set(G, [1, 5, 3])
    assert S.size == 3
    assert S.t == 1 and S.d == 2
    assert set(S.order2) == {3}
    assert S.pairs == ((1, 5),)
    assert S.images() == (3, 1)
    assert S.generates


def test_generating_set_validation():
    G = make_group([6])
    with pytest.raises(ValueError, match="identity"):
        make_generating_set(G, [0, 1, 5])
    with pytest.raises(ValueError, match="symmetric"):
        make_generating_set(G, [1])
    with pytest.raises(ValueError, match="generate"):
        make_generating_set(G, [2, 4])
    S = make_generating_set(G, [2, 4], allow_nongenerating=True)
    assert not S.generates


def test_generating_set_closure_nonabelian():
    G = make_group("s4")
    # a transposition and a 4-cycle generate S4
    elems = [g for g in G.elements()]
    # find them by order and parity of fixed points via the table itself
    S = None
    for a in elems:
        if element_order(G, a) != 2:
            continue
        for b in elems:
            if element_order(G, b) != 4:
                continue
            try:
                S = make_generating_set(G, {a, G.inv(a), b, G.inv(b)})
                break
            except ValueError:
                continue
        if S is not None:
            break
    assert S is not None and S.generates


def _naive_symmetric_generating_sets(G):
    """Oracle: filter the full powerset of G \\ {e}."""
    n = G.order
    out = []
    universe = list(range(1, n))
    for mask in range(1, 1 << len(universe)):
        subset = {universe[i] for i in range(len(universe)) if mask >> i & 1}
        if any(G.inv(g) not in subset for g in subset):
            continue
        # closure from the identity
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for h in frontier:
                for s in subset:
                    v = G.mul(s, h)
                    if v not in seen:
                        seen.add(v)
                        nxt.append(v)
            frontier = nxt
        if len(seen) == n:
            out.append(frozenset(subset))
    return out


def test_enumeration_matches_powerset_oracle():
    for spec in ["z5", "z6", "z2x2", "d3", "q8"]:
        G = make_group(spec)
        expected = sorted(_naive_symmetric_generating_sets(G), key=sorted)
        got = sorted(
            (s.elements for s in enumerate_symmetric_generating_sets(G)), key=sorted
        )
        assert got == expected, spec


def test_enumeration_max_size_filter():
    G = make_group("z6")
    small = list(enumerate_symmetric_generating_sets(G, max_size=2))
    assert all(s.size <= 2 for s in small)
    assert {frozenset(s.elements) for s in small} == {frozenset({1, 5})}


def test_enumeration_budget():
    G = make_group("z12")  # 11 non-identity elements, unit count above a tiny cap
    with pytest.raises(BudgetExceeded):
        list(enumerate_symmetric_generating_sets(G, cap=3))


def test_render_and_elements():
    G = make_group([3, 2])
    assert list(G.elements()) == list(range(6))
    assert G.render(5) == "(2,1)"
    H = make_group("d3")
    assert isinstance(H.render(4), str)


def test_group_order_cap():
    with pytest.raises(ValueError, match="maximum"):
        make_group("z20000")
