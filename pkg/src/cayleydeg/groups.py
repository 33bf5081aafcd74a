"""Finite groups over element indices 0..n-1, plus symmetric generating sets.

Two representations are supported: products of cyclic groups Z_m1 x ... x Z_mk
(every modulus at least 2), and explicit multiplication tables.  Cyclic
products index elements in mixed radix with the first modulus most
significant, so element 0 is always the identity; table groups must place the
identity at index 0.  Named builtins (dihedral, symmetric, alternating,
quaternion) are constructed as validated tables.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from functools import cached_property
from itertools import permutations
from typing import Iterable, Iterator, Sequence

from .errors import BudgetExceeded

__all__ = [
    "FiniteGroup",
    "GeneratingSet",
    "make_group",
    "parse_group_spec",
    "element_order",
    "make_generating_set",
    "enumerate_symmetric_generating_sets",
    "MAX_GROUP_ORDER",
]

MAX_GROUP_ORDER = 10_000
# associativity of a supplied table is checked exhaustively up to this order,
# by seeded random triples beyond it
_ASSOC_EXHAUSTIVE_LIMIT = 64
_ASSOC_SAMPLE_TRIPLES = 10_000
_ASSOC_SAMPLE_SEED = 0x5EED


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group on indices 0..order-1 with identity at index 0."""

    kind: str  # "cyclic-product" or "table"
    order: int
    name: str
    moduli: tuple[int, ...] = ()
    table: tuple[tuple[int, ...], ...] = ()

    @property
    def identity(self) -> int:
        return 0

    def elements(self) -> range:
        return range(self.order)

    @cached_property
    def _place_values(self) -> tuple[int, ...]:
        # place value of coordinate i is the product of all later moduli
        pv = [1] * len(self.moduli)
        for i in range(len(self.moduli) - 2, -1, -1):
            pv[i] = pv[i + 1] * self.moduli[i + 1]
        return tuple(pv)

    def decode(self, a: int) -> tuple[int, ...]:
        """Residue tuple of a cyclic-product element."""
        if self.kind != "cyclic-product":
            raise ValueError("decode is only defined for cyclic-product groups")
        return tuple((a // p) % m for m, p in zip(self.moduli, self._place_values))

    def encode(self, residues: Sequence[int]) -> int:
        """Index of the element with the given residue tuple."""
        if self.kind != "cyclic-product":
            raise ValueError("encode is only defined for cyclic-product groups")
        if len(residues) != len(self.moduli):
            raise ValueError(
                f"expected {len(self.moduli)} residues, got {len(residues)}"
            )
        idx = 0
        for r, m, p in zip(residues, self.moduli, self._place_values):
            if not 0 <= r < m:
                raise ValueError(f"residue {r} out of range for modulus {m}")
            idx += r * p
        return idx

    def mul(self, a: int, b: int) -> int:
        if self.kind == "cyclic-product":
            idx = 0
            for m, p in zip(self.moduli, self._place_values):
                idx += (((a // p) % m + (b // p) % m) % m) * p
            return idx
        return self.table[a][b]

    @cached_property
    def _inverses(self) -> tuple[int, ...]:
        inv = [0] * self.order
        for a in range(self.order):
            row = self.table[a]
            for b in range(self.order):
                if row[b] == 0:
                    inv[a] = b
                    break
        return tuple(inv)

    def inv(self, a: int) -> int:
        if self.kind == "cyclic-product":
            idx = 0
            for m, p in zip(self.moduli, self._place_values):
                idx += ((m - (a // p) % m) % m) * p
            return idx
        return self._inverses[a]

    def render(self, a: int) -> str:
        """Human-readable element: residue tuple for cyclic products."""
        if self.kind == "cyclic-product":
            return "(" + ",".join(str(r) for r in self.decode(a)) + ")"
        return str(a)

    @cached_property
    def is_abelian(self) -> bool:
        if self.kind == "cyclic-product":
            return True
        for a in range(self.order):
            for b in range(a + 1, self.order):
                if self.table[a][b] != self.table[b][a]:
                    return False
        return True


def _validate_table(table: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    n = len(table)
    if n == 0:
        raise ValueError("multiplication table is empty")
    rows = []
    for i, row in enumerate(table):
        row = tuple(row)
        if len(row) != n:
            raise ValueError(f"table row {i} has length {len(row)}, expected {n}")
        for v in row:
            if not isinstance(v, int) or not 0 <= v < n:
                raise ValueError(f"table entry {v!r} in row {i} is out of range")
        rows.append(row)
    t = tuple(rows)

    full = frozenset(range(n))
    for i in range(n):
        if frozenset(t[i]) != full:
            raise ValueError(f"table row {i} is not a permutation of 0..{n - 1}")
        if frozenset(t[j][i] for j in range(n)) != full:
            raise ValueError(f"table column {i} is not a permutation of 0..{n - 1}")

    for a in range(n):
        if t[0][a] != a or t[a][0] != a:
            raise ValueError("index 0 does not act as a two-sided identity")

    for a in range(n):
        right = next(b for b in range(n) if t[a][b] == 0)
        if t[right][a] != 0:
            raise ValueError(f"element {a} has no two-sided inverse")

    if n <= _ASSOC_EXHAUSTIVE_LIMIT:
        triples: Iterable[tuple[int, int, int]] = (
            (a, b, c) for a in range(n) for b in range(n) for c in range(n)
        )
    else:
        rng = random.Random(_ASSOC_SAMPLE_SEED)
        triples = (
            (rng.randrange(n), rng.randrange(n), rng.randrange(n))
            for _ in range(_ASSOC_SAMPLE_TRIPLES)
        )
    for a, b, c in triples:
        if t[t[a][b]][c] != t[a][t[b][c]]:
            raise ValueError(f"table is not associative at ({a},{b},{c})")
    return t


def _cyclic_product(moduli: Sequence[int]) -> FiniteGroup:
    moduli = tuple(int(m) for m in moduli)
    if not moduli:
        raise ValueError("a cyclic product needs at least one modulus")
    for m in moduli:
        if m < 2:
            raise ValueError(f"modulus {m} is invalid; every modulus must be >= 2")
    order = math.prod(moduli)
    if order > MAX_GROUP_ORDER:
        raise ValueError(f"group order {order} exceeds the supported maximum {MAX_GROUP_ORDER}")
    name = "z" + "x".join(str(m) for m in moduli)
    return FiniteGroup(kind="cyclic-product", order=order, name=name, moduli=moduli)


def _table_group(table: Sequence[Sequence[int]], name: str) -> FiniteGroup:
    if len(table) > MAX_GROUP_ORDER:
        raise ValueError(f"group order {len(table)} exceeds the supported maximum {MAX_GROUP_ORDER}")
    t = _validate_table(table)
    return FiniteGroup(kind="table", order=len(t), name=name, table=t)


def _dihedral_table(n: int) -> list[list[int]]:
    # element f*n + k stands for s^f r^k; s r^k s = r^-k
    size = 2 * n
    t = [[0] * size for _ in range(size)]
    for f1 in (0, 1):
        for k1 in range(n):
            for f2 in (0, 1):
                for k2 in range(n):
                    k = (k2 + (k1 if f2 == 0 else -k1)) % n
                    t[f1 * n + k1][f2 * n + k2] = (f1 ^ f2) * n + k
    return t


def _symmetric_perms(n: int) -> list[tuple[int, ...]]:
    return sorted(permutations(range(n)))


def _perm_table(perms: list[tuple[int, ...]]) -> list[list[int]]:
    index = {p: i for i, p in enumerate(perms)}
    t = []
    for p in perms:
        row = []
        for q in perms:
            row.append(index[tuple(p[q[i]] for i in range(len(p)))])
        t.append(row)
    return t


def _perm_parity(p: tuple[int, ...]) -> int:
    inversions = sum(
        1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j]
    )
    return inversions % 2


def _quaternion_table() -> list[list[int]]:
    # elements 2*axis + sign with axes (1, i, j, k); index 0 is +1
    prod = {}
    for a in range(4):
        prod[(0, a)] = (0, a)
        prod[(a, 0)] = (0, a)
    for a in (1, 2, 3):
        prod[(a, a)] = (1, 0)
    cyc = {(1, 2): 3, (2, 3): 1, (3, 1): 2}
    for (a, b), c in cyc.items():
        prod[(a, b)] = (0, c)
        prod[(b, a)] = (1, c)
    t = [[0] * 8 for _ in range(8)]
    for a in range(4):
        for sa in range(2):
            for b in range(4):
                for sb in range(2):
                    s, c = prod[(a, b)]
                    t[2 * a + sa][2 * b + sb] = 2 * c + ((sa + sb + s) % 2)
    return t


def make_group(spec) -> FiniteGroup:
    """Build a group from a moduli list, a spec string, or a table dict."""
    if isinstance(spec, FiniteGroup):
        return spec
    if isinstance(spec, str):
        return parse_group_spec(spec)
    if isinstance(spec, dict):
        if "table" not in spec:
            raise ValueError("group dict spec must contain a 'table' key")
        return _table_group(spec["table"], name="table")
    if isinstance(spec, (list, tuple)):
        return _cyclic_product(spec)
    raise ValueError(f"cannot interpret group spec {spec!r}")


def parse_group_spec(text: str) -> FiniteGroup:
    """Parse a group spec string.

    Grammar: ``zM1xM2x...`` for cyclic products, ``dihedral:N`` (or ``dN``),
    ``sym:N`` (or ``sN``, N <= 5), ``alt:N`` (or ``aN``, N <= 5), ``q8``, or a
    JSON object ``{"table": [[...]]}``.
    """
    s = text.strip()
    if not s:
        raise ValueError("empty group spec")
    if s.startswith("{"):
        try:
            obj = json.loads(s)
        except json.JSONDecodeError as exc:
            raise ValueError(f"bad JSON group spec: {exc}") from exc
        return make_group(obj)

    low = s.lower()
    if low in ("q8", "quaternion8"):
        return _table_group(_quaternion_table(), name="q8")

    head, _, arg = low.partition(":")
    if head in ("dihedral", "sym", "alt", "cyclic") and arg:
        try:
            n = int(arg)
        except ValueError:
            raise ValueError(f"bad parameter in group spec {text!r}") from None
        return _named_group(head, n)

    if low.startswith("z") and len(low) > 1:
        try:
            moduli = [int(p) for p in low[1:].split("x")]
        except ValueError:
            raise ValueError(f"bad cyclic-product spec {text!r}") from None
        return _cyclic_product(moduli)

    if low[0] in "dsa" and low[1:].isdigit():
        return _named_group({"d": "dihedral", "s": "sym", "a": "alt"}[low[0]], int(low[1:]))

    raise ValueError(f"unknown group spec {text!r}")


def _named_group(family: str, n: int) -> FiniteGroup:
    if family == "cyclic":
        return _cyclic_product([n])
    if family == "dihedral":
        if n < 1:
            raise ValueError(f"dihedral parameter must be >= 1, got {n}")
        return _table_group(_dihedral_table(n), name=f"dihedral:{n}")
    if family == "sym":
        if not 1 <= n <= 5:
            raise ValueError(f"symmetric groups are supported for 1 <= n <= 5, got {n}")
        return _table_group(_perm_table(_symmetric_perms(n)), name=f"sym:{n}")
    if family == "alt":
        if not 1 <= n <= 5:
            raise ValueError(f"alternating groups are supported for 1 <= n <= 5, got {n}")
        perms = [p for p in _symmetric_perms(n) if _perm_parity(p) == 0]
        return _table_group(_perm_table(perms), name=f"alt:{n}")
    raise ValueError(f"unknown group family {family!r}")


def element_order(G: FiniteGroup, a: int) -> int:
    """Multiplicative order of element a."""
    if not 0 <= a < G.order:
        raise ValueError(f"element {a} out of range for group of order {G.order}")
    if G.kind == "cyclic-product":
        o = 1
        for m, r in zip(G.moduli, G.decode(a)):
            o = math.lcm(o, m // math.gcd(m, r))
        return o
    o = 1
    x = a
    while x != 0:
        x = G.mul(a, x)
        o += 1
    return o


@dataclass(frozen=True)
class GeneratingSet:
    """A symmetric, identity-free subset of a group, split by element order.

    order2 holds the elements s with s = s^-1, sorted ascending.  pairs holds
    one (x, x^-1) tuple per inverse pair with x the smaller index, sorted by
    x.  d = t + len(pairs) counts "directions"; |elements| = 2d - t.
    """

    elements: frozenset[int]
    order2: tuple[int, ...]
    pairs: tuple[tuple[int, int], ...]
    d: int
    t: int
    generates: bool

    @property
    def size(self) -> int:
        return len(self.elements)

    def sorted_elements(self) -> tuple[int, ...]:
        return tuple(sorted(self.elements))

    def images(self) -> tuple[int, ...]:
        """Canonical direction representatives: order-2 first, then pair reps."""
        return self.order2 + tuple(p[0] for p in self.pairs)


def _closure(G: FiniteGroup, elems: Iterable[int]) -> set[int]:
    gens = list(elems)
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = G.mul(s, g)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return seen


def make_generating_set(
    G: FiniteGroup, elems: Iterable[int], allow_nongenerating: bool = False
) -> GeneratingSet:
    """Validate a symmetric generating set and compute its canonical split."""
    elements = frozenset(int(x) for x in elems)
    if not elements:
        raise ValueError("generating set is empty")
    for x in elements:
        if not 0 <= x < G.order:
            raise ValueError(f"element {x} out of range for group of order {G.order}")
    if 0 in elements:
        raise ValueError("generating set contains the identity")
    for x in elements:
        if G.inv(x) not in elements:
            raise ValueError(
                f"set is not symmetric: inverse of {x} is {G.inv(x)}, which is missing"
            )

    order2 = []
    pairs = []
    seen: set[int] = set()
    for x in sorted(elements):
        if x in seen:
            continue
        y = G.inv(x)
        if y == x:
            order2.append(x)
            seen.add(x)
        else:
            pairs.append((x, y))
            seen.add(x)
            seen.add(y)

    generates = len(_closure(G, elements)) == G.order
    if not generates and not allow_nongenerating:
        raise ValueError("set does not generate the group (pass allow_nongenerating to accept)")

    t = len(order2)
    return GeneratingSet(
        elements=elements,
        order2=tuple(order2),
        pairs=tuple(pairs),
        d=t + len(pairs),
        t=t,
        generates=generates,
    )


def enumerate_symmetric_generating_sets(
    G: FiniteGroup,
    max_size: int | None = None,
    cap: int = 32,
) -> Iterator[GeneratingSet]:
    """Yield every symmetric generating set of G with at most max_size elements.

    A symmetric identity-free subset is a union of involutions and whole
    inverse pairs, so enumeration walks subsets of that unit structure.  Units
    are ordered involutions first (ascending), then pairs (by smaller member),
    and subsets are visited in increasing binary-counter order over that unit
    list, which makes the output order deterministic.
    """
    if G.order > cap:
        raise BudgetExceeded(
            f"group order {G.order} exceeds the enumeration cap {cap}"
        )
    invs = [x for x in range(1, G.order) if G.inv(x) == x]
    pair_reps = [
        x for x in range(1, G.order) if G.inv(x) != x and x < G.inv(x)
    ]
    units: list[tuple[int, ...]] = [(x,) for x in invs]
    units += [(x, G.inv(x)) for x in pair_reps]
    u = len(units)
    limit = max_size if max_size is not None else G.order

    for mask in range(1, 1 << u):
        members: list[int] = []
        total = 0
        m = mask
        i = 0
        while m:
            if m & 1:
                members.extend(units[i])
                total += len(units[i])
                if total > limit:
                    break
            m >>= 1
            i += 1
        if total > limit:
            continue
        if len(_closure(G, members)) != G.order:
            continue
        yield make_generating_set(G, members)
