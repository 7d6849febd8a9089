"""Bitset-backed algebra of finite binary relations, strict partial orders, and chains.

Items are dense integer indices ``0..size-1``.  A relation keeps one adjacency
bitmask per item (bit ``j`` of ``rows[i]`` encodes the pair ``(i, j)``), so
membership tests, unions and transitive closures stay within a few machine
words for universes up to :data:`MAX_ITEMS`.  All values are immutable and
hashable, and every operation is pure, so they can be shared freely across
threads.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass

Pair = tuple[int, int]

#: Default cap on universe size; one adjacency row then fits a machine word.
MAX_ITEMS = 64


def _closed_rows(rows: list[int]) -> list[int]:
    """In-place Floyd-Warshall reachability (paths of length >= 1) over bit rows."""
    n = len(rows)
    for k in range(n):
        bit = 1 << k
        row_k = rows[k]
        for i in range(n):
            if rows[i] & bit:
                rows[i] |= row_k
    return rows


def _is_irreflexive_rows(rows: list[int] | tuple[int, ...]) -> bool:
    return all(not row >> i & 1 for i, row in enumerate(rows))


@dataclass(frozen=True, slots=True)
class Relation:
    """Immutable binary relation over items ``0..size-1``.

    Equality and hashing follow set equality of the contained pairs (given the
    same universe size).  Self-pairs ``(i, i)`` may occur inside closures of
    cyclic unions; validated strict partial orders never contain them.
    """

    size: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if not 1 <= self.size <= MAX_ITEMS:
            raise ValueError(
                f"universe size must be within 1..{MAX_ITEMS}, got {self.size}"
            )
        if len(self.rows) != self.size:
            raise ValueError("adjacency row count must equal the universe size")

    @classmethod
    def empty(cls, size: int) -> Relation:
        return cls(size, (0,) * size)

    @classmethod
    def from_pairs(cls, size: int, pairs: Iterable[Pair]) -> Relation:
        rows = [0] * size
        for a, b in pairs:
            if not (0 <= a < size and 0 <= b < size):
                raise ValueError(
                    f"pair ({a}, {b}) falls outside the universe of size {size}"
                )
            rows[a] |= 1 << b
        return cls(size, tuple(rows))

    def iter_pairs(self) -> Iterator[Pair]:
        """Yield pairs in lexicographic order."""
        for a, row in enumerate(self.rows):
            while row:
                low = row & -row
                yield (a, low.bit_length() - 1)
                row ^= low

    def pairs(self) -> frozenset[Pair]:
        return frozenset(self.iter_pairs())

    def sorted_pairs(self) -> list[Pair]:
        return list(self.iter_pairs())

    def __contains__(self, pair: Pair) -> bool:
        a, b = pair
        return 0 <= a < self.size and 0 <= b < self.size and bool(self.rows[a] >> b & 1)

    def __len__(self) -> int:
        return sum(row.bit_count() for row in self.rows)

    def union(self, other: Relation) -> Relation:
        """Plain pairwise union, without closing transitively."""
        ensure_same_universe(self, other)
        return Relation(self.size, tuple(a | b for a, b in zip(self.rows, other.rows)))

    def issubset(self, other: Relation) -> bool:
        ensure_same_universe(self, other)
        return all(a & ~b == 0 for a, b in zip(self.rows, other.rows))

    def is_irreflexive(self) -> bool:
        return _is_irreflexive_rows(self.rows)


def ensure_same_universe(a: Relation, b: Relation) -> None:
    if a.size != b.size:
        raise ValueError(f"universe mismatch: {a.size} versus {b.size} items")


def transitive_closure(r: Relation) -> Relation:
    """Smallest transitive superset of ``r``.

    Idempotent and monotone; if ``r`` has a cycle, the closure contains a
    self-pair for every item on that cycle.
    """
    return Relation(r.size, tuple(_closed_rows(list(r.rows))))


def is_spo(r: Relation) -> bool:
    """True iff ``r`` is transitive and irreflexive."""
    rows = r.rows
    for i, row in enumerate(rows):
        if row >> i & 1:
            return False
        rest = row
        while rest:
            low = rest & -rest
            if rows[low.bit_length() - 1] & ~row:
                return False
            rest ^= low
    return True


def ensure_spo(r: Relation, what: str = "sigma") -> None:
    if not is_spo(r):
        raise ValueError(f"{what} must be a strict partial order")


def union_plus(r1: Relation, r2: Relation) -> Relation:
    """Transitive closure of the pairwise union; commutative."""
    ensure_same_universe(r1, r2)
    return Relation(
        r1.size, tuple(_closed_rows([a | b for a, b in zip(r1.rows, r2.rows)]))
    )


@dataclass(frozen=True, slots=True)
class Chain:
    """Strict linear order over a subset of the universe.

    ``relation`` is the full transitive closure of the consecutive pairs; the
    consecutive pairs themselves are the chain's direct comparisons, indexed
    1..len(items)-1 in chain order.
    """

    items: tuple[int, ...]
    size: int
    relation: Relation

    @property
    def direct(self) -> tuple[Pair, ...]:
        return tuple(zip(self.items, self.items[1:]))

    def __len__(self) -> int:
        return len(self.items)


def chain_from_sequence(seq: Iterable[int], size: int | None = None) -> Chain:
    """Build the chain ranking ``seq[0]`` best, ``seq[-1]`` worst.

    ``size`` defaults to ``max(seq) + 1``.  Duplicate items are rejected.
    """
    items = tuple(seq)
    if not items:
        raise ValueError("a chain needs at least one item")
    if len(set(items)) != len(items):
        raise ValueError("chain items must be distinct")
    if size is None:
        size = max(items) + 1
    rows = [0] * size
    for pos, a in enumerate(items):
        if not 0 <= a < size:
            raise ValueError(f"item {a} falls outside the universe of size {size}")
        for b in items[pos + 1 :]:
            rows[a] |= 1 << b
    return Chain(items, size, Relation(size, tuple(rows)))


def direct_comparisons(chain: Chain) -> tuple[Pair, ...]:
    """The chain's explicit comparison atoms, in chain order (index 1 first)."""
    return chain.direct


def _union_rows(chain: Chain, sigma: Relation) -> list[int]:
    ensure_same_universe(chain.relation, sigma)
    ensure_spo(sigma)
    return _closed_rows([a | b for a, b in zip(chain.relation.rows, sigma.rows)])


def _split_parts(chain: Chain, closed: list[int]) -> tuple[list[int], frozenset[Pair]]:
    """Cycle-free rows and contested direct comparisons of a closed union."""
    keep = []
    for i, row in enumerate(closed):
        bits = 0
        rest = row
        while rest:
            low = rest & -rest
            if not closed[low.bit_length() - 1] >> i & 1:
                bits |= low
            rest ^= low
        keep.append(bits)
    contested = frozenset((a, b) for a, b in chain.direct if closed[b] >> a & 1)
    return keep, contested


def cycle_free_part(chain: Chain, sigma: Relation) -> Relation:
    """Pairs of ``(chain u sigma)+`` whose reverse is absent from it.

    This is the undisputed content of the union: exactly the pairs not
    involved in any cycle.  Equals ``union_plus(chain, sigma)`` whenever that
    union is a strict partial order.
    """
    keep, _ = _split_parts(chain, _union_rows(chain, sigma))
    return Relation(sigma.size, tuple(keep))


def cyclic_part(chain: Chain, sigma: Relation) -> frozenset[Pair]:
    """Direct comparisons of the chain whose reverse lies in ``(chain u sigma)+``.

    Disjoint from :func:`cycle_free_part`; empty iff the union closure is a
    strict partial order.
    """
    _, contested = _split_parts(chain, _union_rows(chain, sigma))
    return contested


def _completion_set(
    chain: Chain, sigma: Relation, max_direct: int, require_nonempty: bool
) -> frozenset[Relation]:
    ensure_same_universe(chain.relation, sigma)
    ensure_spo(sigma)
    direct = chain.direct
    if len(direct) > max_direct:
        raise ValueError(
            f"refusing to enumerate 2^{len(direct)} completion candidates "
            f"(guard is {max_direct} direct comparisons)"
        )
    out: set[Relation] = set()
    first = 1 if require_nonempty else 0
    for mask in range(first, 1 << len(direct)):
        rows = list(sigma.rows)
        for t, (a, b) in enumerate(direct):
            if mask >> t & 1:
                rows[a] |= 1 << b
        closed = _closed_rows(rows)
        if _is_irreflexive_rows(closed):
            out.add(Relation(sigma.size, tuple(closed)))
    return frozenset(out)


def completions(
    chain: Chain, sigma: Relation, max_direct: int = 20
) -> frozenset[Relation]:
    """All strict partial orders ``(sigma u delta)+`` with ``delta`` a subset
    of the chain's direct comparisons, deduplicated."""
    return _completion_set(chain, sigma, max_direct, require_nonempty=False)


def decisive_completions(
    chain: Chain, sigma: Relation, max_direct: int = 20
) -> frozenset[Relation]:
    """Like :func:`completions` but requiring a nonempty ``delta``; may be empty."""
    return _completion_set(chain, sigma, max_direct, require_nonempty=True)
