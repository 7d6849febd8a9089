"""Exhaustive enumerators, an independent greedy revision oracle, and theorem suites.

The suites mechanically verify, at desk scale, that induced operators behave
exactly as the representation results promise: completion membership and
cycle-free preservation everywhere, the coordination equivalence for the
two-step postulates, totality and transitivity of revealed orders, roundtrip
agreement between an operator and the operator rebuilt from its revealed
order, and the decisive variants.  Exhaustive mode scans universe sizes from 1
upward, so any reported counterexample already lives on a minimal universe;
sampled mode is seeded and replayable.
"""

from __future__ import annotations

import random
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from typing import Any

from .postulates import (
    RevealedOrderError,
    check_p1,
    check_p2,
    check_p3,
    check_p4,
    check_pd,
    is_coordinated,
    revealed_relation,
    roundtrip_representation,
)
from .relations import (
    Chain,
    Pair,
    Relation,
    chain_from_sequence,
    cycle_free_part,
    cyclic_part,
    decisive_completions,
    is_spo,
    transitive_closure,
    union_plus,
)
from .revision import (
    PreferenceAssignment,
    lex_assignment,
    revise,
    trivial_assignment,
)

_EXHAUSTIVE_MAX = 5
_MAX_DIRECT = 5


@dataclass(frozen=True, slots=True)
class InstanceSpace:
    """What to sweep: universe size, chain shape, and exhaustive versus sampled."""

    n: int
    full_chains_only: bool = True
    samples: int | None = None
    seed: int = 0


@dataclass(frozen=True, slots=True)
class Counterexample:
    kind: str
    universe: int
    chain_items: tuple[int, ...]
    sigma: tuple[Pair, ...]
    sigma2: tuple[Pair, ...] | None = None
    levels: tuple[tuple[int, ...], ...] | None = None
    detail: str = ""

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "kind": self.kind,
            "universe": self.universe,
            "chain": list(self.chain_items),
            "sigma": [list(p) for p in self.sigma],
            "detail": self.detail,
        }
        if self.sigma2 is not None:
            out["sigma2"] = [list(p) for p in self.sigma2]
        if self.levels is not None:
            out["levels"] = [sorted(level) for level in self.levels]
        return out


@dataclass(slots=True)
class SuiteResult:
    suite: str
    instances: int
    failures: list[Counterexample] = field(default_factory=list)
    seed: int | None = None

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict[str, Any]:
        return {
            "suite": self.suite,
            "verdict": "pass" if self.ok else "fail",
            "instances": self.instances,
            "failures": [f.to_dict() for f in self.failures],
            "seed": self.seed,
        }


def enumerate_chains(n: int, full_only: bool = True) -> Iterator[Chain]:
    """Every chain over the universe exactly once; optionally only the
    permutations of the full universe."""
    if n < 1:
        raise ValueError("universe size must be positive")
    sizes = [n] if full_only else range(1, n + 1)
    for k in sizes:
        for items in permutations(range(n), k):
            yield chain_from_sequence(items, n)


@lru_cache(maxsize=8)
def enumerate_spos(n: int) -> tuple[Relation, ...]:
    """Every strict partial order over the universe, by filtering all
    irreflexive relations; guarded to keep the scan under 2^20 candidates."""
    if not 1 <= n <= _EXHAUSTIVE_MAX:
        raise ValueError(f"exhaustive enumeration supports 1..{_EXHAUSTIVE_MAX} items")
    slots = [(a, b) for a in range(n) for b in range(n) if a != b]
    out = []
    for mask in range(1 << len(slots)):
        rows = [0] * n
        for t, (a, b) in enumerate(slots):
            if mask >> t & 1:
                rows[a] |= 1 << b
        candidate = Relation(n, tuple(rows))
        if is_spo(candidate):
            out.append(candidate)
    return tuple(out)


def ordered_partitions(items: Sequence[int]) -> Iterator[list[list[int]]]:
    """All ordered set partitions; counts are the ordered Bell numbers."""
    if not items:
        yield []
        return
    head, last = items[:-1], items[-1]
    for smaller in ordered_partitions(head):
        for i, block in enumerate(smaller):
            yield smaller[:i] + [block + [last]] + smaller[i + 1 :]
        for i in range(len(smaller) + 1):
            yield smaller[:i] + [[last]] + smaller[i:]


def enumerate_assignments(chain: Chain) -> Iterator[PreferenceAssignment]:
    """Every total preorder on the chain's direct comparisons."""
    m = len(chain.direct)
    if m > _MAX_DIRECT:
        raise ValueError(
            f"refusing to enumerate assignments over {m} direct comparisons "
            f"(guard is {_MAX_DIRECT})"
        )
    for partition in ordered_partitions(range(1, m + 1)):
        yield PreferenceAssignment(chain, tuple(frozenset(b) for b in partition))


def greedy_oracle_revision(
    chain: Chain, sigma: Relation, asg: PreferenceAssignment
) -> Relation:
    """Independent re-derivation of the revision result, used as a cross-check.

    Enumerates every contested subset whose closure with sigma and the
    cycle-free part stays a strict partial order, then walks the levels
    keeping a level's contested comparisons iff they are jointly addable to
    the running selection.
    """
    if asg.chain != chain:
        raise ValueError("assignment was built for a different chain")
    cf = cycle_free_part(chain, sigma)
    contested = sorted(cyclic_part(chain, sigma))
    if len(contested) > 20:
        raise ValueError("contested set too large for subset enumeration")
    anchor = union_plus(sigma, cf)

    feasible: set[frozenset[Pair]] = set()
    for mask in range(1 << len(contested)):
        delta = frozenset(contested[t] for t in range(len(contested)) if mask >> t & 1)
        candidate = transitive_closure(anchor.union(Relation.from_pairs(sigma.size, delta)))
        if candidate.is_irreflexive():
            feasible.add(delta)

    selection: frozenset[Pair] = frozenset()
    for position, _ in enumerate(asg.levels):
        attempt = selection | (asg.level_pairs(position) & frozenset(contested))
        if attempt in feasible:
            selection = attempt
    return transitive_closure(anchor.union(Relation.from_pairs(sigma.size, selection)))


def _random_chain(rng: random.Random, n: int, full_only: bool) -> Chain:
    k = n if full_only else rng.randint(1, n)
    return chain_from_sequence(rng.sample(range(n), k), n)


def _random_spo(rng: random.Random, n: int) -> Relation:
    order = rng.sample(range(n), n)
    density = rng.uniform(0.15, 0.85)
    pairs = [
        (order[i], order[j])
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < density
    ]
    return transitive_closure(Relation.from_pairs(n, pairs))


def _random_assignment(rng: random.Random, chain: Chain) -> PreferenceAssignment:
    indices = list(range(1, len(chain.direct) + 1))
    rng.shuffle(indices)
    levels: list[list[int]] = []
    for idx in indices:
        if levels and rng.random() < 0.4:
            levels[-1].append(idx)
        else:
            levels.append([idx])
    return PreferenceAssignment(chain, tuple(frozenset(b) for b in levels))


def _levels_key(asg: PreferenceAssignment) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(sorted(level)) for level in asg.levels)


def _caching_operator(asg: PreferenceAssignment, memo: dict):
    key = _levels_key(asg)

    def op(chain: Chain, sigma: Relation) -> Relation:
        cache_key = (key, sigma.rows)
        hit = memo.get(cache_key)
        if hit is None:
            hit = memo[cache_key] = revise(chain, sigma, asg)
        return hit

    return op


def _sizes(space: InstanceSpace) -> list[int]:
    if space.n < 1:
        raise ValueError("universe size must be positive")
    if space.samples is not None:
        return [space.n]
    if space.n > _EXHAUSTIVE_MAX:
        raise ValueError(
            f"exhaustive sweeps support n <= {_EXHAUSTIVE_MAX}; pass samples for larger sizes"
        )
    return list(range(1, space.n + 1))


def _fail(
    kind: str,
    chain: Chain,
    sigma: Relation,
    detail: str,
    sigma2: Relation | None = None,
    asg: PreferenceAssignment | None = None,
) -> Counterexample:
    return Counterexample(
        kind,
        chain.size,
        chain.items,
        tuple(sigma.sorted_pairs()),
        tuple(sigma2.sorted_pairs()) if sigma2 is not None else None,
        _levels_key(asg) if asg is not None else None,
        detail,
    )


def _iter_single_instances(space: InstanceSpace):
    """(chain, sigma, assignment) triples, exhaustively or sampled."""
    if space.samples is None:
        for size in _sizes(space):
            for chain in enumerate_chains(size, space.full_chains_only):
                for sigma in enumerate_spos(size):
                    for asg in enumerate_assignments(chain):
                        yield chain, sigma, asg
    else:
        rng = random.Random(space.seed)
        for _ in range(space.samples):
            chain = _random_chain(rng, space.n, space.full_chains_only)
            yield chain, _random_spo(rng, space.n), _random_assignment(rng, chain)


def _iter_operator_instances(space: InstanceSpace):
    """(chain, assignment) pairs, exhaustively or sampled."""
    if space.samples is None:
        for size in _sizes(space):
            for chain in enumerate_chains(size, space.full_chains_only):
                for asg in enumerate_assignments(chain):
                    yield chain, asg
    else:
        rng = random.Random(space.seed)
        for _ in range(space.samples):
            chain = _random_chain(rng, space.n, space.full_chains_only)
            yield chain, _random_assignment(rng, chain)


def _iter_pair_instances(space: InstanceSpace):
    """(chain, sigma1, sigma2) triples with the joint closure a strict partial order."""
    if space.samples is None:
        for size in _sizes(space):
            spos = enumerate_spos(size)
            for chain in enumerate_chains(size, space.full_chains_only):
                for sigma1 in spos:
                    for sigma2 in spos:
                        if is_spo(union_plus(sigma1, sigma2)):
                            yield chain, sigma1, sigma2
    else:
        rng = random.Random(space.seed)
        produced = 0
        while produced < space.samples:
            chain = _random_chain(rng, space.n, space.full_chains_only)
            sigma1 = _random_spo(rng, space.n)
            sigma2 = _random_spo(rng, space.n)
            if not is_spo(union_plus(sigma1, sigma2)):
                continue
            produced += 1
            yield chain, sigma1, sigma2


def _suite_t2_p12(space: InstanceSpace) -> SuiteResult:
    """Every induced operator satisfies completion membership and cycle-free
    preservation, on every instance."""
    result = SuiteResult("T2_P12", 0, seed=space.seed if space.samples else None)
    for chain, sigma, asg in _iter_single_instances(space):
        result.instances += 1
        revised = revise(chain, sigma, asg)
        for report in (check_p1(chain, sigma, revised), check_p2(chain, sigma, revised)):
            if not report.holds:
                result.failures.append(
                    _fail(report.postulate, chain, sigma, report.detail, asg=asg)
                )
        if result.failures and space.samples is None:
            break
    return result


def t1_instance_holds(
    chain: Chain, sigma1: Relation, sigma2: Relation
) -> tuple[bool, bool, PreferenceAssignment | None]:
    """One coordination-equivalence probe.

    Returns (coordinated, every assignment satisfies P3 and P4, a violating
    assignment if one exists).
    """
    coordinated, _ = is_coordinated(chain, sigma1, sigma2)
    memo: dict = {}
    for asg in enumerate_assignments(chain):
        op = _caching_operator(asg, memo)
        if not check_p3(chain, sigma1, sigma2, op).holds:
            return coordinated, False, asg
        if not check_p4(chain, sigma1, sigma2, op).holds:
            return coordinated, False, asg
    return coordinated, True, None


def _suite_t1(space: InstanceSpace) -> SuiteResult:
    """Coordination equivalence: all assignments satisfy P3 and P4 on an
    instance iff the two incoming preferences are coordinated there."""
    result = SuiteResult("T1", 0, seed=space.seed if space.samples else None)
    for chain, sigma1, sigma2 in _iter_pair_instances(space):
        result.instances += 1
        coordinated, all_hold, violator = t1_instance_holds(chain, sigma1, sigma2)
        if coordinated != all_hold:
            side = (
                "coordinated yet some assignment violates P3/P4"
                if coordinated
                else "not coordinated yet every assignment satisfies P3 and P4"
            )
            result.failures.append(
                _fail("T1", chain, sigma1, side, sigma2=sigma2, asg=violator)
            )
            if space.samples is None:
                break
    return result


def _suite_l1(space: InstanceSpace) -> SuiteResult:
    """Revealed relations of induced operators are total and transitive."""
    result = SuiteResult("L1", 0, seed=space.seed if space.samples else None)
    for chain, asg in _iter_operator_instances(space):
        result.instances += 1
        revealed = revealed_relation(chain, _caching_operator(asg, {}))
        bad = revealed.totality_violations() or revealed.transitivity_violations()
        if bad:
            result.failures.append(
                _fail("L1", chain, Relation.empty(chain.size), f"violations: {bad}", asg=asg)
            )
            if space.samples is None:
                break
    return result


def _suite_t3(space: InstanceSpace) -> SuiteResult:
    """Roundtrip representation: the operator induced by an assignment agrees
    everywhere with the operator induced by its revealed preorder."""
    result = SuiteResult("T3", 0, seed=space.seed if space.samples else None)
    for chain, asg in _iter_operator_instances(space):
        result.instances += 1
        pool = enumerate_spos(chain.size)
        try:
            agrees = roundtrip_representation(chain, asg, pool)
        except RevealedOrderError as err:
            result.failures.append(
                _fail("T3", chain, Relation.empty(chain.size), str(err), asg=asg)
            )
            if space.samples is None:
                break
            continue
        if not agrees:
            result.failures.append(
                _fail(
                    "T3",
                    chain,
                    Relation.empty(chain.size),
                    "revealed assignment induces a different operator",
                    asg=asg,
                )
            )
            if space.samples is None:
                break
    return result


def _suite_t4(space: InstanceSpace) -> SuiteResult:
    """Decisive assignments: decisiveness holds wherever a decisive completion
    exists, preservation always, the revealed order is strict, and the
    roundtrip agrees."""
    result = SuiteResult("T4", 0, seed=space.seed if space.samples else None)
    for chain, sigma, asg in _iter_single_instances(space):
        if not asg.is_decisive:
            continue
        result.instances += 1
        revised = revise(chain, sigma, asg)
        reports = [check_p2(chain, sigma, revised)]
        if decisive_completions(chain, sigma):
            reports.append(check_pd(chain, sigma, revised))
        for report in reports:
            if not report.holds:
                result.failures.append(
                    _fail(f"T4/{report.postulate}", chain, sigma, report.detail, asg=asg)
                )
        revealed = revealed_relation(chain, _caching_operator(asg, {}))
        strict = all(
            revealed.leq[i][j] != revealed.leq[j][i]
            for i in range(len(revealed.leq))
            for j in range(i + 1, len(revealed.leq))
        )
        if not strict or not roundtrip_representation(chain, asg, (sigma,)):
            result.failures.append(
                _fail("T4/revealed", chain, sigma, "revealed order not strict or disagrees", asg=asg)
            )
        if result.failures and space.samples is None:
            break
    return result


def _suite_prop1(space: InstanceSpace) -> SuiteResult:
    """The trivial operator satisfies P1-P4 and the lexicographic operator
    satisfies PD (where a decisive completion exists) and P2-P4, with the
    two-step postulates taken on coordinated inputs."""
    result = SuiteResult("PROP1", 0, seed=space.seed if space.samples else None)
    memo: dict = {}

    def single(chain: Chain, sigma: Relation) -> None:
        for name, asg in (("trivial", trivial_assignment(chain)), ("lex", lex_assignment(chain))):
            result.instances += 1
            revised = _caching_operator(asg, memo)(chain, sigma)
            reports = [check_p1(chain, sigma, revised), check_p2(chain, sigma, revised)]
            if name == "lex" and decisive_completions(chain, sigma):
                reports.append(check_pd(chain, sigma, revised))
            for report in reports:
                if not report.holds:
                    result.failures.append(
                        _fail(f"PROP1/{name}/{report.postulate}", chain, sigma, report.detail, asg=asg)
                    )

    def pair(chain: Chain, sigma1: Relation, sigma2: Relation) -> None:
        coordinated, _ = is_coordinated(chain, sigma1, sigma2)
        if not coordinated:
            return
        for name, asg in (("trivial", trivial_assignment(chain)), ("lex", lex_assignment(chain))):
            result.instances += 1
            op = _caching_operator(asg, memo)
            for report in (
                check_p3(chain, sigma1, sigma2, op),
                check_p4(chain, sigma1, sigma2, op),
            ):
                if not report.holds:
                    result.failures.append(
                        _fail(f"PROP1/{name}/{report.postulate}", chain, sigma1, report.detail, sigma2=sigma2, asg=asg)
                    )

    if space.samples is None:
        for size in _sizes(space):
            for chain in enumerate_chains(size, space.full_chains_only):
                for sigma in enumerate_spos(size):
                    single(chain, sigma)
            spos = enumerate_spos(size)
            for chain in enumerate_chains(size, space.full_chains_only):
                for sigma1 in spos:
                    for sigma2 in spos:
                        if is_spo(union_plus(sigma1, sigma2)):
                            pair(chain, sigma1, sigma2)
            if result.failures:
                break
    else:
        rng = random.Random(space.seed)
        for _ in range(space.samples):
            chain = _random_chain(rng, space.n, space.full_chains_only)
            single(chain, _random_spo(rng, space.n))
            sigma1 = _random_spo(rng, space.n)
            sigma2 = _random_spo(rng, space.n)
            if is_spo(union_plus(sigma1, sigma2)):
                pair(chain, sigma1, sigma2)
    return result


def _suite_oracle(space: InstanceSpace) -> SuiteResult:
    """The engine agrees with the independent greedy oracle everywhere."""
    result = SuiteResult("ORACLE", 0, seed=space.seed if space.samples else None)
    for chain, sigma, asg in _iter_single_instances(space):
        result.instances += 1
        if revise(chain, sigma, asg) != greedy_oracle_revision(chain, sigma, asg):
            result.failures.append(
                _fail("ORACLE", chain, sigma, "engine and oracle disagree", asg=asg)
            )
            if space.samples is None:
                break
    return result


SUITES = {
    "T2_P12": _suite_t2_p12,
    "T1": _suite_t1,
    "L1": _suite_l1,
    "T3": _suite_t3,
    "T4": _suite_t4,
    "PROP1": _suite_prop1,
    "ORACLE": _suite_oracle,
}


def run_theorem_suite(space: InstanceSpace, suite: str) -> SuiteResult:
    """Run one named suite over the instance space."""
    key = suite.upper()
    if key not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {sorted(SUITES)}")
    return SUITES[key](space)
