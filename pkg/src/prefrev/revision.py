"""Ranked direct comparisons, the level-wise addition operator, and its fixed point.

A preference assignment is a total preorder on the direct comparisons of a
chain, stored as an ordered partition into levels (best level first).  The
addition operator starts from the new information together with the cycle-free
part of the chain, then walks the levels and adds each level's contested
comparisons all-or-nothing: a level whose joint addition would close a cycle
contributes nothing.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable
from dataclasses import dataclass

from .relations import (
    Chain,
    Pair,
    Relation,
    _closed_rows,
    _is_irreflexive_rows,
    _split_parts,
    _union_rows,
    ensure_same_universe,
    ensure_spo,
)

RevisionOperator = Callable[[Chain, Relation], Relation]


@dataclass(frozen=True, slots=True)
class PreferenceAssignment:
    """Ordered partition of the direct-comparison indices 1..m, best level first.

    A level holding index ``k`` ranks the chain's k-th direct comparison; two
    indices in one level are tied.  Decisive assignments have only singleton
    levels, i.e. they are strict total orders on the direct comparisons.
    """

    chain: Chain
    levels: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        expected = set(range(1, len(self.chain.direct) + 1))
        seen: set[int] = set()
        for level in self.levels:
            if not level:
                raise ValueError("assignment levels must be nonempty")
            if level & seen:
                raise ValueError("assignment levels must be disjoint")
            seen |= level
        if seen != expected:
            raise ValueError(
                "assignment levels must partition the direct-comparison "
                f"indices 1..{len(expected)}"
            )

    @property
    def is_decisive(self) -> bool:
        return all(len(level) == 1 for level in self.levels)

    def level_pairs(self, position: int) -> frozenset[Pair]:
        """Direct-comparison pairs on the level at 0-based ``position``."""
        direct = self.chain.direct
        return frozenset(direct[k - 1] for k in self.levels[position])


def assignment(chain: Chain, levels: Iterable[Iterable[int]]) -> PreferenceAssignment:
    return PreferenceAssignment(chain, tuple(frozenset(level) for level in levels))


def trivial_assignment(chain: Chain) -> PreferenceAssignment:
    """All direct comparisons tied on a single level."""
    m = len(chain.direct)
    levels = (frozenset(range(1, m + 1)),) if m else ()
    return PreferenceAssignment(chain, levels)


def lex_assignment(chain: Chain) -> PreferenceAssignment:
    """Singleton levels in chain order: earlier direct comparisons rank better."""
    m = len(chain.direct)
    return PreferenceAssignment(chain, tuple(frozenset((k,)) for k in range(1, m + 1)))


@dataclass(frozen=True, slots=True)
class LevelStep:
    """One level of the addition operator: what was tried and what happened."""

    level: int
    attempted: frozenset[Pair]
    accepted: bool
    state: Relation


@dataclass(frozen=True, slots=True)
class RevisionTrace:
    base: Relation
    steps: tuple[LevelStep, ...]
    result: Relation


def _check_inputs(chain: Chain, sigma: Relation, asg: PreferenceAssignment) -> None:
    ensure_same_universe(chain.relation, sigma)
    ensure_spo(sigma)
    if asg.chain != chain:
        raise ValueError("assignment was built for a different chain")


def add_fixpoint(
    chain: Chain, sigma: Relation, asg: PreferenceAssignment
) -> RevisionTrace:
    """Run the addition operator level by level and record every decision.

    The base state is ``(sigma u cycle_free_part)+``.  Each level attempts the
    closure of the current state plus the level's contested comparisons and is
    accepted iff that closure is a strict partial order.  States never shrink,
    and re-running any level on the result changes nothing.
    """
    _check_inputs(chain, sigma, asg)
    cf_rows, contested = _split_parts(chain, _union_rows(chain, sigma))
    base_rows = _closed_rows([a | b for a, b in zip(sigma.rows, cf_rows)])
    size = sigma.size
    base = Relation(size, tuple(base_rows))
    state = base.rows
    steps: list[LevelStep] = []
    for position, _ in enumerate(asg.levels):
        attempt = asg.level_pairs(position) & contested
        candidate = list(state)
        for a, b in attempt:
            candidate[a] |= 1 << b
        candidate = _closed_rows(candidate)
        accepted = _is_irreflexive_rows(candidate)
        if accepted:
            state = tuple(candidate)
        steps.append(LevelStep(position + 1, attempt, accepted, Relation(size, state)))
    return RevisionTrace(base, tuple(steps), Relation(size, state))


def revise(chain: Chain, sigma: Relation, asg: PreferenceAssignment) -> Relation:
    """Fixed point of the addition operator; always a strict partial order.

    Equivalent to ``add_fixpoint(...).result`` without building the trace.
    """
    _check_inputs(chain, sigma, asg)
    cf_rows, contested = _split_parts(chain, _union_rows(chain, sigma))
    state = _closed_rows([a | b for a, b in zip(sigma.rows, cf_rows)])
    for position, _ in enumerate(asg.levels):
        attempt = asg.level_pairs(position) & contested
        if not attempt:
            continue
        candidate = list(state)
        for a, b in attempt:
            candidate[a] |= 1 << b
        candidate = _closed_rows(candidate)
        if _is_irreflexive_rows(candidate):
            state = candidate
    return Relation(sigma.size, tuple(state))


def induced_operator(asg: PreferenceAssignment) -> RevisionOperator:
    """The revision operator defined by ``asg`` on its chain."""

    def op(chain: Chain, sigma: Relation) -> Relation:
        return revise(chain, sigma, asg)

    return op
