"""Rationality postulate checkers, coordination, and revealed preference orders.

The checkers take concrete inputs plus (for the two-step postulates) the
revision operator as a callable, so they work for induced operators and for
any other candidate operator alike.  Reports carry re-checkable witnesses:
the offending comparisons for failed inclusions, and for coordination a
minimal contested subset whose joint addition only one side survives.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Any

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
    is_spo,
    union_plus,
)
from .revision import PreferenceAssignment, RevisionOperator, revise


@dataclass(frozen=True, slots=True)
class PostulateReport:
    """Verdict for one postulate on one instance.

    ``witness`` lists offending comparisons when an inclusion fails.  A report
    may be ``vacuous``: the postulate's own precondition did not apply (the
    verdict is then ``holds=True``), but the witness still records the raw
    inclusion difference for inspection.
    """

    postulate: str
    holds: bool
    witness: tuple[Pair, ...] = ()
    vacuous: bool = False
    detail: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "postulate": self.postulate,
            "verdict": "pass" if self.holds else "fail",
            "witness": [list(p) for p in self.witness],
            "vacuous": self.vacuous,
            "detail": self.detail,
        }


def _diff_pairs(left: Relation, right: Relation) -> tuple[Pair, ...]:
    """Pairs of ``left`` missing from ``right``, in lexicographic order."""
    out = []
    for i, (a, b) in enumerate(zip(left.rows, right.rows)):
        rest = a & ~b
        while rest:
            low = rest & -rest
            out.append((i, low.bit_length() - 1))
            rest ^= low
    return tuple(out)


def _anchored_regeneration(chain: Chain, sigma: Relation, result: Relation) -> Relation:
    """Closure of sigma, the cycle-free part, and the direct comparisons kept
    by ``result`` -- what a completion-shaped result must equal."""
    cf_rows, _ = _split_parts(chain, _union_rows(chain, sigma))
    rows = [a | b for a, b in zip(sigma.rows, cf_rows)]
    for a, b in chain.direct:
        if result.rows[a] >> b & 1:
            rows[a] |= 1 << b
    return Relation(sigma.size, tuple(_closed_rows(rows)))


def check_p1(chain: Chain, sigma: Relation, result: Relation) -> PostulateReport:
    """Completion membership: the result must be a strict partial order built
    from sigma, the undisputed cycle-free content, and direct comparisons of
    the chain only -- no comparisons from any other source."""
    ensure_same_universe(chain.relation, sigma)
    ensure_same_universe(sigma, result)
    ensure_spo(sigma)
    if not is_spo(result):
        return PostulateReport("P1", False, detail="result is not a strict partial order")
    if not sigma.issubset(result):
        return PostulateReport(
            "P1", False, _diff_pairs(sigma, result), detail="result does not contain sigma"
        )
    regenerated = _anchored_regeneration(chain, sigma, result)
    if regenerated == result:
        return PostulateReport("P1", True)
    return PostulateReport(
        "P1",
        False,
        _diff_pairs(result, regenerated),
        detail="result holds comparisons justified by neither sigma nor the chain",
    )


def check_p2(chain: Chain, sigma: Relation, result: Relation) -> PostulateReport:
    """Preservation: the cycle-free part of the chain with respect to sigma
    must survive into the result."""
    ensure_same_universe(chain.relation, sigma)
    ensure_same_universe(sigma, result)
    cf_rows, _ = _split_parts(chain, _union_rows(chain, sigma))
    missing = _diff_pairs(Relation(sigma.size, tuple(cf_rows)), result)
    if missing:
        return PostulateReport(
            "P2", False, missing, detail="cycle-free comparisons were dropped"
        )
    return PostulateReport("P2", True)


def _two_step_inputs(
    chain: Chain, sigma1: Relation, sigma2: Relation
) -> Relation:
    ensure_same_universe(chain.relation, sigma1)
    ensure_same_universe(sigma1, sigma2)
    ensure_spo(sigma1, "sigma1")
    ensure_spo(sigma2, "sigma2")
    joint = union_plus(sigma1, sigma2)
    if not is_spo(joint):
        raise ValueError("sigma1 and sigma2 must jointly close to a strict partial order")
    return joint


def check_p3(
    chain: Chain, sigma1: Relation, sigma2: Relation, op: RevisionOperator
) -> PostulateReport:
    """Stability under joint arrival: revising by the joint information never
    yields comparisons beyond the closure of the stepwise route."""
    joint = _two_step_inputs(chain, sigma1, sigma2)
    left = op(chain, joint)
    right = union_plus(op(chain, sigma1), sigma2)
    missing = _diff_pairs(left, right)
    if missing:
        return PostulateReport(
            "P3", False, missing, detail="joint revision exceeds the stepwise closure"
        )
    return PostulateReport("P3", True)


def check_p4(
    chain: Chain, sigma1: Relation, sigma2: Relation, op: RevisionOperator
) -> PostulateReport:
    """Stability in the other direction: whenever the stepwise closure is a
    strict partial order, it is contained in the joint revision.

    If the stepwise closure is cyclic the postulate does not apply and the
    verdict is a vacuous pass; the witness still lists the raw inclusion
    difference against the joint revision.
    """
    joint = _two_step_inputs(chain, sigma1, sigma2)
    left = union_plus(op(chain, sigma1), sigma2)
    right = op(chain, joint)
    missing = _diff_pairs(left, right)
    if not is_spo(left):
        return PostulateReport(
            "P4",
            True,
            missing,
            vacuous=True,
            detail="stepwise closure is not a strict partial order",
        )
    if missing:
        return PostulateReport(
            "P4", False, missing, detail="stepwise closure exceeds the joint revision"
        )
    return PostulateReport("P4", True)


def check_pd(chain: Chain, sigma: Relation, result: Relation) -> PostulateReport:
    """Decisiveness: completion membership plus at least one direct comparison
    of the chain actually retained."""
    base = check_p1(chain, sigma, result)
    if not base.holds:
        return PostulateReport("PD", False, base.witness, detail=base.detail)
    if any(result.rows[a] >> b & 1 for a, b in chain.direct):
        return PostulateReport("PD", True)
    return PostulateReport(
        "PD", False, detail="no direct comparison of the chain was retained"
    )


@dataclass(frozen=True, slots=True)
class CoordinationWitness:
    """A contested subset breaking coordination: it extends sigma1 to a strict
    partial order, yet jointly with sigma2 it closes a cycle."""

    delta: tuple[Pair, ...]
    reason: str


def is_coordinated(
    chain: Chain,
    sigma1: Relation,
    sigma2: Relation,
    max_contested: int = 20,
) -> tuple[bool, CoordinationWitness | None]:
    """Whether sigma2 never invalidates contested choices viable under sigma1.

    Quantifies over subsets of the contested direct comparisons that are fresh
    with respect to ``(sigma1 u sigma2)+`` (neither the comparison nor its
    reverse already decided).  On failure returns a witness of minimal
    cardinality, ties broken lexicographically by chain position.
    """
    joint = _two_step_inputs(chain, sigma1, sigma2)
    _, contested = _split_parts(chain, _union_rows(chain, sigma1))
    fresh = [
        (a, b)
        for a, b in chain.direct
        if (a, b) in contested
        and not joint.rows[a] >> b & 1
        and not joint.rows[b] >> a & 1
    ]
    if len(fresh) > max_contested:
        raise ValueError(
            f"refusing to enumerate 2^{len(fresh)} contested subsets "
            f"(guard is {max_contested})"
        )
    for count in range(1, len(fresh) + 1):
        for delta in combinations(fresh, count):
            with_sigma1 = list(sigma1.rows)
            with_joint = list(joint.rows)
            for a, b in delta:
                with_sigma1[a] |= 1 << b
                with_joint[a] |= 1 << b
            if not _is_irreflexive_rows(_closed_rows(with_sigma1)):
                continue
            if not _is_irreflexive_rows(_closed_rows(with_joint)):
                return False, CoordinationWitness(
                    delta,
                    "delta extends sigma1 to a strict partial order, but closes "
                    "a cycle with (sigma1 u sigma2)+",
                )
    return True, None


def choice_inducing_sigma(chain: Chain, k: int, l: int) -> Relation:
    """Minimal new information forcing a choice between direct comparisons
    ``k`` and ``l`` (1-based chain positions, ``k < l``).

    For adjacent comparisons the two-pair pattern degenerates to a self-pair,
    which is dropped, leaving a single back-arc.
    """
    m = len(chain.direct)
    if not 1 <= k < l <= m:
        raise ValueError(f"need 1 <= k < l <= {m}, got k={k}, l={l}")
    items = chain.items
    pairs = [(items[l], items[k - 1])]
    if l > k + 1:
        pairs.append((items[k], items[l - 1]))
    return Relation.from_pairs(chain.size, pairs)


class RevealedOrderError(RuntimeError):
    """A revealed preference relation failed totality or transitivity,
    contradicting what postulate-satisfying operators guarantee."""

    def __init__(self, message: str, violations: tuple[tuple[int, ...], ...] = ()):
        super().__init__(message)
        self.violations = violations


@dataclass(frozen=True, slots=True)
class RevealedRelation:
    """Preorder over direct-comparison indices read off an operator's choices.

    ``leq[i][j]`` (0-based) says comparison ``i+1`` is at least as good as
    ``j+1``.  Totality and transitivity are validated, never assumed: they are
    guaranteed only for operators satisfying the postulates.
    """

    chain: Chain
    leq: tuple[tuple[bool, ...], ...]

    def totality_violations(self) -> list[tuple[int, int]]:
        m = len(self.leq)
        return [
            (i + 1, j + 1)
            for i in range(m)
            for j in range(i + 1, m)
            if not self.leq[i][j] and not self.leq[j][i]
        ]

    def transitivity_violations(self) -> list[tuple[int, int, int]]:
        m = len(self.leq)
        return [
            (i + 1, j + 1, k + 1)
            for i in range(m)
            for j in range(m)
            for k in range(m)
            if self.leq[i][j] and self.leq[j][k] and not self.leq[i][k]
        ]

    def levels(self) -> tuple[frozenset[int], ...]:
        """Ordered partition of the indices, best first; raises
        :class:`RevealedOrderError` if the relation is not a total preorder."""
        problems = tuple(self.totality_violations()) + tuple(
            self.transitivity_violations()
        )
        if problems:
            raise RevealedOrderError(
                "revealed relation is not a total preorder", problems
            )
        remaining = set(range(len(self.leq)))
        out: list[frozenset[int]] = []
        while remaining:
            best = {i for i in remaining if all(self.leq[i][j] for j in remaining)}
            remaining -= best
            out.append(frozenset(i + 1 for i in best))
        return tuple(out)

    def to_assignment(self) -> PreferenceAssignment:
        return PreferenceAssignment(self.chain, self.levels())


def revealed_relation(chain: Chain, op: RevisionOperator) -> RevealedRelation:
    """Probe ``op`` with every choice-inducing preference and read off which
    of the two contested comparisons survives."""
    m = len(chain.direct)
    leq = [[i == j for j in range(m)] for i in range(m)]
    for k in range(1, m + 1):
        for l in range(k + 1, m + 1):
            result = op(chain, choice_inducing_sigma(chain, k, l))
            if not is_spo(result):
                raise ValueError(
                    "operator returned a relation that is not a strict partial order"
                )
            a_k, b_k = chain.direct[k - 1]
            a_l, b_l = chain.direct[l - 1]
            leq[k - 1][l - 1] = not result.rows[a_l] >> b_l & 1
            leq[l - 1][k - 1] = not result.rows[a_k] >> b_k & 1
    return RevealedRelation(chain, tuple(tuple(row) for row in leq))


def roundtrip_representation(
    chain: Chain,
    asg: PreferenceAssignment,
    sigma_pool: tuple[Relation, ...] | frozenset[Relation],
) -> bool:
    """Extract the revealed preorder of the operator induced by ``asg``, build
    the operator induced by that preorder, and test agreement on every sigma
    in the pool.

    Raises :class:`RevealedOrderError` if the revealed relation fails to be a
    total preorder -- a defect of the probed operator, not of the caller.
    """
    revealed = revealed_relation(chain, lambda c, s: revise(c, s, asg))
    recovered = revealed.to_assignment()
    return all(
        revise(chain, sigma, asg) == revise(chain, sigma, recovered)
        for sigma in sigma_pool
    )
