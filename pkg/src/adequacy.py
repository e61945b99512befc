"""
Adequacy checking and bounded proof search

Focal adequacy compares the synthetic rules of a source sequent with those
of its encoding: the encoding is adequate at that sequent when the rules
pair up one to one (source rules with equal encoded premises counting as
one) and, inside each pair, the encoded source premises are exactly the
target premises.

Global adequacy compares provability: both sides are searched up to the
same number of synthetic-rule layers.
"""

from __future__ import annotations

import asyncio
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

from classical import ClassicalCalculus
from encoding import EncodingDirection
from focusing import (
    DEFAULT_NODE_BUDGET,
    FocusedCalculus,
    NodeBudget,
    SyntheticRule,
    rule_to_model,
    synthetic_derivations,
    synthetic_expansions,
)
from intuitionistic import IntuitionisticCalculus
from models import (
    AdequacyReportModel,
    CorpusSummary,
    GlobalAdequacyModel,
    PairingModel,
    ProofResultModel,
    ProofTreeModel,
)
from sequents import Calculus, Sequent, calculus_of, format_sequent, is_neutral
from signature import Signature
from validators import EncodingError, SequentError, validate_depth

logger = logging.getLogger("subexp.adequacy")


class Verdict(str, Enum):
    BIJECTIVE = "bijective"
    COUNTEREXAMPLE = "counterexample"


class Failure(str, Enum):
    SOURCE_UNMATCHED = "source-rule-without-match"
    TARGET_UNMATCHED = "target-rule-without-preimage"


class Status(str, Enum):
    PROVED = "proved"
    EXHAUSTED = "exhausted"
    OPEN = "open"


class Agreement(str, Enum):
    AGREE = "agree"
    DISAGREE = "disagree"
    INCONCLUSIVE = "inconclusive"


def calculus_for(calculus: Calculus, sig: Signature) -> FocusedCalculus:
    if calculus is Calculus.CLASSICAL:
        return ClassicalCalculus(sig)
    return IntuitionisticCalculus(sig)


def _require_neutral(seq: Sequent) -> None:
    if not is_neutral(seq):
        raise SequentError(f"Expected a neutral sequent: {format_sequent(seq)}")


# ---------------------------------------------------------------------------
# Focal adequacy
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Pairing:
    source: SyntheticRule
    target: SyntheticRule
    premise_map: tuple[int, ...]


@dataclass
class AdequacyReport:
    direction: EncodingDirection
    conclusion: Sequent
    target_conclusion: Sequent
    source_rules: list[SyntheticRule]
    target_rules: list[SyntheticRule]
    pairing: list[Pairing] = field(default_factory=list)
    unmatched_source: list[SyntheticRule] = field(default_factory=list)
    unmatched_target: list[SyntheticRule] = field(default_factory=list)
    identified: list[SyntheticRule] = field(default_factory=list)

    @property
    def bijective(self) -> bool:
        return not self.unmatched_source and not self.unmatched_target

    @property
    def verdict(self) -> Verdict:
        return Verdict.BIJECTIVE if self.bijective else Verdict.COUNTEREXAMPLE

    @property
    def failure(self) -> Failure | None:
        if self.unmatched_source:
            return Failure.SOURCE_UNMATCHED
        if self.unmatched_target:
            return Failure.TARGET_UNMATCHED
        return None

    @property
    def offending(self) -> SyntheticRule | None:
        """The smallest unmatched rule, by premise count"""
        pool = self.unmatched_source or self.unmatched_target
        if not pool:
            return None
        return min(pool, key=lambda r: (len(r.premises), [format_sequent(p) for p in r.premises]))


def _premise_map(encoded: tuple[Sequent, ...], target: tuple[Sequent, ...]) -> tuple[int, ...]:
    used: set[int] = set()
    mapping = []
    for premise in encoded:
        j = next(j for j, t in enumerate(target) if j not in used and t == premise)
        used.add(j)
        mapping.append(j)
    return tuple(mapping)


def check_focal_adequacy(direction: EncodingDirection, seq: Sequent,
                         budget: NodeBudget | None = None) -> AdequacyReport:
    """
    Compare the synthetic rules of seq with those of its encoding

    Rules are compared as expansions (one per premise multiset). A source
    rule is matched by the target rule whose premises are its own premises
    encoded elementwise.

    Distinct source premises can encode to the same target premises: c2i
    sends a left z:N and a right z:P to one entry whenever teq(N) equals
    tne(P), and the target decides such duplicates once. Source rules are
    therefore paired up to that identification. Every source rule sharing a
    target rule with an earlier one is listed in `identified`, and the
    pairing is a bijection between target rules and classes of source rules
    with equal encoded premises.

    Raises:
        SequentError: seq is not neutral
        EncodingError: seq is outside the encoding's domain
        ResourceLimitError: The node budget ran out
    """
    _require_neutral(seq)
    budget = budget or NodeBudget()
    target_seq = direction.encode(seq)

    source_calc = calculus_for(direction.source_calculus, direction.source_sig)
    target_calc = calculus_for(direction.target_calculus, direction.target_sig)
    source_rules = synthetic_expansions(source_calc, seq, budget)
    target_rules = synthetic_expansions(target_calc, target_seq, budget)

    by_premises = {rule.premises: rule for rule in target_rules}
    report = AdequacyReport(direction, seq, target_seq, source_rules, target_rules)
    matched: set[tuple[Sequent, ...]] = set()

    for rule in source_rules:
        encoded = [direction.encode(p) for p in rule.premises]
        key = tuple(sorted(encoded, key=format_sequent))
        target = by_premises.get(key)
        if target is None:
            report.unmatched_source.append(rule)
            continue
        if key in matched:
            report.identified.append(rule)
        matched.add(key)
        report.pairing.append(Pairing(rule, target, _premise_map(tuple(encoded), target.premises)))

    report.unmatched_target = [r for r in target_rules if r.premises not in matched]

    logger.debug(
        f"{direction.tag.value} at {format_sequent(seq)}: {len(source_rules)} source, "
        f"{len(target_rules)} target rule(s), {len(report.identified)} identified, "
        f"{report.verdict.value}")
    return report


def report_to_model(report: AdequacyReport, unicode: bool = False) -> AdequacyReportModel:
    offending = report.offending
    return AdequacyReportModel(
        direction=report.direction.tag.value,
        source_signature=report.direction.source_sig.label(),
        target_signature=report.direction.target_sig.label(),
        conclusion=format_sequent(report.conclusion, unicode),
        target_conclusion=format_sequent(report.target_conclusion, unicode),
        verdict=report.verdict.value,
        failure=report.failure.value if report.failure else None,
        offending=rule_to_model(offending, unicode) if offending else None,
        source_rules=len(report.source_rules),
        target_rules=len(report.target_rules),
        pairing=[
            PairingModel(source=rule_to_model(p.source, unicode),
                         target=rule_to_model(p.target, unicode),
                         premise_map=list(p.premise_map))
            for p in report.pairing
        ],
        unmatched_source=[rule_to_model(r, unicode) for r in report.unmatched_source],
        unmatched_target=[rule_to_model(r, unicode) for r in report.unmatched_target],
        identified=len(report.identified),
    )


# ---------------------------------------------------------------------------
# Proof search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProofTree:
    rule: SyntheticRule
    children: tuple["ProofTree", ...] = ()


@dataclass
class ProofSearchResult:
    calculus: Calculus
    sig: Signature
    sequent: Sequent
    depth: int
    status: Status
    count: int
    nodes: int
    tree: ProofTree | None = None

    @property
    def proved(self) -> bool:
        return self.status is Status.PROVED


class _Search:
    """Depth-bounded search over synthetic rules, memoized on (sequent, depth)"""

    def __init__(self, calc: FocusedCalculus, budget: NodeBudget):
        self.calc = calc
        self.budget = budget
        self.rules: dict[Sequent, list[SyntheticRule]] = {}
        self.memo: dict[tuple[Sequent, int], tuple[Status, int, ProofTree | None]] = {}

    def derivations(self, seq: Sequent) -> list[SyntheticRule]:
        if seq not in self.rules:
            self.rules[seq] = synthetic_derivations(self.calc, seq, self.budget)
        return self.rules[seq]

    def search(self, seq: Sequent, depth: int) -> tuple[Status, int, ProofTree | None]:
        key = (seq, depth)
        if key in self.memo:
            return self.memo[key]

        total, tree, pending = 0, None, False
        for rule in self.derivations(seq):
            if not rule.premises:
                total += 1
                tree = tree or ProofTree(rule)
                continue
            if depth == 1:
                pending = True
                continue

            outcomes = []
            for premise in rule.premises:
                outcome = self.search(premise, depth - 1)
                if outcome[0] is Status.EXHAUSTED:
                    break
                outcomes.append(outcome)
            else:
                if any(status is Status.OPEN for status, _, _ in outcomes):
                    pending = True
                    continue
                total += math.prod(count for _, count, _ in outcomes)
                tree = tree or ProofTree(rule, tuple(sub for _, _, sub in outcomes))

        if total:
            status = Status.PROVED
        elif pending:
            status = Status.OPEN
        else:
            status = Status.EXHAUSTED
        self.memo[key] = (status, total, tree)
        return self.memo[key]


def prove(seq: Sequent, sig: Signature, depth: int,
          budget: NodeBudget | None = None) -> ProofSearchResult:
    """
    Search for proofs of a neutral sequent using at most `depth` layers of
    synthetic rules

    status is proved when some proof fits, exhausted when every branch
    fails within the bound, and open otherwise. count is the number of
    proofs within the bound, with proofs told apart by their traces.

    Raises:
        KernelError: seq is not neutral or depth < 1
        ResourceLimitError: The node budget ran out
    """
    validate_depth(depth)
    _require_neutral(seq)
    budget = budget or NodeBudget()
    calculus = calculus_of(seq)
    search = _Search(calculus_for(calculus, sig), budget)
    status, count, tree = search.search(seq, depth)
    logger.debug(f"prove {format_sequent(seq)} depth {depth}: {status.value} ({count})")
    return ProofSearchResult(calculus, sig, seq, depth, status, count, budget.used, tree)


def _tree_to_model(tree: ProofTree, unicode: bool) -> ProofTreeModel:
    return ProofTreeModel(rule=rule_to_model(tree.rule, unicode),
                          children=[_tree_to_model(c, unicode) for c in tree.children])


def proof_to_model(result: ProofSearchResult, unicode: bool = False) -> ProofResultModel:
    return ProofResultModel(
        calculus=result.calculus.value,
        signature=result.sig.label(),
        sequent=format_sequent(result.sequent, unicode),
        depth=result.depth,
        status=result.status.value,
        count=result.count,
        nodes=result.nodes,
        tree=_tree_to_model(result.tree, unicode) if result.tree else None,
    )


# ---------------------------------------------------------------------------
# Global adequacy
# ---------------------------------------------------------------------------

@dataclass
class GlobalAdequacyResult:
    direction: EncodingDirection
    source: ProofSearchResult
    target: ProofSearchResult

    @property
    def agreement(self) -> Agreement:
        statuses = (self.source.status, self.target.status)
        if Status.OPEN in statuses:
            return Agreement.INCONCLUSIVE
        if statuses[0] is statuses[1]:
            return Agreement.AGREE
        return Agreement.DISAGREE


def check_global_adequacy(direction: EncodingDirection, seq: Sequent, depth: int,
                          budget: NodeBudget | None = None) -> GlobalAdequacyResult:
    """
    Search seq and its encoding to the same depth and compare the outcomes

    Raises:
        KernelError, EncodingError, ResourceLimitError
    """
    validate_depth(depth)
    _require_neutral(seq)
    budget = budget or NodeBudget()
    target_seq = direction.encode(seq)
    source = prove(seq, direction.source_sig, depth, budget)
    target = prove(target_seq, direction.target_sig, depth, budget)
    return GlobalAdequacyResult(direction, source, target)


def global_to_model(result: GlobalAdequacyResult, unicode: bool = False) -> GlobalAdequacyModel:
    return GlobalAdequacyModel(
        direction=result.direction.tag.value,
        sequent=format_sequent(result.source.sequent, unicode),
        target_sequent=format_sequent(result.target.sequent, unicode),
        depth=result.source.depth,
        agreement=result.agreement.value,
        source=proof_to_model(result.source, unicode),
        target=proof_to_model(result.target, unicode),
    )


# ---------------------------------------------------------------------------
# Corpora
# ---------------------------------------------------------------------------

@dataclass
class CorpusResult:
    direction: EncodingDirection
    reports: list[AdequacyReport]
    skipped: list[tuple[Sequent, str]]

    @property
    def failures(self) -> list[AdequacyReport]:
        return [r for r in self.reports if not r.bijective]


async def check_corpus(direction: EncodingDirection, corpus: Iterable[Sequent],
                       budget_limit: int = DEFAULT_NODE_BUDGET,
                       concurrency: int = 4) -> CorpusResult:
    """
    Run focal adequacy on every sequent of a corpus

    Checks run in worker threads, at most `concurrency` at a time, each with
    its own node budget. Sequents outside the encoding's domain are skipped
    and reported.
    """
    semaphore = asyncio.Semaphore(concurrency)

    async def one(seq: Sequent) -> AdequacyReport | tuple[Sequent, str]:
        async with semaphore:
            try:
                return await asyncio.to_thread(
                    check_focal_adequacy, direction, seq, NodeBudget(budget_limit))
            except EncodingError as e:
                logger.info(f"Skipping {format_sequent(seq)}: {e}")
                return seq, str(e)

    outcomes = await asyncio.gather(*(one(seq) for seq in corpus))
    reports = [o for o in outcomes if isinstance(o, AdequacyReport)]
    skipped = [o for o in outcomes if not isinstance(o, AdequacyReport)]
    logger.info(f"Checked {len(reports)} sequent(s) for {direction.tag.value}: "
                f"{len(reports) - sum(1 for r in reports if not r.bijective)} bijective, "
                f"{len(skipped)} skipped")
    return CorpusResult(direction, reports, skipped)  # type: ignore[arg-type]


def corpus_to_model(result: CorpusResult, seed: int, unicode: bool = False) -> CorpusSummary:
    return CorpusSummary(
        direction=result.direction.tag.value,
        seed=seed,
        count=len(result.reports) + len(result.skipped),
        bijective=len(result.reports) - len(result.failures),
        skipped=len(result.skipped),
        failures=[report_to_model(r, unicode) for r in result.failures],
    )
