"""
Focusing machinery shared by both calculi

A calculus is driven through four hooks (decide, focus_step,
active_normalize, is_focused). From those this module builds synthetic
rules: a decision, the complete focused phase above it and the active
phase that follows, read as one big rule from the neutral conclusion to
the neutral premises at its open leaves.
"""

from __future__ import annotations

import itertools
import logging
import threading
from dataclasses import dataclass, field
from typing import Callable, Iterable, Protocol, Sequence

from models import SyntheticRuleModel, TraceStepModel
from signature import Signature
from sequents import Context, Sequent, ZonedFormula, format_sequent, sequent_key
from syntax import Formula
from validators import KernelError, ResourceLimitError, validate_budget

logger = logging.getLogger("subexp.focusing")

DEFAULT_NODE_BUDGET = 1_000_000

# Called with the pending active formulas as (side, formula) pairs, right side
# first; returns the index of the one to decompose next.
Scheduler = Callable[[Sequence[tuple[str, Formula]]], int]


@dataclass(frozen=True)
class TraceStep:
    """One inference in a synthetic derivation"""
    rule: str
    detail: str = ""

    def __str__(self) -> str:
        return f"{self.rule} {self.detail}".strip()


@dataclass(frozen=True)
class RuleInstance:
    """A single rule application: the step taken and the premises it leaves"""
    step: TraceStep
    premises: tuple[Sequent, ...]


@dataclass(frozen=True)
class SyntheticRule:
    """
    A synthetic inference from a neutral conclusion to neutral premises

    premises is the canonical (sorted) multiset of open leaves. multiplicity
    counts how many distinct derivations collapse onto the same premises when
    rules are compared as expansions.
    """
    conclusion: Sequent
    premises: tuple[Sequent, ...]
    trace: tuple[TraceStep, ...]
    multiplicity: int = field(default=1, compare=False)

    @property
    def decision(self) -> TraceStep:
        return self.trace[0]


def premise_multiset(seqs: Iterable[Sequent]) -> tuple[Sequent, ...]:
    return tuple(sorted(seqs, key=sequent_key))


class NodeBudget:
    """
    Thread-safe visit counter for one search

    Raises ResourceLimitError once more than `limit` sequents are visited.
    """

    def __init__(self, limit: int = DEFAULT_NODE_BUDGET):
        validate_budget(limit)
        self.limit = limit
        self.used = 0
        self._lock = threading.Lock()

    def charge(self, nodes: int = 1) -> None:
        with self._lock:
            self.used += nodes
            if self.used > self.limit:
                raise ResourceLimitError(
                    f"Node budget exhausted: visited more than {self.limit} sequents")


class FocusedCalculus(Protocol):
    sig: Signature

    def decide(self, seq: Sequent) -> list[tuple[TraceStep, Sequent]]: ...

    def focus_step(self, seq: Sequent) -> list[RuleInstance]: ...

    def active_normalize(self, seq: Sequent, scheduler: Scheduler | None = None
                         ) -> tuple[tuple[Sequent, ...], tuple[TraceStep, ...]]: ...

    def is_focused(self, seq: Sequent) -> bool: ...


# ---------------------------------------------------------------------------
# Context helpers
# ---------------------------------------------------------------------------

def restricted_part(ctx: Context, sig: Signature) -> Context:
    return tuple(e for e in ctx if not sig.is_unrestricted(e.zone))


def unrestricted_part(ctx: Context, sig: Signature) -> Context:
    return tuple(e for e in ctx if sig.is_unrestricted(e.zone))


def all_unrestricted(sig: Signature, *contexts: Iterable[ZonedFormula]) -> bool:
    return all(sig.is_unrestricted(e.zone) for ctx in contexts for e in ctx)


def side_condition(sig: Signature, zone: str, *contexts: Iterable[ZonedFormula]) -> bool:
    """zone <= x for the zone x of every passive entry"""
    return all(sig.leq(zone, e.zone) for ctx in contexts for e in ctx)


def split_context(ctx: Context, sig: Signature) -> list[tuple[Context, Context]]:
    """
    Every way to divide the restricted entries of ctx between two premises

    Splits are indexed by position, so duplicate entries yield distinct
    splits. Unrestricted entries are copied to both sides.
    """
    shared = unrestricted_part(ctx, sig)
    restricted = restricted_part(ctx, sig)
    splits = []
    for mask in itertools.product((0, 1), repeat=len(restricted)):
        first = tuple(e for e, bit in zip(restricted, mask) if bit == 0)
        second = tuple(e for e, bit in zip(restricted, mask) if bit == 1)
        splits.append((shared + first, shared + second))
    return splits


def split_pair(left: Context, right: Context, sig: Signature
               ) -> list[tuple[tuple[Context, Context], tuple[Context, Context]]]:
    """Joint splits of a left and a right context: ((left1, right1), (left2, right2))"""
    return [
        ((l1, r1), (l2, r2))
        for l1, l2 in split_context(left, sig)
        for r1, r2 in split_context(right, sig)
    ]


def describe_split(left: Context, right: Context | None = None) -> str:
    text = ", ".join(str(e) for e in left)
    if right is not None:
        text += " ; " + ", ".join(str(e) for e in right)
    return f"[{text}]"


# ---------------------------------------------------------------------------
# Synthetic rules
# ---------------------------------------------------------------------------

_Leaves = tuple[tuple[TraceStep, ...], tuple[Sequent, ...]]


def focus_closure(calc: FocusedCalculus, seq: Sequent, budget: NodeBudget) -> list[_Leaves]:
    """
    Run the focused phase from seq to the end, then the active phase

    Returns one (trace, neutral premises) pair per way of completing the
    phase. A focused branch with no applicable rule kills its alternative.
    """
    budget.charge()
    if not calc.is_focused(seq):
        neutrals, steps = calc.active_normalize(seq)
        return [(steps, neutrals)]

    results: list[_Leaves] = []
    for instance in calc.focus_step(seq):
        branches = []
        for premise in instance.premises:
            closed = focus_closure(calc, premise, budget)
            if not closed:
                break
            branches.append(closed)
        else:
            for combo in itertools.product(*branches):
                trace = (instance.step,) + tuple(s for steps, _ in combo for s in steps)
                leaves = tuple(p for _, prems in combo for p in prems)
                results.append((trace, leaves))
    return results


def synthetic_derivations(calc: FocusedCalculus, seq: Sequent,
                          budget: NodeBudget | None = None) -> list[SyntheticRule]:
    """
    All synthetic derivations with neutral conclusion seq, distinct by trace

    Raises:
        KernelError: If seq is not neutral
        ResourceLimitError: If the budget runs out
    """
    budget = budget or NodeBudget()
    found: dict[tuple[TraceStep, ...], SyntheticRule] = {}
    for step, focused in calc.decide(seq):
        for trace, leaves in focus_closure(calc, focused, budget):
            full = (step,) + trace
            if full not in found:
                found[full] = SyntheticRule(seq, premise_multiset(leaves), full)
    return list(found.values())


def synthetic_expansions(calc: FocusedCalculus, seq: Sequent,
                         budget: NodeBudget | None = None) -> list[SyntheticRule]:
    """
    Synthetic rules of seq as a set keyed by premise multiset

    Derivations with identical premises collapse into one rule; the first
    trace is kept and the number of collapsed derivations is recorded as its
    multiplicity.
    """
    grouped: dict[tuple[Sequent, ...], list[SyntheticRule]] = {}
    for rule in synthetic_derivations(calc, seq, budget):
        grouped.setdefault(rule.premises, []).append(rule)

    rules = [
        SyntheticRule(seq, premises, group[0].trace, multiplicity=len(group))
        for premises, group in grouped.items()
    ]
    rules.sort(key=lambda r: (len(r.premises), [sequent_key(p) for p in r.premises]))
    logger.debug(f"{len(rules)} synthetic rule(s) for {sequent_key(seq)}")
    return rules


def replay(calc: FocusedCalculus, conclusion: Sequent,
           trace: Sequence[TraceStep]) -> tuple[Sequent, ...]:
    """
    Re-run a recorded trace from its conclusion and return the premises

    Raises:
        KernelError: If some step of the trace does not apply
    """
    steps = list(trace)
    if not steps:
        raise KernelError("Cannot replay an empty trace")

    decision = next((s for step, s in calc.decide(conclusion) if step == steps[0]), None)
    if decision is None:
        raise KernelError(f"Decision '{steps[0]}' does not apply to {sequent_key(conclusion)}")

    position = 1

    def walk(seq: Sequent) -> list[Sequent]:
        nonlocal position
        if not calc.is_focused(seq):
            neutrals, active_steps = calc.active_normalize(seq)
            recorded = tuple(steps[position:position + len(active_steps)])
            if recorded != active_steps:
                raise KernelError(f"Active phase of {sequent_key(seq)} does not match trace")
            position += len(active_steps)
            return list(neutrals)

        if position >= len(steps):
            raise KernelError(f"Trace ends inside the focused phase at {sequent_key(seq)}")
        wanted = steps[position]
        instance = next((i for i in calc.focus_step(seq) if i.step == wanted), None)
        if instance is None:
            raise KernelError(f"Step '{wanted}' does not apply to {sequent_key(seq)}")
        position += 1
        leaves: list[Sequent] = []
        for premise in instance.premises:
            leaves.extend(walk(premise))
        return leaves

    premises = walk(decision)
    if position != len(steps):
        raise KernelError(f"Trace has {len(steps) - position} unused step(s)")
    return premise_multiset(premises)


def rule_to_model(rule: SyntheticRule, unicode: bool = False) -> SyntheticRuleModel:
    return SyntheticRuleModel(
        conclusion=format_sequent(rule.conclusion, unicode),
        premises=[format_sequent(p, unicode) for p in rule.premises],
        trace=[TraceStepModel(rule=s.rule, detail=s.detail) for s in rule.trace],
        multiplicity=rule.multiplicity,
    )
