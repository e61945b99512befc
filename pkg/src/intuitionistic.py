"""
Focused intuitionistic sequent calculus over a subexponential signature

Sequents keep exactly one right-hand formula. Par and bot do not exist
here; meeting one is a SequentError. Decisions are dr (the right formula,
when positive, becomes the focus) and rdl/udl on the left.
"""

from __future__ import annotations

import logging

from focusing import (
    NodeBudget,
    RuleInstance,
    Scheduler,
    SyntheticRule,
    TraceStep,
    all_unrestricted,
    describe_split,
    premise_multiset,
    replay as replay_trace,
    side_condition,
    split_context,
    synthetic_derivations as derivations_of,
    synthetic_expansions as expansions_of,
)
from sequents import (
    IActiveP,
    IActiveR,
    ILeftFocus,
    IntuitSequent,
    IRightFocus,
    Sequent,
    ZonedFormula,
    distinct_indices,
    format_sequent,
    without,
)
from signature import Signature
from syntax import (
    Bang,
    Bot,
    Formula,
    Lolli,
    NegAtom,
    One,
    Par,
    Plus,
    PosAtom,
    Quest,
    Tensor,
    Top,
    With,
    Zero,
    format_formula,
    is_negative,
    is_positive,
)
from validators import SequentError

logger = logging.getLogger("subexp.intuitionistic")


def _single_right(f: Formula) -> None:
    if isinstance(f, (Par, Bot)):
        raise SequentError(
            f"{format_formula(f)} has no intuitionistic rule: sequents keep one right formula")


class IntuitionisticCalculus:
    """The focused intuitionistic calculus for one signature"""

    def __init__(self, sig: Signature):
        self.sig = sig

    def is_focused(self, seq: Sequent) -> bool:
        return isinstance(seq, (IRightFocus, ILeftFocus))

    def decide(self, seq: Sequent) -> list[tuple[TraceStep, Sequent]]:
        """
        Every decision applicable to a neutral sequent

        Raises:
            SequentError: If seq is not neutral
        """
        if not isinstance(seq, IActiveP) or not seq.neutral:
            raise SequentError(f"Decisions apply only to neutral sequents: {format_sequent(seq)}")

        decisions: list[tuple[TraceStep, Sequent]] = []
        if is_positive(seq.right.formula):
            decisions.append((TraceStep("dr", str(seq.right)),
                              IRightFocus(seq.left, seq.right.formula)))

        for i in distinct_indices(seq.left):
            entry = seq.left[i]
            if not is_negative(entry.formula):
                continue
            if self.sig.is_unrestricted(entry.zone):
                decisions.append((TraceStep("udl", str(entry)),
                                  ILeftFocus(seq.left, entry.formula, seq.right)))
            else:
                decisions.append((TraceStep("rdl", str(entry)),
                                  ILeftFocus(without(seq.left, i), entry.formula, seq.right)))
        return decisions

    def focus_step(self, seq: Sequent) -> list[RuleInstance]:
        if isinstance(seq, IRightFocus):
            return self._right_focus(seq)
        if isinstance(seq, ILeftFocus):
            return self._left_focus(seq)
        raise SequentError(f"Not a focused sequent: {format_sequent(seq)}")

    def _right_focus(self, seq: IRightFocus) -> list[RuleInstance]:
        sig, f, gamma = self.sig, seq.focus, seq.left

        if isinstance(f, PosAtom):
            return [
                RuleInstance(TraceStep("pr", str(gamma[i])), ())
                for i in distinct_indices(gamma)
                if gamma[i].formula == f and all_unrestricted(sig, without(gamma, i))
            ]
        if isinstance(f, Tensor):
            return [
                RuleInstance(TraceStep("rr⊗", describe_split(g1)),
                             (IRightFocus(g1, f.left), IRightFocus(g2, f.right)))
                for g1, g2 in split_context(gamma, sig)
            ]
        if isinstance(f, One):
            return [RuleInstance(TraceStep("rr1"), ())] if all_unrestricted(sig, gamma) else []
        if isinstance(f, Plus):
            return [
                RuleInstance(TraceStep("rr⊕1"), (IRightFocus(gamma, f.left),)),
                RuleInstance(TraceStep("rr⊕2"), (IRightFocus(gamma, f.right),)),
            ]
        if isinstance(f, Zero):
            return []
        if isinstance(f, Bang):
            # only the left context is constrained; the goal is the body itself
            if not side_condition(sig, f.zone, gamma):
                return []
            return [RuleInstance(TraceStep("rr!", f.zone), (IActiveR(gamma, (), f.body),))]
        raise SequentError(f"Right focus on a non-positive formula: {format_formula(f)}")

    def _left_focus(self, seq: ILeftFocus) -> list[RuleInstance]:
        sig, f, gamma, goal = self.sig, seq.focus, seq.left, seq.right
        _single_right(f)

        if isinstance(f, NegAtom):
            if goal.formula == f and all_unrestricted(sig, gamma):
                return [RuleInstance(TraceStep("nl", str(goal)), ())]
            return []
        if isinstance(f, With):
            return [
                RuleInstance(TraceStep("lr&1"), (ILeftFocus(gamma, f.left, goal),)),
                RuleInstance(TraceStep("lr&2"), (ILeftFocus(gamma, f.right, goal),)),
            ]
        if isinstance(f, Top):
            return []
        if isinstance(f, Lolli):
            return [
                RuleInstance(TraceStep("lr⊸", describe_split(g1)),
                             (IRightFocus(g1, f.antecedent), ILeftFocus(g2, f.consequent, goal)))
                for g1, g2 in split_context(gamma, sig)
            ]
        if isinstance(f, Quest):
            if not side_condition(sig, f.zone, gamma, (goal,)):
                return []
            return [RuleInstance(TraceStep("lr?", f.zone), (IActiveP(gamma, (f.body,), goal),))]
        raise SequentError(f"Left focus on a non-negative formula: {format_formula(f)}")

    def active_normalize(self, seq: Sequent, scheduler: Scheduler | None = None
                         ) -> tuple[tuple[Sequent, ...], tuple[TraceStep, ...]]:
        """
        Apply invertible rules until only neutral sequents remain

        The right-active formula, if any, goes first under the default order.
        """
        if not isinstance(seq, (IActiveR, IActiveP)):
            raise SequentError(f"Not an active sequent: {format_sequent(seq)}")
        if isinstance(seq, IActiveP) and seq.neutral:
            return (seq,), ()

        pending: list[tuple[str, Formula]] = []
        if isinstance(seq, IActiveR):
            pending.append(("right", seq.right_active))
        pending.extend(("left", f) for f in seq.left_active)

        choice = scheduler(pending) if scheduler else 0
        side, f = pending[choice]
        if side == "right":
            step, branches = self._right_active(seq, f)  # type: ignore[arg-type]
        else:
            offset = 1 if isinstance(seq, IActiveR) else 0
            step, branches = self._left_active(seq, choice - offset, f)

        neutrals: list[Sequent] = []
        steps = [step]
        for branch in branches:
            more, more_steps = self.active_normalize(branch, scheduler)
            neutrals.extend(more)
            steps.extend(more_steps)
        return premise_multiset(neutrals), tuple(steps)

    def _right_active(self, seq: IActiveR, f: Formula) -> tuple[TraceStep, list[Sequent]]:
        gamma, omega = seq.left, seq.left_active
        _single_right(f)

        if isinstance(f, (PosAtom, NegAtom)):
            entry = ZonedFormula(self.sig.working, f)
            return TraceStep("ar", str(entry)), [IActiveP(gamma, omega, entry)]
        if isinstance(f, With):
            return TraceStep("rr&"), [IActiveR(gamma, omega, f.left),
                                      IActiveR(gamma, omega, f.right)]
        if isinstance(f, Top):
            return TraceStep("rr⊤"), []
        if isinstance(f, Lolli):
            return TraceStep("rr⊸"), [IActiveR(gamma, omega + (f.antecedent,), f.consequent)]
        if isinstance(f, Quest):
            entry = ZonedFormula(f.zone, f.body)
            return TraceStep("rr?", f.zone), [IActiveP(gamma, omega, entry)]
        raise SequentError(f"Formula {format_formula(f)} cannot be right-active")

    def _left_active(self, seq: IActiveR | IActiveP, index: int,
                     f: Formula) -> tuple[TraceStep, list[Sequent]]:
        rest = without(seq.left_active, index)

        def rebuild(left: tuple, active: tuple) -> Sequent:
            if isinstance(seq, IActiveR):
                return IActiveR(left, active, seq.right_active)
            return IActiveP(left, active, seq.right)

        gamma = seq.left
        if isinstance(f, (PosAtom, NegAtom)):
            entry = ZonedFormula(self.sig.working, f)
            return TraceStep("al", str(entry)), [rebuild(gamma + (entry,), rest)]
        if isinstance(f, Tensor):
            return TraceStep("lr⊗"), [rebuild(gamma, rest + (f.left, f.right))]
        if isinstance(f, One):
            return TraceStep("lr1"), [rebuild(gamma, rest)]
        if isinstance(f, Plus):
            return TraceStep("lr⊕"), [rebuild(gamma, rest + (f.left,)),
                                      rebuild(gamma, rest + (f.right,))]
        if isinstance(f, Zero):
            return TraceStep("lr0"), []
        if isinstance(f, Bang):
            entry = ZonedFormula(f.zone, f.body)
            return TraceStep("lr!", f.zone), [rebuild(gamma + (entry,), rest)]
        raise SequentError(f"Formula {format_formula(f)} cannot be left-active")


def i_decide(seq: IntuitSequent, sig: Signature) -> list[tuple[TraceStep, Sequent]]:
    return IntuitionisticCalculus(sig).decide(seq)


def i_focus_step(seq: IntuitSequent, sig: Signature) -> list[RuleInstance]:
    return IntuitionisticCalculus(sig).focus_step(seq)


def i_active_normalize(seq: IntuitSequent, sig: Signature,
                       scheduler: Scheduler | None = None) -> tuple[Sequent, ...]:
    neutrals, _ = IntuitionisticCalculus(sig).active_normalize(seq, scheduler)
    return neutrals


def i_synthetic_derivations(seq: IntuitSequent, sig: Signature,
                            budget: NodeBudget | None = None) -> list[SyntheticRule]:
    return derivations_of(IntuitionisticCalculus(sig), seq, budget)


def i_synthetic_expansions(seq: IntuitSequent, sig: Signature,
                           budget: NodeBudget | None = None) -> list[SyntheticRule]:
    return expansions_of(IntuitionisticCalculus(sig), seq, budget)


def i_replay(conclusion: IntuitSequent, sig: Signature, trace) -> tuple[Sequent, ...]:
    return replay_trace(IntuitionisticCalculus(sig), conclusion, trace)
