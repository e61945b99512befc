"""
Focused classical sequent calculus over a subexponential signature

Rule names follow the usual reading: r/l for the side of the principal
formula, r at the end for a right-phase (invertible or focused) rule,
d for decisions (rdr/udr decide a right formula from a restricted or
unrestricted zone, rdl/udl a left one).
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
    split_pair,
    synthetic_derivations as derivations_of,
    synthetic_expansions as expansions_of,
)
from sequents import (
    Active,
    ClassicalSequent,
    LeftFocus,
    RightFocus,
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

logger = logging.getLogger("subexp.classical")


class ClassicalCalculus:
    """The focused classical calculus for one signature"""

    def __init__(self, sig: Signature):
        self.sig = sig

    def is_focused(self, seq: Sequent) -> bool:
        return isinstance(seq, (RightFocus, LeftFocus))

    # -- decisions ---------------------------------------------------------

    def decide(self, seq: Sequent) -> list[tuple[TraceStep, Sequent]]:
        """
        Every decision applicable to a neutral sequent

        A right z:P with P positive is focused on (kept when z is
        unrestricted); likewise a left z:N with N negative, atoms included.

        Raises:
            SequentError: If seq is not neutral
        """
        if not isinstance(seq, Active) or not seq.neutral:
            raise SequentError(f"Decisions apply only to neutral sequents: {format_sequent(seq)}")

        decisions: list[tuple[TraceStep, Sequent]] = []
        for i in distinct_indices(seq.right):
            entry = seq.right[i]
            if not is_positive(entry.formula):
                continue
            if self.sig.is_unrestricted(entry.zone):
                decisions.append((TraceStep("udr", str(entry)),
                                  RightFocus(seq.left, entry.formula, seq.right)))
            else:
                decisions.append((TraceStep("rdr", str(entry)),
                                  RightFocus(seq.left, entry.formula, without(seq.right, i))))

        for i in distinct_indices(seq.left):
            entry = seq.left[i]
            if not is_negative(entry.formula):
                continue
            if self.sig.is_unrestricted(entry.zone):
                decisions.append((TraceStep("udl", str(entry)),
                                  LeftFocus(seq.left, entry.formula, seq.right)))
            else:
                decisions.append((TraceStep("rdl", str(entry)),
                                  LeftFocus(without(seq.left, i), entry.formula, seq.right)))
        return decisions

    # -- focused phase -----------------------------------------------------

    def focus_step(self, seq: Sequent) -> list[RuleInstance]:
        """
        Applicable rule instances for the focused formula, unpruned

        A premise that will itself fail is still listed; focus_closure
        drops such instances.
        """
        if isinstance(seq, RightFocus):
            return self._right_focus(seq)
        if isinstance(seq, LeftFocus):
            return self._left_focus(seq)
        raise SequentError(f"Not a focused sequent: {format_sequent(seq)}")

    def _right_focus(self, seq: RightFocus) -> list[RuleInstance]:
        sig, f = self.sig, seq.focus
        gamma, delta = seq.left, seq.right

        if isinstance(f, PosAtom):
            instances = []
            for i in distinct_indices(gamma):
                entry = gamma[i]
                if entry.formula == f and all_unrestricted(sig, without(gamma, i), delta):
                    instances.append(RuleInstance(TraceStep("pr", str(entry)), ()))
            return instances
        if isinstance(f, Tensor):
            return [
                RuleInstance(TraceStep("rr⊗", describe_split(l1, r1)),
                             (RightFocus(l1, f.left, r1), RightFocus(l2, f.right, r2)))
                for (l1, r1), (l2, r2) in split_pair(gamma, delta, sig)
            ]
        if isinstance(f, One):
            return [RuleInstance(TraceStep("rr1"), ())] if all_unrestricted(sig, gamma, delta) \
                else []
        if isinstance(f, Plus):
            return [
                RuleInstance(TraceStep("rr⊕1"), (RightFocus(gamma, f.left, delta),)),
                RuleInstance(TraceStep("rr⊕2"), (RightFocus(gamma, f.right, delta),)),
            ]
        if isinstance(f, Zero):
            return []
        if isinstance(f, Bang):
            if not side_condition(sig, f.zone, gamma, delta):
                return []
            return [RuleInstance(TraceStep("rr!", f.zone),
                                 (Active(gamma, (), (f.body,), delta),))]
        raise SequentError(f"Right focus on a non-positive formula: {format_formula(f)}")

    def _left_focus(self, seq: LeftFocus) -> list[RuleInstance]:
        sig, f = self.sig, seq.focus
        gamma, delta = seq.left, seq.right

        if isinstance(f, NegAtom):
            instances = []
            for i in distinct_indices(delta):
                entry = delta[i]
                if entry.formula == f and all_unrestricted(sig, gamma, without(delta, i)):
                    instances.append(RuleInstance(TraceStep("nl", str(entry)), ()))
            return instances
        if isinstance(f, With):
            return [
                RuleInstance(TraceStep("lr&1"), (LeftFocus(gamma, f.left, delta),)),
                RuleInstance(TraceStep("lr&2"), (LeftFocus(gamma, f.right, delta),)),
            ]
        if isinstance(f, Top):
            return []
        if isinstance(f, Par):
            return [
                RuleInstance(TraceStep("lr⅋", describe_split(l1, r1)),
                             (LeftFocus(l1, f.left, r1), LeftFocus(l2, f.right, r2)))
                for (l1, r1), (l2, r2) in split_pair(gamma, delta, sig)
            ]
        if isinstance(f, Bot):
            return [RuleInstance(TraceStep("lr⊥"), ())] if all_unrestricted(sig, gamma, delta) \
                else []
        if isinstance(f, Lolli):
            return [
                RuleInstance(TraceStep("lr⊸", describe_split(l1, r1)),
                             (RightFocus(l1, f.antecedent, r1), LeftFocus(l2, f.consequent, r2)))
                for (l1, r1), (l2, r2) in split_pair(gamma, delta, sig)
            ]
        if isinstance(f, Quest):
            if not side_condition(sig, f.zone, gamma, delta):
                return []
            return [RuleInstance(TraceStep("lr?", f.zone),
                                 (Active(gamma, (f.body,), (), delta),))]
        raise SequentError(f"Left focus on a non-negative formula: {format_formula(f)}")

    # -- active phase ------------------------------------------------------

    def active_normalize(self, seq: Sequent, scheduler: Scheduler | None = None
                         ) -> tuple[tuple[Sequent, ...], tuple[TraceStep, ...]]:
        """
        Apply invertible rules until only neutral sequents remain

        By default the first right-active formula is decomposed first, then
        the first left-active one. A scheduler may pick any other order; the
        resulting neutral multiset is the same.
        """
        if not isinstance(seq, Active):
            raise SequentError(f"Not an active sequent: {format_sequent(seq)}")
        if seq.neutral:
            return (seq,), ()

        pending = [("right", f) for f in seq.right_active] + \
                  [("left", f) for f in seq.left_active]
        choice = scheduler(pending) if scheduler else 0
        side, f = pending[choice]
        if side == "right":
            step, branches = self._right_active(seq, choice, f)
        else:
            step, branches = self._left_active(seq, choice - len(seq.right_active), f)

        neutrals: list[Sequent] = []
        steps = [step]
        for branch in branches:
            more, more_steps = self.active_normalize(branch, scheduler)
            neutrals.extend(more)
            steps.extend(more_steps)
        return premise_multiset(neutrals), tuple(steps)

    def _right_active(self, seq: Active, index: int, f) -> tuple[TraceStep, list[Active]]:
        rest = without(seq.right_active, index)
        gamma, omega, delta = seq.left, seq.left_active, seq.right

        if isinstance(f, (PosAtom, NegAtom)):
            entry = ZonedFormula(self.sig.working, f)
            return TraceStep("ar", str(entry)), [Active(gamma, omega, rest, delta + (entry,))]
        if isinstance(f, With):
            return TraceStep("rr&"), [Active(gamma, omega, rest + (f.left,), delta),
                                      Active(gamma, omega, rest + (f.right,), delta)]
        if isinstance(f, Top):
            return TraceStep("rr⊤"), []
        if isinstance(f, Par):
            return TraceStep("rr⅋"), [Active(gamma, omega, rest + (f.left, f.right), delta)]
        if isinstance(f, Bot):
            return TraceStep("rr⊥"), [Active(gamma, omega, rest, delta)]
        if isinstance(f, Lolli):
            return TraceStep("rr⊸"), [Active(gamma, omega + (f.antecedent,),
                                             rest + (f.consequent,), delta)]
        if isinstance(f, Quest):
            entry = ZonedFormula(f.zone, f.body)
            return TraceStep("rr?", f.zone), [Active(gamma, omega, rest, delta + (entry,))]
        raise SequentError(f"Formula {format_formula(f)} cannot be right-active")

    def _left_active(self, seq: Active, index: int, f) -> tuple[TraceStep, list[Active]]:
        rest = without(seq.left_active, index)
        gamma, xi, delta = seq.left, seq.right_active, seq.right

        if isinstance(f, (PosAtom, NegAtom)):
            entry = ZonedFormula(self.sig.working, f)
            return TraceStep("al", str(entry)), [Active(gamma + (entry,), rest, xi, delta)]
        if isinstance(f, Tensor):
            return TraceStep("lr⊗"), [Active(gamma, rest + (f.left, f.right), xi, delta)]
        if isinstance(f, One):
            return TraceStep("lr1"), [Active(gamma, rest, xi, delta)]
        if isinstance(f, Plus):
            return TraceStep("lr⊕"), [Active(gamma, rest + (f.left,), xi, delta),
                                      Active(gamma, rest + (f.right,), xi, delta)]
        if isinstance(f, Zero):
            return TraceStep("lr0"), []
        if isinstance(f, Bang):
            entry = ZonedFormula(f.zone, f.body)
            return TraceStep("lr!", f.zone), [Active(gamma + (entry,), rest, xi, delta)]
        raise SequentError(f"Formula {format_formula(f)} cannot be left-active")


def decide(seq: ClassicalSequent, sig: Signature) -> list[tuple[TraceStep, Sequent]]:
    return ClassicalCalculus(sig).decide(seq)


def focus_step(seq: ClassicalSequent, sig: Signature) -> list[RuleInstance]:
    return ClassicalCalculus(sig).focus_step(seq)


def active_normalize(seq: ClassicalSequent, sig: Signature,
                     scheduler: Scheduler | None = None) -> tuple[Sequent, ...]:
    """The multiset of neutral sequents an active sequent normalizes to"""
    neutrals, _ = ClassicalCalculus(sig).active_normalize(seq, scheduler)
    return neutrals


def synthetic_derivations(seq: ClassicalSequent, sig: Signature,
                          budget: NodeBudget | None = None) -> list[SyntheticRule]:
    return derivations_of(ClassicalCalculus(sig), seq, budget)


def synthetic_expansions(seq: ClassicalSequent, sig: Signature,
                         budget: NodeBudget | None = None) -> list[SyntheticRule]:
    """
    Synthetic rules of a neutral classical sequent

    Example: under mall, `|- lin:(![lin] 'n) * (![lin] 'm)` has a single
    rule with premises `|- lin:'n` and `|- lin:'m`.
    """
    return expansions_of(ClassicalCalculus(sig), seq, budget)


def replay(conclusion: ClassicalSequent, sig: Signature, trace) -> tuple[Sequent, ...]:
    return replay_trace(ClassicalCalculus(sig), conclusion, trace)
