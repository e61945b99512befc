"""
Tests for the focused intuitionistic calculus
"""

import random

import pytest
from hypothesis import given, settings, strategies as st

from focusing import TraceStep
from generators import (
    FormulaGenerator,
    random_active_sequent,
    random_intuitionistic_sequent,
    random_signature,
)
from intuitionistic import (
    IntuitionisticCalculus,
    i_active_normalize,
    i_decide,
    i_focus_step,
    i_replay,
    i_synthetic_derivations,
    i_synthetic_expansions,
)
from sequents import (
    Calculus,
    IActiveP,
    IActiveR,
    ILeftFocus,
    IRightFocus,
    ZonedFormula,
    format_sequent,
    parse_sequent,
)
from signature import builtin
from syntax import (
    Bang,
    Lolli,
    NegAtom,
    Par,
    PosAtom,
    Quest,
    Tensor,
    With,
    is_negative,
    is_positive,
)
from validators import SequentError

MALL = builtin("mall")
LL = builtin("ll")
INT = Calculus.INTUITIONISTIC


def goal(formula, zone="lin"):
    return ZonedFormula(zone, formula)


class TestDecide:
    """Tests for dr and the left decisions"""

    def test_dr_consumes_the_right_formula(self):
        seq = parse_sequent("lin:p |- lin:p", MALL, INT)
        [(step, focused)] = i_decide(seq, MALL)
        assert step == TraceStep("dr", "lin:p")
        assert focused == IRightFocus((goal(PosAtom("p")),), PosAtom("p"))

    def test_no_dr_on_negative_goal(self):
        seq = parse_sequent("lin:p |- lin:'n", MALL, INT)
        assert i_decide(seq, MALL) == []

    def test_udl_on_negative_atom(self):
        seq = parse_sequent("u:'n |- lin:'n", LL, INT)
        [(step, focused)] = i_decide(seq, LL)
        assert step.rule == "udl"
        assert focused == ILeftFocus(seq.left, NegAtom("n"), goal(NegAtom("n")))

    def test_not_neutral(self):
        with pytest.raises(SequentError, match="neutral"):
            i_decide(IRightFocus((), PosAtom("p")), MALL)

    @settings(max_examples=300, deadline=None)
    @given(st.randoms(use_true_random=False))
    def test_one_decision_per_distinct_entry(self, rng: random.Random):
        sig = random_signature(rng)
        seq = random_intuitionistic_sequent(rng, sig)
        decisions = i_decide(seq, sig)

        expected = len({e for e in seq.left if is_negative(e.formula)}) + \
            (1 if is_positive(seq.right.formula) else 0)
        assert len(decisions) == expected

        for step, focused in decisions:
            if step.rule == "udl":
                assert focused.left == seq.left
            elif step.rule == "rdl":
                assert len(focused.left) == len(seq.left) - 1
            else:
                assert step.rule == "dr"
                assert focused == IRightFocus(seq.left, seq.right.formula)


class TestFocusStep:
    """Tests for focused intuitionistic rules"""

    def test_lolli_splits_left_context_only(self):
        seq = ILeftFocus((goal(PosAtom("p")),), Lolli(PosAtom("p"), NegAtom("m")),
                         goal(NegAtom("m")))
        instances = i_focus_step(seq, MALL)
        assert len(instances) == 2
        for instance in instances:
            right_focus, left_focus = instance.premises
            assert isinstance(right_focus, IRightFocus)
            assert left_focus.right == goal(NegAtom("m"))

    def test_nl_matches_goal(self):
        assert [i.step.rule for i in i_focus_step(
            ILeftFocus((), NegAtom("n"), goal(NegAtom("n"))), MALL)] == ["nl"]
        assert i_focus_step(ILeftFocus((), NegAtom("n"), goal(NegAtom("m"))), MALL) == []

    def test_nl_needs_unrestricted_context(self):
        seq = ILeftFocus((goal(PosAtom("p")),), NegAtom("n"), goal(NegAtom("n")))
        assert i_focus_step(seq, MALL) == []

    def test_bang_checks_left_context_only(self):
        ok = IRightFocus((goal(PosAtom("p"), "u"),), Bang("lin", NegAtom("n")))
        [instance] = i_focus_step(ok, LL)
        assert instance.premises == (IActiveR((goal(PosAtom("p"), "u"),), (), NegAtom("n")),)

        blocked = IRightFocus((goal(PosAtom("p")),), Bang("u", NegAtom("n")))
        assert i_focus_step(blocked, LL) == []

    def test_quest_checks_goal_zone(self):
        ok = ILeftFocus((), Quest("lin", PosAtom("p")), goal(NegAtom("n"), "u"))
        [instance] = i_focus_step(ok, LL)
        assert instance.premises == (IActiveP((), (PosAtom("p"),), goal(NegAtom("n"), "u")),)

        blocked = ILeftFocus((), Quest("u", PosAtom("p")), goal(NegAtom("n")))
        assert i_focus_step(blocked, LL) == []

    def test_with(self):
        seq = ILeftFocus((), With(NegAtom("n"), NegAtom("m")), goal(NegAtom("n")))
        assert [i.step.rule for i in i_focus_step(seq, MALL)] == ["lr&1", "lr&2"]

    def test_par_rejected(self):
        seq = ILeftFocus((), Par(NegAtom("n"), NegAtom("m")), goal(NegAtom("n")))
        with pytest.raises(SequentError, match="no intuitionistic rule"):
            i_focus_step(seq, MALL)

    @settings(max_examples=300, deadline=None)
    @given(st.randoms(use_true_random=False))
    def test_box_side_conditions(self, rng: random.Random):
        """rr! looks at the left context only; lr? also at the goal zone"""
        sig = random_signature(rng)
        gen = FormulaGenerator(rng, sig, "intuitionistic")
        seq = random_intuitionistic_sequent(rng, sig)
        zone = gen.zone()
        left_above = all(sig.leq(zone, e.zone) for e in seq.left)

        bang = IRightFocus(seq.left, Bang(zone, gen.pat(2)))
        quest = ILeftFocus(seq.left, Quest(zone, gen.nat(2)), seq.right)
        assert bool(i_focus_step(bang, sig)) == left_above
        assert bool(i_focus_step(quest, sig)) == (left_above and sig.leq(zone, seq.right.zone))

    @settings(max_examples=300, deadline=None)
    @given(st.randoms(use_true_random=False))
    def test_partition_count(self, rng: random.Random):
        """Tensor and lolli split n restricted left entries 2^n ways"""
        sig = random_signature(rng)
        seq = random_intuitionistic_sequent(rng, sig)
        n = sum(1 for e in seq.left if not sig.is_unrestricted(e.zone))

        tensor = IRightFocus(seq.left, Tensor(PosAtom("p"), PosAtom("q")))
        lolli = ILeftFocus(seq.left, Lolli(PosAtom("p"), NegAtom("n")), seq.right)
        assert len(i_focus_step(tensor, sig)) == 2 ** n
        assert len(i_focus_step(lolli, sig)) == 2 ** n


class TestActivePhase:
    """Tests for invertible intuitionistic rules"""

    def test_lolli_on_the_right(self):
        seq = IActiveR((), (), Lolli(PosAtom("p"), NegAtom("n")))
        [result] = i_active_normalize(seq, MALL)
        assert format_sequent(result) == "lin:p |- lin:'n"

    def test_quest_on_the_right_stores_goal(self):
        seq = IActiveR((), (), Quest("u", PosAtom("p")))
        [result] = i_active_normalize(seq, LL)
        assert format_sequent(result) == "|- u:p"

    @settings(max_examples=500, deadline=None)
    @given(st.randoms(use_true_random=False))
    def test_order_independent(self, rng: random.Random):
        """Any scheduling of the active phase reaches the same neutral multiset"""
        sig = random_signature(rng)
        seq = random_active_sequent(rng, sig, INT)
        expected = i_active_normalize(seq, sig)
        for _ in range(10):
            shuffled = i_active_normalize(
                seq, sig, scheduler=lambda pending: rng.randrange(len(pending)))
            assert shuffled == expected


class TestSyntheticRules:
    """Tests for intuitionistic synthetic rules"""

    def test_modus_ponens(self):
        seq = parse_sequent("lin:p, lin:(p -o 'm) |- lin:'m", MALL, INT)
        [rule] = i_synthetic_expansions(seq, MALL)
        assert rule.premises == ()
        assert [s.rule for s in rule.trace] == ["rdl", "lr⊸", "pr", "nl"]

    def test_unrestricted_negative_atom(self):
        [rule] = i_synthetic_expansions(parse_sequent("u:'n |- lin:'n", LL, INT), LL)
        assert [s.rule for s in rule.trace] == ["udl", "nl"]

    def test_no_rules(self):
        assert i_synthetic_expansions(parse_sequent("|- lin:'n", MALL, INT), MALL) == []

    def test_premises(self):
        seq = parse_sequent("lin:(![lin] 'm) -o ?[lin] p |- lin:q", MALL, INT)
        [rule] = i_synthetic_expansions(seq, MALL)
        assert [format_sequent(p) for p in rule.premises] == ["lin:p |- lin:q", "|- lin:'m"]

    def test_replay(self):
        seq = parse_sequent("lin:(![lin] 'm) -o ?[lin] p |- lin:q", MALL, INT)
        [rule] = i_synthetic_expansions(seq, MALL)
        assert i_replay(seq, MALL, rule.trace) == rule.premises

    @settings(max_examples=100, deadline=None)
    @given(st.randoms(use_true_random=False))
    def test_replay_reproduces_premises(self, rng: random.Random):
        sig = random_signature(rng)
        seq = random_intuitionistic_sequent(rng, sig, max_entries=2, max_depth=2)
        for rule in i_synthetic_derivations(seq, sig):
            assert i_replay(seq, sig, rule.trace) == rule.premises

    def test_calculus_object(self):
        calc = IntuitionisticCalculus(MALL)
        assert calc.is_focused(IRightFocus((), PosAtom("p")))
        assert not calc.is_focused(parse_sequent("|- lin:p", MALL, INT))
