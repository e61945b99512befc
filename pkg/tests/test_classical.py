"""
Tests for the focused classical calculus
"""

import random

import pytest
from hypothesis import given, settings, strategies as st

from classical import (
    ClassicalCalculus,
    active_normalize,
    decide,
    focus_step,
    replay,
    synthetic_derivations,
    synthetic_expansions,
)
from focusing import NodeBudget, TraceStep
from generators import (
    FormulaGenerator,
    random_active_sequent,
    random_classical_sequent,
    random_signature,
)
from sequents import (
    Active,
    Calculus,
    LeftFocus,
    RightFocus,
    ZonedFormula,
    format_sequent,
    parse_sequent,
)
from signature import builtin
from syntax import (
    Bang,
    Lolli,
    NegAtom,
    PosAtom,
    Quest,
    Tensor,
    Top,
    With,
    is_negative,
    is_positive,
)
from validators import KernelError, ResourceLimitError, SequentError

MALL = builtin("mall")
LL = builtin("ll")


def premises_of(rule):
    return [format_sequent(p) for p in rule.premises]


class TestDecide:
    """Tests for decision rules"""

    def test_restricted_right(self):
        seq = parse_sequent("lin:p |- lin:p", MALL)
        [(step, focused)] = decide(seq, MALL)
        assert step == TraceStep("rdr", "lin:p")
        assert focused == RightFocus((ZonedFormula("lin", PosAtom("p")),), PosAtom("p"), ())

    def test_unrestricted_left_keeps_formula(self):
        seq = parse_sequent("u:'n |- lin:'n", LL)
        [(step, focused)] = decide(seq, LL)
        assert step.rule == "udl"
        assert isinstance(focused, LeftFocus)
        assert focused.left == seq.left

    def test_negative_atoms_are_decided_on_the_left(self):
        seq = parse_sequent("lin:'n |- lin:'n", MALL)
        assert [step.rule for step, _ in decide(seq, MALL)] == ["rdl"]

    def test_duplicates_decided_once(self):
        seq = parse_sequent("|- lin:p, lin:p", MALL)
        assert len(decide(seq, MALL)) == 1

    def test_not_neutral(self):
        with pytest.raises(SequentError, match="neutral"):
            decide(RightFocus((), PosAtom("p"), ()), MALL)

    @settings(max_examples=300, deadline=None)
    @given(st.randoms(use_true_random=False))
    def test_one_decision_per_distinct_entry(self, rng: random.Random):
        """Unrestricted entries stay in the context; restricted ones leave it"""
        sig = random_signature(rng)
        seq = random_classical_sequent(rng, sig)
        decisions = decide(seq, sig)

        expected = len({e for e in seq.right if is_positive(e.formula)}) + \
            len({e for e in seq.left if is_negative(e.formula)})
        assert len(decisions) == expected

        for step, focused in decisions:
            if step.rule in ("udr", "udl"):
                assert (focused.left, focused.right) == (seq.left, seq.right)
            else:
                assert step.rule in ("rdr", "rdl")
                assert len(focused.left) + len(focused.right) == \
                    len(seq.left) + len(seq.right) - 1


class TestFocusStep:
    """Tests for focused rules"""

    def test_positive_atom_needs_empty_rest(self):
        gamma = (ZonedFormula("lin", PosAtom("p")), ZonedFormula("lin", PosAtom("q")))
        assert focus_step(RightFocus(gamma, PosAtom("p"), ()), MALL) == []

    def test_positive_atom_with_unrestricted_rest(self):
        gamma = (ZonedFormula("lin", PosAtom("p")), ZonedFormula("u", PosAtom("q")))
        [instance] = focus_step(RightFocus(gamma, PosAtom("p"), ()), LL)
        assert instance.step.rule == "pr"
        assert instance.premises == ()

    def test_tensor_splits_restricted_context(self):
        gamma = (ZonedFormula("lin", PosAtom("p")), ZonedFormula("lin", PosAtom("q")))
        instances = focus_step(RightFocus(gamma, Tensor(PosAtom("p"), PosAtom("q")), ()), MALL)
        assert len(instances) == 4
        assert {i.step.rule for i in instances} == {"rr⊗"}

    def test_tensor_copies_unrestricted_context(self):
        gamma = (ZonedFormula("u", PosAtom("p")),)
        [instance] = focus_step(RightFocus(gamma, Tensor(PosAtom("p"), PosAtom("p")), ()), LL)
        assert all(premise.left == gamma for premise in instance.premises)

    def test_bang_side_condition(self):
        """rr! needs every context zone to sit above the box zone"""
        body = NegAtom("n")
        ok = RightFocus((ZonedFormula("u", PosAtom("p")),), Bang("lin", body), ())
        assert [i.step.rule for i in focus_step(ok, LL)] == ["rr!"]
        blocked = RightFocus((ZonedFormula("lin", PosAtom("p")),), Bang("u", body), ())
        assert focus_step(blocked, LL) == []

    def test_with_offers_both_branches(self):
        seq = LeftFocus((), With(NegAtom("n"), NegAtom("m")), ())
        assert [i.step.rule for i in focus_step(seq, MALL)] == ["lr&1", "lr&2"]

    def test_quest_releases_focus(self):
        seq = LeftFocus((), Quest("lin", PosAtom("p")), ())
        [instance] = focus_step(seq, MALL)
        assert instance.step == TraceStep("lr?", "lin")
        assert instance.premises == (Active((), (PosAtom("p"),), (), ()),)

    def test_lolli_split(self):
        seq = LeftFocus((ZonedFormula("lin", PosAtom("p")),), Lolli(PosAtom("p"), NegAtom("m")),
                        (ZonedFormula("lin", NegAtom("m")),))
        assert len(focus_step(seq, MALL)) == 4

    def test_not_focused(self):
        with pytest.raises(SequentError):
            focus_step(parse_sequent("|- lin:p", MALL), MALL)

    @settings(max_examples=300, deadline=None)
    @given(st.randoms(use_true_random=False))
    def test_box_side_conditions(self, rng: random.Random):
        """rr! and lr? fire exactly when every context zone is above the box zone"""
        sig = random_signature(rng)
        gen = FormulaGenerator(rng, sig)
        seq = random_classical_sequent(rng, sig)
        zone = gen.zone()
        above = all(sig.leq(zone, e.zone) for e in seq.left + seq.right)

        bang = RightFocus(seq.left, Bang(zone, gen.pat(2)), seq.right)
        quest = LeftFocus(seq.left, Quest(zone, gen.nat(2)), seq.right)
        assert bool(focus_step(bang, sig)) == above
        assert bool(focus_step(quest, sig)) == above

    @settings(max_examples=300, deadline=None)
    @given(st.randoms(use_true_random=False))
    def test_partition_count(self, rng: random.Random):
        """Tensor and lolli split n left and m right restricted entries 2^(n+m) ways"""
        sig = random_signature(rng)
        seq = random_classical_sequent(rng, sig)
        n = sum(1 for e in seq.left if not sig.is_unrestricted(e.zone))
        m = sum(1 for e in seq.right if not sig.is_unrestricted(e.zone))

        tensor = RightFocus(seq.left, Tensor(PosAtom("p"), PosAtom("q")), seq.right)
        lolli = LeftFocus(seq.left, Lolli(PosAtom("p"), NegAtom("n")), seq.right)
        assert len(focus_step(tensor, sig)) == 2 ** (n + m)
        assert len(focus_step(lolli, sig)) == 2 ** (n + m)


class TestActivePhase:
    """Tests for invertible rules"""

    def test_atoms_go_to_working_zone(self):
        seq = Active((), (PosAtom("p"),), (NegAtom("n"),), ())
        [result] = active_normalize(seq, MALL)
        assert format_sequent(result) == "lin:p |- lin:'n"

    def test_with_branches(self):
        seq = Active((), (), (With(NegAtom("n"), NegAtom("m")),), ())
        assert [format_sequent(s) for s in active_normalize(seq, MALL)] == \
            ["|- lin:'m", "|- lin:'n"]

    def test_top_closes_branch(self):
        seq = parse_sequent("|- lin:p", MALL)
        assert active_normalize(Active((), (), (Top(),), ()), MALL) == ()
        assert active_normalize(seq, MALL) == (seq,)

    def test_modalities_store(self):
        seq = Active((), (Bang("u", NegAtom("n")),), (Quest("lin", PosAtom("p")),), ())
        [result] = active_normalize(seq, LL)
        assert format_sequent(result) == "u:'n |- lin:p"

    @settings(max_examples=500, deadline=None)
    @given(st.randoms(use_true_random=False))
    def test_order_independent(self, rng: random.Random):
        """Any scheduling of the active phase reaches the same neutral multiset"""
        sig = random_signature(rng)
        seq = random_active_sequent(rng, sig, Calculus.CLASSICAL)
        expected = active_normalize(seq, sig)
        for _ in range(10):
            shuffled = active_normalize(
                seq, sig, scheduler=lambda pending: rng.randrange(len(pending)))
            assert shuffled == expected


class TestSyntheticRules:
    """Tests for synthetic rule enumeration"""

    def test_tensor_of_bangs(self):
        seq = parse_sequent("|- lin:(![lin] 'n) * (![lin] 'm)", MALL)
        [rule] = synthetic_expansions(seq, MALL)
        assert premises_of(rule) == ["|- lin:'m", "|- lin:'n"]
        assert [str(s) for s in rule.trace] == [
            "rdr lin:(![lin] 'n * ![lin] 'm)",
            "rr⊗ [ ; ]",
            "rr! lin",
            "ar lin:'n",
            "rr! lin",
            "ar lin:'m",
        ]

    def test_identity(self):
        [rule] = synthetic_expansions(parse_sequent("lin:p |- lin:p", MALL), MALL)
        assert rule.premises == ()
        assert rule.decision.rule == "rdr"

    def test_negative_identity_unrestricted(self):
        [rule] = synthetic_expansions(parse_sequent("u:'n |- lin:'n", LL), LL)
        assert [s.rule for s in rule.trace] == ["udl", "nl"]
        assert rule.premises == ()

    def test_unprovable_atom_has_no_rules(self):
        assert synthetic_expansions(parse_sequent("lin:q |- lin:p", MALL), MALL) == []

    def test_expansions_collapse_derivations(self):
        """Two plus branches leading to the same premise collapse into one rule"""
        seq = parse_sequent("|- lin:(![lin] 'n) + (![lin] 'n)", MALL)
        assert len(synthetic_derivations(seq, MALL)) == 2
        [rule] = synthetic_expansions(seq, MALL)
        assert rule.multiplicity == 2
        assert premises_of(rule) == ["|- lin:'n"]

    def test_replay(self):
        seq = parse_sequent("|- lin:(![lin] 'n) * (![lin] 'm)", MALL)
        [rule] = synthetic_expansions(seq, MALL)
        assert replay(seq, MALL, rule.trace) == rule.premises

    @settings(max_examples=100, deadline=None)
    @given(st.randoms(use_true_random=False))
    def test_replay_reproduces_premises(self, rng: random.Random):
        """Every recorded trace replays to the premises it was recorded with"""
        sig = random_signature(rng)
        seq = random_classical_sequent(rng, sig, max_entries=2, max_depth=2)
        for rule in synthetic_derivations(seq, sig):
            assert replay(seq, sig, rule.trace) == rule.premises

    def test_replay_rejects_foreign_trace(self):
        seq = parse_sequent("|- lin:(![lin] 'n) * (![lin] 'm)", MALL)
        with pytest.raises(KernelError, match="does not apply"):
            replay(seq, MALL, [TraceStep("rdl", "lin:'n")])
        with pytest.raises(KernelError, match="empty trace"):
            replay(seq, MALL, [])

    def test_budget(self):
        seq = parse_sequent("|- lin:(![lin] 'n) * (![lin] 'm)", MALL)
        with pytest.raises(ResourceLimitError, match="Node budget exhausted"):
            synthetic_expansions(seq, MALL, NodeBudget(1))

    def test_calculus_object(self):
        calc = ClassicalCalculus(LL)
        assert calc.sig is LL
        assert not calc.is_focused(parse_sequent("|-", LL))
