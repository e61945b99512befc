"""
Tests for polarized formulas: construction, parsing and printing
"""

import random

import pytest
from hypothesis import given, settings, strategies as st

from generators import FormulaGenerator, random_signature
from signature import builtin
from syntax import (
    Atom,
    Bang,
    Lolli,
    NegAtom,
    Par,
    Polarity,
    PosAtom,
    Quest,
    Tensor,
    With,
    atoms_of,
    depth,
    dual,
    dual_atom,
    format_formula,
    is_nat,
    is_pat,
    parse_formula,
    polarity_of,
    zones_of,
)
from validators import (
    FormulaSyntaxError,
    KernelError,
    PolarityError,
    ReservedNameError,
    UnknownZoneError,
)


class TestConstruction:
    """Tests for polarity checking in constructors"""

    def test_positive_and_negative(self):
        assert polarity_of(Tensor(PosAtom("p"), PosAtom("q"))) is Polarity.POSITIVE
        assert polarity_of(Lolli(PosAtom("p"), NegAtom("n"))) is Polarity.NEGATIVE

    def test_tensor_rejects_negative_operand(self):
        with pytest.raises(PolarityError, match="tensor"):
            Tensor(PosAtom("p"), NegAtom("n"))

    def test_par_rejects_positive_operand(self):
        with pytest.raises(PolarityError, match="par"):
            Par(PosAtom("p"), NegAtom("n"))

    def test_bang_body(self):
        """Test that ![z] takes negative formulas and positive atoms only"""
        Bang("lin", PosAtom("p"))
        Bang("lin", NegAtom("n"))
        with pytest.raises(PolarityError):
            Bang("lin", Tensor(PosAtom("p"), PosAtom("q")))

    def test_quest_body(self):
        """Test that ?[z] takes positive formulas and negative atoms only"""
        Quest("lin", NegAtom("n"))
        Quest("lin", Tensor(PosAtom("p"), PosAtom("q")))
        with pytest.raises(PolarityError):
            Quest("lin", With(NegAtom("n"), NegAtom("m")))

    def test_classes(self):
        assert is_pat(PosAtom("p")) and is_pat(NegAtom("n"))
        assert not is_pat(Tensor(PosAtom("p"), PosAtom("q")))
        assert is_nat(NegAtom("n")) and not is_nat(With(NegAtom("n"), NegAtom("m")))

    def test_dual(self):
        assert dual(NegAtom("n")) == PosAtom("n^")
        assert dual_atom(Atom("foo", Polarity.NEGATIVE)) == Atom("foo^", Polarity.POSITIVE)
        with pytest.raises(KernelError, match="expects a negative atom"):
            dual_atom(Atom("p", Polarity.POSITIVE))

    @settings(max_examples=200, deadline=None)
    @given(st.sets(st.from_regex(r"[a-j][a-z0-9_]{0,5}", fullmatch=True), max_size=12))
    def test_dual_atom_injective_and_fresh(self, names):
        """Distinct negative atoms get distinct duals, none of them a source name"""
        duals = {dual_atom(Atom(name, Polarity.NEGATIVE)) for name in names}
        assert len(duals) == len(names)
        assert all(d.polarity is Polarity.POSITIVE for d in duals)
        assert not {d.name for d in duals} & names

    def test_queries(self):
        f = Bang("u", Lolli(PosAtom("p"), Quest("lin", NegAtom("n"))))
        assert zones_of(f) == {"u", "lin"}
        assert {a.name for a in atoms_of(f)} == {"p", "n"}
        assert depth(f) == 4


class TestParsing:
    """Tests for the ASCII grammar"""

    def test_parse_atoms(self):
        assert parse_formula("p") == PosAtom("p")
        assert parse_formula("'n") == NegAtom("n")

    def test_parse_modal(self):
        f = parse_formula("![lin] (p -o 'n)")
        assert f == Bang("lin", Lolli(PosAtom("p"), NegAtom("n")))

    def test_lolli_is_right_associative(self):
        f = parse_formula("p -o q -o 'n")
        assert f == Lolli(PosAtom("p"), Lolli(PosAtom("q"), NegAtom("n")))

    def test_modal_binds_tighter_than_binary(self):
        f = parse_formula("![lin] 'n * q")
        assert f == Tensor(Bang("lin", NegAtom("n")), PosAtom("q"))

    def test_units(self):
        assert format_formula(parse_formula("1 * 0")) == "1 * 0"
        assert format_formula(parse_formula("top & bot")) == "top & bot"

    def test_keyword_prefix_is_an_atom(self):
        assert parse_formula("topper") == PosAtom("topper")

    def test_syntax_error(self):
        with pytest.raises(FormulaSyntaxError):
            parse_formula("p *")
        with pytest.raises(FormulaSyntaxError):
            parse_formula("(p")

    def test_polarity_error(self):
        with pytest.raises(PolarityError):
            parse_formula("p * 'n")

    def test_unknown_zone(self):
        with pytest.raises(UnknownZoneError, match="Unknown zone 'w'"):
            parse_formula("![w] 'n", builtin("mall"))

    def test_zone_check_skipped_without_signature(self):
        assert parse_formula("![w] 'n") == Bang("w", NegAtom("n"))

    def test_reserved_atoms(self):
        with pytest.raises(ReservedNameError):
            parse_formula("'k")
        with pytest.raises(ReservedNameError):
            parse_formula("n^")
        assert parse_formula("n^ -o 'k", allow_reserved=True) == \
            Lolli(PosAtom("n^"), NegAtom("k"))


class TestPrinting:
    """Tests for ASCII and Unicode printing"""

    def test_ascii(self):
        f = Bang("lin", Lolli(PosAtom("p"), NegAtom("n")))
        assert format_formula(f) == "![lin] (p -o 'n)"

    def test_unicode(self):
        f = Quest("u", Tensor(PosAtom("p"), PosAtom("n^")))
        assert format_formula(f, unicode=True) == "?_u (p ⊗ n̂)"

    def test_nested_binary_parenthesized(self):
        f = With(Lolli(PosAtom("p"), NegAtom("n")), NegAtom("m"))
        assert format_formula(f) == "(p -o 'n) & 'm"

    @settings(max_examples=200, deadline=None)
    @given(st.randoms(use_true_random=False), st.sampled_from(["classical", "c2i"]))
    def test_print_then_parse(self, rng: random.Random, fragment: str):
        """Printing then parsing returns the same formula"""
        sig = random_signature(rng)
        gen = FormulaGenerator(rng, sig, fragment)
        f = gen.positive() if rng.random() < 0.5 else gen.negative()
        assert parse_formula(format_formula(f), sig) == f
