"""
Encodings between the classical and intuitionistic calculi

c2i  classical -> intuitionistic over the same signature, by a negative
     translation into the fixed answer atom k. Negative atoms map to their
     reserved positive duals n^.

i2c  intuitionistic -> classical over the split signature. Each source
     zone z becomes z.l (left occurrences) and z.r (right occurrences), so
     the classical target can keep left and right subformulas apart.

naive-i2c  the identity on formulas over the unsplit signature. It exists
     as a negative control: it is not adequate in general.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Literal

from sequents import (
    Active,
    Calculus,
    ClassicalSequent,
    IActiveP,
    IActiveR,
    ILeftFocus,
    IntuitSequent,
    IRightFocus,
    LeftFocus,
    RightFocus,
    Sequent,
    ZonedFormula,
    calculus_of,
)
from signature import Signature, left_form, right_form, split
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
    atoms_of,
    dual,
    format_formula,
    is_negative,
    is_positive,
)
from validators import ANSWER_ATOM, EncodingError, is_reserved

logger = logging.getLogger("subexp.encoding")

ANSWER = NegAtom(ANSWER_ATOM)

C2IMode = Literal["eq", "ne"]
I2CMode = Literal["lp", "lf", "rf", "la", "ra", "rp"]


class Direction(str, Enum):
    C2I = "c2i"
    I2C = "i2c"
    NAIVE_I2C = "naive-i2c"


# ---------------------------------------------------------------------------
# Classical to intuitionistic
# ---------------------------------------------------------------------------

def _check_unreserved(f: Formula) -> None:
    for atom in sorted(atoms_of(f), key=lambda a: a.name):
        if is_reserved(atom.name):
            raise EncodingError(
                f"Reserved atom {atom.name!r} in input to the encoding: {format_formula(f)}")


def _refute(f: Formula) -> Formula:
    return Lolli(f, ANSWER)


def teq(f: Formula) -> Formula:
    """Translation of a formula in a position that is proved"""
    if isinstance(f, PosAtom):
        return f
    if isinstance(f, Bang):
        if not is_negative(f.body):
            raise EncodingError(
                f"Cannot translate {format_formula(f)}: ![z] over a positive atom is outside "
                f"the classical-to-intuitionistic fragment")
        return Bang(f.zone, teq(f.body))
    if isinstance(f, Tensor):
        return Tensor(teq(f.left), teq(f.right))
    if isinstance(f, Plus):
        return Plus(teq(f.left), teq(f.right))
    if isinstance(f, One):
        return One()
    if isinstance(f, Zero):
        return Zero()
    return _refute(tne(f))


def tne(f: Formula) -> Formula:
    """Translation of a formula in a position that is refuted"""
    if isinstance(f, NegAtom):
        return dual(f)
    if isinstance(f, Quest):
        if not is_positive(f.body):
            raise EncodingError(
                f"Cannot translate {format_formula(f)}: ?[z] over a negative atom is outside "
                f"the classical-to-intuitionistic fragment")
        return Bang(f.zone, tne(f.body))
    if isinstance(f, Par):
        return Tensor(tne(f.left), tne(f.right))
    if isinstance(f, Bot):
        return One()
    if isinstance(f, With):
        return Plus(tne(f.left), tne(f.right))
    if isinstance(f, Top):
        return Zero()
    if isinstance(f, Lolli):
        return Tensor(teq(f.antecedent), tne(f.consequent))
    return _refute(teq(f))


def c2i_formula(f: Formula, mode: C2IMode) -> Formula:
    """
    Translate a classical formula

    Args:
        mode: "eq" for proved positions, "ne" for refuted ones

    Raises:
        EncodingError: Reserved atoms in f, or f outside the fragment
    """
    _check_unreserved(f)
    if mode == "eq":
        return teq(f)
    if mode == "ne":
        return tne(f)
    raise EncodingError(f"Unknown c2i mode {mode!r}; expected 'eq' or 'ne'")


def _zoned(entry: ZonedFormula, translate) -> ZonedFormula:
    return ZonedFormula(entry.zone, translate(entry.formula))


def c2i_sequent(seq: ClassicalSequent, sig: Signature) -> IntuitSequent:
    """
    Translate a classical sequent of any shape

    Left entries are translated as proved and right entries as refuted; both
    land on the left. A neutral or active sequent gets the answer atom in
    the working zone on the right.

    Raises:
        EncodingError: Reserved atoms, or formulas outside the fragment
    """
    for f in _classical_formulas(seq):
        _check_unreserved(f)

    gamma = tuple(_zoned(e, teq) for e in seq.left) + tuple(_zoned(e, tne) for e in seq.right)
    if isinstance(seq, RightFocus):
        return IRightFocus(gamma, teq(seq.focus))
    if isinstance(seq, LeftFocus):
        return IRightFocus(gamma, tne(seq.focus))

    omega = tuple(teq(f) for f in seq.left_active) + tuple(tne(f) for f in seq.right_active)
    for f in omega:
        if not (is_positive(f) or isinstance(f, NegAtom)):
            raise EncodingError(
                f"Active formula translates to {format_formula(f)}, which cannot be left-active")
    return IActiveP(gamma, omega, ZonedFormula(sig.working, ANSWER))


# ---------------------------------------------------------------------------
# Intuitionistic to classical
# ---------------------------------------------------------------------------

class _SplitTranslator:
    """The six mutually recursive maps, for one source working zone"""

    def __init__(self, working: str):
        self.working = working

    def lp(self, f: Formula) -> Formula:
        if isinstance(f, PosAtom):
            return f
        if is_negative(f):
            return self.lf(f)
        raise EncodingError(f"lp expects a negative formula or positive atom: {format_formula(f)}")

    def rp(self, f: Formula) -> Formula:
        if isinstance(f, NegAtom):
            return f
        if is_positive(f):
            return self.rf(f)
        raise EncodingError(f"rp expects a positive formula or negative atom: {format_formula(f)}")

    def lf(self, f: Formula) -> Formula:
        if isinstance(f, NegAtom):
            return f
        if isinstance(f, Quest):
            return Quest(right_form(f.zone), self.la(f.body))
        if isinstance(f, With):
            return With(self.lf(f.left), self.lf(f.right))
        if isinstance(f, Top):
            return Top()
        if isinstance(f, Lolli):
            return Lolli(self.rf(f.antecedent), self.lf(f.consequent))
        raise EncodingError(f"lf has no case for {format_formula(f)}")

    def rf(self, f: Formula) -> Formula:
        if isinstance(f, PosAtom):
            return f
        if isinstance(f, Bang):
            return Bang(left_form(f.zone), self.ra(f.body))
        if isinstance(f, Tensor):
            return Tensor(self.rf(f.left), self.rf(f.right))
        if isinstance(f, Plus):
            return Plus(self.rf(f.left), self.rf(f.right))
        if isinstance(f, One):
            return One()
        if isinstance(f, Zero):
            return Zero()
        raise EncodingError(f"rf has no case for {format_formula(f)}")

    def la(self, f: Formula) -> Formula:
        if isinstance(f, (PosAtom, NegAtom)):
            return Bang(left_form(self.working), f)
        if isinstance(f, Bang):
            return Bang(left_form(f.zone), self.lp(f.body))
        if isinstance(f, Tensor):
            return Tensor(self.la(f.left), self.la(f.right))
        if isinstance(f, Plus):
            return Plus(self.la(f.left), self.la(f.right))
        if isinstance(f, One):
            return One()
        if isinstance(f, Zero):
            return Zero()
        raise EncodingError(f"la has no case for {format_formula(f)}")

    def ra(self, f: Formula) -> Formula:
        if isinstance(f, (PosAtom, NegAtom)):
            return Quest(right_form(self.working), f)
        if isinstance(f, Quest):
            return Quest(right_form(f.zone), self.rp(f.body))
        if isinstance(f, With):
            return With(self.ra(f.left), self.ra(f.right))
        if isinstance(f, Top):
            return Top()
        if isinstance(f, Lolli):
            return Lolli(self.la(f.antecedent), self.ra(f.consequent))
        raise EncodingError(f"ra has no case for {format_formula(f)}")

    def left_entry(self, entry: ZonedFormula) -> ZonedFormula:
        return ZonedFormula(left_form(entry.zone), self.lp(entry.formula))

    def right_entry(self, entry: ZonedFormula) -> ZonedFormula:
        return ZonedFormula(right_form(entry.zone), self.rp(entry.formula))


def i2c_formula(f: Formula, mode: I2CMode, sig: Signature) -> Formula:
    """
    Translate an intuitionistic formula into the split signature of sig

    Args:
        mode: lp/rp for passive left/right entries, lf/rf for a focus on the
            left/right, la/ra for left/right active formulas

    Raises:
        EncodingError: f is outside the domain of the chosen map
    """
    translator = _SplitTranslator(sig.working)
    if mode not in ("lp", "lf", "rf", "la", "ra", "rp"):
        raise EncodingError(f"Unknown i2c mode {mode!r}")
    return getattr(translator, mode)(f)


def i2c_zoned(entry: ZonedFormula, mode: Literal["lp", "rp"], sig: Signature) -> ZonedFormula:
    """Translate a passive entry: lp sends z:F to z.l, rp sends it to z.r"""
    translator = _SplitTranslator(sig.working)
    if mode == "lp":
        return translator.left_entry(entry)
    if mode == "rp":
        return translator.right_entry(entry)
    raise EncodingError(f"Passive entries translate with lp or rp, not {mode!r}")


def i2c_sequent(seq: IntuitSequent, sig: Signature) -> ClassicalSequent:
    """Translate an intuitionistic sequent of any shape over split(sig)"""
    t = _SplitTranslator(sig.working)
    gamma = tuple(t.left_entry(e) for e in seq.left)

    if isinstance(seq, IRightFocus):
        return RightFocus(gamma, t.rf(seq.focus), ())
    if isinstance(seq, ILeftFocus):
        return LeftFocus(gamma, t.lf(seq.focus), (t.right_entry(seq.right),))
    omega = tuple(t.la(f) for f in seq.left_active)
    if isinstance(seq, IActiveR):
        return Active(gamma, omega, (t.ra(seq.right_active),), ())
    return Active(gamma, omega, (), (t.right_entry(seq.right),))


def naive_i2c_sequent(seq: IntuitSequent) -> ClassicalSequent:
    """Read an intuitionistic sequent as a classical one, unchanged"""
    if isinstance(seq, IRightFocus):
        return RightFocus(seq.left, seq.focus, ())
    if isinstance(seq, ILeftFocus):
        return LeftFocus(seq.left, seq.focus, (seq.right,))
    if isinstance(seq, IActiveR):
        return Active(seq.left, seq.left_active, (seq.right_active,), ())
    return Active(seq.left, seq.left_active, (), (seq.right,))


def _classical_formulas(seq: ClassicalSequent) -> list[Formula]:
    items = [e.formula for e in seq.left + seq.right]
    if isinstance(seq, (RightFocus, LeftFocus)):
        items.append(seq.focus)
    else:
        items.extend(seq.left_active + seq.right_active)
    return items


# ---------------------------------------------------------------------------
# Directions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EncodingDirection:
    """An encoding together with its source and target signatures"""
    tag: Direction
    source_sig: Signature
    target_sig: Signature

    @property
    def source_calculus(self) -> Calculus:
        return Calculus.CLASSICAL if self.tag is Direction.C2I else Calculus.INTUITIONISTIC

    @property
    def target_calculus(self) -> Calculus:
        return Calculus.INTUITIONISTIC if self.tag is Direction.C2I else Calculus.CLASSICAL

    def encode(self, seq: Sequent) -> Sequent:
        """
        Raises:
            EncodingError: seq belongs to the wrong calculus or is outside the domain
        """
        if calculus_of(seq) is not self.source_calculus:
            raise EncodingError(
                f"{self.tag.value} expects a {self.source_calculus.value} sequent")
        if self.tag is Direction.C2I:
            return c2i_sequent(seq, self.source_sig)  # type: ignore[arg-type]
        if self.tag is Direction.I2C:
            return i2c_sequent(seq, self.source_sig)  # type: ignore[arg-type]
        return naive_i2c_sequent(seq)  # type: ignore[arg-type]


def direction_for(tag: Direction | str, sig: Signature) -> EncodingDirection:
    """
    Pair an encoding with its signatures; i2c targets split(sig)

    Raises:
        SignatureError: If sig is invalid
    """
    tag = Direction(tag)
    target = split(sig) if tag is Direction.I2C else sig
    logger.debug(f"Direction {tag.value}: {sig.label()} -> {target.label()}")
    return EncodingDirection(tag, sig, target)
