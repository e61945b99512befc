"""
Sequents of the two focused calculi

Contexts are multisets of zoned formulas. They are stored as sorted tuples
so that two sequents with the same contents compare and hash equal; every
constructor canonicalizes its contexts on the way in.

Classical shapes:

    RightFocus   G |- [P] ; D
    LeftFocus    G ; [N] |- D
    Active       G ; O |- X ; D        (neutral when O and X are empty)

Intuitionistic shapes (exactly one right-hand formula):

    IRightFocus  G |- [P]
    ILeftFocus   G ; [N] |- z:Q
    IActiveR     G ; O |- N ; .
    IActiveP     G ; O |- . ; z:Q      (neutral when O is empty)
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Union

from signature import Signature
from syntax import (
    BINARY_TYPES,
    Bot,
    Formula,
    Par,
    format_formula,
    is_nat,
    is_negative,
    is_pat,
    is_positive,
    parse_entries,
    parse_zoned as parse_zoned_pair,
    sort_key,
    subformulas,
)
from validators import SequentError, UnknownZoneError


class Calculus(str, Enum):
    CLASSICAL = "classical"
    INTUITIONISTIC = "intuitionistic"


@dataclass(frozen=True)
class ZonedFormula:
    """A formula stored in a zone"""
    zone: str
    formula: Formula

    def __str__(self) -> str:
        return format_zoned(self)


Context = tuple[ZonedFormula, ...]
Formulas = tuple[Formula, ...]


def zoned_key(entry: ZonedFormula) -> tuple[str, str]:
    return entry.zone, sort_key(entry.formula)


def context(entries: Iterable[ZonedFormula]) -> Context:
    """Canonical form of a multiset of zoned formulas"""
    return tuple(sorted(entries, key=zoned_key))


def formulas(items: Iterable[Formula]) -> Formulas:
    """Canonical form of a multiset of formulas"""
    return tuple(sorted(items, key=sort_key))


def without(items: tuple, index: int) -> tuple:
    return items[:index] + items[index + 1:]


def distinct_indices(items: tuple) -> list[int]:
    """Indices of the first occurrence of each distinct element of a sorted tuple"""
    return [i for i, item in enumerate(items) if i == 0 or items[i - 1] != item]


def _canon(obj: object, **fields: tuple) -> None:
    for name, value in fields.items():
        object.__setattr__(obj, name, value)


# ---------------------------------------------------------------------------
# Classical shapes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RightFocus:
    left: Context
    focus: Formula
    right: Context

    def __post_init__(self) -> None:
        _canon(self, left=context(self.left), right=context(self.right))


@dataclass(frozen=True)
class LeftFocus:
    left: Context
    focus: Formula
    right: Context

    def __post_init__(self) -> None:
        _canon(self, left=context(self.left), right=context(self.right))


@dataclass(frozen=True)
class Active:
    left: Context
    left_active: Formulas
    right_active: Formulas
    right: Context

    def __post_init__(self) -> None:
        _canon(self, left=context(self.left), right=context(self.right),
               left_active=formulas(self.left_active),
               right_active=formulas(self.right_active))

    @property
    def neutral(self) -> bool:
        return not self.left_active and not self.right_active


ClassicalSequent = Union[RightFocus, LeftFocus, Active]


def neutral(left: Iterable[ZonedFormula], right: Iterable[ZonedFormula]) -> Active:
    return Active(tuple(left), (), (), tuple(right))


# ---------------------------------------------------------------------------
# Intuitionistic shapes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IRightFocus:
    left: Context
    focus: Formula

    def __post_init__(self) -> None:
        _canon(self, left=context(self.left))


@dataclass(frozen=True)
class ILeftFocus:
    left: Context
    focus: Formula
    right: ZonedFormula

    def __post_init__(self) -> None:
        _canon(self, left=context(self.left))


@dataclass(frozen=True)
class IActiveR:
    left: Context
    left_active: Formulas
    right_active: Formula

    def __post_init__(self) -> None:
        _canon(self, left=context(self.left), left_active=formulas(self.left_active))


@dataclass(frozen=True)
class IActiveP:
    left: Context
    left_active: Formulas
    right: ZonedFormula

    def __post_init__(self) -> None:
        _canon(self, left=context(self.left), left_active=formulas(self.left_active))

    @property
    def neutral(self) -> bool:
        return not self.left_active


IntuitSequent = Union[IRightFocus, ILeftFocus, IActiveR, IActiveP]
Sequent = Union[ClassicalSequent, IntuitSequent]

FOCUSED_TYPES = (RightFocus, LeftFocus, IRightFocus, ILeftFocus)


def i_neutral(left: Iterable[ZonedFormula], right: ZonedFormula) -> IActiveP:
    return IActiveP(tuple(left), (), right)


def is_focused(seq: Sequent) -> bool:
    return isinstance(seq, FOCUSED_TYPES)


def is_neutral(seq: Sequent) -> bool:
    return isinstance(seq, (Active, IActiveP)) and seq.neutral


def calculus_of(seq: Sequent) -> Calculus:
    if isinstance(seq, (RightFocus, LeftFocus, Active)):
        return Calculus.CLASSICAL
    return Calculus.INTUITIONISTIC


# ---------------------------------------------------------------------------
# Shape checks
# ---------------------------------------------------------------------------

def _check_entries(entries: Iterable[ZonedFormula], sig: Signature, side: str) -> None:
    ok = is_pat if side == "left" else is_nat
    wanted = ("a negative formula or positive atom" if side == "left"
              else "a positive formula or negative atom")
    for entry in entries:
        if entry.zone not in sig.zones:
            raise UnknownZoneError(
                f"Unknown zone '{entry.zone}'. Signature zones: {', '.join(sorted(sig.zones))}")
        _check_formula_zones(entry.formula, sig)
        if not ok(entry.formula):
            raise SequentError(
                f"{side.capitalize()} passive entry {entry} must be {wanted}")


def _check_formula_zones(f: Formula, sig: Signature) -> None:
    for g in subformulas(f):
        zone = getattr(g, "zone", None)
        if zone is not None and zone not in sig.zones:
            raise UnknownZoneError(
                f"Unknown zone '{zone}'. Signature zones: {', '.join(sorted(sig.zones))}")


def _check_active(items: Iterable[Formula], sig: Signature, side: str) -> None:
    ok = is_nat if side == "left" else is_pat
    for f in items:
        _check_formula_zones(f, sig)
        if not ok(f):
            raise SequentError(f"Formula {format_formula(f)} cannot be {side}-active")


def _check_single_right(items: Iterable[Formula]) -> None:
    for f in items:
        for g in subformulas(f):
            if isinstance(g, (Par, Bot)):
                raise SequentError(
                    f"Intuitionistic sequents cannot contain par or bot: {format_formula(f)}")


def check_classical(seq: ClassicalSequent, sig: Signature) -> ClassicalSequent:
    """
    Check the polarity restrictions and zone declarations of a classical sequent

    Raises:
        SequentError: A context holds a formula of the wrong class
        UnknownZoneError: A zone is not declared in sig
    """
    if not isinstance(seq, (RightFocus, LeftFocus, Active)):
        raise SequentError(f"Not a classical sequent: {type(seq).__name__}")
    _check_entries(seq.left, sig, "left")
    _check_entries(seq.right, sig, "right")
    if isinstance(seq, RightFocus) and not is_positive(seq.focus):
        raise SequentError(f"Right focus must be positive: {format_formula(seq.focus)}")
    if isinstance(seq, LeftFocus) and not is_negative(seq.focus):
        raise SequentError(f"Left focus must be negative: {format_formula(seq.focus)}")
    if isinstance(seq, (RightFocus, LeftFocus)):
        _check_formula_zones(seq.focus, sig)
    if isinstance(seq, Active):
        _check_active(seq.left_active, sig, "left")
        _check_active(seq.right_active, sig, "right")
    return seq


def check_intuitionistic(seq: IntuitSequent, sig: Signature) -> IntuitSequent:
    """
    Check an intuitionistic sequent; additionally no par or bot may occur

    Raises:
        SequentError: A context holds a formula of the wrong class
        UnknownZoneError: A zone is not declared in sig
    """
    if not isinstance(seq, (IRightFocus, ILeftFocus, IActiveR, IActiveP)):
        raise SequentError(f"Not an intuitionistic sequent: {type(seq).__name__}")
    _check_entries(seq.left, sig, "left")
    every = [e.formula for e in seq.left]
    if isinstance(seq, (ILeftFocus, IActiveP)):
        _check_entries((seq.right,), sig, "right")
        every.append(seq.right.formula)
    if isinstance(seq, IRightFocus) and not is_positive(seq.focus):
        raise SequentError(f"Right focus must be positive: {format_formula(seq.focus)}")
    if isinstance(seq, ILeftFocus) and not is_negative(seq.focus):
        raise SequentError(f"Left focus must be negative: {format_formula(seq.focus)}")
    if isinstance(seq, (IRightFocus, ILeftFocus)):
        _check_formula_zones(seq.focus, sig)
        every.append(seq.focus)
    if isinstance(seq, (IActiveR, IActiveP)):
        _check_active(seq.left_active, sig, "left")
        every.extend(seq.left_active)
    if isinstance(seq, IActiveR):
        _check_active((seq.right_active,), sig, "right")
        every.append(seq.right_active)
    _check_single_right(every)
    return seq


def check_sequent(seq: Sequent, sig: Signature) -> Sequent:
    if calculus_of(seq) is Calculus.CLASSICAL:
        return check_classical(seq, sig)  # type: ignore[arg-type]
    return check_intuitionistic(seq, sig)  # type: ignore[arg-type]


# ---------------------------------------------------------------------------
# Parsing and printing
# ---------------------------------------------------------------------------

def parse_zoned(text: str, sig: Signature | None = None,
                allow_reserved: bool = False) -> ZonedFormula:
    """Parse `z:F`"""
    zone, formula = parse_zoned_pair(text, sig, allow_reserved)
    return ZonedFormula(zone, formula)


def parse_sequent(text: str, sig: Signature, calculus: Calculus | str = Calculus.CLASSICAL,
                  allow_reserved: bool = False) -> Sequent:
    """
    Parse a neutral sequent `z1:F1, ... |- z:G, ...`

    Args:
        calculus: Intuitionistic sequents must have exactly one right entry
        allow_reserved: Accept encoder-produced atoms

    Raises:
        FormulaSyntaxError, PolarityError, UnknownZoneError, ReservedNameError,
        SequentError
    """
    calculus = Calculus(calculus)
    left, right = parse_entries(text, sig, allow_reserved)
    left_ctx = [ZonedFormula(z, f) for z, f in left]
    right_ctx = [ZonedFormula(z, f) for z, f in right]

    if calculus is Calculus.CLASSICAL:
        return check_classical(neutral(left_ctx, right_ctx), sig)
    if len(right_ctx) != 1:
        raise SequentError(
            f"An intuitionistic sequent needs exactly one right entry, got {len(right_ctx)}")
    return check_intuitionistic(i_neutral(left_ctx, right_ctx[0]), sig)


def format_zoned(entry: ZonedFormula, unicode: bool = False) -> str:
    text = format_formula(entry.formula, unicode)
    if isinstance(entry.formula, BINARY_TYPES):
        text = f"({text})"
    return f"{entry.zone}:{text}"


def _join(entries: Iterable[ZonedFormula], unicode: bool) -> str:
    text = ", ".join(format_zoned(e, unicode) for e in entries)
    return text or ("·" if unicode else "")


def _join_formulas(items: Iterable[Formula], unicode: bool) -> str:
    text = ", ".join(format_formula(f, unicode) for f in items)
    return text or ("·" if unicode else ".")


def format_sequent(seq: Sequent, unicode: bool = False) -> str:
    """
    Print a sequent

    Neutral sequents print in the parseable `G |- D` form; the other shapes
    use `;` to separate the active or focused parts from the passive ones.
    """
    turnstile = "⊢" if unicode else "|-"
    g = _join(seq.left, unicode)

    if isinstance(seq, (Active, IActiveP)) and seq.neutral:
        right = _join(seq.right, unicode) if isinstance(seq, Active) else \
            format_zoned(seq.right, unicode)
        return f"{g} {turnstile} {right}".strip()

    if isinstance(seq, RightFocus):
        return f"{g} {turnstile} [{format_formula(seq.focus, unicode)}] ; " \
               f"{_join(seq.right, unicode)}".strip()
    if isinstance(seq, LeftFocus):
        return f"{g} ; [{format_formula(seq.focus, unicode)}] {turnstile} " \
               f"{_join(seq.right, unicode)}".strip()
    if isinstance(seq, Active):
        return (f"{g} ; {_join_formulas(seq.left_active, unicode)} {turnstile} "
                f"{_join_formulas(seq.right_active, unicode)} ; "
                f"{_join(seq.right, unicode)}").strip()
    if isinstance(seq, IRightFocus):
        return f"{g} {turnstile} [{format_formula(seq.focus, unicode)}]".strip()
    if isinstance(seq, ILeftFocus):
        return (f"{g} ; [{format_formula(seq.focus, unicode)}] {turnstile} "
                f"{format_zoned(seq.right, unicode)}").strip()
    if isinstance(seq, IActiveR):
        return (f"{g} ; {_join_formulas(seq.left_active, unicode)} {turnstile} "
                f"{format_formula(seq.right_active, unicode)} ; .").strip()
    return (f"{g} ; {_join_formulas(seq.left_active, unicode)} {turnstile} . ; "
            f"{format_zoned(seq.right, unicode)}").strip()


def sequent_key(seq: Sequent) -> str:
    return format_sequent(seq)
