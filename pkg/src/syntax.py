"""
Polarized formulas of subexponential logic

Formulas are immutable trees split into two polarity classes:

    positive  P ::= p | P * P | 1 | P + P | 0 | ![z] PN
    negative  N ::= 'n | N & N | top | N | N | bot | P -o N | ?[z] NP

where PN is a negative formula or a positive atom and NP is a positive
formula or a negative atom. Every constructor checks the polarity of its
operands, so an ill-polarized tree cannot be built.

The concrete ASCII grammar is parsed with lark; `format_formula` prints
either the ASCII form (which re-parses) or a Unicode rendering.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import TYPE_CHECKING, Iterator

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedEOF, UnexpectedInput, VisitError

from validators import (
    DUAL_SUFFIX,
    FormulaSyntaxError,
    KernelError,
    PolarityError,
    UnknownZoneError,
    validate_atom_name,
    validate_zone_name,
)

if TYPE_CHECKING:
    from signature import Signature

logger = logging.getLogger("subexp.syntax")


class Polarity(str, Enum):
    """The two polarity classes"""
    POSITIVE = "positive"
    NEGATIVE = "negative"


@dataclass(frozen=True)
class Atom:
    """An atomic proposition with its polarity"""
    name: str
    polarity: Polarity

    def __post_init__(self) -> None:
        validate_atom_name(self.name, allow_reserved=True)


class Formula:
    """Base class of all polarized formulas"""

    __slots__ = ()

    def __str__(self) -> str:
        return format_formula(self)


# ---------------------------------------------------------------------------
# Positive constructors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PosAtom(Formula):
    name: str

    def __post_init__(self) -> None:
        validate_atom_name(self.name, allow_reserved=True)

    @property
    def atom(self) -> Atom:
        return Atom(self.name, Polarity.POSITIVE)


@dataclass(frozen=True)
class Tensor(Formula):
    left: Formula
    right: Formula

    def __post_init__(self) -> None:
        _require(is_positive(self.left) and is_positive(self.right),
                 "tensor (*) requires positive operands", self)


@dataclass(frozen=True)
class One(Formula):
    pass


@dataclass(frozen=True)
class Plus(Formula):
    left: Formula
    right: Formula

    def __post_init__(self) -> None:
        _require(is_positive(self.left) and is_positive(self.right),
                 "plus (+) requires positive operands", self)


@dataclass(frozen=True)
class Zero(Formula):
    pass


@dataclass(frozen=True)
class Bang(Formula):
    zone: str
    body: Formula

    def __post_init__(self) -> None:
        validate_zone_name(self.zone)
        _require(is_pat(self.body),
                 "![z] requires a negative formula or a positive atom", self)


# ---------------------------------------------------------------------------
# Negative constructors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NegAtom(Formula):
    name: str

    def __post_init__(self) -> None:
        validate_atom_name(self.name, allow_reserved=True)

    @property
    def atom(self) -> Atom:
        return Atom(self.name, Polarity.NEGATIVE)


@dataclass(frozen=True)
class With(Formula):
    left: Formula
    right: Formula

    def __post_init__(self) -> None:
        _require(is_negative(self.left) and is_negative(self.right),
                 "with (&) requires negative operands", self)


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Par(Formula):
    left: Formula
    right: Formula

    def __post_init__(self) -> None:
        _require(is_negative(self.left) and is_negative(self.right),
                 "par (|) requires negative operands", self)


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class Lolli(Formula):
    antecedent: Formula
    consequent: Formula

    def __post_init__(self) -> None:
        _require(is_positive(self.antecedent) and is_negative(self.consequent),
                 "-o requires a positive antecedent and a negative consequent", self)


@dataclass(frozen=True)
class Quest(Formula):
    zone: str
    body: Formula

    def __post_init__(self) -> None:
        validate_zone_name(self.zone)
        _require(is_nat(self.body),
                 "?[z] requires a positive formula or a negative atom", self)


POSITIVE_TYPES = (PosAtom, Tensor, One, Plus, Zero, Bang)
NEGATIVE_TYPES = (NegAtom, With, Top, Par, Bot, Lolli, Quest)
BINARY_TYPES = (Tensor, Plus, With, Par, Lolli)
MODAL_TYPES = (Bang, Quest)


def _require(condition: bool, message: str, node: object) -> None:
    if not condition:
        raise PolarityError(f"Polarity violation: {message} in {type(node).__name__}")


def is_positive(f: Formula) -> bool:
    return isinstance(f, POSITIVE_TYPES)


def is_negative(f: Formula) -> bool:
    return isinstance(f, NEGATIVE_TYPES)


def is_atom(f: Formula) -> bool:
    return isinstance(f, (PosAtom, NegAtom))


def is_pat(f: Formula) -> bool:
    """Negative formula or positive atom (the class allowed on the left-passive side)"""
    return is_negative(f) or isinstance(f, PosAtom)


def is_nat(f: Formula) -> bool:
    """Positive formula or negative atom (the class allowed on the right-passive side)"""
    return is_positive(f) or isinstance(f, NegAtom)


def polarity_of(f: Formula) -> Polarity:
    """
    Polarity of a formula, read off its root constructor

    Raises:
        KernelError: If f is not a formula
    """
    if is_positive(f):
        return Polarity.POSITIVE
    if is_negative(f):
        return Polarity.NEGATIVE
    raise KernelError(f"Not a formula: {f!r}")


def dual_atom(n: Atom) -> Atom:
    """
    The positive dual of a negative atom, named with the reserved ^ suffix

    Raises:
        KernelError: If n is not a negative atom
    """
    if not isinstance(n, Atom) or n.polarity is not Polarity.NEGATIVE:
        raise KernelError(f"dual_atom expects a negative atom, got {n!r}")
    return Atom(n.name + DUAL_SUFFIX, Polarity.POSITIVE)


def dual(n: NegAtom) -> PosAtom:
    """dual_atom lifted to atomic formulas"""
    return PosAtom(dual_atom(n.atom).name)


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, BINARY_TYPES):
        return (f.antecedent, f.consequent) if isinstance(f, Lolli) else (f.left, f.right)
    if isinstance(f, MODAL_TYPES):
        return (f.body,)
    return ()


def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order traversal of f"""
    yield f
    for child in children(f):
        yield from subformulas(child)


def zones_of(f: Formula) -> set[str]:
    return {g.zone for g in subformulas(f) if isinstance(g, MODAL_TYPES)}


def atoms_of(f: Formula) -> set[Atom]:
    return {g.atom for g in subformulas(f) if isinstance(g, (PosAtom, NegAtom))}


def depth(f: Formula) -> int:
    kids = children(f)
    return 1 + max((depth(c) for c in kids), default=0)


def check_zones(f: Formula, sig: "Signature") -> None:
    """
    Check that every zone annotation in f is declared by sig

    Raises:
        UnknownZoneError: On the first undeclared zone
    """
    for zone in sorted(zones_of(f)):
        if zone not in sig.zones:
            raise UnknownZoneError(
                f"Unknown zone '{zone}'. Signature zones: {', '.join(sorted(sig.zones))}"
            )


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------

_ASCII_OPS = {Tensor: "*", Plus: "+", With: "&", Par: "|", Lolli: "-o"}
_UNICODE_OPS = {Tensor: "⊗", Plus: "⊕", With: "&", Par: "⅋", Lolli: "⊸"}


@lru_cache(maxsize=1 << 16)
def format_formula(f: Formula, unicode: bool = False) -> str:
    """
    Print a formula

    The ASCII form re-parses to an equal formula. The Unicode form is for
    display only.
    """
    if isinstance(f, PosAtom):
        if unicode and f.name.endswith(DUAL_SUFFIX):
            return f.name[: -len(DUAL_SUFFIX)] + "̂"
        return f.name
    if isinstance(f, NegAtom):
        return "'" + f.name
    if isinstance(f, One):
        return "1"
    if isinstance(f, Zero):
        return "0"
    if isinstance(f, Top):
        return "⊤" if unicode else "top"
    if isinstance(f, Bot):
        return "⊥" if unicode else "bot"
    if isinstance(f, MODAL_TYPES):
        mark = "!" if isinstance(f, Bang) else "?"
        prefix = f"{mark}_{f.zone}" if unicode else f"{mark}[{f.zone}]"
        return f"{prefix} {_wrap(f.body, unicode)}"
    op = (_UNICODE_OPS if unicode else _ASCII_OPS)[type(f)]
    if isinstance(f, Lolli):
        return f"{_wrap(f.antecedent, unicode)} {op} {format_formula(f.consequent, unicode)}"
    return f"{_wrap(f.left, unicode)} {op} {_wrap(f.right, unicode)}"


def _wrap(f: Formula, unicode: bool) -> str:
    text = format_formula(f, unicode)
    return f"({text})" if isinstance(f, BINARY_TYPES) else text


def sort_key(f: Formula) -> str:
    """Deterministic total order on formulas, used to canonicalize multisets"""
    return format_formula(f)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

GRAMMAR = r"""
    formula: lolli

    ?lolli: binop "-o" lolli     -> lolli
          | binop

    ?binop: binop "*" unary      -> tensor
          | binop "+" unary      -> plus
          | binop "&" unary      -> with_
          | binop "|" unary      -> par
          | unary

    ?unary: "!" "[" ZONE "]" unary  -> bang
          | "?" "[" ZONE "]" unary  -> quest
          | primary

    ?primary: NEG_ATOM           -> neg_atom
            | "1"                -> one
            | "0"                -> zero
            | "top"              -> top
            | "bot"              -> bot
            | IDENT              -> pos_atom
            | "(" lolli ")"

    sequent: [entries] ("|-" | "⊢") [entries]
    entries: zoned ("," zoned)*
    zoned: ZONE ":" lolli

    ZONE: /[A-Za-z_][A-Za-z0-9_]*(\.[lr])*/
    IDENT: /[A-Za-z_][A-Za-z0-9_]*\^?/
    NEG_ATOM: /'[A-Za-z_][A-Za-z0-9_]*\^?/

    %import common.WS
    %ignore WS
"""

_PARSER = Lark(GRAMMAR, start=["formula", "sequent", "zoned"], parser="lalr")


@v_args(inline=True)
class _FormulaBuilder(Transformer):
    """Turns a lark parse tree into formulas, checking names and zones"""

    def __init__(self, sig: "Signature | None", allow_reserved: bool):
        super().__init__()
        self.sig = sig
        self.allow_reserved = allow_reserved

    def _zone(self, token: Token) -> str:
        zone = str(token)
        if self.sig is not None and zone not in self.sig.zones:
            raise UnknownZoneError(
                f"Unknown zone '{zone}' at column {token.column}. "
                f"Signature zones: {', '.join(sorted(self.sig.zones))}"
            )
        return zone

    def formula(self, f: Formula) -> Formula:
        return f

    def pos_atom(self, token: Token) -> Formula:
        validate_atom_name(str(token), self.allow_reserved)
        return PosAtom(str(token))

    def neg_atom(self, token: Token) -> Formula:
        name = str(token)[1:]
        validate_atom_name(name, self.allow_reserved)
        return NegAtom(name)

    def one(self) -> Formula:
        return One()

    def zero(self) -> Formula:
        return Zero()

    def top(self) -> Formula:
        return Top()

    def bot(self) -> Formula:
        return Bot()

    def tensor(self, a: Formula, b: Formula) -> Formula:
        return Tensor(a, b)

    def plus(self, a: Formula, b: Formula) -> Formula:
        return Plus(a, b)

    def with_(self, a: Formula, b: Formula) -> Formula:
        return With(a, b)

    def par(self, a: Formula, b: Formula) -> Formula:
        return Par(a, b)

    def lolli(self, a: Formula, b: Formula) -> Formula:
        return Lolli(a, b)

    def bang(self, zone: Token, body: Formula) -> Formula:
        return Bang(self._zone(zone), body)

    def quest(self, zone: Token, body: Formula) -> Formula:
        return Quest(self._zone(zone), body)

    def zoned(self, zone: Token, f: Formula) -> tuple[str, Formula]:
        return self._zone(zone), f

    def entries(self, *items: tuple[str, Formula]) -> list:
        return list(items)

    def sequent(self, left: list | None, right: list | None) -> tuple[list, list]:
        return left or [], right or []


def _run(text: str, start: str, sig: "Signature | None", allow_reserved: bool):
    try:
        tree = _PARSER.parse(text, start=start)
    except UnexpectedEOF as e:
        raise FormulaSyntaxError(f"Unexpected end of input in {text!r}") from e
    except UnexpectedInput as e:
        raise FormulaSyntaxError(
            f"Syntax error in {text!r}", line=e.line, column=e.column
        ) from e

    try:
        return _FormulaBuilder(sig, allow_reserved).transform(tree)
    except VisitError as e:
        if isinstance(e.orig_exc, KernelError):
            raise e.orig_exc from None
        raise


def parse_formula(text: str, sig: "Signature | None" = None,
                  allow_reserved: bool = False) -> Formula:
    """
    Parse a formula in the ASCII grammar

    Args:
        text: Formula text, e.g. "![w] (p -o 'n)"
        sig: Signature whose zones the formula may mention (None skips the zone check)
        allow_reserved: Accept the answer atom and dual atoms (for re-reading encoder output)

    Raises:
        FormulaSyntaxError: Text does not match the grammar
        PolarityError: A connective has operands of the wrong class
        UnknownZoneError: A zone is not declared in sig
        ReservedNameError: A reserved atom was used
    """
    return _run(text, "formula", sig, allow_reserved)


def parse_entries(text: str, sig: "Signature | None" = None,
                  allow_reserved: bool = False) -> tuple[list, list]:
    """
    Parse `z1:F1, ... |- z:G, ...` into left and right lists of (zone, formula)

    Shape restrictions are checked by the sequents module.
    """
    return _run(text, "sequent", sig, allow_reserved)


def parse_zoned(text: str, sig: "Signature | None" = None,
                allow_reserved: bool = False) -> tuple[str, Formula]:
    """Parse a single `z:F` entry into (zone, formula)"""
    return _run(text, "zoned", sig, allow_reserved)
