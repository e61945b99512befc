"""
Subexponential signatures

A signature is a finite preordered set of zones with a working zone and an
upward-closed set of unrestricted zones. The preorder is stored as
generating pairs; its reflexive-transitive closure is computed once (with
networkx) and cached so that the side conditions of the !/? focus rules are
constant-time lookups.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Literal

import networkx as nx
from networkx.algorithms.isomorphism import DiGraphMatcher
from pydantic import ValidationError

from models import SignatureFile
from validators import KernelError, SignatureError, UnknownZoneError, validate_zone_name

logger = logging.getLogger("subexp.signature")

BUILTIN_NAMES = ("mall", "ll", "l")


@dataclass(frozen=True)
class Violation:
    """One broken signature invariant"""
    code: str
    message: str


@dataclass(frozen=True)
class Signature:
    """A subexponential signature <Z, <=, lin, U>"""
    zones: frozenset[str]
    order: frozenset[tuple[str, str]]
    working: str
    unrestricted: frozenset[str]
    name: str | None = field(default=None, compare=False)

    @cached_property
    def closure(self) -> frozenset[tuple[str, str]]:
        """Reflexive-transitive closure of the generating pairs"""
        return frozenset(closure_graph(self).edges)

    def leq(self, z1: str, z2: str) -> bool:
        return (z1, z2) in self.closure

    def is_unrestricted(self, zone: str) -> bool:
        return zone in self.unrestricted

    def label(self) -> str:
        return self.name or "<anonymous>"


def make_signature(zones: Iterable[str], order: Iterable[tuple[str, str]], working: str,
                   unrestricted: Iterable[str], name: str | None = None) -> Signature:
    """Build a signature from plain iterables (not validated)"""
    return Signature(
        zones=frozenset(zones),
        order=frozenset((x, y) for x, y in order),
        working=working,
        unrestricted=frozenset(unrestricted),
        name=name,
    )


def closure_graph(sig: Signature) -> nx.DiGraph:
    """Directed graph of the reflexive-transitive closure of the order over declared zones"""
    g = nx.DiGraph()
    g.add_nodes_from(sorted(sig.zones))
    g.add_edges_from(sorted((x, y) for x, y in sig.order if x in sig.zones and y in sig.zones))
    return nx.transitive_closure(g, reflexive=True)


def validate(sig: Signature) -> list[Violation]:
    """
    Check every signature invariant

    Returns:
        The list of violations; empty means the signature is valid. The
        closure is computed (and cached) as a side effect of validation.
    """
    violations: list[Violation] = []

    if not sig.zones:
        violations.append(Violation("empty-zones", "Zone set is empty"))

    for zone in sorted(sig.zones):
        try:
            validate_zone_name(zone)
        except KernelError as e:
            violations.append(Violation("bad-zone-name", str(e)))

    if sig.working not in sig.zones:
        violations.append(Violation(
            "working-missing", f"Working zone '{sig.working}' is not a declared zone"))

    for zone in sorted(sig.unrestricted - sig.zones):
        violations.append(Violation(
            "unrestricted-unknown", f"Unrestricted zone '{zone}' is not a declared zone"))

    for x, y in sorted(sig.order):
        for z in (x, y):
            if z not in sig.zones:
                violations.append(Violation(
                    "order-unknown", f"Order pair ({x}, {y}) mentions undeclared zone '{z}'"))

    # U must be upward closed under the closure of the order
    for x, y in sorted(sig.closure):
        if x in sig.unrestricted and y not in sig.unrestricted:
            violations.append(Violation(
                "unrestricted-not-closed",
                f"Unrestricted set is not upward closed: {x} <= {y}, {x} is unrestricted, "
                f"{y} is not"))

    if violations:
        logger.debug(f"Signature {sig.label()} has {len(violations)} violation(s)")
    return violations


def ensure_valid(sig: Signature) -> Signature:
    """
    Return sig if valid

    Raises:
        SignatureError: Carrying the full violation list
    """
    violations = validate(sig)
    if violations:
        details = "; ".join(v.message for v in violations)
        raise SignatureError(f"Invalid signature {sig.label()}: {details}", violations)
    return sig


def leq(sig: Signature, z1: str, z2: str) -> bool:
    """
    Preorder query z1 <= z2

    Raises:
        UnknownZoneError: If either zone is undeclared
    """
    for zone in (z1, z2):
        if zone not in sig.zones:
            raise UnknownZoneError(f"Unknown zone '{zone}' in signature {sig.label()}")
    return sig.leq(z1, z2)


@dataclass(frozen=True)
class ZoneLabel:
    """A zone of a split signature: a source zone tagged with its left or right form"""
    base: str
    form: Literal["l", "r"]

    def __str__(self) -> str:
        return f"{self.base}.{self.form}"

    @classmethod
    def parse(cls, zone: str) -> "ZoneLabel | None":
        """Read a split-form zone name; None if the name carries no form tag"""
        base, dot, form = zone.rpartition(".")
        if not dot or form not in ("l", "r"):
            return None
        return cls(base, form)  # type: ignore[arg-type]


def left_form(zone: str) -> str:
    return str(ZoneLabel(zone, "l"))


def right_form(zone: str) -> str:
    return str(ZoneLabel(zone, "r"))


def split(sig: Signature) -> Signature:
    """
    The split form of a signature

    Each zone z becomes z.l and z.r. Inside each form the source order is
    kept; each right form sits below its own left form (z.r <= z.l) and the
    reverse never holds. Only left forms of unrestricted zones are
    unrestricted, and the working zone is lin.l.

    Raises:
        SignatureError: If sig is invalid
    """
    ensure_valid(sig)
    order: set[tuple[str, str]] = set()
    for x, y in sig.order:
        order.add((left_form(x), left_form(y)))
        order.add((right_form(x), right_form(y)))
    for z in sig.zones:
        order.add((right_form(z), left_form(z)))

    result = make_signature(
        zones={left_form(z) for z in sig.zones} | {right_form(z) for z in sig.zones},
        order=order,
        working=left_form(sig.working),
        unrestricted={left_form(u) for u in sig.unrestricted},
        name=f"split({sig.label()})",
    )
    logger.debug(f"Split {sig.label()} into {len(result.zones)} zones")
    return ensure_valid(result)


def builtin(name: str) -> Signature:
    """
    One of the familiar instances: mall, ll (classical linear) or l (classical)

    Raises:
        KernelError: If the name is not recognized
    """
    if name == "mall":
        return make_signature({"lin"}, (), "lin", (), name="mall")
    if name == "ll":
        return make_signature({"lin", "u"}, {("lin", "u")}, "lin", {"u"}, name="ll")
    if name == "l":
        return make_signature({"lin"}, (), "lin", {"lin"}, name="l")
    raise KernelError(f"Unknown builtin signature '{name}'. Known: {', '.join(BUILTIN_NAMES)}")


def from_model(model: SignatureFile, name: str | None = None) -> Signature:
    return make_signature(
        model.zones, [tuple(pair) for pair in model.order], model.working,
        model.unrestricted, name=name,
    )


def to_model(sig: Signature) -> SignatureFile:
    return SignatureFile(
        zones=sorted(sig.zones),
        order=[list(pair) for pair in sorted(sig.order)],
        working=sig.working,
        unrestricted=sorted(sig.unrestricted),
    )


def read_signature(source: str) -> Signature:
    """
    Resolve a --sig argument without validating it

    Args:
        source: "mall", "ll", "l" or a path to a JSON signature file

    Raises:
        KernelError: Unknown name, unreadable file or malformed JSON
    """
    if source in BUILTIN_NAMES:
        return builtin(source)

    path = Path(source)
    if not path.is_file():
        raise KernelError(
            f"Signature '{source}' is neither a builtin ({', '.join(BUILTIN_NAMES)}) "
            f"nor a readable file")
    try:
        model = SignatureFile.model_validate(json.loads(path.read_text(encoding="utf-8")))
    except (json.JSONDecodeError, ValidationError) as e:
        raise KernelError(f"Malformed signature file {path}: {e}") from e
    sig = from_model(model, name=path.stem)
    logger.info(f"Loaded signature {sig.label()} from {path}")
    return sig


def load_signature(source: str, apply_split: bool = False) -> Signature:
    """
    Resolve and validate a --sig argument

    Args:
        apply_split: Return the split form instead

    Raises:
        KernelError: Unknown name, unreadable file or malformed JSON
        SignatureError: The signature violates its invariants
    """
    sig = ensure_valid(read_signature(source))
    return split(sig) if apply_split else sig


def order_isomorphism(a: Signature, b: Signature,
                      respect_working: bool = False) -> dict[str, str] | None:
    """
    Find a zone bijection preserving the preorder and the unrestricted set

    Args:
        respect_working: Also require the working zones to correspond

    Returns:
        A mapping from zones of a to zones of b, or None if none exists
    """
    def attributed(sig: Signature) -> nx.DiGraph:
        g = closure_graph(sig)
        for zone in g.nodes:
            g.nodes[zone]["unrestricted"] = zone in sig.unrestricted
            g.nodes[zone]["working"] = zone == sig.working
        return g

    def node_match(x: dict, y: dict) -> bool:
        if x["unrestricted"] != y["unrestricted"]:
            return False
        return not respect_working or x["working"] == y["working"]

    matcher = DiGraphMatcher(attributed(a), attributed(b), node_match=node_match)
    return next(iter(matcher.isomorphisms_iter()), None)
