"""
Seeded random signatures, formulas and sequents

Used by `check --fuzz` and by the property tests. Everything is drawn from
a random.Random passed in by the caller, so a seed reproduces a corpus.
"""

import random
from typing import Literal

from sequents import (
    Active,
    Calculus,
    IActiveP,
    IActiveR,
    Sequent,
    ZonedFormula,
    i_neutral,
    neutral,
)
from signature import Signature, ensure_valid, make_signature
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
)

Fragment = Literal["classical", "intuitionistic", "c2i"]

POSITIVE_ATOMS = ("p", "q", "r")
NEGATIVE_ATOMS = ("n", "m")
ZONE_POOL = ("lin", "a", "b")

MAX_DEPTH = 3
MAX_ENTRIES = 3


def random_signature(rng: random.Random, max_zones: int = 3) -> Signature:
    """A valid signature with at most max_zones zones, always containing lin"""
    count = rng.randint(1, min(max_zones, len(ZONE_POOL)))
    zones = list(ZONE_POOL[:count])
    order = [(x, y) for x in zones for y in zones if x != y and rng.random() < 0.3]
    seed_unrestricted = {z for z in zones if rng.random() < 0.3}

    draft = make_signature(zones, order, "lin", ())
    unrestricted = {y for x, y in draft.closure if x in seed_unrestricted}
    return ensure_valid(make_signature(zones, order, "lin", unrestricted,
                                       name=f"random-{count}"))


class FormulaGenerator:
    """
    Draws well-polarized formulas over the zones of a signature

    The fragment restricts the connectives: intuitionistic drops par and bot;
    c2i additionally keeps ![z] over negative bodies and ?[z] over positive
    bodies only, which is the domain of the classical-to-intuitionistic
    translation.
    """

    def __init__(self, rng: random.Random, sig: Signature, fragment: Fragment = "classical"):
        self.rng = rng
        self.zones = sorted(sig.zones)
        self.fragment = fragment

    def zone(self) -> str:
        return self.rng.choice(self.zones)

    def positive(self, depth: int = MAX_DEPTH) -> Formula:
        rng = self.rng
        if depth <= 1 or rng.random() < 0.3:
            return rng.choice([PosAtom(rng.choice(POSITIVE_ATOMS))] * 4 + [One(), Zero()])
        kind = rng.choice(("tensor", "plus", "bang"))
        if kind == "tensor":
            return Tensor(self.positive(depth - 1), self.positive(depth - 1))
        if kind == "plus":
            return Plus(self.positive(depth - 1), self.positive(depth - 1))
        body = self.negative(depth - 1) if self.fragment == "c2i" else self.pat(depth - 1)
        return Bang(self.zone(), body)

    def negative(self, depth: int = MAX_DEPTH) -> Formula:
        rng = self.rng
        units: list[Formula] = [NegAtom(rng.choice(NEGATIVE_ATOMS))] * 4 + [Top()]
        if self.fragment != "intuitionistic":
            units.append(Bot())
        if depth <= 1 or rng.random() < 0.3:
            return rng.choice(units)

        kinds = ["with", "lolli", "quest"]
        if self.fragment != "intuitionistic":
            kinds.append("par")
        kind = rng.choice(kinds)
        if kind == "with":
            return With(self.negative(depth - 1), self.negative(depth - 1))
        if kind == "par":
            return Par(self.negative(depth - 1), self.negative(depth - 1))
        if kind == "lolli":
            return Lolli(self.positive(depth - 1), self.negative(depth - 1))
        body = self.positive(depth - 1) if self.fragment == "c2i" else self.nat(depth - 1)
        return Quest(self.zone(), body)

    def pat(self, depth: int = MAX_DEPTH) -> Formula:
        """Negative formula or positive atom"""
        if self.rng.random() < 0.25:
            return PosAtom(self.rng.choice(POSITIVE_ATOMS))
        return self.negative(depth)

    def nat(self, depth: int = MAX_DEPTH) -> Formula:
        """Positive formula or negative atom"""
        if self.rng.random() < 0.25:
            return NegAtom(self.rng.choice(NEGATIVE_ATOMS))
        return self.positive(depth)

    def left_entry(self, depth: int = MAX_DEPTH) -> ZonedFormula:
        return ZonedFormula(self.zone(), self.pat(depth))

    def right_entry(self, depth: int = MAX_DEPTH) -> ZonedFormula:
        return ZonedFormula(self.zone(), self.nat(depth))


def random_classical_sequent(rng: random.Random, sig: Signature,
                             fragment: Fragment = "classical",
                             max_entries: int = MAX_ENTRIES,
                             max_depth: int = MAX_DEPTH) -> Active:
    gen = FormulaGenerator(rng, sig, fragment)
    left = [gen.left_entry(max_depth) for _ in range(rng.randint(0, max_entries))]
    right = [gen.right_entry(max_depth) for _ in range(rng.randint(0, max_entries))]
    return neutral(left, right)


def random_intuitionistic_sequent(rng: random.Random, sig: Signature,
                                  max_entries: int = MAX_ENTRIES,
                                  max_depth: int = MAX_DEPTH) -> IActiveP:
    gen = FormulaGenerator(rng, sig, "intuitionistic")
    left = [gen.left_entry(max_depth) for _ in range(rng.randint(0, max_entries))]
    return i_neutral(left, gen.right_entry(max_depth))


def random_active_sequent(rng: random.Random, sig: Signature,
                          calculus: Calculus = Calculus.CLASSICAL) -> Sequent:
    """An active (not yet neutral) sequent, for exercising the active phase"""
    fragment: Fragment = "classical" if calculus is Calculus.CLASSICAL else "intuitionistic"
    gen = FormulaGenerator(rng, sig, fragment)
    left = [gen.left_entry() for _ in range(rng.randint(0, 2))]
    left_active = [gen.nat() for _ in range(rng.randint(1, 3))]
    if calculus is Calculus.CLASSICAL:
        right_active = [gen.pat() for _ in range(rng.randint(0, 3))]
        right = [gen.right_entry() for _ in range(rng.randint(0, 2))]
        return Active(tuple(left), tuple(left_active), tuple(right_active), tuple(right))
    if rng.random() < 0.5:
        return IActiveR(tuple(left), tuple(left_active), gen.pat())
    return IActiveP(tuple(left), tuple(left_active), gen.right_entry())


def random_corpus(direction: str, sig: Signature, count: int, seed: int) -> list[Sequent]:
    """
    Neutral source sequents for an encoding direction

    c2i draws classical sequents from the translatable fragment; i2c and
    naive-i2c draw intuitionistic sequents.
    """
    rng = random.Random(seed)
    if direction == "c2i":
        return [random_classical_sequent(rng, sig, "c2i") for _ in range(count)]
    return [random_intuitionistic_sequent(rng, sig) for _ in range(count)]
