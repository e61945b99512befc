"""
Input validators and the kernel's exception hierarchy

These validators guard the boundary between user input (formula text,
sequent text, signature files, CLI options) and the proof kernel. Every
error raised here is a ValueError subclass so callers that only care about
"bad input" can catch one type.
"""

import re


# Identifier alphabet for atoms and zone names
IDENTIFIER = r"[A-Za-z_][A-Za-z0-9_]*"

# Zone names may carry split-form tags (.l / .r), possibly repeated
ZONE_NAME = rf"{IDENTIFIER}(?:\.[lr])*"

# The fixed answer atom of the classical-to-intuitionistic encoding
ANSWER_ATOM = "k"

# Suffix marking the dual positive atom of a negative atom
DUAL_SUFFIX = "^"

# Names that the encodings introduce and users may not write
RESERVED_PATTERNS = [
    rf"^{ANSWER_ATOM}$",            # answer atom
    rf"{re.escape(DUAL_SUFFIX)}$",  # dual atoms
]


class KernelError(ValueError):
    """Base class for every input or well-formedness error raised by the kernel"""


class FormulaSyntaxError(KernelError):
    """Concrete syntax that does not match the formula or sequent grammar"""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None and column is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class PolarityError(KernelError):
    """A constructor applied to operands of the wrong polarity class"""


class ReservedNameError(KernelError):
    """An atom name that only the encodings are allowed to produce"""


class UnknownZoneError(KernelError):
    """A zone annotation that the ambient signature does not declare"""


class SignatureError(KernelError):
    """A signature that violates one or more structural invariants"""

    def __init__(self, message: str, violations: list | None = None):
        self.violations = violations or []
        super().__init__(message)


class SequentError(KernelError):
    """A sequent whose contexts break the shape restrictions of its calculus"""


class EncodingError(KernelError):
    """A formula or sequent outside the domain of an encoding"""


class ResourceLimitError(RuntimeError):
    """Proof search visited more sequents than its node budget allows"""


def is_reserved(name: str) -> bool:
    """Check if an atom name is reserved for encoding output"""
    for pattern in RESERVED_PATTERNS:
        if re.search(pattern, name):
            return True
    return False


def validate_atom_name(name: str, allow_reserved: bool = False) -> None:
    """
    Validate an atom name

    Args:
        name: Atom name without the negative-atom apostrophe
        allow_reserved: Accept encoding-produced names (k, n^)

    Raises:
        KernelError: If the name is empty or outside the identifier alphabet
        ReservedNameError: If the name is reserved and allow_reserved is False
    """
    if not name:
        raise KernelError("Atom name cannot be empty")

    base = name[: -len(DUAL_SUFFIX)] if name.endswith(DUAL_SUFFIX) else name
    if not re.fullmatch(IDENTIFIER, base):
        raise KernelError(f"Invalid atom name: {name!r}")

    if not allow_reserved and is_reserved(name):
        raise ReservedNameError(
            f"Atom name {name!r} is reserved: '{ANSWER_ATOM}' and names ending in "
            f"'{DUAL_SUFFIX}' are produced only by the encodings"
        )


def validate_zone_name(name: str) -> None:
    """
    Validate a zone name

    Raises:
        KernelError: If the name is not an identifier with optional .l/.r tags
    """
    if not name:
        raise KernelError("Zone name cannot be empty")
    if not re.fullmatch(ZONE_NAME, name):
        raise KernelError(f"Invalid zone name: {name!r}")


def validate_depth(depth: int) -> None:
    """
    Validate a proof-search depth bound

    Raises:
        KernelError: If depth is not a positive integer
    """
    if isinstance(depth, bool) or not isinstance(depth, int):
        raise KernelError(f"Depth must be an integer, got {depth!r}")
    if depth < 1:
        raise KernelError(f"Depth must be >= 1, got {depth}")


def validate_budget(budget: int) -> None:
    """
    Validate a node budget

    Raises:
        KernelError: If budget is not a positive integer
    """
    if isinstance(budget, bool) or not isinstance(budget, int) or budget < 1:
        raise KernelError(f"Node budget must be a positive integer, got {budget!r}")
