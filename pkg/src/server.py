#!/usr/bin/env python3
"""
Subexponential proof-search kernel

Command-line verbs:
- parse: Parse and print a formula or sequent
- translate: Apply the c2i or i2c encoding to a formula or sequent
- prove: Bounded proof search in either calculus
- synthetics: List the synthetic rules of a neutral sequent
- check: Focal or global adequacy of an encoding at a sequent, or a fuzzed corpus
- sig: Show, validate or compare signatures
- serve: Offer the same operations as MCP tools over stdio
"""

import argparse
import asyncio
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List

from mcp.server import Server
from mcp.server.stdio import stdio_server
from mcp.types import TextContent, Tool
from pydantic import BaseModel

from adequacy import (
    Agreement,
    calculus_for,
    check_corpus,
    check_focal_adequacy,
    check_global_adequacy,
    corpus_to_model,
    global_to_model,
    proof_to_model,
    prove,
    report_to_model,
)
from encoding import Direction, c2i_formula, direction_for, i2c_formula, i2c_zoned
from focusing import DEFAULT_NODE_BUDGET, NodeBudget, rule_to_model, synthetic_expansions
from generators import random_corpus
from models import (
    IsomorphismResult,
    ParseResult,
    SignatureCheck,
    SignatureView,
    SyntheticsResult,
    TranslationResult,
    ViolationModel,
)
from sequents import Calculus, format_sequent, format_zoned, parse_sequent, parse_zoned
from signature import (
    Signature,
    load_signature,
    order_isomorphism,
    read_signature,
    validate,
)
from syntax import format_formula, parse_formula, polarity_of
from validators import KernelError, ResourceLimitError, validate_budget, validate_depth

# Configure logging
logging.basicConfig(level=logging.WARNING)
logger = logging.getLogger("subexp")

C2I_MODES = ("eq", "ne")
I2C_MODES = ("lp", "lf", "rf", "la", "ra", "rp")
ZONED_MODES = ("lp", "rp")

DEFAULT_DEPTH = 1
DEFAULT_FUZZ_SEED = 0


@dataclass
class Outcome:
    """What a command produced: an exit status, a JSON document and its text rendering"""
    exit_code: int
    document: BaseModel
    text: str


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def do_parse(text: str, sig: Signature, calculus: str | None = None,
             unicode: bool = False) -> Outcome:
    """Parse a formula, or a sequent when a calculus is given"""
    if calculus:
        seq = parse_sequent(text, sig, calculus)
        doc = ParseResult(kind="sequent", text=format_sequent(seq),
                          unicode=format_sequent(seq, unicode=True), calculus=calculus)
    else:
        f = parse_formula(text, sig)
        doc = ParseResult(kind="formula", text=format_formula(f),
                          unicode=format_formula(f, unicode=True), polarity=polarity_of(f).value)
    shown = doc.unicode if unicode else doc.text
    suffix = f"  ({doc.polarity})" if doc.polarity else ""
    return Outcome(0, doc, shown + suffix)


def do_translate(text: str, sig: Signature, direction: str, mode: str,
                 unicode: bool = False) -> Outcome:
    """
    Translate a formula (mode eq/ne for c2i, lp/lf/rf/la/ra/rp for i2c) or a
    neutral sequent (mode "sequent")

    lp and rp take a zoned formula `z:F`.
    """
    enc = direction_for(direction, sig)
    if mode == "sequent":
        seq = parse_sequent(text, sig, enc.source_calculus)
        source, target = format_sequent(seq, unicode), format_sequent(enc.encode(seq), unicode)
    elif enc.tag is Direction.C2I:
        if mode not in C2I_MODES:
            raise KernelError(f"c2i mode must be one of {', '.join(C2I_MODES)} or sequent")
        f = parse_formula(text, sig)
        source, target = format_formula(f, unicode), format_formula(c2i_formula(f, mode), unicode)
    elif enc.tag is Direction.I2C:
        if mode not in I2C_MODES:
            raise KernelError(f"i2c mode must be one of {', '.join(I2C_MODES)} or sequent")
        if mode in ZONED_MODES:
            entry = parse_zoned(text, sig)
            source = format_zoned(entry, unicode)
            target = format_zoned(i2c_zoned(entry, mode, sig), unicode)  # type: ignore[arg-type]
        else:
            f = parse_formula(text, sig)
            source = format_formula(f, unicode)
            target = format_formula(i2c_formula(f, mode, sig), unicode)  # type: ignore[arg-type]
    else:
        raise KernelError("naive-i2c only translates whole sequents (mode sequent)")

    doc = TranslationResult(direction=enc.tag.value, mode=mode, source=source, target=target,
                            target_signature=enc.target_sig.label())
    return Outcome(0, doc, target)


def do_prove(text: str, sig: Signature, calculus: str, depth: int,
             budget: int = DEFAULT_NODE_BUDGET, unicode: bool = False) -> Outcome:
    validate_depth(depth)
    seq = parse_sequent(text, sig, calculus)
    result = prove(seq, sig, depth, NodeBudget(budget))
    doc = proof_to_model(result, unicode)

    lines = [f"status: {doc.status}", f"count: {doc.count}", f"nodes: {doc.nodes}"]
    if doc.tree:
        lines.append("proof:")
        lines.extend(_tree_lines(doc.tree, 1))
    return Outcome(0 if result.proved else 1, doc, "\n".join(lines))


def _tree_lines(tree, indent: int) -> List[str]:
    pad = "  " * indent
    rule = tree.rule
    lines = [f"{pad}{rule.conclusion}   by {' '.join(s.rule for s in rule.trace)}"]
    for child in tree.children:
        lines.extend(_tree_lines(child, indent + 1))
    return lines


def do_synthetics(text: str, sig: Signature, calculus: str,
                  budget: int = DEFAULT_NODE_BUDGET, unicode: bool = False) -> Outcome:
    seq = parse_sequent(text, sig, calculus)
    rules = synthetic_expansions(calculus_for(Calculus(calculus), sig), seq, NodeBudget(budget))
    doc = SyntheticsResult(calculus=calculus, signature=sig.label(),
                           sequent=format_sequent(seq, unicode),
                           rules=[rule_to_model(r, unicode) for r in rules])
    lines = [f"{len(rules)} synthetic rule(s) for {doc.sequent}"]
    for i, rule in enumerate(doc.rules, 1):
        lines.append(f"[{i}] {' / '.join(str(s.rule) for s in rule.trace)}"
                     f"  (x{rule.multiplicity})")
        lines.extend(f"    {p}" for p in rule.premises or ["(no premises)"])
    return Outcome(0, doc, "\n".join(lines))


def do_check(text: str, sig: Signature, direction: str, depth: int = DEFAULT_DEPTH,
             global_check: bool = False, budget: int = DEFAULT_NODE_BUDGET,
             unicode: bool = False) -> Outcome:
    enc = direction_for(direction, sig)
    seq = parse_sequent(text, sig, enc.source_calculus)

    if global_check:
        result = check_global_adequacy(enc, seq, depth, NodeBudget(budget))
        doc = global_to_model(result, unicode)
        text_out = (f"{doc.agreement}: source {doc.source.status}, target {doc.target.status} "
                    f"(depth {depth})")
        return Outcome(0 if result.agreement is Agreement.AGREE else 1, doc, text_out)

    report = check_focal_adequacy(enc, seq, NodeBudget(budget))
    doc = report_to_model(report, unicode)
    lines = [f"{doc.verdict}: {doc.source_rules} source rule(s), {doc.target_rules} target rule(s)",
             f"target: {doc.target_conclusion}"]
    if doc.identified:
        lines.append(f"identified: {doc.identified} source rule(s) share encoded premises")
    if doc.offending:
        lines.append(f"{doc.failure}:")
        lines.append(f"  by {' '.join(s.rule for s in doc.offending.trace)}")
        lines.extend(f"    {p}" for p in doc.offending.premises or ["(no premises)"])
    return Outcome(0 if report.bijective else 1, doc, "\n".join(lines))


async def do_fuzz(sig: Signature, direction: str, count: int, seed: int,
                  budget: int = DEFAULT_NODE_BUDGET, unicode: bool = False) -> Outcome:
    if count < 1:
        raise KernelError(f"Fuzz count must be >= 1, got {count}")
    validate_budget(budget)
    enc = direction_for(direction, sig)
    corpus = random_corpus(enc.tag.value, sig, count, seed)
    result = await check_corpus(enc, corpus, budget)
    doc = corpus_to_model(result, seed, unicode)
    lines = [f"{doc.bijective}/{doc.count} bijective, {len(doc.failures)} counterexample(s), "
             f"{doc.skipped} skipped (seed {seed})"]
    lines.extend(f"  {r.failure}: {r.conclusion}" for r in doc.failures)
    return Outcome(0 if not doc.failures else 1, doc, "\n".join(lines))


def do_sig_show(source: str, apply_split: bool = False) -> Outcome:
    sig = load_signature(source, apply_split)
    doc = SignatureView(
        name=sig.label(),
        zones=sorted(sig.zones),
        order=[list(p) for p in sorted(sig.order)],
        closure=[list(p) for p in sorted(sig.closure) if p[0] != p[1]],
        working=sig.working,
        unrestricted=sorted(sig.unrestricted),
    )
    lines = [f"signature {doc.name}",
             f"  zones:        {', '.join(doc.zones)}",
             f"  working:      {doc.working}",
             f"  unrestricted: {', '.join(doc.unrestricted) or '(none)'}",
             f"  order:        {', '.join(f'{x} <= {y}' for x, y in doc.closure) or '(discrete)'}"]
    return Outcome(0, doc, "\n".join(lines))


def do_sig_validate(source: str) -> Outcome:
    sig = read_signature(source)
    violations = validate(sig)
    doc = SignatureCheck(name=sig.label(), valid=not violations,
                         violations=[ViolationModel(code=v.code, message=v.message)
                                     for v in violations])
    if not violations:
        return Outcome(0, doc, f"{doc.name}: valid")
    lines = [f"{doc.name}: {len(violations)} violation(s)"]
    lines.extend(f"  [{v.code}] {v.message}" for v in violations)
    return Outcome(1, doc, "\n".join(lines))


def do_sig_iso(first: str, second: str, respect_working: bool = False,
               split_first: bool = False) -> Outcome:
    """Order isomorphism between two signatures; split_first compares split(first)"""
    a, b = load_signature(first, split_first), load_signature(second)
    mapping = order_isomorphism(a, b, respect_working)
    doc = IsomorphismResult(first=a.label(), second=b.label(), isomorphic=mapping is not None,
                            respect_working=respect_working, mapping=mapping)
    if mapping is None:
        return Outcome(1, doc, f"{a.label()} and {b.label()} are not order-isomorphic")
    pairs = ", ".join(f"{x} -> {y}" for x, y in sorted(mapping.items()))
    return Outcome(0, doc, f"{a.label()} ~ {b.label()}: {pairs}")


# ---------------------------------------------------------------------------
# MCP server
# ---------------------------------------------------------------------------

def _schema(properties: Dict[str, Any], required: List[str]) -> Dict[str, Any]:
    return {"type": "object", "properties": properties, "required": required}


_SIG = {"type": "string", "description": "Signature: mall, ll, l or a JSON file path "
                                         "(default: mall)"}
_CALC = {"type": "string", "enum": ["classical", "intuitionistic"],
         "description": "Calculus (default: classical)"}
_TEXT = {"type": "string", "description": "Formula or sequent text, e.g. \"lin:p |- lin:p\""}
_DIRECTION = {"type": "string", "enum": [d.value for d in Direction],
              "description": "Encoding direction"}
_DEPTH = {"type": "integer", "description": "Depth bound in synthetic-rule layers (default: 1)"}


class KernelServer:
    """MCP server exposing the kernel operations as tools"""

    def __init__(self, budget: int = DEFAULT_NODE_BUDGET):
        self.server = Server("subexp-kernel")
        self.budget = budget

        # Register handlers using decorators
        self._register_handlers()

    def _register_handlers(self) -> None:
        """Register MCP protocol handlers"""

        @self.server.list_tools()
        async def handle_list_tools() -> List[Tool]:
            """List available MCP tools"""
            return await self.get_tools_list()

        @self.server.call_tool()
        async def handle_call_tool(name: str, arguments: Any) -> List[TextContent]:
            """Handle tool execution"""
            return await self.execute_tool(name, arguments)

    async def get_tools_list(self) -> List[Tool]:
        """List available MCP tools"""
        return [
            Tool(
                name="parse",
                description="Parse a formula (or a neutral sequent when calculus is given) "
                            "and print it back in ASCII and Unicode.",
                inputSchema=_schema({"text": _TEXT, "sig": _SIG, "calculus": _CALC}, ["text"]),
            ),
            Tool(
                name="translate",
                description="Apply an encoding. Modes: eq/ne for c2i formulas, "
                            "lp/lf/rf/la/ra/rp for i2c formulas, sequent for whole sequents.",
                inputSchema=_schema({
                    "text": _TEXT, "sig": _SIG, "direction": _DIRECTION,
                    "mode": {"type": "string", "description": "Translation mode"},
                }, ["text", "direction", "mode"]),
            ),
            Tool(
                name="prove",
                description="Depth-bounded proof search. Reports proved, exhausted or open, "
                            "with the number of proofs found within the bound.",
                inputSchema=_schema({"text": _TEXT, "sig": _SIG, "calculus": _CALC,
                                     "depth": _DEPTH}, ["text"]),
            ),
            Tool(
                name="synthetics",
                description="List the synthetic rules (decision, focused phase, active phase) "
                            "of a neutral sequent.",
                inputSchema=_schema({"text": _TEXT, "sig": _SIG, "calculus": _CALC}, ["text"]),
            ),
            Tool(
                name="check",
                description="Check an encoding at a sequent: focal adequacy (bijection of "
                            "synthetic rules) or, with global=true, agreement of provability.",
                inputSchema=_schema({
                    "text": _TEXT, "sig": _SIG, "direction": _DIRECTION, "depth": _DEPTH,
                    "global": {"type": "boolean", "description": "Compare provability instead"},
                }, ["text", "direction"]),
            ),
            Tool(
                name="fuzz",
                description="Check focal adequacy on a seeded random corpus of sequents.",
                inputSchema=_schema({
                    "sig": _SIG, "direction": _DIRECTION,
                    "count": {"type": "integer", "description": "Corpus size"},
                    "seed": {"type": "integer", "description": "Random seed (default: 0)"},
                }, ["direction", "count"]),
            ),
            Tool(
                name="signature",
                description="Show a signature (optionally its split form), or validate one.",
                inputSchema=_schema({
                    "sig": _SIG,
                    "split": {"type": "boolean", "description": "Show the split form"},
                    "validate": {"type": "boolean", "description": "Report violations only"},
                }, ["sig"]),
            ),
        ]

    async def execute_tool(self, name: str, arguments: Any) -> List[TextContent]:
        """Handle tool execution"""
        args = arguments or {}
        logger.info(f"Executing tool: {name} {args}")
        try:
            if name == "fuzz":
                outcome = await do_fuzz(
                    load_signature(args.get("sig", "mall")), args["direction"],
                    int(args["count"]), int(args.get("seed", DEFAULT_FUZZ_SEED)), self.budget)
            else:
                outcome = await asyncio.to_thread(self._dispatch, name, args)
            return [TextContent(type="text", text=outcome.document.model_dump_json(indent=2))]
        except (KernelError, ResourceLimitError, KeyError) as e:
            logger.error(f"Error executing tool {name}: {e}")
            return [TextContent(type="text", text=f"Error: {str(e)}")]
        except Exception as e:
            logger.error(f"Error executing tool {name}: {e}", exc_info=True)
            return [TextContent(type="text", text=f"Error: {str(e)}")]

    def _dispatch(self, name: str, args: Dict[str, Any]) -> Outcome:
        sig_source = args.get("sig", "mall")
        calculus = args.get("calculus", Calculus.CLASSICAL.value)
        if name == "parse":
            return do_parse(args["text"], load_signature(sig_source), args.get("calculus"))
        elif name == "translate":
            return do_translate(args["text"], load_signature(sig_source), args["direction"],
                                args["mode"])
        elif name == "prove":
            return do_prove(args["text"], load_signature(sig_source), calculus,
                            int(args.get("depth", DEFAULT_DEPTH)), self.budget)
        elif name == "synthetics":
            return do_synthetics(args["text"], load_signature(sig_source), calculus, self.budget)
        elif name == "check":
            return do_check(args["text"], load_signature(sig_source), args["direction"],
                            int(args.get("depth", DEFAULT_DEPTH)),
                            bool(args.get("global", False)), self.budget)
        elif name == "signature":
            if args.get("validate"):
                return do_sig_validate(sig_source)
            return do_sig_show(sig_source, bool(args.get("split", False)))
        else:
            raise KernelError(f"Unknown tool: {name}")

    async def run(self):
        """Start the MCP server with stdio transport"""
        async with stdio_server() as (read_stream, write_stream):
            logger.info("Subexponential kernel server starting with stdio transport...")
            await self.server.run(
                read_stream,
                write_stream,
                self.server.create_initialization_options()
            )


# ---------------------------------------------------------------------------
# Command line
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    """Build the command-line parser"""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--sig", default="mall",
                        help="Signature: mall, ll, l or a JSON file (default: mall)")
    common.add_argument("--split", action="store_true",
                        help="Use the split form of the signature")
    common.add_argument("--json", action="store_true", help="Print a JSON document")
    common.add_argument("--unicode", action="store_true", help="Print Unicode connectives")
    common.add_argument("--verbose", action="store_true", help="Debug logging on stderr")
    common.add_argument("--budget", type=int, default=DEFAULT_NODE_BUDGET,
                        help=f"Node budget per search (default: {DEFAULT_NODE_BUDGET})")

    with_input = argparse.ArgumentParser(add_help=False)
    with_input.add_argument("text", nargs="?", help="Formula or sequent text")
    with_input.add_argument("--file", help="Read the input text from a file")

    parser = argparse.ArgumentParser(
        prog="subexp",
        description="Subexponential proof-search kernel",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Parse a formula and show its polarity
  %(prog)s parse "![lin] (p -o 'n)"

  # Synthetic rules of a classical sequent
  %(prog)s synthetics --sig ll "u:'n |- u:'n"

  # Prove an intuitionistic sequent within two layers
  %(prog)s prove --calc intuitionistic --depth 2 "lin:p |- lin:p"

  # Check the classical-to-intuitionistic encoding at a sequent
  %(prog)s check --dir c2i --sig mall "lin:p |- lin:p"

  # Fuzz the intuitionistic-to-classical encoding
  %(prog)s check --dir i2c --sig ll --fuzz 200 --seed 7

  # Serve the kernel as MCP tools over stdio
  %(prog)s serve
        """
    )
    verbs = parser.add_subparsers(dest="verb", required=True)

    p = verbs.add_parser("parse", parents=[common, with_input], help="Parse and print")
    p.add_argument("--calc", choices=[c.value for c in Calculus],
                   help="Parse a sequent of this calculus instead of a formula")

    p = verbs.add_parser("translate", parents=[common, with_input], help="Apply an encoding")
    p.add_argument("--dir", required=True, choices=[d.value for d in Direction])
    p.add_argument("--mode", default="sequent",
                   choices=("sequent",) + C2I_MODES + I2C_MODES,
                   help="Translation mode (default: sequent)")

    p = verbs.add_parser("prove", parents=[common, with_input], help="Bounded proof search")
    p.add_argument("--calc", default="classical", choices=[c.value for c in Calculus])
    p.add_argument("--depth", type=int, default=DEFAULT_DEPTH,
                   help=f"Depth bound (default: {DEFAULT_DEPTH})")

    p = verbs.add_parser("synthetics", parents=[common, with_input],
                         help="List synthetic rules")
    p.add_argument("--calc", default="classical", choices=[c.value for c in Calculus])

    p = verbs.add_parser("check", parents=[common, with_input], help="Check adequacy")
    p.add_argument("--dir", required=True, choices=[d.value for d in Direction])
    p.add_argument("--depth", type=int, default=DEFAULT_DEPTH,
                   help=f"Depth for --global (default: {DEFAULT_DEPTH})")
    p.add_argument("--global", dest="global_check", action="store_true",
                   help="Compare provability instead of synthetic rules")
    p.add_argument("--fuzz", type=int, metavar="COUNT",
                   help="Check a random corpus of COUNT sequents instead of TEXT")
    p.add_argument("--seed", type=int, default=DEFAULT_FUZZ_SEED,
                   help=f"Seed for --fuzz (default: {DEFAULT_FUZZ_SEED})")

    p = verbs.add_parser("sig", parents=[common], help="Show, validate or compare signatures")
    action = p.add_mutually_exclusive_group(required=True)
    action.add_argument("--show", metavar="SIG", help="Show a signature")
    action.add_argument("--validate", metavar="SIG", help="List invariant violations")
    action.add_argument("--iso", nargs=2, metavar=("A", "B"),
                        help="Search for an order isomorphism between two signatures")
    p.add_argument("--respect-working", action="store_true",
                   help="With --iso, require the working zones to correspond")

    verbs.add_parser("serve", parents=[common], help="Run the MCP server over stdio")
    return parser


def _input_text(args: argparse.Namespace) -> str:
    if args.file:
        try:
            return Path(args.file).read_text(encoding="utf-8").strip()
        except OSError as e:
            raise KernelError(f"Cannot read {args.file}: {e}") from e
    if args.text is None:
        raise KernelError("No input: give TEXT or --file")
    return args.text


def execute(args: argparse.Namespace) -> Outcome:
    """Run one parsed command line (every verb but serve)"""
    if args.verb == "sig":
        if args.show:
            return do_sig_show(args.show, args.split)
        if args.validate:
            return do_sig_validate(args.validate)
        return do_sig_iso(args.iso[0], args.iso[1], args.respect_working, args.split)

    if args.split and getattr(args, "dir", None) == Direction.I2C.value:
        raise KernelError("--split cannot be combined with --dir i2c: "
                          "i2c already targets the split signature")
    sig = load_signature(args.sig, args.split)
    if args.verb == "check" and args.fuzz is not None:
        return asyncio.run(do_fuzz(sig, args.dir, args.fuzz, args.seed, args.budget,
                                   args.unicode))

    text = _input_text(args)
    if args.verb == "parse":
        return do_parse(text, sig, args.calc, args.unicode)
    if args.verb == "translate":
        return do_translate(text, sig, args.dir, args.mode, args.unicode)
    if args.verb == "prove":
        return do_prove(text, sig, args.calc, args.depth, args.budget, args.unicode)
    if args.verb == "synthetics":
        return do_synthetics(text, sig, args.calc, args.budget, args.unicode)
    return do_check(text, sig, args.dir, args.depth, args.global_check, args.budget,
                    args.unicode)


def run(argv: List[str] | None = None) -> int:
    """
    Run the command line and return its exit status

    0 on success, 1 when the answer is negative (counterexample, disagreement,
    no proof, invalid signature), 2 on usage or input errors and when the node
    budget runs out.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    logger.setLevel(logging.DEBUG if args.verbose else logging.WARNING)

    if args.verb == "serve":
        logger.setLevel(logging.DEBUG if args.verbose else logging.INFO)
        try:
            asyncio.run(KernelServer(args.budget).run())
        except KeyboardInterrupt:
            logger.info("Shutdown complete")
        return 0

    logger.info(f"Executing command: {args.verb}")
    try:
        validate_budget(args.budget)
        outcome = execute(args)
    except (KernelError, ResourceLimitError) as e:
        logger.debug("Command failed", exc_info=True)
        print(f"Error: {e}", file=sys.stderr)
        return 2

    if args.json:
        print(outcome.document.model_dump_json(indent=2))
    else:
        print(outcome.text)
    return outcome.exit_code


def cli():
    """Synchronous entry point for setuptools console_scripts"""
    sys.exit(run())


if __name__ == "__main__":
    cli()
