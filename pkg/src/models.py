"""
Pydantic models for everything the kernel reads or writes as JSON

Signature files are validated with SignatureFile. Every --json document the
CLI prints, and every MCP tool result, is one of the result models below
serialized with model_dump_json.
"""

from typing import List

from pydantic import BaseModel, Field, field_validator


class SignatureFile(BaseModel):
    """On-disk signature: zones, generating order pairs, working zone, unrestricted set"""
    zones: List[str] = Field(..., description="Declared zone names")
    order: List[List[str]] = Field(default_factory=list,
                                   description="Generating pairs [x, y] meaning x <= y")
    working: str = Field(..., description="The working (linear) zone")
    unrestricted: List[str] = Field(default_factory=list,
                                    description="Zones admitting weakening and contraction")

    @field_validator("order")
    @classmethod
    def pairs_only(cls, order: List[List[str]]) -> List[List[str]]:
        for pair in order:
            if len(pair) != 2:
                raise ValueError(f"Order entries must be [x, y] pairs, got {pair}")
        return order


class SignatureView(BaseModel):
    """A signature as shown by `sig --show`"""
    name: str
    zones: List[str]
    order: List[List[str]]
    closure: List[List[str]]
    working: str
    unrestricted: List[str]


class ViolationModel(BaseModel):
    code: str
    message: str


class SignatureCheck(BaseModel):
    """Result of `sig --validate`"""
    name: str
    valid: bool
    violations: List[ViolationModel] = Field(default_factory=list)


class IsomorphismResult(BaseModel):
    """Result of `sig --iso`"""
    first: str
    second: str
    isomorphic: bool
    respect_working: bool
    mapping: dict[str, str] | None = None


class ParseResult(BaseModel):
    """A parsed formula or sequent, printed back"""
    kind: str = Field(..., description="formula or sequent")
    text: str
    unicode: str
    polarity: str | None = None
    calculus: str | None = None


class TranslationResult(BaseModel):
    direction: str
    mode: str
    source: str
    target: str
    target_signature: str


class TraceStepModel(BaseModel):
    rule: str
    detail: str = ""


class SyntheticRuleModel(BaseModel):
    """A synthetic rule with sequents in their printed form"""
    conclusion: str
    premises: List[str]
    trace: List[TraceStepModel]
    multiplicity: int = 1


class SyntheticsResult(BaseModel):
    calculus: str
    signature: str
    sequent: str
    rules: List[SyntheticRuleModel]


class ProofTreeModel(BaseModel):
    rule: SyntheticRuleModel
    children: List["ProofTreeModel"] = Field(default_factory=list)


ProofTreeModel.model_rebuild()


class ProofResultModel(BaseModel):
    """Outcome of a bounded proof search"""
    calculus: str
    signature: str
    sequent: str
    depth: int
    status: str = Field(..., description="proved, exhausted or open")
    count: int = Field(..., description="Number of proofs within the depth bound")
    nodes: int = Field(..., description="Sequents visited")
    tree: ProofTreeModel | None = None


class PairingModel(BaseModel):
    source: SyntheticRuleModel
    target: SyntheticRuleModel
    premise_map: List[int] = Field(..., description="Source premise i maps to target premise "
                                                     "premise_map[i]")


class AdequacyReportModel(BaseModel):
    """Focal adequacy check of one sequent"""
    direction: str
    source_signature: str
    target_signature: str
    conclusion: str
    target_conclusion: str
    verdict: str = Field(..., description="bijective or counterexample")
    failure: str | None = Field(default=None, description="source-rule-without-match or "
                                                           "target-rule-without-preimage")
    offending: SyntheticRuleModel | None = None
    source_rules: int
    target_rules: int
    pairing: List[PairingModel] = Field(default_factory=list)
    unmatched_source: List[SyntheticRuleModel] = Field(default_factory=list)
    unmatched_target: List[SyntheticRuleModel] = Field(default_factory=list)
    identified: int = Field(default=0, description="Source rules whose encoded premises "
                                                   "coincide with an earlier source rule's")


class GlobalAdequacyModel(BaseModel):
    """Provability comparison of a sequent and its encoding"""
    direction: str
    sequent: str
    target_sequent: str
    depth: int
    agreement: str = Field(..., description="agree, disagree or inconclusive")
    source: ProofResultModel
    target: ProofResultModel


class CorpusSummary(BaseModel):
    """Result of a fuzzed corpus run"""
    direction: str
    seed: int
    count: int
    bijective: int
    skipped: int
    failures: List[AdequacyReportModel] = Field(default_factory=list)

