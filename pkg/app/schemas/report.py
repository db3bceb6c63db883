"""
Pydantic schemas for analysis results, LTS exports and API payloads.
"""

from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, Field, field_validator


class VerdictStatus(str, Enum):
    HOLDS = "HOLDS"
    FAILS = "FAILS"
    UNKNOWN = "UNKNOWN"


class CertStatus(str, Enum):
    CERTIFIED = "CERTIFIED"
    NOT_COVERED = "NOT_COVERED"


STRATEGIES = ("admissible", "weak", "strong", "constructive")


class ClassReport(BaseModel):
    """Fragment membership flags of a process."""
    closed: bool = Field(..., description="No free visible labels")
    unclocked: bool = Field(..., description="No clock prefix occurs")
    sequential: bool = Field(..., description="No parallel composition or bang occurs")
    free: bool = Field(..., description="All blocking sets are empty")
    irreflexive: bool = Field(..., description="No prefix blocks itself")
    discrete: bool = Field(..., description="Every prefix has the form l:{l}")


class StateOut(BaseModel):
    id: int = Field(..., description="State number in discovery order")
    term: str = Field(..., description="Canonical term text")


class EdgeOut(BaseModel):
    src: int
    dst: int
    action: str = Field(..., description="Action label")
    blocking: List[str] = Field(default_factory=list, description="Blocking set in canonical order")
    context: str = Field("0", description="Concurrent context text")
    sync: Optional[str] = Field(None, description="Label whose handshake produced the step")


class LtsExport(BaseModel):
    """JSON form of an explored state graph."""
    states: List[StateOut]
    edges: List[EdgeOut]
    root: int = 0
    bound_hit: bool = False
    strategy: str = "admissible"


class Counterexample(BaseModel):
    """Replayable witness of a failed check."""
    state: str = Field(..., description="Term text of the offending state")
    state_id: Optional[int] = Field(None, description="State number in the explored graph")
    transitions: List[EdgeOut] = Field(default_factory=list, description="Offending transitions")
    reason: str = Field(..., description="What is missing or violated")


class Verdict(BaseModel):
    """Outcome of one analysis."""
    analysis: str = Field(..., description="Analysis name, e.g. coherence")
    status: VerdictStatus
    counterexample: Optional[Counterexample] = None
    reason: Optional[str] = Field(None, description="Explanation for UNKNOWN results or notes")
    explored: int = Field(0, description="Number of states examined")

    @classmethod
    def holds(cls, analysis: str, explored: int = 0, reason: Optional[str] = None) -> "Verdict":
        return cls(analysis=analysis, status=VerdictStatus.HOLDS, explored=explored, reason=reason)

    @classmethod
    def fails(cls, analysis: str, counterexample: Counterexample, explored: int = 0) -> "Verdict":
        return cls(
            analysis=analysis,
            status=VerdictStatus.FAILS,
            counterexample=counterexample,
            explored=explored,
        )

    @classmethod
    def unknown(cls, analysis: str, reason: str, explored: int = 0) -> "Verdict":
        return cls(analysis=analysis, status=VerdictStatus.UNKNOWN, reason=reason, explored=explored)

    @property
    def ok(self) -> bool:
        return self.status == VerdictStatus.HOLDS


class CertVerdict(BaseModel):
    """Result of syntax-directed coherence certification."""
    status: CertStatus
    reason: Optional[str] = Field(None, description="First side condition that failed")

    @property
    def certified(self) -> bool:
        return self.status == CertStatus.CERTIFIED


class MacroStep(BaseModel):
    """One synchronous round: reductions to a normal form, then a clock."""
    index: int
    normal_form: str = Field(..., description="Term text of the normal form reached")
    syncs: List[str] = Field(default_factory=list, description="Handshake labels of the reductions, in order")
    clock: Optional[str] = Field(None, description="Clock fired after the normal form, if any")
    order_dependent: bool = Field(False, description="Another reduction order reaches a different normal form")
    clock_successors: List[str] = Field(
        default_factory=list, description="Non-congruent clock successors when the tick is not deterministic"
    )


class MacroStepTrace(BaseModel):
    strategy: str
    tiebreak: str = "least"
    steps: List[MacroStep] = Field(default_factory=list)
    partial: bool = Field(False, description="Budget ran out inside a macro-step")
    deadlock: bool = Field(False, description="A normal form offered no clock")
    clock_nondeterministic: bool = Field(False, description="A normal form offered clocks with different successors")

    @property
    def order_dependent(self) -> bool:
        return any(s.order_dependent for s in self.steps)


class CheckReport(BaseModel):
    """All verdicts of one check run."""
    source: str = Field(..., description="File or fixture name")
    strategy: str
    bound: int
    policy: Optional[str] = None
    verdicts: List[Verdict] = Field(default_factory=list)
    certification: Optional[CertVerdict] = None

    @property
    def exit_code(self) -> int:
        statuses = {v.status for v in self.verdicts}
        if VerdictStatus.FAILS in statuses:
            return 1
        if VerdictStatus.UNKNOWN in statuses:
            return 2
        return 0

    def to_kv(self) -> str:
        """Stable key-value rendering, one verdict per line."""
        lines = [f"strategy: {self.strategy}", f"bound: {self.bound}"]
        if self.policy:
            lines.append(f"policy: {self.policy}")
        for v in self.verdicts:
            lines.append(f"{v.analysis}: {v.status.value}")
        if self.certification is not None:
            lines.append(f"certify: {self.certification.status.value}")
        return "\n".join(lines) + "\n"


class Fixture(BaseModel):
    """A corpus example with its expected verdicts."""
    name: str
    source: str = Field(..., description=".spt source text")
    policy: Optional[str] = Field(None, description="Name of the policy block used by checks")
    expected: Dict[str, str] = Field(default_factory=dict, description="Report key to expected value")
    provenance: str = Field("", description="Where the example and its claims come from")


class LtsRequest(BaseModel):
    source: str = Field(..., min_length=1, description=".spt source text")
    strategy: str = Field("admissible", description="Scheduling strategy")
    bound: Optional[int] = Field(None, ge=1, description="State budget")

    @field_validator("strategy")
    @classmethod
    def validate_strategy(cls, v):
        if v not in STRATEGIES:
            raise ValueError(f"strategy must be one of {', '.join(STRATEGIES)}")
        return v


class CheckRequest(LtsRequest):
    analyses: List[str] = Field(default_factory=lambda: ["all"], description="Analyses to run")
    policy: Optional[str] = Field(None, description="Policy block name")


class TraceRequest(LtsRequest):
    strategy: str = Field("constructive", description="Scheduling strategy")
    steps: int = Field(1, ge=1, le=1000, description="Number of macro-steps")
    tiebreak: str = Field("least", description="least, greatest or seed:N")

    @field_validator("tiebreak")
    @classmethod
    def validate_tiebreak(cls, v):
        if v in ("least", "greatest"):
            return v
        if v.startswith("seed:") and v[5:].lstrip("-").isdigit():
            return v
        raise ValueError("tiebreak must be least, greatest or seed:N")
