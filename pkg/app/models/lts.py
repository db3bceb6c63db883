"""Transitions, c-actions and the explored state graph."""
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from app.models.terms import Action, Process


class Ternary(str, Enum):
    """Three-valued outcome for checks that depend on bounded closures."""

    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    @classmethod
    def of(cls, value: bool) -> "Ternary":
        return cls.TRUE if value else cls.FALSE


class Strategy(str, Enum):
    """Scheduling strategies, from most permissive to most strict."""

    ADMISSIBLE = "admissible"
    WEAK = "weak"
    STRONG = "strong"
    CONSTRUCTIVE = "constructive"


@dataclass(frozen=True)
class CanonicalForm:
    """A process in normal form together with its printed text."""

    term: Process
    text: str

    def __hash__(self) -> int:
        return hash(self.term)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CanonicalForm) and self.term == other.term

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class CAction:
    """The label alpha:H[R] of a transition."""

    action: Action
    blocking: FrozenSet[Action]
    context: Process


@dataclass(frozen=True)
class Transition:
    """
    An admissible transition source --alpha:H[R]--> target.

    ``sync`` names the channel or clock whose handshake produced the step,
    when the step is a synchronisation; it is informational only and is
    ignored by equality.
    """

    source: Process
    action: Action
    blocking: FrozenSet[Action]
    context: Process
    target: Process
    sync: Optional[Action] = field(default=None, compare=False)

    @property
    def caction(self) -> CAction:
        return CAction(self.action, self.blocking, self.context)

    @property
    def key(self) -> Tuple[Action, FrozenSet[Action], Process, Process]:
        return (self.action, self.blocking, self.context, self.target)


@dataclass
class Edge:
    src: int
    dst: int
    transition: Transition
    enabled: "Ternary" = Ternary.TRUE


@dataclass
class Lts:
    """
    Bounded reachable state graph.

    States are canonical terms numbered by discovery order; edges follow
    the strategy filter. Edges whose enabledness could not be decided within
    the closure budget are kept in ``undecided`` and not followed.
    """

    states: List[Process] = field(default_factory=list)
    index: Dict[Process, int] = field(default_factory=dict)
    edges: List[Edge] = field(default_factory=list)
    undecided: List[Edge] = field(default_factory=list)
    root: int = 0
    bound_hit: bool = False
    strategy: Strategy = Strategy.ADMISSIBLE
    # states that lost an edge to the budget
    clipped: Set[int] = field(default_factory=set)

    def add_state(self, term: Process) -> Tuple[int, bool]:
        """Get-or-insert; returns (id, created)."""
        existing = self.index.get(term)
        if existing is not None:
            return existing, False
        sid = len(self.states)
        self.states.append(term)
        self.index[term] = sid
        return sid, True

    def out_edges(self, sid: int) -> List[Edge]:
        return [e for e in self.edges if e.src == sid]

    def successors(self) -> Dict[int, List[Edge]]:
        table: Dict[int, List[Edge]] = {i: [] for i in range(len(self.states))}
        for e in self.edges:
            table[e.src].append(e)
        return table

    @property
    def complete(self) -> bool:
        return not self.bound_hit and not self.undecided
