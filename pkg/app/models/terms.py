"""
Labels, actions and the process syntax tree.

All nodes are immutable and hashable. Structural hashes are computed once per
node, so terms can be used as dictionary keys throughout exploration.
"""
from dataclasses import dataclass, field
from enum import IntEnum
from functools import cached_property
from sys import intern
from typing import Dict, FrozenSet, Iterable, Iterator, Mapping, Optional, Tuple

from app.exceptions import ArgumentError, UnknownIdentifierError


class ActionKind(IntEnum):
    """Kinds of actions, in canonical order."""

    CLOCK = 0
    INPUT = 1
    OUTPUT = 2
    TAU = 3


@dataclass(frozen=True, order=True)
class Action:
    """
    A label (channel name, co-name or clock) or the silent action tau.

    Ordering is by kind (clock < input < output < tau) then name, which gives
    the canonical iteration order of label sets.
    """

    kind: ActionKind
    name: str

    def __post_init__(self):
        object.__setattr__(self, "name", intern(self.name))

    @property
    def is_tau(self) -> bool:
        return self.kind == ActionKind.TAU

    @property
    def is_visible(self) -> bool:
        return self.kind != ActionKind.TAU

    @property
    def is_clock(self) -> bool:
        return self.kind == ActionKind.CLOCK

    @property
    def is_channel(self) -> bool:
        return self.kind in (ActionKind.INPUT, ActionKind.OUTPUT)

    def complement(self) -> "Action":
        """Return the co-label; clocks are their own complement."""
        if self.kind == ActionKind.INPUT:
            return Action(ActionKind.OUTPUT, self.name)
        if self.kind == ActionKind.OUTPUT:
            return Action(ActionKind.INPUT, self.name)
        if self.kind == ActionKind.CLOCK:
            return self
        raise ArgumentError("tau has no complement")

    def __str__(self) -> str:
        if self.kind == ActionKind.OUTPUT:
            return f"~{self.name}"
        return self.name

    def __repr__(self) -> str:
        return f"Action({self})"


# A label is any visible action.
Label = Action

TAU = Action(ActionKind.TAU, "tau")


def chan(name: str) -> Action:
    return Action(ActionKind.INPUT, name)


def cochan(name: str) -> Action:
    return Action(ActionKind.OUTPUT, name)


def clock(name: str) -> Action:
    return Action(ActionKind.CLOCK, name)


def complement(label: Action) -> Action:
    """Complement of a visible label."""
    return label.complement()


def complement_set(labels: Iterable[Action]) -> FrozenSet[Action]:
    """Pointwise complement; tau members are dropped since they have no co-action."""
    return frozenset(a.complement() for a in labels if a.is_visible)


def sorted_actions(actions: Iterable[Action]) -> Tuple[Action, ...]:
    """Deterministic iteration order for action sets."""
    return tuple(sorted(set(actions)))


def channel_closure(names: Iterable[str]) -> FrozenSet[Action]:
    """L united with its co-names, for a set of base channel names."""
    out = set()
    for n in names:
        out.add(chan(n))
        out.add(cochan(n))
    return frozenset(out)


class Process:
    """Base class of all process nodes."""

    __slots__ = ()

    def children(self) -> Tuple["Process", ...]:
        return ()


@dataclass(frozen=True, eq=True)
class Stop(Process):
    """The inactive process 0."""

    def __hash__(self) -> int:
        return 0x5709


STOP = Stop()


@dataclass(frozen=True, eq=True)
class Prefix(Process):
    """Action prefix alpha:H.P."""

    action: Action
    blocking: FrozenSet[Action]
    cont: Process

    @cached_property
    def _hash(self) -> int:
        return hash(("prefix", self.action, self.blocking, self.cont))

    def __hash__(self) -> int:
        return self._hash

    def children(self) -> Tuple[Process, ...]:
        return (self.cont,)


@dataclass(frozen=True, eq=True)
class Bang(Process):
    """Sequential bang !l:H.P."""

    action: Action
    blocking: FrozenSet[Action]
    cont: Process

    @cached_property
    def _hash(self) -> int:
        return hash(("bang", self.action, self.blocking, self.cont))

    def __hash__(self) -> int:
        return self._hash

    def children(self) -> Tuple[Process, ...]:
        return (self.cont,)


@dataclass(frozen=True, eq=True)
class Sum(Process):
    left: Process
    right: Process

    @cached_property
    def _hash(self) -> int:
        return hash(("sum", self.left, self.right))

    def __hash__(self) -> int:
        return self._hash

    def children(self) -> Tuple[Process, ...]:
        return (self.left, self.right)


@dataclass(frozen=True, eq=True)
class Par(Process):
    left: Process
    right: Process

    @cached_property
    def _hash(self) -> int:
        return hash(("par", self.left, self.right))

    def __hash__(self) -> int:
        return self._hash

    def children(self) -> Tuple[Process, ...]:
        return (self.left, self.right)


@dataclass(frozen=True, eq=True)
class Restrict(Process):
    """Restriction P \\ L over base channel names."""

    body: Process
    names: FrozenSet[str]

    @cached_property
    def _hash(self) -> int:
        return hash(("restrict", self.body, self.names))

    def __hash__(self) -> int:
        return self._hash

    def children(self) -> Tuple[Process, ...]:
        return (self.body,)


@dataclass(frozen=True, eq=True)
class Hide(Process):
    """Clock hiding P / L."""

    body: Process
    clocks: FrozenSet[str]

    @cached_property
    def _hash(self) -> int:
        return hash(("hide", self.body, self.clocks))

    def __hash__(self) -> int:
        return self._hash

    def children(self) -> Tuple[Process, ...]:
        return (self.body,)


@dataclass(frozen=True, eq=True)
class Ident(Process):
    name: str

    def __post_init__(self):
        object.__setattr__(self, "name", intern(self.name))

    def __hash__(self) -> int:
        return hash(("ident", self.name))


def prefix(action: Action, blocking: Iterable[Action] = (), cont: Process = STOP) -> Prefix:
    """Build a prefix; blocking sets at source level never contain tau."""
    blocking = frozenset(blocking)
    if action.is_tau or any(b.is_tau for b in blocking):
        raise ArgumentError("source-level prefixes take visible labels only")
    return Prefix(action, blocking, cont)


def bang(action: Action, blocking: Iterable[Action] = (), cont: Process = STOP) -> Bang:
    if not action.is_channel:
        raise ArgumentError("sequential bang requires a channel label")
    blocking = frozenset(blocking)
    if any(b.is_tau for b in blocking):
        raise ArgumentError("source-level prefixes take visible labels only")
    return Bang(action, blocking, cont)


def par_of(*procs: Process) -> Process:
    """Right-nested parallel composition; empty yields Stop."""
    if not procs:
        return STOP
    result = procs[-1]
    for p in reversed(procs[:-1]):
        result = Par(p, result)
    return result


def sum_of(*procs: Process) -> Process:
    """Right-nested choice; empty yields Stop."""
    if not procs:
        return STOP
    result = procs[-1]
    for p in reversed(procs[:-1]):
        result = Sum(p, result)
    return result


def halting_name(clocks: Iterable[str]) -> str:
    """Name of the halting identifier over a clock set."""
    return "ONE_" + "_".join(sorted(clocks))


def is_halting_name(name: str) -> bool:
    return name.startswith("ONE_")


def halting_clocks(name: str) -> FrozenSet[str]:
    return frozenset(name[len("ONE_"):].split("_"))


def iter_subterms(p: Process) -> Iterator[Process]:
    """Pre-order traversal without crossing identifiers."""
    stack = [p]
    while stack:
        q = stack.pop()
        yield q
        stack.extend(reversed(q.children()))


@dataclass(frozen=True)
class Defs:
    """
    Definition environment: identifier bindings plus declared clocks.

    Bindings are kept as a sorted tuple so the environment is hashable and
    can key per-environment caches.
    """

    bindings: Tuple[Tuple[str, Process], ...] = ()
    clock_decls: FrozenSet[str] = field(default_factory=frozenset)

    @cached_property
    def _table(self) -> Dict[str, Process]:
        return dict(self.bindings)

    @cached_property
    def _hash(self) -> int:
        return hash((self.bindings, self.clock_decls))

    def __hash__(self) -> int:
        return self._hash

    @classmethod
    def of(cls, bindings: Mapping[str, Process], clocks: Iterable[str] = ()) -> "Defs":
        return cls(tuple(sorted(bindings.items(), key=lambda kv: kv[0])), frozenset(clocks))

    def lookup(self, name: str) -> Process:
        """Body bound to an identifier."""
        try:
            return self._table[name]
        except KeyError:
            raise UnknownIdentifierError(name) from None

    def get(self, name: str) -> Optional[Process]:
        return self._table.get(name)

    def __contains__(self, name: str) -> bool:
        return name in self._table

    def names(self) -> Tuple[str, ...]:
        return tuple(n for n, _ in self.bindings)

    def with_binding(self, name: str, body: Process) -> "Defs":
        table = dict(self._table)
        table[name] = body
        return Defs.of(table, self.clock_decls)

    def with_clocks(self, clocks: Iterable[str]) -> "Defs":
        return Defs(self.bindings, self.clock_decls | frozenset(clocks))
