"""
Syntactic classifiers over processes: visible labels, fragment membership,
guardedness and well-formedness, plus installation of halting processes.
"""
import logging
from typing import Dict, FrozenSet, Iterable, List, Set, Tuple

from app.exceptions import ArgumentError, UnknownIdentifierError, WellFormednessError
from app.models.terms import (
    Action,
    Bang,
    Defs,
    Hide,
    Ident,
    Par,
    Prefix,
    Process,
    Restrict,
    Stop,
    Sum,
    channel_closure,
    clock,
    halting_name,
    iter_subterms,
    prefix,
    sum_of,
)
from app.schemas.report import ClassReport
from app.services.engine import get_engine

logger = logging.getLogger(__name__)


def _labels(p: Process, table: Dict[str, FrozenSet[Action]]) -> FrozenSet[Action]:
    if isinstance(p, Stop):
        return frozenset()
    if isinstance(p, (Prefix, Bang)):
        return frozenset({p.action}) | p.blocking | _labels(p.cont, table)
    if isinstance(p, (Sum, Par)):
        return _labels(p.left, table) | _labels(p.right, table)
    if isinstance(p, Restrict):
        return _labels(p.body, table) - channel_closure(p.names)
    if isinstance(p, Hide):
        return _labels(p.body, table) - {clock(c) for c in p.clocks}
    if isinstance(p, Ident):
        try:
            return table[p.name]
        except KeyError:
            raise UnknownIdentifierError(p.name) from None
    raise TypeError(f"not a process: {p!r}")


def identifier_labels(defs: Defs) -> Dict[str, FrozenSet[Action]]:
    """
    Visible labels of every identifier, by Kleene iteration from the empty set.

    The label universe of the environment is finite, so the iteration
    reaches its fixed point.
    """
    eng = get_engine(defs)
    if eng.ident_labels is None:
        table: Dict[str, FrozenSet[Action]] = {name: frozenset() for name in defs.names()}
        rounds = 0
        changed = True
        while changed:
            changed = False
            rounds += 1
            for name, body in defs.bindings:
                labels = _labels(body, table)
                if labels != table[name]:
                    table[name] = labels
                    changed = True
        logger.debug(f"Visible-label fixpoint reached after {rounds} rounds")
        eng.ident_labels = table
    return eng.ident_labels


def visible_labels(p: Process, defs: Defs) -> FrozenSet[Action]:
    """
    Compute vA(p), the free visible labels of a process.

    Args:
        p: Process
        defs: Definition environment

    Returns:
        Set of visible labels
    """
    eng = get_engine(defs)
    cached = eng.labels.get(p)
    if cached is None:
        cached = _labels(p, identifier_labels(defs))
        eng.labels[p] = cached
    return cached


def reachable_identifiers(p: Process, defs: Defs) -> List[str]:
    """Identifiers reachable from p through bodies, in discovery order."""
    seen: List[str] = []
    stack = [p]
    visited: Set[str] = set()
    while stack:
        q = stack.pop()
        for sub in iter_subterms(q):
            if isinstance(sub, Ident) and sub.name not in visited:
                visited.add(sub.name)
                seen.append(sub.name)
                stack.append(defs.lookup(sub.name))
    return seen


def _all_subterms(p: Process, defs: Defs) -> Iterable[Process]:
    yield from iter_subterms(p)
    for name in reachable_identifiers(p, defs):
        yield from iter_subterms(defs.lookup(name))


def classify(p: Process, defs: Defs) -> ClassReport:
    """
    Fragment membership of p and every definition body reachable from it.

    Args:
        p: Process to classify
        defs: Definition environment

    Returns:
        ClassReport with one flag per fragment
    """
    unclocked = sequential = free = irreflexive = discrete = True
    for sub in _all_subterms(p, defs):
        if isinstance(sub, (Par, Bang)):
            sequential = False
        if isinstance(sub, (Prefix, Bang)):
            if sub.action.is_clock:
                unclocked = False
            if sub.blocking:
                free = False
            if sub.action in sub.blocking:
                irreflexive = False
            if sub.blocking != frozenset({sub.action}):
                discrete = False
    return ClassReport(
        closed=not visible_labels(p, defs),
        unclocked=unclocked,
        sequential=sequential,
        free=free,
        irreflexive=irreflexive,
        discrete=discrete,
    )


def halting(clocks: Iterable[str], defs: Defs) -> Tuple[Ident, Defs]:
    """
    Install the halting process 1_C over a set of clocks.

    Args:
        clocks: Clock names C (nonempty)
        defs: Definition environment to extend

    Returns:
        The identifier of 1_C and the extended environment
    """
    clocks = frozenset(clocks)
    if not clocks:
        raise ArgumentError("halting process needs at least one clock; use 0 instead")
    name = halting_name(clocks)
    ident = Ident(name)
    if name in defs:
        return ident, defs
    body = sum_of(*(prefix(clock(c), (), ident) for c in sorted(clocks)))
    return ident, defs.with_binding(name, body).with_clocks(clocks)


def _head_identifiers(p: Process) -> Set[str]:
    """Identifiers occurring outside any prefix or bang."""
    if isinstance(p, Ident):
        return {p.name}
    if isinstance(p, (Prefix, Bang, Stop)):
        return set()
    out: Set[str] = set()
    for child in p.children():
        out |= _head_identifiers(child)
    return out


def unguarded_identifiers(defs: Defs) -> List[str]:
    """Identifiers that can reach themselves without passing a prefix."""
    graph = {name: _head_identifiers(body) for name, body in defs.bindings}
    bad = []
    for start in graph:
        stack = list(graph[start])
        seen: Set[str] = set()
        while stack:
            n = stack.pop()
            if n == start:
                bad.append(start)
                break
            if n in seen or n not in graph:
                continue
            seen.add(n)
            stack.extend(graph[n])
    return sorted(bad)


def validate(p: Process, defs: Defs) -> List[str]:
    """
    Check well-formedness of p under defs.

    Raises WellFormednessError or UnknownIdentifierError on hard errors and
    returns a list of warnings (currently unguarded identifiers).
    """
    for sub in _all_subterms(p, defs):
        if isinstance(sub, (Prefix, Bang)):
            labels = {sub.action} | sub.blocking
            for label in labels:
                if label.is_tau:
                    raise WellFormednessError("tau may not occur in a source prefix")
                if label.is_clock and label.name not in defs.clock_decls:
                    raise WellFormednessError(f"undeclared clock: {label.name}")
            if isinstance(sub, Bang) and not sub.action.is_channel:
                raise WellFormednessError(f"sequential bang on clock {sub.action}")
        elif isinstance(sub, Restrict):
            clash = sub.names & defs.clock_decls
            if clash:
                raise WellFormednessError(f"clock in restriction set: {sorted(clash)}")
        elif isinstance(sub, Hide):
            stray = sub.clocks - defs.clock_decls
            if stray:
                raise WellFormednessError(f"hiding set names non-clocks: {sorted(stray)}")
    warnings = [f"unguarded recursion through {n}" for n in unguarded_identifiers(defs)]
    for w in warnings:
        logger.warning(w)
    return warnings
