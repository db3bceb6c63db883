"""
Initial-action closures and bounded state-space exploration.

Closures walk the canonical state graph with a worklist and stop after a
state budget; a truncated closure is an under-approximation and is flagged
so that callers can degrade their verdicts to UNKNOWN.
"""
import logging
from collections import deque
from typing import Callable, FrozenSet, NamedTuple, Optional

from app.models.lts import Edge, Lts, Strategy, Ternary, Transition
from app.models.terms import Action, Defs, Process
from app.services.congruence import canon
from app.services.engine import get_engine
from app.services.initial import initial_actions
from app.services.sos import transitions

logger = logging.getLogger(__name__)

__all__ = ["Closure", "initial_actions", "weak_initial", "potential", "explore"]


class Closure(NamedTuple):
    """Result of a bounded closure computation."""

    actions: FrozenSet[Action]
    truncated: bool


def _closure(
    p: Process,
    defs: Defs,
    budget: int,
    follow: Callable[[Transition], bool],
    keep: Callable[[Action], bool],
) -> Closure:
    start = canon(p, defs)
    seen = {start}
    queue = deque([start])
    acc = set()
    truncated = False
    while queue:
        q = queue.popleft()
        acc.update(a for a in initial_actions(q, defs) if keep(a))
        for t in transitions(q, defs):
            if not follow(t) or t.target in seen:
                continue
            if len(seen) >= budget:
                truncated = True
                continue
            seen.add(t.target)
            queue.append(t.target)
    return Closure(frozenset(acc), truncated)


def weak_initial(p: Process, defs: Defs, budget: Optional[int] = None) -> Closure:
    """
    Compute iA^tau(p): iA united over every state reachable by tau steps.

    Args:
        p: Process
        defs: Definition environment
        budget: Maximum number of states to visit

    Returns:
        Closure with the action set and a truncation flag
    """
    eng = get_engine(defs)
    budget = budget or eng.closure_budget
    key = canon(p, defs)
    cached = eng.weak.get((key, budget))
    if cached is None:
        result = _closure(key, defs, budget, lambda t: t.action.is_tau, lambda a: True)
        if result.truncated:
            logger.warning(f"Weak-initial closure truncated at {budget} states")
        cached = (result.actions, result.truncated)
        eng.weak[(key, budget)] = cached
    return Closure(*cached)


def potential(p: Process, defs: Defs, budget: Optional[int] = None) -> Closure:
    """
    Compute iA^*(p): visible initial labels over the closure of p under
    channel and tau steps. Clock steps are never followed.

    Args:
        p: Process
        defs: Definition environment
        budget: Maximum number of states to visit

    Returns:
        Closure with the label set and a truncation flag
    """
    eng = get_engine(defs)
    budget = budget or eng.closure_budget
    key = canon(p, defs)
    cached = eng.potential.get((key, budget))
    if cached is None:
        result = _closure(key, defs, budget, lambda t: not t.action.is_clock, lambda a: a.is_visible)
        if result.truncated:
            logger.warning(f"Potential-action closure truncated at {budget} states")
        cached = (result.actions, result.truncated)
        eng.potential[(key, budget)] = cached
    return Closure(*cached)


def explore(
    p: Process,
    defs: Defs,
    strategy: Strategy = Strategy.ADMISSIBLE,
    budget: int = 100_000,
) -> Lts:
    """
    Breadth-first exploration of the strategy-enabled state graph.

    States are numbered in discovery order; transitions are visited in their
    canonical order, so numbering is reproducible.

    Args:
        p: Root process
        defs: Definition environment
        strategy: Scheduling strategy used to filter edges
        budget: Maximum number of states

    Returns:
        Lts with bound_hit set when the budget was exhausted
    """
    from app.services.scheduling import is_enabled

    lts = Lts(strategy=strategy)
    root, _ = lts.add_state(canon(p, defs))
    lts.root = root
    queue = deque([root])
    queued = {root}
    while queue:
        sid = queue.popleft()
        for t in transitions(lts.states[sid], defs):
            enabled = is_enabled(t, strategy, defs)
            if enabled == Ternary.FALSE:
                continue
            dst = lts.index.get(t.target)
            if dst is None:
                if len(lts.states) >= budget:
                    lts.bound_hit = True
                    lts.clipped.add(sid)
                    continue
                dst, _ = lts.add_state(t.target)
            if enabled == Ternary.TRUE and dst not in queued:
                queued.add(dst)
                queue.append(dst)
            edge = Edge(sid, dst, t, enabled)
            if enabled == Ternary.TRUE:
                lts.edges.append(edge)
            else:
                lts.undecided.append(edge)
    if lts.bound_hit:
        logger.warning(f"Exploration stopped at {budget} states")
    logger.info(
        f"Explored {len(lts.states)} states, {len(lts.edges)} edges under {strategy.value}"
    )
    return lts
