"""
Enabling predicates for the four scheduling strategies.

A transition alpha:H[R] is admissible always; weakly, strongly or
constructively enabled when H misses tau and the complement of iA(R),
iA^tau(R) or iA^*(R) respectively.
"""
import logging
from typing import FrozenSet, NamedTuple, Optional, Tuple

from app.models.lts import Strategy, Ternary, Transition
from app.models.terms import TAU, Action, Defs, Process, complement_set
from app.services.reachability import initial_actions, potential, weak_initial
from app.services.sos import transitions

logger = logging.getLogger(__name__)

__all__ = ["Strategy", "EnabledSet", "blocking_witness", "is_enabled", "enabled_transitions"]


class EnabledSet(NamedTuple):
    enabled: Tuple[Transition, ...]
    undecided: Tuple[Transition, ...]


def blocking_witness(
    t: Transition, strategy: Strategy, defs: Defs, budget: Optional[int] = None
) -> Tuple[FrozenSet[Action], bool]:
    """
    Labels of H that the context can answer under a strategy.

    Args:
        t: Transition to test
        strategy: Scheduling strategy
        defs: Definition environment
        budget: Closure budget for strong and constructive enabling

    Returns:
        (witness, truncated): the part of H blocking the step, plus whether
        the closure behind it was cut short
    """
    if strategy == Strategy.ADMISSIBLE:
        return frozenset(), False
    if TAU in t.blocking:
        return frozenset({TAU}), False
    if not t.blocking:
        return frozenset(), False
    if strategy == Strategy.WEAK:
        offered, truncated = initial_actions(t.context, defs), False
    elif strategy == Strategy.STRONG:
        offered, truncated = weak_initial(t.context, defs, budget)
    else:
        offered, truncated = potential(t.context, defs, budget)
    return t.blocking & complement_set(offered), truncated


def is_enabled(
    t: Transition, strategy: Strategy, defs: Defs, budget: Optional[int] = None
) -> Ternary:
    """
    Decide whether a transition is enabled under a strategy.

    A witness found in a truncated closure still disables the step; an empty
    intersection over a truncated closure is UNKNOWN.
    """
    witness, truncated = blocking_witness(t, strategy, defs, budget)
    if witness:
        return Ternary.FALSE
    if truncated:
        return Ternary.UNKNOWN
    return Ternary.TRUE


def enabled_transitions(
    p: Process, strategy: Strategy, defs: Defs, budget: Optional[int] = None
) -> EnabledSet:
    """
    Transitions of p enabled under a strategy.

    Args:
        p: Process
        strategy: Scheduling strategy
        defs: Definition environment
        budget: Closure budget

    Returns:
        EnabledSet with the enabled transitions and, separately, those whose
        enabledness could not be decided within the budget
    """
    enabled, undecided = [], []
    for t in transitions(p, defs):
        verdict = is_enabled(t, strategy, defs, budget)
        if verdict == Ternary.TRUE:
            enabled.append(t)
        elif verdict == Ternary.UNKNOWN:
            undecided.append(t)
    return EnabledSet(tuple(enabled), tuple(undecided))
