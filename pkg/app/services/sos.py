"""
Annotated transition derivation.

``transitions`` derives every admissible step alpha:H[R] of a process by the
inference rules for prefixes, choice, parallel composition (interleaving,
rendez-vous and clock synchronisation), restriction, hiding and the
sequential bang. Congruence is handled by working on canonical terms and
canonicalising every context and target.
"""
import logging
from typing import FrozenSet, Iterable, List, Tuple

from app.exceptions import DivergenceError
from app.models.lts import Transition
from app.models.terms import (
    STOP,
    TAU,
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
    complement_set,
)
from app.services.congruence import _canon, mk_hide, mk_par, push_restrict
from app.services.engine import Engine, get_engine
from app.services.initial import initial_actions
from app.services.printer import to_text

logger = logging.getLogger(__name__)

EMPTY: FrozenSet[Action] = frozenset()


def sync_result(label: Action) -> Action:
    """Action produced by a handshake on ``label``: tau for channels, the clock itself for clocks."""
    return label if label.is_clock else TAU


def hide_action(action: Action, clocks: Iterable[str]) -> Action:
    """Project an action through hiding: hidden clocks become tau."""
    if action.is_clock and action.name in frozenset(clocks):
        return TAU
    return action


def race(
    left: Process,
    right: Process,
    label: Action,
    h1: FrozenSet[Action],
    h2: FrozenSet[Action],
    defs: Defs,
) -> FrozenSet[Action]:
    """
    Race-condition blocking for a synchronisation of ``left`` on ``label``
    with ``right`` on its complement.

    Args:
        left: Process performing ``label``
        right: Process performing the complement
        label: Synchronising label
        h1: Blocking set of the left premise
        h2: Blocking set of the right premise
        defs: Definition environment

    Returns:
        {tau} if either side's blocking set meets the other side's
        complemented initial actions beyond the handshake itself, else {}
    """
    co_right = complement_set(initial_actions(right, defs))
    if (h1 & co_right) - {label}:
        return frozenset({TAU})
    co_left = complement_set(initial_actions(left, defs))
    if (h2 & co_left) - {label.complement()}:
        return frozenset({TAU})
    return EMPTY


def scoped_blocking(eng: Engine, t: Transition, bound: FrozenSet[Action]) -> FrozenSet[Action]:
    """
    Blocking set of a step leaving the scope of ``bound``.

    Bound labels cannot be named outside the scope, so they are removed. A
    bound blocker that the step's context can still answer inside the scope
    is a pending handshake; it is kept as a tau blocker so the step waits for
    that reduction.

    Args:
        eng: Engine of the environment
        t: Transition of the restriction body
        bound: Restricted labels and their complements

    Returns:
        Blocking set visible outside the scope
    """
    inner = t.blocking & bound
    outer = t.blocking - bound
    if not inner or TAU in outer:
        return outer
    if t.context in eng.scoping:
        # cyclic scope: the context is being explored already
        logger.debug(f"Scope context {to_text(t.context)} re-entered; bound blockers dropped")
        return outer
    from app.services.reachability import potential

    eng.scoping.add(t.context)
    try:
        reach = potential(t.context, eng.defs).actions
    finally:
        eng.scoping.discard(t.context)
    if inner & complement_set(reach):
        return outer | {TAU}
    return outer


def _sort_key(t: Transition):
    return (t.action, tuple(sorted(t.blocking)), to_text(t.context), to_text(t.target))


def _finish(raw: Iterable[Transition]) -> Tuple[Transition, ...]:
    unique = {}
    for t in raw:
        unique.setdefault(t.key, t)
    return tuple(sorted(unique.values(), key=_sort_key))


def _derive(eng: Engine, p: Process) -> Tuple[Transition, ...]:
    cached = eng.trans.get(p)
    if cached is not None:
        return cached

    out: List[Transition] = []
    if isinstance(p, Stop):
        pass
    elif isinstance(p, Prefix):
        out.append(Transition(p, p.action, p.blocking, STOP, p.cont))
    elif isinstance(p, Bang):
        spawned = mk_par(eng, [p.cont, p])
        out.append(Transition(p, p.action, p.blocking, p.cont, spawned))
    elif isinstance(p, Sum):
        for t in _derive(eng, p.left) + _derive(eng, p.right):
            out.append(Transition(p, t.action, t.blocking, t.context, t.target, t.sync))
    elif isinstance(p, Par):
        out.extend(_derive_par(eng, p))
    elif isinstance(p, Restrict):
        bound = channel_closure(p.names)
        for t in _derive(eng, p.body):
            if t.action in bound:
                continue
            out.append(
                Transition(
                    p,
                    t.action,
                    scoped_blocking(eng, t, bound),
                    push_restrict(eng, t.context, p.names),
                    push_restrict(eng, t.target, p.names),
                    t.sync,
                )
            )
    elif isinstance(p, Hide):
        hidden = frozenset(clock(c) for c in p.clocks)
        for t in _derive(eng, p.body):
            out.append(
                Transition(
                    p,
                    hide_action(t.action, p.clocks),
                    t.blocking - hidden,
                    mk_hide(eng, t.context, p.clocks),
                    mk_hide(eng, t.target, p.clocks),
                    t.sync if t.sync is not None else (t.action if t.action in hidden else None),
                )
            )
    elif isinstance(p, Ident):
        out.extend(_derive_ident(eng, p))
    else:
        raise TypeError(f"not a process: {p!r}")

    result = _finish(out)
    eng.trans[p] = result
    return result


def _derive_ident(eng: Engine, p: Ident) -> List[Transition]:
    if p.name in eng.unfolding or len(eng.unfolding) >= eng.unfold_limit:
        chain = " -> ".join(eng.unfolding + [p.name])
        raise DivergenceError(p.name, chain)
    eng.unfolding.append(p.name)
    try:
        body = _canon(eng, eng.defs.lookup(p.name))
        return [
            Transition(p, t.action, t.blocking, t.context, t.target, t.sync)
            for t in _derive(eng, body)
        ]
    finally:
        eng.unfolding.pop()


def _derive_par(eng: Engine, p: Par) -> List[Transition]:
    left, right = p.left, p.right
    lt, rt = _derive(eng, left), _derive(eng, right)
    out: List[Transition] = []
    for t in lt:
        if not t.action.is_clock:
            out.append(
                Transition(p, t.action, t.blocking, mk_par(eng, [t.context, right]), mk_par(eng, [t.target, right]), t.sync)
            )
    for t in rt:
        if not t.action.is_clock:
            out.append(
                Transition(p, t.action, t.blocking, mk_par(eng, [left, t.context]), mk_par(eng, [left, t.target]), t.sync)
            )
    for t1 in lt:
        if t1.action.is_tau:
            continue
        partner = t1.action.complement()
        for t2 in rt:
            if t2.action != partner:
                continue
            blocking = t1.blocking | t2.blocking | race(left, right, t1.action, t1.blocking, t2.blocking, eng.defs)
            handshake = t1.action if t1.action.kind <= partner.kind else partner
            out.append(
                Transition(
                    p,
                    sync_result(t1.action),
                    blocking,
                    mk_par(eng, [t1.context, t2.context]),
                    mk_par(eng, [t1.target, t2.target]),
                    handshake,
                )
            )
    return out


def transitions(p: Process, defs: Defs) -> Tuple[Transition, ...]:
    """
    Derive all admissible transitions of p.

    Args:
        p: Process (any form; it is canonicalised first)
        defs: Definition environment

    Returns:
        Transitions in canonical order, deduplicated on (action, blocking,
        context, target), with canonical contexts and targets
    """
    eng = get_engine(defs)
    source = _canon(eng, p)
    with eng.derivation():
        return _derive(eng, source)
