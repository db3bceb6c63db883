"""Strong initial actions iA."""
import logging
from typing import Dict, FrozenSet

from app.exceptions import UnknownIdentifierError
from app.models.terms import (
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
)
from app.services.engine import Engine, get_engine

logger = logging.getLogger(__name__)


def _par_initial(left: FrozenSet[Action], right: FrozenSet[Action]) -> FrozenSet[Action]:
    out = {a for a in left | right if not a.is_clock}
    for a in left:
        if a.is_visible and a.complement() in right:
            out.add(TAU if a.is_channel else a)
    return frozenset(out)


def _initial(p: Process, table: Dict[str, FrozenSet[Action]]) -> FrozenSet[Action]:
    if isinstance(p, Stop):
        return frozenset()
    if isinstance(p, (Prefix, Bang)):
        return frozenset({p.action})
    if isinstance(p, Sum):
        return _initial(p.left, table) | _initial(p.right, table)
    if isinstance(p, Par):
        return _par_initial(_initial(p.left, table), _initial(p.right, table))
    if isinstance(p, Restrict):
        return _initial(p.body, table) - channel_closure(p.names)
    if isinstance(p, Hide):
        inner = _initial(p.body, table)
        hidden = {clock(c) for c in p.clocks}
        out = inner - hidden
        if inner & hidden:
            out = out | {TAU}
        return out
    if isinstance(p, Ident):
        try:
            return table[p.name]
        except KeyError:
            raise UnknownIdentifierError(p.name) from None
    raise TypeError(f"not a process: {p!r}")


def _identifier_initial(eng: Engine) -> Dict[str, FrozenSet[Action]]:
    # least fixed point; every clause is monotone in the identifier table
    if eng.ident_initial is None:
        table: Dict[str, FrozenSet[Action]] = {name: frozenset() for name in eng.defs.names()}
        changed = True
        while changed:
            changed = False
            for name, body in eng.defs.bindings:
                actions = _initial(body, table)
                if actions != table[name]:
                    table[name] = actions
                    changed = True
        eng.ident_initial = table
    return eng.ident_initial


def initial_actions(p: Process, defs: Defs) -> FrozenSet[Action]:
    """
    Compute iA(p), the strong initial actions of a process.

    Args:
        p: Process
        defs: Definition environment

    Returns:
        Set of actions, possibly including tau
    """
    eng = get_engine(defs)
    cached = eng.initial.get(p)
    if cached is None:
        cached = _initial(p, _identifier_initial(eng))
        eng.initial[p] = cached
    return cached
