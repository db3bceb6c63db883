"""Concrete syntax printer; the inverse of ``app.services.parser``."""
from functools import lru_cache
from typing import Iterable

from app.models.terms import (
    Action,
    Bang,
    Hide,
    Ident,
    Par,
    Prefix,
    Process,
    Restrict,
    Stop,
    Sum,
    halting_clocks,
    is_halting_name,
    sorted_actions,
)


def action_set_text(actions: Iterable[Action]) -> str:
    """Render an action set as ``{a,~b}`` in canonical order."""
    return "{" + ",".join(str(a) for a in sorted_actions(actions)) + "}"


def _names_text(names: Iterable[str]) -> str:
    return "{" + ",".join(sorted(names)) + "}"


def _prefix_text(action: Action, blocking) -> str:
    if blocking:
        return f"{action}:{action_set_text(blocking)}"
    return str(action)


def _atom(p: Process) -> str:
    """Print p so that a postfix operator or a prefix dot can follow it."""
    if isinstance(p, (Stop, Ident, Restrict, Hide)):
        return to_text(p)
    if isinstance(p, Prefix) and isinstance(p.cont, Stop):
        return to_text(p)
    return f"({to_text(p)})"


def _unary(p: Process) -> str:
    """Print p in a position that binds tighter than '+'."""
    if isinstance(p, (Sum, Par)):
        return f"({to_text(p)})"
    return to_text(p)


@lru_cache(maxsize=200_000)
def to_text(p: Process) -> str:
    """
    Render a process in .spt syntax.

    Args:
        p: Process to print

    Returns:
        Source text that parses back to the same tree
    """
    if isinstance(p, Stop):
        return "0"
    if isinstance(p, Ident):
        if is_halting_name(p.name):
            return "1" + _names_text(halting_clocks(p.name))
        return p.name
    if isinstance(p, Prefix):
        head = _prefix_text(p.action, p.blocking)
        if isinstance(p.cont, Stop):
            return head
        return f"{head}.{_unary(p.cont)}"
    if isinstance(p, Bang):
        head = "!" + _prefix_text(p.action, p.blocking)
        if isinstance(p.cont, Stop):
            return head
        return f"{head}.{_unary(p.cont)}"
    if isinstance(p, Sum):
        left = to_text(p.left)
        if isinstance(p.left, (Sum, Par)):
            left = f"({left})"
        right = to_text(p.right)
        if isinstance(p.right, Par):
            right = f"({right})"
        return f"{left} + {right}"
    if isinstance(p, Par):
        left = to_text(p.left)
        if isinstance(p.left, Par):
            left = f"({left})"
        return f"{left} | {to_text(p.right)}"
    if isinstance(p, Restrict):
        return f"{_atom(p.body)}\\{_names_text(p.names)}"
    if isinstance(p, Hide):
        return f"{_atom(p.body)}/{_names_text(p.clocks)}"
    raise TypeError(f"not a process: {p!r}")
