"""
Structural congruence by canonical normal forms.

Terms are rewritten bottom-up: choice and parallel composition are
flattened into sorted multisets without inaction, choices are deduplicated,
nested scopes are merged, and restrictions are pushed inward as far as the
scope laws allow. Identifiers stay symbolic; they are unfolded lazily by
derivation and by the bounded comparison loop of ``equiv``.
"""
import hashlib
import logging
from typing import Iterable, List, Set, Tuple

from app.models.lts import CanonicalForm
from app.models.terms import (
    STOP,
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
    is_halting_name,
)
from app.services.classifier import visible_labels
from app.services.engine import Engine, get_engine
from app.services.printer import to_text

logger = logging.getLogger(__name__)


def sort_key(p: Process) -> Tuple[bytes, str]:
    """Total order on terms: structural digest, then printed text."""
    text = to_text(p)
    return hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest(), text


def _flatten(kind: type, items: Iterable[Process]) -> List[Process]:
    out: List[Process] = []
    stack = list(items)
    stack.reverse()
    while stack:
        p = stack.pop()
        if isinstance(p, kind):
            stack.append(p.right)
            stack.append(p.left)
        elif not isinstance(p, Stop):
            out.append(p)
    return out


def _rebuild(kind: type, items: List[Process]) -> Process:
    if not items:
        return STOP
    items = sorted(items, key=sort_key)
    result = items[-1]
    for p in reversed(items[:-1]):
        result = kind(p, result)
    return result


def mk_sum(eng: Engine, items: Iterable[Process]) -> Process:
    """Choice over canonical operands."""
    return _rebuild(Sum, list(dict.fromkeys(_flatten(Sum, items))))


def mk_par(eng: Engine, items: Iterable[Process]) -> Process:
    """Parallel composition of canonical operands."""
    children = _flatten(Par, items)
    if eng.halting_absorption:
        seen: Set[Process] = set()
        kept = []
        for c in children:
            if isinstance(c, Ident) and is_halting_name(c.name):
                if c in seen:
                    continue
                seen.add(c)
            kept.append(c)
        children = kept
    return _rebuild(Par, children)


def mk_hide(eng: Engine, body: Process, clocks: Iterable[str]) -> Process:
    """Hiding over a canonical body."""
    clocks = frozenset(clocks)
    if isinstance(body, Stop) or not clocks:
        return body
    if isinstance(body, Hide):
        return Hide(body.body, body.clocks | clocks)
    return Hide(body, clocks)


def _channel_names(eng: Engine, p: Process) -> Set[str]:
    return {a.name for a in visible_labels(p, eng.defs) if a.is_channel}


def push_restrict(eng: Engine, body: Process, names: Iterable[str]) -> Process:
    """
    Canonical form of ``body \\ names`` for a canonical body.

    Names the body does not use are dropped; a restriction over nothing
    disappears.
    """
    names = frozenset(names) & _channel_names(eng, body)
    if not names:
        return body
    if isinstance(body, Restrict):
        return push_restrict(eng, body.body, names | body.names)
    if isinstance(body, Prefix):
        if body.action.is_channel and body.action.name in names:
            return STOP
        return Prefix(
            body.action,
            body.blocking - channel_closure(names),
            push_restrict(eng, body.cont, names),
        )
    if isinstance(body, Sum):
        return mk_sum(eng, [push_restrict(eng, c, names) for c in _flatten(Sum, [body])])
    if isinstance(body, Par):
        return _push_par(eng, _flatten(Par, [body]), names)
    return Restrict(body, names)


def _push_par(eng: Engine, children: List[Process], names: frozenset) -> Process:
    bound = channel_closure(names)
    outside: List[Process] = []
    inside: List[Process] = []
    for c in children:
        (inside if visible_labels(c, eng.defs) & bound else outside).append(c)

    # group the children that talk to each other over a bound name
    used = [visible_labels(c, eng.defs) & bound for c in inside]
    parent = list(range(len(inside)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(inside)):
        co = {a.complement() for a in used[i]}
        for j in range(i + 1, len(inside)):
            if co & used[j]:
                parent[find(i)] = find(j)

    groups: dict = {}
    for i in range(len(inside)):
        groups.setdefault(find(i), []).append(i)

    parts = list(outside)
    for members in groups.values():
        if len(members) == 1:
            parts.append(push_restrict(eng, inside[members[0]], names))
            continue
        comp = [inside[i] for i in members]
        comp_names = frozenset(a.name for i in members for a in used[i]) & names
        parts.append(Restrict(mk_par(eng, comp), comp_names))
    return mk_par(eng, parts)


def canon(p: Process, defs: Defs) -> Process:
    """
    Canonical term of p.

    Args:
        p: Process
        defs: Definition environment

    Returns:
        The normal-form representative of p's congruence class
    """
    return _canon(get_engine(defs), p)


def _canon(eng: Engine, p: Process) -> Process:
    cached = eng.canon.get(p)
    if cached is not None:
        return cached
    if isinstance(p, (Stop, Ident)):
        result = p
    elif isinstance(p, Prefix):
        result = Prefix(p.action, p.blocking, _canon(eng, p.cont))
    elif isinstance(p, Bang):
        result = Bang(p.action, p.blocking, _canon(eng, p.cont))
    elif isinstance(p, Sum):
        result = mk_sum(eng, [_canon(eng, c) for c in _flatten(Sum, [p])])
    elif isinstance(p, Par):
        result = mk_par(eng, [_canon(eng, c) for c in _flatten(Par, [p])])
    elif isinstance(p, Restrict):
        result = push_restrict(eng, _canon(eng, p.body), p.names)
    elif isinstance(p, Hide):
        result = mk_hide(eng, _canon(eng, p.body), p.clocks)
    else:
        raise TypeError(f"not a process: {p!r}")
    eng.canon[p] = result
    eng.canon.setdefault(result, result)
    return result


def canonicalize(p: Process, defs: Defs) -> CanonicalForm:
    """Canonical form of p together with its printed text."""
    term = canon(p, defs)
    return CanonicalForm(term, to_text(term))


def _unfold_heads(p: Process, defs: Defs) -> Process:
    if isinstance(p, Ident):
        return defs.lookup(p.name)
    if isinstance(p, (Stop, Prefix, Bang)):
        return p
    if isinstance(p, Sum):
        return Sum(_unfold_heads(p.left, defs), _unfold_heads(p.right, defs))
    if isinstance(p, Par):
        return Par(_unfold_heads(p.left, defs), _unfold_heads(p.right, defs))
    if isinstance(p, Restrict):
        return Restrict(_unfold_heads(p.body, defs), p.names)
    if isinstance(p, Hide):
        return Hide(_unfold_heads(p.body, defs), p.clocks)
    raise TypeError(f"not a process: {p!r}")


def unfold(p: Process, defs: Defs) -> Process:
    """
    Replace every head identifier of p by its body, once.

    Head identifiers are those not guarded by a prefix or bang. A term
    without head identifiers is returned unchanged.
    """
    return _unfold_heads(p, defs)


def equiv(p: Process, q: Process, defs: Defs) -> bool:
    """
    Decide p == q up to structural congruence.

    Canonical forms are compared first; on mismatch both sides are
    head-unfolded for a bounded number of rounds and the sets of forms seen
    are compared.

    Args:
        p: First process
        q: Second process
        defs: Definition environment

    Returns:
        True if a common canonical form was found
    """
    eng = get_engine(defs)
    cp, cq = _canon(eng, p), _canon(eng, q)
    if cp == cq:
        return True
    key = frozenset((cp, cq))
    cached = eng.equivs.get(key)
    if cached is None:
        cached = eng.equivs[key] = _unfolds_meet(eng, cp, cq, defs)
    return cached


def _unfolds_meet(eng: Engine, cp: Process, cq: Process, defs: Defs) -> bool:
    seen_p, seen_q = {cp}, {cq}
    frontier_p, frontier_q = cp, cq
    for _ in range(eng.unfold_bound):
        frontier_p = _canon(eng, _unfold_heads(frontier_p, defs))
        frontier_q = _canon(eng, _unfold_heads(frontier_q, defs))
        seen_p.add(frontier_p)
        seen_q.add(frontier_q)
        if seen_p & seen_q:
            return True
    logger.debug(f"No common form within {eng.unfold_bound} unfold rounds: {to_text(cp)} vs {to_text(cq)}")
    return False
