"""
Behavioural analyses over explored state graphs.

Coherence, confluence and the clock propositions are checked on bounded
explorations; an exhausted budget turns a would-be HOLDS into UNKNOWN,
never into FAILS.
"""
import logging
from collections import defaultdict, deque
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from app.config import get_settings
from app.models.lts import CAction, Edge, Lts, Strategy, Ternary, Transition
from app.models.terms import TAU, Action, Defs, Process, complement_set
from app.schemas.report import Counterexample, EdgeOut, Verdict
from app.services.congruence import canon, equiv
from app.services.exporters import edge_out
from app.services.initial import initial_actions
from app.services.printer import to_text
from app.services.reachability import explore, potential
from app.services.sos import transitions

logger = logging.getLogger(__name__)


def _budget(budget: Optional[int]) -> int:
    return budget or get_settings().SPT_BOUND


def _transition_out(src: int, t: Transition, dst: int = -1) -> EdgeOut:
    return edge_out(Edge(src, dst, t))


def residual(p: Process, alpha: Action, defs: Defs) -> FrozenSet[Process]:
    """
    Residual successors of p for an action.

    For a visible label the residuals are the label's successors plus p
    itself; for tau they are the successors by tau or by any channel label.

    Args:
        p: Process
        alpha: Action the residual step stands for
        defs: Definition environment

    Returns:
        Canonical residual processes
    """
    if alpha.is_tau:
        return frozenset(t.target for t in transitions(p, defs) if t.action.is_tau or t.action.is_channel)
    out = {t.target for t in transitions(p, defs) if t.action == alpha}
    out.add(canon(p, defs))
    return frozenset(out)


def _self_blocked(h: FrozenSet[Action], env: Process, defs: Defs, budget: Optional[int]) -> Ternary:
    if TAU in h:
        return Ternary.TRUE
    if not h:
        return Ternary.FALSE
    offered, truncated = potential(env, defs, budget)
    if h & complement_set(offered):
        return Ternary.TRUE
    return Ternary.UNKNOWN if truncated else Ternary.FALSE


def interference_free(c1: CAction, c2: CAction, defs: Defs, budget: Optional[int] = None) -> Ternary:
    """
    Decide whether two c-actions are interference-free.

    Distinct actions must not block each other, and an action paired with a
    silent one must not be blocked by the potential of its own context.

    Args:
        c1: First c-action
        c2: Second c-action
        defs: Definition environment
        budget: Closure budget for the potential-action sets

    Returns:
        Ternary; UNKNOWN only when a truncated closure left clause two open
    """
    if c1.action != c2.action and (c1.action in c2.blocking or c2.action in c1.blocking):
        return Ternary.FALSE
    result = Ternary.TRUE
    for mine, other in ((c1, c2), (c2, c1)):
        if not other.action.is_tau:
            continue
        blocked = _self_blocked(mine.blocking, mine.context, defs, budget)
        if blocked == Ternary.TRUE:
            return Ternary.FALSE
        if blocked == Ternary.UNKNOWN:
            result = Ternary.UNKNOWN
    return result


def _triggered(t1: Transition, t2: Transition, same_target: bool) -> bool:
    if t1.action != t2.action or not same_target:
        return True
    return t1.action.is_channel and t1.action not in t2.blocking and t2.action not in t1.blocking


def _needs_strong_shift(a1: Action, a2: Action, same_target: bool) -> bool:
    if a1.is_clock or a2.is_clock:
        return True
    if a1.is_channel and a2.is_channel:
        return a1 != a2 or not same_target
    return False


def _shifts(env: Process, alpha: Action, env2: Process, strong: bool, defs: Defs) -> bool:
    """env can move by alpha (strictly, or as a residual) to something congruent to env2."""
    if strong:
        candidates = [t.target for t in transitions(env, defs) if t.action == alpha]
    else:
        candidates = list(residual(env, alpha, defs))
    return any(equiv(q, env2, defs) for q in candidates)


def _reconverges(t1: Transition, t2: Transition, defs: Defs, strong: bool) -> bool:
    for u2 in transitions(t1.target, defs):
        if u2.action != t2.action or not u2.blocking <= t2.blocking:
            continue
        if not _shifts(t2.context, t1.action, u2.context, strong, defs):
            continue
        for u1 in transitions(t2.target, defs):
            if u1.action != t1.action or not u1.blocking <= t1.blocking:
                continue
            if not equiv(u1.target, u2.target, defs):
                continue
            if _shifts(t1.context, t2.action, u1.context, strong, defs):
                return True
    return False


def check_coherence(
    p: Process,
    defs: Defs,
    budget: Optional[int] = None,
) -> Verdict:
    """
    Bounded structural coherence check.

    Every pair of transitions of every admissibly reachable state that meets
    the trigger condition and has interference-free c-actions must
    reconverge with shrunken blocking sets and matching environment shifts.
    Clock pairs with different successors are reported as clock
    determinism failures.

    Args:
        p: Process
        defs: Definition environment
        budget: State budget (defaults to SPT_BOUND)

    Returns:
        Verdict for the "coherence" analysis
    """
    lts = explore(p, defs, Strategy.ADMISSIBLE, _budget(budget))
    open_pairs = 0
    for sid, state in enumerate(lts.states):
        trans = transitions(state, defs)
        for i, t1 in enumerate(trans):
            for t2 in trans[i:]:
                same = equiv(t1.target, t2.target, defs)
                if t1.action.is_clock and t2.action.is_clock and t1.action == t2.action:
                    if same:
                        continue
                    return _fail(
                        "coherence", lts, sid, [t1, t2],
                        f"clock {t1.action} leads to non-congruent successors",
                    )
                if not _triggered(t1, t2, same):
                    continue
                free = interference_free(t1.caction, t2.caction, defs)
                if free == Ternary.FALSE:
                    continue
                strong = _needs_strong_shift(t1.action, t2.action, same)
                if _reconverges(t1, t2, defs, strong):
                    continue
                if free == Ternary.UNKNOWN:
                    open_pairs += 1
                    continue
                return _fail(
                    "coherence", lts, sid, [t1, t2],
                    f"{t1.action} and {t2.action} do not reconverge"
                    + (" with strict environment shifts" if strong else ""),
                )
    explored = len(lts.states)
    if lts.bound_hit:
        return Verdict.unknown("coherence", f"coherent up to bound {explored}", explored)
    if open_pairs:
        return Verdict.unknown(
            "coherence", f"{open_pairs} transition pairs with undecided interference", explored
        )
    logger.info(f"Coherence holds over {explored} states")
    return Verdict.holds("coherence", explored)


def _fail(analysis: str, lts: Lts, sid: int, trans: List[Transition], reason: str) -> Verdict:
    logger.info(f"{analysis} fails at state {sid}: {reason}")
    return Verdict.fails(
        analysis,
        Counterexample(
            state=to_text(lts.states[sid]),
            state_id=sid,
            transitions=[_transition_out(sid, t, lts.index.get(t.target, -1)) for t in trans],
            reason=reason,
        ),
        explored=len(lts.states),
    )


def _tau_successors(lts: Lts) -> Dict[int, List[Edge]]:
    table: Dict[int, List[Edge]] = defaultdict(list)
    for e in lts.edges:
        if e.transition.action.is_tau:
            table[e.src].append(e)
    return table


def _normal_form_sets(lts: Lts, taus: Dict[int, List[Edge]]) -> Dict[int, Set[int]]:
    """Normal forms reachable from each state by tau edges."""
    preds: Dict[int, List[int]] = defaultdict(list)
    for src, edges in taus.items():
        for e in edges:
            preds[e.dst].append(src)
    undecided = {e.src for e in lts.undecided if e.transition.action.is_tau}
    reach: Dict[int, Set[int]] = defaultdict(set)
    for nf in range(len(lts.states)):
        if taus.get(nf) or nf in undecided:
            continue
        queue = deque([nf])
        reach[nf].add(nf)
        while queue:
            s = queue.popleft()
            for q in preds[s]:
                if nf not in reach[q]:
                    reach[q].add(nf)
                    queue.append(q)
    return reach


def _distinct_forms(ids: Set[int], lts: Lts, defs: Defs) -> List[int]:
    reps: List[int] = []
    for i in sorted(ids):
        if not any(equiv(lts.states[i], lts.states[j], defs) for j in reps):
            reps.append(i)
    return reps


def check_confluence(
    p: Process, strategy: Strategy, defs: Defs, budget: Optional[int] = None
) -> Verdict:
    """
    Structural confluence of enabled reductions.

    Checks the one-step diagram for every pair of diverging tau edges, then
    that every state reaches at most one normal form up to congruence. When
    exploration was cut short, a diagram or normal form that depends on a
    state with missing edges is left open rather than reported.

    Args:
        p: Process
        strategy: Scheduling strategy filtering the reductions
        defs: Definition environment
        budget: State budget

    Returns:
        Verdict for the "confluence" analysis
    """
    lts = explore(p, defs, strategy, _budget(budget))
    taus = _tau_successors(lts)
    partial = lts.clipped | {e.src for e in lts.undecided}
    open_cases = 0
    for sid, edges in sorted(taus.items()):
        for i, e1 in enumerate(edges):
            for e2 in edges[i + 1:]:
                if e1.dst == e2.dst or equiv(lts.states[e1.dst], lts.states[e2.dst], defs):
                    continue
                left = {e.dst for e in taus.get(e1.dst, [])}
                right = {e.dst for e in taus.get(e2.dst, [])}
                if left & right or any(
                    equiv(lts.states[a], lts.states[b], defs) for a in left for b in right
                ):
                    continue
                if e1.dst in partial or e2.dst in partial:
                    open_cases += 1
                    continue
                return _fail(
                    "confluence", lts, sid, [e1.transition, e2.transition],
                    "diverging reductions do not rejoin in one step",
                )
    reach = _normal_form_sets(lts, taus)
    for sid in range(len(lts.states)):
        forms = reach.get(sid, set())
        if len(forms) < 2:
            continue
        reps = _distinct_forms(forms - partial, lts, defs)
        if len(reps) > 1:
            names = " and ".join(to_text(lts.states[r]) for r in reps[:2])
            return _fail("confluence", lts, sid, [], f"reaches distinct normal forms {names}")
        if forms & partial:
            open_cases += 1
    explored = len(lts.states)
    if not lts.complete:
        reason = f"confluent up to bound {explored}"
        if open_cases:
            reason += f", {open_cases} cases cut off by the budget"
        return Verdict.unknown("confluence", reason, explored)
    return Verdict.holds("confluence", explored)


def clock_deterministic(p: Process, defs: Defs, budget: Optional[int] = None) -> Verdict:
    """Every reachable state's clock successors are pairwise congruent."""
    lts = explore(p, defs, Strategy.ADMISSIBLE, _budget(budget))
    for sid, edges in sorted(lts.successors().items()):
        by_clock: Dict[Action, List[Edge]] = defaultdict(list)
        for e in edges:
            if e.transition.action.is_clock:
                by_clock[e.transition.action].append(e)
        for clock_edges in by_clock.values():
            first = clock_edges[0]
            for other in clock_edges[1:]:
                if other.dst != first.dst and not equiv(
                    lts.states[first.dst], lts.states[other.dst], defs
                ):
                    return _fail(
                        "clock_det", lts, sid, [first.transition, other.transition],
                        f"clock {first.transition.action} is not deterministic",
                    )
    if lts.bound_hit:
        return Verdict.unknown("clock_det", f"deterministic up to bound {len(lts.states)}", len(lts.states))
    return Verdict.holds("clock_det", len(lts.states))


def _clock_states(lts: Lts) -> List[Tuple[int, List[Edge], List[Edge]]]:
    """States with an enabled clock edge, with their clock edges and all their edges."""
    out = []
    for sid, edges in sorted(lts.successors().items()):
        clocks = [e for e in edges if e.transition.action.is_clock]
        if clocks:
            out.append((sid, clocks, edges))
    return out


def maximal_progress(
    p: Process,
    defs: Defs,
    budget: Optional[int] = None,
    strategy: Strategy = Strategy.CONSTRUCTIVE,
) -> Verdict:
    """
    A state with an enabled clock has no enabled reduction and offers no
    complementary pair of channel labels.

    Args:
        p: Process
        defs: Definition environment
        budget: State budget
        strategy: Strategy deciding which transitions count as enabled

    Returns:
        Verdict for the "max_progress" analysis
    """
    lts = explore(p, defs, strategy, _budget(budget))
    for sid, clocks, edges in _clock_states(lts):
        reductions = [e for e in edges if e.transition.action.is_tau]
        if reductions:
            return _fail(
                "max_progress", lts, sid, [clocks[0].transition, reductions[0].transition],
                "clock enabled while a reduction is enabled",
            )
        offered = initial_actions(lts.states[sid], defs)
        pairs = sorted(a for a in offered if a.is_channel and a.complement() in offered)
        if pairs:
            return _fail(
                "max_progress", lts, sid, [clocks[0].transition],
                f"clock enabled while {pairs[0]} and {pairs[0].complement()} are both offered",
            )
    if not lts.complete:
        return Verdict.unknown("max_progress", f"no violation up to bound {len(lts.states)}", len(lts.states))
    return Verdict.holds("max_progress", len(lts.states))


def clock_interference(
    p: Process,
    defs: Defs,
    budget: Optional[int] = None,
    strategy: Strategy = Strategy.CONSTRUCTIVE,
) -> Verdict:
    """
    Whenever a clock and another action are both enabled, one of them lists
    the other in its blocking set; a reduction must list the clock. The other
    action may be a different clock.
    """
    lts = explore(p, defs, strategy, _budget(budget))
    for sid, clocks, edges in _clock_states(lts):
        for ce in clocks:
            sigma = ce.transition
            for oe in edges:
                other = oe.transition
                if other.action == sigma.action:
                    continue
                if sigma.action in other.blocking:
                    continue
                if not other.action.is_tau and other.action in sigma.blocking:
                    continue
                return _fail(
                    "clock_interference", lts, sid, [sigma, other],
                    f"{other.action} and clock {sigma.action} do not block each other",
                )
    if not lts.complete:
        return Verdict.unknown(
            "clock_interference", f"no violation up to bound {len(lts.states)}", len(lts.states)
        )
    return Verdict.holds("clock_interference", len(lts.states))
