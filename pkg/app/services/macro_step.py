"""
Macro-step execution: reduce to a normal form, then let the clock tick.
"""
import logging
import random
from collections import deque
from typing import List, Optional, Sequence, Tuple

from app.config import get_settings
from app.exceptions import ArgumentError
from app.models.lts import Strategy, Transition
from app.models.terms import Defs, Process
from app.schemas.report import MacroStep, MacroStepTrace
from app.services.congruence import canon, equiv
from app.services.printer import to_text
from app.services.scheduling import enabled_transitions

logger = logging.getLogger(__name__)


class TieBreak:
    """Deterministic choice among enabled reductions."""

    def __init__(self, spec: str = "least"):
        self.spec = spec
        self._rng: Optional[random.Random] = None
        if spec.startswith("seed:"):
            try:
                self._rng = random.Random(int(spec[5:]))
            except ValueError:
                raise ArgumentError(f"bad tie-break seed: {spec}") from None
        elif spec not in ("least", "greatest"):
            raise ArgumentError(f"unknown tie-break: {spec}")

    def pick(self, candidates: Sequence[Transition]) -> Transition:
        if self._rng is not None:
            return self._rng.choice(list(candidates))
        if self.spec == "greatest":
            return candidates[-1]
        return candidates[0]


def _step_label(t: Transition) -> str:
    return str(t.sync) if t.sync is not None else str(t.action)


def normal_forms(
    p: Process, strategy: Strategy, defs: Defs, budget: int
) -> Tuple[List[Process], bool]:
    """
    Normal forms reachable from p by enabled reductions.

    Returns:
        (forms, truncated): distinct forms up to congruence, and whether the
        search ran out of budget
    """
    start = canon(p, defs)
    seen = {start}
    queue = deque([start])
    forms: List[Process] = []
    truncated = False
    while queue:
        q = queue.popleft()
        enabled = enabled_transitions(q, strategy, defs)
        taus = [t for t in enabled.enabled if t.action.is_tau]
        if enabled.undecided:
            truncated = True
        if not taus:
            if not any(equiv(q, f, defs) for f in forms):
                forms.append(q)
            continue
        for t in taus:
            if t.target in seen:
                continue
            if len(seen) >= budget:
                truncated = True
                continue
            seen.add(t.target)
            queue.append(t.target)
    return forms, truncated


def macro_run(
    p: Process,
    strategy: Strategy,
    defs: Defs,
    budget: Optional[int] = None,
    steps: int = 1,
    tiebreak: str = "least",
) -> MacroStepTrace:
    """
    Run up to ``steps`` macro-steps.

    Each macro-step reduces by enabled silent steps, picked by the tie-break
    rule, until a normal form is reached, records it, and fires the clock if
    one is enabled. A normal form with no clock ends the trace, and so does
    one whose clocks lead to non-congruent states; the latter is flagged on
    the trace instead of picking a tick.

    Args:
        p: Process
        strategy: Scheduling strategy
        defs: Definition environment
        budget: Maximum number of reductions over the whole run
        steps: Number of macro-steps (at least one)
        tiebreak: "least", "greatest" or "seed:N"

    Returns:
        MacroStepTrace
    """
    if steps < 1:
        raise ArgumentError("steps must be at least 1")
    budget = budget or get_settings().SPT_BOUND
    chooser = TieBreak(tiebreak)
    trace = MacroStepTrace(strategy=strategy.value, tiebreak=tiebreak)
    state = canon(p, defs)
    reductions = 0

    for index in range(steps):
        start = state
        syncs: List[str] = []
        while True:
            enabled = enabled_transitions(state, strategy, defs)
            taus = [t for t in enabled.enabled if t.action.is_tau]
            if not taus:
                break
            if reductions >= budget:
                logger.warning(f"Reduction budget {budget} exhausted in macro-step {index}")
                trace.partial = True
                return trace
            chosen = chooser.pick(taus)
            syncs.append(_step_label(chosen))
            state = chosen.target
            reductions += 1
        if any(t.action.is_tau for t in enabled.undecided):
            trace.partial = True

        forms, truncated = normal_forms(start, strategy, defs, budget)
        order_dependent = len(forms) > 1
        if order_dependent:
            logger.warning(f"Macro-step {index} is order-dependent: {len(forms)} normal forms")
        if truncated:
            trace.partial = True

        clocks = [t for t in enabled.enabled if t.action.is_clock]
        successors: List[Transition] = []
        for t in clocks:
            if not any(equiv(t.target, s.target, defs) for s in successors):
                successors.append(t)
        ambiguous = len(successors) > 1
        fired = successors[0] if len(successors) == 1 else None
        trace.steps.append(
            MacroStep(
                index=index,
                normal_form=to_text(state),
                syncs=syncs,
                clock=str(fired.action) if fired else None,
                order_dependent=order_dependent,
                clock_successors=[to_text(s.target) for s in successors] if ambiguous else [],
            )
        )
        if ambiguous:
            logger.warning(
                f"Clock successors of {to_text(state)} differ: "
                + ", ".join(to_text(s.target) for s in successors)
            )
            trace.clock_nondeterministic = True
            break
        if fired is None:
            trace.deadlock = True
            break
        state = fired.target

    logger.info(f"Macro run: {len(trace.steps)} steps, {reductions} reductions under {strategy.value}")
    return trace
