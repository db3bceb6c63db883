"""
Randomized checks of the structural facts the schedulers rely on.

Tests cover:
- Initial actions, weak initial actions and potential actions form a chain
- Potential actions shrink along non-clock steps
- Clock steps carry an empty context
- Sequential processes never block on tau and carry empty contexts
- Potential actions do not depend on how a process is written
"""

import random

from app.models.terms import STOP, TAU, Defs, Par, Restrict, Sum, chan, clock, cochan, prefix
from app.services.classifier import classify
from app.services.reachability import initial_actions, potential, weak_initial
from app.services.sos import transitions

CHANNELS = [chan("a"), cochan("a"), chan("b"), cochan("b")]
LABELS = CHANNELS + [clock("s")]
DEFS = Defs.of({}, ["s"])
SAMPLES = 1000


def _random_process(rng, depth, parallel=True):
    if depth == 0:
        return rng.choice([STOP, prefix(rng.choice(LABELS))])
    kinds = 5 if parallel else 4
    kind = rng.randrange(kinds)
    if kind == 0:
        blocking = rng.sample(CHANNELS, rng.randrange(3))
        return prefix(rng.choice(LABELS), blocking, _random_process(rng, depth - 1, parallel))
    if kind == 1:
        return Sum(_random_process(rng, depth - 1, parallel), _random_process(rng, depth - 1, parallel))
    if kind == 2:
        return Restrict(_random_process(rng, depth - 1, parallel), frozenset(rng.sample(["a", "b"], 1)))
    if kind == 3:
        return prefix(rng.choice(LABELS), (), _random_process(rng, depth - 1, parallel))
    return Par(_random_process(rng, depth - 1, parallel), _random_process(rng, depth - 1, parallel))


def _samples(seed, parallel=True):
    rng = random.Random(seed)
    return [_random_process(rng, 3, parallel) for _ in range(SAMPLES)]


class TestClosureChain:
    """Initial-action closures over random processes."""

    def test_inclusion_chain(self):
        """Visible initial actions lie in the weak closure, which lies in the potential."""
        for p in _samples(31):
            strong = {a for a in initial_actions(p, DEFS) if a.is_visible}
            weak = {a for a in weak_initial(p, DEFS).actions if a.is_visible}
            reach = potential(p, DEFS).actions
            assert strong <= weak, f"initial actions escape the weak closure of {p}"
            assert weak <= reach, f"weak closure escapes the potential of {p}"

    def test_potential_shrinks(self):
        """A non-clock step never adds potential actions."""
        for p in _samples(37):
            before = potential(p, DEFS).actions
            for t in transitions(p, DEFS):
                if t.action.is_clock:
                    continue
                assert potential(t.target, DEFS).actions <= before, f"{t.action} grows the potential of {p}"

    def test_congruent_forms_agree(self):
        """Swapping the operands of choice and composition keeps the potential."""
        rng = random.Random(41)
        for _ in range(SAMPLES):
            p, q = _random_process(rng, 2), _random_process(rng, 2)
            assert potential(Par(p, q), DEFS).actions == potential(Par(q, p), DEFS).actions
            assert potential(Sum(p, q), DEFS).actions == potential(Sum(q, p), DEFS).actions


class TestStepShapes:
    """Shapes of derived transitions over random processes."""

    def test_clock_context_is_empty(self):
        """Clock steps leave nothing behind in their context."""
        for p in _samples(43):
            for t in transitions(p, DEFS):
                if t.action.is_clock:
                    assert t.context == STOP, f"clock step of {p} keeps {t.context}"

    def test_sequential_processes(self):
        """Without parallel composition no step is blocked by tau or has a context."""
        for p in _samples(47, parallel=False):
            assert classify(p, DEFS).sequential
            for t in transitions(p, DEFS):
                assert TAU not in t.blocking, f"tau blocks a step of {p}"
                assert t.context == STOP, f"step of {p} keeps {t.context}"
