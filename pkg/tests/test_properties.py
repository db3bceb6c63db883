"""
Randomized property tests over small finite processes.

Tests cover:
- Strategies coincide on processes without blocking
- Each strategy enables a subset of the next more permissive one
- Certified processes are never found incoherent
- Exploration is deterministic
"""

import random

from app.models.lts import Strategy
from app.models.terms import STOP, Defs, Par, Restrict, Sum, chan, cochan, prefix
from app.schemas.report import VerdictStatus
from app.services.analysis import check_coherence
from app.services.certification import certify_coherent
from app.services.classifier import classify
from app.services.policy_service import discrete
from app.services.reachability import explore
from app.services.scheduling import enabled_transitions
from app.services.sos import transitions

LABELS = [chan("a"), cochan("a"), chan("b"), cochan("b")]
ORDER = [Strategy.ADMISSIBLE, Strategy.WEAK, Strategy.STRONG, Strategy.CONSTRUCTIVE]
EMPTY = Defs()


def _random_process(rng, depth, free):
    if depth == 0:
        return rng.choice([STOP, prefix(rng.choice(LABELS))])
    kind = rng.randrange(5)
    if kind == 0:
        blocking = () if free else rng.sample(LABELS, rng.randrange(3))
        return prefix(rng.choice(LABELS), blocking, _random_process(rng, depth - 1, free))
    if kind == 1:
        return Sum(_random_process(rng, depth - 1, free), _random_process(rng, depth - 1, free))
    if kind == 2:
        return Par(_random_process(rng, depth - 1, free), _random_process(rng, depth - 1, free))
    if kind == 3:
        return Restrict(_random_process(rng, depth - 1, free), frozenset(rng.sample(["a", "b"], 1)))
    return prefix(rng.choice(LABELS), (), _random_process(rng, depth - 1, free))


def _random_discrete(rng, depth):
    """Self-blocking prefixes under composition, with the odd uncovered form."""
    if depth == 0:
        return rng.choice([STOP, prefix(rng.choice(LABELS), [])])
    kind = rng.randrange(8)
    if kind < 3:
        label = rng.choice(LABELS)
        return prefix(label, [label], _random_discrete(rng, depth - 1))
    if kind < 5:
        return Par(_random_discrete(rng, depth - 1), _random_discrete(rng, depth - 1))
    if kind == 5:
        return Restrict(_random_discrete(rng, depth - 1), frozenset(rng.sample(["a", "b"], 1)))
    if kind == 6:
        return prefix(rng.choice(LABELS), (), _random_discrete(rng, depth - 1))
    return Sum(_random_discrete(rng, depth - 1), _random_discrete(rng, depth - 1))


class TestStrategyProperties:
    """Properties relating the four strategies."""

    def test_free_processes_enable_everything(self):
        """Without blocking sets every strategy enables every transition."""
        rng = random.Random(11)
        for _ in range(500):
            p = _random_process(rng, 3, free=True)
            report = classify(p, EMPTY)
            assert report.free and report.unclocked
            everything = set(transitions(p, EMPTY))
            enabled = {}
            for strategy in ORDER:
                result = enabled_transitions(p, strategy, EMPTY)
                enabled[strategy] = set(result.enabled)
                assert enabled[strategy] == everything, f"{strategy.value} disagrees on {p}"
                assert result.undecided == ()
            assert enabled[Strategy.STRONG] == enabled[Strategy.WEAK]

    def test_strategy_hierarchy(self):
        """Stricter strategies enable fewer transitions."""
        rng = random.Random(23)
        for _ in range(100):
            p = _random_process(rng, 3, free=False)
            sets = [set(enabled_transitions(p, s, EMPTY).enabled) for s in ORDER]
            for looser, stricter, name in zip(sets, sets[1:], ORDER[1:]):
                assert stricter <= looser, f"{name.value} enables more than its predecessor on {p}"


class TestCertificationProperties:
    """Certification against the bounded coherence check."""

    def test_certified_processes_are_coherent(self):
        """No certified process fails the coherence check."""
        rng = random.Random(17)
        pi = discrete(LABELS)
        certified = 0
        for _ in range(200):
            p = _random_discrete(rng, 3)
            if not certify_coherent(p, pi, EMPTY).certified:
                continue
            certified += 1
            verdict = check_coherence(p, EMPTY, budget=10_000)
            assert verdict.status != VerdictStatus.FAILS, f"certified {p} fails: {verdict.counterexample}"
        assert certified > 0


class TestExplorationProperties:
    """Properties of state-space exploration."""

    def test_deterministic(self):
        """Exploring twice numbers states and edges identically."""
        rng = random.Random(5)
        for _ in range(30):
            p = _random_process(rng, 3, free=False)
            first = explore(p, EMPTY, Strategy.WEAK)
            second = explore(p, EMPTY, Strategy.WEAK)
            assert first.states == second.states
            assert [(e.src, e.dst) for e in first.edges] == [(e.src, e.dst) for e in second.edges]
