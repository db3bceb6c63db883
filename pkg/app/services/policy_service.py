"""
Precedence policy algebra and conformance checking.
"""
import logging
from itertools import product
from typing import Iterable, Optional

from app.config import get_settings
from app.models.lts import Strategy
from app.models.policy import Policy
from app.models.terms import Action, ActionKind, Defs, Process, complement_set
from app.schemas.report import Counterexample, Verdict
from app.services.classifier import visible_labels
from app.services.exporters import edge_out
from app.services.printer import to_text
from app.services.reachability import explore

logger = logging.getLogger(__name__)


class PolicyService:
    """Operations on precedence policies."""

    @staticmethod
    def dual(pi: Policy) -> Policy:
        """
        Dual policy: co-labels, where l1~ precedes l2~ iff l1 = l2 or l1, l2 are independent.

        Args:
            pi: Policy

        Returns:
            The dual policy over the complemented alphabet
        """
        prec = set()
        for l1, l2 in product(pi.alphabet, repeat=2):
            if l1 == l2 or pi.independent(l1, l2):
                prec.add((l1.complement(), l2.complement()))
        return Policy(complement_set(pi.alphabet), frozenset(prec), f"dual({pi.name})" if pi.name else "")

    @staticmethod
    def preceq(p1: Policy, p2: Policy) -> bool:
        """p1 is below p2: smaller alphabet, and on it every precedence of p2 is one of p1."""
        if not p1.alphabet <= p2.alphabet:
            return False
        return all(
            (l1, l2) in p1.prec
            for l1, l2 in p2.prec
            if l1 in p1.alphabet and l2 in p1.alphabet
        )

    @staticmethod
    def subset(p1: Policy, p2: Policy) -> bool:
        return p1.alphabet <= p2.alphabet and p1.prec <= p2.prec

    @staticmethod
    def restrict(pi: Policy, labels: Iterable[Action]) -> Policy:
        """Drop the given labels and their complements."""
        labels = set(labels)
        gone = labels | complement_set(labels)
        return Policy(
            pi.alphabet - gone,
            frozenset((a, b) for a, b in pi.prec if a not in gone and b not in gone),
            pi.name,
        )

    @staticmethod
    def union(p1: Policy, p2: Policy) -> Policy:
        name = f"{p1.name}+{p2.name}" if p1.name and p2.name else ""
        return Policy(p1.alphabet | p2.alphabet, p1.prec | p2.prec, name)

    @classmethod
    def is_pivot(cls, pi: Policy) -> bool:
        """A policy is pivot when its dual lies below it."""
        return cls.preceq(cls.dual(pi), pi)

    @staticmethod
    def is_pivot_characterized(pi: Policy) -> bool:
        """
        Pivot test without building the dual: the alphabet is closed under
        complement, and any two distinct labels are independent or have
        independent complements.
        """
        if not complement_set(pi.alphabet) <= pi.alphabet:
            return False
        labels = sorted(pi.alphabet)
        for i, l1 in enumerate(labels):
            for l2 in labels[i + 1:]:
                if not (pi.independent(l1, l2) or pi.independent(l1.complement(), l2.complement())):
                    return False
        return True

    @staticmethod
    def is_input_scheduled(pi: Policy) -> bool:
        """Every precedence is reflexive or runs between inputs and clocks."""
        return all(
            l1 == l2 or (not _is_output(l1) and not _is_output(l2))
            for l1, l2 in pi.prec
        )

    @staticmethod
    def is_precedence_closed(pi: Policy, labels: Iterable[Action]) -> bool:
        labels = set(labels)
        return all(l2 in labels for l1, l2 in pi.prec if l1 in labels)

    @staticmethod
    def pi_max(universe: Iterable[Action]) -> Policy:
        return Policy(frozenset(universe), frozenset(), "pi_max")

    @staticmethod
    def pi_min() -> Policy:
        return Policy(frozenset(), frozenset(), "pi_min")

    @staticmethod
    def pi_is(universe: Iterable[Action]) -> Policy:
        universe = frozenset(universe)
        prec = frozenset(
            (l1, l2)
            for l1, l2 in product(universe, repeat=2)
            if l1 == l2 or (not _is_output(l1) and not _is_output(l2))
        )
        return Policy(universe, prec, "pi_is")

    @staticmethod
    def discrete(universe: Iterable[Action]) -> Policy:
        """Policy with only reflexive precedences."""
        universe = frozenset(universe)
        return Policy(universe, frozenset((l, l) for l in universe), "discrete")


def _is_output(label: Action) -> bool:
    return label.kind == ActionKind.OUTPUT


def label_universe(p: Process, defs: Defs) -> frozenset:
    """All visible labels of p and of every definition, closed under complement."""
    labels = set(visible_labels(p, defs))
    for name in defs.names():
        labels |= visible_labels(defs.lookup(name), defs)
    return frozenset(labels | complement_set(labels))


def conforms(p: Process, pi: Policy, defs: Defs, budget: Optional[int] = None) -> Verdict:
    """
    Check that every reachable visible step l:H uses a label of the policy
    and is blocked only by labels allowed to take precedence over l.

    Args:
        p: Process
        pi: Policy
        defs: Definition environment
        budget: State budget for exploration

    Returns:
        Verdict: HOLDS, FAILS with the offending edge, or UNKNOWN when the
        exploration was cut short
    """
    lts = explore(p, defs, Strategy.ADMISSIBLE, budget or get_settings().SPT_BOUND)
    for edge in lts.edges:
        t = edge.transition
        if not t.action.is_visible:
            continue
        if t.action not in pi.alphabet:
            reason = f"label {t.action} is not in the policy alphabet"
        else:
            bad = sorted(h for h in t.blocking if h.is_visible and not pi.precedes(h, t.action))
            if not bad:
                continue
            reason = f"{', '.join(map(str, bad))} may not take precedence over {t.action}"
        logger.info(f"Conformance violation: {reason}")
        return Verdict.fails(
            "conformance",
            Counterexample(
                state=to_text(lts.states[edge.src]),
                state_id=edge.src,
                transitions=[edge_out(edge)],
                reason=reason,
            ),
            explored=len(lts.states),
        )
    if lts.bound_hit:
        return Verdict.unknown("conformance", f"conformant up to bound {len(lts.states)}", len(lts.states))
    return Verdict.holds("conformance", len(lts.states))


# Helper functions for easier imports
dual = PolicyService.dual
preceq = PolicyService.preceq
subset = PolicyService.subset
restrict = PolicyService.restrict
union = PolicyService.union
is_pivot = PolicyService.is_pivot
is_pivot_characterized = PolicyService.is_pivot_characterized
is_input_scheduled = PolicyService.is_input_scheduled
is_precedence_closed = PolicyService.is_precedence_closed
pi_max = PolicyService.pi_max
pi_min = PolicyService.pi_min
pi_is = PolicyService.pi_is
discrete = PolicyService.discrete
