"""
Syntax-directed certification of policy coherence.

A process is certified for a policy when every operator in it, and in every
identifier body it reaches, satisfies the side condition of the matching
closure law. Certification is sufficient, not necessary: NOT_COVERED says
nothing about coherence itself.
"""
import logging
from itertools import combinations
from typing import Optional, Set

from app.models.policy import Policy
from app.models.terms import (
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
from app.schemas.report import CertStatus, CertVerdict
from app.services.congruence import _flatten
from app.services.policy_service import PolicyService
from app.services.printer import action_set_text, to_text
from app.services.sos import transitions

logger = logging.getLogger(__name__)


class NotCovered(Exception):
    """Raised internally when a side condition fails."""


class CoherenceCertifier:
    """
    Walks a process against one policy.

    Identifier bodies are certified once; an identifier already under
    certification is assumed certified, which reads recursive definitions
    co-inductively.
    """

    def __init__(self, pi: Policy, defs: Defs):
        self.pi = pi
        self.defs = defs
        self._seen: Set[str] = set()
        self._pivot: Optional[bool] = None

    def certify(self, p: Process) -> CertVerdict:
        try:
            self._walk(p, self.pi)
        except NotCovered as exc:
            logger.info(f"Certification not covered: {exc}")
            return CertVerdict(status=CertStatus.NOT_COVERED, reason=str(exc))
        return CertVerdict(status=CertStatus.CERTIFIED)

    def _is_pivot(self) -> bool:
        if self._pivot is None:
            self._pivot = PolicyService.is_pivot(self.pi)
        return self._pivot

    def _walk(self, p: Process, pi: Policy) -> None:
        if isinstance(p, Stop):
            return
        if isinstance(p, Prefix):
            self._prefix(p, pi)
            self._walk(p.cont, pi)
        elif isinstance(p, Bang):
            if not self._is_pivot():
                raise NotCovered(f"{to_text(p)}: replication needs a pivot policy")
            self._guarded(p.action, p.blocking, pi, to_text(p))
            self._walk(p.cont, pi)
        elif isinstance(p, Sum):
            summands = _flatten(Sum, [p])
            self._sum(summands)
            for s in summands:
                self._walk(s, pi)
        elif isinstance(p, Par):
            if not self._is_pivot():
                raise NotCovered(f"{to_text(p)}: parallel composition needs a pivot policy")
            self._walk(p.left, pi)
            self._walk(p.right, pi)
        elif isinstance(p, Restrict):
            scope = channel_closure(p.names)
            if not PolicyService.is_precedence_closed(pi, scope):
                raise NotCovered(f"{to_text(p)}: policy is not precedence-closed for the restricted names")
            self._walk(p.body, pi)
        elif isinstance(p, Hide):
            for c in sorted(p.clocks):
                sigma = clock(c)
                if any(src == sigma for src, _ in pi.prec):
                    raise NotCovered(f"{to_text(p)}: hidden clock {c} takes precedence over a label")
            self._walk(p.body, pi)
        elif isinstance(p, Ident):
            if p.name in self._seen:
                return
            self._seen.add(p.name)
            self._walk(self.defs.lookup(p.name), pi)
        else:
            raise TypeError(f"not a process: {p!r}")

    def _guarded(self, action, blocking, pi: Policy, where: str) -> None:
        if action not in pi.alphabet:
            raise NotCovered(f"{where}: {action} is not in the policy alphabet")
        stray = blocking - pi.preds(action)
        if stray:
            raise NotCovered(f"{where}: {action_set_text(stray)} may not block {action}")

    def _prefix(self, p: Prefix, pi: Policy) -> None:
        where = to_text(p)
        if p.action.is_channel and p.action not in p.blocking:
            raise NotCovered(f"{where}: channel prefix must block itself")
        self._guarded(p.action, p.blocking, pi, where)

    def _sum(self, summands) -> None:
        steps = [transitions(s, self.defs) for s in summands]
        for (i, left), (j, right) in combinations(enumerate(steps), 2):
            for t1 in left:
                for t2 in right:
                    if t1.action == t2.action:
                        raise NotCovered(
                            f"summands {to_text(summands[i])} and {to_text(summands[j])} share {t1.action}"
                        )
                    if t1.action not in t2.blocking and t2.action not in t1.blocking:
                        raise NotCovered(
                            f"neither {t1.action} nor {t2.action} blocks the other in a choice"
                        )


def certify_coherent(p: Process, pi: Policy, defs: Defs) -> CertVerdict:
    """
    Certify that p is coherent for pi by the closure laws.

    Args:
        p: Process
        pi: Policy
        defs: Definition environment

    Returns:
        CertVerdict: CERTIFIED, or NOT_COVERED with the first failed condition
    """
    return CoherenceCertifier(pi, defs).certify(p)
