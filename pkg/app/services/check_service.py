"""
Runs a selection of analyses over a parsed source file and collects the
verdicts into one report.
"""
import logging
from typing import Iterable, List, Optional

from app.config import get_settings
from app.exceptions import ArgumentError
from app.models.lts import Strategy
from app.models.policy import Policy
from app.schemas.report import CheckReport, Counterexample, Verdict
from app.services.analysis import (
    check_coherence,
    check_confluence,
    clock_deterministic,
    clock_interference,
    maximal_progress,
)
from app.services.certification import certify_coherent
from app.services.parser import SptFile
from app.services.policy_service import conforms, is_pivot

logger = logging.getLogger(__name__)

ANALYSES = (
    "confluence",
    "coherence",
    "conformance",
    "pivot",
    "clock_det",
    "max_progress",
    "clock_interference",
    "certify",
)
POLICY_ANALYSES = ("conformance", "pivot", "certify")


def _pivot_verdict(pi: Policy) -> Verdict:
    if is_pivot(pi):
        return Verdict.holds("pivot")
    return Verdict.fails(
        "pivot",
        Counterexample(state=pi.name or "policy", reason="the dual policy is not below the policy"),
    )


class CheckService:
    """Dispatch of named analyses."""

    @staticmethod
    def resolve(names: Iterable[str], has_policy: bool) -> List[str]:
        """
        Expand and validate analysis names.

        Args:
            names: Requested names; "all" selects every analysis that applies
            has_policy: Whether a policy is available

        Returns:
            Analysis names in canonical order
        """
        requested = set(names)
        if "all" in requested:
            requested.discard("all")
            requested |= {a for a in ANALYSES if has_policy or a not in POLICY_ANALYSES}
        unknown = requested - set(ANALYSES)
        if unknown:
            raise ArgumentError(f"unknown analyses: {', '.join(sorted(unknown))}")
        if not has_policy and requested & set(POLICY_ANALYSES):
            needs = ", ".join(sorted(requested & set(POLICY_ANALYSES)))
            raise ArgumentError(f"{needs} needs a policy block")
        return [a for a in ANALYSES if a in requested]

    @staticmethod
    def run(
        spt: SptFile,
        analyses: Iterable[str] = ("all",),
        strategy: Strategy = Strategy.ADMISSIBLE,
        bound: Optional[int] = None,
        policy: Optional[str] = None,
        source: str = "<input>",
    ) -> CheckReport:
        """
        Run analyses on the main process of a parsed file.

        Args:
            spt: Parsed file
            analyses: Analysis names or "all"
            strategy: Strategy for confluence
            bound: State budget (defaults to SPT_BOUND)
            policy: Policy block name (defaults to the designated policy)
            source: Name recorded in the report

        Returns:
            CheckReport
        """
        bound = bound or get_settings().SPT_BOUND
        pi = spt.select_policy(policy)
        selected = CheckService.resolve(analyses, pi is not None)
        report = CheckReport(
            source=source,
            strategy=strategy.value,
            bound=bound,
            policy=pi.name if pi is not None and "conformance" in selected else None,
        )
        p, defs = spt.main, spt.defs
        for name in selected:
            logger.info(f"Running {name} on {source}")
            if name == "confluence":
                report.verdicts.append(check_confluence(p, strategy, defs, bound))
            elif name == "coherence":
                report.verdicts.append(check_coherence(p, defs, bound))
            elif name == "conformance":
                report.verdicts.append(conforms(p, pi, defs, bound))
            elif name == "pivot":
                report.verdicts.append(_pivot_verdict(pi))
            elif name == "clock_det":
                report.verdicts.append(clock_deterministic(p, defs, bound))
            elif name == "max_progress":
                report.verdicts.append(maximal_progress(p, defs, bound))
            elif name == "clock_interference":
                report.verdicts.append(clock_interference(p, defs, bound))
            elif name == "certify":
                report.certification = certify_coherent(p, pi, defs)
        return report


# Helper functions for easier imports
run_checks = CheckService.run
resolve_analyses = CheckService.resolve
