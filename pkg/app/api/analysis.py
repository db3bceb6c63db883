"""API endpoints for exploring, checking and running processes."""
import logging

from fastapi import APIRouter, HTTPException, status
from fastapi.concurrency import run_in_threadpool

from app.config import get_settings
from app.exceptions import SptError
from app.models.lts import Strategy
from app.schemas.report import CheckReport, CheckRequest, LtsExport, LtsRequest, MacroStepTrace, TraceRequest
from app.services.check_service import run_checks
from app.services.exporters import to_export
from app.services.macro_step import macro_run
from app.services.parser import parse
from app.services.reachability import explore

router = APIRouter(tags=["analysis"])

logger = logging.getLogger(__name__)


def _bad_request(exc: SptError) -> HTTPException:
    logger.info(f"Rejected request: {exc}")
    return HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(exc))


def _lts(req: LtsRequest) -> LtsExport:
    spt = parse(req.source)
    lts = explore(spt.main, spt.defs, Strategy(req.strategy), req.bound or get_settings().SPT_BOUND)
    return to_export(lts)


def _check(req: CheckRequest) -> CheckReport:
    spt = parse(req.source)
    return run_checks(
        spt,
        analyses=req.analyses,
        strategy=Strategy(req.strategy),
        bound=req.bound,
        policy=req.policy,
        source="request",
    )


def _trace(req: TraceRequest) -> MacroStepTrace:
    spt = parse(req.source)
    return macro_run(
        spt.main,
        Strategy(req.strategy),
        spt.defs,
        budget=req.bound,
        steps=req.steps,
        tiebreak=req.tiebreak,
    )


@router.post("/lts", response_model=LtsExport)
async def build_lts(req: LtsRequest):
    """
    Explore the main process of a source text.

    Args:
        req: Source, strategy and state budget

    Returns:
        The explored state graph with full c-actions
    """
    try:
        return await run_in_threadpool(_lts, req)
    except SptError as e:
        raise _bad_request(e)


@router.post("/check", response_model=CheckReport)
async def check(req: CheckRequest):
    """
    Run analyses on the main process of a source text.

    Args:
        req: Source, analyses, strategy, budget and policy name

    Returns:
        Report with one verdict per analysis
    """
    try:
        return await run_in_threadpool(_check, req)
    except SptError as e:
        raise _bad_request(e)


@router.post("/trace", response_model=MacroStepTrace)
async def trace(req: TraceRequest):
    """Run macro-steps of the main process."""
    try:
        return await run_in_threadpool(_trace, req)
    except SptError as e:
        raise _bad_request(e)
