"""
Worked examples shipped with the package, with their expected verdicts.

Each fixture is a pair of files in ``app/corpus``: ``NAME.spt`` with the
source and ``NAME.expect`` with ``key: value`` lines in the report format.
The keys ``provenance`` and ``policy`` describe the fixture; ``strategy``
and ``bound`` set the run parameters; every other key names an analysis and
its expected status.
"""
import logging
from pathlib import Path
from typing import Dict, List, Optional

from app.exceptions import ArgumentError
from app.models.lts import Strategy
from app.schemas.report import CheckReport, Fixture
from app.services.check_service import ANALYSES, run_checks
from app.services.parser import parse

logger = logging.getLogger(__name__)

CORPUS_DIR = Path(__file__).resolve().parent.parent / "corpus"


def _read_expect(path: Path) -> Dict[str, str]:
    entries: Dict[str, str] = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise ArgumentError(f"{path.name}:{lineno}: expected 'key: value'")
        entries[key.strip()] = value.strip()
    return entries


def fixture_names(directory: Optional[Path] = None) -> List[str]:
    directory = directory or CORPUS_DIR
    return sorted(p.stem for p in directory.glob("*.spt"))


def load_fixture(name: str, directory: Optional[Path] = None) -> Fixture:
    """
    Load one fixture by name.

    Args:
        name: File stem, e.g. "rbw"
        directory: Corpus directory (defaults to the packaged corpus)

    Returns:
        Fixture
    """
    directory = directory or CORPUS_DIR
    source_path = directory / f"{name}.spt"
    if not source_path.exists():
        raise ArgumentError(f"no fixture named {name}")
    expect_path = directory / f"{name}.expect"
    entries = _read_expect(expect_path) if expect_path.exists() else {}
    provenance = entries.pop("provenance", "")
    policy = entries.pop("policy", None)
    return Fixture(
        name=name,
        source=source_path.read_text(encoding="utf-8"),
        policy=policy,
        expected=entries,
        provenance=provenance,
    )


def fixtures(directory: Optional[Path] = None) -> List[Fixture]:
    """All fixtures of the corpus, sorted by name."""
    return [load_fixture(name, directory) for name in fixture_names(directory)]


def run_fixture(fixture: Fixture, bound: Optional[int] = None) -> CheckReport:
    """
    Run the analyses a fixture has expectations for.

    Args:
        fixture: Fixture
        bound: State budget; the fixture's own ``bound`` entry wins over it

    Returns:
        CheckReport
    """
    spt = parse(fixture.source)
    strategy = Strategy(fixture.expected.get("strategy", Strategy.ADMISSIBLE.value))
    if "bound" in fixture.expected:
        bound = int(fixture.expected["bound"])
    analyses = [key for key in fixture.expected if key in ANALYSES]
    return run_checks(
        spt,
        analyses=analyses,
        strategy=strategy,
        bound=bound,
        policy=fixture.policy,
        source=fixture.name,
    )


def mismatches(fixture: Fixture, report: CheckReport) -> List[str]:
    """
    Compare a report against the fixture's expectations.

    Returns:
        One line per expected key whose reported value differs
    """
    actual: Dict[str, str] = {}
    for line in report.to_kv().splitlines():
        key, _, value = line.partition(":")
        actual[key.strip()] = value.strip()
    out = []
    for key, expected in fixture.expected.items():
        got = actual.get(key)
        if got != expected:
            out.append(f"{fixture.name}: {key} expected {expected}, got {got}")
    if out:
        logger.warning(f"Fixture {fixture.name} deviates in {len(out)} entries")
    return out
