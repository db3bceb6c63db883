"""
Batch runner for the packaged corpus of worked examples.

Runs every fixture (or the ones named) and compares the verdicts with the
fixture's expectation file.

Usage:
    python -m app.scripts.run_corpus
    python -m app.scripts.run_corpus rbw deadlock --bound 5000
"""
import argparse
import logging
import sys
from datetime import datetime
from typing import List

from tqdm import tqdm

from app.exceptions import SptError
from app.services.corpus import fixture_names, load_fixture, mismatches, run_fixture

# Configure logging
logging.basicConfig(
    level=logging.WARNING,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)


def parse_arguments():
    """Parse command line arguments."""
    parser = argparse.ArgumentParser(description='Check the worked examples against their expected verdicts.')
    parser.add_argument(
        'names',
        nargs='*',
        help='Fixtures to run (default: all)'
    )
    parser.add_argument(
        '--bound',
        type=int,
        default=None,
        help='State budget for fixtures without their own bound'
    )
    return parser.parse_args()


def run(names: List[str], bound=None) -> List[str]:
    """
    Run fixtures and collect deviations.

    Args:
        names: Fixture names
        bound: Default state budget

    Returns:
        One line per deviating expectation or failing fixture
    """
    problems: List[str] = []
    for name in tqdm(names, desc="Corpus", unit="fixture"):
        try:
            fixture = load_fixture(name)
            report = run_fixture(fixture, bound)
        except SptError as e:
            logger.error(f"Fixture {name} could not be run: {e}")
            problems.append(f"{name}: error: {e}")
            continue
        problems.extend(mismatches(fixture, report))
    return problems


def main():
    """Main entry point for the corpus runner."""
    args = parse_arguments()
    names = args.names or fixture_names()

    print(f"\n🔍 Running {len(names)} fixtures")
    start_time = datetime.now()
    problems = run(names, args.bound)
    duration = (datetime.now() - start_time).total_seconds()

    print("\n" + "=" * 60)
    if problems:
        print(f"❌ {len(problems)} deviations:")
        for line in problems:
            print(f"   - {line}")
    else:
        print("✅ Every fixture matches its expectations")
    print(f"⏱️  Completed in {duration:.2f} seconds")
    print("=" * 60)

    sys.exit(1 if problems else 0)


if __name__ == "__main__":
    main()
