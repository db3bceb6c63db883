"""
Per-environment derivation caches.

Every derived fact about a term (canonical form, initial actions,
transitions, closures) depends only on the term and the definition
environment, so one ``Engine`` per ``Defs`` holds insert-only memo tables
shared by all services.

Memo tables are shared between threads; an entry is computed from the term
alone, so a racing writer stores the same value. The stack of identifiers
being unfolded is per derivation and lives in thread-local storage.
"""
import logging
import threading
from contextlib import contextmanager
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, FrozenSet, Iterator, List, Optional, Set, Tuple

from app.config import get_settings
from app.models.lts import Transition
from app.models.terms import Action, Defs, Process

logger = logging.getLogger(__name__)


@dataclass
class Engine:
    """Memo tables for one definition environment."""

    defs: Defs
    halting_absorption: bool = False
    unfold_limit: int = 64
    unfold_bound: int = 2
    closure_budget: int = 10_000

    canon: Dict[Process, Process] = field(default_factory=dict)
    ident_labels: Optional[Dict[str, FrozenSet[Action]]] = None
    ident_initial: Optional[Dict[str, FrozenSet[Action]]] = None
    labels: Dict[Process, FrozenSet[Action]] = field(default_factory=dict)
    initial: Dict[Process, FrozenSet[Action]] = field(default_factory=dict)
    trans: Dict[Process, Tuple[Transition, ...]] = field(default_factory=dict)
    weak: Dict[Tuple[Process, int], Tuple[FrozenSet[Action], bool]] = field(default_factory=dict)
    potential: Dict[Tuple[Process, int], Tuple[FrozenSet[Action], bool]] = field(default_factory=dict)
    equivs: Dict[FrozenSet[Process], bool] = field(default_factory=dict)

    _local: threading.local = field(default_factory=threading.local, repr=False, compare=False)

    @property
    def unfolding(self) -> List[str]:
        """Identifiers being unfolded by the current thread's derivation."""
        stack = getattr(self._local, "unfolding", None)
        if stack is None:
            stack = self._local.unfolding = []
        return stack

    @property
    def scoping(self) -> Set[Process]:
        """Scope contexts whose potential the current thread is computing."""
        pending = getattr(self._local, "scoping", None)
        if pending is None:
            pending = self._local.scoping = set()
        return pending

    @contextmanager
    def derivation(self) -> Iterator[List[str]]:
        """Run a derivation with a fresh unfolding stack, restoring the caller's afterwards."""
        saved = getattr(self._local, "unfolding", None)
        self._local.unfolding = []
        try:
            yield self._local.unfolding
        finally:
            self._local.unfolding = saved


@lru_cache(maxsize=32)
def get_engine(defs: Defs) -> Engine:
    """
    Get the shared engine for a definition environment.

    Args:
        defs: Definition environment

    Returns:
        Engine: Cached engine configured from application settings
    """
    settings = get_settings()
    logger.debug(f"Creating engine for {len(defs.bindings)} definitions")
    return Engine(
        defs=defs,
        halting_absorption=settings.HALTING_ABSORPTION,
        unfold_limit=settings.UNFOLD_LIMIT,
        unfold_bound=settings.UNFOLD_BOUND,
        closure_budget=settings.CLOSURE_BUDGET,
    )
