"""Precedence policies."""
from dataclasses import dataclass, field
from functools import cached_property
from typing import FrozenSet, Iterable, Tuple

from app.models.terms import Action


@dataclass(frozen=True)
class Policy:
    """
    A precedence policy (L, prec).

    ``(l1, l2) in prec`` reads "l1 takes precedence over l2", i.e. l1 may
    appear in the blocking set of an l2 step.
    """

    alphabet: FrozenSet[Action]
    prec: FrozenSet[Tuple[Action, Action]] = field(default_factory=frozenset)
    name: str = field(default="", compare=False)

    def __post_init__(self):
        stray = {x for pair in self.prec for x in pair} - self.alphabet
        if stray:
            raise ValueError(f"precedence mentions labels outside the alphabet: {sorted(map(str, stray))}")

    @classmethod
    def of(cls, alphabet: Iterable[Action], prec: Iterable[Tuple[Action, Action]] = (), name: str = "") -> "Policy":
        prec = frozenset(prec)
        alpha = frozenset(alphabet) | {x for pair in prec for x in pair}
        return cls(alpha, prec, name)

    def __hash__(self) -> int:
        return hash((self.alphabet, self.prec))

    def precedes(self, l1: Action, l2: Action) -> bool:
        return (l1, l2) in self.prec

    def independent(self, l1: Action, l2: Action) -> bool:
        """l1 and l2 are both in the alphabet with no precedence either way."""
        return (
            l1 in self.alphabet
            and l2 in self.alphabet
            and (l1, l2) not in self.prec
            and (l2, l1) not in self.prec
        )

    @cached_property
    def predecessors(self) -> dict:
        table: dict = {l: set() for l in self.alphabet}
        for l1, l2 in self.prec:
            table[l2].add(l1)
        return {k: frozenset(v) for k, v in table.items()}

    def preds(self, label: Action) -> FrozenSet[Action]:
        """Labels allowed to block ``label``."""
        return self.predecessors.get(label, frozenset())
