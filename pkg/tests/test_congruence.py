"""
Unit tests for structural congruence.

Tests cover:
- Choice and parallel normal forms
- Restriction scope laws
- Hiding normal forms and halting absorption
- Equivalence with bounded identifier unfolding
"""

from app.models.terms import STOP, Defs, Hide, Ident, Par, Restrict, Sum, chan, clock, cochan, prefix
from app.services.classifier import halting
from app.services.congruence import canon, canonicalize, equiv, mk_par, unfold
from app.services.engine import Engine
from app.services.parser import parse_process
from app.services.printer import to_text

EMPTY = Defs()
A, B, C = (prefix(chan(n)) for n in "abc")
CO_A = prefix(cochan("a"))


class TestNormalForms:
    """Test cases for choice and parallel composition."""

    def test_inaction_is_a_unit(self):
        """0 disappears from choices and compositions."""
        assert canon(Par(A, STOP), EMPTY) == A
        assert canon(Sum(STOP, A), EMPTY) == A
        assert canon(Par(STOP, STOP), EMPTY) == STOP

    def test_commutativity_and_associativity(self):
        """Operand order and grouping do not matter."""
        assert canon(Sum(A, B), EMPTY) == canon(Sum(B, A), EMPTY)
        assert canon(Par(A, Par(B, C)), EMPTY) == canon(Par(Par(C, B), A), EMPTY)

    def test_choice_is_idempotent(self):
        """a + a is a."""
        assert canon(Sum(A, A), EMPTY) == A

    def test_parallel_is_not_idempotent(self):
        """a | a keeps both copies."""
        assert canon(Par(A, A), EMPTY) == Par(A, A)

    def test_canon_is_idempotent(self):
        """Normalising a normal form changes nothing."""
        p, _ = parse_process("(b + a) | (c.0 | 0) | a:{a}.(b + b)")
        once = canon(p, EMPTY)
        assert canon(once, EMPTY) == once

    def test_canonicalize_carries_text(self):
        """The canonical form prints its own term."""
        form = canonicalize(Sum(B, A), EMPTY)
        assert form.text == to_text(form.term)
        assert form == canonicalize(Sum(A, B), EMPTY)


class TestRestriction:
    """Test cases for the scope laws."""

    def test_unused_name_dropped(self):
        """Restricting a name the body never uses is a no-op."""
        assert canon(Restrict(A, frozenset({"z"})), EMPTY) == A

    def test_restricted_prefix_is_dead(self):
        """A prefix on a restricted name can never fire."""
        assert canon(Restrict(A, frozenset({"a"})), EMPTY) == STOP
        assert canon(Restrict(Sum(A, B), frozenset({"a"})), EMPTY) == B

    def test_scope_narrows_to_users(self):
        """Components that do not use the name move out of the scope."""
        assert canon(Restrict(Par(A, B), frozenset({"a"})), EMPTY) == B

    def test_communicating_components_stay_together(self):
        """Partners on a restricted name remain under one restriction."""
        result = canon(Restrict(Par(A, Par(CO_A, B)), frozenset({"a"})), EMPTY)
        assert isinstance(result, Par)
        restricted = [c for c in (result.left, result.right) if isinstance(c, Restrict)]
        assert len(restricted) == 1
        assert restricted[0].names == {"a"}
        assert equiv(restricted[0].body, Par(A, CO_A), EMPTY)

    def test_nested_scopes_merge(self):
        """Nested restrictions over the same component merge."""
        body = Par(prefix(chan("a"), (), prefix(chan("b"))), prefix(cochan("a"), (), prefix(cochan("b"))))
        nested = Restrict(Restrict(body, frozenset({"a"})), frozenset({"b"}))
        flat = Restrict(body, frozenset({"a", "b"}))
        assert canon(nested, EMPTY) == canon(flat, EMPTY)


class TestHiding:
    """Test cases for hiding and halting processes."""

    def test_hiding_nothing(self):
        """Hiding over 0 is 0."""
        assert canon(Hide(STOP, frozenset({"s"})), Defs.of({}, ["s"])) == STOP

    def test_nested_hiding_merges(self):
        """Hiding sets accumulate."""
        defs = Defs.of({}, ["s", "t"])
        p = prefix(clock("s"), (), prefix(clock("t")))
        nested = Hide(Hide(p, frozenset({"s"})), frozenset({"t"}))
        assert canon(nested, defs) == Hide(p, frozenset({"s", "t"}))

    def test_halting_processes_stay_apart(self):
        """By default two halting processes are not merged."""
        one, defs = halting({"s"}, Defs.of({}, ["s"]))
        assert canon(Par(one, one), defs) == Par(one, one)
        assert not equiv(Par(one, one), one, defs)

    def test_halting_absorption_when_enabled(self):
        """An engine with absorption on collapses equal halting processes."""
        one, defs = halting({"s"}, Defs.of({}, ["s"]))
        eng = Engine(defs=defs, halting_absorption=True)
        assert mk_par(eng, [one, one]) == one
        assert mk_par(eng, [one, A]) == mk_par(Engine(defs=defs), [one, A])


class TestEquiv:
    """Test cases for congruence decisions."""

    def test_identifier_unfolding(self):
        """An identifier equals its own body."""
        body = prefix(chan("a"), (), Ident("A"))
        defs = Defs.of({"A": body})
        assert equiv(Ident("A"), body, defs)
        assert equiv(Par(Ident("A"), B), Par(B, body), defs)

    def test_distinct_processes(self):
        """Different behaviours are not congruent."""
        assert not equiv(A, B, EMPTY)
        assert not equiv(Par(A, A), A, EMPTY)

    def test_unfold_replaces_heads_only(self):
        """Guarded identifiers stay symbolic."""
        body = prefix(chan("a"), (), Ident("A"))
        defs = Defs.of({"A": body})
        assert unfold(Par(Ident("A"), B), defs) == Par(body, B)
        assert unfold(body, defs) == body
