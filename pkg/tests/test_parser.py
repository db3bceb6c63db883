"""
Unit tests for the .spt parser and printer.

Tests cover:
- Operator precedence and prefix forms
- Clocks, halting processes, restriction and hiding
- Policies and designated policy selection
- Syntax and well-formedness errors with positions
- Printing back to parseable text
"""

import importlib.util
import random
import warnings

import pytest

import app.services.parser as parser_module
from app.exceptions import ArgumentError, SptSyntaxError, WellFormednessError
from app.models.terms import (
    STOP,
    Bang,
    Defs,
    Hide,
    Ident,
    Par,
    Prefix,
    Restrict,
    Sum,
    bang,
    chan,
    clock,
    cochan,
    prefix,
)
from app.services.parser import parse, parse_process
from app.services.printer import action_set_text, to_text

A, B, C, D = (prefix(chan(n)) for n in "abcd")


class TestExpressions:
    """Test cases for process expressions."""

    def test_choice_binds_tighter_than_parallel(self):
        """a.b + c | d groups as (a.b + c) | d."""
        p, _ = parse_process("a.b + c | d")
        assert p == Par(Sum(prefix(chan("a"), (), B), C), D)

    def test_nary_operators_nest_right(self):
        """Repeated operators build right-nested trees."""
        p, _ = parse_process("a | b | c")
        assert p == Par(A, Par(B, C))
        q, _ = parse_process("a + b + c")
        assert q == Sum(A, Sum(B, C))

    def test_blocking_sets(self):
        """Blocking sets accept a bare label or a braced list."""
        p, _ = parse_process("r:w")
        assert p == prefix(chan("r"), [chan("w")])
        q, _ = parse_process("~a:{~a, b}.0")
        assert q == prefix(cochan("a"), [cochan("a"), chan("b")], STOP)
        e, _ = parse_process("a:{}")
        assert e == A

    def test_bang(self):
        """A leading '!' builds a sequential bang."""
        p, _ = parse_process("!a:a.b")
        assert p == bang(chan("a"), [chan("a")], B)
        assert isinstance(p, Bang)

    def test_prefix_continuation_takes_postfix(self):
        """Restriction after a prefix continuation applies to the continuation."""
        p, _ = parse_process(r"a.(b | ~b)\{b}")
        assert isinstance(p, Prefix)
        assert p.cont == Restrict(Par(B, prefix(cochan("b"))), frozenset({"b"}))

    def test_restricted_parallel(self):
        """A parenthesised composition can be restricted as a whole."""
        p, _ = parse_process(r"(a | b | ~a) \ {a, b}")
        assert isinstance(p, Restrict)
        assert p.names == {"a", "b"}
        assert isinstance(p.body, Par)

    def test_clock_prefix_and_hiding(self):
        """Declared clock names parse as clocks and can be hidden."""
        defs = Defs.of({}, ["s"])
        p, _ = parse_process("(s.a) / {s}", defs)
        assert p == Hide(prefix(clock("s"), (), A), frozenset({"s"}))

    def test_comments_ignored(self):
        """'#' comments run to the end of the line."""
        spt = parse("# header\nmain := a; # trailing\n")
        assert spt.main == A


class TestFiles:
    """Test cases for whole source files."""

    def test_definitions_become_identifiers(self):
        """A defined name used alone is an identifier reference."""
        spt = parse("S := w + r:w;\nmain := S | ~r | ~w;")
        assert spt.main == Par(Ident("S"), Par(prefix(cochan("r")), prefix(cochan("w"))))
        assert spt.defs.lookup("S") == Sum(prefix(chan("w")), prefix(chan("r"), [chan("w")]))

    def test_halting_over_all_clocks(self):
        """'1' is installed as a recursive clock loop."""
        spt = parse("clock sigma;\nmain := sigma.1;")
        one = Ident("ONE_sigma")
        assert spt.main == prefix(clock("sigma"), (), one)
        assert spt.defs.lookup("ONE_sigma") == prefix(clock("sigma"), (), one)
        assert spt.defs.clock_decls == {"sigma"}

    def test_halting_over_some_clocks(self):
        """'1{c}' halts over the named clocks only."""
        spt = parse("clock s, t;\nmain := 1{t};")
        assert spt.main == Ident("ONE_t")
        assert spt.defs.lookup("ONE_t") == prefix(clock("t"), (), Ident("ONE_t"))

    def test_policy_block(self):
        """Two-label entries add precedences; one-label entries extend the alphabet."""
        spt = parse("policy pi { w -> r, ~w, ~r };\nmain := w;")
        pi = spt.policy
        assert pi.name == "pi"
        assert pi.alphabet == {chan("w"), chan("r"), cochan("w"), cochan("r")}
        assert pi.prec == {(chan("w"), chan("r"))}

    def test_designated_policy(self):
        """'pi' wins; otherwise the first block is used."""
        first = parse("policy mem { a };\npolicy prg { b };\nmain := a;")
        assert first.policy.name == "mem"
        assert first.select_policy("prg").name == "prg"
        named = parse("policy mem { a };\npolicy pi { b };\nmain := a;")
        assert named.policy.name == "pi"
        assert parse("main := a;").policy is None

    def test_grammar_builds_without_deprecations(self):
        """Building the grammar and parsing lists raise no deprecation warning."""
        spec = importlib.util.spec_from_file_location("spt_grammar_copy", parser_module.__file__)
        fresh = importlib.util.module_from_spec(spec)
        with warnings.catch_warnings():
            warnings.simplefilter("error", DeprecationWarning)
            spec.loader.exec_module(fresh)
            spt = fresh.parse("clock s, t;\npolicy pi { a -> b, ~a };\nmain := a:{b, ~b}.s;")
        assert spt.defs.clock_decls == {"s", "t"}
        assert spt.policy.prec == {(chan("a"), chan("b"))}
        assert spt.main == prefix(chan("a"), [chan("b"), cochan("b")], prefix(clock("s")))

    def test_unknown_policy_name(self):
        """Selecting a missing policy is an argument error."""
        with pytest.raises(ArgumentError):
            parse("policy pi { a };\nmain := a;").select_policy("nope")

    def test_clock_labels_in_policy(self):
        """Policy labels resolve clocks like process labels do."""
        spt = parse("clock sigma;\npolicy pi { a -> sigma };\nmain := a;")
        assert spt.policy.precedes(chan("a"), clock("sigma"))

    def test_unguarded_recursion_warns(self):
        """Unguarded definitions parse but are reported."""
        spt = parse("X := X | a;\nmain := X;")
        assert any("X" in w for w in spt.warnings), f"Expected a warning about X, got {spt.warnings}"


class TestErrors:
    """Test cases for rejected sources."""

    def test_missing_semicolon(self):
        """Unterminated declarations are syntax errors."""
        with pytest.raises(SptSyntaxError):
            parse("main := a")

    def test_error_position(self):
        """Syntax errors carry the line of the offending declaration."""
        with pytest.raises(SptSyntaxError) as exc:
            parse("clock s;\nmain := a +;\n")
        assert exc.value.line == 2, f"Expected line 2, got {exc.value.line}"

    def test_missing_main(self):
        """A file needs a main process."""
        with pytest.raises(SptSyntaxError):
            parse("A := a;")

    def test_duplicate_main(self):
        """Only one main process is allowed."""
        with pytest.raises(SptSyntaxError):
            parse("main := a;\nmain := b;")

    def test_duplicate_definition(self):
        """Redefining an identifier points at the second definition."""
        with pytest.raises(SptSyntaxError) as exc:
            parse("A := a;\nA := b;\nmain := A;")
        assert exc.value.line == 2

    def test_identifier_as_action(self):
        """A defined name cannot be used as a label."""
        with pytest.raises(SptSyntaxError):
            parse("A := a;\nmain := A.b;")

    def test_co_clock(self):
        """Clocks have no co-name."""
        with pytest.raises(SptSyntaxError):
            parse("clock s;\nmain := ~s;")

    def test_halting_without_clocks(self):
        """'1' needs at least one declared clock."""
        with pytest.raises(SptSyntaxError):
            parse("main := 1;")

    def test_restricting_a_clock(self):
        """Clocks cannot be restricted."""
        with pytest.raises(WellFormednessError):
            parse("clock s;\nmain := (s.a) \\ {s};")

    def test_hiding_a_channel(self):
        """Only clocks can be hidden."""
        with pytest.raises(WellFormednessError):
            parse("main := a / {a};")

    def test_bang_on_clock(self):
        """Sequential bang needs a channel."""
        with pytest.raises(WellFormednessError):
            parse("clock s;\nmain := !s;")


def _random_process(rng, depth):
    labels = [chan("a"), cochan("a"), chan("b"), cochan("b")]
    if depth == 0:
        return rng.choice([STOP, prefix(rng.choice(labels))])
    kind = rng.randrange(6)
    if kind == 0:
        blocking = rng.sample(labels, rng.randrange(3))
        return prefix(rng.choice(labels), blocking, _random_process(rng, depth - 1))
    if kind == 1:
        return bang(rng.choice(labels), (), _random_process(rng, depth - 1))
    if kind == 2:
        return Sum(_random_process(rng, depth - 1), _random_process(rng, depth - 1))
    if kind == 3:
        return Par(_random_process(rng, depth - 1), _random_process(rng, depth - 1))
    if kind == 4:
        return Restrict(_random_process(rng, depth - 1), frozenset(rng.sample(["a", "b"], 1)))
    return prefix(rng.choice(labels), (), _random_process(rng, depth - 1))


class TestPrinter:
    """Test cases for the printer."""

    def test_action_sets_print_sorted(self):
        """Label sets print in canonical order."""
        assert action_set_text({cochan("a"), chan("b"), clock("s")}) == "{s,b,~a}"

    def test_known_texts(self):
        """Printing uses the minimal parentheses."""
        assert to_text(Par(Sum(A, B), C)) == "a + b | c"
        assert to_text(Sum(A, Par(B, C))) == "a + (b | c)"
        assert to_text(prefix(chan("a"), [chan("a")], Par(B, C))) == "a:{a}.(b | c)"
        assert to_text(Restrict(Par(A, prefix(cochan("a"))), frozenset({"a"}))) == "(a | ~a)\\{a}"
        assert to_text(STOP) == "0"

    def test_printed_text_parses_back(self):
        """Random trees survive a print and parse unchanged."""
        rng = random.Random(20240601)
        for _ in range(200):
            p = _random_process(rng, 4)
            text = to_text(p)
            q, _ = parse_process(text)
            assert q == p, f"{text} parsed back differently"

    def test_halting_prints_with_clocks(self):
        """Halting identifiers print as '1{...}' and parse back."""
        spt = parse("clock s;\nmain := s.1;")
        text = to_text(spt.main)
        assert text == "s.1{s}"
        assert parse_process(text, spt.defs)[0] == spt.main
