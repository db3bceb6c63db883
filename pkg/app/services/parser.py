"""
Parser for .spt source files.

Syntax:
    clock sigma;                      clock declarations
    S := w + r:{w};                   process definitions
    policy pi { w -> r, r };          precedence policies (bare labels only extend the alphabet)
    main := (S | ~r | ~w) \\ {r, w};   the designated main process

    "+" binds tighter than "|"; prefix, restriction and hiding bind tighter
    than both. Co-names carry a leading "~"; a name is a clock when it is
    declared as one and a process identifier when it is defined. "1" is the
    halting process over every declared clock and "1{c}" over the clocks c.
    "#" starts a comment.

The grammar produces a light syntax tree; a second pass resolves names
against the definitions and clock declarations and builds the process terms.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

import pyparsing as pp

from app.exceptions import ArgumentError, SptSyntaxError, WellFormednessError
from app.models.policy import Policy
from app.models.terms import (
    STOP,
    Action,
    Defs,
    Hide,
    Ident,
    Par,
    Process,
    Restrict,
    Sum,
    bang,
    chan,
    clock,
    cochan,
    halting_name,
    prefix,
)
from app.services.classifier import halting, validate

logger = logging.getLogger(__name__)

pp.ParserElement.enable_packrat()


# Syntax tree


@dataclass(frozen=True)
class _Label:
    co: bool
    name: str
    line: int
    col: int


@dataclass(frozen=True)
class _Set:
    labels: Tuple[_Label, ...]


@dataclass(frozen=True)
class _Prefix:
    bang: bool
    label: _Label
    blocking: Optional[_Set]
    cont: Optional[object]


@dataclass(frozen=True)
class _Stop:
    pass


@dataclass(frozen=True)
class _One:
    clocks: Optional[Tuple[str, ...]]
    line: int
    col: int


@dataclass(frozen=True)
class _Binary:
    kind: str
    items: Tuple[object, ...]


@dataclass(frozen=True)
class _Postfix:
    kind: str
    body: object
    names: Tuple[str, ...]


# Grammar

LBRACE, RBRACE, LPAR, RPAR, SEMI = map(pp.Suppress, "{}();")
ASSIGN = pp.Suppress(":=")
ARROW = pp.Suppress("->")

KEYWORD = pp.Keyword("clock") | pp.Keyword("policy") | pp.Keyword("main")
NAME = pp.Combine(~KEYWORD + pp.Word(pp.alphas + "_", pp.alphanums + "_"))
NAMES = pp.Group(pp.Opt(pp.DelimitedList(NAME)))


def _label_action(s, loc, toks):
    text = toks[0]
    co = text.startswith("~")
    return _Label(co, text[1:] if co else text, pp.lineno(loc, s), pp.col(loc, s))


def _prefix_action(toks):
    items = list(toks)
    is_bang = items[0] == "!"
    if is_bang:
        items.pop(0)
    label = items.pop(0)
    blocking = cont = None
    while items:
        sym = items.pop(0)
        if sym == ":":
            blocking = items.pop(0)
        elif sym == ".":
            cont = items.pop(0)
    return _Prefix(is_bang, label, blocking, cont)


def _one_action(s, loc, toks):
    clocks = tuple(toks[1]) if len(toks) > 1 else None
    return _One(clocks, pp.lineno(loc, s), pp.col(loc, s))


def _postfix_action(toks):
    items = list(toks)
    node = items.pop(0)
    while items:
        op = items.pop(0)
        names = tuple(items.pop(0))
        node = _Postfix("restrict" if op == "\\" else "hide", node, names)
    return node


def _binary_action(kind):
    def action(toks):
        items = tuple(toks)
        return items[0] if len(items) == 1 else _Binary(kind, items)

    return action


LABEL = pp.Combine(pp.Opt("~") + NAME).set_parse_action(_label_action)
BLOCKSET = (pp.Group(LBRACE + pp.Opt(pp.DelimitedList(LABEL)) + RBRACE) | pp.Group(LABEL)).set_parse_action(
    lambda toks: _Set(tuple(toks[0]))
)

proc = pp.Forward()
unary = pp.Forward()

stop = pp.Literal("0").set_parse_action(lambda: _Stop())
one = (pp.Literal("1") + pp.Opt(LBRACE + NAMES + RBRACE)).set_parse_action(_one_action)
prefix_expr = (
    pp.Opt(pp.Literal("!")) + LABEL + pp.Opt(pp.Literal(":") + BLOCKSET) + pp.Opt(pp.Literal(".") + unary)
).set_parse_action(_prefix_action)
atom = stop | one | prefix_expr | (LPAR + proc + RPAR)
unary <<= (atom + pp.ZeroOrMore((pp.Literal("\\") | pp.Literal("/")) + LBRACE + NAMES + RBRACE)).set_parse_action(
    _postfix_action
)
choice = (unary + pp.ZeroOrMore(pp.Suppress("+") + unary)).set_parse_action(_binary_action("sum"))
proc <<= (choice + pp.ZeroOrMore(pp.Suppress("|") + choice)).set_parse_action(_binary_action("par"))

POLICY_ENTRY = pp.Group(LABEL + pp.Opt(ARROW + LABEL))

clock_decl = pp.Group(pp.Keyword("clock") + pp.DelimitedList(NAME) + SEMI)
policy_decl = pp.Group(
    pp.Keyword("policy") + NAME + LBRACE + pp.Group(pp.Opt(pp.DelimitedList(POLICY_ENTRY))) + RBRACE + pp.Opt(SEMI)
)
main_decl = pp.Group(pp.Keyword("main") + ASSIGN + proc + SEMI)
def_decl = pp.Group(pp.Empty().set_parse_action(lambda s, loc, toks: [loc]) + NAME + ASSIGN + proc + SEMI)

spt_file = pp.ZeroOrMore(clock_decl | policy_decl | main_decl | def_decl) + pp.StringEnd()
spt_file.ignore(pp.python_style_comment)
proc_only = proc + pp.StringEnd()
proc_only.ignore(pp.python_style_comment)


# Name resolution


class _Builder:
    def __init__(self, names: Set[str], clocks: FrozenSet[str]):
        self.names = names
        self.clocks = clocks
        self.halting: Set[FrozenSet[str]] = set()

    def action(self, lab: _Label) -> Action:
        if lab.name in self.clocks:
            if lab.co:
                raise SptSyntaxError(f"clock {lab.name} has no co-name", lab.line, lab.col)
            return clock(lab.name)
        return cochan(lab.name) if lab.co else chan(lab.name)

    def build(self, node) -> Process:
        if isinstance(node, _Stop):
            return STOP
        if isinstance(node, _One):
            return self._one(node)
        if isinstance(node, _Prefix):
            return self._prefix(node)
        if isinstance(node, _Binary):
            items = [self.build(n) for n in node.items]
            kind = Sum if node.kind == "sum" else Par
            result = items[-1]
            for p in reversed(items[:-1]):
                result = kind(p, result)
            return result
        if isinstance(node, _Postfix):
            body = self.build(node.body)
            names = frozenset(node.names)
            if node.kind == "restrict":
                clash = names & self.clocks
                if clash:
                    raise WellFormednessError(f"clock in restriction set: {sorted(clash)}")
                return Restrict(body, names)
            stray = names - self.clocks
            if stray:
                raise WellFormednessError(f"hiding set names non-clocks: {sorted(stray)}")
            return Hide(body, names)
        raise TypeError(f"unexpected syntax node: {node!r}")

    def _one(self, node: _One) -> Process:
        clocks = frozenset(node.clocks) if node.clocks is not None else self.clocks
        if not clocks:
            raise SptSyntaxError("halting process needs a declared clock", node.line, node.col)
        stray = clocks - self.clocks
        if stray:
            raise SptSyntaxError(f"undeclared clock in halting process: {sorted(stray)}", node.line, node.col)
        self.halting.add(clocks)
        return Ident(halting_name(clocks))

    def _prefix(self, node: _Prefix) -> Process:
        lab = node.label
        plain = not (node.bang or lab.co or node.blocking is not None or node.cont is not None)
        if lab.name in self.names:
            if plain:
                return Ident(lab.name)
            raise SptSyntaxError(f"identifier {lab.name} used as an action", lab.line, lab.col)
        action = self.action(lab)
        blocking = [self.action(b) for b in node.blocking.labels] if node.blocking else []
        cont = self.build(node.cont) if node.cont is not None else STOP
        if node.bang:
            if not action.is_channel:
                raise WellFormednessError(f"sequential bang on clock {action}")
            return bang(action, blocking, cont)
        return prefix(action, blocking, cont)

    def install_halting(self, defs: Defs) -> Defs:
        for clocks in sorted(self.halting, key=sorted):
            _, defs = halting(clocks, defs)
        return defs


def _syntax_error(exc: pp.ParseBaseException) -> SptSyntaxError:
    return SptSyntaxError(exc.msg, exc.lineno, exc.col)


@dataclass
class SptFile:
    """A parsed source file."""

    defs: Defs
    main: Process
    policies: Dict[str, Policy] = field(default_factory=dict)
    policy_order: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    @property
    def policy(self) -> Optional[Policy]:
        """The designated policy: the one named "pi" if present, else the first."""
        if "pi" in self.policies:
            return self.policies["pi"]
        if self.policy_order:
            return self.policies[self.policy_order[0]]
        return None

    def select_policy(self, name: Optional[str]) -> Optional[Policy]:
        if name is None:
            return self.policy
        try:
            return self.policies[name]
        except KeyError:
            raise ArgumentError(f"no policy named {name}") from None


def parse(text: str) -> SptFile:
    """
    Parse .spt source text.

    Args:
        text: Source text

    Returns:
        SptFile with definitions, main process and policies

    Raises:
        SptSyntaxError: on lexical or syntactic errors, with line and column
        WellFormednessError: on clock/channel misuse
    """
    try:
        decls = spt_file.parse_string(text, parse_all=True)
    except pp.ParseBaseException as exc:
        raise _syntax_error(exc) from None

    clocks: Set[str] = set()
    bodies: Dict[str, object] = {}
    policy_nodes: List[Tuple[str, object]] = []
    main_node = None
    for decl in decls:
        head = decl[0]
        if head == "clock":
            clocks.update(decl[1:])
        elif head == "policy":
            policy_nodes.append((decl[1], decl[2]))
        elif head == "main":
            if main_node is not None:
                raise SptSyntaxError("main process defined twice", 0, 0)
            main_node = decl[1]
        else:
            loc, name, body = decl[0], decl[1], decl[2]
            if name in bodies:
                raise SptSyntaxError(f"identifier {name} defined twice", pp.lineno(loc, text), pp.col(loc, text))
            bodies[name] = body
    if main_node is None:
        raise SptSyntaxError("no main process", 0, 0)

    builder = _Builder(set(bodies), frozenset(clocks))
    defs = Defs.of({name: builder.build(body) for name, body in bodies.items()}, clocks)
    main = builder.build(main_node)
    defs = builder.install_halting(defs)

    result = SptFile(defs=defs, main=main)
    for name, entries in policy_nodes:
        if name in result.policies:
            raise SptSyntaxError(f"policy {name} defined twice", 0, 0)
        alphabet, prec = set(), set()
        for entry in entries:
            labels = [builder.action(lab) for lab in entry]
            alphabet.update(labels)
            if len(labels) == 2:
                prec.add((labels[0], labels[1]))
        result.policies[name] = Policy.of(alphabet, prec, name)
        result.policy_order.append(name)

    result.warnings = validate(main, defs)
    logger.debug(f"Parsed {len(bodies)} definitions, {len(clocks)} clocks, {len(policy_nodes)} policies")
    return result


def parse_process(text: str, defs: Optional[Defs] = None) -> Tuple[Process, Defs]:
    """
    Parse a single process expression against an existing environment.

    Args:
        text: Process expression
        defs: Definitions and clocks the expression may refer to

    Returns:
        The process and the environment, extended with any halting processes
    """
    defs = defs or Defs()
    try:
        node = proc_only.parse_string(text, parse_all=True)[0]
    except pp.ParseBaseException as exc:
        raise _syntax_error(exc) from None
    builder = _Builder(set(defs.names()), defs.clock_decls)
    p = builder.build(node)
    return p, builder.install_halting(defs)
