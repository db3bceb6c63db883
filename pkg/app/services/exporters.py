"""
Exporters for explored state graphs: graphviz DOT, JSON and plain text.
"""
from typing import Iterator

from app.models.lts import Edge, Lts, Transition
from app.models.terms import sorted_actions
from app.schemas.report import EdgeOut, LtsExport, StateOut
from app.services.printer import action_set_text, to_text


def _gvquote(s: str) -> str:
    return '"{}"'.format(s.replace("\\", "\\\\").replace('"', r"\""))


def caction_label(t: Transition) -> str:
    """Edge label ``alpha:H`` with the context suppressed."""
    if t.blocking:
        return f"{t.action}:{action_set_text(t.blocking)}"
    return str(t.action)


def edge_out(edge: Edge) -> EdgeOut:
    t = edge.transition
    return EdgeOut(
        src=edge.src,
        dst=edge.dst,
        action=str(t.action),
        blocking=[str(a) for a in sorted_actions(t.blocking)],
        context=to_text(t.context),
        sync=str(t.sync) if t.sync is not None else None,
    )


def to_export(lts: Lts) -> LtsExport:
    return LtsExport(
        states=[StateOut(id=i, term=to_text(s)) for i, s in enumerate(lts.states)],
        edges=[edge_out(e) for e in lts.edges],
        root=lts.root,
        bound_hit=lts.bound_hit,
        strategy=lts.strategy.value,
    )


def to_json(lts: Lts) -> str:
    """JSON document of the state graph with full c-actions."""
    return to_export(lts).model_dump_json(indent=2) + "\n"


def graphviz(lts: Lts) -> Iterator[str]:
    """
    Produce a graphviz dot file as an iterable of strings.

    Use like so::

        with open('something.dot', 'w') as f:
            f.writelines(graphviz(lts))
    """
    yield "digraph {\n"
    yield "pack=true;\n"
    for sid, state in enumerate(lts.states):
        shape = "doubleoctagon" if sid == lts.root else "octagon"
        yield f"  s{sid} [shape=\"{shape}\" label={_gvquote(to_text(state))}];\n"
    for edge in lts.edges:
        yield f"  s{edge.src} -> s{edge.dst} [label={_gvquote(caction_label(edge.transition))}];\n"
    for edge in lts.undecided:
        yield (
            f"  s{edge.src} -> s{edge.dst} "
            f"[label={_gvquote(caction_label(edge.transition))} style=dashed color=grey];\n"
        )
    yield "}\n"


def to_dot(lts: Lts) -> str:
    return "".join(graphviz(lts))


def to_text_summary(lts: Lts) -> str:
    """Human-readable listing of states and edges."""
    lines = [f"strategy: {lts.strategy.value}", f"states: {len(lts.states)}", f"edges: {len(lts.edges)}"]
    if lts.bound_hit:
        lines.append("bound_hit: true")
    for sid, state in enumerate(lts.states):
        marker = "*" if sid == lts.root else " "
        lines.append(f"{marker}{sid}: {to_text(state)}")
    for edge in lts.edges:
        t = edge.transition
        lines.append(f"  {edge.src} --{caction_label(t)}[{to_text(t.context)}]--> {edge.dst}")
    return "\n".join(lines) + "\n"
