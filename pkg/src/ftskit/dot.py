"""Graphviz export for suites and test cases (sorted, so output is stable)."""
from __future__ import annotations

from .suite import Inner, Verdict


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def suite_to_dot(suite, name: str = "suite") -> str:
    """Render anything with ``root`` and an ``edges`` map keyed by inner states."""
    edges = suite.edges
    inner = sorted(edges, key=lambda st: (len(st.trace), st.trace))
    ids = {st: f"n{i}" for i, st in enumerate(inner)}
    lines = [f"digraph {name} {{", "  rankdir=TB;", "  node [shape=box, style=rounded];"]
    for st in inner:
        lines.append(f"  {ids[st]} [label={_quote(st.label())}];")
    lines.append('  pass [label="pass", shape=plaintext];')
    lines.append('  fail [label="fail", shape=plaintext];')
    lines.append(f'  start [shape=point]; start -> {ids[suite.root]};')
    for st in inner:
        grouped: dict[str, list[str]] = {}
        for a, targets in sorted(edges[st].items()):
            for t in targets:
                if isinstance(t, Verdict):
                    key = t.value
                elif t in ids:
                    key = ids[t]
                else:
                    continue
                grouped.setdefault(key, []).append(a)
        for key in sorted(grouped, key=lambda k: (k in ("pass", "fail"), k)):
            lines.append(f"  {ids[st]} -> {key} [label={_quote(','.join(grouped[key]))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def format_test_case(case, inputs) -> str:
    """Indented text rendering of one test case."""
    out = []

    def walk(st: Inner, indent: int) -> None:
        for a, t in sorted(case.routes.get(st, {}).items()):
            mark = "?" if a in inputs else ""
            if isinstance(t, Verdict):
                out.append("  " * indent + f"{mark}{a} -> {t.value}")
            else:
                out.append("  " * indent + f"{mark}{a} -> {t.label()}")
                walk(t, indent + 1)

    out.append(case.root.label())
    walk(case.root, 1)
    return "\n".join(out) + "\n"
