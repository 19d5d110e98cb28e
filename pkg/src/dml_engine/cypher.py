"""Cypher text emission for the graph, plus a lexical linter.

The export is plain text only — nothing here talks to a database. One CREATE
statement per node, one MATCH/CREATE statement per relationship, one
statement per line, LF endings, deterministic order (nodes by kind then
name, then edges by type then endpoint names). Gates are emitted with their
generated ``<parent>_<AND|OR>`` names since every node needs one.

``lint_cypher`` performs the deterministic analog of a syntax review gate:
balanced brackets, closed strings, known labels and relationship types.
"""

from __future__ import annotations

from .graph import EdgeKind, ModelGraph, NodeKind

NODE_LABELS = (
    NodeKind.GOAL,
    NodeKind.FUNCTION,
    NodeKind.SUBFUNCTION,
    NodeKind.COMPONENT,
    NodeKind.SUCCESS_CONDITION,
    NodeKind.AND_GATE,
    NodeKind.OR_GATE,
)
RELATIONSHIP_TYPES = (
    EdgeKind.ACHIEVED_BY,
    EdgeKind.DEPENDS_ON,
    EdgeKind.REQUIRES,
    EdgeKind.SUCCESS_THROUGH,
)

_KIND_ORDER = {kind: i for i, kind in enumerate(NODE_LABELS)}
_EDGE_ORDER = {kind: i for i, kind in enumerate(RELATIONSHIP_TYPES)}


def _escape(name: str) -> str:
    # backslash first; newlines become escapes so statements stay one per line
    return (
        name.replace("\\", "\\\\")
        .replace('"', '\\"')
        .replace("\n", "\\n")
        .replace("\r", "\\r")
    )


def export_cypher(graph: ModelGraph) -> str:
    """Deterministic Cypher text; line count equals node count + edge count."""
    lines: list[str] = []

    nodes = sorted(
        graph.nodes, key=lambda n: (_KIND_ORDER[n.kind], graph.display_name(n.id))
    )
    for node in nodes:
        name = _escape(graph.display_name(node.id))
        lines.append(f'CREATE (:{node.kind.value} {{name: "{name}"}});')

    def edge_key(edge):
        return (
            _EDGE_ORDER[edge.kind],
            graph.display_name(edge.source),
            graph.display_name(edge.target),
        )

    for edge in sorted(graph.edges, key=edge_key):
        src = graph.node(edge.source)
        dst = graph.node(edge.target)
        a = f'(a:{src.kind.value} {{name: "{_escape(graph.display_name(src.id))}"}})'
        b = f'(b:{dst.kind.value} {{name: "{_escape(graph.display_name(dst.id))}"}})'
        lines.append(f"MATCH {a}, {b} CREATE (a)-[:{edge.kind.value}]->(b);")

    return "\n".join(lines) + "\n"


_PAIRS = {")": "(", "]": "[", "}": "{"}
_NODE_LABEL_SET = {kind.value for kind in NODE_LABELS}
_REL_TYPE_SET = {kind.value for kind in RELATIONSHIP_TYPES}


def lint_cypher(text: str) -> list[str]:
    """Lexical checks over an export; returns problems, empty when clean."""
    problems: list[str] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            problems.append(f"line {lineno}: blank line")
            continue
        if not (line.startswith("CREATE (") or line.startswith("MATCH (")):
            problems.append(f"line {lineno}: statement must start with CREATE or MATCH")
        if not line.endswith(";"):
            problems.append(f"line {lineno}: statement not terminated by ';'")

        stack: list[str] = []
        in_string = False
        escaped = False
        labels: list[str] = []
        i = 0
        while i < len(line):
            ch = line[i]
            if in_string:
                if escaped:
                    escaped = False
                elif ch == "\\":
                    escaped = True
                elif ch == '"':
                    in_string = False
            else:
                if ch == '"':
                    in_string = True
                elif ch in "([{":
                    stack.append(ch)
                elif ch in ")]}":
                    if not stack or stack[-1] != _PAIRS[ch]:
                        problems.append(f"line {lineno}: unbalanced {ch!r}")
                        stack = []
                        break
                    stack.pop()
                elif ch == ":" and stack and stack[-1] in "([":
                    j = i + 1
                    while j < len(line) and (line[j].isalnum() or line[j] == "_"):
                        j += 1
                    labels.append(line[i + 1 : j])
                    i = j - 1
            i += 1
        if in_string:
            problems.append(f"line {lineno}: unterminated string")
        if stack:
            problems.append(f"line {lineno}: unclosed {stack[-1]!r}")
        for label in labels:
            if label not in _NODE_LABEL_SET and label not in _REL_TYPE_SET:
                problems.append(f"line {lineno}: unknown label {label!r}")
        if 'name: "' not in line:
            problems.append(f"line {lineno}: node without a quoted name property")
    return problems
