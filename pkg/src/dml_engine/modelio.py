"""Hierarchical JSON model format: parsing, validation, lowering, serialization.

The document mirrors the graph one tier per nesting level:

    {"Goal": {"name": ..., "achieved_by": {"gate": "AND_gate", "functions": [
        {"name": ..., "depends_on": {"gate": ..., "subfunctions": [
            {"name": ..., "requires": {"gate": ..., "components": [
                {"name": ..., "states": [{"name": ..., "prior": ...}, ...],
                 "success_through": {"gate": ..., "success_conditions": [
                     {"name": ..., "given_state": {state: prob, ...}}]}},
                {"ref": "Some Component"},
                {"name": ..., "direct_p_success": 0.99}]}}]}}]}}}

Parsing is strict about syntax: unknown keys, wrong value types and invalid
gate labels are rejected outright. Tier ordering, required fields, gate
presence, probability sanity and reference resolution are checked by
``validate_structure``, which reports every problem with a path into the
document instead of stopping at the first.

``"N/A"`` placeholder values are dropped at parse time with an ``NA_DROPPED``
warning; they never become nodes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import ParseError, ValidationFailed
from .graph import (
    EDGE_FOR_CHILD_TIER,
    EDGE_FOR_PARENT_TIER,
    ComponentData,
    GraphBuilder,
    ModelGraph,
    NodeId,
    NodeKind,
)

WRAPPER_FOR_TIER = {0: "achieved_by", 1: "depends_on", 2: "requires", 3: "success_through"}
LIST_FOR_TIER = {0: "functions", 1: "subfunctions", 2: "components", 3: "success_conditions"}
KIND_FOR_TIER = {
    0: NodeKind.GOAL,
    1: NodeKind.FUNCTION,
    2: NodeKind.SUBFUNCTION,
    3: NodeKind.COMPONENT,
    4: NodeKind.SUCCESS_CONDITION,
}
TIER_LABEL = {0: "goal", 1: "function", 2: "subfunction", 3: "component", 4: "success condition"}

WRAPPER_KEYS = frozenset(WRAPPER_FOR_TIER.values())
LIST_KEYS = frozenset(LIST_FOR_TIER.values())
ENTRY_KEYS = WRAPPER_KEYS | {"name", "ref", "states", "given_state", "direct_p_success"}
GATE_VALUES = ("AND_gate", "OR_gate")

GATE_KIND = {"AND_gate": NodeKind.AND_GATE, "OR_gate": NodeKind.OR_GATE}


def _is_na(value) -> bool:
    return isinstance(value, str) and value.strip() == "N/A"


@dataclass(frozen=True)
class Issue:
    code: str
    path: str
    message: str

    def as_dict(self) -> dict:
        return {"code": self.code, "path": self.path, "message": self.message}


@dataclass
class DocEntry:
    """One node entry of the document, any tier; fields not present are None."""

    path: str
    name: str | None = None
    ref: str | None = None
    wrapper: str | None = None
    wrapper_path: str | None = None
    gate: str | None = None
    list_key: str | None = None
    children: list["DocEntry"] = field(default_factory=list)
    states: list[tuple[str, float]] | None = None
    given_state: dict[str, float] | None = None
    direct_p_success: float | None = None


@dataclass
class HierarchicalModel:
    goal: DocEntry
    warnings: list[Issue] = field(default_factory=list)


@dataclass
class ValidationReport:
    verdict: str  # "Pass" | "Fail"
    issues: list[Issue]
    warnings: list[Issue] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == "Pass"

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "issues": [i.as_dict() for i in self.issues],
            "warnings": [w.as_dict() for w in self.warnings],
        }


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


class _Parser:
    def __init__(self):
        self.warnings: list[Issue] = []

    def fail(self, code: str, message: str, path: str):
        raise ParseError(code, message, path)

    def warn(self, code: str, message: str, path: str):
        self.warnings.append(Issue(code, path, message))

    def parse(self, text: str) -> HierarchicalModel:
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(
                "MALFORMED_JSON",
                f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}",
                None,
            ) from exc
        if not isinstance(raw, dict):
            self.fail("WRONG_TYPE", "top level must be a JSON object", "")
        for key in raw:
            if key != "Goal":
                self.fail("UNKNOWN_KEY", f"unknown top-level key {key!r}", key)
        if "Goal" not in raw:
            self.fail("MISSING_GOAL", 'missing required top-level key "Goal"', "")
        goal = self.entry(raw["Goal"], "goal")
        if goal is None:
            self.fail("MISSING_GOAL", 'the "Goal" entry is "N/A"', "goal")
        return HierarchicalModel(goal=goal, warnings=self.warnings)

    def entry(self, raw, path: str) -> DocEntry | None:
        if _is_na(raw):
            self.warn("NA_DROPPED", "entry is 'N/A'; dropped", path)
            return None
        if not isinstance(raw, dict):
            self.fail("WRONG_TYPE", f"entry must be an object, got {type(raw).__name__}", path)
        entry = DocEntry(path=path)
        wrappers = [k for k in raw if k in WRAPPER_KEYS]
        if len(wrappers) > 1:
            self.fail(
                "MULTIPLE_WRAPPERS",
                f"entry carries several branch wrappers: {sorted(wrappers)}",
                path,
            )
        for key, value in raw.items():
            kpath = f"{path}.{key}"
            if key not in ENTRY_KEYS:
                self.fail("UNKNOWN_KEY", f"unknown key {key!r}", kpath)
            if key == "name":
                if _is_na(value):
                    self.warn("NA_DROPPED", "name is 'N/A'; entry dropped", kpath)
                    return None
                if not isinstance(value, str):
                    self.fail("WRONG_TYPE", "name must be a string", kpath)
                entry.name = value
            elif key == "ref":
                if not isinstance(value, str):
                    self.fail("WRONG_TYPE", "ref must be a string", kpath)
                entry.ref = value
            elif key in WRAPPER_KEYS:
                self.wrapper(entry, key, value, kpath)
            elif key == "states":
                entry.states = self.states(value, kpath)
            elif key == "given_state":
                entry.given_state = self.given_state(value, kpath)
            elif key == "direct_p_success":
                if _is_na(value):
                    self.warn("NA_DROPPED", "direct_p_success is 'N/A'; dropped", kpath)
                    continue
                if not isinstance(value, (int, float)) or isinstance(value, bool):
                    self.fail("WRONG_TYPE", "direct_p_success must be a number", kpath)
                entry.direct_p_success = float(value)
        return entry

    def wrapper(self, entry: DocEntry, key: str, value, path: str):
        if _is_na(value):
            self.warn("NA_DROPPED", f"{key} is 'N/A'; dropped", path)
            return
        if not isinstance(value, dict):
            self.fail("WRONG_TYPE", f"{key} must be an object", path)
        entry.wrapper = key
        entry.wrapper_path = path
        lists = [k for k in value if k in LIST_KEYS]
        if len(lists) > 1:
            self.fail(
                "MULTIPLE_CHILD_LISTS",
                f"wrapper carries several child lists: {sorted(lists)}",
                path,
            )
        for k, v in value.items():
            kpath = f"{path}.{k}"
            if k == "gate":
                if _is_na(v):
                    self.warn("NA_DROPPED", "gate is 'N/A'; dropped", kpath)
                    continue
                if not isinstance(v, str):
                    self.fail("WRONG_TYPE", "gate must be a string", kpath)
                if v not in GATE_VALUES:
                    self.fail(
                        "INVALID_GATE",
                        f"invalid gate value {v!r}; expected 'AND_gate' or 'OR_gate'",
                        kpath,
                    )
                entry.gate = v
            elif k in LIST_KEYS:
                if not isinstance(v, list):
                    self.fail("WRONG_TYPE", f"{k} must be an array", kpath)
                entry.list_key = k
                for i, item in enumerate(v):
                    child = self.entry(item, f"{kpath}[{i}]")
                    if child is not None:
                        entry.children.append(child)
            else:
                self.fail("UNKNOWN_KEY", f"unknown key {k!r}", kpath)

    def states(self, value, path: str) -> list[tuple[str, float]] | None:
        if _is_na(value):
            self.warn("NA_DROPPED", "states is 'N/A'; dropped", path)
            return None
        if not isinstance(value, list):
            self.fail("WRONG_TYPE", "states must be an array", path)
        out: list[tuple[str, float]] = []
        for i, item in enumerate(value):
            ipath = f"{path}[{i}]"
            if _is_na(item):
                self.warn("NA_DROPPED", "state is 'N/A'; dropped", ipath)
                continue
            if not isinstance(item, dict):
                self.fail("WRONG_TYPE", "state must be an object", ipath)
            for k in item:
                if k not in ("name", "prior"):
                    self.fail("UNKNOWN_KEY", f"unknown key {k!r}", f"{ipath}.{k}")
            name = item.get("name")
            prior = item.get("prior")
            if _is_na(name):
                self.warn("NA_DROPPED", "state name is 'N/A'; state dropped", ipath)
                continue
            if not isinstance(name, str):
                self.fail("WRONG_TYPE", "state name must be a string", f"{ipath}.name")
            if not isinstance(prior, (int, float)) or isinstance(prior, bool):
                self.fail("WRONG_TYPE", "state prior must be a number", f"{ipath}.prior")
            out.append((name, float(prior)))
        return out

    def given_state(self, value, path: str) -> dict[str, float] | None:
        if _is_na(value):
            self.warn("NA_DROPPED", "given_state is 'N/A'; dropped", path)
            return None
        if not isinstance(value, dict):
            self.fail("WRONG_TYPE", "given_state must be an object", path)
        out: dict[str, float] = {}
        for k, v in value.items():
            if _is_na(v):
                self.warn("NA_DROPPED", f"given_state[{k!r}] is 'N/A'; dropped", f"{path}.{k}")
                continue
            if not isinstance(v, (int, float)) or isinstance(v, bool):
                self.fail("WRONG_TYPE", f"given_state[{k!r}] must be a number", f"{path}.{k}")
            out[k] = float(v)
        return out


def parse_model(text: str) -> HierarchicalModel:
    """Parse a UTF-8 model document. Raises :class:`ParseError` on bad syntax,
    unknown keys, wrong value types or invalid gate labels."""
    return _Parser().parse(text)


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

DefKey = tuple[NodeKind, str]


@dataclass
class _RefSite:
    expected_kind: NodeKind
    name: str
    path: str
    ancestors: tuple[DefKey, ...]  # enclosing definitions, goal first


class _Validator:
    def __init__(self):
        self.issues: list[Issue] = []
        self.defs: dict[DefKey, DocEntry] = {}
        self.def_children: dict[DefKey, list[DefKey]] = {}
        self.def_refs: dict[DefKey, list[_RefSite]] = {}
        self.refs: list[_RefSite] = []

    def report(self, code: str, message: str, path: str):
        self.issues.append(Issue(code, path, message))

    # -- walk ----------------------------------------------------------

    def walk(self, entry: DocEntry, tier: int, ancestors: tuple[DefKey, ...]):
        kind = KIND_FOR_TIER[tier]

        if entry.ref is not None:
            if entry.name is not None or entry.wrapper is not None or entry.states is not None \
                    or entry.given_state is not None or entry.direct_p_success is not None:
                self.report(
                    "REF_WITH_BODY",
                    "a {\"ref\": ...} entry must carry no other fields",
                    entry.path,
                )
            if tier == 4:
                self.report(
                    "REF_NOT_ALLOWED",
                    "success conditions belong to their component and cannot be shared by ref",
                    entry.path,
                )
                return
            site = _RefSite(kind, entry.ref, entry.path, ancestors)
            self.refs.append(site)
            if ancestors:
                self.def_refs.setdefault(ancestors[-1], []).append(site)
            return

        if entry.name is None:
            self.report("MISSING_FIELD", f"{TIER_LABEL[tier]} entry has no name", entry.path)
            return
        if not entry.name.strip():
            self.report("EMPTY_NAME", f"{TIER_LABEL[tier]} name is empty", entry.path)
            return

        key: DefKey = (kind, entry.name if tier < 4 else self.qualify(entry, ancestors))
        if key in self.defs:
            self.report(
                "DUPLICATE_DEFINITION",
                f"{TIER_LABEL[tier]} {key[1]!r} is fully defined more than once; "
                f"use {{\"ref\": ...}} for the second occurrence",
                entry.path,
            )
            return
        self.defs[key] = entry
        self.def_children.setdefault(key, [])
        if ancestors:
            self.def_children.setdefault(ancestors[-1], []).append(key)

        self.check_fields(entry, tier)
        if tier == 3:
            self.check_component(entry, key)
            return
        if tier == 4:
            return

        # tiers 0..2 must branch into the next tier
        expected_wrapper = WRAPPER_FOR_TIER[tier]
        expected_list = LIST_FOR_TIER[tier]
        if entry.wrapper is None:
            self.report(
                "MISSING_FIELD",
                f"{TIER_LABEL[tier]} {entry.name!r} has no {expected_wrapper!r} branch",
                entry.path,
            )
            return
        if entry.wrapper != expected_wrapper:
            self.report(
                "LEVEL_SKIP",
                f"{TIER_LABEL[tier]} {entry.name!r} uses wrapper {entry.wrapper!r}; "
                f"the tier order requires {expected_wrapper!r}",
                entry.wrapper_path,
            )
            return
        self.check_branch(entry, tier, expected_list)
        self.walk_children(entry, tier, ancestors + (key,))

    def check_branch(self, entry: DocEntry, tier: int, expected_list: str) -> bool:
        """Report branch-level problems; True iff the child list is walkable."""
        if entry.gate is None:
            self.report(
                "GATE_MISSING",
                f"branch of {entry.name!r} does not name its gate",
                entry.wrapper_path,
            )
        if entry.list_key is None:
            self.report(
                "MISSING_FIELD",
                f"branch of {entry.name!r} has no {expected_list!r} list",
                entry.wrapper_path,
            )
            return False
        if entry.list_key != expected_list:
            self.report(
                "LEVEL_SKIP",
                f"branch of {entry.name!r} holds {entry.list_key!r}; "
                f"the tier order requires {expected_list!r}",
                entry.wrapper_path,
            )
            return False
        if not entry.children:
            self.report(
                "EMPTY_LEVEL",
                f"{entry.list_key!r} of {entry.name!r} is empty",
                entry.wrapper_path,
            )
            return False
        return True

    def walk_children(self, entry: DocEntry, tier: int, ancestors: tuple[DefKey, ...]):
        seen: dict[str, str] = {}
        for child in entry.children:
            label = child.ref if child.ref is not None else child.name
            if label is not None:
                if label in seen:
                    self.report(
                        "DUPLICATE_SIBLING",
                        f"{label!r} appears twice under {entry.name!r}",
                        child.path,
                    )
                    continue
                seen[label] = child.path
            self.walk(child, tier + 1, ancestors)

    def check_fields(self, entry: DocEntry, tier: int):
        if entry.states is not None and tier != 3:
            self.report(
                "MISPLACED_FIELD",
                f"'states' is a component field, not a {TIER_LABEL[tier]} field",
                entry.path,
            )
        if entry.direct_p_success is not None and tier != 3:
            self.report(
                "MISPLACED_FIELD",
                f"'direct_p_success' is a component field, not a {TIER_LABEL[tier]} field",
                entry.path,
            )
        if entry.given_state is not None and tier != 4:
            self.report(
                "MISPLACED_FIELD",
                f"'given_state' is a success-condition field, not a {TIER_LABEL[tier]} field",
                entry.path,
            )

    # -- components -----------------------------------------------------

    def check_component(self, entry: DocEntry, key: DefKey):
        state_names: list[str] = []
        if entry.states is not None:
            if not entry.states:
                self.report("STATES_MISSING", f"component {entry.name!r} declares an empty states list", entry.path)
            seen = set()
            for name, prior in entry.states:
                if name in seen:
                    self.report(
                        "DUPLICATE_STATE",
                        f"component {entry.name!r} declares state {name!r} twice",
                        entry.path,
                    )
                seen.add(name)
                state_names.append(name)
                if not 0.0 <= prior <= 1.0:
                    self.report(
                        "PROBABILITY_RANGE",
                        f"prior of state {name!r} is {prior}, outside [0,1]",
                        entry.path,
                    )
            total = sum(p for _, p in entry.states)
            if entry.states and abs(total - 1.0) > 1e-6:
                self.report(
                    "PRIOR_SUM",
                    f"state priors of component {entry.name!r} sum to {total:g}, expected 1",
                    entry.path,
                )

        has_conditions = entry.wrapper is not None
        if has_conditions and entry.wrapper != "success_through":
            self.report(
                "LEVEL_SKIP",
                f"component {entry.name!r} uses wrapper {entry.wrapper!r}; "
                f"components branch through 'success_through'",
                entry.wrapper_path,
            )
            return

        if entry.direct_p_success is not None:
            if not 0.0 <= entry.direct_p_success <= 1.0:
                self.report(
                    "PROBABILITY_RANGE",
                    f"direct_p_success of {entry.name!r} is {entry.direct_p_success}, outside [0,1]",
                    entry.path,
                )
            if has_conditions:
                self.report(
                    "CONFLICTING_SUCCESS_SPEC",
                    f"component {entry.name!r} has both success conditions and direct_p_success",
                    entry.path,
                )
                return

        if not has_conditions:
            if entry.direct_p_success is None:
                self.report(
                    "NO_SUCCESS_SPEC",
                    f"component {entry.name!r} has neither success conditions nor direct_p_success",
                    entry.path,
                )
            return

        if entry.states is None or not entry.states:
            self.report(
                "STATES_MISSING",
                f"component {entry.name!r} has success conditions but no states",
                entry.path,
            )

        if not self.check_branch(entry, 3, "success_conditions"):
            return

        seen_conditions: set[str] = set()
        for child in entry.children:
            self.walk_condition(child, state_names, entry.name, seen_conditions)

    def walk_condition(self, child: DocEntry, state_names: list[str], component: str, seen: set[str]):
        if child.ref is not None:
            self.report(
                "REF_NOT_ALLOWED",
                "success conditions belong to their component and cannot be shared by ref",
                child.path,
            )
            return
        if child.name is None:
            self.report("MISSING_FIELD", "success-condition entry has no name", child.path)
            return
        if not child.name.strip():
            self.report("EMPTY_NAME", "success-condition name is empty", child.path)
            return
        if child.name in seen:
            self.report(
                "DUPLICATE_SIBLING",
                f"condition {child.name!r} appears twice under {component!r}",
                child.path,
            )
            return
        seen.add(child.name)
        self.check_fields(child, 4)
        if child.wrapper is not None:
            self.report(
                "LEVEL_SKIP",
                f"success condition {child.name!r} cannot branch further",
                child.wrapper_path,
            )
        if child.given_state is None:
            self.report(
                "MISSING_FIELD",
                f"condition {child.name!r} has no given_state likelihoods",
                child.path,
            )
            return
        declared = set(state_names)
        given = set(child.given_state)
        if state_names and given != declared:
            missing = sorted(declared - given)
            extra = sorted(given - declared)
            detail = []
            if missing:
                detail.append(f"missing {missing}")
            if extra:
                detail.append(f"unknown {extra}")
            self.report(
                "GIVEN_STATE_MISMATCH",
                f"given_state of {child.name!r} does not cover the declared states ({'; '.join(detail)})",
                child.path,
            )
        for state, prob in child.given_state.items():
            if not 0.0 <= prob <= 1.0:
                self.report(
                    "PROBABILITY_RANGE",
                    f"given_state[{state!r}] of {child.name!r} is {prob}, outside [0,1]",
                    child.path,
                )

    @staticmethod
    def qualify(entry: DocEntry, ancestors: tuple[DefKey, ...]) -> str:
        owner = ancestors[-1][1] if ancestors else ""
        return f"{owner}/{entry.name}"

    # -- reference resolution --------------------------------------------

    def resolve_refs(self):
        for site in self.refs:
            if (site.expected_kind, site.name) in self.defs:
                continue
            candidates = sorted(
                (key for key in self.defs if key[1] == site.name),
                key=lambda k: list(KIND_FOR_TIER.values()).index(k[0]),
            )
            if not candidates:
                self.report(
                    "REF_UNKNOWN",
                    f"ref {site.name!r} matches no defined {site.expected_kind.value}",
                    site.path,
                )
                continue
            candidate = candidates[0]
            if candidate in site.ancestors or self.reaches(candidate, set(site.ancestors)):
                self.report(
                    "REF_CYCLE",
                    f"ref {site.name!r} points back at an enclosing {candidate[0].value}; "
                    f"following it would create a cycle",
                    site.path,
                )
            else:
                self.report(
                    "REF_KIND_MISMATCH",
                    f"ref {site.name!r} resolves to a {candidate[0].value}, "
                    f"but this list holds {site.expected_kind.value} entries",
                    site.path,
                )

    def reaches(self, start: DefKey, targets: set[DefKey]) -> bool:
        seen = set()
        frontier = [start]
        while frontier:
            key = frontier.pop()
            if key in targets:
                return True
            if key in seen:
                continue
            seen.add(key)
            frontier.extend(self.def_children.get(key, ()))
            for site in self.def_refs.get(key, ()):
                resolved = (site.expected_kind, site.name)
                if resolved in self.defs:
                    frontier.append(resolved)
                else:
                    frontier.extend(k for k in self.defs if k[1] == site.name)
        return False


def validate_structure(model: HierarchicalModel) -> ValidationReport:
    """Structural validation: required fields, 5-tier nesting order, gates at
    every branching point, probability sanity, sibling uniqueness, reference
    resolution. Returns a report instead of raising."""
    v = _Validator()
    v.walk(model.goal, 0, ())
    v.resolve_refs()
    verdict = "Pass" if not v.issues else "Fail"
    return ValidationReport(verdict=verdict, issues=v.issues, warnings=list(model.warnings))


# ---------------------------------------------------------------------------
# lowering to the graph
# ---------------------------------------------------------------------------


def to_graph(model: HierarchicalModel) -> ModelGraph:
    """Lower a validated document to a :class:`ModelGraph`.

    Raises :class:`ValidationFailed` when the document does not validate.
    """
    report = validate_structure(model)
    if not report.passed:
        raise ValidationFailed(report)

    builder = GraphBuilder()

    # pass 1: create every defined non-gate node (components incl. their data)
    def define(entry: DocEntry, tier: int):
        if entry.ref is not None:
            return
        node_id = builder.add_node(KIND_FOR_TIER[tier], entry.name)
        if tier == 3:
            condition_ids: dict[NodeId, tuple[float, ...]] = {}
            state_names = [s for s, _ in entry.states] if entry.states else []
            for child in entry.children:
                qualified = f"{entry.name}/{child.name}"
                cid = builder.add_node(NodeKind.SUCCESS_CONDITION, qualified)
                row = tuple(child.given_state[s] for s in state_names)
                condition_ids[cid] = row
            states = tuple(entry.states) if entry.states else (("operational", 1.0),)
            builder.set_component_data(
                node_id,
                ComponentData(
                    states=states,
                    condition_rows=condition_ids,
                    direct_p_success=entry.direct_p_success,
                ),
            )
            return
        for child in entry.children:
            define(child, tier + 1)

    # pass 2: wire gates and edges in document order
    def wire(entry: DocEntry, tier: int):
        node_id = builder.add_node(KIND_FOR_TIER[tier], entry.name)
        if entry.gate is None:
            return
        gate_id = builder.add_gate(GATE_KIND[entry.gate])
        builder.add_edge(node_id, EDGE_FOR_PARENT_TIER[tier], gate_id)
        for child in entry.children:
            if tier == 3:
                child_id = builder.add_node(
                    NodeKind.SUCCESS_CONDITION, f"{entry.name}/{child.name}"
                )
            elif child.ref is not None:
                child_id = builder.add_node(KIND_FOR_TIER[tier + 1], child.ref)
            else:
                child_id = builder.add_node(KIND_FOR_TIER[tier + 1], child.name)
            builder.add_edge(gate_id, EDGE_FOR_CHILD_TIER[tier + 1], child_id)
            if tier < 3 and child.ref is None:
                wire(child, tier + 1)

    define(model.goal, 0)
    wire(model.goal, 0)
    return builder.build()


# ---------------------------------------------------------------------------
# serialization back to the document format
# ---------------------------------------------------------------------------


def serialize_graph(graph: ModelGraph) -> str:
    """Graph back to its canonical UTF-8 document. A node shared by several
    parents is written fully once and as ``{"ref": name}`` afterwards."""
    seen: set[NodeId] = set()

    def emit(node_id: NodeId, tier: int) -> dict:
        node = graph.node(node_id)
        if node_id in seen:
            return {"ref": node.name}
        seen.add(node_id)
        gate_kind, children = graph.children_of(node_id)
        doc: dict = {"name": node.name}
        if tier == 3:
            data = node.data
            if data is not None:
                doc["states"] = [
                    {"name": name, "prior": prior} for name, prior in data.states
                ]
            if gate_kind is not None:
                doc["success_through"] = {
                    "gate": "AND_gate" if gate_kind is NodeKind.AND_GATE else "OR_gate",
                    "success_conditions": [
                        {
                            "name": graph.condition_name(cid),
                            "given_state": {
                                name: data.condition_rows[cid][i]
                                for i, (name, _) in enumerate(data.states)
                            },
                        }
                        for cid in children
                    ],
                }
            if data is not None and data.direct_p_success is not None:
                doc["direct_p_success"] = data.direct_p_success
            return doc
        wrapper = WRAPPER_FOR_TIER[tier]
        if gate_kind is None:
            doc[wrapper] = {}
        else:
            doc[wrapper] = {
                "gate": "AND_gate" if gate_kind is NodeKind.AND_GATE else "OR_gate",
                LIST_FOR_TIER[tier]: [emit(c, tier + 1) for c in children],
            }
        return doc

    document = {"Goal": emit(graph.goal.id, 0)}
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# convenience
# ---------------------------------------------------------------------------


def load_model_text(text: str) -> ModelGraph:
    """parse -> validate -> lower in one step; raises on any failure."""
    return to_graph(parse_model(text))


def load_model_file(path) -> ModelGraph:
    with open(path, encoding="utf-8") as handle:
        return load_model_text(handle.read())
