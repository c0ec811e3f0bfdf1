"""Method-level call graph over a model's statement IR.

Nodes are method ids of the form "Unit.method". Edges come from `call`
statements only; lifecycle methods have no synthetic callers. The graph
keeps the set of activity-unit names so the backward activity closure can
filter without touching the model again.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import AnalysisError
from .model import AppModel, Call


@dataclass(frozen=True)
class CallGraph:
    nodes: tuple[str, ...] = ()
    edges: tuple[tuple[str, str], ...] = ()
    activity_units: frozenset[str] = frozenset()


def method_id(unit: str, method: str) -> str:
    return f"{unit}.{method}"


def build_call_graph(model: AppModel) -> CallGraph:
    """Collect nodes in declaration order and edges in statement order."""
    nodes: list[str] = []
    node_set: set[str] = set()
    for unit in model.units:
        for method in unit.methods:
            mid = method_id(unit.name, method.name)
            nodes.append(mid)
            node_set.add(mid)

    edges: list[tuple[str, str]] = []
    edge_set: set[tuple[str, str]] = set()
    for unit in model.units:
        for method in unit.methods:
            caller = method_id(unit.name, method.name)
            for stmt in method.body:
                if not isinstance(stmt, Call):
                    continue
                callee = method_id(stmt.unit, stmt.method)
                if callee not in node_set:
                    raise AnalysisError(f"{caller} calls undeclared method {callee}")
                edge = (caller, callee)
                if edge not in edge_set:
                    edge_set.add(edge)
                    edges.append(edge)

    activity_units = frozenset(u.name for u in model.units if u.kind == "Activity")
    return CallGraph(tuple(nodes), tuple(edges), activity_units)


def callees_of(cg: CallGraph, method: str) -> list[str]:
    """Direct callees in statement order, deduplicated."""
    if method not in cg.nodes:
        raise AnalysisError(f"unknown method {method!r}")
    return [b for a, b in cg.edges if a == method]


def callers_of(cg: CallGraph, method: str) -> set[str]:
    """Activity units whose code reaches `method`.

    Backward transitive closure over call edges, starting from the method
    itself (so a statement inside an activity's own code counts), filtered
    to units of kind Activity. Cycle safe via a visited set.
    """
    if method not in cg.nodes:
        raise AnalysisError(f"unknown method {method!r}")
    reverse: dict[str, list[str]] = {}
    for a, b in cg.edges:
        reverse.setdefault(b, []).append(a)
    seen = {method}
    queue = deque([method])
    while queue:
        current = queue.popleft()
        for caller in reverse.get(current, ()):
            if caller not in seen:
                seen.add(caller)
                queue.append(caller)
    out: set[str] = set()
    for mid in seen:
        unit = mid.split(".", 1)[0]
        if unit in cg.activity_units:
            out.add(unit)
    return out


def dump_call_graph(cg: CallGraph) -> str:
    """Deterministic edge list: one `caller -> callee` line, sorted."""
    lines = [f"{a} -> {b}" for a, b in sorted(cg.edges)]
    return "\n".join(lines) + ("\n" if lines else "")
