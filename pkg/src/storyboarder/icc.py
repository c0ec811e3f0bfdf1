"""Launch-parameter (ICC) extraction.

For every declared activity this collects what a well-formed launch intent
should carry:

- primitive attributes (action, category, data, MIME type) from the
  activity's manifest filters, folded together with implicit intent specs
  found at code sites that resolve to the activity;
- extra parameters from getextra statements in the activity's lifecycle
  methods, descending transitively through callees so extras read by
  helpers still count. A visited set plus a depth cap of 32 bounds the
  descent on cyclic call graphs.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .callgraph import CallGraph, callees_of, method_id
from .model import AppModel, ExtraType, GetExtra, LIFECYCLE_METHODS, NewIntent
from .static_atg import resolve_target

DESCENT_DEPTH_CAP = 32


@dataclass(frozen=True)
class PrimitiveAttr:
    kind: str
    value: str


@dataclass(frozen=True)
class ExtraParam:
    key: str
    value_type: ExtraType


@dataclass(frozen=True)
class ParamSet:
    primitives: tuple[PrimitiveAttr, ...] = ()
    extras: tuple[ExtraParam, ...] = ()


@dataclass(frozen=True)
class IccTable:
    entries: tuple[tuple[str, ParamSet], ...] = ()

    def params_for(self, activity: str) -> ParamSet:
        for name, params in self.entries:
            if name == activity:
                return params
        return ParamSet()


def dedupe_extras(extras: Iterable[ExtraParam]) -> tuple[ExtraParam, ...]:
    """Drop repeats by (key, value_type), keeping first occurrence. Idempotent."""
    seen: set[ExtraParam] = set()
    out: list[ExtraParam] = []
    for extra in extras:
        if extra not in seen:
            seen.add(extra)
            out.append(extra)
    return tuple(out)


def _dedupe_primitives(prims: Iterable[PrimitiveAttr]) -> tuple[PrimitiveAttr, ...]:
    seen: set[PrimitiveAttr] = set()
    out: list[PrimitiveAttr] = []
    for prim in prims:
        if prim not in seen:
            seen.add(prim)
            out.append(prim)
    return tuple(out)


def _filter_primitives(spec) -> list[PrimitiveAttr]:
    prims: list[PrimitiveAttr] = []
    if spec.action is not None:
        prims.append(PrimitiveAttr("Action", spec.action))
    for cat in spec.categories:
        prims.append(PrimitiveAttr("Category", cat))
    if spec.data is not None:
        prims.append(PrimitiveAttr("Data", spec.data))
    if spec.mime_type is not None:
        prims.append(PrimitiveAttr("Type", spec.mime_type))
    return prims


def get_extras(model: AppModel, cg: CallGraph, start: str) -> tuple[ExtraParam, ...]:
    """Extras read by a method or anything it transitively calls.

    Breadth-first over call edges; each method contributes its own getextra
    statements in body order before its callees are expanded.
    """
    out: list[ExtraParam] = []
    seen = {start}
    queue = deque([(start, 0)])
    while queue:
        mid, depth = queue.popleft()
        unit_name, name = mid.split(".", 1)
        unit = model.unit(unit_name)
        method = unit.method(name) if unit is not None else None
        if method is not None:
            for stmt in method.body:
                if isinstance(stmt, GetExtra):
                    out.append(ExtraParam(stmt.key, stmt.value_type))
        if depth >= DESCENT_DEPTH_CAP:
            continue
        for callee in callees_of(cg, mid):
            if callee not in seen:
                seen.add(callee)
                queue.append((callee, depth + 1))
    return dedupe_extras(out)


def extract_icc(model: AppModel, cg: CallGraph, *, include_on_resume: bool = True) -> IccTable:
    lifecycle = tuple(
        name for name in LIFECYCLE_METHODS if include_on_resume or name != "onResume"
    )

    # Implicit intent specs at code sites, folded into the resolved target's
    # primitives: some launch attributes only exist in code, not the manifest.
    folded: dict[str, list[PrimitiveAttr]] = {}
    for unit in model.units:
        for method in unit.methods:
            for stmt in method.body:
                if isinstance(stmt, NewIntent) and stmt.spec is not None:
                    target = resolve_target(model, stmt)
                    if target is not None:
                        folded.setdefault(target, []).extend(_filter_primitives(stmt.spec))

    entries: list[tuple[str, ParamSet]] = []
    for decl in model.manifest.declared_activities:
        prims: list[PrimitiveAttr] = []
        for filt in decl.intent_filters:
            prims.extend(_filter_primitives(filt))
        prims.extend(folded.get(decl.name, ()))

        extras: list[ExtraParam] = []
        unit = model.unit(decl.name)
        if unit is not None:
            for method in unit.methods:
                if method.name in lifecycle:
                    extras.extend(get_extras(model, cg, method_id(unit.name, method.name)))

        entries.append((decl.name, ParamSet(_dedupe_primitives(prims), dedupe_extras(extras))))
    return IccTable(tuple(entries))


def dump_icc(table: IccTable) -> str:
    """Per activity: `name: [primitives] / [extras]`, sorted by activity."""
    lines = []
    for name, params in sorted(table.entries, key=lambda entry: entry[0]):
        prims = ", ".join(f"{p.kind}={p.value}" for p in params.primitives)
        extras = ", ".join(f"{e.key}:{e.value_type}" for e in params.extras)
        lines.append(f"{name}: [{prims}] / [{extras}]")
    return "\n".join(lines) + ("\n" if lines else "")
