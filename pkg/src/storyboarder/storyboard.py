"""Storyboard assembly, metrics, and the JSON document format.

A storyboard bundles everything the pipeline learned about one app: the
transition graph, rendered pages, per-activity code and layout listings,
call hierarchy slices, component inventories, the extracted parameter
table, and summary metrics. The document serializes to a single JSON file
(schema_version "1") whose bytes are deterministic for a given input model
and seed; rasters are inlined as row-major palette index arrays.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .callgraph import CallGraph, build_call_graph
from .device import ComponentInfo, DeviceState, RenderedPage, install
from .errors import DimensionMismatchError, UndefinedMetricError
from .explore import (
    ActivityOutcome,
    ExplorationReport,
    OUTCOME_LAUNCHED,
    explore_components,
    hybrid_atg,
    render_all,
)
from .icc import ExtraParam, IccTable, ParamSet, PrimitiveAttr, extract_icc
from .instrument import instrument
from .model import (
    AppModel,
    ClickAction,
    ExtraType,
    GRID_H,
    GRID_W,
    LayoutNode,
    Manifest,
    Rect,
    TypedExtra,
    UnitDef,
    leaf_components,
)
from .parser import layout_to_text, unit_to_text
from .static_atg import Atg, TransitionPair, extract_static_atg

SCHEMA_VERSION = "1"


@dataclass(frozen=True)
class MetricsReport:
    transition_pairs: int
    activity_coverage: float
    launch_ratio: Optional[float] = None
    similarity: Optional[dict[str, float]] = None


@dataclass
class Storyboard:
    app_package: str
    app_revision: int
    atg: Atg
    pages: dict[str, RenderedPage]
    activity_code: dict[str, str]
    layout_code: dict[str, str]
    call_hierarchy: dict[str, tuple[tuple[str, str], ...]]
    components: dict[str, tuple[ComponentInfo, ...]]
    icc: IccTable
    metrics: MetricsReport
    outcomes: dict[str, ActivityOutcome]
    timings: dict[str, int]


# ---------------------------------------------------------------------------
# Metrics


def coverage(atg: Atg, manifest: Manifest) -> float:
    """Share of declared activities that appear in the graph.

    The launcher counts as reached even when it has no edges: it is on
    screen the moment the app opens.
    """
    declared = manifest.activity_names()
    if not declared:
        raise UndefinedMetricError("no declared activities")
    reached = atg.endpoints() & set(declared)
    launcher = manifest.launcher()
    if launcher is not None:
        reached.add(launcher)
    return len(reached) / len(declared)


def launch_ratio(report: ExplorationReport, manifest: Manifest) -> float:
    declared = manifest.activity_names()
    if not declared:
        raise UndefinedMetricError("no declared activities")
    launched = sum(1 for o in report.outcomes.values() if o.status == OUTCOME_LAUNCHED)
    return launched / len(declared)


def page_similarity(a: bytes, b: bytes) -> dict[str, float]:
    """MAE and MSE similarity of two equally sized palette rasters.

    Cells are normalized to [0,1] over the palette range, and each error
    is reported as 1 - error so identical rasters score 1.0.
    """
    if len(a) != len(b):
        raise DimensionMismatchError(f"raster sizes differ: {len(a)} vs {len(b)}")
    if len(a) == 0:
        raise UndefinedMetricError("empty rasters")
    va = np.frombuffer(bytes(a), dtype=np.uint8).astype(np.float64) / 15.0
    vb = np.frombuffer(bytes(b), dtype=np.uint8).astype(np.float64) / 15.0
    diff = va - vb
    return {
        "mae_sim": float(1.0 - np.mean(np.abs(diff))),
        "mse_sim": float(1.0 - np.mean(diff * diff)),
    }


# ---------------------------------------------------------------------------
# Assembly


def _inner_units(model: AppModel, activity: str) -> list[UnitDef]:
    """Units nested (possibly transitively) inside the activity."""
    out = []
    for unit in model.units:
        hop = unit.outer
        while hop is not None:
            if hop == activity:
                out.append(unit)
                break
            nxt = model.unit(hop)
            hop = nxt.outer if nxt is not None else None
    return out


def _call_slice(cg: CallGraph, methods: set[str]) -> tuple[tuple[str, str], ...]:
    return tuple((c, d) for c, d in cg.edges if c in methods)


def _static_components(model: AppModel, unit: UnitDef) -> tuple[ComponentInfo, ...]:
    root = model.layout(unit.layout_ref)
    return tuple(
        ComponentInfo(n.node_id, n.node_type, n.clickable, n.bounds, n.label)
        for n in leaf_components(root)
    )


def assemble(
    model: AppModel,
    atg: Atg,
    icc: IccTable,
    report: Optional[ExplorationReport],
    cg: CallGraph,
) -> Storyboard:
    activity_code: dict[str, str] = {}
    layout_code: dict[str, str] = {}
    call_hierarchy: dict[str, tuple[tuple[str, str], ...]] = {}
    components: dict[str, tuple[ComponentInfo, ...]] = {}

    for name in model.manifest.activity_names():
        unit = model.unit(name)
        family = [unit] + _inner_units(model, name)
        activity_code[name] = "\n".join(unit_to_text(u) for u in family)
        layout_code[name] = layout_to_text(unit.layout_ref, model.layout(unit.layout_ref))
        methods = {f"{u.name}.{m.name}" for u in family for m in u.methods}
        call_hierarchy[name] = _call_slice(cg, methods)
        if report is not None and name in report.pages:
            components[name] = report.pages[name].components
        else:
            components[name] = _static_components(model, unit)

    metrics = MetricsReport(
        transition_pairs=len(atg.pairs),
        activity_coverage=coverage(atg, model.manifest),
        launch_ratio=launch_ratio(report, model.manifest) if report is not None else None,
    )
    return Storyboard(
        app_package=model.package_id,
        app_revision=model.revision,
        atg=atg,
        pages=dict(report.pages) if report is not None else {},
        activity_code=activity_code,
        layout_code=layout_code,
        call_hierarchy=call_hierarchy,
        components=components,
        icc=icc,
        metrics=metrics,
        outcomes=dict(report.outcomes) if report is not None else {},
        timings=dict(report.timings) if report is not None else {},
    )


def run_distill(
    model: AppModel,
    *,
    seed: int = 0,
    static_only: bool = False,
    explore_depth: int = 1,
) -> Storyboard:
    """Full pipeline: instrument, analyze, explore, assemble."""
    prepared = instrument(model)
    cg = build_call_graph(prepared)
    static = extract_static_atg(prepared, cg)
    icc = extract_icc(prepared, cg)
    if static_only:
        return assemble(prepared, static, icc, None, cg)
    device: DeviceState = install(prepared, seed)
    report = render_all(prepared, icc, device)
    explore_components(
        prepared, report, device, icc=icc, static=static, explore_depth=explore_depth
    )
    atg = hybrid_atg(static, report.dynamic_pairs)
    return assemble(prepared, atg, icc, report, cg)


# ---------------------------------------------------------------------------
# JSON encoding


def _extra_type_json(t: ExtraType):
    if t.kind == "Bundle":
        return {"kind": "Bundle", "entries": [[k, _extra_type_json(e)] for k, e in (t.entries or ())]}
    return {"kind": t.kind}


def _extra_type_back(obj) -> ExtraType:
    if obj["kind"] == "Bundle":
        return ExtraType("Bundle", tuple((k, _extra_type_back(e)) for k, e in obj["entries"]))
    return ExtraType(obj["kind"])


def _value_json(t: ExtraType, value):
    if t.kind == "Bundle":
        return [_typed_extra_json(e) for e in value]
    return value


def _value_back(t: ExtraType, obj):
    if t.kind == "Bundle":
        return tuple(_typed_extra_back(e) for e in obj)
    return obj


def _typed_extra_json(e: TypedExtra):
    return {"key": e.key, "type": _extra_type_json(e.value_type), "value": _value_json(e.value_type, e.value)}


def _typed_extra_back(obj) -> TypedExtra:
    t = _extra_type_back(obj["type"])
    return TypedExtra(obj["key"], t, _value_back(t, obj["value"]))


def _click_json(action: Optional[ClickAction]):
    if action is None:
        return None
    return {"target": action.target, "extras": [_typed_extra_json(e) for e in action.extras]}


def _click_back(obj) -> Optional[ClickAction]:
    if obj is None:
        return None
    return ClickAction(obj["target"], tuple(_typed_extra_back(e) for e in obj["extras"]))


def _node_json(node: LayoutNode):
    return {
        "node_type": node.node_type,
        "node_id": node.node_id,
        "bounds": [node.bounds.x, node.bounds.y, node.bounds.w, node.bounds.h],
        "label": node.label,
        "color": node.color,
        "clickable": node.clickable,
        "on_click": _click_json(node.on_click),
        "children": [_node_json(c) for c in node.children],
    }


def _node_back(obj) -> LayoutNode:
    return LayoutNode(
        obj["node_type"],
        obj["node_id"],
        Rect(*obj["bounds"]),
        label=obj["label"],
        color=obj["color"],
        clickable=obj["clickable"],
        on_click=_click_back(obj["on_click"]),
        children=tuple(_node_back(c) for c in obj["children"]),
    )


def _component_json(c: ComponentInfo):
    return {
        "node_id": c.node_id,
        "node_type": c.node_type,
        "clickable": c.clickable,
        "bounds": [c.bounds.x, c.bounds.y, c.bounds.w, c.bounds.h],
        "label": c.label,
    }


def _component_back(obj) -> ComponentInfo:
    return ComponentInfo(
        obj["node_id"], obj["node_type"], obj["clickable"], Rect(*obj["bounds"]), obj["label"]
    )


def _page_json(page: RenderedPage):
    return {
        "activity": page.activity,
        "width": GRID_W,
        "height": GRID_H,
        "raster": list(page.raster),
        "layout_dump": _node_json(page.layout_dump),
        "components": [_component_json(c) for c in page.components],
    }


def _page_back(obj) -> RenderedPage:
    return RenderedPage(
        obj["activity"],
        _node_back(obj["layout_dump"]),
        bytes(obj["raster"]),
        tuple(_component_back(c) for c in obj["components"]),
    )


def _pair_json(p: TransitionPair):
    return {"source": p.source, "target": p.target, "origin": p.origin, "via": p.via}


def _icc_json(icc: IccTable):
    return {
        "entries": [
            [
                name,
                {
                    "primitives": [{"kind": a.kind, "value": a.value} for a in ps.primitives],
                    "extras": [
                        {"key": e.key, "type": _extra_type_json(e.value_type)} for e in ps.extras
                    ],
                },
            ]
            for name, ps in icc.entries
        ]
    }


def _icc_back(obj) -> IccTable:
    entries = []
    for name, ps in obj["entries"]:
        primitives = tuple(PrimitiveAttr(a["kind"], a["value"]) for a in ps["primitives"])
        extras = tuple(ExtraParam(e["key"], _extra_type_back(e["type"])) for e in ps["extras"])
        entries.append((name, ParamSet(primitives, extras)))
    return IccTable(tuple(entries))


def to_json(sb: Storyboard) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "app": {"package_id": sb.app_package, "revision": sb.app_revision},
        "atg": {
            "pairs": [_pair_json(p) for p in sb.atg.pairs],
            "dropped_fragment_edges": sb.atg.dropped_fragment_edges,
            "diagnostics": list(sb.atg.diagnostics),
        },
        "pages": {name: _page_json(p) for name, p in sb.pages.items()},
        "activity_code": sb.activity_code,
        "layout_code": sb.layout_code,
        "call_hierarchy": {k: [list(e) for e in v] for k, v in sb.call_hierarchy.items()},
        "components": {k: [_component_json(c) for c in v] for k, v in sb.components.items()},
        "icc": _icc_json(sb.icc),
        "metrics": {
            "transition_pairs": sb.metrics.transition_pairs,
            "activity_coverage": sb.metrics.activity_coverage,
            "launch_ratio": sb.metrics.launch_ratio,
            "similarity": sb.metrics.similarity,
        },
        "outcomes": {
            k: {"status": o.status, "cause": o.cause} for k, o in sb.outcomes.items()
        },
        "timings": sb.timings,
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def from_json(text: str) -> Storyboard:
    doc = json.loads(text)
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version: {doc.get('schema_version')!r}")
    atg = Atg(
        pairs=[
            TransitionPair(p["source"], p["target"], p["origin"], p["via"])
            for p in doc["atg"]["pairs"]
        ],
        dropped_fragment_edges=doc["atg"]["dropped_fragment_edges"],
        diagnostics=list(doc["atg"]["diagnostics"]),
    )
    metrics = MetricsReport(
        transition_pairs=doc["metrics"]["transition_pairs"],
        activity_coverage=doc["metrics"]["activity_coverage"],
        launch_ratio=doc["metrics"]["launch_ratio"],
        similarity=doc["metrics"]["similarity"],
    )
    return Storyboard(
        app_package=doc["app"]["package_id"],
        app_revision=doc["app"]["revision"],
        atg=atg,
        pages={name: _page_back(p) for name, p in doc["pages"].items()},
        activity_code=dict(doc["activity_code"]),
        layout_code=dict(doc["layout_code"]),
        call_hierarchy={k: tuple(tuple(e) for e in v) for k, v in doc["call_hierarchy"].items()},
        components={
            k: tuple(_component_back(c) for c in v) for k, v in doc["components"].items()
        },
        icc=_icc_back(doc["icc"]),
        metrics=metrics,
        outcomes={
            k: ActivityOutcome(o["status"], o["cause"]) for k, o in doc["outcomes"].items()
        },
        timings=dict(doc["timings"]),
    )
