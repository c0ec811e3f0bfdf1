"""In-memory form of a mini-app document.

A document describes one app: its manifest, its code units (activities,
fragments, services, helpers, inner classes) in a small statement IR, its
layout trees, and a runtime section holding behavior the code does not show
(required extras, crash flags, permission and login gates, external data).

Models are immutable once parsed; analyses never mutate them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

GRID_W = 90
GRID_H = 160
PALETTE_SIZE = 16

LIFECYCLE_METHODS = ("onCreate", "onStart", "onResume")

NODE_TYPES = (
    "Container",
    "Button",
    "ImageButton",
    "TextView",
    "EditText",
    "ListView",
    "GridView",
    "RadioButton",
    "WebViewPane",
)

EXTERNAL_KINDS = ("RemoteServer", "LocalDb", "WebAuth", "Hardware", "SlowLoad")

START_APIS = ("start_activity", "for_result", "if_needed")

UNIT_KINDS = ("Activity", "Fragment", "Service", "Plain", "Inner")

PRIMITIVE_EXTRA_KINDS = ("String", "Integer", "Boolean", "Float")


@dataclass(frozen=True)
class ExtraType:
    """Type of an intent extra. Bundles carry their entry types, one level deep."""

    kind: str
    entries: Optional[tuple[tuple[str, "ExtraType"], ...]] = None

    def __str__(self) -> str:
        if self.kind == "Bundle":
            inner = ",".join(f"{k}:{t}" for k, t in (self.entries or ()))
            return f"Bundle({inner})"
        return self.kind


STRING = ExtraType("String")
INTEGER = ExtraType("Integer")
BOOLEAN = ExtraType("Boolean")
FLOAT = ExtraType("Float")


def bundle_type(entries: list[tuple[str, ExtraType]]) -> ExtraType:
    return ExtraType("Bundle", tuple(entries))


# Literal values carried by launch commands and click actions.
# String -> str, Integer -> int, Boolean -> bool, Float -> float,
# Bundle -> tuple of TypedExtra.
LiteralValue = Union[str, int, bool, float, tuple]


def literal_matches(value_type: ExtraType, value: LiteralValue) -> bool:
    if value_type.kind == "String":
        return isinstance(value, str)
    if value_type.kind == "Integer":
        return type(value) is int
    if value_type.kind == "Boolean":
        return type(value) is bool
    if value_type.kind == "Float":
        return type(value) is float
    if value_type.kind == "Bundle":
        if not isinstance(value, tuple):
            return False
        declared = dict(value_type.entries or ())
        seen = {}
        for item in value:
            if not isinstance(item, TypedExtra):
                return False
            if item.key in seen or item.key not in declared:
                return False
            if item.value_type != declared[item.key]:
                return False
            if not literal_matches(item.value_type, item.value):
                return False
            seen[item.key] = item
        return set(seen) == set(declared)
    return False


def format_literal(value_type: ExtraType, value: LiteralValue) -> str:
    """Canonical text form of a literal, used by the serializer and event log."""
    if value_type.kind == "String":
        escaped = str(value).replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    if value_type.kind == "Boolean":
        return "true" if value else "false"
    if value_type.kind == "Float":
        return repr(float(value))
    if value_type.kind == "Bundle":
        inner = ",".join(
            f"{e.key}:{e.value_type}={format_literal(e.value_type, e.value)}"
            for e in value
        )
        return "{" + inner + "}"
    return str(value)


@dataclass(frozen=True)
class IntentFilter:
    """Manifest intent filter, also the shape of an implicit intent spec."""

    action: Optional[str] = None
    categories: tuple[str, ...] = ()
    data: Optional[str] = None
    mime_type: Optional[str] = None

    def is_empty(self) -> bool:
        return (
            self.action is None
            and not self.categories
            and self.data is None
            and self.mime_type is None
        )


@dataclass(frozen=True)
class ActivityDecl:
    name: str
    exported: bool = False
    is_launcher: bool = False
    intent_filters: tuple[IntentFilter, ...] = ()


@dataclass(frozen=True)
class Manifest:
    declared_activities: tuple[ActivityDecl, ...] = ()
    declared_services: tuple[str, ...] = ()

    def activity(self, name: str) -> Optional[ActivityDecl]:
        for decl in self.declared_activities:
            if decl.name == name:
                return decl
        return None

    def activity_names(self) -> list[str]:
        return [d.name for d in self.declared_activities]

    def launcher(self) -> Optional[str]:
        for decl in self.declared_activities:
            if decl.is_launcher:
                return decl.name
        return None


# ---------------------------------------------------------------------------
# Statement IR


@dataclass(frozen=True)
class NewIntent:
    """Bind an intent variable: explicit (target) or implicit (spec), never both."""

    var: str
    target: Optional[str] = None
    spec: Optional[IntentFilter] = None


@dataclass(frozen=True)
class PutExtra:
    var: str
    key: str
    value_type: ExtraType


@dataclass(frozen=True)
class PutBundle:
    var: str
    entries: tuple[tuple[str, ExtraType], ...]


@dataclass(frozen=True)
class StartActivity:
    var: str
    api: str = "start_activity"


@dataclass(frozen=True)
class GetExtra:
    value_type: ExtraType
    key: str


@dataclass(frozen=True)
class FragmentAdd:
    fragment: str


@dataclass(frozen=True)
class FragmentReplace:
    fragment: str


@dataclass(frozen=True)
class FragmentCommit:
    pass


@dataclass(frozen=True)
class SetAdapter:
    fragment: str


@dataclass(frozen=True)
class Call:
    unit: str
    method: str


@dataclass(frozen=True)
class Nop:
    pass


Stmt = Union[
    NewIntent,
    PutExtra,
    PutBundle,
    StartActivity,
    GetExtra,
    FragmentAdd,
    FragmentReplace,
    FragmentCommit,
    SetAdapter,
    Call,
    Nop,
]


@dataclass(frozen=True)
class MethodDef:
    name: str
    body: tuple[Stmt, ...] = ()

    @property
    def is_lifecycle(self) -> bool:
        return self.name in LIFECYCLE_METHODS


@dataclass(frozen=True)
class UnitDef:
    name: str
    kind: str
    outer: Optional[str] = None
    layout_ref: Optional[str] = None
    methods: tuple[MethodDef, ...] = ()

    def method(self, name: str) -> Optional[MethodDef]:
        for m in self.methods:
            if m.name == name:
                return m
        return None


# ---------------------------------------------------------------------------
# Layouts


@dataclass(frozen=True)
class Rect:
    x: int
    y: int
    w: int
    h: int

    def contains(self, other: "Rect") -> bool:
        return (
            other.x >= self.x
            and other.y >= self.y
            and other.x + other.w <= self.x + self.w
            and other.y + other.h <= self.y + self.h
        )

    def intersect(self, other: "Rect") -> "Rect":
        x1 = max(self.x, other.x)
        y1 = max(self.y, other.y)
        x2 = min(self.x + self.w, other.x + other.w)
        y2 = min(self.y + self.h, other.y + other.h)
        return Rect(x1, y1, max(0, x2 - x1), max(0, y2 - y1))


@dataclass(frozen=True)
class TypedExtra:
    key: str
    value_type: ExtraType
    value: LiteralValue


@dataclass(frozen=True)
class ClickAction:
    """Tap behavior: launch a declared activity with literal extras."""

    target: str
    extras: tuple[TypedExtra, ...] = ()


@dataclass(frozen=True)
class LayoutNode:
    node_type: str
    node_id: str
    bounds: Rect
    label: str = ""
    color: int = 0
    clickable: bool = False
    on_click: Optional[ClickAction] = None
    children: tuple["LayoutNode", ...] = ()


def iter_nodes(root: LayoutNode) -> Iterator[LayoutNode]:
    """Document order: pre-order depth-first."""
    stack = [root]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children))


def leaf_components(root: LayoutNode) -> list[LayoutNode]:
    """The nodes a page reports as components: its leaves, in document order."""
    return [n for n in iter_nodes(root) if not n.children]


# ---------------------------------------------------------------------------
# Runtime section


@dataclass(frozen=True)
class RuntimeEntry:
    required_extras: tuple[tuple[str, ExtraType], ...] = ()
    crash_if_missing: bool = False
    requires_permission: Optional[str] = None
    requires_login: bool = False
    external_data: Optional[str] = None


@dataclass(frozen=True)
class RuntimeSpec:
    login_activity: Optional[str] = None
    entries: tuple[tuple[str, RuntimeEntry], ...] = ()

    def entry(self, activity: str) -> RuntimeEntry:
        for name, entry in self.entries:
            if name == activity:
                return entry
        return RuntimeEntry()


# ---------------------------------------------------------------------------
# The model


@dataclass(frozen=True)
class AppModel:
    package_id: str
    manifest: Manifest = Manifest()
    units: tuple[UnitDef, ...] = ()
    layouts: tuple[tuple[str, LayoutNode], ...] = ()
    runtime: RuntimeSpec = RuntimeSpec()
    revision: int = 0

    def unit(self, name: str) -> Optional[UnitDef]:
        for u in self.units:
            if u.name == name:
                return u
        return None

    def layout(self, layout_id: str) -> Optional[LayoutNode]:
        for lid, root in self.layouts:
            if lid == layout_id:
                return root
        return None

    def activity_units(self) -> list[UnitDef]:
        return [u for u in self.units if u.kind == "Activity"]


@dataclass(frozen=True)
class Diagnostic:
    path: str
    message: str


def _check_stmts(model: AppModel, unit: UnitDef, method: MethodDef, out: list[Diagnostic]) -> None:
    base = f"unit[{unit.name}].method[{method.name}]"
    bound_vars: set[str] = set()
    pending_fragment = False
    for i, stmt in enumerate(method.body):
        path = f"{base}.stmt[{i}]"
        if isinstance(stmt, NewIntent):
            if (stmt.target is None) == (stmt.spec is None):
                out.append(Diagnostic(path, "intent needs exactly one of target or spec"))
            if stmt.spec is not None and stmt.spec.is_empty():
                out.append(Diagnostic(path, "implicit intent spec has no fields"))
            bound_vars.add(stmt.var)
        elif isinstance(stmt, (PutExtra, PutBundle, StartActivity)):
            if stmt.var not in bound_vars:
                out.append(Diagnostic(path, f"intent variable {stmt.var!r} not bound by a prior intent"))
            if isinstance(stmt, StartActivity) and stmt.api not in START_APIS:
                out.append(Diagnostic(path, f"unknown start api {stmt.api!r}"))
            if isinstance(stmt, PutBundle):
                for key, etype in stmt.entries:
                    if etype.kind == "Bundle":
                        out.append(Diagnostic(path, f"bundle entry {key!r} nests a bundle"))
        elif isinstance(stmt, GetExtra):
            if stmt.value_type.kind == "Bundle":
                for key, etype in stmt.value_type.entries or ():
                    if etype.kind == "Bundle":
                        out.append(Diagnostic(path, f"bundle entry {key!r} nests a bundle"))
        elif isinstance(stmt, (FragmentAdd, FragmentReplace, SetAdapter)):
            target = model.unit(stmt.fragment)
            if target is None or target.kind != "Fragment":
                out.append(Diagnostic(path, f"{stmt.fragment!r} is not a declared Fragment unit"))
            if isinstance(stmt, (FragmentAdd, FragmentReplace)):
                pending_fragment = True
        elif isinstance(stmt, FragmentCommit):
            if not pending_fragment:
                out.append(Diagnostic(path, "commit without a preceding add/replace in this body"))


def _check_layout(model: AppModel, layout_id: str, root: LayoutNode, out: list[Diagnostic]) -> None:
    declared = set(model.manifest.activity_names())
    seen_ids: set[str] = set()
    grid = Rect(0, 0, GRID_W, GRID_H)

    def walk(node: LayoutNode, parent: Optional[LayoutNode]) -> None:
        path = f"layout[{layout_id}].node[{node.node_id}]"
        if node.node_id in seen_ids:
            out.append(Diagnostic(path, "duplicate node id in layout tree"))
        seen_ids.add(node.node_id)
        if node.node_type not in NODE_TYPES:
            out.append(Diagnostic(path, f"unknown node type {node.node_type!r}"))
        box = parent.bounds if parent is not None else grid
        if not box.contains(node.bounds):
            out.append(Diagnostic(path, "bounds fall outside the parent rectangle"))
        if not (0 <= node.color < PALETTE_SIZE):
            out.append(Diagnostic(path, f"palette index {node.color} out of range"))
        if node.on_click is not None:
            if not node.clickable:
                out.append(Diagnostic(path, "on_click set on a non-clickable node"))
            if node.on_click.target not in declared:
                out.append(Diagnostic(path, f"click target {node.on_click.target!r} is not a declared activity"))
            for extra in node.on_click.extras:
                if not literal_matches(extra.value_type, extra.value):
                    out.append(Diagnostic(path, f"literal for extra {extra.key!r} does not match its type"))
        for child in node.children:
            walk(child, node)

    walk(root, None)


def validate(model: AppModel) -> list[Diagnostic]:
    """Check every model invariant. Returns diagnostics; empty means valid."""
    out: list[Diagnostic] = []

    if not model.package_id:
        out.append(Diagnostic("app", "empty package id"))

    names_seen: set[str] = set()
    launchers = 0
    for decl in model.manifest.declared_activities:
        path = f"manifest.activity[{decl.name}]"
        if decl.name in names_seen:
            out.append(Diagnostic(path, "duplicate activity declaration"))
        names_seen.add(decl.name)
        if decl.is_launcher:
            launchers += 1
        for i, filt in enumerate(decl.intent_filters):
            if filt.is_empty():
                out.append(Diagnostic(f"{path}.filter[{i}]", "intent filter has no fields"))
    if launchers != 1:
        out.append(Diagnostic("manifest", f"expected exactly one launcher activity, found {launchers}"))

    service_seen: set[str] = set()
    for svc in model.manifest.declared_services:
        path = f"manifest.service[{svc}]"
        if svc in service_seen or svc in names_seen:
            out.append(Diagnostic(path, "duplicate component name"))
        service_seen.add(svc)

    unit_names: set[str] = set()
    layout_ids = {lid for lid, _ in model.layouts}
    for unit in model.units:
        path = f"unit[{unit.name}]"
        if unit.name in unit_names:
            out.append(Diagnostic(path, "duplicate unit name"))
        unit_names.add(unit.name)
        if unit.kind not in UNIT_KINDS:
            out.append(Diagnostic(path, f"unknown unit kind {unit.kind!r}"))
        if unit.kind == "Inner":
            if unit.outer is None:
                out.append(Diagnostic(path, "inner unit without an outer class"))
            elif not any(u.name == unit.outer for u in model.units):
                out.append(Diagnostic(path, f"outer unit {unit.outer!r} does not exist"))
        elif unit.outer is not None:
            out.append(Diagnostic(path, "outer set on a non-inner unit"))
        if unit.kind in ("Activity", "Fragment"):
            if unit.layout_ref is None:
                out.append(Diagnostic(path, f"{unit.kind} unit needs a layout"))
        if unit.layout_ref is not None and unit.layout_ref not in layout_ids:
            out.append(Diagnostic(path, f"layout {unit.layout_ref!r} does not exist"))
        method_names: set[str] = set()
        for method in unit.methods:
            if method.name in method_names:
                out.append(Diagnostic(f"{path}.method[{method.name}]", "duplicate method name"))
            method_names.add(method.name)
            _check_stmts(model, unit, method, out)

    for decl in model.manifest.declared_activities:
        unit = model.unit(decl.name)
        if unit is None:
            out.append(Diagnostic(f"manifest.activity[{decl.name}]", "declared activity has no unit"))
        elif unit.kind != "Activity":
            out.append(
                Diagnostic(f"manifest.activity[{decl.name}]", f"unit exists but has kind {unit.kind}")
            )

    lid_seen: set[str] = set()
    for lid, root in model.layouts:
        if lid in lid_seen:
            out.append(Diagnostic(f"layout[{lid}]", "duplicate layout id"))
        lid_seen.add(lid)
        _check_layout(model, lid, root, out)

    declared = set(model.manifest.activity_names())
    needs_login = False
    entry_seen: set[str] = set()
    for name, entry in model.runtime.entries:
        path = f"runtime[{name}]"
        if name in entry_seen:
            out.append(Diagnostic(path, "duplicate runtime entry"))
        entry_seen.add(name)
        if name not in declared:
            out.append(Diagnostic(path, "runtime entry for an undeclared activity"))
        keys = [k for k, _ in entry.required_extras]
        if len(keys) != len(set(keys)):
            out.append(Diagnostic(path, "duplicate required extra key"))
        for key, etype in entry.required_extras:
            if etype.kind == "Bundle":
                for _, inner in etype.entries or ():
                    if inner.kind == "Bundle":
                        out.append(Diagnostic(path, f"required extra {key!r} nests a bundle in a bundle"))
        if entry.requires_login:
            needs_login = True
        if entry.external_data is not None and entry.external_data not in EXTERNAL_KINDS:
            out.append(Diagnostic(path, f"unknown external data kind {entry.external_data!r}"))
    login = model.runtime.login_activity
    if needs_login and login is None:
        out.append(Diagnostic("runtime", "some activity requires login but no login activity is set"))
    if login is not None:
        if login not in declared:
            out.append(Diagnostic("runtime", f"login activity {login!r} is not declared"))
        elif model.runtime.entry(login).requires_login:
            out.append(Diagnostic("runtime", "the login activity cannot itself require login"))

    return out
