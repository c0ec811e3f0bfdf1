"""Virtual device: installs a model and executes launch/tap sessions.

The device is a deterministic state machine standing in for a phone plus
shell. A launch walks a fixed gate order: export check, permission gate,
login gate, missing-extra crash, then render. Rendering embeds the layouts
of fragments the activity binds, substitutes launch extras into `{key}`
label placeholders, injects placeholder nodes for pages whose real content
would come from outside the app, and paints a 90x160 palette raster.

All randomness is derived from (seed, context) hashes, never from shared
RNG state, so permuting command order never changes per-command results.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import AnalysisError, DeviceError, SecurityLaunchError
from .icc import ParamSet
from .model import (
    AppModel,
    Call,
    ExtraType,
    FragmentAdd,
    FragmentCommit,
    FragmentReplace,
    GRID_H,
    GRID_W,
    LayoutNode,
    Rect,
    SetAdapter,
    TypedExtra,
    format_literal,
    iter_nodes,
    leaf_components,
)
from .static_atg import Atg, ORIGIN_DYNAMIC, TransitionPair

CLICK_DEPTH_CAP = 6
COMMAND_BUDGET = 10000

STATUS_RENDERED = "Rendered"
STATUS_CRASHED = "Crashed"
STATUS_PROMPT = "PermissionPrompt"
STATUS_REDIRECTED = "Redirected"

CRASH_CAUSE_MISSING_EXTRA = "NullPointerException"

ALLOW_ID = "perm_allow"
DENY_ID = "perm_deny"

# 16-entry palette; raster cells hold indices into this table.
PALETTE_RGB = (
    (255, 255, 255),
    (32, 32, 32),
    (232, 232, 232),
    (74, 144, 217),
    (46, 204, 113),
    (230, 126, 34),
    (236, 240, 241),
    (255, 249, 196),
    (155, 89, 182),
    (231, 76, 60),
    (26, 188, 156),
    (52, 73, 94),
    (245, 215, 110),
    (210, 180, 222),
    (163, 228, 215),
    (127, 140, 141),
)

_EXTERNAL_PLACEHOLDERS = {
    "RemoteServer": "(no data from server)",
    "LocalDb": "(local storage empty)",
    "WebAuth": "(sign-in page unavailable)",
    "Hardware": "(hardware unavailable)",
}

_EXTRA_FLAGS = {"String": "--es", "Integer": "--ei", "Boolean": "--ez", "Float": "--ef", "Bundle": "--eb"}

_DUMMY_VALUES = {"String": "Alice", "Integer": 2, "Boolean": True, "Float": 1.0}


@dataclass(frozen=True)
class LaunchCommand:
    target: str
    extras: tuple[TypedExtra, ...] = ()


@dataclass(frozen=True)
class ComponentInfo:
    node_id: str
    node_type: str
    clickable: bool
    bounds: Rect
    label: str


@dataclass(frozen=True)
class RenderedPage:
    activity: str
    layout_dump: LayoutNode
    raster: bytes
    components: tuple[ComponentInfo, ...]


@dataclass(frozen=True)
class LaunchOutcome:
    status: str
    actual_activity: Optional[str] = None
    page: Optional[RenderedPage] = None
    cause: Optional[str] = None


@dataclass(frozen=True)
class SessionEvent:
    ts: int
    op: str
    args: str
    outcome: str

    def line(self) -> str:
        return f"{self.ts} {self.op} {self.args} -> {self.outcome}"


def format_extra_args(extras: tuple[TypedExtra, ...]) -> str:
    parts = []
    for extra in extras:
        flag = _EXTRA_FLAGS[extra.value_type.kind]
        parts.append(f"{flag} {extra.key} {format_literal(extra.value_type, extra.value)}")
    return " ".join(parts)


def find_node(root: LayoutNode, node_id: str) -> Optional[LayoutNode]:
    for node in iter_nodes(root):
        if node.node_id == node_id:
            return node
    return None


# ---------------------------------------------------------------------------
# Dummy value synthesis


def gather_layout_literals(model: AppModel) -> dict[str, list]:
    """Candidate dummy values mined from layout labels, per extra kind."""
    pools: dict[str, list] = {"String": [], "Integer": [], "Boolean": [], "Float": []}
    for _, root in model.layouts:
        for node in iter_nodes(root):
            label = node.label
            if not label:
                continue
            if label not in pools["String"]:
                pools["String"].append(label)
            try:
                value = int(label)
            except ValueError:
                try:
                    fvalue = float(label)
                except ValueError:
                    fvalue = None
                if fvalue is not None and fvalue not in pools["Float"]:
                    pools["Float"].append(fvalue)
            else:
                if value not in pools["Integer"]:
                    pools["Integer"].append(value)
            if label.lower() in ("true", "false"):
                flag = label.lower() == "true"
                if flag not in pools["Boolean"]:
                    pools["Boolean"].append(flag)
    return pools


def _stable_index(seed: int, context: str, n: int) -> int:
    digest = hashlib.sha256(f"{seed}|{context}".encode("utf-8")).hexdigest()
    return int(digest, 16) % n


def synthesize_value(value_type: ExtraType, pools: dict[str, list], seed: int, context: str):
    kind = value_type.kind
    if kind == "Bundle":
        return tuple(
            TypedExtra(key, etype, synthesize_value(etype, pools, seed, f"{context}.{key}"))
            for key, etype in (value_type.entries or ())
        )
    candidates = pools.get(kind, [])
    if candidates:
        return candidates[_stable_index(seed, f"{context}:{kind}", len(candidates))]
    return _DUMMY_VALUES[kind]


def synthesize_extras(
    model: AppModel, params: ParamSet, activity: str, seed: int
) -> tuple[TypedExtra, ...]:
    """Launch extras for an activity from its extracted parameter set."""
    pools = gather_layout_literals(model)
    out = []
    for extra in params.extras:
        value = synthesize_value(extra.value_type, pools, seed, f"{activity}.{extra.key}")
        out.append(TypedExtra(extra.key, extra.value_type, value))
    return tuple(out)


def synthesize_required(model: AppModel, activity: str, seed: int) -> tuple[TypedExtra, ...]:
    """Ground-truth extras: straight from the runtime section's requirements."""
    pools = gather_layout_literals(model)
    entry = model.runtime.entry(activity)
    out = []
    for key, etype in entry.required_extras:
        value = synthesize_value(etype, pools, seed, f"{activity}.{key}")
        out.append(TypedExtra(key, etype, value))
    return tuple(out)


# ---------------------------------------------------------------------------
# Rendering helpers


def _type_satisfies(required: ExtraType, provided: ExtraType) -> bool:
    if required.kind != provided.kind:
        return False
    if required.kind == "Bundle":
        return dict(required.entries or ()) == dict(provided.entries or ())
    return True


def _extras_satisfy(required, extras: tuple[TypedExtra, ...]) -> bool:
    by_key = {e.key: e for e in extras}
    for key, etype in required:
        provided = by_key.get(key)
        if provided is None or not _type_satisfies(etype, provided.value_type):
            return False
    return True


def _plain_value_text(value_type: ExtraType, value) -> str:
    if value_type.kind == "String":
        return str(value)
    if value_type.kind == "Boolean":
        return "true" if value else "false"
    if value_type.kind == "Bundle":
        inner = ",".join(f"{e.key}={_plain_value_text(e.value_type, e.value)}" for e in value)
        return "{" + inner + "}"
    return repr(value) if value_type.kind == "Float" else str(value)


def _bind_labels(node: LayoutNode, values: dict[str, str]) -> LayoutNode:
    label = node.label
    if label and "{" in label:
        for key, text in values.items():
            label = label.replace("{" + key + "}", text)
    children = tuple(_bind_labels(child, values) for child in node.children)
    return replace(node, label=label, children=children)


def _prefix_ids(node: LayoutNode, prefix: str, clip: Rect) -> LayoutNode:
    return replace(
        node,
        node_id=f"{prefix}:{node.node_id}",
        bounds=node.bounds.intersect(clip),
        children=tuple(_prefix_ids(child, prefix, clip) for child in node.children),
    )


def _rasterize(root: LayoutNode, partial: bool) -> bytes:
    grid = np.zeros((GRID_H, GRID_W), dtype=np.uint8)
    nodes = list(iter_nodes(root))
    limit = math.ceil(len(nodes) / 2) if partial else len(nodes)
    for node in nodes[:limit]:
        b = node.bounds
        x0 = max(0, b.x)
        y0 = max(0, b.y)
        x1 = min(GRID_W, b.x + b.w)
        y1 = min(GRID_H, b.y + b.h)
        if x1 > x0 and y1 > y0:
            grid[y0:y1, x0:x1] = node.color
    return grid.tobytes()


def page_to_ppm(page: RenderedPage) -> str:
    """Plain-text portable pixmap of a page raster."""
    lines = [f"P3\n{GRID_W} {GRID_H}\n255"]
    raster = page.raster
    for y in range(GRID_H):
        row = []
        for x in range(GRID_W):
            r, g, b = PALETTE_RGB[raster[y * GRID_W + x]]
            row.append(f"{r} {g} {b}")
        lines.append(" ".join(row))
    return "\n".join(lines) + "\n"


def _permission_prompt_tree(package_id: str, permission: str) -> LayoutNode:
    full = Rect(0, 0, GRID_W, GRID_H)
    return LayoutNode(
        "Container",
        "perm_root",
        full,
        children=(
            LayoutNode("TextView", "perm_message", Rect(5, 60, 80, 20),
                       label=f"Let {package_id} use {permission}?", color=1),
            LayoutNode("Button", ALLOW_ID, Rect(10, 90, 30, 14), label="ALLOW", color=4, clickable=True),
            LayoutNode("Button", DENY_ID, Rect(50, 90, 30, 14), label="DENY", color=9, clickable=True),
        ),
    )


def _crash_tree(package_id: str) -> LayoutNode:
    full = Rect(0, 0, GRID_W, GRID_H)
    return LayoutNode(
        "Container",
        "crash_root",
        full,
        children=(
            LayoutNode("TextView", "crash_message", Rect(5, 70, 80, 16),
                       label=f"{package_id} has stopped", color=1),
        ),
    )


# ---------------------------------------------------------------------------
# The device


class DeviceState:
    """Mutable session state. Construct through install()."""

    def __init__(self, model: AppModel, seed: int = 0):
        self.seed = seed
        self.event_log: list[SessionEvent] = []
        self._step = 0
        self.model = model
        self._reset_app_state()
        self._log("install", model.package_id, "ok")

    def install(self, model: AppModel) -> "DeviceState":
        """Replace the installed app. Seed and event log survive; app state does not."""
        self.model = model
        self._reset_app_state()
        self._log("install", model.package_id, "ok")
        return self

    def _reset_app_state(self) -> None:
        self.back_stack: list[str] = []
        self.granted_permissions: set[str] = set()
        self.logged_in = False
        self.foreground: Optional[LayoutNode] = None
        self.current_page: Optional[RenderedPage] = None
        self.interstitial: Optional[str] = None
        self.pending_launch: Optional[LaunchCommand] = None

    # -- logging

    def _log(self, op: str, args: str, outcome: str) -> None:
        self.event_log.append(SessionEvent(self._step, op, args, outcome))
        self._step += 1

    def log_lines(self) -> list[str]:
        return [event.line() for event in self.event_log]

    # -- queries

    def top_activity(self) -> Optional[str]:
        return self.back_stack[-1] if self.back_stack else None

    def dump_layout(self) -> LayoutNode:
        if self.foreground is None:
            raise DeviceError("nothing on screen")
        return self.foreground

    # -- commands

    def force_stop(self) -> "DeviceState":
        """Clear the app's runtime state. Grants and login persist. Idempotent."""
        self.back_stack = []
        self.foreground = None
        self.current_page = None
        self.interstitial = None
        self.pending_launch = None
        self._log("force_stop", self.model.package_id, "ok")
        return self

    def launch(self, cmd: LaunchCommand) -> LaunchOutcome:
        args = f"-n {self.model.package_id}/{cmd.target}"
        flags = format_extra_args(cmd.extras)
        if flags:
            args += " " + flags
        decl = self.model.manifest.activity(cmd.target)
        if decl is None:
            self._log("launch", args, "DeviceError")
            raise DeviceError(f"activity {cmd.target!r} is not declared")
        if not (decl.exported or decl.is_launcher):
            self._log("launch", args, "SecurityError")
            raise SecurityLaunchError(f"activity {cmd.target!r} is not exported")

        entry = self.model.runtime.entry(cmd.target)

        permission = entry.requires_permission
        if permission is not None and permission not in self.granted_permissions:
            self.foreground = _permission_prompt_tree(self.model.package_id, permission)
            self.current_page = None
            self.interstitial = "permission"
            self.pending_launch = cmd
            self._log("launch", args, STATUS_PROMPT)
            return LaunchOutcome(STATUS_PROMPT, self.top_activity(), None)

        if entry.requires_login and not self.logged_in:
            login = self.model.runtime.login_activity
            if login is None:
                self._log("launch", args, "DeviceError")
                raise DeviceError("no login activity to redirect to")
            page = self._render(login, ())
            self.back_stack.append(login)
            self.foreground = page.layout_dump
            self.current_page = page
            self.interstitial = None
            self._log("launch", args, f"{STATUS_REDIRECTED}({login})")
            return LaunchOutcome(STATUS_REDIRECTED, login, page)

        if entry.crash_if_missing and not _extras_satisfy(entry.required_extras, cmd.extras):
            self.foreground = _crash_tree(self.model.package_id)
            self.current_page = None
            self.interstitial = "crash"
            self._log("launch", args, f"{STATUS_CRASHED}({CRASH_CAUSE_MISSING_EXTRA})")
            return LaunchOutcome(
                STATUS_CRASHED, self.top_activity(), None, CRASH_CAUSE_MISSING_EXTRA
            )

        page = self._render(cmd.target, cmd.extras)
        self.back_stack.append(cmd.target)
        self.foreground = page.layout_dump
        self.current_page = page
        self.interstitial = None
        self._log("launch", args, f"{STATUS_RENDERED}({cmd.target})")
        return LaunchOutcome(STATUS_RENDERED, cmd.target, page)

    def tap(self, component_id: str) -> LaunchOutcome:
        if self.foreground is None:
            self._log("tap", component_id, "DeviceError")
            raise DeviceError("nothing on screen to tap")

        if self.interstitial == "permission":
            node = find_node(self.foreground, component_id)
            if node is None or not node.clickable:
                self._log("tap", component_id, "DeviceError")
                raise DeviceError(f"component {component_id!r} is not tappable")
            if component_id == ALLOW_ID:
                cmd = self.pending_launch
                permission = self.model.runtime.entry(cmd.target).requires_permission
                self.granted_permissions.add(permission)
                self.pending_launch = None
                self.interstitial = None
                self.foreground = None
                self._log("tap", component_id, "ALLOW")
                return self.launch(cmd)
            self.pending_launch = None
            self.interstitial = None
            self.foreground = None
            self._log("tap", component_id, "DENY")
            return LaunchOutcome(STATUS_PROMPT, self.top_activity(), None)

        if self.interstitial == "crash":
            self._log("tap", component_id, "DeviceError")
            raise DeviceError("application has stopped")

        node = find_node(self.foreground, component_id)
        if node is None:
            self._log("tap", component_id, "DeviceError")
            raise DeviceError(f"no component {component_id!r} on screen")
        if not node.clickable:
            self._log("tap", component_id, "DeviceError")
            raise DeviceError(f"component {component_id!r} is not clickable")
        if node.on_click is None:
            self._log("tap", component_id, "NoEffect")
            return LaunchOutcome(STATUS_RENDERED, self.top_activity(), self.current_page)
        action = node.on_click
        self._log("tap", component_id, f"Launch({action.target})")
        return self.launch(LaunchCommand(action.target, action.extras))

    # -- rendering

    def _bound_fragments(self, activity: str) -> list[str]:
        """Fragments bound anywhere in code reachable from the activity's methods."""
        unit = self.model.unit(activity)
        if unit is None:
            return []
        fragments: list[str] = []
        seen_methods: set[tuple[str, str]] = set()
        queue = [(unit.name, m.name) for m in unit.methods]
        seen_methods.update(queue)
        while queue:
            unit_name, method_name = queue.pop(0)
            owner = self.model.unit(unit_name)
            method = owner.method(method_name) if owner is not None else None
            if method is None:
                continue
            pending: Optional[str] = None
            for stmt in method.body:
                if isinstance(stmt, (FragmentAdd, FragmentReplace)):
                    pending = stmt.fragment
                elif isinstance(stmt, FragmentCommit):
                    if pending is not None and pending not in fragments:
                        fragments.append(pending)
                    pending = None
                elif isinstance(stmt, SetAdapter):
                    if stmt.fragment not in fragments:
                        fragments.append(stmt.fragment)
                elif isinstance(stmt, Call):
                    key = (stmt.unit, stmt.method)
                    if key not in seen_methods:
                        seen_methods.add(key)
                        queue.append(key)
        return fragments

    def _render(self, activity: str, extras: tuple[TypedExtra, ...]) -> RenderedPage:
        unit = self.model.unit(activity)
        if unit is None or unit.layout_ref is None:
            raise DeviceError(f"activity {activity!r} has no layout")
        root = self.model.layout(unit.layout_ref)

        for fragment in self._bound_fragments(activity):
            frag_unit = self.model.unit(fragment)
            if frag_unit is None or frag_unit.layout_ref is None:
                continue
            frag_root = self.model.layout(frag_unit.layout_ref)
            embedded = _prefix_ids(frag_root, fragment, root.bounds)
            root = replace(root, children=root.children + (embedded,))

        values = {e.key: _plain_value_text(e.value_type, e.value) for e in extras}
        root = _bind_labels(root, values)

        entry = self.model.runtime.entry(activity)
        placeholder = _EXTERNAL_PLACEHOLDERS.get(entry.external_data or "")
        if placeholder is not None:
            note = LayoutNode(
                "TextView",
                "external_placeholder",
                Rect(10, 72, 70, 16).intersect(root.bounds),
                label=placeholder,
                color=1,
            )
            root = replace(root, children=root.children + (note,))

        raster = _rasterize(root, partial=entry.external_data == "SlowLoad")
        components = tuple(
            ComponentInfo(n.node_id, n.node_type, n.clickable, n.bounds, n.label)
            for n in leaf_components(root)
        )
        return RenderedPage(activity, root, raster, components)


def install(model: AppModel, seed: int = 0) -> DeviceState:
    return DeviceState(model, seed)


# ---------------------------------------------------------------------------
# Exhaustive ground truth


def run_exhaustive(model: AppModel, seed: int = 0) -> Atg:
    """True reachable transition set, by brute force.

    Every declared activity is launched with its full runtime-required
    extras, login forced and permissions pre-granted, then every clickable
    launch component is tapped, breadth first up to the click depth cap,
    within the command budget. The result is the oracle tests compare
    analysis output against.
    """
    if not all(d.exported or d.is_launcher for d in model.manifest.declared_activities):
        raise AnalysisError("run_exhaustive needs an instrumented model")

    device = install(model, seed)
    device.logged_in = True
    for _, entry in model.runtime.entries:
        if entry.requires_permission is not None:
            device.granted_permissions.add(entry.requires_permission)

    atg = Atg()
    explored: set[str] = set()
    commands = 0

    def establish(activity: str) -> Optional[RenderedPage]:
        nonlocal commands
        device.force_stop()
        outcome = device.launch(LaunchCommand(activity, synthesize_required(model, activity, seed)))
        commands += 2
        return outcome.page if outcome.status == STATUS_RENDERED else None

    for root_name in model.manifest.activity_names():
        frontier = [(root_name, 0)]
        while frontier:
            activity, depth = frontier.pop(0)
            if activity in explored or depth > CLICK_DEPTH_CAP:
                continue
            if commands >= COMMAND_BUDGET:
                return atg
            explored.add(activity)
            page = establish(activity)
            if page is None:
                continue
            for comp in page.components:
                node = find_node(page.layout_dump, comp.node_id)
                if node is None or not node.clickable or node.on_click is None:
                    continue
                if commands + 3 > COMMAND_BUDGET:
                    return atg
                establish(activity)
                outcome = device.tap(comp.node_id)
                commands += 1
                if outcome.status in (STATUS_RENDERED, STATUS_REDIRECTED) and outcome.actual_activity:
                    target = outcome.actual_activity
                    atg.add_pair(
                        TransitionPair(activity, target, ORIGIN_DYNAMIC, f"Component:{comp.node_id}")
                    )
                    if target not in explored:
                        frontier.append((target, depth + 1))
    return atg
