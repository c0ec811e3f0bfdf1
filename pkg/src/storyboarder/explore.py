"""Dynamic exploration: launch every activity, then tap everything tappable.

Two phases. render_all walks the manifest and launches each declared
activity once from a fresh state, feeding it extras synthesized from the
extracted parameter table, auto-granting permission prompts with a single
retry. Pages are recorded under the activity that actually ended up in the
foreground, so a login redirect files its page under the login activity.

explore_components then revisits every captured page and taps each
interactive component once, from a fresh launch per tap so earlier taps
cannot leak state. A tap that lands on an activity produces a Dynamic
transition pair unless static analysis already knew the edge. Raising
explore_depth widens the sweep to pages first reached by those taps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .device import (
    ALLOW_ID,
    COMMAND_BUDGET,
    DeviceState,
    LaunchCommand,
    LaunchOutcome,
    RenderedPage,
    STATUS_PROMPT,
    STATUS_REDIRECTED,
    STATUS_RENDERED,
    synthesize_extras,
)
from .errors import SecurityLaunchError
from .icc import IccTable
from .model import AppModel
from .static_atg import Atg, ORIGIN_DYNAMIC, TransitionPair

OUTCOME_LAUNCHED = "Launched"
OUTCOME_CRASHED = "Crashed"
OUTCOME_UNREACHABLE = "Unreachable"

INTERACTIVE_TYPES = ("Button", "ImageButton", "TextView")


@dataclass(frozen=True)
class ActivityOutcome:
    status: str
    cause: Optional[str] = None


@dataclass
class ExplorationReport:
    outcomes: dict[str, ActivityOutcome] = field(default_factory=dict)
    pages: dict[str, RenderedPage] = field(default_factory=dict)
    dynamic_pairs: tuple[TransitionPair, ...] = ()
    timings: dict[str, int] = field(default_factory=dict)


def _fresh_launch(
    device: DeviceState, model: AppModel, icc: IccTable, activity: str,
    timings: dict[str, int], phase: str,
) -> LaunchOutcome:
    """force_stop, launch with synthesized extras, retry once through a prompt."""
    device.force_stop()
    extras = synthesize_extras(model, icc.params_for(activity), activity, device.seed)
    outcome = device.launch(LaunchCommand(activity, extras))
    timings[phase] = timings.get(phase, 0) + 1
    if outcome.status == STATUS_PROMPT:
        outcome = device.tap(ALLOW_ID)
        timings["prompt_retries"] = timings.get("prompt_retries", 0) + 1
    return outcome


def render_all(model: AppModel, icc: IccTable, device: DeviceState) -> ExplorationReport:
    """Launch each declared activity once; record outcomes and foreground pages."""
    report = ExplorationReport(timings={"render_launches": 0, "prompt_retries": 0})
    for name in model.manifest.activity_names():
        try:
            outcome = _fresh_launch(device, model, icc, name, report.timings, "render_launches")
        except SecurityLaunchError as exc:
            report.outcomes[name] = ActivityOutcome(OUTCOME_UNREACHABLE, str(exc))
            continue
        if outcome.status == STATUS_RENDERED:
            report.outcomes[name] = ActivityOutcome(OUTCOME_LAUNCHED)
            report.pages[outcome.actual_activity] = outcome.page
        elif outcome.status == STATUS_REDIRECTED:
            report.outcomes[name] = ActivityOutcome(
                OUTCOME_UNREACHABLE, f"Redirected({outcome.actual_activity})"
            )
            report.pages[outcome.actual_activity] = outcome.page
        elif outcome.status == STATUS_PROMPT:
            report.outcomes[name] = ActivityOutcome(OUTCOME_UNREACHABLE, "PermissionDenied")
        else:
            report.outcomes[name] = ActivityOutcome(OUTCOME_CRASHED, outcome.cause)
    return report


def _establish(
    device: DeviceState, model: AppModel, icc: IccTable,
    page_name: str, base: str, path: tuple[str, ...],
    timings: dict[str, int],
) -> Optional[RenderedPage]:
    """Bring page_name to the foreground in a fresh app state.

    A direct launch is tried first; when gates make that land elsewhere,
    the recorded click path from `base` is replayed instead.
    """
    outcome = _fresh_launch(device, model, icc, page_name, timings, "explore_launches")
    if outcome.status == STATUS_RENDERED and outcome.actual_activity == page_name:
        return outcome.page
    if not path:
        return None
    outcome = _fresh_launch(device, model, icc, base, timings, "explore_launches")
    if outcome.status != STATUS_RENDERED:
        return None
    for component_id in path:
        outcome = device.tap(component_id)
        timings["explore_taps"] = timings.get("explore_taps", 0) + 1
        if outcome.status not in (STATUS_RENDERED, STATUS_REDIRECTED):
            return None
    if outcome.actual_activity == page_name:
        return outcome.page
    return None


def explore_components(
    model: AppModel,
    report: ExplorationReport,
    device: DeviceState,
    *,
    icc: Optional[IccTable] = None,
    static: Optional[Atg] = None,
    explore_depth: int = 1,
    budget: int = COMMAND_BUDGET,
) -> tuple[TransitionPair, ...]:
    """Tap every interactive component of every captured page once.

    Returns the Dynamic pairs not already present in `static`, in discovery
    order, and stores them on the report. Pages first reached by a tap are
    themselves explored when explore_depth allows another wave.
    """
    icc = icc if icc is not None else IccTable()
    known = set(static.pair_keys()) if static is not None else set()
    timings = report.timings
    timings.setdefault("explore_launches", 0)
    timings.setdefault("explore_taps", 0)
    pairs: list[TransitionPair] = []
    recorded: set[tuple[str, str]] = set()
    explored: set[str] = set()
    spent_base = len(device.event_log)

    wave: list[tuple[str, str, tuple[str, ...]]] = [
        (name, name, ()) for name in report.pages
    ]
    for _depth in range(explore_depth):
        next_wave: list[tuple[str, str, tuple[str, ...]]] = []
        for page_name, base, path in wave:
            if page_name in explored:
                continue
            if len(device.event_log) - spent_base >= budget:
                report.dynamic_pairs = tuple(pairs)
                return report.dynamic_pairs
            explored.add(page_name)
            page = _establish(device, model, icc, page_name, base, path, timings)
            if page is None:
                continue
            for comp in page.components:
                if comp.node_type not in INTERACTIVE_TYPES or not comp.clickable:
                    continue
                if len(device.event_log) - spent_base >= budget:
                    report.dynamic_pairs = tuple(pairs)
                    return report.dynamic_pairs
                if _establish(device, model, icc, page_name, base, path, timings) is None:
                    break
                depth_before = len(device.back_stack)
                outcome = device.tap(comp.node_id)
                timings["explore_taps"] += 1
                if outcome.status not in (STATUS_RENDERED, STATUS_REDIRECTED):
                    continue
                if len(device.back_stack) == depth_before:
                    continue
                target = outcome.actual_activity
                key = (page_name, target)
                if key not in known and key not in recorded:
                    recorded.add(key)
                    pairs.append(
                        TransitionPair(page_name, target, ORIGIN_DYNAMIC, f"Component:{comp.node_id}")
                    )
                if target not in explored:
                    next_wave.append((target, base, path + (comp.node_id,)))
        wave = next_wave
        if not wave:
            break
    report.dynamic_pairs = tuple(pairs)
    return report.dynamic_pairs


def hybrid_atg(static: Atg, dynamic) -> Atg:
    """Union of static pairs and dynamically discovered ones.

    First occurrence wins, so an edge known statically keeps its Static
    origin even when exploration rediscovers it.
    """
    out = Atg()
    for pair in static.pairs:
        out.add_pair(pair)
    for pair in dynamic:
        out.add_pair(pair)
    out.dropped_fragment_edges = static.dropped_fragment_edges
    out.diagnostics = list(static.diagnostics)
    return out
