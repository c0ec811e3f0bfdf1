"""Static activity transition graph extraction.

Walks every unit's statement IR looking for start sites, then attributes
each site to the activities that can actually reach it:

- sites inside an inner class belong to the outer class;
- sites inside a fragment are provisional until the fragment is bound to a
  host activity (add/replace followed by commit, or a pager adapter), at
  which point the fragment hop is collapsed away;
- everything else is attributed through the backward call closure, so a
  start hidden in a shared helper yields one pair per calling activity.

Unbound fragment edges are dropped at finalization and surface only as a
diagnostic count.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .callgraph import CallGraph, callers_of, method_id
from .model import (
    AppModel,
    FragmentAdd,
    FragmentCommit,
    FragmentReplace,
    IntentFilter,
    NewIntent,
    SetAdapter,
    StartActivity,
)

ORIGIN_STATIC = "Static"
ORIGIN_DYNAMIC = "Dynamic"

VIA_DIRECT = "Direct"
VIA_INNER = "InnerClass"
VIA_FRAGMENT = "Fragment"


@dataclass(frozen=True)
class TransitionPair:
    source: str
    target: str
    origin: str = ORIGIN_STATIC
    via: str = VIA_DIRECT


@dataclass
class Atg:
    """Ordered pair set. Pair identity is (source, target); first entry wins."""

    pairs: list[TransitionPair] = field(default_factory=list)
    pending_fragment_edges: list[tuple[str, str]] = field(default_factory=list)
    dropped_fragment_edges: int = 0
    diagnostics: list[str] = field(default_factory=list)

    def add_pair(self, pair: TransitionPair) -> bool:
        key = (pair.source, pair.target)
        if key in self.pair_keys():
            return False
        self.pairs.append(pair)
        return True

    def pair_keys(self) -> set[tuple[str, str]]:
        return {(p.source, p.target) for p in self.pairs}

    def endpoints(self) -> set[str]:
        out: set[str] = set()
        for p in self.pairs:
            out.add(p.source)
            out.add(p.target)
        return out


def filter_matches(spec: IntentFilter, filt: IntentFilter) -> bool:
    """Action must be equal, spec categories a subset, data/mime equal when given."""
    if spec.action != filt.action:
        return False
    if not set(spec.categories) <= set(filt.categories):
        return False
    if spec.data is not None and spec.data != filt.data:
        return False
    if spec.mime_type is not None and spec.mime_type != filt.mime_type:
        return False
    return True


def resolve_target(model: AppModel, intent: NewIntent) -> Optional[str]:
    """Name of the component an intent starts, or None.

    Explicit intents resolve against declared activities and services.
    Implicit intents take the first declared activity (manifest order) with
    a matching filter; ties are therefore broken by declaration order.
    """
    if intent.target is not None:
        if model.manifest.activity(intent.target) is not None:
            return intent.target
        if intent.target in model.manifest.declared_services:
            return intent.target
        return None
    spec = intent.spec
    if spec is None:
        return None
    for decl in model.manifest.declared_activities:
        for filt in decl.intent_filters:
            if filter_matches(spec, filt):
                return decl.name
    return None


def _ordered_activities(model: AppModel, names: set[str]) -> list[str]:
    """Stable order for a set of activity names: unit declaration order."""
    return [u.name for u in model.units if u.name in names]


def extract_static_atg(model: AppModel, cg: CallGraph) -> Atg:
    atg = Atg()
    bindings: list[tuple[str, str]] = []  # (host activity, fragment)

    def record_binding(mid: str, fragment: str) -> None:
        hosts = callers_of(cg, mid)
        for host in _ordered_activities(model, hosts):
            if (host, fragment) not in bindings:
                bindings.append((host, fragment))

    for unit in model.units:
        for method in unit.methods:
            mid = method_id(unit.name, method.name)
            intent_vars: dict[str, NewIntent] = {}
            pending_fragment: Optional[str] = None
            for idx, stmt in enumerate(method.body):
                if isinstance(stmt, NewIntent):
                    intent_vars[stmt.var] = stmt
                elif isinstance(stmt, (FragmentAdd, FragmentReplace)):
                    pending_fragment = stmt.fragment
                elif isinstance(stmt, FragmentCommit):
                    if pending_fragment is not None:
                        record_binding(mid, pending_fragment)
                        pending_fragment = None
                elif isinstance(stmt, SetAdapter):
                    record_binding(mid, stmt.fragment)
                elif isinstance(stmt, StartActivity):
                    intent = intent_vars.get(stmt.var)
                    if intent is None:
                        atg.diagnostics.append(f"{mid}[{idx}]: start of an unbound intent, skipped")
                        continue
                    target = resolve_target(model, intent)
                    if target is None:
                        if intent.target is not None:
                            atg.diagnostics.append(
                                f"{mid}[{idx}]: undeclared target {intent.target!r}, skipped"
                            )
                        continue
                    _attribute_site(model, cg, atg, unit, mid, target)

    _merge_fragments(atg, bindings)
    return atg


def _attribute_site(model, cg, atg: Atg, unit, mid: str, target: str) -> None:
    if unit.kind == "Inner":
        outer = model.unit(unit.outer) if unit.outer else None
        if outer is None:
            atg.diagnostics.append(f"{mid}: inner class without outer, skipped")
            return
        if outer.kind == "Fragment":
            atg.pending_fragment_edges.append((outer.name, target))
        elif outer.kind in ("Activity", "Service"):
            atg.add_pair(TransitionPair(outer.name, target, ORIGIN_STATIC, VIA_INNER))
        else:
            atg.diagnostics.append(f"{mid}: outer unit {outer.name} is {outer.kind}, skipped")
        return
    if unit.kind == "Fragment":
        atg.pending_fragment_edges.append((unit.name, target))
        return
    sources = callers_of(cg, mid)
    for act in _ordered_activities(model, sources):
        atg.add_pair(TransitionPair(act, target, ORIGIN_STATIC, VIA_DIRECT))


def _merge_fragments(atg: Atg, bindings: list[tuple[str, str]]) -> None:
    """Collapse fragment hops: host->fragment->target becomes host->target."""
    remaining: list[tuple[str, str]] = []
    for fragment, target in atg.pending_fragment_edges:
        hosts = [h for h, f in bindings if f == fragment]
        if not hosts:
            remaining.append((fragment, target))
            continue
        for host in hosts:
            atg.add_pair(TransitionPair(host, target, ORIGIN_STATIC, VIA_FRAGMENT))
    atg.dropped_fragment_edges = len(remaining)
    if remaining:
        atg.diagnostics.append(
            f"dropped {len(remaining)} fragment edge(s) whose fragment was never bound"
        )
    atg.pending_fragment_edges = []


def dump_atg(atg: Atg) -> str:
    """Sorted `source -> target [origin,via]` lines."""
    lines = [
        f"{p.source} -> {p.target} [{p.origin},{p.via}]"
        for p in sorted(atg.pairs, key=lambda p: (p.source, p.target))
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def parse_atg_dump(text: str) -> set[tuple[str, str]]:
    """Pair keys from a dump produced by dump_atg (annotations ignored)."""
    pairs: set[tuple[str, str]] = set()
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        head = line.split("[", 1)[0].strip()
        source, _, target = head.partition("->")
        pairs.add((source.strip(), target.strip()))
    return pairs
