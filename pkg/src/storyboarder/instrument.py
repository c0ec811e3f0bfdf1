"""Model instrumentation: make every declared activity directly launchable.

The device refuses direct launches into non-exported, non-launcher
activities, so analyses that need to render everything first rewrite the
manifest. Only the exported flags change; the revision counter increments
once per rewrite that actually changed something, which keeps the operation
idempotent.
"""

from __future__ import annotations

from dataclasses import replace

from .model import AppModel, Manifest


def instrument(model: AppModel) -> AppModel:
    """Return a model whose activities are all exported."""
    if all(decl.exported for decl in model.manifest.declared_activities):
        return model
    activities = tuple(
        replace(decl, exported=True) for decl in model.manifest.declared_activities
    )
    manifest = Manifest(activities, model.manifest.declared_services)
    return replace(model, manifest=manifest, revision=model.revision + 1)
