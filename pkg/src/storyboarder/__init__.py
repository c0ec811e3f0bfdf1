"""Storyboard extraction for declarative mini-app models.

Parse an .app file, analyze its code for activity transitions and launch
parameters, drive a simulated device through every page, and assemble the
results into a single storyboard document.
"""

from .callgraph import CallGraph, build_call_graph, callees_of, callers_of
from .device import (
    DeviceState,
    LaunchCommand,
    LaunchOutcome,
    RenderedPage,
    install,
    page_to_ppm,
    run_exhaustive,
)
from .errors import (
    AnalysisError,
    DeviceError,
    DimensionMismatchError,
    DuplicateNameError,
    ModelReferenceError,
    ModelValidationError,
    ParseError,
    SecurityLaunchError,
    StoryboarderError,
    UndefinedMetricError,
)
from .explore import (
    ActivityOutcome,
    ExplorationReport,
    explore_components,
    hybrid_atg,
    render_all,
)
from .icc import IccTable, ParamSet, dump_icc, extract_icc, get_extras
from .instrument import instrument
from .model import AppModel, Diagnostic, validate
from .parser import load_app, parse_app, serialize_app
from .static_atg import Atg, TransitionPair, dump_atg, extract_static_atg, parse_atg_dump
from .storyboard import (
    MetricsReport,
    Storyboard,
    assemble,
    coverage,
    from_json,
    launch_ratio,
    page_similarity,
    run_distill,
    to_json,
)

__version__ = "0.1.0"

__all__ = [
    "ActivityOutcome",
    "AnalysisError",
    "AppModel",
    "Atg",
    "CallGraph",
    "DeviceError",
    "DeviceState",
    "Diagnostic",
    "DimensionMismatchError",
    "DuplicateNameError",
    "ExplorationReport",
    "IccTable",
    "LaunchCommand",
    "LaunchOutcome",
    "MetricsReport",
    "ModelReferenceError",
    "ModelValidationError",
    "ParamSet",
    "ParseError",
    "RenderedPage",
    "SecurityLaunchError",
    "Storyboard",
    "StoryboarderError",
    "TransitionPair",
    "UndefinedMetricError",
    "assemble",
    "build_call_graph",
    "callees_of",
    "callers_of",
    "coverage",
    "dump_atg",
    "dump_icc",
    "explore_components",
    "extract_icc",
    "extract_static_atg",
    "from_json",
    "get_extras",
    "hybrid_atg",
    "install",
    "instrument",
    "launch_ratio",
    "load_app",
    "page_similarity",
    "page_to_ppm",
    "parse_app",
    "parse_atg_dump",
    "render_all",
    "run_distill",
    "run_exhaustive",
    "serialize_app",
    "to_json",
    "validate",
]
