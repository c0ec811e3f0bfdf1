"""Metrics, assembly, and the JSON wire format."""

import json

import pytest

from storyboarder.corpus import fixture_names, load_fixture
from storyboarder.errors import DimensionMismatchError, UndefinedMetricError
from storyboarder.model import Manifest
from storyboarder.static_atg import Atg
from storyboarder.storyboard import (
    SCHEMA_VERSION,
    coverage,
    from_json,
    launch_ratio,
    page_similarity,
    run_distill,
    to_json,
)

RASTER_CELLS = 90 * 160


# -- coverage


@pytest.mark.parametrize(
    "name, expected",
    [("vespucci-mini", 1.0), ("ratio-mini", 0.3), ("click-only-mini", 1.0)],
)
def test_coverage_values(name, expected):
    sb = run_distill(load_fixture(name))
    assert sb.metrics.activity_coverage == pytest.approx(expected)


def test_coverage_counts_launcher_even_without_edges():
    sb = run_distill(load_fixture("click-only-mini"), static_only=True)
    assert sb.metrics.transition_pairs == 0
    assert sb.metrics.activity_coverage == 0.5  # launcher alone, out of two


def test_coverage_needs_declared_activities():
    with pytest.raises(UndefinedMetricError):
        coverage(Atg(), Manifest())


# -- launch ratio


def test_launch_ratio_value():
    sb = run_distill(load_fixture("ratio-mini"))
    assert sb.metrics.launch_ratio == 0.8


def test_launch_ratio_absent_in_static_mode():
    sb = run_distill(load_fixture("ratio-mini"), static_only=True)
    assert sb.metrics.launch_ratio is None


def test_launch_ratio_needs_declared_activities():
    from storyboarder.explore import ExplorationReport

    with pytest.raises(UndefinedMetricError):
        launch_ratio(ExplorationReport(), Manifest())


# -- raster similarity


def test_similarity_identical_is_exactly_one():
    a = bytes(RASTER_CELLS)
    scores = page_similarity(a, a)
    assert scores["mae_sim"] == 1.0
    assert scores["mse_sim"] == 1.0


def test_similarity_ten_percent_max_contrast():
    a = bytes(RASTER_CELLS)
    b = bytes([15] * (RASTER_CELLS // 10)) + bytes(RASTER_CELLS - RASTER_CELLS // 10)
    scores = page_similarity(a, b)
    assert scores["mae_sim"] == pytest.approx(0.9, abs=1e-9)
    assert scores["mse_sim"] == pytest.approx(0.9, abs=1e-9)


def test_similarity_closed_forms():
    assert page_similarity(bytes([0]), bytes([15]))["mae_sim"] == pytest.approx(0.0)
    assert page_similarity(bytes([0, 0]), bytes([15, 0]))["mae_sim"] == pytest.approx(0.5)
    # partial contrast separates the two scores: error 0.2 vs squared error 0.04
    scores = page_similarity(bytes([0]), bytes([3]))
    assert scores["mae_sim"] == pytest.approx(0.8)
    assert scores["mse_sim"] == pytest.approx(0.96)


def test_similarity_is_symmetric():
    a = bytes([1, 4, 9, 12])
    b = bytes([0, 15, 2, 7])
    assert page_similarity(a, b) == page_similarity(b, a)


def test_similarity_rejects_size_mismatch():
    with pytest.raises(DimensionMismatchError):
        page_similarity(bytes(10), bytes(11))


def test_similarity_rejects_empty():
    with pytest.raises(UndefinedMetricError):
        page_similarity(b"", b"")


@pytest.mark.parametrize("name", fixture_names())
def test_every_captured_page_matches_itself(name):
    sb = run_distill(load_fixture(name))
    for page in sb.pages.values():
        scores = page_similarity(page.raster, page.raster)
        assert scores == {"mae_sim": 1.0, "mse_sim": 1.0}


# -- assembly


def test_assembled_storyboard_shape():
    sb = run_distill(load_fixture("vespucci-mini"))
    assert sb.app_package == "org.vespucci.mini"
    assert len(sb.activity_code) == 4
    assert sb.metrics.transition_pairs == 2
    assert set(sb.pages) <= set(sb.activity_code)
    assert set(sb.components) == set(sb.activity_code)
    assert set(sb.layout_code) == set(sb.activity_code)
    for name, text in sb.layout_code.items():
        assert text.startswith("layout ")
    assert sb.metrics.similarity is None


def test_revision_reflects_instrumented_build():
    model = load_fixture("vespucci-mini")
    sb = run_distill(model)
    assert sb.app_revision == model.revision + 1


def test_inner_unit_code_rides_with_its_activity():
    sb = run_distill(load_fixture("adsdroid-mini"))
    code = sb.activity_code["SearchPanel"]
    assert "unit SearchPanel kind=Activity" in code
    assert "unit SearchHandler kind=Inner outer=SearchPanel" in code
    assert "start i" in code


def test_call_hierarchy_slices_by_caller():
    sb = run_distill(load_fixture("chain-mini"))
    assert sb.call_hierarchy["Home"] == (("Home.onCreate", "DataLoader.load"),)
    assert sb.call_hierarchy["Detail"] == ()


def test_components_captured_live_match_static_leaves():
    live = run_distill(load_fixture("chain-mini"))
    flat = run_distill(load_fixture("chain-mini"), static_only=True)
    assert [c.node_id for c in live.components["Home"]] == ["home_title", "btn_open"]
    assert [c.node_id for c in flat.components["Home"]] == ["home_title", "btn_open"]


def test_static_only_omits_runtime_sections():
    sb = run_distill(load_fixture("ratio-mini"), static_only=True)
    assert sb.pages == {}
    assert sb.outcomes == {}
    assert sb.timings == {}
    assert all(name in sb.components for name in sb.activity_code)


# -- wire format


@pytest.mark.parametrize("name", fixture_names())
def test_roundtrip_preserves_everything(name):
    sb = run_distill(load_fixture(name))
    encoded = to_json(sb)
    again = from_json(encoded)
    assert again == sb
    assert to_json(again) == encoded


def test_roundtrip_static_only():
    sb = run_distill(load_fixture("frag-pager-mini"), static_only=True)
    assert from_json(to_json(sb)) == sb


@pytest.mark.parametrize("name", ["vespucci-mini", "ratio-mini", "external-mini"])
def test_reruns_are_byte_identical(name):
    first = to_json(run_distill(load_fixture(name)))
    second = to_json(run_distill(load_fixture(name)))
    assert first == second


def test_json_is_canonical():
    text = to_json(run_distill(load_fixture("icc-mini")))
    assert text == json.dumps(json.loads(text), sort_keys=True, separators=(",", ":"))
    assert json.loads(text)["schema_version"] == SCHEMA_VERSION


def test_unknown_schema_version_rejected():
    doc = json.loads(to_json(run_distill(load_fixture("chain-mini"))))
    doc["schema_version"] = "999"
    with pytest.raises(ValueError) as err:
        from_json(json.dumps(doc))
    assert "schema_version" in str(err.value)
