"""Command line behavior, driven through main() with in-process capture."""

import json

import pytest

from storyboarder.cli import main
from storyboarder.corpus import fixture_path
from storyboarder.storyboard import from_json


def app(name):
    return str(fixture_path(name))


def test_distill_writes_loadable_json(tmp_path, capsys):
    out = tmp_path / "icc.storyboard.json"
    assert main(["distill", app("icc-mini"), "-o", str(out)]) == 0
    assert capsys.readouterr().out == ""
    text = out.read_text(encoding="utf-8")
    assert text.endswith("\n")
    sb = from_json(text)
    assert sb.app_package == "org.iccdemo.mini"


def test_distill_prints_json_by_default(capsys):
    assert main(["distill", app("chain-mini")]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["schema_version"] == "1"
    assert doc["app"]["package_id"] == "dev.chain.mini"


def test_distill_dump_atg(capsys):
    assert main(["distill", app("chain-mini"), "--dump-atg"]) == 0
    out = capsys.readouterr().out
    assert out == "Home -> Detail [Static,Direct]\n"


def test_distill_dump_icc(capsys):
    assert main(["distill", app("icc-mini"), "--dump-icc"]) == 0
    out = capsys.readouterr().out
    assert "Detail: [] / [returnKey1:String]" in out


def test_distill_metrics(capsys):
    assert main(["distill", app("ratio-mini"), "--metrics"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines == [
        "transition_pairs: 2",
        "activity_coverage: 0.3000",
        "launch_ratio: 0.8000",
    ]


def test_distill_static_only_metrics(capsys):
    assert main(["distill", app("ratio-mini"), "--static-only", "--metrics"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "transition_pairs: 2"
    assert all(not line.startswith("launch_ratio") for line in lines)


def test_oracle_dump(capsys):
    assert main(["oracle", app("click-only-mini")]) == 0
    out = capsys.readouterr().out
    assert out == "Main -> HiddenDetail [Dynamic,Component:btn_secret]\n"


def test_compare_reports_signed_diff(tmp_path, capsys):
    before = tmp_path / "before.atg"
    after = tmp_path / "after.atg"
    before.write_text("A -> B [Static,Direct]\nA -> C [Static,Direct]\n", encoding="utf-8")
    after.write_text("A -> B [Static,Direct]\nB -> D [Dynamic,Component:x]\n", encoding="utf-8")
    assert main(["compare", str(before), str(after)]) == 0
    assert capsys.readouterr().out == "+ B -> D\n- A -> C\n"


def test_compare_identical_is_silent(tmp_path, capsys):
    dump = tmp_path / "same.atg"
    dump.write_text("A -> B [Static,Direct]\n", encoding="utf-8")
    assert main(["compare", str(dump), str(dump)]) == 0
    assert capsys.readouterr().out == ""


def test_rollup_csv(tmp_path, capsys):
    paths = []
    for name in ("chain-mini", "ratio-mini"):
        out = tmp_path / f"{name}.json"
        assert main(["distill", app(name), "-o", str(out)]) == 0
        paths.append(str(out))
    assert main(["rollup", *paths]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "package,revision,transition_pairs,activity_coverage,launch_ratio"
    assert lines[1] == "dev.chain.mini,2,1,1.0000,1.0000"
    assert lines[2].startswith("com.")
    assert lines[2].endswith(",2,0.3000,0.8000")


def test_rollup_to_file(tmp_path, capsys):
    sb_path = tmp_path / "sb.json"
    assert main(["distill", app("chain-mini"), "-o", str(sb_path)]) == 0
    csv_path = tmp_path / "summary.csv"
    assert main(["rollup", str(sb_path), "-o", str(csv_path)]) == 0
    assert capsys.readouterr().out == ""
    body = csv_path.read_text(encoding="utf-8")
    assert body.startswith("package,revision,")
    assert "dev.chain.mini" in body


def test_missing_file_is_a_clean_error(capsys):
    assert main(["distill", "no-such-file.app"]) == 2
    err = capsys.readouterr().err
    assert err.startswith("error:")


def test_unparsable_model_is_a_clean_error(tmp_path, capsys):
    bad = tmp_path / "bad.app"
    bad.write_text("app com.bad\n\tmanifest\n", encoding="utf-8")
    assert main(["distill", str(bad)]) == 2
    err = capsys.readouterr().err
    assert err.startswith("error:")
    assert "line 2" in err


def test_invalid_model_is_a_clean_error(tmp_path, capsys):
    bad = tmp_path / "twolaunchers.app"
    bad.write_text(
        "app com.bad\nmanifest\n  activity A launcher\n  activity B launcher\n"
        "unit A kind=Activity layout=l\nunit B kind=Activity layout=l\n"
        "layout l\n  Container root bounds=0,0,90,160\n",
        encoding="utf-8",
    )
    assert main(["distill", str(bad)]) == 2
    assert "error:" in capsys.readouterr().err


def test_rollup_rejects_foreign_schema(tmp_path, capsys):
    fake = tmp_path / "fake.json"
    fake.write_text('{"schema_version":"999"}', encoding="utf-8")
    assert main(["rollup", str(fake)]) == 2
    assert "schema_version" in capsys.readouterr().err


def test_unknown_subcommand_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
