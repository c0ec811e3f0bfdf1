"""Parser, serializer, and the errors they raise."""

import pytest

from storyboarder.corpus import fixture_names, fixture_path, load_fixture
from storyboarder.errors import (
    DuplicateNameError,
    ModelReferenceError,
    ModelValidationError,
    ParseError,
)
from storyboarder.model import (
    ClickAction,
    ExtraType,
    GetExtra,
    NewIntent,
    PutBundle,
    PutExtra,
    Rect,
    StartActivity,
)
from storyboarder.parser import parse_app, serialize_app

MINIMAL = """\
app com.x

manifest
  activity Main launcher

unit Main kind=Activity layout=l

layout l
  Container root bounds=0,0,90,160
"""


def test_minimal_document():
    model = parse_app(MINIMAL)
    assert model.package_id == "com.x"
    assert model.revision == 0
    assert model.manifest.launcher() == "Main"
    assert model.layout("l").bounds == Rect(0, 0, 90, 160)


def test_comments_and_blank_lines_are_ignored():
    text = "# header\n\n" + MINIMAL.replace("manifest", "# note\nmanifest")
    assert parse_app(text) == parse_app(MINIMAL)


def test_statement_forms():
    text = """\
app com.x
manifest
  activity Main launcher
  activity Detail
unit Main kind=Activity layout=l
  method onCreate
    getextra String noteId
    getextra Bundle draft meta:String count:Integer
  method go
    intent i Detail
    putextra i noteId String
    putbundle i meta:String count:Integer
    start i for_result
  method seek
    intent j action=a.b.VIEW categories=c.DEFAULT,c.BROWSABLE data=https mime=text/plain
    start j
unit Detail kind=Activity layout=l
layout l
  Container root bounds=0,0,90,160
"""
    model = parse_app(text)
    main = model.unit("Main")
    created = main.method("onCreate").body
    assert created[0] == GetExtra(ExtraType("String"), "noteId")
    assert created[1] == GetExtra(
        ExtraType("Bundle", (("meta", ExtraType("String")), ("count", ExtraType("Integer")))),
        "draft",
    )
    go = main.method("go").body
    assert go[0] == NewIntent("i", "Detail", None)
    assert go[1] == PutExtra("i", "noteId", ExtraType("String"))
    assert go[2] == PutBundle("i", (("meta", ExtraType("String")), ("count", ExtraType("Integer"))))
    assert go[3] == StartActivity("i", "for_result")
    seek = main.method("seek").body[0]
    assert seek.target is None
    assert seek.spec.action == "a.b.VIEW"
    assert seek.spec.categories == ("c.DEFAULT", "c.BROWSABLE")
    assert seek.spec.data == "https"
    assert seek.spec.mime_type == "text/plain"


def test_click_action_literals():
    text = MINIMAL.replace(
        "  Container root bounds=0,0,90,160",
        '  Container root bounds=0,0,90,160\n'
        '    Button b bounds=1,1,10,10 clickable '
        'onclick=Main(s:String="a b",n:Integer=3,f:Boolean=true,'
        'x:Float=1.5,d:Bundle{m:String="q"}=ignored)',
    )
    # the bundle literal syntax is Bundle={...}; the above is malformed
    with pytest.raises(ParseError):
        parse_app(text)

    good = MINIMAL.replace(
        "  Container root bounds=0,0,90,160",
        '  Container root bounds=0,0,90,160\n'
        '    Button b bounds=1,1,10,10 clickable '
        'onclick=Main(s:String="a b",n:Integer=3,f:Boolean=true,'
        'x:Float=1.5,d:Bundle={m:String="q",k:Integer=7})',
    )
    model = parse_app(good)
    action = model.layout("l").children[0].on_click
    assert isinstance(action, ClickAction)
    values = {e.key: e.value for e in action.extras}
    assert values["s"] == "a b"
    assert values["n"] == 3
    assert values["f"] is True
    assert values["x"] == 1.5
    bundle = values["d"]
    assert [(e.key, e.value) for e in bundle] == [("m", "q"), ("k", 7)]
    types = {e.key: e.value_type for e in action.extras}
    assert types["d"].entries == (("m", ExtraType("String")), ("k", ExtraType("Integer")))


def test_quoted_labels_with_escapes():
    text = MINIMAL.replace(
        "Container root bounds=0,0,90,160",
        'Container root bounds=0,0,90,160 label="say \\"hi\\" \\\\ bye"',
    )
    model = parse_app(text)
    assert model.layout("l").label == 'say "hi" \\ bye'
    assert parse_app(serialize_app(model)) == model


# -- error positions


@pytest.mark.parametrize(
    "mutate, line, col, needle",
    [
        (lambda t: t.replace("  activity Main launcher", "\tactivity Main launcher"), 4, 1, "tabs"),
        (lambda t: t.replace("  activity Main launcher", "   activity Main launcher"), 4, 4, "multiple of two"),
        (lambda t: t.replace('layout l', 'layout l\n  Container a bounds=0,0,9,9\n      TextView b bounds=0,0,1,1'), 10, 1, "skips an indentation level"),
        (lambda t: t + '    EditText e bounds=0,0,-1,5\n', 10, 16, "positive width"),
        (lambda t: t + '    EditText e bounds=0,0,5\n', 10, 16, "bounds needs x,y,w,h"),
        (lambda t: t + '    Widget w bounds=0,0,5,5\n', 10, 5, "unknown node type"),
        (lambda t: t + '    EditText e bounds=0,0,5,5 label="oops\n', 10, 31, "unterminated string"),
    ],
)
def test_parse_error_positions(mutate, line, col, needle):
    with pytest.raises(ParseError) as err:
        parse_app(mutate(MINIMAL))
    assert err.value.line == line
    assert err.value.col == col
    assert needle in err.value.message


@pytest.mark.parametrize(
    "text, needle",
    [
        ("app com.x\napp com.y\n", "duplicate app declaration"),
        ("manifest\n", "missing app declaration"),
        ("app com.x\nwat\n", "unknown section"),
        ("app com.x revision=soon\n", "bad revision"),
        ("app com.x\nmanifest\n  activity A launcher flying\n", "unknown activity flag"),
        ("app com.x\nmanifest\n  activity A launcher\n    filter\n", "intent filter has no fields"),
        ("app com.x\nmanifest\n  activity A launcher\n    filter scheme=x\n", "unknown filter field"),
        ("app com.x\nunit U layout=l\n", "unit needs kind="),
        ("app com.x\nunit U kind=Widget\n", "unknown unit kind"),
        ("app com.x\nunit U kind=Plain\n  method m extra\n", "method header takes only a name"),
        ("app com.x\nunit U kind=Plain\n  method m\n    jump\n", "unknown statement"),
        ("app com.x\nunit U kind=Plain\n  method m\n    intent i\n", "intent needs at least 2"),
        ("app com.x\nunit U kind=Plain\n  method m\n    intent i A B\n", "explicit intent takes one target"),
        ("app com.x\nunit U kind=Plain\n  method m\n    putextra i k Word\n", "unknown extra type"),
        ("app com.x\nunit U kind=Plain\n  method m\n    start i maybe\n", "unknown start api"),
        ("app com.x\nunit U kind=Plain\n  method m\n    call open\n", "call target must be Unit.method"),
        ("app com.x\nunit U kind=Plain\n  method m\n    putbundle i meta\n", "expected key:Type"),
        ("app com.x\nlayout l\n", "has no root node"),
        ("app com.x\nlayout l\n  Container a bounds=0,0,9,9\n  Container b bounds=0,0,9,9\n", "more than one root"),
        ("app com.x\nruntime\n  for A\n    external Cloud\n", "unknown external kind"),
        ("app com.x\nruntime\n  for A\n    require k Word\n", "unknown extra type"),
        ("app com.x\nruntime\n  wat A\n", "unknown runtime entry"),
        ("app com.x\nruntime\nruntime\n", "duplicate runtime section"),
        ("app com.x\nmanifest\nmanifest\n", "duplicate manifest section"),
    ],
)
def test_parse_error_messages(text, needle):
    with pytest.raises(ParseError) as err:
        parse_app(text)
    assert needle in err.value.message


@pytest.mark.parametrize(
    "text, name",
    [
        ("app com.x\nmanifest\n  activity A launcher\n  activity A\n", "A"),
        ("app com.x\nmanifest\n  service S\n  service S\n", "S"),
        ("app com.x\nunit U kind=Plain\nunit U kind=Plain\n", "U"),
        ("app com.x\nunit U kind=Plain\n  method m\n  method m\n", "m"),
        ("app com.x\nlayout l\n  Container a bounds=0,0,9,9\nlayout l\n  Container b bounds=0,0,9,9\n", "l"),
        ("app com.x\nruntime\n  for A\n  for A\n", "A"),
    ],
)
def test_duplicate_names(text, name):
    with pytest.raises(DuplicateNameError) as err:
        parse_app(text)
    assert err.value.name == name


@pytest.mark.parametrize(
    "text, missing",
    [
        ("app com.x\nmanifest\n  activity Main launcher\nunit Main kind=Activity layout=ghost\n", "ghost"),
        (
            "app com.x\nmanifest\n  activity Main launcher\n"
            "unit Main kind=Activity layout=l\nunit In kind=Inner outer=Ghost\n"
            "layout l\n  Container r bounds=0,0,9,9\n",
            "Ghost",
        ),
        (
            "app com.x\nmanifest\n  activity Main launcher\n"
            "unit Main kind=Activity layout=l\n  method onCreate\n    add_fragment Ghost\n    commit_fragment\n"
            "layout l\n  Container r bounds=0,0,9,9\n",
            "Ghost",
        ),
        (
            "app com.x\nmanifest\n  activity Main launcher\n"
            "unit Main kind=Activity layout=l\n"
            "layout l\n  Button b bounds=0,0,9,9 clickable onclick=Ghost\n",
            "Ghost",
        ),
        (
            "app com.x\nmanifest\n  activity Main launcher\n"
            "unit Main kind=Activity layout=l\n"
            "layout l\n  Container r bounds=0,0,9,9\n"
            "runtime\n  login_activity Ghost\n",
            "Ghost",
        ),
        (
            "app com.x\nmanifest\n  activity Main launcher\n"
            "unit Main kind=Activity layout=l\n"
            "layout l\n  Container r bounds=0,0,9,9\n"
            "runtime\n  for Ghost\n    requires_login\n",
            "Ghost",
        ),
    ],
)
def test_reference_errors(text, missing):
    with pytest.raises(ModelReferenceError) as err:
        parse_app(text)
    assert err.value.missing == missing


def test_validation_error_carries_diagnostics():
    text = "app com.x\nmanifest\n  activity Main\nunit Main kind=Activity layout=l\nlayout l\n  Container r bounds=0,0,9,9\n"
    with pytest.raises(ModelValidationError) as err:
        parse_app(text)
    assert any("launcher" in d.message for d in err.value.diagnostics)


# -- round trips and golden bytes


@pytest.mark.parametrize("name", fixture_names())
def test_fixture_round_trip(name, corpus):
    model = corpus[name]
    text = serialize_app(model)
    again = parse_app(text)
    assert again == model
    assert serialize_app(again) == text


@pytest.mark.parametrize("name", ["vespucci-mini", "deep-extra-mini", "perm-mini"])
def test_golden_serialization(name):
    import pathlib

    golden = pathlib.Path(__file__).parent / "golden" / f"{name}.app"
    expected = golden.read_text(encoding="utf-8")
    assert serialize_app(load_fixture(name)) == expected


def test_corpus_is_large_enough():
    names = fixture_names()
    assert len(names) >= 12
    for name in names:
        assert str(fixture_path(name)).endswith(".app")


@pytest.mark.parametrize("name", fixture_names())
def test_fixture_activity_budget(name, corpus):
    assert len(corpus[name].manifest.declared_activities) <= 15
