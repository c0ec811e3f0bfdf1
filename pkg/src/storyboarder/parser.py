"""Parsing and serialization of mini-app documents.

The text format is line oriented: `verb arg1 arg2 ...`, with 2-space
indentation expressing section nesting. docs/format.md holds the grammar;
the golden files under tests/golden freeze the canonical serialization.

parse_app returns a validated AppModel or raises: ParseError for syntax,
DuplicateNameError / ModelReferenceError for naming problems, and
ModelValidationError wrapping any remaining invariant diagnostics.
"""

from __future__ import annotations

from typing import Optional

from .errors import (
    DuplicateNameError,
    ModelReferenceError,
    ModelValidationError,
    ParseError,
)
from .model import (
    ActivityDecl,
    AppModel,
    Call,
    ClickAction,
    TypedExtra,
    ExtraType,
    FragmentAdd,
    FragmentCommit,
    FragmentReplace,
    GetExtra,
    IntentFilter,
    LayoutNode,
    Manifest,
    MethodDef,
    NewIntent,
    Nop,
    PutBundle,
    PutExtra,
    Rect,
    RuntimeEntry,
    RuntimeSpec,
    SetAdapter,
    StartActivity,
    Stmt,
    UnitDef,
    NODE_TYPES,
    PRIMITIVE_EXTRA_KINDS,
    UNIT_KINDS,
    EXTERNAL_KINDS,
    validate,
)


class _Token:
    __slots__ = ("text", "col")

    def __init__(self, text: str, col: int):
        self.text = text
        self.col = col


class _Line:
    __slots__ = ("no", "depth", "tokens")

    def __init__(self, no: int, depth: int, tokens: list[_Token]):
        self.no = no
        self.depth = depth
        self.tokens = tokens

    @property
    def verb(self) -> str:
        return self.tokens[0].text


def _scan_tokens(raw: str, line_no: int) -> list[_Token]:
    tokens: list[_Token] = []
    i = 0
    n = len(raw)
    while i < n:
        if raw[i].isspace():
            i += 1
            continue
        start = i
        in_quote = False
        while i < n:
            ch = raw[i]
            if in_quote:
                if ch == "\\" and i + 1 < n:
                    i += 2
                    continue
                if ch == '"':
                    in_quote = False
            elif ch == '"':
                in_quote = True
            elif ch.isspace():
                break
            i += 1
        if in_quote:
            raise ParseError(line_no, start + 1, "unterminated string")
        tokens.append(_Token(raw[start:i], start + 1))
    return tokens


def _prepare_lines(text: str) -> list[_Line]:
    lines: list[_Line] = []
    for no, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "\t" in raw[: len(raw) - len(raw.lstrip())]:
            raise ParseError(no, raw.index("\t") + 1, "tabs are not allowed in indentation")
        indent = len(raw) - len(raw.lstrip(" "))
        if indent % 2 != 0:
            raise ParseError(no, indent + 1, "indentation must be a multiple of two spaces")
        lines.append(_Line(no, indent // 2, _scan_tokens(raw, no)))
    return lines


def _unquote(token: _Token, line_no: int) -> str:
    text = token.text
    if not (len(text) >= 2 and text[0] == '"' and text[-1] == '"'):
        raise ParseError(line_no, token.col, "expected a quoted string")
    out: list[str] = []
    i = 1
    while i < len(text) - 1:
        ch = text[i]
        if ch == "\\" and i + 1 < len(text) - 1:
            out.append(text[i + 1])
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def _unquote_str(text: str, line_no: int, col: int) -> str:
    return _unquote(_Token(text, col), line_no)


def _split_kv(token: _Token, line_no: int) -> tuple[str, str]:
    text = token.text
    eq = -1
    in_quote = False
    for i, ch in enumerate(text):
        if ch == '"':
            in_quote = not in_quote
        elif ch == "=" and not in_quote:
            eq = i
            break
    if eq <= 0:
        raise ParseError(line_no, token.col, f"expected key=value, got {text!r}")
    return text[:eq], text[eq + 1 :]


def _parse_extra_kind(text: str, line_no: int, col: int) -> ExtraType:
    if text not in PRIMITIVE_EXTRA_KINDS:
        raise ParseError(line_no, col, f"unknown extra type {text!r}")
    return ExtraType(text)


def _parse_entry_item(item: str, line_no: int, col: int) -> tuple[str, ExtraType]:
    if ":" not in item:
        raise ParseError(line_no, col, f"expected key:Type, got {item!r}")
    key, kind = item.split(":", 1)
    if not key:
        raise ParseError(line_no, col, "empty bundle entry key")
    return key, _parse_extra_kind(kind, line_no, col)


def _split_top(text: str, sep: str) -> list[str]:
    """Split on sep at nesting depth zero, respecting quotes and braces."""
    parts: list[str] = []
    depth = 0
    in_quote = False
    cur: list[str] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if in_quote:
            if ch == "\\" and i + 1 < len(text):
                cur.append(ch)
                cur.append(text[i + 1])
                i += 2
                continue
            if ch == '"':
                in_quote = False
            cur.append(ch)
        elif ch == '"':
            in_quote = True
            cur.append(ch)
        elif ch in "({":
            depth += 1
            cur.append(ch)
        elif ch in ")}":
            depth -= 1
            cur.append(ch)
        elif ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
        i += 1
    parts.append("".join(cur))
    return parts


def _parse_literal(value_type: ExtraType, text: str, line_no: int, col: int):
    kind = value_type.kind
    try:
        if kind == "String":
            return _unquote_str(text, line_no, col)
        if kind == "Integer":
            return int(text)
        if kind == "Boolean":
            if text not in ("true", "false"):
                raise ValueError(text)
            return text == "true"
        if kind == "Float":
            return float(text)
    except ValueError:
        raise ParseError(line_no, col, f"bad {kind} literal {text!r}") from None
    if kind == "Bundle":
        if not (text.startswith("{") and text.endswith("}")):
            raise ParseError(line_no, col, f"bad Bundle literal {text!r}")
        inner = text[1:-1]
        extras: list[TypedExtra] = []
        if inner:
            for item in _split_top(inner, ","):
                extras.append(_parse_click_extra(item, line_no, col))
        return tuple(extras)
    raise ParseError(line_no, col, f"unknown extra type {kind!r}")


def _parse_click_extra(item: str, line_no: int, col: int) -> TypedExtra:
    if ":" not in item:
        raise ParseError(line_no, col, f"expected key:Type=value, got {item!r}")
    key, rest = item.split(":", 1)
    eq = -1
    in_quote = False
    depth = 0
    for i, ch in enumerate(rest):
        if ch == '"':
            in_quote = not in_quote
        elif ch in "({":
            depth += 1
        elif ch in ")}":
            depth -= 1
        elif ch == "=" and not in_quote and depth == 0:
            eq = i
            break
    if eq < 0:
        raise ParseError(line_no, col, f"expected key:Type=value, got {item!r}")
    kind_text = rest[:eq]
    value_text = rest[eq + 1 :]
    if kind_text == "Bundle":
        value = _parse_literal(ExtraType("Bundle"), value_text, line_no, col)
        entries = tuple((e.key, e.value_type) for e in value)
        value_type = ExtraType("Bundle", entries)
    else:
        value_type = _parse_extra_kind(kind_text, line_no, col)
        value = _parse_literal(value_type, value_text, line_no, col)
    return TypedExtra(key, value_type, value)


def _parse_click_action(text: str, line_no: int, col: int) -> ClickAction:
    if "(" not in text:
        return ClickAction(text)
    if not text.endswith(")"):
        raise ParseError(line_no, col, f"bad click action {text!r}")
    target, inner = text[:-1].split("(", 1)
    extras: list[TypedExtra] = []
    if inner:
        for item in _split_top(inner, ","):
            extras.append(_parse_click_extra(item, line_no, col))
    return ClickAction(target, tuple(extras))


def _parse_filter_args(tokens: list[_Token], line: _Line) -> IntentFilter:
    action = data = mime = None
    categories: tuple[str, ...] = ()
    for tok in tokens:
        key, value = _split_kv(tok, line.no)
        if key == "action":
            action = value
        elif key == "categories":
            categories = tuple(value.split(","))
        elif key == "data":
            data = value
        elif key == "mime":
            mime = value
        else:
            raise ParseError(line.no, tok.col, f"unknown filter field {key!r}")
    filt = IntentFilter(action, categories, data, mime)
    if filt.is_empty():
        raise ParseError(line.no, line.tokens[0].col, "intent filter has no fields")
    return filt


class _Parser:
    def __init__(self, text: str):
        self.lines = _prepare_lines(text)
        self.pos = 0
        self.package_id: Optional[str] = None
        self.revision = 0
        self.activities: list[ActivityDecl] = []
        self.services: list[str] = []
        self.units: list[UnitDef] = []
        self.layouts: list[tuple[str, LayoutNode]] = []
        self.login_activity: Optional[str] = None
        self.runtime_entries: list[tuple[str, RuntimeEntry]] = []
        self.seen_manifest = False
        self.seen_runtime = False

    # -- cursor helpers

    def peek(self) -> Optional[_Line]:
        return self.lines[self.pos] if self.pos < len(self.lines) else None

    def next_at(self, depth: int) -> Optional[_Line]:
        line = self.peek()
        if line is None or line.depth != depth:
            return None
        self.pos += 1
        return line

    def expect_args(self, line: _Line, count: int) -> None:
        if len(line.tokens) - 1 < count:
            raise ParseError(line.no, line.tokens[-1].col, f"{line.verb} needs at least {count} argument(s)")

    # -- top level

    def parse(self) -> AppModel:
        while True:
            line = self.peek()
            if line is None:
                break
            if line.depth != 0:
                raise ParseError(line.no, 1, "unexpected indentation at top level")
            self.pos += 1
            verb = line.verb
            if verb == "app":
                self.parse_app_line(line)
            elif verb == "manifest":
                self.parse_manifest(line)
            elif verb == "unit":
                self.parse_unit(line)
            elif verb == "layout":
                self.parse_layout(line)
            elif verb == "runtime":
                self.parse_runtime(line)
            else:
                raise ParseError(line.no, line.tokens[0].col, f"unknown section {verb!r}")
        if self.package_id is None:
            raise ParseError(1, 1, "missing app declaration")
        model = AppModel(
            package_id=self.package_id,
            manifest=Manifest(tuple(self.activities), tuple(self.services)),
            units=tuple(self.units),
            layouts=tuple(self.layouts),
            runtime=RuntimeSpec(self.login_activity, tuple(self.runtime_entries)),
            revision=self.revision,
        )
        self.check_references(model)
        diagnostics = validate(model)
        if diagnostics:
            raise ModelValidationError(diagnostics)
        return model

    def parse_app_line(self, line: _Line) -> None:
        if self.package_id is not None:
            raise ParseError(line.no, line.tokens[0].col, "duplicate app declaration")
        self.expect_args(line, 1)
        self.package_id = line.tokens[1].text
        for tok in line.tokens[2:]:
            key, value = _split_kv(tok, line.no)
            if key != "revision":
                raise ParseError(line.no, tok.col, f"unknown app field {key!r}")
            try:
                self.revision = int(value)
            except ValueError:
                raise ParseError(line.no, tok.col, f"bad revision {value!r}") from None

    # -- manifest

    def parse_manifest(self, header: _Line) -> None:
        if self.seen_manifest:
            raise ParseError(header.no, header.tokens[0].col, "duplicate manifest section")
        self.seen_manifest = True
        while True:
            line = self.next_at(1)
            if line is None:
                self._reject_deeper(1)
                return
            if line.verb == "activity":
                self.parse_activity_decl(line)
            elif line.verb == "service":
                self.expect_args(line, 1)
                name = line.tokens[1].text
                if name in self.services:
                    raise DuplicateNameError(name, f"line {line.no}: manifest service")
                self.services.append(name)
            else:
                raise ParseError(line.no, line.tokens[0].col, f"unknown manifest entry {line.verb!r}")

    def parse_activity_decl(self, line: _Line) -> None:
        self.expect_args(line, 1)
        name = line.tokens[1].text
        if any(a.name == name for a in self.activities):
            raise DuplicateNameError(name, f"line {line.no}: manifest activity")
        exported = False
        launcher = False
        for tok in line.tokens[2:]:
            if tok.text == "exported":
                exported = True
            elif tok.text == "launcher":
                launcher = True
            else:
                raise ParseError(line.no, tok.col, f"unknown activity flag {tok.text!r}")
        filters: list[IntentFilter] = []
        while True:
            sub = self.next_at(2)
            if sub is None:
                break
            if sub.verb != "filter":
                raise ParseError(sub.no, sub.tokens[0].col, f"unknown activity entry {sub.verb!r}")
            filters.append(_parse_filter_args(sub.tokens[1:], sub))
        self.activities.append(ActivityDecl(name, exported, launcher, tuple(filters)))

    # -- units

    def parse_unit(self, header: _Line) -> None:
        self.expect_args(header, 2)
        name = header.tokens[1].text
        if any(u.name == name for u in self.units):
            raise DuplicateNameError(name, f"line {header.no}: unit")
        kind = None
        outer = None
        layout_ref = None
        for tok in header.tokens[2:]:
            key, value = _split_kv(tok, header.no)
            if key == "kind":
                if value not in UNIT_KINDS:
                    raise ParseError(header.no, tok.col, f"unknown unit kind {value!r}")
                kind = value
            elif key == "outer":
                outer = value
            elif key == "layout":
                layout_ref = value
            else:
                raise ParseError(header.no, tok.col, f"unknown unit field {key!r}")
        if kind is None:
            raise ParseError(header.no, header.tokens[0].col, "unit needs kind=...")
        methods: list[MethodDef] = []
        while True:
            line = self.next_at(1)
            if line is None:
                self._reject_deeper(1)
                break
            if line.verb != "method":
                raise ParseError(line.no, line.tokens[0].col, f"unknown unit entry {line.verb!r}")
            self.expect_args(line, 1)
            mname = line.tokens[1].text
            if any(m.name == mname for m in methods):
                raise DuplicateNameError(mname, f"line {line.no}: method in unit {name}")
            if len(line.tokens) > 2:
                raise ParseError(line.no, line.tokens[2].col, "method header takes only a name")
            body: list[Stmt] = []
            while True:
                stmt_line = self.next_at(2)
                if stmt_line is None:
                    self._reject_deeper(2)
                    break
                body.append(self.parse_stmt(stmt_line))
            methods.append(MethodDef(mname, tuple(body)))
        self.units.append(UnitDef(name, kind, outer, layout_ref, tuple(methods)))

    def parse_stmt(self, line: _Line) -> Stmt:
        verb = line.verb
        toks = line.tokens
        if verb == "intent":
            self.expect_args(line, 2)
            var = toks[1].text
            if "=" in toks[2].text:
                filt = _parse_filter_args(toks[2:], line)
                return NewIntent(var, None, filt)
            if len(toks) > 3:
                raise ParseError(line.no, toks[3].col, "explicit intent takes one target")
            return NewIntent(var, toks[2].text, None)
        if verb == "putextra":
            self.expect_args(line, 3)
            if len(toks) > 4:
                raise ParseError(line.no, toks[4].col, "putextra takes var key Type")
            return PutExtra(toks[1].text, toks[2].text, _parse_extra_kind(toks[3].text, line.no, toks[3].col))
        if verb == "putbundle":
            self.expect_args(line, 2)
            entries = [_parse_entry_item(t.text, line.no, t.col) for t in toks[2:]]
            return PutBundle(toks[1].text, tuple(entries))
        if verb == "start":
            self.expect_args(line, 1)
            api = "start_activity"
            if len(toks) > 2:
                api = toks[2].text
                if api not in ("for_result", "if_needed"):
                    raise ParseError(line.no, toks[2].col, f"unknown start api {api!r}")
                if len(toks) > 3:
                    raise ParseError(line.no, toks[3].col, "start takes var [api]")
            return StartActivity(toks[1].text, api)
        if verb == "getextra":
            self.expect_args(line, 2)
            kind = toks[1].text
            key = toks[2].text
            if kind == "Bundle":
                entries = [_parse_entry_item(t.text, line.no, t.col) for t in toks[3:]]
                return GetExtra(ExtraType("Bundle", tuple(entries)), key)
            if len(toks) > 3:
                raise ParseError(line.no, toks[3].col, "getextra takes Type key")
            return GetExtra(_parse_extra_kind(kind, line.no, toks[1].col), key)
        if verb == "add_fragment":
            self.expect_args(line, 1)
            return FragmentAdd(toks[1].text)
        if verb == "replace_fragment":
            self.expect_args(line, 1)
            return FragmentReplace(toks[1].text)
        if verb == "commit_fragment":
            return FragmentCommit()
        if verb == "set_adapter":
            self.expect_args(line, 1)
            return SetAdapter(toks[1].text)
        if verb == "call":
            self.expect_args(line, 1)
            ref = toks[1].text
            if "." not in ref:
                raise ParseError(line.no, toks[1].col, "call target must be Unit.method")
            unit, method = ref.split(".", 1)
            return Call(unit, method)
        if verb == "nop":
            return Nop()
        raise ParseError(line.no, toks[0].col, f"unknown statement {verb!r}")

    # -- layouts

    def parse_layout(self, header: _Line) -> None:
        self.expect_args(header, 1)
        layout_id = header.tokens[1].text
        if any(lid == layout_id for lid, _ in self.layouts):
            raise DuplicateNameError(layout_id, f"line {header.no}: layout")
        root_line = self.next_at(1)
        if root_line is None:
            raise ParseError(header.no, header.tokens[0].col, f"layout {layout_id!r} has no root node")
        root = self.parse_node(root_line, 1)
        extra = self.peek()
        if extra is not None and extra.depth == 1:
            raise ParseError(extra.no, 1, "layout has more than one root node")
        self._reject_deeper(0)
        self.layouts.append((layout_id, root))

    def parse_node(self, line: _Line, depth: int) -> LayoutNode:
        toks = line.tokens
        node_type = toks[0].text
        if node_type not in NODE_TYPES:
            raise ParseError(line.no, toks[0].col, f"unknown node type {node_type!r}")
        self.expect_args(line, 1)
        node_id = toks[1].text
        bounds = None
        label = ""
        color = 0
        clickable = False
        on_click = None
        for tok in toks[2:]:
            if tok.text == "clickable":
                clickable = True
                continue
            key, value = _split_kv(tok, line.no)
            if key == "bounds":
                parts = value.split(",")
                if len(parts) != 4:
                    raise ParseError(line.no, tok.col, "bounds needs x,y,w,h")
                try:
                    x, y, w, h = (int(p) for p in parts)
                except ValueError:
                    raise ParseError(line.no, tok.col, f"bad bounds {value!r}") from None
                if w <= 0 or h <= 0:
                    raise ParseError(line.no, tok.col, "bounds need positive width and height")
                bounds = Rect(x, y, w, h)
            elif key == "label":
                label = _unquote_str(value, line.no, tok.col)
            elif key == "color":
                try:
                    color = int(value)
                except ValueError:
                    raise ParseError(line.no, tok.col, f"bad color {value!r}") from None
            elif key == "onclick":
                on_click = _parse_click_action(value, line.no, tok.col)
            else:
                raise ParseError(line.no, tok.col, f"unknown node field {key!r}")
        if bounds is None:
            raise ParseError(line.no, toks[0].col, "node needs bounds=x,y,w,h")
        children: list[LayoutNode] = []
        while True:
            child_line = self.next_at(depth + 1)
            if child_line is None:
                deeper = self.peek()
                if deeper is not None and deeper.depth > depth + 1:
                    raise ParseError(deeper.no, 1, "child node skips an indentation level")
                break
            children.append(self.parse_node(child_line, depth + 1))
        return LayoutNode(node_type, node_id, bounds, label, color, clickable, on_click, tuple(children))

    # -- runtime

    def parse_runtime(self, header: _Line) -> None:
        if self.seen_runtime:
            raise ParseError(header.no, header.tokens[0].col, "duplicate runtime section")
        self.seen_runtime = True
        while True:
            line = self.next_at(1)
            if line is None:
                self._reject_deeper(1)
                return
            if line.verb == "login_activity":
                self.expect_args(line, 1)
                self.login_activity = line.tokens[1].text
            elif line.verb == "for":
                self.expect_args(line, 1)
                name = line.tokens[1].text
                if any(n == name for n, _ in self.runtime_entries):
                    raise DuplicateNameError(name, f"line {line.no}: runtime entry")
                self.runtime_entries.append((name, self.parse_runtime_entry()))
            else:
                raise ParseError(line.no, line.tokens[0].col, f"unknown runtime entry {line.verb!r}")

    def parse_runtime_entry(self) -> RuntimeEntry:
        required: list[tuple[str, ExtraType]] = []
        crash = False
        permission = None
        login = False
        external = None
        while True:
            line = self.next_at(2)
            if line is None:
                self._reject_deeper(2)
                break
            verb = line.verb
            toks = line.tokens
            if verb == "require":
                self.expect_args(line, 2)
                key = toks[1].text
                kind = toks[2].text
                if kind == "Bundle":
                    entries = [_parse_entry_item(t.text, line.no, t.col) for t in toks[3:]]
                    required.append((key, ExtraType("Bundle", tuple(entries))))
                else:
                    if len(toks) > 3:
                        raise ParseError(line.no, toks[3].col, "require takes key Type")
                    required.append((key, _parse_extra_kind(kind, line.no, toks[2].col)))
            elif verb == "crash_if_missing":
                crash = True
            elif verb == "requires_permission":
                self.expect_args(line, 1)
                permission = toks[1].text
            elif verb == "requires_login":
                login = True
            elif verb == "external":
                self.expect_args(line, 1)
                if toks[1].text not in EXTERNAL_KINDS:
                    raise ParseError(line.no, toks[1].col, f"unknown external kind {toks[1].text!r}")
                external = toks[1].text
            else:
                raise ParseError(line.no, toks[0].col, f"unknown runtime directive {verb!r}")
        return RuntimeEntry(tuple(required), crash, permission, login, external)

    def _reject_deeper(self, depth: int) -> None:
        line = self.peek()
        if line is not None and line.depth > depth:
            raise ParseError(line.no, 1, "unexpected indentation")

    # -- reference checks (named errors, beyond validate diagnostics)

    def check_references(self, model: AppModel) -> None:
        unit_names = {u.name for u in model.units}
        layout_ids = {lid for lid, _ in model.layouts}
        declared = set(model.manifest.activity_names())
        for unit in model.units:
            if unit.layout_ref is not None and unit.layout_ref not in layout_ids:
                raise ModelReferenceError(unit.layout_ref, f"unit {unit.name}: layout")
            if unit.kind == "Inner" and unit.outer is not None and unit.outer not in unit_names:
                raise ModelReferenceError(unit.outer, f"unit {unit.name}: outer class")
            for method in unit.methods:
                for stmt in method.body:
                    if isinstance(stmt, (FragmentAdd, FragmentReplace, SetAdapter)):
                        if stmt.fragment not in unit_names:
                            raise ModelReferenceError(
                                stmt.fragment, f"unit {unit.name}.{method.name}: fragment"
                            )
        for lid, root in model.layouts:
            stack = [root]
            while stack:
                node = stack.pop()
                if node.on_click is not None and node.on_click.target not in declared:
                    raise ModelReferenceError(
                        node.on_click.target, f"layout {lid}, node {node.node_id}: click target"
                    )
                stack.extend(node.children)
        login = model.runtime.login_activity
        if login is not None and login not in declared:
            raise ModelReferenceError(login, "runtime: login activity")
        for name, _ in model.runtime.entries:
            if name not in declared:
                raise ModelReferenceError(name, "runtime: activity entry")


def parse_app(text: str) -> AppModel:
    """Parse a mini-app document into a validated AppModel."""
    return _Parser(text).parse()


def load_app(path) -> AppModel:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_app(fh.read())


# ---------------------------------------------------------------------------
# Serialization (canonical form; parse -> serialize -> parse is identity)


def _format_filter(filt: IntentFilter) -> str:
    parts = []
    if filt.action is not None:
        parts.append(f"action={filt.action}")
    if filt.categories:
        parts.append("categories=" + ",".join(filt.categories))
    if filt.data is not None:
        parts.append(f"data={filt.data}")
    if filt.mime_type is not None:
        parts.append(f"mime={filt.mime_type}")
    return " ".join(parts)


def _quote(text: str) -> str:
    escaped = text.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def _format_entries(entries) -> str:
    return " ".join(f"{k}:{t.kind}" for k, t in entries)


def _format_stmt(stmt: Stmt) -> str:
    if isinstance(stmt, NewIntent):
        if stmt.target is not None:
            return f"intent {stmt.var} {stmt.target}"
        return f"intent {stmt.var} {_format_filter(stmt.spec)}"
    if isinstance(stmt, PutExtra):
        return f"putextra {stmt.var} {stmt.key} {stmt.value_type.kind}"
    if isinstance(stmt, PutBundle):
        return f"putbundle {stmt.var} {_format_entries(stmt.entries)}"
    if isinstance(stmt, StartActivity):
        if stmt.api == "start_activity":
            return f"start {stmt.var}"
        return f"start {stmt.var} {stmt.api}"
    if isinstance(stmt, GetExtra):
        if stmt.value_type.kind == "Bundle":
            entries = _format_entries(stmt.value_type.entries or ())
            return f"getextra Bundle {stmt.key} {entries}".rstrip()
        return f"getextra {stmt.value_type.kind} {stmt.key}"
    if isinstance(stmt, FragmentAdd):
        return f"add_fragment {stmt.fragment}"
    if isinstance(stmt, FragmentReplace):
        return f"replace_fragment {stmt.fragment}"
    if isinstance(stmt, FragmentCommit):
        return "commit_fragment"
    if isinstance(stmt, SetAdapter):
        return f"set_adapter {stmt.fragment}"
    if isinstance(stmt, Call):
        return f"call {stmt.unit}.{stmt.method}"
    if isinstance(stmt, Nop):
        return "nop"
    raise TypeError(f"unknown statement {stmt!r}")


def _format_click_value(extra: TypedExtra) -> str:
    from .model import format_literal

    return format_literal(extra.value_type, extra.value)


def _format_click_action(action: ClickAction) -> str:
    if not action.extras:
        return action.target
    inner = ",".join(
        f"{e.key}:{e.value_type.kind}={_format_click_value(e)}" for e in action.extras
    )
    return f"{action.target}({inner})"


def format_node_line(node: LayoutNode) -> str:
    b = node.bounds
    parts = [node.node_type, node.node_id, f"bounds={b.x},{b.y},{b.w},{b.h}"]
    if node.label:
        parts.append(f"label={_quote(node.label)}")
    if node.color:
        parts.append(f"color={node.color}")
    if node.clickable:
        parts.append("clickable")
    if node.on_click is not None:
        parts.append(f"onclick={_format_click_action(node.on_click)}")
    return " ".join(parts)


def layout_to_text(layout_id: str, root: LayoutNode) -> str:
    """Layout section text, also used for post-render layout dumps."""
    lines = [f"layout {layout_id}"]

    def emit(node: LayoutNode, depth: int) -> None:
        lines.append("  " * depth + format_node_line(node))
        for child in node.children:
            emit(child, depth + 1)

    emit(root, 1)
    return "\n".join(lines) + "\n"


def unit_to_text(unit: UnitDef) -> str:
    head = [f"unit {unit.name} kind={unit.kind}"]
    if unit.outer is not None:
        head.append(f"outer={unit.outer}")
    if unit.layout_ref is not None:
        head.append(f"layout={unit.layout_ref}")
    lines = [" ".join(head)]
    for method in unit.methods:
        lines.append(f"  method {method.name}")
        for stmt in method.body:
            lines.append(f"    {_format_stmt(stmt)}")
    return "\n".join(lines) + "\n"


def serialize_app(model: AppModel) -> str:
    """Canonical document text for a model."""
    out: list[str] = []
    app_line = f"app {model.package_id}"
    if model.revision:
        app_line += f" revision={model.revision}"
    out.append(app_line + "\n")

    lines = ["manifest"]
    for decl in model.manifest.declared_activities:
        flags = ""
        if decl.is_launcher:
            flags += " launcher"
        if decl.exported:
            flags += " exported"
        lines.append(f"  activity {decl.name}{flags}")
        for filt in decl.intent_filters:
            lines.append(f"    filter {_format_filter(filt)}")
    for svc in model.manifest.declared_services:
        lines.append(f"  service {svc}")
    out.append("\n".join(lines) + "\n")

    for unit in model.units:
        out.append(unit_to_text(unit))

    for lid, root in model.layouts:
        out.append(layout_to_text(lid, root))

    runtime = model.runtime
    if runtime.login_activity is not None or runtime.entries:
        lines = ["runtime"]
        if runtime.login_activity is not None:
            lines.append(f"  login_activity {runtime.login_activity}")
        for name, entry in runtime.entries:
            lines.append(f"  for {name}")
            for key, etype in entry.required_extras:
                if etype.kind == "Bundle":
                    entries = _format_entries(etype.entries or ())
                    lines.append(f"    require {key} Bundle {entries}".rstrip())
                else:
                    lines.append(f"    require {key} {etype.kind}")
            if entry.crash_if_missing:
                lines.append("    crash_if_missing")
            if entry.requires_permission is not None:
                lines.append(f"    requires_permission {entry.requires_permission}")
            if entry.requires_login:
                lines.append("    requires_login")
            if entry.external_data is not None:
                lines.append(f"    external {entry.external_data}")
        out.append("\n".join(lines) + "\n")

    return "\n".join(out)
