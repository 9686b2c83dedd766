"""Line-oriented workspace format.

::

    convention open=downsets
    # comment
    group Z2 table = [[0, 1], [1, 0]]
    group V4 perm-generators = [[1, 0, 3, 2], [2, 3, 0, 1]]
    space C2 points = 4 relations = [(0, 2), (1, 2), (0, 3), (1, 3)]
    space D3 model = "cone 3"
    action X group = Z2 space = C2 images = {1: [0, 1, 3, 2]}
    map f source = A target = B hom = [0, 1] points = [0, 1, 2, 3]
    span s left = f right = g
    bibundle E total = P left = X right = Y p = [...] w = [...]
        left-action = {1: [...]} right-action = {1: [...]}

Values are Python literals.  A block continues onto following lines while
brackets are open, or while the next line is indented.  Elements of a
``perm-generators`` group are numbered breadth-first from the identity, so
distinct generators get indices ``1, 2, ...`` in the order listed.
"""

from __future__ import annotations

import ast
import re
from dataclasses import dataclass, field
from typing import Any

from .actions import action_from_generators
from .errors import (
    OrbicatError,
    UnknownReference,
    ValidationError,
    WorkspaceSyntaxError,
)
from .groups import FiniteGroup, permutation_group, validate_group
from .hilsum_skandalis import Bibundle, check_bibundle
from .maps import check_equivariant
from .morita import make_generalized_map
from .posets import Poset, chain_poset, circle_poset, cone_poset, discrete_poset, poset_from_relations

CONVENTION = "convention open=downsets"
KINDS = ("group", "space", "action", "map", "span", "bibundle")
_KEY = re.compile(r"[A-Za-z][\w-]*\s*=(?!=)")
_NAME = re.compile(r"[A-Za-z_][\w.-]*$")

REQUIRED = {
    "group": (),
    "space": (),
    "action": ("group", "space", "images"),
    "map": ("source", "target", "hom", "points"),
    "span": ("left", "right"),
    "bibundle": ("total", "left", "right", "p", "w", "left-action", "right-action"),
}
ALLOWED = {
    "group": {"table", "perm-generators"},
    "space": {"points", "relations", "model"},
    "action": {"group", "space", "images"},
    "map": {"source", "target", "hom", "points"},
    "span": {"left", "right"},
    "bibundle": {"total", "left", "right", "p", "w", "left-action", "right-action"},
}


@dataclass
class Definition:
    kind: str
    name: str
    obj: Any
    fields: dict
    line: int
    source: str = ""


@dataclass
class Workspace:
    definitions: dict[str, Definition] = field(default_factory=dict)

    def __len__(self):
        return len(self.definitions)

    def __contains__(self, name):
        return name in self.definitions

    def get(self, name: str, kind: str | tuple[str, ...] | None = None):
        from .errors import UnknownObject
        d = self.definitions.get(name)
        if d is None:
            raise UnknownObject(f"no definition named {name!r}", (name,))
        kinds = (kind,) if isinstance(kind, str) else kind
        if kinds and d.kind not in kinds:
            raise UnknownObject(f"{name!r} is a {d.kind}, expected {' or '.join(kinds)}", (name, d.kind))
        return d.obj

    def kind_of(self, name: str) -> str:
        self.get(name)
        return self.definitions[name].kind

    def names(self, kind: str | None = None) -> list[str]:
        return [n for n, d in self.definitions.items() if kind is None or d.kind == kind]


# --- lexing -----------------------------------------------------------------

def _depth_change(text: str) -> int:
    depth = 0
    quote = None
    for ch in text:
        if quote:
            if ch == quote:
                quote = None
        elif ch in "\"'":
            quote = ch
        elif ch == "#":
            break
        elif ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
    return depth


def _strip_comment(text: str) -> str:
    quote = None
    for i, ch in enumerate(text):
        if quote:
            if ch == quote:
                quote = None
        elif ch in "\"'":
            quote = ch
        elif ch == "#":
            return text[:i]
    return text


def _blocks(text: str):
    """Yield ``(line_no, block_text)``; raises on a missing convention line."""
    lines = text.splitlines()
    first = next(((i, l) for i, l in enumerate(lines, 1) if _strip_comment(l).strip()), None)
    if first is None or _strip_comment(first[1]).strip() != CONVENTION:
        ln = first[0] if first else 1
        raise WorkspaceSyntaxError(f"file must start with '{CONVENTION}'", ln, 1)
    i = first[0]
    cur = None
    depth = 0
    while i < len(lines):
        raw = lines[i]
        i += 1
        body = _strip_comment(raw)
        if not body.strip():
            continue
        continues = cur is not None and (depth > 0 or raw[:1].isspace())
        if continues:
            cur[1].append(body.strip())
        else:
            if cur is not None:
                yield cur[0], " ".join(cur[1])
            cur = (i, [body.strip()])
            depth = 0
        depth += _depth_change(body)
        if depth < 0:
            raise WorkspaceSyntaxError("unbalanced closing bracket", i, len(body))
    if cur is not None:
        if depth > 0:
            raise WorkspaceSyntaxError("unclosed bracket at end of file", cur[0], 1)
        yield cur[0], " ".join(cur[1])


def _read_value(raw: str, key: str, line: int, col: int):
    """A literal, or a bare identifier (a reference to another definition)."""
    if _NAME.match(raw) and raw not in ("True", "False", "None"):
        return raw
    try:
        return ast.literal_eval(raw)
    except (ValueError, SyntaxError) as exc:
        raise WorkspaceSyntaxError(f"cannot read value of {key!r}: {raw!r}", line, col) from exc


def _split_fields(text: str, line: int, offset: int) -> dict:
    """Parse ``key = literal key = literal ...``."""
    out = {}
    pos = 0
    n = len(text)
    while pos < n:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _KEY.match(text, pos)
        if not m:
            raise WorkspaceSyntaxError(f"expected 'key = value' near {text[pos:pos + 20]!r}", line, offset + pos + 1)
        key = m.group(0)[:-1].strip()
        start = m.end()
        depth = 0
        quote = None
        j = start
        while j < n:
            ch = text[j]
            if quote:
                if ch == quote:
                    quote = None
            elif ch in "\"'":
                quote = ch
            elif ch in "([{":
                depth += 1
            elif ch in ")]}":
                depth -= 1
            elif depth == 0 and ch.isspace():
                k = j
                while k < n and text[k].isspace():
                    k += 1
                if k < n and _KEY.match(text, k) and text[start:j].strip():
                    break
            j += 1
        raw = text[start:j].strip()
        value = _read_value(raw, key, line, offset + start + 1)
        if key in out:
            raise WorkspaceSyntaxError(f"duplicate key {key!r}", line, offset + m.start() + 1)
        out[key] = value
        pos = j
    return out


# --- building ---------------------------------------------------------------

_MODELS = {"circle": circle_poset, "cone": cone_poset, "discrete": discrete_poset, "chain": chain_poset}


def _build_space(f: dict) -> Poset:
    if "model" in f:
        parts = str(f["model"]).split()
        if len(parts) != 2 or parts[0] not in _MODELS or not parts[1].isdigit():
            raise ValidationError(f"unknown model {f['model']!r}", (f["model"],))
        return _MODELS[parts[0]](int(parts[1]))
    if "points" not in f:
        raise ValidationError("space needs 'points' or 'model'", ())
    return poset_from_relations(int(f["points"]), [tuple(r) for r in f.get("relations", [])])


def _build_group(name: str, f: dict) -> FiniteGroup:
    if ("table" in f) == ("perm-generators" in f):
        raise ValidationError("group needs exactly one of 'table' or 'perm-generators'", ())
    if "table" in f:
        return validate_group(f["table"], name)
    g, _ = permutation_group(f["perm-generators"], name)
    return g


def parse_workspace(text: str, source: str = "") -> Workspace:
    ws = Workspace()
    for line, block in _blocks(text):
        head = block.split(None, 2)
        if len(head) < 2:
            raise WorkspaceSyntaxError("expected 'kind NAME ...'", line, 1)
        kind, name = head[0], head[1]
        if kind == "convention":
            raise WorkspaceSyntaxError("convention declared twice", line, 1)
        if kind not in KINDS:
            raise WorkspaceSyntaxError(f"unknown block kind {kind!r}", line, 1)
        if not _NAME.match(name):
            raise WorkspaceSyntaxError(f"bad name {name!r}", line, len(kind) + 2)
        if name in ws.definitions:
            raise WorkspaceSyntaxError(f"{name!r} is already defined", line, len(kind) + 2)
        rest = head[2] if len(head) > 2 else ""
        fields = _split_fields(rest, line, len(block) - len(rest))
        unknown = set(fields) - ALLOWED[kind]
        if unknown:
            raise WorkspaceSyntaxError(f"unknown key {sorted(unknown)[0]!r} for {kind}", line, 1)
        for key in REQUIRED[kind]:
            if key not in fields:
                raise WorkspaceSyntaxError(f"{kind} {name} is missing {key!r}", line, 1)
        try:
            obj = _build(ws, kind, name, fields)
        except UnknownReference as exc:
            raise UnknownReference(f"line {line}: {exc}", exc.witness) from exc
        except ValidationError as exc:
            raise ValidationError(f"line {line}: {name}: {exc}", exc.witness) from exc
        except OrbicatError as exc:
            raise ValidationError(f"line {line}: {name}: {exc.kind}: {exc}", exc.witness) from exc
        except (TypeError, ValueError, IndexError, KeyError) as exc:
            raise ValidationError(f"line {line}: {name}: malformed value ({exc})", ()) from exc
        ws.definitions[name] = Definition(kind, name, obj, fields, line, source)
    return ws


def _ref(ws: Workspace, name, kind):
    d = ws.definitions.get(name) if isinstance(name, str) else None
    if d is None:
        raise UnknownReference(f"undeclared {kind} {name!r}", (name,))
    if d.kind != kind:
        raise UnknownReference(f"{name!r} is a {d.kind}, not a {kind}", (name,))
    return d.obj


def _build(ws: Workspace, kind: str, name: str, f: dict):
    if kind == "group":
        return _build_group(name, f)
    if kind == "space":
        return _build_space(f)
    if kind == "action":
        grp = _ref(ws, f["group"], "group")
        sp = _ref(ws, f["space"], "space")
        images = {int(k): tuple(v) for k, v in dict(f["images"]).items()}
        return action_from_generators(sp, grp, images, name)
    if kind == "map":
        src = _ref(ws, f["source"], "action")
        dst = _ref(ws, f["target"], "action")
        return check_equivariant(list(f["hom"]), list(f["points"]), src, dst)
    if kind == "span":
        return make_generalized_map(_ref(ws, f["left"], "map"), _ref(ws, f["right"], "map"))
    if kind == "bibundle":
        total = _ref(ws, f["total"], "space")
        left = _ref(ws, f["left"], "action")
        right = _ref(ws, f["right"], "action")
        la = _extend_rows(left.group, total.size, f["left-action"], right_handed=False)
        ra = _extend_rows(right.group, total.size, f["right-action"], right_handed=True)
        b = Bibundle(total, left, right, tuple(f["p"]), tuple(f["w"]), la, ra, name)
        return check_bibundle(b)
    raise WorkspaceSyntaxError(f"unknown kind {kind}", 0, 0)


def _extend_rows(group: FiniteGroup, n: int, images: dict, right_handed: bool):
    """Permutations for every element from those of some generating elements."""
    table = {group.identity: tuple(range(n))}
    gens = {int(k): tuple(v) for k, v in dict(images).items()}
    frontier = [group.identity]
    while frontier:
        nxt = []
        for a in frontier:
            for s, ps in gens.items():
                b = group.mul(a, s)
                if right_handed:
                    # e.(a s) = (e.a).s
                    row = tuple(ps[table[a][x]] for x in range(n))
                else:
                    row = tuple(table[a][ps[x]] for x in range(n))
                if b not in table:
                    table[b] = row
                    nxt.append(b)
                elif table[b] != row:
                    raise ValidationError(f"action images are inconsistent at element {b}", (b,))
        frontier = nxt
    if len(table) != group.order:
        raise ValidationError("action images do not generate the group", ())
    return tuple(table[g] for g in group.elements)


def load_workspace(path: str) -> Workspace:
    with open(path, encoding="utf-8") as fh:
        return parse_workspace(fh.read(), path)


# --- canonical serialization ------------------------------------------------

def _lit(v) -> str:
    return repr(v).replace("'", '"')


def serialize_workspace(ws: Workspace) -> str:
    """Canonical text; parsing it back gives the same definitions."""
    out = [CONVENTION]
    for name, d in ws.definitions.items():
        o = d.obj
        if d.kind == "group":
            out.append(f"group {name} table = {_lit([list(r) for r in o.table])}")
        elif d.kind == "space":
            out.append(f"space {name} points = {o.size} relations = {_lit(list(o.covers))}")
        elif d.kind == "action":
            gname, sname = d.fields["group"], d.fields["space"]
            images = {g: list(o.action[g]) for g in o.group.generators}
            out.append(f"action {name} group = {gname} space = {sname} images = {_lit(images)}")
        elif d.kind == "map":
            out.append(f"map {name} source = {d.fields['source']} target = {d.fields['target']} "
                       f"hom = {_lit(list(o.hom.images))} points = {_lit(list(o.points))}")
        elif d.kind == "span":
            out.append(f"span {name} left = {d.fields['left']} right = {d.fields['right']}")
        elif d.kind == "bibundle":
            la = {g: list(o.left_action[g]) for g in o.left.group.generators}
            ra = {h: list(o.right_action[h]) for h in o.right.group.generators}
            out.append(f"bibundle {name} total = {d.fields['total']} left = {d.fields['left']} "
                       f"right = {d.fields['right']} p = {_lit(list(o.p))} w = {_lit(list(o.w))} "
                       f"left-action = {_lit(la)} right-action = {_lit(ra)}")
    return "\n".join(out) + "\n"



def fixture_path(name: str) -> str:
    """Path of a bundled fixture, e.g. ``fixture_path("counterexample.grpd")``."""
    import os
    return os.path.join(os.path.dirname(__file__), "fixtures", name)
