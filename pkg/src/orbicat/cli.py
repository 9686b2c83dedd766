"""Command-line surface over a workspace file.

    orbicat [--json] [--budget N] [--timing] FILE VERB [ARGS]

Exit status: 0 when a result was computed (whatever the verdict), 1 for
input errors, 2 when an internal invariant failed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from .actions import GSpace, fixed_points
from .category import cat_G, cat_grd, cat_orb
from .errors import (
    InputError,
    InvariantViolation,
    OrbicatError,
    UnknownCommand,
    UnknownObject,
)
from .groups import Subgroup, subgroups
from .hilsum_skandalis import (
    Bibundle,
    bibundle_isomorphic,
    check_principal,
    count_sections,
    find_global_section,
    find_natural_conjugacy,
    hs_compose,
    hs_from_equivariant,
    hs_from_generalized,
    hs_inverse_of_equivalence,
    strictify,
)
from .morita import (
    check_essential_equivalence,
    check_morita_span,
    pronk_factorize,
    search_morita,
)
from .paths import is_G_connected, is_groupoid_connected, validate_generalized_path
from .posets import connected_components
from .workspace import Workspace, load_workspace

BUDGET_ENV = "ORBICAT_BUDGET"
DEFAULT_BUDGET = 512


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_BUDGET
    try:
        return int(raw)
    except ValueError:
        raise UnknownCommand(f"{BUDGET_ENV} must be an integer, got {raw!r}", (raw,))


# --- serialization helpers --------------------------------------------------

def _path(p) -> dict:
    return {"segments": [list(s.points) for s in p.segments], "jumps": list(p.jumps)}


def _bibundle(b: Bibundle) -> dict:
    out = {"size": b.size, "p": list(b.p), "w": list(b.w),
           "relations": [list(r) for r in b.total.covers]}
    try:
        check_principal(b)
        out["principal"] = True
    except OrbicatError as exc:
        out["principal"] = False
        out["reason"] = f"{exc.kind}: {exc}"
    return out


def _failure(exc: OrbicatError) -> dict:
    return {"kind": exc.kind, "message": str(exc)}


def _category(r) -> dict:
    out = {"value": "infinite" if r.value is None else r.value, "method": r.method, "exact": r.exact}
    if r.reductions:
        out["reductions"] = list(r.reductions)
    out["cover"] = [list(u.points) for u in r.cover]
    out["witnesses"] = [{"orbit": w.orbit, "chain": [list(f) for f in w.chain]} for w in r.witnesses]
    return out


# --- object coercion --------------------------------------------------------

def _as_bibundle(ws: Workspace, name: str) -> Bibundle:
    kind = ws.kind_of(name)
    obj = ws.get(name)
    if kind == "bibundle":
        return obj
    if kind == "map":
        return hs_from_equivariant(obj)
    if kind == "span":
        return hs_from_generalized(obj)
    raise UnknownObject(f"{name!r} is a {kind}; expected a bibundle, map or span", (name,))


def _action(ws: Workspace, name: str) -> GSpace:
    return ws.get(name, "action")


# --- verbs ------------------------------------------------------------------

def cmd_validate(ws, args, budget):
    defs = []
    for name, d in ws.definitions.items():
        item = {"name": name, "kind": d.kind, "line": d.line}
        o = d.obj
        if d.kind == "group":
            item["order"] = o.order
        elif d.kind == "space":
            item["points"] = o.size
        elif d.kind == "action":
            item["group-order"] = o.group.order
            item["points"] = o.size
        elif d.kind == "bibundle":
            item["total"] = o.size
            try:
                check_principal(o)
                item["principal"] = True
            except OrbicatError as exc:
                item["principal"] = False
                item["reason"] = f"{exc.kind}: {exc}"
        defs.append(item)
    return {"valid": True, "count": len(defs), "definitions": defs}


def cmd_orbits(ws, args, budget):
    X = _action(ws, args.name)
    osp = X.orbit_space
    return {"orbits": [list(o) for o in osp.classes],
            "isotropy-orders": [X.isotropy(o[0]).order for o in osp.classes],
            "quotient-relations": [list(r) for r in osp.poset.covers]}


def cmd_fixed(ws, args, budget):
    X = _action(ws, args.name)
    if args.subgroup is not None:
        try:
            els = frozenset(int(s) for s in args.subgroup.split(",") if s.strip())
        except ValueError:
            raise UnknownCommand(f"bad subgroup list {args.subgroup!r}", (args.subgroup,))
        subs = [Subgroup(X.group, els)]
    else:
        subs = subgroups(X.group)
    rows = []
    for sub in subs:
        fs = fixed_points(X, sub)
        rows.append({"subgroup": list(sub.sorted()), "points": list(fs.points),
                     "components": len(connected_components(fs.poset)) if fs.points else 0})
    return {"fixed": rows}


def cmd_connected(ws, args, budget):
    X = _action(ws, args.name)
    if args.mode == "gspace":
        v = is_G_connected(X)
        out = {"verdict": v.connected}
        if not v.connected:
            out["subgroup"] = list(v.subgroup)
            out["reason"] = v.reason
        return out
    if args.mode == "quotient":
        v = is_groupoid_connected(X, "quotient")
        return {"verdict": v.connected, "quotient-components": v.components}
    v = is_groupoid_connected(X, "path-search")
    out = {"verdict": v.connected, "components": v.components}
    if v.connected and v.witnesses:
        w = v.witnesses[-1]
        cert = validate_generalized_path(w, X)
        out["witness"] = {"from": cert.start, "to": cert.end, **_path(w)}
    return out


def cmd_morita(ws, args, budget):
    if args.mode == "check":
        kind = ws.kind_of(args.names[0])
        obj = ws.get(args.names[0], ("map", "span"))
        try:
            if kind == "map":
                c = check_essential_equivalence(obj)
                return {"verdict": True, "kernel": list(c.kernel.sorted()),
                        "isotropy": [list(t) for t in c.isotropy_pairs]}
            check_morita_span(obj)
            return {"verdict": True}
        except InvariantViolation:
            raise
        except OrbicatError as exc:
            return {"verdict": False, "failure": _failure(exc)}
    if args.mode == "factor":
        f = ws.get(args.names[0], "map")
        try:
            pf = pronk_factorize(f)
        except InvariantViolation:
            raise
        except OrbicatError as exc:
            return {"verdict": False, "failure": _failure(exc)}
        return {"verdict": True, "kernel": list(pf.kernel.sorted()),
                "quotient": {"group-order": pf.quotient.target.group.order, "points": list(pf.quotient.points)},
                "induction": {"points": list(pf.induction.points)},
                "iso": list(pf.iso.points), "transformation": list(pf.transformation.values)}
    if len(args.names) != 2:
        raise UnknownCommand("morita search needs two actions", ())
    a, b = _action(ws, args.names[0]), _action(ws, args.names[1])
    cert = search_morita(a, b, args.budget if args.budget is not None else budget)
    if cert is None:
        return {"verdict": "not found", "budget": args.budget if args.budget is not None else budget}
    apex = cert.span.apex
    return {"verdict": True, "route": list(cert.route),
            "apex": {"group-order": apex.group.order, "points": apex.size}}


def cmd_hs(ws, args, budget):
    mode, names = args.mode, args.names
    need = {"compose": 2, "iso": 2}.get(mode, 1)
    if len(names) != need:
        raise UnknownCommand(f"hs {mode} takes {need} name(s)", (mode,))
    if mode == "from-map":
        return {"bibundle": _bibundle(hs_from_equivariant(ws.get(names[0], "map")))}
    if mode == "invert":
        try:
            return {"bibundle": _bibundle(hs_inverse_of_equivalence(ws.get(names[0], "map")))}
        except InvariantViolation:
            raise
        except OrbicatError as exc:
            return {"verdict": False, "failure": _failure(exc)}
    if mode == "compose":
        inner, outer = _as_bibundle(ws, names[0]), _as_bibundle(ws, names[1])
        return {"bibundle": _bibundle(hs_compose(inner, outer))}
    if mode == "section":
        b = _as_bibundle(ws, names[0])
        tau = find_global_section(b)
        return {"verdict": tau is not None, "section": list(tau) if tau else None,
                "sections-counted": count_sections(b)}
    if mode == "conjugacy":
        span = ws.get(names[0], "span")
        lam = find_natural_conjugacy(span.left.hom, span.right.hom, span.apex)
        return {"verdict": lam is not None, "lambda": list(lam) if lam else None}
    if mode == "strictify":
        return cmd_strictify(ws, args, budget)
    if mode == "iso":
        iso = bibundle_isomorphic(_as_bibundle(ws, names[0]), _as_bibundle(ws, names[1]))
        return {"verdict": iso is not None, "isomorphism": list(iso) if iso else None}
    raise UnknownCommand(f"unknown hs mode {mode!r}", (mode,))


def cmd_strictify(ws, args, budget):
    span = ws.get(args.names[0], "span")
    res = strictify(span)
    b = hs_from_generalized(span)
    tau = find_global_section(b)
    stats = {"section-found": tau is not None, "sections-counted": count_sections(b),
             "fibers": [len(b.fiber(y)) for y in b.right.points]}
    if res is None:
        return {"verdict": "absent", "conjugacy": None, "section-search": stats}
    return {"verdict": "present", "map": list(res.space_map.points),
            "lambda": list(res.witness.values), "section": list(res.section), "section-search": stats}


def cmd_cat(ws, args, budget):
    X = _action(ws, args.name)
    fn = {"catG": cat_G, "catGrd": cat_grd, "catOrb": cat_orb}[args.mode]
    return _category(fn(X))


def cmd_report(ws, args, budget):
    out = {"definitions": len(ws)}
    acts = {}
    for name in ws.names("action"):
        X = ws.get(name)
        g = is_G_connected(X)
        acts[name] = {"orbits": len(X.orbits),
                      "G-connected": g.connected,
                      "groupoid-connected": is_groupoid_connected(X, "quotient").connected,
                      "catG": str(cat_G(X))}
    out["actions"] = acts
    maps = {}
    for name in ws.names("map"):
        try:
            check_essential_equivalence(ws.get(name))
            maps[name] = {"essential": True}
        except InvariantViolation:
            raise
        except OrbicatError as exc:
            maps[name] = {"essential": False, "reason": exc.kind}
    out["maps"] = maps
    spans = {}
    for name in ws.names("span"):
        span = ws.get(name)
        if span.left.target.group != span.right.target.group:
            spans[name] = {"strictify": "not applicable"}
            continue
        res = strictify(span)
        spans[name] = {"strictify": "absent" if res is None else "present",
                       "section": find_global_section(hs_from_generalized(span)) is not None}
    out["spans"] = spans
    return out


# --- driver -----------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UnknownCommand(message, ())


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="orbicat", description="Finite translation groupoids: Morita, bibundles, connectivity, LS category.")
    p.add_argument("--json", action="store_true", help="emit JSON")
    p.add_argument("--timing", action="store_true", help="append wall-clock timing (breaks byte-identical output)")
    p.add_argument("--budget", type=int, default=None, help=f"search budget (default ${BUDGET_ENV} or {DEFAULT_BUDGET})")
    p.add_argument("workspace", help="workspace file")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    sub.add_parser("validate")
    s = sub.add_parser("orbits"); s.add_argument("name")
    s = sub.add_parser("fixed"); s.add_argument("name"); s.add_argument("--subgroup", default=None)
    s = sub.add_parser("connected"); s.add_argument("mode", choices=["gspace", "quotient", "paths"]); s.add_argument("name")
    s = sub.add_parser("morita"); s.add_argument("mode", choices=["check", "factor", "search"])
    s.add_argument("names", nargs="+"); s.add_argument("--budget", type=int, default=None, dest="budget")
    s = sub.add_parser("hs")
    s.add_argument("mode", choices=["compose", "from-map", "invert", "section", "conjugacy", "strictify", "iso"])
    s.add_argument("names", nargs="+")
    s = sub.add_parser("strictify"); s.add_argument("names", nargs=1)
    s = sub.add_parser("cat"); s.add_argument("mode", choices=["catG", "catGrd", "catOrb"]); s.add_argument("name")
    sub.add_parser("report")
    return p


VERBS = {"validate": cmd_validate, "orbits": cmd_orbits, "fixed": cmd_fixed, "connected": cmd_connected,
         "morita": cmd_morita, "hs": cmd_hs, "strictify": cmd_strictify, "cat": cmd_cat, "report": cmd_report}


def run_command(ws: Workspace, argv: list[str], budget: int | None = None) -> dict:
    """Run one verb against a loaded workspace; ``argv`` omits the file name."""
    args = build_parser().parse_args(["-"] + list(argv))
    return _dispatch(ws, args, budget if budget is not None else default_budget())


def _dispatch(ws, args, budget) -> dict:
    words = [args.verb] + [str(v) for k in ("mode",) if getattr(args, k, None) for v in [getattr(args, k)]]
    for k in ("name", "names"):
        v = getattr(args, k, None)
        if v:
            words += v if isinstance(v, list) else [v]
    result = VERBS[args.verb](ws, args, budget)
    return {"command": " ".join(words), **result}


def render_text(report: dict, indent: int = 0) -> str:
    lines = []
    pad = "  " * indent
    for key, val in report.items():
        if isinstance(val, dict):
            lines.append(f"{pad}{key}:")
            lines.append(render_text(val, indent + 1))
        elif isinstance(val, list) and val and all(isinstance(v, dict) for v in val):
            lines.append(f"{pad}{key}:")
            for v in val:
                body = render_text(v, indent + 2).splitlines()
                lines.append(f"{pad}  - {body[0].strip()}")
                lines.extend(body[1:])
        else:
            lines.append(f"{pad}{key}: {json.dumps(val)}")
    return "\n".join(l for l in lines if l)


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    t0 = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
        budget = args.budget if args.budget is not None else default_budget()
        ws = load_workspace(args.workspace)
        report = _dispatch(ws, args, budget)
    except InvariantViolation as exc:
        print(f"internal error: {exc.kind}: {exc}", file=sys.stderr)
        return 2
    except InputError as exc:
        print(f"error: {exc.kind}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.timing:
        report["timing-seconds"] = round(time.perf_counter() - t0, 4)
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        print(render_text(report))
    return 0


def main_exit() -> None:
    sys.exit(main())
