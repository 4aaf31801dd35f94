"""Command-line front end.

Every command prints a report (JSON by default) and exits with 0 when the
property holds, 1 when it fails (the report carries a witness) and 2 on
input errors (the report carries the error objects).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Callable, Sequence

from . import __version__
from .connectivity import components_outside, connected_outside
from .errors import BadParameters, BadTyping, PurelabError, UnknownElement
from .fincat import identity_name, is_llp
from .io import (
    Loader,
    check_same_source,
    check_same_target,
    digest,
    dumps,
    hom_to_json,
    presheaf_to_json,
    resolve,
    write_trace,
)
from .limits import is_pullback_square, pullback_monos, pushout_monos
from .presheaf import Elem, Hom, Presheaf, fmt, representable
from .purity import is_pure, is_pure_effective, is_split
from .witness import build_chain, check_H_properties, check_order_pattern, find_pattern, parse_shape

Report = dict[str, Any]


def exit_code(report: Report) -> int:
    """Exit status as a function of the report alone."""
    if report.get("errors"):
        return 2
    return 0 if report.get("holds") else 1


def _envelope(command: str, loader: Loader | None, body: Report, **extra: Any) -> Report:
    inputs = []
    if loader is not None:
        seen: set[Path] = set()
        for p in loader.read:
            if p not in seen:
                seen.add(p)
                inputs.append({"path": str(p), "sha256": digest(p)})
    return {"tool": "purelab", "version": __version__, "command": command, **extra, "inputs": inputs, **body}


# ---------------------------------------------------------------- inputs


def parse_inputs(paths: Sequence[str], loader: Loader | None = None) -> tuple[list[tuple[str, str, Any]], list[dict[str, Any]]]:
    """Load every file, collecting one error per bad file instead of stopping at the first."""
    loader = loader or Loader()
    objects, errors = [], []
    for ref in paths:
        try:
            kind, obj = loader.detect(ref)
            objects.append((ref, kind, obj))
        except PurelabError as err:
            if err.file is None:
                err.file = str(ref)
            errors.append(err.to_dict())
    return objects, errors


def _summary(kind: str, obj: Any) -> dict[str, Any]:
    if kind == "category":
        return {"objects": len(obj.objects), "arrows": len(obj.arrows)}
    if kind == "presheaf":
        return {"sizes": {s: len(obj.carrier[s]) for s in obj.cat.objects}}
    if kind == "hom":
        return {"mono": all(len(set(m.values())) == len(m) for m in obj.map.values())}
    if kind == "square":
        return {"sizes": {k: len(getattr(obj, k)) for k in ("K", "A", "B", "L")}}
    return {"vars": len(obj.vars), "eqs": len(obj.eqs)}


def find_element(P: Presheaf, name: str) -> Elem:
    try:
        return P.find(name)
    except UnknownElement:
        # "idZ" and "id_Z" both name the identity on Z
        for s in P.cat.objects:
            if name == f"id{s}":
                return P.find(identity_name(s))
        raise


def _parse_seed(cat_loader: Loader, cat_ref: str, text: str, arrows: str | None) -> tuple[Presheaf, Elem, Elem, Elem, str, str]:
    """``rep_X:a,b,c`` (representable on ``X``) or ``path.psh.json:a,b,c``."""
    source, sep, elems = text.rpartition(":")
    if not sep:
        raise BadParameters("seed must look like 'rep_Z:a,b,c'", location="--seed")
    cat = cat_loader.category(cat_ref)
    if source.startswith("rep_") and source[4:] in cat.objects:
        K = representable(cat, source[4:])
    else:
        K = cat_loader.presheaf(source)
    names = elems.split(",")
    if len(names) != 3:
        raise BadParameters("seed needs exactly three elements a,b,c", location="--seed")
    a, b, c = (find_element(K, n) for n in names)
    if arrows:
        f, _, g = arrows.partition(",")
    else:
        f = next((h for h in cat.arrows_from(c[0]) if K.act(h, c) == a), "")
        g = next((h for h in cat.arrows_from(c[0]) if K.act(h, c) == b), "")
        if not f or not g:
            raise BadParameters("no arrows f, g with a = f.c and b = g.c; pass --arrows", location="--seed")
    return K, a, b, c, f, g


# ---------------------------------------------------------------- commands


def cmd_validate(args: argparse.Namespace) -> Report:
    loader = Loader()
    objects, errors = parse_inputs(args.files, loader)
    body: Report = {
        "holds": not errors,
        "objects": [{"file": ref, "kind": kind, **_summary(kind, obj)} for ref, kind, obj in objects],
    }
    if errors:
        body["errors"] = errors
    return _envelope("validate", loader, body)


def cmd_llp(args: argparse.Namespace) -> Report:
    loader = Loader()
    ok, w = is_llp(loader.category(args.category))
    return _envelope("llp", loader, {"holds": ok, "llp": ok, "witness": w._asdict() if w else None})


def cmd_pure(args: argparse.Namespace) -> Report:
    loader = Loader()
    h, _, _ = loader.hom(args.hom)
    cert = is_pure(h)
    return _envelope("pure", loader, {"holds": cert.verdict, "pure": cert.verdict, "certificate": cert.to_json()})


def cmd_split(args: argparse.Namespace) -> Report:
    loader = Loader()
    h, _, _ = loader.hom(args.hom)
    ok, r = is_split(h)
    return _envelope("split", loader, {"holds": ok, "split": ok, "retraction": r.to_raw() if r else None})


def cmd_square(args: argparse.Namespace) -> Report:
    loader = Loader()
    sq = loader.square(args.square)
    if args.check == "pullback":
        ok = is_pullback_square(sq)
        return _envelope("square", loader, {"holds": ok, "check": "pullback", "pullback": ok})
    res = is_pure_effective(sq, strict=not args.lenient)
    body: Report = {"holds": res.verdict, "check": "pure-effective", **res.diagnostic()}
    body["pushout"] = res.pushout.P.to_raw()
    body["induced"] = res.induced.to_raw()
    return _envelope("square", loader, body)


def _write_out_dir(out_dir: str | None, files: dict[str, str]) -> list[str]:
    if not out_dir:
        return []
    d = Path(out_dir)
    d.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        (d / name).write_text(text, encoding="utf-8")
    return [str(d / name) for name in files]


def cmd_pushout(args: argparse.Namespace) -> Report:
    loader = Loader()
    ka, kb = loader.hom(args.left), loader.hom(args.right)
    check_same_source(ka, kb)
    po = pushout_monos(ka[0], kb[0])
    cat_ref = str(loader.category_of[ka[2]])
    written = _write_out_dir(
        args.out_dir,
        {
            "P.psh.json": presheaf_to_json(po.P, cat_ref),
            "inA.hom.json": hom_to_json(po.inA, str(ka[2]), "P.psh.json"),
            "inB.hom.json": hom_to_json(po.inB, str(kb[2]), "P.psh.json"),
        },
    )
    body = {"holds": True, "size": len(po.P), "pushout": po.P.to_raw(), "inA": po.inA.to_raw(), "inB": po.inB.to_raw()}
    return _envelope("pushout", loader, body, written=written)


def cmd_pullback(args: argparse.Namespace) -> Report:
    loader = Loader()
    al, bl = loader.hom(args.left), loader.hom(args.right)
    check_same_target(al, bl)
    sq = pullback_monos(al[0], bl[0])
    cat_ref = str(loader.category_of[al[2]])
    written = _write_out_dir(
        args.out_dir,
        {
            "K.psh.json": presheaf_to_json(sq.K, cat_ref),
            "kA.hom.json": hom_to_json(sq.kA, "K.psh.json", str(al[1])),
            "kB.hom.json": hom_to_json(sq.kB, "K.psh.json", str(bl[1])),
        },
    )
    body = {"holds": True, "size": len(sq.K), "pullback": sq.K.to_raw(), "kA": sq.kA.to_raw(), "kB": sq.kB.to_raw()}
    return _envelope("pullback", loader, body, written=written)


def cmd_components(args: argparse.Namespace) -> Report:
    loader = Loader()
    base, _, tgt = loader.hom(args.base)
    L = loader.presheaf(args.presheaf)
    if loader.presheaf(tgt) is not L:
        raise BadTyping("--base must be a hom into the given presheaf", location="--base")
    K = base.image()
    report = components_outside(L, K)
    body: Report = {"holds": True, **report.to_json()}
    if args.pair:
        a, b = (find_element(L, x) for x in args.pair)
        ok, path = connected_outside(L, K, a, b)
        body.update(holds=ok, connected=ok, path=[fmt(x) for x in path] if path else None)
    return _envelope("components", loader, body)


def cmd_witness(args: argparse.Namespace) -> Report:
    if args.depth < 1:
        raise BadParameters("--depth must be at least 1", location="--depth")
    loader = Loader()
    K, a, b, c, f, g = _parse_seed(loader, args.cat, args.seed, args.arrows)
    trace = build_chain(K, a, b, c, f, g, args.depth)
    order = check_order_pattern(trace)
    h = check_H_properties(trace)
    written = []
    if args.out_dir:
        written = [str(write_trace(trace, Path(args.out_dir), str(resolve(args.cat))))]
    body = {
        "holds": order.ok and h.ok,
        "seed": {"a": fmt(a), "b": fmt(b), "c": fmt(c), "f": f, "g": g},
        "depth": args.depth,
        "sizes": trace.sizes,
        "order": order.to_json(),
        "H": h.to_json(),
    }
    return _envelope("witness", loader, body, written=written)


def cmd_pattern(args: argparse.Namespace) -> Report:
    loader = Loader()
    P = loader.presheaf(args.presheaf)
    shape = parse_shape(args.shape)
    w = find_pattern(P, args.f, args.g, shape)
    body = {"holds": w is not None, "shape": args.shape, "found": w is not None, "witness": w.to_json() if w else None}
    return _envelope("pattern", loader, body)


def cmd_suite(args: argparse.Namespace) -> Report:
    from .suite import CRITERIA, run_suite

    only = None
    if args.only:
        only = [int(x) for x in args.only.split(",")]
        bad = [k for k in only if k not in CRITERIA]
        if bad:
            raise BadParameters(f"unknown criteria {bad}", location="--only")
    results = run_suite(seed=args.seed, only=only)
    body = {"holds": all(r.passed for r in results), "results": [r.to_json() for r in results]}
    if args.format == "text":
        body["lines"] = [r.line() for r in results]
    return _envelope("suite", None, body, seed=args.seed)


# ---------------------------------------------------------------- plumbing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--out", help="also write the report to this file")

    parser = argparse.ArgumentParser(prog="purelab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"purelab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, fn: Callable[[argparse.Namespace], Report], help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help)
        p.set_defaults(fn=fn)
        return p

    add("validate", cmd_validate, "validate category, presheaf, hom, square or system files").add_argument("files", nargs="+")
    add("llp", cmd_llp, "is the category locally linearly preordered").add_argument("category")
    add("pure", cmd_pure, "is the hom a pure mono").add_argument("hom")
    add("split", cmd_split, "is the hom a split mono").add_argument("hom")

    p = add("square", cmd_square, "check a commutative square")
    p.add_argument("square")
    p.add_argument("--check", choices=("pure-effective", "pullback"), required=True)
    p.add_argument("--lenient", action="store_true", help="skip the pure-sides precondition")

    for name, fn, help_ in (
        ("pushout", cmd_pushout, "pushout of two monos out of one presheaf"),
        ("pullback", cmd_pullback, "pullback of two monos into one presheaf"),
    ):
        p = add(name, fn, help_)
        p.add_argument("left")
        p.add_argument("right")
        p.add_argument("--out-dir")

    p = add("components", cmd_components, "connected components outside a subpresheaf")
    p.add_argument("presheaf")
    p.add_argument("--base", required=True, help="hom file K -> L naming the subpresheaf")
    p.add_argument("--pair", nargs=2, metavar=("A", "B"), help="also test whether A and B are connected")

    p = add("witness", cmd_witness, "build and check the order-property chain")
    p.add_argument("--cat", required=True)
    p.add_argument("--seed", required=True, help="rep_Z:a,b,c or PRESHEAF:a,b,c")
    p.add_argument("--arrows", help="f,g (inferred from the seed when omitted)")
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--out-dir")

    p = add("pattern", cmd_pattern, "search for an interpreted bipartite or order pattern")
    p.add_argument("presheaf")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--shape", required=True, help="bipartite:R,C or order:N")

    p = add("suite", cmd_suite, "run the acceptance suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--only", help="comma-separated criterion numbers")
    return parser


def render_text(report: Report) -> str:
    lines = [f"{report['command']}: {'holds' if report.get('holds') else 'fails'}"]
    if "lines" in report:
        lines += report["lines"]
    for key, value in report.items():
        if key in ("tool", "version", "command", "holds", "lines", "inputs", "results"):
            continue
        lines.append(f"{key}: {json.dumps(value, ensure_ascii=False)}")
    for item in report.get("inputs", []):
        lines.append(f"input {item['path']} sha256={item['sha256'][:16]}")
    return "\n".join(lines) + "\n"


def _primary_input(args: argparse.Namespace) -> str | None:
    for attr in ("square", "hom", "category", "presheaf", "left", "cat"):
        if getattr(args, attr, None):
            return str(getattr(args, attr))
    return None


def run(argv: Sequence[str] | None = None) -> tuple[int, Report, str]:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.fn(args)
    except PurelabError as err:
        if err.file is None:
            err.file = _primary_input(args)
        report = _envelope(args.command, None, {"holds": False, "errors": [err.to_dict()]})
    except ValueError as err:
        report = _envelope(
            args.command, None, {"holds": False, "errors": [BadParameters(str(err)).to_dict()]}
        )
    text = render_text(report) if args.format == "text" else dumps(report)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    return exit_code(report), report, text


def main(argv: Sequence[str] | None = None) -> int:
    code, _, text = run(argv)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
