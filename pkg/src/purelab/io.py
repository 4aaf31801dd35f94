"""JSON file formats: categories, presheaves, homs, squares, systems, traces.

Paths inside a file are resolved relative to that file; a path beginning with
``fixtures/`` that does not exist there falls back to the fixture directory.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any, Callable, TypeVar

from .errors import BadTyping, FileNotFound, MalformedJson, PurelabError, SourceMismatch, TargetMismatch
from .fincat import FinCat, category_to_raw, validate_category
from .fixtures import fixture_dir
from .limits import Square
from .presheaf import Hom, Presheaf, validate_hom, validate_presheaf
from .purity import Anchor, EqSystem, Link

T = TypeVar("T")


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def resolve(ref: str | Path, base: Path | None = None) -> Path:
    p = Path(ref)
    if p.is_absolute():
        candidates = [p]
    else:
        candidates = [(base or Path.cwd()) / p, Path.cwd() / p]
        parts = p.parts
        if parts and parts[0] == "fixtures":
            candidates.append(fixture_dir().joinpath(*parts[1:]))
    for c in candidates:
        if c.is_file():
            return c.resolve()
    raise FileNotFound(f"no such file: {ref}", location=str(ref))


def read_json(path: Path) -> Any:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise FileNotFound(str(exc), location=str(path)) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        err = MalformedJson(exc.msg, location=f"line {exc.lineno} column {exc.colno}")
        err.file = str(path)
        raise err from None


def digest(path: Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _tagged(path: Path, fn: Callable[[], T]) -> T:
    try:
        return fn()
    except PurelabError as err:
        if err.file is None:
            err.file = str(path)
        raise
    except (KeyError, TypeError, AttributeError) as exc:
        err = BadTyping(f"missing or malformed field: {exc}")
        err.file = str(path)
        raise err from None


class Loader:
    """Loads files and caches categories/presheaves by resolved path."""

    def __init__(self) -> None:
        self.categories: dict[Path, FinCat] = {}
        self.presheaves: dict[Path, Presheaf] = {}
        self.category_of: dict[Path, Path] = {}
        self.read: list[Path] = []

    def _raw(self, path: Path) -> Any:
        self.read.append(path)
        return read_json(path)

    def category(self, ref: str | Path, base: Path | None = None) -> FinCat:
        path = resolve(ref, base)
        if path not in self.categories:
            raw = self._raw(path)
            self.categories[path] = _tagged(path, lambda: validate_category(raw))
        return self.categories[path]

    def presheaf(self, ref: str | Path, base: Path | None = None) -> Presheaf:
        path = resolve(ref, base)
        if path not in self.presheaves:
            raw = self._raw(path)
            cat_path = _tagged(path, lambda: resolve(raw["category"], path.parent))
            cat = _tagged(path, lambda: self.category(cat_path))
            self.presheaves[path] = _tagged(path, lambda: validate_presheaf(cat, raw))
            self.category_of[path] = cat_path
        return self.presheaves[path]

    def hom(self, ref: str | Path, base: Path | None = None) -> tuple[Hom, Path, Path]:
        path = resolve(ref, base)
        raw = self._raw(path)

        def build() -> tuple[Hom, Path, Path]:
            src_path = resolve(raw["source"], path.parent)
            tgt_path = resolve(raw["target"], path.parent)
            src = self.presheaf(src_path)
            tgt = self.presheaf(tgt_path)
            return validate_hom(raw["map"], src, tgt), src_path, tgt_path

        return _tagged(path, build)

    def square(self, ref: str | Path, base: Path | None = None) -> Square:
        path = resolve(ref, base)
        raw = self._raw(path)

        def build() -> Square:
            ps = {k: self.presheaf(raw[k], path.parent) for k in ("K", "A", "B", "L")}
            legs = {"kA": ("K", "A"), "kB": ("K", "B"), "aL": ("A", "L"), "bL": ("B", "L")}
            homs = {
                name: validate_hom(raw[name], ps[s], ps[t]) for name, (s, t) in legs.items()
            }
            return Square(ps["K"], ps["A"], ps["B"], ps["L"], homs["kA"], homs["kB"], homs["aL"], homs["bL"])

        return _tagged(path, build)

    def system(self, ref: str | Path, base: Path | None = None) -> EqSystem:
        path = resolve(ref, base)
        raw = self._raw(path)
        return _tagged(path, lambda: system_from_json(raw))

    def detect(self, ref: str | Path) -> tuple[str, Any]:
        """Load a file of any supported kind, guessing the kind from its keys."""
        path = resolve(ref)
        raw = read_json(path)
        if not isinstance(raw, dict):
            err = BadTyping("top-level JSON value must be an object")
            err.file = str(path)
            raise err
        if "objects" in raw:
            return "category", self.category(path)
        if "carriers" in raw:
            return "presheaf", self.presheaf(path)
        if "map" in raw and "source" in raw:
            return "hom", self.hom(path)[0]
        if {"K", "A", "B", "L"} <= raw.keys():
            return "square", self.square(path)
        if "vars" in raw:
            return "system", self.system(path)
        err = BadTyping("unrecognised file kind")
        err.file = str(path)
        raise err


def check_same_source(a: tuple[Hom, Path, Path], b: tuple[Hom, Path, Path]) -> None:
    if a[1] != b[1]:
        raise SourceMismatch(f"homs have different source files: {a[1]} vs {b[1]}")


def check_same_target(a: tuple[Hom, Path, Path], b: tuple[Hom, Path, Path]) -> None:
    if a[2] != b[2]:
        raise TargetMismatch(f"homs have different target files: {a[2]} vs {b[2]}")


# ---------------------------------------------------------------- serialisation


def category_to_json(cat: FinCat) -> str:
    return dumps(category_to_raw(cat))


def presheaf_to_json(p: Presheaf, category_ref: str) -> str:
    return dumps({"category": category_ref, **p.to_raw()})


def hom_to_json(h: Hom, source_ref: str, target_ref: str) -> str:
    return dumps({"source": source_ref, "target": target_ref, "map": h.to_raw()})


def square_to_json(sq: Square, refs: dict[str, str]) -> str:
    return dumps(
        {
            **{k: refs[k] for k in ("K", "A", "B", "L")},
            "kA": sq.kA.to_raw(),
            "kB": sq.kB.to_raw(),
            "aL": sq.aL.to_raw(),
            "bL": sq.bL.to_raw(),
        }
    )


def system_to_json(system: EqSystem) -> dict[str, Any]:
    eqs = []
    for eq in system.eqs:
        if isinstance(eq, Link):
            eqs.append({"kind": "link", "f": eq.f, "i": eq.i, "g": eq.g, "j": eq.j})
        else:
            eqs.append({"kind": "anchor", "f": eq.f, "i": eq.i, "p": eq.p})
    return {"vars": [{"name": n, "sort": s} for n, s in system.vars], "eqs": eqs}


def system_from_json(raw: dict[str, Any]) -> EqSystem:
    vars_ = tuple((str(v["name"]), str(v["sort"])) for v in raw.get("vars", []))
    eqs: list[Link | Anchor] = []
    for k, e in enumerate(raw.get("eqs", [])):
        if e.get("kind") == "link":
            eqs.append(Link(str(e["f"]), int(e["i"]), str(e["g"]), int(e["j"])))
        elif e.get("kind") == "anchor":
            eqs.append(Anchor(str(e["f"]), int(e["i"]), str(e["p"])))
        else:
            raise BadTyping(f"unknown equation kind {e.get('kind')!r}", location=f"eqs[{k}]")
    return EqSystem(vars_, tuple(eqs))


def write_trace(trace, out_dir: Path, category_ref: str) -> Path:
    """One presheaf file per stage plus ``manifest.json``."""
    from .witness import trace_manifest

    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = trace_manifest(trace)
    manifest["category"] = category_ref
    for st, entry in zip(trace.stages, manifest["stages"]):
        (out_dir / entry["file"]).write_text(presheaf_to_json(st.presheaf, category_ref), encoding="utf-8")
    (out_dir / "manifest.json").write_text(dumps(manifest), encoding="utf-8")
    return out_dir / "manifest.json"
