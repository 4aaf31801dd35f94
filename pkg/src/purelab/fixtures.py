"""Named fixture categories and presheaves.

The same objects are shipped as JSON under ``purelab/fixtures``; the CLI
looks there (or in ``$PURELAB_FIXTURES``) for paths starting ``fixtures/``.
"""

from __future__ import annotations

import itertools
import os
from pathlib import Path

from .fincat import FinCat, monoid_to_cat, poset_to_cat, validate_category
from .presheaf import Presheaf, representable

INF = "inf"


def fixture_dir() -> Path:
    env = os.environ.get("PURELAB_FIXTURES")
    if env:
        return Path(env)
    return Path(__file__).with_name("fixtures")


def span() -> FinCat:
    """``X <-f- Z -g-> Y`` with no further composites."""
    return validate_category(
        {
            "objects": ["X", "Y", "Z"],
            "arrows": [{"name": "f", "dom": "Z", "cod": "X"}, {"name": "g", "dom": "Z", "cod": "Y"}],
            "compose": [],
        }
    )


def c2() -> FinCat:
    return monoid_to_cat(["e", "s"], {("e", "e"): "e", ("e", "s"): "s", ("s", "e"): "s", ("s", "s"): "e"}, "e")


def chain3() -> FinCat:
    return poset_to_cat([0, 1, 2], lambda x, y: x <= y)


def vee() -> FinCat:
    rel = {("a", "a"), ("b", "b"), ("c", "c"), ("a", "b"), ("a", "c")}
    return poset_to_cat(["a", "b", "c"], rel)


def nxtrunc_mul(x: str, y: str) -> str:
    """``{1, 2, 3, inf}``: 1 is the unit, every other product is ``inf``."""
    if x == "1":
        return y
    if y == "1":
        return x
    return INF


def nxtrunc() -> FinCat:
    return monoid_to_cat(["1", "2", "3", INF], nxtrunc_mul, "1")


# Delta truncated to [0], [1]: arrows as monotone maps (tuple of images)
_DELTA1 = {
    "d0": ("0", "1", (1,)),
    "d1": ("0", "1", (0,)),
    "s": ("1", "0", (0, 0)),
    "k0": ("1", "1", (0, 0)),
    "k1": ("1", "1", (1, 1)),
}


def delta1_op() -> FinCat:
    """Opposite of the full subcategory of Delta on ``[0]`` and ``[1]``.

    Presheaves on it are 1-truncated simplicial sets; the two face maps form
    a span out of ``1`` that cannot be completed to a commuting triangle.
    """
    ident = {"0": (0,), "1": (0, 1)}
    by_map = {(d, c, m): n for n, (d, c, m) in _DELTA1.items()}
    by_map.update({(o, o, m): None for o, m in ident.items()})

    def name_of(dom: str, cod: str, m: tuple[int, ...]) -> str | None:
        return by_map[(dom, cod, m)]

    compose = []
    for f, g in itertools.product(_DELTA1, repeat=2):
        fd, fc, fm = _DELTA1[f]
        gd, gc, gm = _DELTA1[g]
        if fc != gd:
            continue
        # in Delta, g after f; in the opposite category that is f after g
        h = name_of(fd, gc, tuple(gm[i] for i in fm))
        compose.append({"g": f, "f": g, "gf": h if h is not None else f"id_{fd}"})
    raw = {
        "objects": ["0", "1"],
        "arrows": [{"name": n, "dom": c, "cod": d} for n, (d, c, _) in _DELTA1.items()],
        "compose": compose,
    }
    return validate_category(raw)


def rep_z() -> Presheaf:
    return representable(span(), "Z")


CATEGORIES = {
    "span": span,
    "c2": c2,
    "chain3": chain3,
    "vee": vee,
    "nxtrunc": nxtrunc,
    "delta1op": delta1_op,
}
