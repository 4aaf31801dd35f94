"""Regenerate the JSON fixtures shipped in ``src/purelab/fixtures``."""

from __future__ import annotations

import random
from pathlib import Path

from purelab.fixtures import CATEGORIES, c2, rep_z
from purelab.io import category_to_json, hom_to_json, presheaf_to_json, square_to_json
from purelab.presheaf import Presheaf, generate, identity_hom
from purelab.suite import meeting_pairs, random_pure_pullback
from purelab.fixtures import chain3

OUT = Path(__file__).resolve().parent.parent / "src" / "purelab" / "fixtures"


def write(name: str, text: str) -> None:
    (OUT / name).write_text(text, encoding="utf-8")


def main() -> None:
    OUT.mkdir(exist_ok=True)
    for name, build in CATEGORIES.items():
        write(f"{name}.cat.json", category_to_json(build()))

    R = rep_z()
    write("rep_Z.psh.json", presheaf_to_json(R, "span.cat.json"))
    write("rep_Z.id.hom.json", hom_to_json(identity_hom(R), "rep_Z.psh.json", "rep_Z.psh.json"))
    for name in ("f", "g"):
        S = generate(R, [R.find(name)])
        write(f"gen_{name}.psh.json", presheaf_to_json(S.to_presheaf(), "span.cat.json"))
        write(f"gen_{name}.hom.json", hom_to_json(S.inclusion(), f"gen_{name}.psh.json", "rep_Z.psh.json"))

    # over C2: the regular act, the empty act, a fixed point inside two fixed points
    cat = c2()
    reg = Presheaf(cat, {"*": ("e", "s")}, {"id_*": {"e": "e", "s": "s"}, "s": {"e": "s", "s": "e"}})
    empty = Presheaf(cat, {"*": ()}, {"id_*": {}, "s": {}})
    two = Presheaf(cat, {"*": ("p", "q")}, {"id_*": {"p": "p", "q": "q"}, "s": {"p": "p", "q": "q"}})
    one = Presheaf(cat, {"*": ("p",)}, {"id_*": {"p": "p"}, "s": {"p": "p"}})
    write("c2_regular.psh.json", presheaf_to_json(reg, "c2.cat.json"))
    write("c2_empty.psh.json", presheaf_to_json(empty, "c2.cat.json"))
    write("c2_two_points.psh.json", presheaf_to_json(two, "c2.cat.json"))
    write("c2_point.psh.json", presheaf_to_json(one, "c2.cat.json"))
    write("c2_point.hom.json", hom_to_json(generate(two, [("*", "p")]).inclusion(), "c2_point.psh.json", "c2_two_points.psh.json"))
    eid = {"*": {}}
    rid = {"*": {"e": "e", "s": "s"}}
    write(
        "c2_empty_regular.sq.json",
        square_to_json(
            _square(empty, reg, reg, reg, eid, eid, rid, rid),
            {"K": "c2_empty.psh.json", "A": "c2_regular.psh.json", "B": "c2_regular.psh.json", "L": "c2_regular.psh.json"},
        ),
    )

    # over CHAIN3: a pullback square of pure monos with a link through K
    rng = random.Random(7)
    while True:
        sq = random_pure_pullback(chain3(), rng, max_size=7, want_meet=True)
        if meeting_pairs(sq):
            break
    for k in ("K", "A", "B", "L"):
        write(f"chain3_{k}.psh.json", presheaf_to_json(getattr(sq, k), "chain3.cat.json"))
    write(
        "chain3_meet.sq.json",
        square_to_json(sq, {k: f"chain3_{k}.psh.json" for k in ("K", "A", "B", "L")}),
    )
    write("chain3_aL.hom.json", hom_to_json(sq.aL, "chain3_A.psh.json", "chain3_L.psh.json"))
    write("chain3_bL.hom.json", hom_to_json(sq.bL, "chain3_B.psh.json", "chain3_L.psh.json"))
    write("chain3_kA.hom.json", hom_to_json(sq.kA, "chain3_K.psh.json", "chain3_A.psh.json"))
    write("chain3_kB.hom.json", hom_to_json(sq.kB, "chain3_K.psh.json", "chain3_B.psh.json"))


def _square(K, A, B, L, kA, kB, aL, bL):
    from purelab.limits import Square
    from purelab.presheaf import Hom

    return Square(K, A, B, L, Hom(K, A, kA), Hom(K, B, kB), Hom(A, L, aL), Hom(B, L, bL))


if __name__ == "__main__":
    main()
