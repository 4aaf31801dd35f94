"""Pushouts and pullbacks of monomorphisms, and commuting squares.

A square is drawn as::

    A --aL--> L
    ^         ^
    kA        bL
    |         |
    K --kB--> B
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import IncompatibleSquare, NotMono, SourceMismatch, TargetMismatch
from .presheaf import Elem, Hom, Presheaf, intersect, is_mono, validate_hom


@dataclass(frozen=True)
class Square:
    K: Presheaf
    A: Presheaf
    B: Presheaf
    L: Presheaf
    kA: Hom
    kB: Hom
    aL: Hom
    bL: Hom

    __hash__ = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        checks = [
            ("kA", self.kA, self.K, self.A),
            ("kB", self.kB, self.K, self.B),
            ("aL", self.aL, self.A, self.L),
            ("bL", self.bL, self.B, self.L),
        ]
        for name, h, src, tgt in checks:
            if h.source != src or h.target != tgt:
                raise IncompatibleSquare(f"{name} has the wrong source or target", location=name)
        for x in self.K.elements():
            if self.aL(self.kA(x)) != self.bL(self.kB(x)):
                raise IncompatibleSquare(f"square does not commute at {x[0]}:{x[1]}", element=x)

    @property
    def diagonal(self) -> Hom:
        return self.kA.then(self.aL)


@dataclass(frozen=True)
class PushoutResult:
    P: Presheaf
    inA: Hom
    inB: Hom
    kA: Hom
    kB: Hom

    __hash__ = None  # type: ignore[assignment]

    def square(self) -> Square:
        return Square(self.kA.source, self.kA.target, self.kB.target, self.P, self.kA, self.kB, self.inA, self.inB)


def _require_mono(h: Hom, name: str) -> None:
    if not is_mono(h):
        raise NotMono(f"{name} is not injective on every sort", location=name)


def pushout_monos(kA: Hom, kB: Hom) -> PushoutResult:
    """Amalgamated union ``A + B`` over ``K`` for two monos out of ``K``.

    Elements are named ``K/<k>`` for the shared copy of ``K``, ``A/<x>`` and
    ``B/<y>`` for the rest of ``A`` and ``B``.
    """
    _require_mono(kA, "kA")
    _require_mono(kB, "kB")
    if kA.source != kB.source:
        raise SourceMismatch("the two legs have different sources")
    K, A, B = kA.source, kA.target, kB.target
    cat = K.cat
    back_a = {s: {y: x for x, y in kA.map[s].items()} for s in cat.objects}
    back_b = {s: {y: x for x, y in kB.map[s].items()} for s in cat.objects}

    def name_a(s: str, x: str) -> str:
        k = back_a[s].get(x)
        return f"K/{k}" if k is not None else f"A/{x}"

    def name_b(s: str, y: str) -> str:
        k = back_b[s].get(y)
        return f"K/{k}" if k is not None else f"B/{y}"

    carrier = {
        s: tuple(
            [f"K/{k}" for k in K.carrier[s]]
            + [f"A/{x}" for x in A.carrier[s] if x not in back_a[s]]
            + [f"B/{y}" for y in B.carrier[s] if y not in back_b[s]]
        )
        for s in cat.objects
    }
    action: dict[str, dict[str, str]] = {}
    for a in cat.arrows:
        table = {f"K/{k}": f"K/{K.action[a.name][k]}" for k in K.carrier[a.dom]}
        for x in A.carrier[a.dom]:
            if x not in back_a[a.dom]:
                table[f"A/{x}"] = name_a(a.cod, A.action[a.name][x])
        for y in B.carrier[a.dom]:
            if y not in back_b[a.dom]:
                table[f"B/{y}"] = name_b(a.cod, B.action[a.name][y])
        action[a.name] = table
    P = Presheaf(cat, carrier, action)
    inA = Hom(A, P, {s: {x: name_a(s, x) for x in A.carrier[s]} for s in cat.objects})
    inB = Hom(B, P, {s: {y: name_b(s, y) for y in B.carrier[s]} for s in cat.objects})
    return PushoutResult(P, inA, inB, kA, kB)


def pullback_monos(aL: Hom, bL: Hom) -> Square:
    """Complete a cospan of monos with the intersection of the two images.

    ``K`` keeps the element names it has in ``L``.
    """
    _require_mono(aL, "aL")
    _require_mono(bL, "bL")
    if aL.target != bL.target:
        raise TargetMismatch("the two legs have different targets")
    L = aL.target
    K = intersect(aL.image(), bL.image()).to_presheaf()
    inv_a = {s: {y: x for x, y in aL.map[s].items()} for s in L.cat.objects}
    inv_b = {s: {y: x for x, y in bL.map[s].items()} for s in L.cat.objects}
    kA = Hom(K, aL.source, {s: {k: inv_a[s][k] for k in K.carrier[s]} for s in L.cat.objects})
    kB = Hom(K, bL.source, {s: {k: inv_b[s][k] for k in K.carrier[s]} for s in L.cat.objects})
    return Square(K, aL.source, bL.source, L, kA, kB, aL, bL)


def induced_map(po: PushoutResult, square: Square) -> Hom:
    """The unique ``u: P -> L`` with ``u . inA = aL`` and ``u . inB = bL``."""
    if (
        po.kA.source != square.K
        or po.kA.target != square.A
        or po.kB.target != square.B
        or po.kA.to_raw() != square.kA.to_raw()
        or po.kB.to_raw() != square.kB.to_raw()
    ):
        raise IncompatibleSquare("square and pushout do not share the span K -> A, K -> B")
    cat = po.P.cat
    u: dict[str, dict[str, str]] = {s: {} for s in cat.objects}
    for s in cat.objects:
        for x in square.A.carrier[s]:
            u[s][po.inA.map[s][x]] = square.aL.map[s][x]
        for y in square.B.carrier[s]:
            p = po.inB.map[s][y]
            v = square.bL.map[s][y]
            if u[s].setdefault(p, v) != v:
                raise IncompatibleSquare(f"square does not commute at {s}:{p}")
    return validate_hom(u, po.P, square.L)


def is_pullback_square(square: Square) -> bool:
    _require_mono(square.aL, "aL")
    _require_mono(square.bL, "bL")
    diag = square.diagonal
    if not is_mono(diag):
        return False
    return diag.image() == intersect(square.aL.image(), square.bL.image())


def image_elements(h: Hom) -> set[Elem]:
    return set(h.image().elements())
