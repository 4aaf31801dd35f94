"""Finite categories given by composition tables, and the LLP decision.

Composition is written ``comp(g, f)`` and means "first ``f``, then ``g``".
Identity arrows are always named ``"id_" + object``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Iterator, Mapping, NamedTuple

from .errors import (
    BadTyping,
    BadUnit,
    DuplicateName,
    MissingComposite,
    NonAssociative,
    NotAPoset,
    NotAssociative,
    UnknownObject,
)

ID_PREFIX = "id_"


class Arrow(NamedTuple):
    name: str
    dom: str
    cod: str


class SpanWitness(NamedTuple):
    apex: str
    left: str
    right: str


def identity_name(obj: str) -> str:
    return ID_PREFIX + obj


@dataclass(frozen=True, eq=False)
class FinCat:
    objects: tuple[str, ...]
    arrows: tuple[Arrow, ...]
    identity: Mapping[str, str]
    comp: Mapping[tuple[str, str], str]
    _by_name: dict[str, Arrow] = field(init=False, repr=False)
    _out: dict[str, tuple[str, ...]] = field(init=False, repr=False)
    _hom: dict[tuple[str, str], tuple[str, ...]] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        by_name = {a.name: a for a in self.arrows}
        out: dict[str, list[str]] = {x: [] for x in self.objects}
        hom: dict[tuple[str, str], list[str]] = {}
        for a in self.arrows:
            out[a.dom].append(a.name)
            hom.setdefault((a.dom, a.cod), []).append(a.name)
        object.__setattr__(self, "_by_name", by_name)
        object.__setattr__(self, "_out", {k: tuple(v) for k, v in out.items()})
        object.__setattr__(self, "_hom", {k: tuple(v) for k, v in hom.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FinCat):
            return NotImplemented
        return (
            self.objects == other.objects
            and self.arrows == other.arrows
            and dict(self.identity) == dict(other.identity)
            and dict(self.comp) == dict(other.comp)
        )

    __hash__ = None  # type: ignore[assignment]

    def arrow(self, name: str) -> Arrow:
        try:
            return self._by_name[name]
        except KeyError:
            raise BadTyping(f"unknown arrow {name!r}", location=f"arrows.{name}") from None

    def has_arrow(self, name: str) -> bool:
        return name in self._by_name

    def dom(self, name: str) -> str:
        return self.arrow(name).dom

    def cod(self, name: str) -> str:
        return self.arrow(name).cod

    def is_identity(self, name: str) -> bool:
        a = self.arrow(name)
        return self.identity[a.dom] == name

    def arrows_from(self, obj: str) -> tuple[str, ...]:
        return self._out.get(obj, ())

    def hom(self, x: str, y: str) -> tuple[str, ...]:
        return self._hom.get((x, y), ())

    def compose(self, g: str, f: str) -> str:
        """``g`` after ``f``."""
        try:
            return self.comp[(g, f)]
        except KeyError:
            raise BadTyping(f"{g} o {f} is not composable") from None

    def non_identity_arrows(self) -> tuple[Arrow, ...]:
        return tuple(a for a in self.arrows if self.identity[a.dom] != a.name)

    def opposite(self) -> "FinCat":
        arrows = tuple(Arrow(a.name, a.cod, a.dom) for a in self.arrows)
        comp = {(f, g): h for (g, f), h in self.comp.items()}
        return FinCat(self.objects, arrows, dict(self.identity), comp)

    def __repr__(self) -> str:
        return f"FinCat(objects={list(self.objects)}, arrows={len(self.arrows)})"


def _check_laws(cat: FinCat, assoc_error: type[NonAssociative] = NonAssociative) -> None:
    for a in cat.arrows:
        if cat.comp.get((cat.identity[a.cod], a.name)) != a.name or cat.comp.get(
            (a.name, cat.identity[a.dom])
        ) != a.name:
            raise BadTyping(f"identity law fails for {a.name}", location=f"compose.{a.name}")
    for (g, f), h in cat.comp.items():
        ag, af, ah = cat.arrow(g), cat.arrow(f), cat.arrow(h)
        if ah.dom != af.dom or ah.cod != ag.cod:
            raise BadTyping(
                f"composite {g} o {f} = {h} has type {ah.dom}->{ah.cod}, "
                f"expected {af.dom}->{ag.cod}",
                location=f"compose.{g}.{f}",
            )
    for f in cat.arrows:
        for g in cat.arrows_from(f.cod):
            gf = cat.comp[(g, f.name)]
            for h in cat.arrows_from(cat.cod(g)):
                left = cat.comp[(h, gf)]
                right = cat.comp[(cat.comp[(h, g)], f.name)]
                if left != right:
                    raise assoc_error(
                        f"({h} o {g}) o {f.name} = {right} but {h} o ({g} o {f.name}) = {left}",
                        location=f"compose.{h}.{g}.{f.name}",
                        triple=(h, g, f.name),
                    )


def validate_category(raw: Mapping[str, Any]) -> FinCat:
    """Build a FinCat from the JSON-shaped description.

    ``raw`` has keys ``objects``, ``arrows`` (non-identity, with dom/cod) and
    ``compose`` (entries ``{"g", "f", "gf"}`` for every composable pair of
    non-identity arrows). Identities are synthesized.
    """
    objects = [str(x) for x in raw.get("objects", [])]
    seen: set[str] = set()
    for x in objects:
        if x in seen:
            raise DuplicateName(f"object {x!r} listed twice", location=f"objects.{x}")
        seen.add(x)
    identity = {x: identity_name(x) for x in objects}
    reserved = set(identity.values())

    arrows = [Arrow(identity[x], x, x) for x in objects]
    names = set(reserved)
    for i, entry in enumerate(raw.get("arrows", [])):
        name, dom, cod = str(entry["name"]), str(entry["dom"]), str(entry["cod"])
        if name in names:
            raise DuplicateName(f"arrow name {name!r} is already in use", location=f"arrows[{i}]")
        for end in (dom, cod):
            if end not in seen:
                raise BadTyping(f"arrow {name!r} refers to unknown object {end!r}", location=f"arrows[{i}]")
        names.add(name)
        arrows.append(Arrow(name, dom, cod))
    by_name = {a.name: a for a in arrows}

    comp: dict[tuple[str, str], str] = {}
    for a in arrows:
        comp[(identity[a.cod], a.name)] = a.name
        comp[(a.name, identity[a.dom])] = a.name
    given: set[tuple[str, str]] = set()
    for i, entry in enumerate(raw.get("compose", [])):
        g, f, gf = str(entry["g"]), str(entry["f"]), str(entry["gf"])
        loc = f"compose[{i}]"
        for n in (g, f, gf):
            if n not in by_name:
                raise BadTyping(f"compose entry refers to unknown arrow {n!r}", location=loc)
        if g in reserved or f in reserved:
            raise BadTyping("composites with identities are implied and must be omitted", location=loc)
        if by_name[f].cod != by_name[g].dom:
            raise BadTyping(f"{g} o {f} is not composable", location=loc)
        if (g, f) in given:
            raise DuplicateName(f"composite {g} o {f} given twice", location=loc)
        if by_name[gf].dom != by_name[f].dom or by_name[gf].cod != by_name[g].cod:
            raise BadTyping(f"composite {g} o {f} = {gf} has the wrong type", location=loc)
        given.add((g, f))
        comp[(g, f)] = gf

    for f in arrows:
        if f.name in reserved:
            continue
        for g in arrows:
            if g.name in reserved or g.dom != f.cod:
                continue
            if (g.name, f.name) not in comp:
                raise MissingComposite(
                    f"no composite given for {g.name} o {f.name}",
                    location="compose",
                    pair=(g.name, f.name),
                )

    cat = FinCat(tuple(objects), tuple(arrows), identity, comp)
    _check_laws(cat)
    return cat


def category_to_raw(cat: FinCat) -> dict[str, Any]:
    """Inverse of :func:`validate_category` (identities and forced composites dropped)."""
    ids = set(cat.identity.values())
    arrows = [a for a in cat.arrows if a.name not in ids]
    compose = []
    for f in arrows:
        for g in arrows:
            if g.dom == f.cod:
                compose.append({"g": g.name, "f": f.name, "gf": cat.comp[(g.name, f.name)]})
    return {
        "objects": list(cat.objects),
        "arrows": [{"name": a.name, "dom": a.dom, "cod": a.cod} for a in arrows],
        "compose": compose,
    }


def is_llp(cat: FinCat) -> tuple[bool, SpanWitness | None]:
    """Decide whether ``cat`` is locally linearly preordered.

    Returns ``(True, None)`` or ``(False, witness)`` where the witness is the
    first span, in canonical order, for which neither leg factors through the
    other.
    """
    for apex in cat.objects:
        out = cat.arrows_from(apex)
        for f, g in itertools.product(out, repeat=2):
            if factor_through(cat, f, g) is None and factor_through(cat, g, f) is None:
                return False, SpanWitness(apex, f, g)
    return True, None


def factor_through(cat: FinCat, f: str, g: str) -> str | None:
    """First ``h`` with ``comp(h, f) == g``, if any."""
    for h in cat.hom(cat.cod(f), cat.cod(g)):
        if cat.comp[(h, f)] == g:
            return h
    return None


def is_groupoid(cat: FinCat) -> bool:
    for a in cat.arrows:
        if not any(
            cat.comp[(b, a.name)] == cat.identity[a.dom] and cat.comp[(a.name, b)] == cat.identity[a.cod]
            for b in cat.hom(a.cod, a.dom)
        ):
            return False
    return True


MONOID_OBJECT = "*"


def monoid_to_cat(
    elements: Iterable[Hashable],
    table: Mapping[Any, Any] | Callable[[Any, Any], Any],
    unit: Hashable,
) -> FinCat:
    """One-object category of a finite monoid.

    ``table`` is either a callable ``mul(x, y)``, a mapping ``{(x, y): xy}`` or
    a nested mapping ``table[x][y]``. The product ``xy`` is the composite
    ``comp(x, y)``: act by ``y`` first. The unit becomes the identity arrow
    ``id_*``; every other element keeps ``str(element)`` as its arrow name.
    """
    elems = list(elements)
    if unit not in elems:
        raise BadUnit(f"unit {unit!r} is not an element")

    def mul(x: Any, y: Any) -> Any:
        if callable(table):
            return table(x, y)
        if (x, y) in table:
            return table[(x, y)]
        try:
            return table[x][y]
        except (KeyError, TypeError):
            raise MissingComposite(f"no product given for {x!r}*{y!r}", pair=(str(x), str(y))) from None

    ident = identity_name(MONOID_OBJECT)
    name = {e: (ident if e == unit else str(e)) for e in elems}
    if len(set(name.values())) != len(elems):
        raise DuplicateName("monoid element names collide (after renaming the unit)")
    comp: dict[tuple[str, str], str] = {}
    for x, y in itertools.product(elems, repeat=2):
        xy = mul(x, y)
        if xy not in name:
            raise BadTyping(f"{x!r}*{y!r} = {xy!r} is not an element")
        comp[(name[x], name[y])] = name[xy]
    for x in elems:
        if mul(unit, x) != x or mul(x, unit) != x:
            raise BadUnit(f"{unit!r} is not a two-sided unit (fails at {x!r})", element=str(x))
    arrows = tuple(Arrow(name[e], MONOID_OBJECT, MONOID_OBJECT) for e in [unit] + [e for e in elems if e != unit])
    cat = FinCat((MONOID_OBJECT,), arrows, {MONOID_OBJECT: ident}, comp)
    _check_laws(cat, NotAssociative)
    return cat


def poset_arrow_name(x: str, y: str) -> str:
    return f"{x}<{y}"


def poset_to_cat(
    elements: Iterable[Hashable],
    leq: Iterable[tuple[Hashable, Hashable]] | Callable[[Any, Any], bool],
) -> FinCat:
    """Thin category of a finite poset; the arrow ``x -> y`` is named ``"x<y"``."""
    elems = list(elements)
    if callable(leq):
        rel = {(x, y) for x in elems for y in elems if leq(x, y)}
    else:
        rel = set(leq)
    for x in elems:
        if (x, x) not in rel:
            raise NotAPoset(f"not reflexive at {x!r}", pair=(str(x), str(x)))
    for x, y in itertools.permutations(elems, 2):
        if (x, y) in rel and (y, x) in rel:
            raise NotAPoset(f"not antisymmetric: {x!r}, {y!r}", pair=(str(x), str(y)))
    for x, y, z in itertools.product(elems, repeat=3):
        if (x, y) in rel and (y, z) in rel and (x, z) not in rel:
            raise NotAPoset(f"not transitive: {x!r}, {y!r}, {z!r}", triple=(str(x), str(y), str(z)))
    objects = tuple(str(x) for x in elems)
    identity = {x: identity_name(x) for x in objects}

    def arrow_name(x: Any, y: Any) -> str:
        return identity[str(x)] if x == y else poset_arrow_name(str(x), str(y))

    arrows = [Arrow(identity[o], o, o) for o in objects]
    arrows += [Arrow(arrow_name(x, y), str(x), str(y)) for x in elems for y in elems if x != y and (x, y) in rel]
    comp = {}
    for x, y, z in itertools.product(elems, repeat=3):
        if (x, y) in rel and (y, z) in rel:
            comp[(arrow_name(y, z), arrow_name(x, y))] = arrow_name(x, z)
    return FinCat(objects, tuple(arrows), identity, comp)


def upper_sets_linear(elements: Iterable[Hashable], leq: Iterable[tuple[Hashable, Hashable]]) -> bool:
    """Direct check on the relation: every upper set is a chain."""
    elems = list(elements)
    rel = set(leq)
    for x in elems:
        up = [y for y in elems if (x, y) in rel]
        for y, z in itertools.combinations(up, 2):
            if (y, z) not in rel and (z, y) not in rel:
                return False
    return True


def iter_spans(cat: FinCat) -> Iterator[SpanWitness]:
    for apex in cat.objects:
        for f, g in itertools.product(cat.arrows_from(apex), repeat=2):
            yield SpanWitness(apex, f, g)


def require_object(cat: FinCat, x: str) -> None:
    if x not in cat.objects:
        raise UnknownObject(f"unknown object {x!r}", location=f"objects.{x}")
