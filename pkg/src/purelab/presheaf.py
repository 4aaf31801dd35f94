"""Finite presheaves as multi-sorted unary algebras.

An element is a pair ``(sort, name)``; names only need to be unique inside
their sort. ``Presheaf.action[f][x]`` is the name of ``f . x`` for ``x`` a
name in sort ``dom(f)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Iterable, Iterator, Mapping

from .errors import (
    BadTyping,
    CompositionViolation,
    DifferentAmbient,
    DuplicateName,
    ElementNotInAmbient,
    EmptyActionEntry,
    NaturalityViolation,
    UnknownElement,
)
from .fincat import FinCat, require_object

Elem = tuple[str, str]


def fmt(x: Elem) -> str:
    return f"{x[0]}:{x[1]}"


@dataclass(frozen=True)
class Presheaf:
    cat: FinCat
    carrier: Mapping[str, tuple[str, ...]]
    action: Mapping[str, Mapping[str, str]]

    __hash__ = None  # type: ignore[assignment]

    def act(self, f: str, x: Elem) -> Elem:
        a = self.cat.arrow(f)
        if x[0] != a.dom:
            raise BadTyping(f"cannot apply {f}: {a.dom}->{a.cod} to {fmt(x)}")
        return (a.cod, self.action[f][x[1]])

    def elements(self) -> list[Elem]:
        return [(s, n) for s in self.cat.objects for n in self.carrier[s]]

    def sort_elements(self, sort: str) -> list[Elem]:
        return [(sort, n) for n in self.carrier[sort]]

    def __len__(self) -> int:
        return sum(len(v) for v in self.carrier.values())

    def __contains__(self, x: object) -> bool:
        return (
            isinstance(x, tuple)
            and len(x) == 2
            and x[0] in self.carrier
            and x[1] in self._names(x[0])
        )

    def _names(self, sort: str) -> frozenset[str]:
        cache = self.__dict__.setdefault("_name_cache", {})
        if sort not in cache:
            cache[sort] = frozenset(self.carrier[sort])
        return cache[sort]

    def find(self, ref: str | Elem) -> Elem:
        """Resolve ``"name"``, ``"sort:name"`` or an ``(sort, name)`` pair."""
        if isinstance(ref, tuple):
            if ref in self:
                return ref
            raise UnknownElement(f"no element {fmt(ref)}")
        hits = [(s, ref) for s in self.cat.objects if ref in self._names(s)]
        if len(hits) == 1:
            return hits[0]
        if ":" in ref:
            s, _, n = ref.partition(":")
            if (s, n) in self:
                return (s, n)
        if not hits:
            raise UnknownElement(f"no element named {ref!r}")
        raise UnknownElement(f"element name {ref!r} is ambiguous; use sort:name")

    def generated_by(self, x: Elem) -> set[Elem]:
        return {self.act(f, x) for f in self.cat.arrows_from(x[0])}

    def whole(self) -> "SubPresheaf":
        return SubPresheaf(self, {s: frozenset(v) for s, v in self.carrier.items()})

    def empty(self) -> "SubPresheaf":
        return SubPresheaf(self, {s: frozenset() for s in self.cat.objects})

    def to_raw(self) -> dict[str, Any]:
        return {
            "carriers": {s: list(self.carrier[s]) for s in self.cat.objects},
            "actions": {
                a.name: {x: self.action[a.name][x] for x in self.carrier[a.dom]}
                for a in self.cat.non_identity_arrows()
            },
        }

    def __repr__(self) -> str:
        sizes = ", ".join(f"{s}:{len(self.carrier[s])}" for s in self.cat.objects)
        return f"Presheaf({sizes})"


def validate_presheaf(cat: FinCat, raw: Mapping[str, Any]) -> Presheaf:
    """Check carriers and actions against the category and build a Presheaf.

    ``raw`` has ``carriers: {object: [name, ...]}`` and ``actions: {arrow:
    {name: name}}`` for the non-identity arrows.
    """
    carriers_in = raw.get("carriers", {})
    actions_in = raw.get("actions", {})
    for s in carriers_in:
        if s not in cat.objects:
            raise BadTyping(f"carrier given for unknown object {s!r}", location=f"carriers.{s}")
    carrier: dict[str, tuple[str, ...]] = {}
    for s in cat.objects:
        names = tuple(str(n) for n in carriers_in.get(s, []))
        if len(set(names)) != len(names):
            dup = next(n for n in names if names.count(n) > 1)
            raise DuplicateName(f"element {dup!r} repeated in sort {s}", location=f"carriers.{s}")
        carrier[s] = names

    for f in actions_in:
        if not cat.has_arrow(f):
            raise BadTyping(f"action given for unknown arrow {f!r}", location=f"actions.{f}")

    action: dict[str, dict[str, str]] = {}
    for a in cat.arrows:
        dom_names, cod_names = carrier[a.dom], set(carrier[a.cod])
        if cat.is_identity(a.name):
            given = actions_in.get(a.name)
            if given is not None and any(str(k) != str(v) for k, v in given.items()):
                raise CompositionViolation(
                    f"identity {a.name} must act trivially", location=f"actions.{a.name}"
                )
            action[a.name] = {x: x for x in dom_names}
            continue
        table = {str(k): str(v) for k, v in (actions_in.get(a.name) or {}).items()}
        for x in table:
            if x not in dom_names:
                raise BadTyping(
                    f"{a.name} acts on {x!r}, which is not in sort {a.dom}",
                    location=f"actions.{a.name}.{x}",
                )
        for x in dom_names:
            if x not in table:
                raise EmptyActionEntry(
                    f"no value for {a.name} . {x}", location=f"actions.{a.name}.{x}"
                )
            if table[x] not in cod_names:
                raise BadTyping(
                    f"{a.name} . {x} = {table[x]!r} is not in sort {a.cod}",
                    location=f"actions.{a.name}.{x}",
                )
        action[a.name] = {x: table[x] for x in dom_names}

    for (g, f), h in cat.comp.items():
        for x in carrier[cat.dom(f)]:
            if action[g][action[f][x]] != action[h][x]:
                raise CompositionViolation(
                    f"{g}({f}({x})) = {action[g][action[f][x]]} but {h}({x}) = {action[h][x]}",
                    location=f"actions.{h}.{x}",
                    pair=(g, f),
                    element=x,
                )
    return Presheaf(cat, carrier, action)


def representable(cat: FinCat, x: str) -> Presheaf:
    """The presheaf ``cat(x, -)``; its elements are named after the arrows out of ``x``."""
    require_object(cat, x)
    carrier = {y: cat.hom(x, y) for y in cat.objects}
    action = {
        a.name: {b: cat.comp[(a.name, b)] for b in carrier[a.dom]} for a in cat.arrows
    }
    return Presheaf(cat, carrier, action)


def coproduct(*parts: Presheaf, tags: Iterable[str] | None = None) -> Presheaf:
    """Disjoint union; elements of part ``i`` are renamed ``"<tag>/<name>"``."""
    if not parts:
        raise ValueError("coproduct of nothing")
    cat = parts[0].cat
    tags = list(tags) if tags is not None else [str(i) for i in range(len(parts))]
    carrier = {s: tuple(f"{t}/{n}" for t, p in zip(tags, parts) for n in p.carrier[s]) for s in cat.objects}
    action = {
        a.name: {f"{t}/{n}": f"{t}/{p.action[a.name][n]}" for t, p in zip(tags, parts) for n in p.carrier[a.dom]}
        for a in cat.arrows
    }
    return Presheaf(cat, carrier, action)


# ---------------------------------------------------------------- homs


@dataclass(frozen=True)
class Hom:
    source: Presheaf
    target: Presheaf
    map: Mapping[str, Mapping[str, str]]

    __hash__ = None  # type: ignore[assignment]

    def __call__(self, x: Elem) -> Elem:
        return (x[0], self.map[x[0]][x[1]])

    def image(self) -> "SubPresheaf":
        return SubPresheaf(
            self.target, {s: frozenset(self.map[s].values()) for s in self.target.cat.objects}
        )

    def then(self, other: "Hom") -> "Hom":
        """``other`` after ``self``."""
        return Hom(
            self.source,
            other.target,
            {s: {x: other.map[s][y] for x, y in self.map[s].items()} for s in self.source.cat.objects},
        )

    def inverse(self) -> "Hom":
        """Inverse onto the image (for a mono)."""
        inv = {s: {y: x for x, y in self.map[s].items()} for s in self.source.cat.objects}
        image = self.image()
        return Hom(image.to_presheaf(), self.source, inv)

    def to_raw(self) -> dict[str, dict[str, str]]:
        return {s: dict(self.map[s]) for s in self.source.cat.objects}


def validate_hom(raw: Mapping[str, Mapping[str, str]], source: Presheaf, target: Presheaf) -> Hom:
    if source.cat is not target.cat and source.cat != target.cat:
        raise BadTyping("source and target live over different categories")
    for s in raw:
        if s not in source.cat.objects:
            raise BadTyping(f"map given for unknown sort {s!r}", location=f"map.{s}")
    m: dict[str, dict[str, str]] = {}
    for s in source.cat.objects:
        given = {str(k): str(v) for k, v in (raw.get(s) or {}).items()}
        tnames = set(target.carrier[s])
        for x in given:
            if x not in source.carrier[s]:
                raise BadTyping(f"{x!r} is not an element of the source at sort {s}", location=f"map.{s}.{x}")
        for x in source.carrier[s]:
            if x not in given:
                raise BadTyping(f"map undefined on {s}:{x}", location=f"map.{s}.{x}")
            if given[x] not in tnames:
                raise BadTyping(f"{s}:{x} maps to {given[x]!r}, not in the target", location=f"map.{s}.{x}")
        m[s] = {x: given[x] for x in source.carrier[s]}
    for a in source.cat.non_identity_arrows():
        for x in source.carrier[a.dom]:
            lhs = m[a.cod][source.action[a.name][x]]
            rhs = target.action[a.name][m[a.dom][x]]
            if lhs != rhs:
                raise NaturalityViolation(
                    f"h({a.name} . {x}) = {lhs} but {a.name} . h({x}) = {rhs}",
                    location=f"map.{a.dom}.{x}",
                    arrow=a.name,
                    element=x,
                )
    return Hom(source, target, m)


def is_mono(h: Hom) -> bool:
    return all(len(set(v.values())) == len(v) for v in h.map.values())


def identity_hom(p: Presheaf) -> Hom:
    return Hom(p, p, {s: {x: x for x in p.carrier[s]} for s in p.cat.objects})


def homs(source: Presheaf, target: Presheaf) -> Iterator[Hom]:
    """Every natural transformation ``source -> target`` (brute force; tiny inputs only)."""
    cat = source.cat
    sorts = cat.objects
    per_sort = [
        [dict(zip(source.carrier[s], img)) for img in itertools.product(target.carrier[s], repeat=len(source.carrier[s]))]
        for s in sorts
    ]
    arrows = cat.non_identity_arrows()
    for choice in itertools.product(*per_sort):
        m = dict(zip(sorts, choice))
        if all(
            m[a.cod][source.action[a.name][x]] == target.action[a.name][m[a.dom][x]]
            for a in arrows
            for x in source.carrier[a.dom]
        ):
            yield Hom(source, target, m)


def relabel(p: Presheaf, rename: Mapping[Elem, str]) -> tuple[Presheaf, Hom]:
    """Rename elements (missing keys keep their name); returns the new presheaf and the iso."""
    new = {s: {n: rename.get((s, n), n) for n in p.carrier[s]} for s in p.cat.objects}
    for s, m in new.items():
        if len(set(m.values())) != len(m):
            raise DuplicateName(f"relabelling collides in sort {s}")
    carrier = {s: tuple(new[s][n] for n in p.carrier[s]) for s in p.cat.objects}
    action = {
        a.name: {new[a.dom][n]: new[a.cod][p.action[a.name][n]] for n in p.carrier[a.dom]}
        for a in p.cat.arrows
    }
    q = Presheaf(p.cat, carrier, action)
    return q, Hom(p, q, new)


# ---------------------------------------------------------------- subpresheaves


@dataclass(frozen=True)
class SubPresheaf:
    ambient: Presheaf
    subset: Mapping[str, frozenset[str]]

    __hash__ = None  # type: ignore[assignment]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SubPresheaf):
            return NotImplemented
        return self.ambient == other.ambient and all(
            self.subset.get(s, frozenset()) == other.subset.get(s, frozenset())
            for s in self.ambient.cat.objects
        )

    def __contains__(self, x: object) -> bool:
        return isinstance(x, tuple) and len(x) == 2 and x[1] in self.subset.get(x[0], ())

    def __len__(self) -> int:
        return sum(len(v) for v in self.subset.values())

    def __le__(self, other: "SubPresheaf") -> bool:
        return all(self.subset[s] <= other.subset[s] for s in self.ambient.cat.objects)

    def elements(self) -> list[Elem]:
        return [x for x in self.ambient.elements() if x in self]

    def is_closed(self) -> bool:
        amb = self.ambient
        return all(
            (a.cod, amb.action[a.name][x]) in self
            for a in amb.cat.arrows
            for x in self.subset[a.dom]
        )

    def complement(self) -> list[Elem]:
        return [x for x in self.ambient.elements() if x not in self]

    def to_presheaf(self) -> Presheaf:
        amb = self.ambient
        carrier = {s: tuple(n for n in amb.carrier[s] if n in self.subset[s]) for s in amb.cat.objects}
        action = {
            a.name: {n: amb.action[a.name][n] for n in carrier[a.dom]} for a in amb.cat.arrows
        }
        return Presheaf(amb.cat, carrier, action)

    def inclusion(self) -> Hom:
        sub = self.to_presheaf()
        return Hom(sub, self.ambient, {s: {n: n for n in sub.carrier[s]} for s in sub.cat.objects})

    def __repr__(self) -> str:
        return f"SubPresheaf({[fmt(x) for x in self.elements()]})"


def subpresheaf(ambient: Presheaf, elems: Iterable[Elem]) -> SubPresheaf:
    """Wrap an explicit element set; raises if it is not action-closed."""
    sub = _subset(ambient, elems)
    if not sub.is_closed():
        raise ElementNotInAmbient("element set is not closed under the action")
    return sub


def _subset(ambient: Presheaf, elems: Iterable[Elem]) -> SubPresheaf:
    subset: dict[str, set[str]] = {s: set() for s in ambient.cat.objects}
    for x in elems:
        if x not in ambient:
            raise ElementNotInAmbient(f"{fmt(x) if isinstance(x, tuple) else x} is not in the ambient presheaf")
        subset[x[0]].add(x[1])
    return SubPresheaf(ambient, {s: frozenset(v) for s, v in subset.items()})


def generate(L: Presheaf, A: Iterable[Elem] | SubPresheaf) -> SubPresheaf:
    """Smallest subpresheaf of ``L`` containing ``A``: all ``f . a``."""
    seeds = A.elements() if isinstance(A, SubPresheaf) else list(A)
    for x in seeds:
        if x not in L:
            raise ElementNotInAmbient(f"{x!r} is not an element of the ambient presheaf")
    return _subset(L, (L.act(f, x) for x in seeds for f in L.cat.arrows_from(x[0])))


def intersect(A: SubPresheaf, B: SubPresheaf) -> SubPresheaf:
    if A.ambient is not B.ambient and A.ambient != B.ambient:
        raise DifferentAmbient("subpresheaves of different presheaves")
    return SubPresheaf(A.ambient, {s: A.subset[s] & B.subset[s] for s in A.ambient.cat.objects})


def union(A: SubPresheaf, B: SubPresheaf) -> SubPresheaf:
    if A.ambient is not B.ambient and A.ambient != B.ambient:
        raise DifferentAmbient("subpresheaves of different presheaves")
    return SubPresheaf(A.ambient, {s: A.subset[s] | B.subset[s] for s in A.ambient.cat.objects})


def image_of(h: Hom, S: SubPresheaf) -> SubPresheaf:
    return _subset(h.target, (h(x) for x in S.elements()))
