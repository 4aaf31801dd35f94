"""Exhaustive enumeration and seeded random generation of small presheaves."""

from __future__ import annotations

import itertools
import random
from typing import Iterator

from .connectivity import DisjointSet
from .fincat import FinCat
from .presheaf import Elem, Presheaf, SubPresheaf, coproduct, generate, representable


def _size_vectors(n_sorts: int, max_size: int) -> Iterator[tuple[int, ...]]:
    for total in range(max_size + 1):
        for cut in itertools.combinations(range(total + n_sorts - 1), n_sorts - 1):
            bounds = (-1,) + cut + (total + n_sorts - 1,)
            yield tuple(bounds[k + 1] - bounds[k] - 1 for k in range(n_sorts))


def _element_names(cat: FinCat, sizes: tuple[int, ...]) -> dict[str, tuple[str, ...]]:
    out, k = {}, 0
    for s, n in zip(cat.objects, sizes):
        out[s] = tuple(f"e{k + i}" for i in range(n))
        k += n
    return out


def _actions_for(cat: FinCat, carrier: dict[str, tuple[str, ...]]) -> Iterator[dict[str, dict[str, str]]]:
    """Backtrack over (arrow, element) cells, checking composition as soon as it is decidable."""
    arrows = cat.non_identity_arrows()
    cells = [(a.name, x) for a in arrows for x in carrier[a.dom]]
    action: dict[str, dict[str, str]] = {a.name: {} for a in cat.arrows}
    for a in cat.arrows:
        if cat.is_identity(a.name):
            action[a.name] = {x: x for x in carrier[a.dom]}
    laws = [(g, f, h) for (g, f), h in cat.comp.items() if not (cat.is_identity(g) or cat.is_identity(f))]

    def ok() -> bool:
        for g, f, h in laws:
            af, ag, ah = action[f], action[g], action[h]
            for x, y in af.items():
                if y in ag and x in ah and ag[y] != ah[x]:
                    return False
        return True

    def rec(k: int) -> Iterator[dict[str, dict[str, str]]]:
        if k == len(cells):
            yield {a: dict(t) for a, t in action.items()}
            return
        f, x = cells[k]
        for y in carrier[cat.cod(f)]:
            action[f][x] = y
            if ok():
                yield from rec(k + 1)
            del action[f][x]

    yield from rec(0)


def _canonical_key(p: Presheaf) -> tuple:
    cat = p.cat
    best = None
    sorts = cat.objects
    arrows = [a for a in cat.non_identity_arrows()]
    for perms in itertools.product(*(itertools.permutations(range(len(p.carrier[s]))) for s in sorts)):
        pos = {s: {n: perm[i] for i, n in enumerate(p.carrier[s])} for s, perm in zip(sorts, perms)}
        key = tuple(
            tuple(
                pos[a.cod][p.action[a.name][n]]
                for n in sorted(p.carrier[a.dom], key=pos[a.dom].__getitem__)
            )
            for a in arrows
        )
        if best is None or key < best:
            best = key
    return (tuple(len(p.carrier[s]) for s in sorts), best)


def enumerate_presheaves(cat: FinCat, max_size: int, up_to_iso: bool = True) -> Iterator[Presheaf]:
    """Every presheaf with at most ``max_size`` elements (one per iso class by default)."""
    seen: set = set()
    for sizes in _size_vectors(len(cat.objects), max_size):
        carrier = _element_names(cat, sizes)
        for action in _actions_for(cat, carrier):
            p = Presheaf(cat, carrier, action)
            if up_to_iso:
                key = _canonical_key(p)
                if key in seen:
                    continue
                seen.add(key)
            yield p


def subpresheaves(L: Presheaf) -> Iterator[SubPresheaf]:
    """All action-closed subsets of ``L``."""
    elems = L.elements()
    seen: set = set()
    for mask in range(1 << len(elems)):
        chosen = [x for k, x in enumerate(elems) if mask >> k & 1]
        sub = SubPresheaf(L, {s: frozenset(n for t, n in chosen if t == s) for s in L.cat.objects})
        if sub.is_closed():
            key = tuple(sorted(chosen))
            if key not in seen:
                seen.add(key)
                yield sub


def quotient(p: Presheaf, merges: list[tuple[Elem, Elem]]) -> Presheaf:
    """Quotient by the congruence generated by ``merges``; elements renamed ``e0, e1, ...``."""
    ds = DisjointSet()
    for x in p.elements():
        ds.find(x)
    work = list(merges)
    while work:
        x, y = work.pop()
        rx, ry = ds.find(x), ds.find(y)
        if rx == ry:
            continue
        ds.union(rx, ry)
        for f in p.cat.arrows_from(x[0]):
            work.append((p.act(f, x), p.act(f, y)))
    reps: dict[Elem, str] = {}
    carrier: dict[str, list[str]] = {s: [] for s in p.cat.objects}
    for x in p.elements():
        r = ds.find(x)
        if r not in reps:
            reps[r] = f"e{len(reps)}"
            carrier[x[0]].append(reps[r])
    name = {x: reps[ds.find(x)] for x in p.elements()}
    action = {
        a.name: {name[(a.dom, n)]: name[p.act(a.name, (a.dom, n))] for n in p.carrier[a.dom]}
        for a in p.cat.arrows
    }
    return Presheaf(p.cat, {s: tuple(v) for s, v in carrier.items()}, action)


def random_presheaf(cat: FinCat, rng: random.Random, max_size: int, max_generators: int = 4) -> Presheaf:
    """A random quotient of a random coproduct of representables, with at most ``max_size`` elements."""
    reps = {x: representable(cat, x) for x in cat.objects}
    if max_size < len(cat.objects):
        raise ValueError("max_size must be at least the number of objects")
    while True:
        gens = [rng.choice(cat.objects) for _ in range(rng.randint(1, max_generators))]
        free = coproduct(*(reps[x] for x in gens))
        if len(free) <= 2 * max_size + 2:
            break
    merges: list[tuple[Elem, Elem]] = []
    current = quotient(free, merges)
    extra = rng.randint(0, 2)
    while len(current) > max_size or extra > 0:
        sorts = [s for s in cat.objects if len(free.carrier[s]) >= 2]
        if not sorts:
            break
        s = rng.choice(sorts)
        x, y = rng.sample(free.sort_elements(s), 2)
        merges.append((x, y))
        nxt = quotient(free, merges)
        if len(current) <= max_size:
            extra -= 1
        current = nxt
    return current


def random_subpresheaf(L: Presheaf, rng: random.Random, density: float | None = None) -> SubPresheaf:
    p = rng.random() if density is None else density
    return generate(L, [x for x in L.elements() if rng.random() < p * 0.6])
