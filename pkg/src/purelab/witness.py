"""Finite truncations of the order-property chain and pattern search.

Starting from a presheaf ``K`` with ``a = f.c`` and ``b = g.c`` such that
neither of ``a``, ``b`` generates the other, the chain glues fresh copies of
``K`` along ``<b>``, ``<a, b>`` or ``<a>``. Stages are indexed by pairs
``(n, m)`` with ``m <= n < depth`` in lexicographic order. Each stage contains
the previous one verbatim; the copy of ``K`` added at ``(n, m)`` has its
fresh elements renamed ``"<name>@n,m"``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Iterator

from .errors import BadSpan, GluingNotMono, SeedConditionViolated
from .limits import pushout_monos
from .presheaf import (
    Elem,
    Hom,
    Presheaf,
    SubPresheaf,
    fmt,
    generate,
    intersect,
    is_mono,
    relabel,
)

Index = tuple[int, int]


@dataclass(frozen=True)
class Stage:
    index: Index
    presheaf: Presheaf
    link: Hom | None
    embedding: Hom
    glued: int

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True)
class ChainTrace:
    K: Presheaf
    a: Elem
    b: Elem
    c: Elem
    f: str
    g: str
    depth: int
    stages: tuple[Stage, ...]
    a_seq: tuple[Elem, ...]
    b_seq: tuple[Elem, ...]
    c_at: dict[Index, Elem] = field(default_factory=dict)

    __hash__ = None  # type: ignore[assignment]

    @property
    def final(self) -> Presheaf:
        return self.stages[-1].presheaf

    @property
    def sizes(self) -> list[int]:
        return [len(s.presheaf) for s in self.stages]


def index_set(depth: int) -> list[Index]:
    return [(n, m) for n in range(depth) for m in range(n + 1)]


def check_seed(K: Presheaf, a: Elem, b: Elem, c: Elem, f: str, g: str) -> None:
    """The four seed bullets, each by a scan over all arrows."""
    for x in (a, b, c):
        if x not in K:
            raise SeedConditionViolated(f"{fmt(x)} is not an element of K", condition="membership")
    cat = K.cat
    if c[0] != cat.dom(f) or K.act(f, c) != a:
        raise SeedConditionViolated(f"a is not {f} . c", condition="a = f.c")
    if c[0] != cat.dom(g) or K.act(g, c) != b:
        raise SeedConditionViolated(f"b is not {g} . c", condition="b = g.c")
    for h in cat.arrows_from(a[0]):
        if K.act(h, a) == b:
            raise SeedConditionViolated(f"{h} . a = b", condition="no h with h.a = b", arrow=h)
    for h in cat.arrows_from(b[0]):
        if K.act(h, b) == a:
            raise SeedConditionViolated(f"{h} . b = a", condition="no h with a = h.b", arrow=h)


def _gluing(K: Presheaf, prev: Presheaf, pairs: list[tuple[Elem, Elem]]) -> tuple[SubPresheaf, Hom]:
    """The map ``<gens> -> prev`` sending ``h.x`` to ``h.y`` for each ``(x, y)``."""
    G = generate(K, [x for x, _ in pairs])
    m: dict[str, dict[str, str]] = {s: {} for s in K.cat.objects}
    for x, y in pairs:
        for h in K.cat.arrows_from(x[0]):
            src, tgt = K.act(h, x), prev.act(h, y)
            old = m[src[0]].setdefault(src[1], tgt[1])
            if old != tgt[1]:
                raise GluingNotMono(f"gluing map is not well defined at {fmt(src)}")
    sub = G.to_presheaf()
    u = Hom(sub, prev, m)
    if not is_mono(u):
        raise GluingNotMono("gluing map is not injective")
    return G, u


def build_chain(K: Presheaf, a: Elem, b: Elem, c: Elem, f: str, g: str, depth: int) -> ChainTrace:
    if depth < 1:
        raise ValueError("depth must be at least 1")
    check_seed(K, a, b, c, f, g)
    ident = Hom(K, K, {s: {x: x for x in K.carrier[s]} for s in K.cat.objects})
    stages = [Stage((0, 0), K, None, ident, 0)]
    a_seq, b_seq = [a], [b]
    c_at = {(0, 0): c}
    for n, m in index_set(depth)[1:]:
        prev = stages[-1].presheaf
        if m == 0:
            pairs = [(b, b_seq[0])]
        elif m < n:
            pairs = [(a, a_seq[n]), (b, b_seq[m])]
        else:
            pairs = [(a, a_seq[n])]
        G, u = _gluing(K, prev, pairs)
        po = pushout_monos(u, G.inclusion())
        # keep the old stage's names, tag the fresh copy of K
        rename = {}
        for s in K.cat.objects:
            for p in po.P.carrier[s]:
                tag, _, rest = p.partition("/")
                if tag == "A":
                    rename[(s, p)] = rest
                elif tag == "K":
                    rename[(s, p)] = u.map[s][rest]
                else:
                    rename[(s, p)] = f"{rest}@{n},{m}"
        P, iso = relabel(po.P, rename)
        link = po.inA.then(iso)
        emb = po.inB.then(iso)
        if not (is_mono(link) and is_mono(emb)):
            raise GluingNotMono(f"stage {(n, m)} produced a non-injective map")
        stages.append(Stage((n, m), P, link, emb, len(G)))
        c_at[(n, m)] = emb(c)
        if m == 0:
            a_seq.append(emb(a))
        if m == n:
            b_seq.append(emb(b))
    return ChainTrace(K, a, b, c, f, g, depth, tuple(stages), tuple(a_seq), tuple(b_seq), c_at)


# ---------------------------------------------------------------- lemma checks


@dataclass
class OrderReport:
    depth: int
    matrix: list[list[bool]]
    witnesses: dict[Index, Elem]
    violations: list[dict[str, Any]]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict[str, Any]:
        return {
            "ok": self.ok,
            "matrix": self.matrix,
            "witnesses": {f"{n},{m}": fmt(x) for (n, m), x in self.witnesses.items()},
            "violations": self.violations,
        }


def _joint_generators(P: Presheaf, x: Elem, y: Elem) -> Iterator[Elem]:
    for d in P.elements():
        gen = P.generated_by(d)
        if x in gen and y in gen:
            yield d


def check_order_pattern(trace: ChainTrace) -> OrderReport:
    """``matrix[n][m]`` records whether ``a_n`` and ``b_m`` have a common generator.

    For ``m <= n`` the recorded ``c_{n,m}`` must satisfy ``f.c = a_n`` and
    ``g.c = b_m``; for ``n < m`` no element of the final stage may generate
    both ``a_n`` and ``b_m``.
    """
    P = trace.final
    N = trace.depth
    matrix = [[False] * N for _ in range(N)]
    witnesses: dict[Index, Elem] = {}
    violations: list[dict[str, Any]] = []
    for n, m in itertools.product(range(N), repeat=2):
        an, bm = trace.a_seq[n], trace.b_seq[m]
        if m <= n:
            c = trace.c_at[(n, m)]
            good = c in P and P.act(trace.f, c) == an and P.act(trace.g, c) == bm
            matrix[n][m] = good
            if good:
                witnesses[(n, m)] = c
            else:
                violations.append({"pair": [n, m], "problem": "missing witness"})
        else:
            spurious = next(_joint_generators(P, an, bm), None)
            matrix[n][m] = spurious is not None
            if spurious is not None:
                violations.append({"pair": [n, m], "problem": "spurious generator", "element": fmt(spurious)})
    return OrderReport(N, matrix, witnesses, violations)


@dataclass
class HReport:
    H: list[Elem]
    clause_i: bool
    clause_ii: bool
    clause_iii: bool
    failures: list[str]

    @property
    def ok(self) -> bool:
        return self.clause_i and self.clause_ii and self.clause_iii

    def to_json(self) -> dict[str, Any]:
        return {
            "ok": self.ok,
            "H": [fmt(x) for x in self.H],
            "clauses": {"i": self.clause_i, "ii": self.clause_ii, "iii": self.clause_iii},
            "failures": self.failures,
        }


def check_H_properties(trace: ChainTrace) -> HReport:
    P = trace.final
    N = trace.depth

    def gen(x: Elem) -> SubPresheaf:
        return generate(P, [x])

    H = intersect(gen(trace.a_seq[0]), gen(trace.b_seq[0]))
    failures: list[str] = []
    c1 = True
    for n, m in itertools.product(range(N), repeat=2):
        if intersect(gen(trace.a_seq[n]), gen(trace.b_seq[m])) != H:
            c1 = False
            failures.append(f"(i) <a_{n}> & <b_{m}> != H")
    c2 = True
    for n, n2 in itertools.permutations(range(N), 2):
        if intersect(gen(trace.a_seq[n]), gen(trace.a_seq[n2])) != H:
            c2 = False
            failures.append(f"(ii) <a_{n}> & <a_{n2}> != H")
        if intersect(gen(trace.b_seq[n]), gen(trace.b_seq[n2])) != H:
            c2 = False
            failures.append(f"(ii) <b_{n}> & <b_{n2}> != H")
    c3 = True
    for n, m in itertools.product(range(N), repeat=2):
        if m > n:
            continue
        for label, x in (
            (f"a_{n}", trace.a_seq[n]),
            (f"b_{m}", trace.b_seq[m]),
            (f"c_{n},{m}", trace.c_at[(n, m)]),
        ):
            if x in H:
                c3 = False
                failures.append(f"(iii) {label} lies in H")
    return HReport(H.elements(), c1, c2, c3, sorted(set(failures), key=failures.index))


# ---------------------------------------------------------------- pattern search


@dataclass(frozen=True)
class PatternWitness:
    f: str
    g: str
    rows: tuple[Elem, ...]
    cols: tuple[Elem, ...]
    witnesses: dict[tuple[int, int], Elem]

    def to_json(self) -> dict[str, Any]:
        return {
            "f": self.f,
            "g": self.g,
            "rows": [fmt(x) for x in self.rows],
            "cols": [fmt(x) for x in self.cols],
            "witnesses": {f"{i},{j}": fmt(c) for (i, j), c in self.witnesses.items()},
        }


def parse_shape(text: str) -> tuple[str, tuple[int, ...]]:
    """``"bipartite:2,3"`` or ``"order:4"``."""
    kind, _, nums = text.partition(":")
    vals = tuple(int(v) for v in nums.split(",") if v.strip())
    if kind == "bipartite" and len(vals) == 2 and min(vals) >= 1:
        return kind, vals
    if kind == "order" and len(vals) == 1 and vals[0] >= 1:
        return kind, vals
    raise ValueError(f"bad shape {text!r}; expected bipartite:R,C or order:N")


def find_pattern(P: Presheaf, f: str, g: str, shape: tuple[str, tuple[int, ...]]) -> PatternWitness | None:
    """Search for distinct rows ``a_i`` and columns ``b_j`` realising ``shape``.

    ``("bipartite", (r, c))`` asks for a witness ``c`` with ``f.c = a_i`` and
    ``g.c = b_j`` for every pair; ``("order", (n,))`` asks for one exactly when
    ``i <= j``.
    """
    cat = P.cat
    if cat.dom(f) != cat.dom(g):
        raise BadSpan(f"{f} and {g} have different domains")
    kind, dims = shape
    edge: dict[tuple[Elem, Elem], Elem] = {}
    for c in P.sort_elements(cat.dom(f)):
        edge.setdefault((P.act(f, c), P.act(g, c)), c)
    rows_pool = P.sort_elements(cat.cod(f))
    cols_pool = P.sort_elements(cat.cod(g))

    if kind == "bipartite":
        nr, nc = dims

        def wanted(i: int, j: int) -> bool:
            return True
    else:
        nr = nc = dims[0]

        def wanted(i: int, j: int) -> bool:
            return i <= j

    # assign row 0, col 0, row 1, col 1, ... then leftovers
    slots = []
    for k in range(max(nr, nc)):
        if k < nr:
            slots.append(("r", k))
        if k < nc:
            slots.append(("c", k))
    rows: dict[int, Elem] = {}
    cols: dict[int, Elem] = {}

    def consistent(kind_: str, k: int, x: Elem) -> bool:
        if kind_ == "r":
            if x in rows.values():
                return False
            return all(((x, y) in edge) == wanted(k, j) for j, y in cols.items())
        if x in cols.values():
            return False
        return all(((y, x) in edge) == wanted(i, k) for i, y in rows.items())

    def search(pos: int) -> bool:
        if pos == len(slots):
            return True
        kind_, k = slots[pos]
        pool = rows_pool if kind_ == "r" else cols_pool
        target = rows if kind_ == "r" else cols
        for x in pool:
            if consistent(kind_, k, x):
                target[k] = x
                if search(pos + 1):
                    return True
                del target[k]
        return False

    if not search(0):
        return None
    r = tuple(rows[i] for i in range(nr))
    cl = tuple(cols[j] for j in range(nc))
    wit = {(i, j): edge[(r[i], cl[j])] for i in range(nr) for j in range(nc) if wanted(i, j)}
    return PatternWitness(f, g, r, cl, wit)


def trace_manifest(trace: ChainTrace) -> dict[str, Any]:
    return {
        "depth": trace.depth,
        "seed": {"a": fmt(trace.a), "b": fmt(trace.b), "c": fmt(trace.c), "f": trace.f, "g": trace.g},
        "stages": [
            {
                "index": list(st.index),
                "file": f"stage_{st.index[0]}_{st.index[1]}.psh.json",
                "size": len(st.presheaf),
                "glued": st.glued,
                "link": st.link.to_raw() if st.link is not None else None,
                "embedding": st.embedding.to_raw(),
            }
            for st in trace.stages
        ],
        "a": [fmt(x) for x in trace.a_seq],
        "b": [fmt(x) for x in trace.b_seq],
        "c": {f"{n},{m}": fmt(x) for (n, m), x in trace.c_at.items()},
    }
