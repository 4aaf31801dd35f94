"""Acceptance suites: desk-scale checks of the characterisation and its lemmas.

Every suite takes a seed and returns a :class:`CriterionResult`; the CLI
``suite`` command and ``tests/test_acceptance.py`` both run them.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator

from .connectivity import adjacency, components_outside, distances_from
from .fincat import FinCat, is_llp
from .fixtures import c2, chain3, delta1_op, nxtrunc, span, vee
from .limits import Square, is_pullback_square, pushout_monos
from .presheaf import (
    Hom,
    Elem,
    Presheaf,
    SubPresheaf,
    generate,
    intersect,
    representable,
)
from .purity import (
    Anchor,
    EqSystem,
    Link,
    amalgamate_solution,
    is_pure,
    is_pure_by_pp_types,
    is_pure_effective,
    is_split,
    satisfies,
    solve_system,
)
from .sampling import enumerate_presheaves, random_presheaf, random_subpresheaf, subpresheaves
from .witness import build_chain, check_H_properties, check_order_pattern


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    checked: int
    seconds: float
    limit: float | None = None
    failures: list[str] = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        limit = f" (limit {self.limit:g}s)" if self.limit else ""
        msg = f"{status} [{self.number}] {self.title}: {self.checked} checks in {self.seconds:.2f}s{limit}"
        if self.failures:
            msg += " -- " + "; ".join(self.failures[:3])
        return msg

    def to_json(self) -> dict[str, Any]:
        return {
            "criterion": self.number,
            "title": self.title,
            "passed": self.passed,
            "checked": self.checked,
            "seconds": round(self.seconds, 3),
            "limit": self.limit,
            "failures": self.failures[:20],
        }


def _timed(number: int, title: str, limit: float | None, body: Callable[[list[str]], int]) -> CriterionResult:
    failures: list[str] = []
    start = time.perf_counter()
    checked = body(failures)
    elapsed = time.perf_counter() - start
    ok = not failures and (limit is None or elapsed < limit)
    if limit is not None and elapsed >= limit:
        failures.append(f"took {elapsed:.1f}s, limit {limit}s")
    return CriterionResult(number, title, ok, checked, elapsed, limit, failures)


# ---------------------------------------------------------------- helpers


def inclusion_between(small: SubPresheaf, big: SubPresheaf) -> Hom:
    """Inclusion of two subpresheaves of the same ambient, as a hom of presheaves."""
    s, b = small.to_presheaf(), big.to_presheaf()
    return Hom(s, b, {x: {n: n for n in s.carrier[x]} for x in s.cat.objects})


def square_from_subs(A: SubPresheaf, B: SubPresheaf, K: SubPresheaf) -> Square:
    """The square ``K <= A, B <= L`` of subpresheaves of one ambient ``L``."""
    aL, bL = A.inclusion(), B.inclusion()
    kA, kB = inclusion_between(K, A), inclusion_between(K, B)
    return Square(kA.source, aL.source, bL.source, A.ambient, kA, kB, aL, bL)


def random_pure_sub(L: Presheaf, rng: random.Random, tries: int = 12) -> SubPresheaf:
    for _ in range(tries):
        S = random_subpresheaf(L, rng)
        if is_pure(S.inclusion()).verdict:
            return S
    return L.whole()


def _pure_subs(L: Presheaf) -> list[SubPresheaf]:
    return [S for S in subpresheaves(L) if is_pure(S.inclusion()).verdict]


def meeting_pairs(sq: Square) -> list[tuple[str, Elem, str, Elem]]:
    """``(f, a, g, b)`` with ``a`` in ``A \\ K``, ``b`` in ``B \\ K`` and ``f.a = g.b`` in ``K``."""
    L, cat = sq.L, sq.L.cat
    k_in_l = sq.diagonal.image()
    a_only = [x for x in sq.aL.image().elements() if x not in k_in_l]
    b_only = [x for x in sq.bL.image().elements() if x not in k_in_l]
    return [
        (f, a, g, b)
        for a in a_only
        for b in b_only
        for f in cat.arrows_from(a[0])
        for g in cat.arrows_from(b[0])
        if L.act(f, a) == L.act(g, b) and L.act(f, a) in k_in_l
    ]


def random_pure_pullback(
    cat: FinCat, rng: random.Random, max_size: int = 8, tries: int | None = None, want_meet: bool = False
) -> Square:
    """Random pullback square of pure monos inside a random ``L``.

    Pairs with ``A`` and ``B`` incomparable are preferred (and, with
    ``want_meet``, pairs having a :func:`meeting_pairs` entry); a weaker
    candidate is used only when ``tries`` ambients in a row have none.
    """
    fallback: tuple[int, Square] | None = None
    for _ in range(tries or (60 if want_meet else 20)):
        L = random_presheaf(cat, rng, max_size)
        pure = _pure_subs(L)
        pairs = [(A, B) for A in pure for B in pure if not (A <= B or B <= A)]
        rng.shuffle(pairs)
        for A, B in pairs:
            sq = square_from_subs(A, B, intersect(A, B))
            if not (is_pure(sq.kA).verdict and is_pure(sq.kB).verdict):
                continue
            if not want_meet or meeting_pairs(sq):
                return sq
            if fallback is None or fallback[0] < 1:
                fallback = (1, sq)
        if fallback is None:
            A = rng.choice(pure)
            fallback = (0, square_from_subs(A, A, A))
    assert fallback is not None
    return fallback[1]


def _spans_of_monos(rng: random.Random, cats: list[FinCat], max_size: int) -> Iterator[tuple[SubPresheaf, SubPresheaf, SubPresheaf]]:
    while True:
        cat = rng.choice(cats)
        L = random_presheaf(cat, rng, max_size)
        A = random_subpresheaf(L, rng, density=rng.uniform(0.5, 1.5))
        B = random_subpresheaf(L, rng, density=rng.uniform(0.5, 1.5))
        AB = intersect(A, B)
        K = generate(L, [x for x in AB.elements() if rng.random() < 0.7])
        if len(K) < len(A) and len(K) < len(B):
            yield A, B, K


MIXED = [span, c2, chain3, vee, nxtrunc, delta1_op]


# ---------------------------------------------------------------- criteria


def llp_fixtures(seed: int = 0) -> CriterionResult:
    expected = [
        ("SPAN", span, False, ("Z", "f", "g")),
        ("C2", c2, True, None),
        ("CHAIN3", chain3, True, None),
        ("VEE", vee, False, ("a", "a<b", "a<c")),
        ("NXTRUNC", nxtrunc, False, ("*", "2", "3")),
        ("DELTA1OP", delta1_op, False, None),
    ]

    def body(failures: list[str]) -> int:
        for name, build, want, witness in expected:
            got, w = is_llp(build())
            if got != want:
                failures.append(f"{name}: llp={got}, expected {want}")
            elif witness is not None and tuple(w) != witness:
                failures.append(f"{name}: witness {tuple(w)}, expected {witness}")
        return len(expected)

    return _timed(1, "LLP on fixture categories", 1.0, body)


def purity_oracle(seed: int = 0, max_size: int = 5) -> CriterionResult:
    def body(failures: list[str]) -> int:
        n = 0
        for build in (span, c2):
            cat = build()
            for L in enumerate_presheaves(cat, max_size, up_to_iso=False):
                for K in subpresheaves(L):
                    n += 1
                    incl = K.inclusion()
                    if is_pure(incl).verdict != is_pure_by_pp_types(incl):
                        failures.append(f"disagreement on {K!r} in {L!r}")
        return n

    return _timed(2, "retraction criterion agrees with pp-type oracle", 300.0, body)


def span_pure_split(seed: int = 0, max_size: int = 6) -> CriterionResult:
    def body(failures: list[str]) -> int:
        n = 0
        cat = span()
        for L in enumerate_presheaves(cat, max_size, up_to_iso=False):
            for K in subpresheaves(L):
                n += 1
                incl = K.inclusion()
                pure = is_pure(incl).verdict
                split, _ = is_split(incl)
                oracle = is_pure_by_pp_types(incl, all_orderings=False)
                if not (pure == split == oracle):
                    failures.append(f"{K!r} in {L!r}: pure={pure} split={split} oracle={oracle}")
        return n

    return _timed(3, "span category: pure iff split", None, body)


def theorem_desk_scale(seed: int = 0, count: int = 500) -> CriterionResult:
    def body(failures: list[str]) -> int:
        rng = random.Random(seed)
        cats = [chain3(), c2()]
        for k in range(count):
            sq = random_pure_pullback(cats[k % 2], rng)
            res = is_pure_effective(sq)
            if not res.verdict:
                failures.append(f"square {k} not pure effective ({res.failed})")
        return count

    return _timed(4, "pullback squares of pure monos are pure effective (LLP)", 300.0, body)


def path_lemma(seed: int = 0, count: int = 500) -> CriterionResult:
    def body(failures: list[str]) -> int:
        rng = random.Random(seed)
        cats = [chain3(), c2()]
        for k in range(count):
            L = random_presheaf(cats[k % 2], rng, 8)
            K = random_subpresheaf(L, rng)
            adj = adjacency(L, K)
            comps = components_outside(L, K)
            for a in adj:
                dist = distances_from(adj, a)
                if set(dist) != set(comps.component_of(a)):
                    failures.append(f"instance {k}: BFS and union-find disagree")
                for b, d in dist.items():
                    if d > 2:
                        failures.append(f"instance {k}: distance {d} between {a} and {b}")
                    elif d == 2:
                        both = set(generate(L, [a]).elements()) & set(generate(L, [b]).elements())
                        for c in adj[a] & adj[b]:
                            if c not in both:
                                failures.append(f"instance {k}: midpoint {c} not in <a> & <b>")
        return count

    return _timed(5, "paths outside K have length at most 2 (LLP)", None, body)


def construction(seed: int = 0, depth: int = 4) -> CriterionResult:
    def body(failures: list[str]) -> int:
        K = representable(span(), "Z")
        trace = build_chain(K, ("X", "f"), ("Y", "g"), ("Z", "id_Z"), "f", "g", depth)
        from .presheaf import is_mono

        for st in trace.stages[1:]:
            if not (is_mono(st.link) and is_mono(st.embedding)):
                failures.append(f"stage {st.index}: non-mono map")
        sizes = trace.sizes
        for prev, st in zip(trace.stages, trace.stages[1:]):
            if len(st.presheaf) != len(prev.presheaf) + len(K) - st.glued:
                failures.append(f"stage {st.index}: size formula fails")
        if sizes[:6] != [3, 5, 7, 9, 10, 12]:
            failures.append(f"depth-3 prefix {sizes[:6]}")
        order = check_order_pattern(trace)
        want = [[m <= n for m in range(depth)] for n in range(depth)]
        if order.matrix != want or not order.ok:
            failures.append(f"order matrix {order.matrix}, violations {order.violations}")
        h = check_H_properties(trace)
        if not h.ok or h.H:
            failures.append(f"H clauses failed: {h.failures}, H={h.H}")
        return len(trace.stages)

    return _timed(6, "order-property chain on the span seed", 10.0, body)


def pure_mono_facts(seed: int = 0, count: int = 300) -> CriterionResult:
    def body(failures: list[str]) -> int:
        rng = random.Random(seed)
        cats = [b() for b in MIXED]
        # split implies pure (checked against the brute-force oracle too)
        done = 0
        while done < count:
            L = random_presheaf(rng.choice(cats), rng, 6)
            K = random_subpresheaf(L, rng)
            if not 0 < len(K) < len(L) or not is_split(K.inclusion())[0]:
                continue
            done += 1
            if not (is_pure(K.inclusion()).verdict and is_pure_by_pp_types(K.inclusion(), all_orderings=False)):
                failures.append("split but not pure")
        # left cancellation: K <= M <= L strictly, with K pure in L
        done = 0
        while done < count:
            L = random_presheaf(rng.choice(cats), rng, 7)
            K = random_subpresheaf(L, rng)
            if not is_pure(K.inclusion()).verdict:
                continue
            M = generate(L, K.elements() + [x for x in L.elements() if rng.random() < 0.3])
            if not len(K) < len(M) < len(L):
                continue
            done += 1
            if not is_pure(inclusion_between(K, M)).verdict:
                failures.append("g.f pure but f not pure")
        # stability under pushout along a mono
        done = 0
        for A, M, K in _spans_of_monos(rng, cats, 6):
            if done >= count:
                break
            kA = inclusion_between(K, A)
            if not is_pure(kA).verdict:
                continue
            done += 1
            po = pushout_monos(kA, inclusion_between(K, M))
            if not is_pure(po.inB).verdict:
                failures.append("pushout of a pure mono is not pure")
        return 3 * count

    return _timed(7, "split => pure; left cancellation; pushout stability", None, body)


def pushout_is_pullback(seed: int = 0, count: int = 300) -> CriterionResult:
    def body(failures: list[str]) -> int:
        rng = random.Random(seed)
        cats = [b() for b in MIXED]
        spans = _spans_of_monos(rng, cats, 8)
        for k in range(count):
            A, B, K = next(spans)
            po = pushout_monos(inclusion_between(K, A), inclusion_between(K, B))
            if not is_pullback_square(po.square()):
                failures.append(f"span {k}: pushout square is not a pullback")
        return count

    return _timed(8, "pushout squares of monos are pullbacks", None, body)


def back_name(P_to_L: Hom, x: Elem) -> str:
    return next(p[1] for p in P_to_L.source.elements() if P_to_L(p) == x)


def random_system(
    square: Square, P_to_L: Hom, rng: random.Random, max_vars: int = 4
) -> tuple[EqSystem, dict[str, str]]:
    """Random system with parameters in ``P`` that holds under a random assignment in ``L``.

    Links meeting inside ``K`` and anchors at parameters outside ``K`` are
    favoured, so that both sides and cross equations occur often.
    """
    L = square.L
    cat = L.cat
    k_in_l = square.diagonal.image()
    outside = [x for x in L.elements() if x not in k_in_l]
    meets = meeting_pairs(square)
    nvars = rng.randint(1, max_vars)
    values = [rng.choice(outside) if outside and rng.random() < 0.8 else rng.choice(L.elements()) for _ in range(nvars)]
    planted: list[Link | Anchor] = []
    if meets and rng.random() < 0.5:
        f, a, g, b = rng.choice(meets)
        values[:2] = [a, b]
        ida, idb = cat.identity[a[0]], cat.identity[b[0]]
        planted = [Anchor(ida, 0, back_name(P_to_L, a)), Anchor(idb, 1, back_name(P_to_L, b)), Link(f, 0, g, 1)]
        nvars = len(values)
    vars_ = tuple((f"x{i}", x[0]) for i, x in enumerate(values))
    sol = {f"x{i}": x[1] for i, x in enumerate(values)}
    back = {P_to_L(p): p for p in P_to_L.source.elements()}

    weighted: list[tuple[int, Link | Anchor]] = []
    for i, xi in enumerate(values):
        for f in cat.arrows_from(xi[0]):
            fx = L.act(f, xi)
            if fx in back:
                weighted.append((1 if fx in k_in_l else 3, Anchor(f, i, back[fx][1])))
            for j, xj in enumerate(values):
                if j <= i:
                    continue
                for g in cat.arrows_from(xj[0]):
                    if L.act(g, xj) == fx:
                        weighted.append((4 if fx in k_in_l else 1, Link(f, i, g, j)))
    weighted = [(w, eq) for w, eq in weighted if eq not in planted]
    eqs: list[Link | Anchor] = list(planted)
    for _ in range(min(len(weighted), rng.randint(1, 6))):
        k = rng.choices(range(len(weighted)), weights=[w for w, _ in weighted])[0]
        eqs.append(weighted.pop(k)[1])
    return EqSystem(vars_, tuple(eqs)), sol


def amalgamation(seed: int = 0, count: int = 200) -> CriterionResult:
    def body(failures: list[str]) -> int:
        rng = random.Random(seed)
        cats = [chain3(), c2()]
        for k in range(count):
            # groupoids have no meeting pairs: pure subobjects are unions of orbits
            sq = random_pure_pullback(cats[k % 2], rng, want_meet=k % 2 == 0)
            res = is_pure_effective(sq)
            system, sol = random_system(sq, res.induced, rng)
            got = amalgamate_solution(sq, system, sol)
            P = res.pushout.P
            if not satisfies(P, system, got):
                failures.append(f"instance {k}: amalgamated assignment fails in P")
            if solve_system(P, system) is None:
                failures.append(f"instance {k}: direct CSP on P finds no solution")
        return count

    return _timed(9, "amalgamation turns L-solutions into P-solutions", None, body)


CRITERIA: dict[int, Callable[..., CriterionResult]] = {
    1: llp_fixtures,
    2: purity_oracle,
    3: span_pure_split,
    4: theorem_desk_scale,
    5: path_lemma,
    6: construction,
    7: pure_mono_facts,
    8: pushout_is_pullback,
    9: amalgamation,
}


def run_suite(seed: int = 0, only: list[int] | None = None) -> list[CriterionResult]:
    return [CRITERIA[k](seed=seed) for k in sorted(only or CRITERIA)]
