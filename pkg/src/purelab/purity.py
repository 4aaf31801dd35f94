"""Positive-primitive systems, purity, splitness and pure-effective squares.

For a finite inclusion ``K <= L`` purity is decided by searching for a
retraction ``L -> K``. The canonical system of ``L \\ K`` (one variable per
element outside ``K``, every atomic fact over parameters in ``K``) is the
strongest finite pp-condition on that tuple, and its solutions in ``K`` are
exactly the retractions; :func:`is_pure_by_pp_types` checks the same thing
by brute force without the solver.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Mapping, NamedTuple, Sequence, Union

from .connectivity import DisjointSet, components_outside
from .errors import (
    BadParameters,
    ConnectivityPreconditionFailed,
    DuplicateName,
    NotMono,
    NotPureInputs,
    NotSolvableInL,
    SortMismatch,
)
from .fincat import FinCat
from .limits import PushoutResult, Square, induced_map, is_pullback_square, pushout_monos
from .presheaf import Elem, Hom, Presheaf, SubPresheaf, fmt, is_mono, validate_hom


class Link(NamedTuple):
    """``f . x_i = g . x_j``"""

    f: str
    i: int
    g: str
    j: int


class Anchor(NamedTuple):
    """``f . x_i = p`` for a parameter element ``p`` (a name in sort ``cod(f)``)."""

    f: str
    i: int
    p: str


Equation = Union[Link, Anchor]
Assignment = dict[str, str]


@dataclass(frozen=True)
class EqSystem:
    vars: tuple[tuple[str, str], ...]
    eqs: tuple[Equation, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "vars", tuple(tuple(v) for v in self.vars))
        object.__setattr__(self, "eqs", tuple(self.eqs))

    def sort(self, i: int) -> str:
        return self.vars[i][1]

    def variables(self, eq: Equation) -> set[int]:
        return {eq.i, eq.j} if isinstance(eq, Link) else {eq.i}

    def check(self, cat: FinCat) -> None:
        names = [v[0] for v in self.vars]
        if len(set(names)) != len(names):
            raise DuplicateName("variable names must be distinct")
        for s in (v[1] for v in self.vars):
            if s not in cat.objects:
                raise SortMismatch(f"unknown sort {s!r}")
        for k, eq in enumerate(self.eqs):
            loc = f"eqs[{k}]"
            for idx in self.variables(eq):
                if not 0 <= idx < len(self.vars):
                    raise SortMismatch(f"variable index {idx} out of range", location=loc)
            if not cat.has_arrow(eq.f) or cat.dom(eq.f) != self.sort(eq.i):
                raise SortMismatch(f"{eq.f} cannot act on x_{eq.i} of sort {self.sort(eq.i)}", location=loc)
            if isinstance(eq, Link):
                if not cat.has_arrow(eq.g) or cat.dom(eq.g) != self.sort(eq.j):
                    raise SortMismatch(f"{eq.g} cannot act on x_{eq.j} of sort {self.sort(eq.j)}", location=loc)
                if cat.cod(eq.f) != cat.cod(eq.g):
                    raise SortMismatch(f"{eq.f} and {eq.g} land in different sorts", location=loc)

    def param_sort(self, cat: FinCat, eq: Anchor) -> str:
        return cat.cod(eq.f)


def satisfies(M: Presheaf, system: EqSystem, assignment: Mapping[str, str]) -> bool:
    """Evaluate every equation under ``assignment`` (variable name -> element name)."""
    val = [(s, assignment[n]) for n, s in system.vars]
    for eq in system.eqs:
        lhs = M.act(eq.f, val[eq.i])
        if isinstance(eq, Link):
            if lhs != M.act(eq.g, val[eq.j]):
                return False
        elif lhs[1] != eq.p:
            return False
    return True


def solve_system(
    M: Presheaf, system: EqSystem, restrict: SubPresheaf | None = None
) -> Assignment | None:
    """Find values in ``M`` (or in ``restrict``) for the variables, or ``None``.

    Anchors prune domains first, then arc consistency runs over the links and
    a most-constrained-first backtracking search finishes the job.
    """
    cat = M.cat
    system.check(cat)
    for eq in system.eqs:
        if isinstance(eq, Anchor):
            p = (cat.cod(eq.f), eq.p)
            if p not in M:
                raise BadParameters(f"parameter {fmt(p)} is not an element of the structure")
            if restrict is not None and p not in restrict:
                raise BadParameters(f"parameter {fmt(p)} lies outside the restriction")

    def initial(sort: str) -> list[str]:
        names = M.carrier[sort]
        if restrict is None:
            return list(names)
        return [n for n in names if n in restrict.subset[sort]]

    n = len(system.vars)
    domains = [initial(s) for _, s in system.vars]
    act = M.action
    binary: list[list[tuple[str, int, str]]] = [[] for _ in range(n)]
    for eq in system.eqs:
        if isinstance(eq, Anchor):
            domains[eq.i] = [x for x in domains[eq.i] if act[eq.f][x] == eq.p]
        elif eq.i == eq.j:
            domains[eq.i] = [x for x in domains[eq.i] if act[eq.f][x] == act[eq.g][x]]
        else:
            binary[eq.i].append((eq.f, eq.j, eq.g))
            binary[eq.j].append((eq.g, eq.i, eq.f))

    def revise(doms: list[list[str]], i: int) -> bool:
        changed = False
        for f, j, g in binary[i]:
            reach = {act[g][y] for y in doms[j]}
            kept = [x for x in doms[i] if act[f][x] in reach]
            if len(kept) != len(doms[i]):
                doms[i] = kept
                changed = True
        return changed

    def propagate(doms: list[list[str]], queue: set[int]) -> bool:
        while queue:
            i = queue.pop()
            if revise(doms, i):
                if not doms[i]:
                    return False
                queue.update(j for _, j, _ in binary[i])
                queue.add(i)
        return all(doms)

    if not propagate(domains, set(range(n))) and n:
        return None

    def search(doms: list[list[str]], assigned: dict[int, str]) -> dict[int, str] | None:
        if len(assigned) == n:
            return assigned
        i = min(
            (k for k in range(n) if k not in assigned),
            key=lambda k: (len(doms[k]), -len(binary[k]), k),
        )
        for x in doms[i]:
            trial = list(doms)
            trial[i] = [x]
            if propagate(trial, {j for _, j, _ in binary[i]}):
                found = search(trial, {**assigned, i: x})
                if found is not None:
                    return found
        return None

    found = search(domains, {})
    if found is None:
        return None
    return {system.vars[i][0]: found[i] for i in range(n)}


# ---------------------------------------------------------------- canonical systems


def canonical_system(L: Presheaf, K: SubPresheaf) -> tuple[EqSystem, Assignment, list[Elem]]:
    """One variable per element of ``L \\ K`` with all its one-step facts.

    Returns the system, the witnessing assignment in ``L`` (each variable set
    to its own element) and the list of elements in variable order. Variables
    of smaller sorts come first.
    """
    size = {s: len(L.carrier[s]) for s in L.cat.objects}
    outside = sorted(K.complement(), key=lambda x: size[x[0]])
    index = {x: i for i, x in enumerate(outside)}
    eqs: list[Equation] = []
    for x, i in index.items():
        for f in L.cat.arrows_from(x[0]):
            if L.cat.is_identity(f):
                continue
            y = L.act(f, x)
            if y in K:
                eqs.append(Anchor(f, i, y[1]))
            else:
                eqs.append(Link(f, i, L.cat.identity[y[0]], index[y]))
    vars_ = tuple((fmt(x), x[0]) for x in outside)
    return EqSystem(vars_, tuple(eqs)), {fmt(x): x[1] for x in outside}, outside


@dataclass(frozen=True)
class PurityCertificate:
    verdict: bool
    retraction: Hom | None = None
    falsifier: EqSystem | None = None
    solution: Assignment | None = None
    inclusion: Hom | None = field(default=None, repr=False)

    def verify(self) -> bool:
        """Re-check the certificate independently of the search that produced it."""
        h = self.inclusion
        if h is None:
            return False
        if self.verdict:
            r = self.retraction
            if r is None:
                return False
            validate_hom(r.to_raw(), h.target, h.source)
            return all(r(h(x)) == x for x in h.source.elements())
        if self.falsifier is None or self.solution is None:
            return False
        L = h.target
        if not satisfies(L, self.falsifier, self.solution):
            return False
        # parameters of the falsifier name elements of L that lie in the image
        image = h.image()
        return solve_system(L, self.falsifier, restrict=image) is None

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"verdict": "pure" if self.verdict else "not-pure"}
        if self.retraction is not None:
            out["retraction"] = self.retraction.to_raw()
        if self.falsifier is not None:
            from .io import system_to_json

            out["falsifier"] = system_to_json(self.falsifier)
            out["witness"] = dict(self.solution or {})
        return out


def _retraction(incl: Hom) -> tuple[Hom | None, SubPresheaf]:
    if not is_mono(incl):
        raise NotMono("purity is only defined for monomorphisms")
    L = incl.target
    image = incl.image()
    system, _, outside = canonical_system(L, image)
    sol = solve_system(L, system, restrict=image)
    if sol is None:
        return None, image
    back = {s: {y: x for x, y in incl.map[s].items()} for s in L.cat.objects}
    r: dict[str, dict[str, str]] = {s: {} for s in L.cat.objects}
    for s in L.cat.objects:
        for y in L.carrier[s]:
            target = back[s].get(y)
            if target is None:
                target = back[s][sol[fmt((s, y))]]
            r[s][y] = target
    return Hom(L, incl.source, r), image


def is_split(incl: Hom) -> tuple[bool, Hom | None]:
    r, _ = _retraction(incl)
    return r is not None, r


def is_pure(incl: Hom) -> PurityCertificate:
    r, image = _retraction(incl)
    if r is not None:
        return PurityCertificate(True, retraction=r, inclusion=incl)
    L = incl.target
    for s in L.cat.objects:
        if L.carrier[s] and not image.subset[s]:
            system = EqSystem(((s.lower() if s.isalpha() else "y", s),), ())
            return PurityCertificate(
                False, falsifier=system, solution={system.vars[0][0]: L.carrier[s][0]}, inclusion=incl
            )
    system, sol, _ = canonical_system(L, image)
    return PurityCertificate(False, falsifier=system, solution=sol, inclusion=incl)


def is_pure_by_pp_types(incl: Hom, all_orderings: bool = True) -> bool:
    """Brute-force pp-type test, independent of :func:`solve_system`.

    For every duplicate-free tuple enumerating ``L \\ K`` (every ordering when
    ``all_orderings``), collect every equation ``f.c_i = g.c_j`` and
    ``f.c_i = d`` (``d`` in ``K``) true in ``L``, and ask whether some tuple of
    ``K`` satisfies them all; additionally every sort inhabited in ``L`` must
    be inhabited in ``K``.
    """
    L = incl.target
    cat = L.cat
    K = set(incl.image().elements())
    if any(L.carrier[s] and not any(x[0] == s for x in K) for s in cat.objects):
        return False
    outside = [x for x in L.elements() if x not in K]
    orderings = itertools.permutations(outside) if all_orderings else [tuple(outside)]
    for c in orderings:
        links = []
        anchors = []
        for i, ci in enumerate(c):
            for f in cat.arrows_from(ci[0]):
                fc = L.act(f, ci)
                if fc in K:
                    anchors.append((f, i, fc))
                for j, cj in enumerate(c):
                    for g in cat.arrows_from(cj[0]):
                        if cat.cod(g) == cat.cod(f) and L.act(g, cj) == fc:
                            links.append((f, i, g, j))
        pools = [[x for x in K if x[0] == ci[0]] for ci in c]
        if not any(
            all(L.act(f, d[i]) == p for f, i, p in anchors)
            and all(L.act(f, d[i]) == L.act(g, d[j]) for f, i, g, j in links)
            for d in itertools.product(*pools)
        ):
            return False
    return True


# ---------------------------------------------------------------- squares


@dataclass(frozen=True)
class EffectivenessResult:
    verdict: bool
    failed: str | None
    pushout: PushoutResult
    induced: Hom
    certificate: PurityCertificate | None = None

    def diagnostic(self) -> dict[str, Any]:
        out: dict[str, Any] = {"pure_effective": self.verdict}
        if self.failed:
            out["failed"] = self.failed
        if self.certificate is not None and not self.certificate.verdict:
            out["certificate"] = self.certificate.to_json()
        return out


def check_pure_inputs(square: Square) -> None:
    for name in ("kA", "kB", "aL", "bL"):
        h = getattr(square, name)
        if not is_mono(h):
            raise NotPureInputs(f"{name} is not a monomorphism", location=name)
        if not is_pure(h).verdict:
            raise NotPureInputs(f"{name} is not a pure monomorphism", location=name)


def is_pure_effective(square: Square, strict: bool = True) -> EffectivenessResult:
    """Is the induced map from the pushout of ``A <- K -> B`` into ``L`` a pure mono?

    With ``strict`` the four sides are first checked to be pure monos. The
    pushout itself needs only ``kA`` and ``kB`` to be monos, so ``strict=False``
    allows diagnosing squares whose sides are not pure.
    """
    if strict:
        check_pure_inputs(square)
    po = pushout_monos(square.kA, square.kB)
    u = induced_map(po, square)
    if not is_mono(u):
        return EffectivenessResult(False, "mono", po, u)
    cert = is_pure(u)
    if not cert.verdict:
        return EffectivenessResult(False, "pure", po, u, cert)
    return EffectivenessResult(True, None, po, u, cert)


# ---------------------------------------------------------------- amalgamation


@dataclass(frozen=True)
class AmalgamationPlan:
    side_a: frozenset[int]
    side_b: frozenset[int]
    dropped: tuple[int, ...]
    cross: tuple[tuple[int, Elem], ...]
    delta_a: EqSystem
    delta_b: EqSystem


def _u_inverse(u: Hom) -> dict[Elem, Elem]:
    return {u(x): x for x in u.source.elements()}


def plan_amalgamation(
    square: Square, system: EqSystem, sol: Mapping[str, str]
) -> tuple[AmalgamationPlan, PushoutResult, Hom]:
    """Split the variables of ``system`` between ``A`` and ``B``.

    ``system`` has parameters in the pushout ``P`` of ``A <- K -> B`` and
    ``sol`` solves it in ``L`` (parameters read through ``P -> L``).
    """
    if not is_pullback_square(square):
        raise ConnectivityPreconditionFailed("square is not a pullback square of monos")
    po = pushout_monos(square.kA, square.kB)
    u = induced_map(po, square)
    P, L, cat = po.P, square.L, square.L.cat
    system.check(cat)

    val = {i: (s, sol[n]) for i, (n, s) in enumerate(system.vars)}
    for i, x in val.items():
        if x not in L:
            raise NotSolvableInL(f"value {fmt(x)} of {system.vars[i][0]} is not in L")
    for eq in system.eqs:
        if isinstance(eq, Anchor) and (cat.cod(eq.f), eq.p) not in P:
            raise BadParameters(f"parameter {eq.p} is not an element of the pushout")
    lifted = EqSystem(
        system.vars,
        tuple(
            Anchor(eq.f, eq.i, u((cat.cod(eq.f), eq.p))[1]) if isinstance(eq, Anchor) else eq
            for eq in system.eqs
        ),
    )
    if not satisfies(L, lifted, sol):
        raise NotSolvableInL("the given assignment does not solve the system in L")

    k_in_l = square.diagonal.image()
    a_in_l = set(square.aL.image().elements())
    b_in_l = set(square.bL.image().elements())
    report = components_outside(L, k_in_l)
    reach_a = report.closure(x for x in a_in_l if x not in k_in_l)
    reach_b = report.closure(x for x in b_in_l if x not in k_in_l)
    if reach_a & reach_b:
        raise ConnectivityPreconditionFailed(
            "some element of A\\K is connected outside K to some element of B\\K"
        )

    k_in_p = set(square.kA.then(po.inA).image().elements())
    a_in_p = set(po.inA.image().elements())

    def side(p: Elem) -> str:
        if p in k_in_p:
            return "K"
        return "A" if p in a_in_p else "B"

    dropped = tuple(
        k
        for k, eq in enumerate(system.eqs)
        if isinstance(eq, Link) and eq.i != eq.j and L.act(eq.f, val[eq.i]) in k_in_l
    )
    # vertices: variables and the parameters outside K
    ds = DisjointSet()
    for i in range(len(system.vars)):
        ds.find(("x", i))
    for k, eq in enumerate(system.eqs):
        if k in dropped:
            continue
        if isinstance(eq, Link):
            ds.union(("x", eq.i), ("x", eq.j))
        else:
            p = (cat.cod(eq.f), eq.p)
            if side(p) != "K":
                ds.union(("x", eq.i), ("p", p))
    a_roots = {
        ds.find(("p", (cat.cod(eq.f), eq.p)))
        for eq in system.eqs
        if isinstance(eq, Anchor) and side((cat.cod(eq.f), eq.p)) == "A"
    }
    side_a = frozenset(i for i in range(len(system.vars)) if ds.find(("x", i)) in a_roots)
    side_b = frozenset(range(len(system.vars))) - side_a

    u_inv = _u_inverse(u)
    eqs_a: list[Equation] = []
    eqs_b: list[Equation] = []
    cross: list[tuple[int, Elem]] = []
    for k, eq in enumerate(system.eqs):
        vs = system.variables(eq)
        if vs <= side_a:
            eqs_a.append(eq)
        elif vs <= side_b:
            if isinstance(eq, Anchor) and side((cat.cod(eq.f), eq.p)) == "A":
                raise ConnectivityPreconditionFailed("an A-parameter ended up on the B side")
            eqs_b.append(eq)
        else:
            assert isinstance(eq, Link)
            d = L.act(eq.f, val[eq.i])
            if d not in k_in_l:
                raise ConnectivityPreconditionFailed(f"cross value {fmt(d)} is not in K")
            d_p = u_inv[d]
            cross.append((k, d_p))
            if eq.i in side_a:
                eqs_a.append(Anchor(eq.f, eq.i, d_p[1]))
                eqs_b.append(Anchor(eq.g, eq.j, d_p[1]))
            else:
                eqs_a.append(Anchor(eq.g, eq.j, d_p[1]))
                eqs_b.append(Anchor(eq.f, eq.i, d_p[1]))
    plan = AmalgamationPlan(
        side_a,
        side_b,
        dropped,
        tuple(cross),
        EqSystem(system.vars, tuple(eqs_a)),
        EqSystem(system.vars, tuple(eqs_b)),
    )
    return plan, po, u


def _restrict_vars(system: EqSystem, keep: frozenset[int]) -> EqSystem:
    order = sorted(keep)
    new = {old: k for k, old in enumerate(order)}
    eqs: list[Equation] = []
    for eq in system.eqs:
        if isinstance(eq, Link):
            eqs.append(Link(eq.f, new[eq.i], eq.g, new[eq.j]))
        else:
            eqs.append(Anchor(eq.f, new[eq.i], eq.p))
    return EqSystem(tuple(system.vars[i] for i in order), tuple(eqs))


def amalgamate_solution(square: Square, system: EqSystem, sol: Mapping[str, str]) -> Assignment:
    """Turn a solution in ``L`` into a solution in the pushout ``P``.

    The variables are split into an ``A`` side and a ``B`` side by
    connectivity to parameters in ``A \\ K``; cross equations are replaced by
    anchors at their common value, which lies in ``K``. Each side is solved
    inside its own subobject and the two halves are combined.
    """
    plan, po, _ = plan_amalgamation(square, system, sol)
    out: Assignment = {}
    for keep, delta, inj, label in (
        (plan.side_a, plan.delta_a, po.inA, "A"),
        (plan.side_b, plan.delta_b, po.inB, "B"),
    ):
        sub = _restrict_vars(delta, keep)
        found = solve_system(po.P, sub, restrict=inj.image())
        if found is None:
            raise NotPureInputs(f"the {label}-side system has no solution in {label}; {label} -> L is not pure")
        out.update(found)
    return {name: out[name] for name, _ in system.vars}
