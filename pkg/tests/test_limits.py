import random

import pytest
from hypothesis import given, settings, strategies as st

from purelab.errors import IncompatibleSquare, NotMono, SourceMismatch, TargetMismatch
from purelab.fixtures import c2, chain3
from purelab.limits import (
    Square,
    induced_map,
    is_pullback_square,
    pullback_monos,
    pushout_monos,
)
from purelab.presheaf import (
    Hom,
    Presheaf,
    coproduct,
    generate,
    identity_hom,
    intersect,
    is_mono,
    representable,
)
from purelab.sampling import quotient, random_presheaf, random_subpresheaf
from purelab.suite import inclusion_between, square_from_subs

from oracles import all_homs
from strategies import CATS


def point(cat, name="p"):
    return Presheaf(cat, {"*": (name,)}, {"id_*": {name: name}, "s": {name: name}})


def empty(cat):
    return Presheaf(cat, {s: () for s in cat.objects}, {a.name: {} for a in cat.arrows})


def empty_hom(src, tgt):
    return Hom(src, tgt, {s: {} for s in src.cat.objects})


def test_pushout_over_generated_g(R):
    G = generate(R, [("Y", "g")])
    incl = G.inclusion()
    po = pushout_monos(incl, incl)
    assert len(po.P) == 3 + 3 - 1
    assert po.P.carrier["Y"] == ("K/g",)
    assert set(po.P.carrier["Z"]) == {"A/id_Z", "B/id_Z"}
    assert is_mono(po.inA) and is_mono(po.inB)


def test_pushout_along_identity_is_other_leg(R):
    F = generate(R, [("X", "f")])
    K = F.to_presheaf()
    po = pushout_monos(identity_hom(K), F.inclusion())
    assert len(po.P) == len(R)
    assert all(len(po.P.carrier[s]) == len(R.carrier[s]) for s in R.cat.objects)
    assert is_mono(po.inB) and len(po.inB.image()) == len(po.P)


def test_pushout_of_two_points_over_empty():
    cat = c2()
    e, p = empty(cat), point(cat)
    po = pushout_monos(empty_hom(e, p), empty_hom(e, p))
    assert po.P.carrier["*"] == ("A/p", "B/p")
    assert po.P.act("s", ("*", "A/p")) == ("*", "A/p")


def test_pushout_errors(R):
    reg = representable(c2(), "*")
    collapse = Hom(reg, point(c2()), {"*": {"id_*": "p", "s": "p"}})
    with pytest.raises(NotMono):
        pushout_monos(collapse, collapse)
    F, G = generate(R, [("X", "f")]), generate(R, [("Y", "g")])
    with pytest.raises(SourceMismatch):
        pushout_monos(F.inclusion(), G.inclusion())


def test_pullback_examples(R):
    F, G = generate(R, [("X", "f")]), generate(R, [("Y", "g")])
    assert len(pullback_monos(F.inclusion(), G.inclusion()).K) == 0
    ident = identity_hom(R)
    assert pullback_monos(ident, ident).K == R
    sq = pullback_monos(ident, F.inclusion())
    assert sq.K.elements() == [("X", "f")]
    assert is_pullback_square(sq)


def test_pullback_errors(R):
    F = generate(R, [("X", "f")])
    L2 = coproduct(R, R)
    other = generate(L2, [("X", "0/f")])
    with pytest.raises(TargetMismatch):
        pullback_monos(F.inclusion(), other.inclusion())
    reg = representable(c2(), "*")
    collapse = Hom(reg, point(c2()), {"*": {"id_*": "p", "s": "p"}})
    with pytest.raises(NotMono):
        pullback_monos(collapse, collapse)


def test_induced_map_of_pushout_square_is_iso(R):
    G = generate(R, [("Y", "g")])
    po = pushout_monos(G.inclusion(), G.inclusion())
    u = induced_map(po, po.square())
    assert is_mono(u) and len(u.image()) == len(po.P)


def test_induced_map_not_mono_over_span(R):
    # K empty, A = B = L = REP_Z: u is L + L -> L
    e = empty(R.cat)
    ident = identity_hom(R)
    sq = Square(e, R, R, R, empty_hom(e, R), empty_hom(e, R), ident, ident)
    u = induced_map(pushout_monos(sq.kA, sq.kB), sq)
    assert len(u.source) == 6 and not is_mono(u)
    assert not is_pullback_square(sq)


def test_induced_map_for_cover(R):
    sq = pullback_monos(identity_hom(R), generate(R, [("X", "f")]).inclusion())
    u = induced_map(pushout_monos(sq.kA, sq.kB), sq)
    assert is_mono(u) and len(u.image()) == len(R) == len(u.source)


def test_incompatible_square(R):
    F = generate(R, [("X", "f")])
    K = F.to_presheaf()
    with pytest.raises(IncompatibleSquare):
        Square(K, R, R, R, F.inclusion(), F.inclusion(), identity_hom(R), F.inclusion())
    po = pushout_monos(F.inclusion(), F.inclusion())
    other = pullback_monos(identity_hom(R), identity_hom(R))
    with pytest.raises(IncompatibleSquare):
        induced_map(po, other)


@st.composite
def spans_of_monos(draw, max_size=6):
    cat = CATS[draw(st.sampled_from(sorted(CATS)))]
    rng = random.Random(draw(st.integers(0, 2**32)))
    L = random_presheaf(cat, rng, max(max_size, len(cat.objects)))
    A = random_subpresheaf(L, rng, density=rng.uniform(0.4, 1.6))
    B = random_subpresheaf(L, rng, density=rng.uniform(0.4, 1.6))
    K = generate(L, [x for x in intersect(A, B).elements() if rng.random() < 0.7])
    return L, A, B, K


@settings(max_examples=150, deadline=None)
@given(spans_of_monos())
def test_pushout_matches_quotient_of_coproduct(data):
    L, A, B, K = data
    kA, kB = inclusion_between(K, A), inclusion_between(K, B)
    po = pushout_monos(kA, kB)
    Ap, Bp = A.to_presheaf(), B.to_presheaf()
    free = coproduct(Ap, Bp)
    q = quotient(free, [((s, f"0/{n}"), (s, f"1/{n}")) for s, n in K.elements()])
    for s in L.cat.objects:
        assert len(po.P.carrier[s]) == len(q.carrier[s])
    assert is_mono(po.inA) and is_mono(po.inB)
    assert set(po.inA.image().elements()) | set(po.inB.image().elements()) == set(po.P.elements())
    both = intersect(po.inA.image(), po.inB.image())
    assert both == kA.then(po.inA).image()
    assert is_pullback_square(po.square())


@settings(max_examples=100, deadline=None)
@given(spans_of_monos(max_size=6))
def test_induced_map_is_unique(data):
    L, A, B, K = data
    sq = square_from_subs(A, B, K)
    po = pushout_monos(sq.kA, sq.kB)
    u = induced_map(po, sq)
    commuting = [
        h for h in all_homs(po.P, L)
        if all(h(po.inA(x)) == sq.aL(x) for x in sq.A.elements())
        and all(h(po.inB(y)) == sq.bL(y) for y in sq.B.elements())
    ]
    assert len(commuting) == 1
    assert commuting[0].to_raw() == u.to_raw()


@settings(max_examples=150, deadline=None)
@given(spans_of_monos())
def test_pullback_is_intersection(data):
    L, A, B, _ = data
    sq = pullback_monos(A.inclusion(), B.inclusion())
    assert set(sq.K.elements()) == set(A.elements()) & set(B.elements())
    assert is_pullback_square(sq)
    assert is_mono(sq.kA) and is_mono(sq.kB)
