import random

import pytest
from hypothesis import given, settings, strategies as st

from purelab.connectivity import (
    DisjointSet,
    adjacency,
    components_outside,
    connected_outside,
    distances_from,
)
from purelab.errors import BaseNotClosed, ElementInBase
from purelab.presheaf import Presheaf, SubPresheaf, coproduct, generate, intersect, relabel
from purelab.sampling import random_presheaf, random_subpresheaf

from strategies import LLP_CATS, presheaf_with_sub


def fmt_set(comp):
    return {f"{s}:{n}" for s, n in comp}


def test_rep_z_components(R):
    rep = components_outside(R, R.empty())
    assert [fmt_set(c) for c in rep.components] == [{"X:f", "Y:g", "Z:id_Z"}]
    rep = components_outside(R, generate(R, [("X", "f")]))
    assert [fmt_set(c) for c in rep.components] == [{"Y:g", "Z:id_Z"}]
    assert rep.to_json()["edges"] == [["Z:id_Z", "g", "Y:g"]]
    assert components_outside(R, R.whole()).components == ()


def test_base_must_be_closed(R):
    bad = SubPresheaf(R, {"X": frozenset(), "Y": frozenset(), "Z": frozenset({"id_Z"})})
    with pytest.raises(BaseNotClosed):
        components_outside(R, bad)


def test_shortest_paths(R):
    ok, path = connected_outside(R, R.empty(), ("X", "f"), ("Y", "g"))
    assert ok and path == [("X", "f"), ("Z", "id_Z"), ("Y", "g")]
    assert connected_outside(R, R.empty(), ("X", "f"), ("X", "f")) == (True, [("X", "f")])
    L = coproduct(R, R)
    assert connected_outside(L, L.empty(), ("X", "0/f"), ("Y", "1/g")) == (False, None)
    with pytest.raises(ElementInBase):
        connected_outside(R, generate(R, [("X", "f")]), ("X", "f"), ("Y", "g"))


def test_disjoint_set():
    ds = DisjointSet()
    ds.union(1, 2)
    ds.union(3, 4)
    assert ds.find(1) == ds.find(2) and ds.find(1) != ds.find(3)
    ds.union(2, 3)
    assert len({ds.find(x) for x in range(1, 5)}) == 1


def brute_components(L, K):
    """Transitive closure of the symmetric one-step relation, by repeated merging."""
    outside = [x for x in L.elements() if x not in K]
    comps = [{x} for x in outside]
    changed = True
    while changed:
        changed = False
        for i in range(len(comps)):
            for j in range(i + 1, len(comps)):
                linked = any(
                    L.act(a.name, x) in comps[j]
                    for x in comps[i]
                    for a in L.cat.arrows
                    if a.dom == x[0]
                ) or any(
                    L.act(a.name, y) in comps[i]
                    for y in comps[j]
                    for a in L.cat.arrows
                    if a.dom == y[0]
                )
                if linked:
                    comps[i] |= comps.pop(j)
                    changed = True
                    break
            if changed:
                break
    return frozenset(frozenset(c) for c in comps)


@settings(max_examples=150, deadline=None)
@given(presheaf_with_sub())
def test_components_match_brute_force(pair):
    L, K = pair
    rep = components_outside(L, K)
    assert rep.partition() == brute_components(L, K)
    covered = [x for c in rep.components for x in c]
    assert sorted(covered) == sorted(K.complement())


@settings(max_examples=100, deadline=None)
@given(presheaf_with_sub(), st.randoms(use_true_random=False))
def test_partition_independent_of_enumeration_order(pair, rnd):
    L, K = pair
    # same presheaf, carriers listed in a different order
    carrier = {s: tuple(rnd.sample(list(v), len(v))) for s, v in L.carrier.items()}
    shuffled = Presheaf(L.cat, carrier, L.action)
    K2 = SubPresheaf(shuffled, K.subset)
    assert components_outside(L, K).partition() == components_outside(shuffled, K2).partition()
    renamed, iso = relabel(L, {x: f"r{k}" for k, x in enumerate(L.elements())})
    moved = components_outside(renamed, SubPresheaf(renamed, {s: frozenset(iso((s, n))[1] for n in K.subset[s]) for s in L.cat.objects}))
    back = {iso(x): x for x in L.elements()}
    assert frozenset(frozenset(back[x] for x in c) for c in moved.partition()) == components_outside(L, K).partition()


@settings(max_examples=150, deadline=None)
@given(presheaf_with_sub(cats=LLP_CATS, max_size=8))
def test_paths_short_over_llp(pair):
    L, K = pair
    adj = adjacency(L, K)
    for a in adj:
        for b, d in distances_from(adj, a).items():
            assert d <= 2
            if d == 2:
                ok, path = connected_outside(L, K, a, b, adj)
                mid = path[1]
                assert mid in generate(L, [a]) and mid in generate(L, [b])


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(sorted(LLP_CATS)), st.integers(0, 2**32))
def test_pullback_components_disjoint_over_llp(name, seed):
    rng = random.Random(seed)
    L = random_presheaf(LLP_CATS[name], rng, 8)
    A = random_subpresheaf(L, rng, density=rng.uniform(0.4, 1.6))
    B = random_subpresheaf(L, rng, density=rng.uniform(0.4, 1.6))
    K = intersect(A, B)
    rep = components_outside(L, K)
    ca = rep.closure(x for x in A.elements() if x not in K)
    cb = rep.closure(x for x in B.elements() if x not in K)
    assert not ca & cb


def test_span_path_can_be_long():
    # outside LLP, connected pairs may need longer paths: two copies of REP_Z glued along f
    from purelab.fixtures import rep_z
    from purelab.sampling import quotient

    R = rep_z()
    L = quotient(coproduct(R, R), [(("X", "0/f"), ("X", "1/f"))])
    adj = adjacency(L, L.empty())
    a = next(x for x in L.elements() if x[0] == "Y")
    assert max(distances_from(adj, a).values()) == 4
