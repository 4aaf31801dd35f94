import itertools

import pytest
from hypothesis import given, settings, strategies as st

from purelab.errors import (
    BadTyping,
    CompositionViolation,
    DifferentAmbient,
    DuplicateName,
    ElementNotInAmbient,
    EmptyActionEntry,
    NaturalityViolation,
    UnknownElement,
    UnknownObject,
)
from purelab.fixtures import c2, chain3, span
from purelab.presheaf import (
    Presheaf,
    coproduct,
    generate,
    homs,
    identity_hom,
    image_of,
    intersect,
    is_mono,
    relabel,
    representable,
    subpresheaf,
    union,
    validate_hom,
    validate_presheaf,
)

from strategies import presheaves, presheaf_with_sub

REP_Z_RAW = {
    "carriers": {"X": ["f"], "Y": ["g"], "Z": ["id_Z"]},
    "actions": {"f": {"id_Z": "f"}, "g": {"id_Z": "g"}},
}


def closure_by_iteration(L, seeds):
    """Fixpoint of one-arrow steps; independent of the one-step formula."""
    out = set(seeds)
    frontier = list(out)
    while frontier:
        x = frontier.pop()
        for a in L.cat.arrows:
            if a.dom == x[0]:
                y = L.act(a.name, x)
                if y not in out:
                    out.add(y)
                    frontier.append(y)
    return out


def test_rep_z_fixture_is_valid(R):
    p = validate_presheaf(span(), REP_Z_RAW)
    assert p == R
    assert len(p) == 3
    assert p.act("f", ("Z", "id_Z")) == ("X", "f")


def test_empty_presheaf():
    p = validate_presheaf(span(), {"carriers": {}, "actions": {}})
    assert len(p) == 0 and p.elements() == []


def test_chain3_composition_violation():
    raw = {
        "carriers": {"0": ["a"], "1": ["b"], "2": ["c", "d"]},
        "actions": {"0<1": {"a": "b"}, "1<2": {"b": "c"}, "0<2": {"a": "d"}},
    }
    with pytest.raises(CompositionViolation) as exc:
        validate_presheaf(chain3(), raw)
    assert exc.value.details["pair"] == ("1<2", "0<1")
    assert exc.value.details["element"] == "a"


@pytest.mark.parametrize(
    "raw, err",
    [
        ({"carriers": {"W": []}, "actions": {}}, BadTyping),
        ({"carriers": {"Z": ["z", "z"]}, "actions": {}}, DuplicateName),
        ({"carriers": {"Z": ["z"], "X": ["x"], "Y": ["y"]}, "actions": {"f": {"z": "x"}}}, EmptyActionEntry),
        ({"carriers": {"Z": ["z"], "X": ["x"], "Y": ["y"]}, "actions": {"f": {"z": "q"}, "g": {"z": "y"}}}, BadTyping),
        ({"carriers": {"Z": ["z"], "X": ["x"], "Y": ["y"]}, "actions": {"h": {}}}, BadTyping),
    ],
)
def test_presheaf_errors(raw, err):
    with pytest.raises(err):
        validate_presheaf(span(), raw)


def test_representables():
    assert len(representable(span(), "Z")) == 3
    reg = representable(c2(), "*")
    assert reg.carrier["*"] == ("id_*", "s")
    assert reg.act("s", ("*", "s")) == ("*", "id_*")
    top = representable(chain3(), "2")
    assert top.carrier == {"0": (), "1": (), "2": ("id_2",)}
    with pytest.raises(UnknownObject):
        representable(span(), "W")


def test_generate_examples(R):
    assert generate(R, [("Z", "id_Z")]) == R.whole()
    assert generate(R, [("X", "f")]).elements() == [("X", "f")]
    assert len(generate(R, [])) == 0
    with pytest.raises(ElementNotInAmbient):
        generate(R, [("X", "nope")])


def test_find(R):
    assert R.find("f") == ("X", "f")
    assert R.find("Z:id_Z") == ("Z", "id_Z")
    with pytest.raises(UnknownElement):
        R.find("h")


def test_hom_examples(R):
    ident = validate_hom({s: {n: n for n in R.carrier[s]} for s in R.cat.objects}, R, R)
    assert is_mono(ident)
    L = coproduct(R, R)
    with pytest.raises(NaturalityViolation) as exc:
        validate_hom({"X": {"0/f": "0/f"}, "Y": {"0/g": "1/g"}, "Z": {"0/id_Z": "0/id_Z"}}, generate(L, [("Z", "0/id_Z")]).to_presheaf(), L)
    assert exc.value.details["arrow"] == "g"


def test_collapse_of_regular_act():
    reg = representable(c2(), "*")
    point = Presheaf(c2(), {"*": ("p",)}, {"id_*": {"p": "p"}, "s": {"p": "p"}})
    h = validate_hom({"*": {"id_*": "p", "s": "p"}}, reg, point)
    assert not is_mono(h)
    assert len(list(homs(reg, point))) == 1


@pytest.mark.parametrize(
    "raw",
    [
        {"W": {}},
        {"X": {"f": "f"}, "Y": {"g": "g"}},
        {"X": {"f": "nope"}, "Y": {"g": "g"}, "Z": {"id_Z": "id_Z"}},
        {"X": {"f": "f", "extra": "f"}, "Y": {"g": "g"}, "Z": {"id_Z": "id_Z"}},
    ],
)
def test_hom_typing_errors(R, raw):
    with pytest.raises(BadTyping):
        validate_hom(raw, R, R)


def test_intersections(R):
    F, G = generate(R, [("X", "f")]), generate(R, [("Y", "g")])
    assert len(intersect(F, G)) == 0
    assert intersect(F, F) == F
    assert intersect(R.whole(), G) == G
    assert union(F, G).elements() == [("X", "f"), ("Y", "g")]
    with pytest.raises(DifferentAmbient):
        intersect(F, generate(coproduct(R, R), []))


def test_subpresheaf_must_be_closed(R):
    with pytest.raises(ElementNotInAmbient):
        subpresheaf(R, [("Z", "id_Z")])
    assert len(subpresheaf(R, [("X", "f")])) == 1


def test_relabel_is_iso(R):
    q, iso = relabel(R, {("Z", "id_Z"): "z"})
    assert q.carrier["Z"] == ("z",)
    assert is_mono(iso) and iso(("Z", "id_Z")) == ("Z", "z")
    with pytest.raises(DuplicateName):
        relabel(coproduct(R, R), {("X", "0/f"): "a", ("X", "1/f"): "a"})


@settings(max_examples=120, deadline=None)
@given(presheaf_with_sub(), st.data())
def test_generate_is_closure_operator(pair, data):
    L, S = pair
    seeds = data.draw(st.lists(st.sampled_from(L.elements()), unique=True)) if len(L) else []
    G = generate(L, seeds)
    assert set(G.elements()) == closure_by_iteration(L, seeds)
    assert set(seeds) <= set(G.elements())
    assert generate(L, G) == G
    assert G.is_closed()
    # monotone
    bigger = generate(L, seeds + S.elements())
    assert G <= bigger


@settings(max_examples=80, deadline=None)
@given(presheaf_with_sub())
def test_image_of_sub_is_closed(pair):
    L, S = pair
    ident = identity_hom(L)
    assert image_of(ident, S) == S
    assert image_of(S.inclusion(), S.to_presheaf().whole()).is_closed()


@settings(max_examples=60, deadline=None)
@given(presheaves(max_size=4), st.data())
def test_yoneda_count(K, data):
    x = data.draw(st.sampled_from(K.cat.objects))
    y = representable(K.cat, x)
    found = list(homs(y, K))
    assert len(found) == len(K.carrier[x])
    # the hom is determined by the image of the identity element
    assert sorted(h((x, K.cat.identity[x]))[1] for h in found) == sorted(K.carrier[x])


def test_homs_finds_only_natural_maps():
    R = representable(span(), "Z")
    L = coproduct(R, R)
    for h in homs(R, L):
        validate_hom(h.to_raw(), R, L)
    assert len(list(homs(R, L))) == 2
