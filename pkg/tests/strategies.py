"""Hypothesis strategies shared by the property tests."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from purelab.fixtures import CATEGORIES
from purelab.sampling import random_presheaf, random_subpresheaf

CATS = {name: build() for name, build in CATEGORIES.items()}
LLP_CATS = {name: CATS[name] for name in ("c2", "chain3")}


@st.composite
def presheaves(draw, cats=None, max_size: int = 7):
    cats = cats or CATS
    cat = cats[draw(st.sampled_from(sorted(cats)))]
    rng = random.Random(draw(st.integers(0, 2**32)))
    return random_presheaf(cat, rng, max(max_size, len(cat.objects)))


@st.composite
def presheaf_with_sub(draw, cats=None, max_size: int = 7):
    L = draw(presheaves(cats, max_size))
    rng = random.Random(draw(st.integers(0, 2**32)))
    return L, random_subpresheaf(L, rng)
