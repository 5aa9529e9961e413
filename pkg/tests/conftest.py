"""Shared fixtures: the cached small universe and the example zoo."""

import pytest

from charfol import zoo
from charfol.tightness import decide_tightness, universe_cached

ZOO_NAMES = sorted(zoo.ZOO)


@pytest.fixture(scope="session")
def universe3():
    """Isomorphism classes with at most three saddles, keyed by signature."""
    return universe_cached(3)


@pytest.fixture(scope="session")
def universe_list(universe3):
    return [g for _, graphs in sorted(universe3.items()) for g in graphs]


@pytest.fixture(scope="session")
def tight_instances(universe_list):
    return [g for g in universe_list if decide_tightness(g).tight]


@pytest.fixture(params=ZOO_NAMES)
def zoo_graph(request):
    return zoo.example(request.param)
