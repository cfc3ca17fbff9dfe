import pytest

from boundgrow.engine import GrowthConfig
from boundgrow.seeds import SeedSet, make_seed


@pytest.fixture
def triangle():
    return make_seed(3, [[0, 1], [0, 2], [1, 2]], name="triangle")


@pytest.fixture
def path4():
    return make_seed(4, [[0, 1], [1, 2], [2, 3]], name="path4")


@pytest.fixture
def k2():
    return make_seed(2, [[0, 1]], name="k2")


@pytest.fixture
def dot():
    return make_seed(1, [], name="dot")


@pytest.fixture
def reference_config(triangle, path4):
    """Triangle initial, path-of-4 seed, r=2: the counts are 3/3/3 -> 15/36/12."""

    def factory(**overrides):
        kwargs = dict(
            initial=triangle,
            seed_set=SeedSet((path4,)),
            r=2,
            mode="deterministic",
            steps=1,
            rng_seed=7,
        )
        kwargs.update(overrides)
        return GrowthConfig(**kwargs)

    return factory
