import numpy as np
import pytest

from ergospectra.errors import InvalidInput
from ergospectra.model import free_model
from ergospectra.scanengine import OrbitCache, scan

from conftest import random_model


def square_job(x):
    return x * x


def flaky_job(x):
    if x == 2:
        raise ValueError("boom")
    return -x


class TestOrbitCache:
    def test_entries_match_fresh_evaluation(self, rng):
        model = random_model(rng, m=2)
        cache = OrbitCache.build(model, [0.3], 500)
        assert cache.verify() < 1e-14

    def test_get(self, rng):
        model = random_model(rng, m=1)
        cache = OrbitCache.build(model, [0.3], 10)
        direct = model.f(model.base.advance([0.3], 4))
        assert np.abs(cache.get(4) - direct).max() < 1e-14

    def test_cached_blocks_feed_identical_products(self, rng):
        # the hit path must not perturb downstream numerics
        model = free_model()
        cache = OrbitCache.build(model, [0.0], 8)
        fresh = model.blocks([0.0], 8)
        assert np.array_equal(cache.blocks, fresh)


class TestScan:
    def test_serial_matches_parallel(self):
        payloads = list(range(20))
        serial = scan(square_job, payloads, workers=1)
        parallel = scan(square_job, payloads, workers=4)
        assert serial.values == parallel.values
        assert serial.ok and parallel.ok

    def test_empty(self):
        result = scan(square_job, [], workers=4)
        assert result.values == {} and result.ok

    def test_failure_collected(self):
        result = scan(flaky_job, [1, 2, 3], workers=1)
        assert not result.ok
        assert set(result.values) == {0, 2}
        assert "boom" in result.failures[1]

    def test_custom_keys_and_order(self):
        result = scan(square_job, [3, 1, 2], keys=["c", "a", "b"], workers=2)
        assert result.ordered(["a", "b", "c"]) == [1, 4, 9]

    def test_key_length_mismatch(self):
        with pytest.raises(InvalidInput):
            scan(square_job, [1, 2], keys=[1], workers=1)

    def test_wall_time_reported(self):
        assert scan(square_job, [1], workers=1).wall_time >= 0.0
