import numpy as np
import pytest

from rarewalk import rng


def test_numba_mixer_matches_reference():
    for z in (0, 1, 12345, 2**63, 2**64 - 1):
        assert int(rng.nb_mix64(np.uint64(z))) == rng.mix64(z)


def test_fair_steps_match_reference():
    for replica in (0, 1, 77):
        key = np.uint64(rng.nb_replica_key(np.uint64(99), np.uint64(replica)))
        assert int(key) == rng.replica_key(99, replica)
        out = np.empty(150, np.int8)
        rng.nb_fill_fair(key, out)
        assert out.tolist() == rng.fair_steps_reference(99, replica, 150)


def test_biased_steps_match_reference():
    key = np.uint64(rng.nb_replica_key(np.uint64(5), np.uint64(3)))
    out = np.empty(100, np.int8)
    rng.nb_fill_biased(key, 0.3, out)
    assert out.tolist() == rng.biased_steps_reference(5, 3, 100, 0.3)


def test_fair_bits_are_balanced():
    steps = np.array(rng.fair_steps_reference(1, 0, 64 * 500))
    # 32000 fair coins: mean within 5 sd of zero
    assert abs(steps.mean()) < 5 / np.sqrt(steps.size)


def test_biased_extremes():
    assert set(rng.biased_steps_reference(1, 0, 50, 1.0)) == {1}
    assert set(rng.biased_steps_reference(1, 0, 50, 0.0)) == {-1}


def test_seed_range():
    assert rng.check_seed(0) == 0
    assert rng.check_seed(2**64 - 1) == 2**64 - 1
    for bad in (-1, 2**64):
        with pytest.raises(ValueError):
            rng.check_seed(bad)
    assert 0 <= rng.fresh_seed() < 2**64
