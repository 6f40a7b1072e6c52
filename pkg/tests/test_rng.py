"""Counter-based block RNG: reproducibility and ordered reduction."""

import numpy as np
import pytest

from multlab.rng import BLOCK, block_generator, run_blocks


def test_block_generator_is_pure():
    a = block_generator(5, 9, 3).random(8)
    b = block_generator(5, 9, 3).random(8)
    assert np.array_equal(a, b)


def test_blocks_and_streams_are_distinct():
    base = block_generator(5, 9, 0).random(8)
    assert not np.array_equal(base, block_generator(5, 9, 1).random(8))
    assert not np.array_equal(base, block_generator(5, 10, 0).random(8))
    assert not np.array_equal(base, block_generator(6, 9, 0).random(8))


def test_run_blocks_partitioning():
    n = 2 * BLOCK + 17
    lengths = run_blocks(n, 0, 1, lambda rng, length: length)
    assert lengths == [BLOCK, BLOCK, 17]
    assert sum(lengths) == n


def test_run_blocks_thread_count_is_invisible():
    n = 3 * BLOCK + 5

    def block(rng, length):
        return float(rng.random(length).sum())

    assert run_blocks(n, 11, 2, block, threads=1) == run_blocks(
        n, 11, 2, block, threads=4
    )
    with pytest.raises(ValueError):
        run_blocks(0, 0, 0, block)
