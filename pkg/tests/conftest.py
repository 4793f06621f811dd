"""Shared helpers: seeded RNG and a generator of random physical states."""

from __future__ import annotations

import numpy as np
import pytest

from cvteleport import beamsplitter, displace, loss, rotate, squeeze, vacuum


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260814)


def random_physical_state(rng: np.random.Generator, n_modes: int, n_ops: int = 10):
    """Random state reachable from vacuum by squeezers, rotations, mixing, loss."""
    state = vacuum(n_modes)
    for _ in range(n_ops):
        op = rng.integers(0, 5)
        mode = int(rng.integers(0, n_modes))
        if op == 0:
            state = squeeze(state, mode, rng.uniform(-1.2, 1.2), rng.uniform(0, np.pi))
        elif op == 1:
            state = rotate(state, mode, rng.uniform(0, 2 * np.pi))
        elif op == 2:
            state = displace(state, mode, rng.normal(0, 2), rng.normal(0, 2))
        elif op == 3 and n_modes >= 2:
            other = int(rng.integers(0, n_modes - 1))
            other += other >= mode
            state = beamsplitter(state, mode, other, rng.uniform(0, 1))
        else:
            state = loss(state, mode, rng.uniform(0.2, 1.0))
    return state
