import math

import numpy as np
import pytest

from zakgkp import GKPCode, ModularWavefunction, approx_codeword, vacuum, zak_transform

ALPHA = math.sqrt(math.pi)


@pytest.fixture(scope="session")
def code():
    return GKPCode()


@pytest.fixture(scope="session")
def grid64(code):
    return code.grid(64, 64)


@pytest.fixture(scope="session")
def vac64(code, grid64):
    return zak_transform(vacuum(), grid64, 16)


def random_state(grid, seed):
    rng = np.random.default_rng(seed)
    raw = rng.normal(size=(grid.nu, grid.nv)) + 1j * rng.normal(size=(grid.nu, grid.nv))
    return ModularWavefunction(grid, raw).normalized()


@pytest.fixture(scope="session")
def corpus_256(code):
    """Acceptance corpus: vacuum plus approximate codewords at 256x256."""
    grid = code.grid(256, 256)
    states = {"vacuum": zak_transform(vacuum(), grid, 16)}
    for delta in (0.2, 0.3, 0.4):
        for ell in (0, 1):
            key = f"gkp-approx:{delta}:{ell}"
            states[key] = zak_transform(approx_codeword(code, ell, delta), grid, 16)
    return states
