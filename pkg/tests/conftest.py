"""Shared model-zoo helpers for the test suite."""

import numpy as np
import pytest

from ergospectra.model import (OperatorModel, TrigBlockPotential,
                               torus_rotation)

GOLDEN = (np.sqrt(5) - 1) / 2


def random_hermitian(rng, m, scale=1.0):
    A = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
    return scale * (A + A.conj().T) / 2


def random_invertible(rng, m, cond_max=100.0):
    """Random C with condition number at most cond_max."""
    A = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
    B = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
    U, _ = np.linalg.qr(A)
    V, _ = np.linalg.qr(B)
    s = np.exp(rng.uniform(0, np.log(cond_max), size=m))
    s = s / s.min()
    return U @ np.diag(s) @ V.conj().T


def random_model(rng, m=None, cond_max=100.0, modes=1, scale=1.0):
    """Random block model with a trig-polynomial potential on a torus base."""
    if m is None:
        m = int(rng.integers(1, 4))
    C = random_invertible(rng, m, cond_max)
    coeffs = {(0,): random_hermitian(rng, m, scale)}
    for k in range(1, modes + 1):
        F = scale * (rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))) / 2
        coeffs[(k,)] = F
    alpha = float(rng.uniform(0.2, 0.8))
    pot = TrigBlockPotential(m, coeffs)
    return OperatorModel(m, C, pot, torus_rotation([alpha]))


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)
