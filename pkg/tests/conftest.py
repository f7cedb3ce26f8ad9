import json
import pathlib

import numpy as np
import pytest

from cnpkit import Bergman, Tolerances, gram

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


@pytest.fixture
def tol():
    return Tolerances()


@pytest.fixture
def bergman_witness():
    """Frozen non-cNP witness triple found by the seeded search."""
    doc = json.loads((FIXTURES / "bergman_witness.json").read_text())
    points = [complex(re, im) for re, im in doc["points"]]
    return doc, points


@pytest.fixture
def bergman_witness_sample(bergman_witness):
    _, points = bergman_witness
    return gram(Bergman(), points)


def random_disk_points(rng, n, radius):
    r = radius * np.sqrt(rng.uniform(0.0, 1.0, n))
    th = rng.uniform(0.0, 2.0 * np.pi, n)
    return r * np.exp(1j * th)


def random_psd(rng, n, rank=None):
    rank = rank if rank is not None else n
    C = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    return C @ C.conj().T


def random_hermitian(rng, n):
    A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (A + A.conj().T) / 2.0
