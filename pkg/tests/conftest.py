"""Shared fixtures: bundled nets, the seeded random-plant suite, and a
kernel warm-up so timed tests measure steady-state work, not JIT
compilation."""

from __future__ import annotations

import numpy as np
import pytest

from basisnet import Plant, kernels, nets, random_plant


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Touch every kernel once so compilation never lands in a timed test."""
    m0 = np.array([1, 1], dtype=np.int64)
    pre = np.array([[1, 0], [0, 1]], dtype=np.int64)
    post = np.array([[0, 1], [0, 0]], dtype=np.int64)
    c = post - pre
    kernels.ge_mask(m0.reshape(1, -1), m0)
    kernels.dominates_mask(m0.reshape(1, -1), m0.reshape(1, -1))
    kernels.expand_all(m0.reshape(1, -1), pre, c)
    kernels.explain_all(m0, pre, c, np.array([[0, 2]], dtype=np.int64), 100)
    kernels.saturate(m0, pre, post, np.array([0, 1], dtype=np.int64), 100)
    return kernels.backend()


@pytest.fixture(scope="session")
def workcell() -> Plant:
    return nets.load("workcell").plant


@pytest.fixture(scope="session")
def assembly_parsed():
    return nets.load("assembly_line")


@pytest.fixture(scope="session")
def hospital_parsed():
    return nets.load("emergency_dept")


@pytest.fixture(scope="session")
def suite200() -> list[Plant]:
    """The 200 seeded random plants shared by the differential criteria."""
    return [random_plant(seed) for seed in range(200)]
