"""Shared random-system generators for the test suite.

Everything is driven by explicitly seeded numpy Generators so failures
reproduce; no test draws from global random state.
"""

from __future__ import annotations

import numpy as np

from bornsolve.operators import SparseOperator, operator_norm


def random_phase(rng) -> complex:
    return complex(np.exp(1j * rng.uniform(0.0, 2.0 * np.pi)))


def random_dag(rng, dim: int, density: float = 0.35,
               min_modulus: float = 0.5, max_modulus: float = 2.0) -> SparseOperator:
    """Random acyclic operator with edge moduli bounded away from zero.

    With the default floor of 0.5 even an 11-edge path product stays near
    5e-4, far above the structural-zero drop threshold, so the sparse
    power pattern is exactly the walk pattern of the graph.
    """
    order = rng.permutation(dim)
    entries = []
    for a in range(dim):
        for b in range(a + 1, dim):
            if rng.random() < density:
                amp = rng.uniform(min_modulus, max_modulus) * random_phase(rng)
                entries.append((int(order[b]) + 1, int(order[a]) + 1, amp))
    return SparseOperator(dim, entries)


def random_operator(rng, dim: int, density: float = 0.4) -> SparseOperator:
    """Random operator with unrestricted pattern; cycles are likely."""
    entries = []
    for row in range(1, dim + 1):
        for col in range(1, dim + 1):
            if rng.random() < density:
                amp = rng.uniform(0.2, 1.0) * random_phase(rng)
                entries.append((row, col, amp))
    return SparseOperator(dim, entries)


def scaled_to_norm(op: SparseOperator, target: float, kind: str = "inf") -> SparseOperator:
    """Rescale so the chosen norm equals target up to rounding."""
    current = operator_norm(op, kind)
    if current == 0.0:
        raise ValueError("cannot rescale a zero operator")
    return op.scaled(target / current)


def random_state(rng, dim: int) -> np.ndarray:
    return rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
