"""Truncation-error control for operators that are not exactly nilpotent.

A cyclic transition graph leaves a residual beyond every finite
truncation order.  The residual after order m is (I - T)^(-1) T^(m+1) phi
whenever I - T is invertible; it is reported exactly through the dense LU
route and bounded in norm by the geometric estimate when ||T|| < 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operators import (
    SparseOperator,
    as_state_vector,
    matvec,
    operator_norm,
    power,
    vector_norm,
)
from .solver import direct_solve_oracle

# Reporting convention only, nothing derived: a defect at or below this
# counts as "quasi-nilpotent" in reports.
QUASI_NILPOTENT_DEFECT = 1e-3

_BOUND_KINDS = ("inf", "one")


@dataclass(frozen=True)
class TruncationReport:
    """Error budget for truncating the Born expansion at a given order.

    bound is None when operator_norm >= 1, where the geometric estimate
    has nothing to say; the exact remainder is still reported whenever
    I - T is invertible.  quasi_nilpotent applies the QUASI_NILPOTENT_DEFECT
    convention to defect_norm.
    """

    order: int
    norm_kind: str
    operator_norm: float
    defect_norm: float
    phi_norm: float
    exact_remainder_norm: float
    bound: float | None
    quasi_nilpotent: bool


def nilpotency_defect(operator: SparseOperator, m: int, norm_kind: str = "inf") -> float:
    """Norm of the (m+1)-th power; zero exactly when truncation at order m is exact."""
    if m < 0:
        raise ValueError(f"order must be >= 0, got {m}")
    return operator_norm(power(operator, m + 1), norm_kind)


def exact_remainder(operator: SparseOperator, phi, m: int) -> np.ndarray:
    """Exact residual (I - T)^(-1) T^(m+1) phi of the order-m truncation.

    The power is formed sparsely first, so a structurally vanishing
    power gives an exactly zero remainder with no solve involved; the
    general case goes through the dense LU route.
    """
    if m < 0:
        raise ValueError(f"order must be >= 0, got {m}")
    v = as_state_vector(phi, operator.dim)
    tail = power(operator, m + 1)
    if tail.is_zero():
        return np.zeros(operator.dim, dtype=complex)
    return direct_solve_oracle(operator, matvec(tail, v))


def remainder_bound(
    operator: SparseOperator, phi, m: int, norm_kind: str = "inf"
) -> TruncationReport:
    """Full truncation report at order m.

    norm_kind must be an induced kind ("inf" or "one"): those are
    submultiplicative and paired with a compatible vector norm, which is
    what the geometric bound ||T^(m+1)|| ||phi|| / (1 - ||T||) needs.
    """
    if norm_kind not in _BOUND_KINDS:
        raise ValueError(
            f"remainder bounds need an induced norm kind {_BOUND_KINDS}, got {norm_kind!r}"
        )
    if m < 0:
        raise ValueError(f"order must be >= 0, got {m}")
    v = as_state_vector(phi, operator.dim)
    tail = power(operator, m + 1)
    op_norm = operator_norm(operator, norm_kind)
    defect = operator_norm(tail, norm_kind)
    phi_norm = vector_norm(v, norm_kind)
    if tail.is_zero():
        remainder = np.zeros(operator.dim, dtype=complex)
    else:
        remainder = direct_solve_oracle(operator, matvec(tail, v))
    bound = defect * phi_norm / (1.0 - op_norm) if op_norm < 1.0 else None
    return TruncationReport(
        order=m,
        norm_kind=norm_kind,
        operator_norm=op_norm,
        defect_norm=defect,
        phi_norm=phi_norm,
        exact_remainder_norm=vector_norm(remainder, norm_kind),
        bound=bound,
        quasi_nilpotent=defect <= QUASI_NILPOTENT_DEFECT,
    )
