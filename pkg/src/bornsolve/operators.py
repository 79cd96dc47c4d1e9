"""Sparse complex operators over a finite ordered basis.

Basis states carry the 1-based labels 1..dim of the kets |1>..|n|.  A
stored matrix entry (row j, col i) holds the amplitude for the transition
from state i to state j, so columns index the source state and rows the
target state.  State vectors are plain numpy arrays of complex128 whose
position k holds the amplitude of basis state k + 1.

Absence of an entry is a structural zero: the transition graph, and with
it every nilpotency statement, is read off the stored pattern.  Entries
whose modulus falls at or below ZERO_THRESHOLD after arithmetic are
dropped so the pattern stays meaningful.
"""

from __future__ import annotations

import math
from typing import Iterable, Iterator

import numpy as np

from .errors import DimensionError, ResonanceError

# Dropped-entry modulus: anything at or below this after arithmetic is
# treated as a structural zero.
ZERO_THRESHOLD = 1e-14

# Minimum allowed distance between the energy and a free level, relative
# to 1 + |E|.
RESONANCE_MARGIN = 1e-10

NORM_KINDS = ("inf", "one", "fro")

Entry = tuple[int, int, complex]

_NO_COLS: dict[int, complex] = {}


class SparseOperator:
    """Immutable sparse complex matrix with 1-based indices.

    Used for transfer operators and interaction potentials alike.  No
    method mutates an instance; arithmetic returns new operators.
    """

    __slots__ = ("dim", "_rows")

    def __init__(self, dim: int, entries: Iterable[Entry] = ()):
        if dim < 1:
            raise ValueError(f"dimension must be a positive integer, got {dim}")
        rows: dict[int, dict[int, complex]] = {}
        seen: set[tuple[int, int]] = set()
        for row, col, amp in entries:
            if not (1 <= row <= dim and 1 <= col <= dim):
                raise ValueError(f"entry ({row}, {col}) outside 1..{dim}")
            if (row, col) in seen:
                raise ValueError(f"duplicate entry at ({row}, {col})")
            seen.add((row, col))
            value = complex(amp)
            if not (math.isfinite(value.real) and math.isfinite(value.imag)):
                raise ValueError(f"entry ({row}, {col}) is not finite: {value}")
            if abs(value) <= ZERO_THRESHOLD:
                continue
            rows.setdefault(row, {})[col] = value
        self.dim = dim
        self._rows = rows

    @classmethod
    def zero(cls, dim: int) -> "SparseOperator":
        return cls(dim)

    @classmethod
    def identity(cls, dim: int) -> "SparseOperator":
        return cls(dim, [(k, k, 1.0 + 0j) for k in range(1, dim + 1)])

    @classmethod
    def from_dense(cls, matrix) -> "SparseOperator":
        a = np.asarray(matrix, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        n = a.shape[0]
        entries = [
            (j + 1, i + 1, complex(a[j, i]))
            for j in range(n)
            for i in range(n)
            if abs(a[j, i]) > ZERO_THRESHOLD
        ]
        return cls(n, entries)

    @property
    def nnz(self) -> int:
        return sum(len(cols) for cols in self._rows.values())

    def entry(self, row: int, col: int) -> complex:
        """Stored amplitude at (row, col); structural zeros come back as 0."""
        return self._rows.get(row, _NO_COLS).get(col, 0j)

    def entries(self) -> Iterator[Entry]:
        """Stored entries as (row, col, amplitude), sorted by (row, col)."""
        for row in sorted(self._rows):
            cols = self._rows[row]
            for col in sorted(cols):
                yield row, col, cols[col]

    def index_set(self) -> set[tuple[int, int]]:
        return {(row, col) for row, cols in self._rows.items() for col in cols}

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for row, cols in self._rows.items():
            for col, amp in cols.items():
                out[row - 1, col - 1] = amp
        return out

    def scaled(self, factor: complex) -> "SparseOperator":
        return SparseOperator(
            self.dim, [(r, c, factor * a) for r, c, a in self.entries()]
        )

    def is_zero(self) -> bool:
        return not self._rows

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseOperator):
            return NotImplemented
        return self.dim == other.dim and self._rows == other._rows

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"SparseOperator(dim={self.dim}, nnz={self.nnz})"


def basis_state(dim: int, label: int) -> np.ndarray:
    """Unit amplitude on basis state `label` (1-based), zero elsewhere."""
    if not 1 <= label <= dim:
        raise ValueError(f"basis label {label} outside 1..{dim}")
    v = np.zeros(dim, dtype=complex)
    v[label - 1] = 1.0
    return v


def as_state_vector(values, dim: int) -> np.ndarray:
    """Validate and convert to a complex state vector of the given dimension."""
    v = np.asarray(values, dtype=complex)
    if v.shape != (dim,):
        raise DimensionError(f"state vector has shape {v.shape}, expected ({dim},)")
    if not np.all(np.isfinite(v)):
        raise ValueError("state vector has non-finite components")
    return v


def matvec(op: SparseOperator, vec) -> np.ndarray:
    """Apply the operator to a state: out[j] = sum_i T[j, i] vec[i].

    Works straight off the stored entries; the operator is never
    densified and nothing is dropped from the result.
    """
    v = as_state_vector(vec, op.dim)
    out = np.zeros(op.dim, dtype=complex)
    for row, cols in op._rows.items():
        acc = 0j
        for col, amp in cols.items():
            acc += amp * v[col - 1]
        out[row - 1] = acc
    return out


def matmul(a: SparseOperator, b: SparseOperator) -> SparseOperator:
    """Sparse operator product a b.

    Accumulated entries with modulus at or below ZERO_THRESHOLD are
    dropped, so products only ever hold amplitudes that trace back to
    actual transition chains.
    """
    if a.dim != b.dim:
        raise DimensionError(f"cannot multiply dimension {a.dim} by {b.dim}")
    acc: dict[tuple[int, int], complex] = {}
    for row, cols in a._rows.items():
        for mid, left in cols.items():
            brow = b._rows.get(mid)
            if not brow:
                continue
            for col, right in brow.items():
                key = (row, col)
                acc[key] = acc.get(key, 0j) + left * right
    entries = [(r, c, v) for (r, c), v in acc.items() if abs(v) > ZERO_THRESHOLD]
    return SparseOperator(a.dim, entries)


def power(op: SparseOperator, k: int) -> SparseOperator:
    """k-th operator power, k >= 0.

    Multiplies sequentially, reusing the previous power each step; once a
    power comes out structurally zero all higher ones are too, so the
    loop stops early.
    """
    if k < 0:
        raise ValueError(f"power needs k >= 0, got {k}")
    out = SparseOperator.identity(op.dim)
    for _ in range(k):
        if out.is_zero():
            break
        out = matmul(out, op)
    return out


def operator_norm(op: SparseOperator, kind: str = "inf") -> float:
    """Matrix norm of the stored entries.

    "inf" is the maximum absolute row sum, "one" the maximum absolute
    column sum, "fro" the root of the total squared modulus.  The two
    induced kinds are submultiplicative, which the truncation bound
    relies on; "fro" is offered for reporting only.
    """
    if kind not in NORM_KINDS:
        raise ValueError(f"unknown norm kind {kind!r}; expected one of {NORM_KINDS}")
    if kind == "fro":
        return math.sqrt(sum(abs(amp) ** 2 for _, _, amp in op.entries()))
    sums: dict[int, float] = {}
    for row, col, amp in op.entries():
        key = row if kind == "inf" else col
        sums[key] = sums.get(key, 0.0) + abs(amp)
    return max(sums.values(), default=0.0)


def vector_norm(vec, kind: str = "inf") -> float:
    """Vector norm compatible with the operator norm of the same kind."""
    v = np.asarray(vec, dtype=complex)
    if kind == "inf":
        return float(np.max(np.abs(v))) if v.size else 0.0
    if kind == "one":
        return float(np.sum(np.abs(v)))
    if kind == "fro":
        return float(np.linalg.norm(v))
    raise ValueError(f"unknown norm kind {kind!r}; expected one of {NORM_KINDS}")


def free_resolvent_diagonal(h0_diagonal, energy: complex) -> np.ndarray:
    """Diagonal of (E - H0)^(-1) for a diagonal free Hamiltonian.

    Raises ResonanceError when the energy comes within
    RESONANCE_MARGIN * (1 + |E|) of any level; a complex energy keeps a
    probe near a level well posed.
    """
    h0 = np.asarray(h0_diagonal, dtype=float)
    if h0.ndim != 1 or h0.size == 0:
        raise ValueError("free Hamiltonian must be a non-empty 1-d real array")
    if not np.all(np.isfinite(h0)):
        raise ValueError("free Hamiltonian has non-finite levels")
    e = complex(energy)
    threshold = RESONANCE_MARGIN * (1.0 + abs(e))
    gaps = np.abs(e - h0)
    worst = int(np.argmin(gaps))
    if gaps[worst] <= threshold:
        raise ResonanceError(
            level=worst + 1, energy=e, gap=float(gaps[worst]), threshold=threshold
        )
    return 1.0 / (e - h0)


def build_transfer_operator(
    h0_diagonal, potential: SparseOperator, energy: complex
) -> SparseOperator:
    """Compose the free resolvent with the interaction: T[j, i] = V[j, i] / (E - H0[j]).

    The result keeps the sparsity pattern of the potential, so the
    transition graph of T is the transition graph of V.
    """
    h0 = np.asarray(h0_diagonal, dtype=float)
    if h0.shape != (potential.dim,):
        raise DimensionError(
            f"free Hamiltonian has shape {h0.shape}, potential has dimension {potential.dim}"
        )
    g0 = free_resolvent_diagonal(h0, energy)
    entries = [
        (row, col, complex(g0[row - 1]) * amp)
        for row, col, amp in potential.entries()
    ]
    return SparseOperator(potential.dim, entries)
