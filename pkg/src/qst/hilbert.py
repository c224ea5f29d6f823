"""Composite Hilbert-space bookkeeping and dense operator helpers.

Operators, kets and density matrices are plain complex ``numpy`` arrays.
The composite space is ordered ``[qubit, NV, resonator a, resonator b]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

QUBIT, NV, CAVITY, MECHANICS = 0, 1, 2, 3
SLOT_NAMES = ("qubit", "nv", "cavity_a", "mechanics_b")


class DimensionError(ValueError):
    """Raised when operator or state dimensions do not fit a layout."""


@dataclass(frozen=True)
class SubsystemLayout:
    """Ordered subsystem dimensions of a tensor-product space."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise DimensionError("layout needs at least one subsystem")
        if any(d < 2 for d in dims):
            raise DimensionError(f"every subsystem dimension must be >= 2, got {dims}")
        object.__setattr__(self, "dims", dims)

    @classmethod
    def hybrid(cls, fock_dim: int = 2) -> "SubsystemLayout":
        """Qubit, NV, cavity and mechanical mode, both modes truncated at `fock_dim`."""
        return cls((2, 2, fock_dim, fock_dim))

    @property
    def total(self) -> int:
        return int(np.prod(self.dims))

    def __len__(self) -> int:
        return len(self.dims)

    def flatten(self, multi_index) -> int:
        multi_index = tuple(int(k) for k in multi_index)
        if len(multi_index) != len(self.dims):
            raise DimensionError(f"expected {len(self.dims)} indices, got {len(multi_index)}")
        for k, d in zip(multi_index, self.dims):
            if not 0 <= k < d:
                raise DimensionError(f"index {multi_index} out of range for dims {self.dims}")
        return int(np.ravel_multi_index(multi_index, self.dims))

    def unflatten(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.total:
            raise DimensionError(f"flat index {index} out of range [0, {self.total})")
        return tuple(int(k) for k in np.unravel_index(index, self.dims))

    def check_slot(self, slot: int) -> int:
        if not isinstance(slot, (int, np.integer)) or not 0 <= slot < len(self.dims):
            raise DimensionError(f"invalid subsystem slot {slot!r} for {len(self.dims)} subsystems")
        return int(slot)


def dag(op: np.ndarray) -> np.ndarray:
    return op.conj().T


def tensor(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product of the arguments, left factor most significant."""
    return reduce(np.kron, ops)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=complex)


def fock_annihilation(n: int) -> np.ndarray:
    """Bosonic lowering operator truncated to the lowest `n` Fock states.

    >>> fock_annihilation(3).real
    array([[0.        , 1.        , 0.        ],
           [0.        , 0.        , 1.41421356],
           [0.        , 0.        , 0.        ]])
    """
    if n < 2:
        raise DimensionError(f"Fock truncation must be >= 2, got {n}")
    return np.diag(np.sqrt(np.arange(1, n)), k=1).astype(complex)


def qubit_lower() -> np.ndarray:
    """|ground><excited| with ground at index 0 (|0> or |m>) and excited at index 1."""
    return np.array([[0, 1], [0, 0]], dtype=complex)


def qubit_z() -> np.ndarray:
    """|excited><excited| - |ground><ground|."""
    return np.diag([-1.0, 1.0]).astype(complex)


def embed(local: np.ndarray, slot: int, layout: SubsystemLayout) -> np.ndarray:
    """Pad `local` with identities so that it acts on subsystem `slot` only."""
    slot = layout.check_slot(slot)
    local = np.asarray(local, dtype=complex)
    if local.shape != (layout.dims[slot], layout.dims[slot]):
        raise DimensionError(
            f"operator of shape {local.shape} does not fit slot {slot} "
            f"({SLOT_NAMES[slot] if len(layout) == 4 else slot}) of dimension {layout.dims[slot]}"
        )
    factors = [identity(d) for d in layout.dims]
    factors[slot] = local
    return tensor(*factors)


def basis_ket(layout: SubsystemLayout, multi_index) -> np.ndarray:
    ket = np.zeros(layout.total, dtype=complex)
    ket[layout.flatten(multi_index)] = 1.0
    return ket


def ket_to_dm(ket: np.ndarray) -> np.ndarray:
    ket = np.asarray(ket, dtype=complex)
    return np.outer(ket, ket.conj())


def partial_trace(rho: np.ndarray, keep: int, layout: SubsystemLayout) -> np.ndarray:
    """Reduced density matrix of subsystem `keep`, every other subsystem traced out."""
    keep = layout.check_slot(keep)
    rho = np.asarray(rho)
    if rho.shape != (layout.total, layout.total):
        raise DimensionError(f"density matrix of shape {rho.shape} does not match layout {layout.dims}")
    n = len(layout)
    t = rho.reshape(layout.dims + layout.dims)
    # move the kept row/column axes to the front, contract the rest pairwise
    others = [k for k in range(n) if k != keep]
    t = np.transpose(t, [keep, n + keep] + others + [n + k for k in others])
    rest = int(np.prod([layout.dims[k] for k in others]))
    t = t.reshape(layout.dims[keep], layout.dims[keep], rest, rest)
    return np.trace(t, axis1=2, axis2=3)


def check_density_matrix(rho: np.ndarray, atol_herm: float = 1e-10, atol_trace: float = 1e-8,
                         atol_eig: float = 1e-8) -> np.ndarray:
    """Validate Hermiticity, unit trace and positivity; return `rho` as a complex array."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"density matrix must be square, got shape {rho.shape}")
    if np.max(np.abs(rho - dag(rho))) > atol_herm:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > atol_trace:
        raise ValueError(f"density matrix trace {np.trace(rho).real:.3g} != 1")
    if np.linalg.eigvalsh(rho).min() < -atol_eig:
        raise ValueError("density matrix has a negative eigenvalue")
    return rho
