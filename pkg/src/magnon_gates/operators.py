"""Dense complex operator algebra on composite Hilbert spaces.

All operators and states are plain ``numpy.ndarray`` objects with dtype
complex128, stored row-major.  Composite spaces are described by a
:class:`SpaceLayout`; the subsystem order is fixed as (qubit 1, qubit 2,
magnon) everywhere in this package so that builders and partial traces
never disagree about index conventions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm as _expm

__all__ = [
    "SpaceLayout",
    "kron",
    "embed",
    "identity",
    "annihilation",
    "number_operator",
    "fock_state",
    "thermal_state",
    "partial_trace",
    "matrix_exp",
    "dagger",
    "matmul",
    "add",
    "scale",
    "commutator",
    "expectation",
    "frobenius_norm",
    "is_hermitian",
    "vec",
    "unvec",
]


@dataclass(frozen=True)
class SpaceLayout:
    """Ordered subsystem dimensions of a tensor-product Hilbert space."""

    dims: tuple[int, ...]
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        if any(d < 2 for d in dims):
            raise ValueError(f"every subsystem dimension must be >= 2, got {dims}")
        labels = tuple(self.labels) if self.labels else tuple(f"s{i}" for i in range(len(dims)))
        if len(labels) != len(dims):
            raise ValueError("labels and dims must have the same length")
        if len(set(labels)) != len(labels):
            raise ValueError(f"subsystem labels must be unique, got {labels}")
        object.__setattr__(self, "labels", labels)

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims))

    def index(self, label: str) -> int:
        return self.labels.index(label)


def qubit_magnon_layout(dim_qubit: int = 3, dim_magnon: int = 4) -> SpaceLayout:
    """Standard (q1, q2, m) layout used by all gate models."""
    return SpaceLayout((dim_qubit, dim_qubit, dim_magnon), ("q1", "q2", "m"))


def kron(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more matrices, left to right."""
    out = np.asarray(ops[0], dtype=complex)
    for op in ops[1:]:
        out = np.kron(out, np.asarray(op, dtype=complex))
    return out


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def embed(op: np.ndarray, index: int, layout: SpaceLayout) -> np.ndarray:
    """Lift a single-subsystem operator to the full space of ``layout``.

    Identity acts on every other factor; ``op`` acts on subsystem ``index``.
    """
    op = np.asarray(op, dtype=complex)
    d = layout.dims[index]
    if op.shape != (d, d):
        raise ValueError(
            f"operator shape {op.shape} does not match subsystem {index} "
            f"of dimension {d}"
        )
    factors = [identity(dj) if j != index else op for j, dj in enumerate(layout.dims)]
    return kron(*factors)


def annihilation(dim: int) -> np.ndarray:
    """Bosonic annihilation operator on a truncated Fock space."""
    if dim < 2:
        raise ValueError("annihilation operator needs dim >= 2")
    a = np.zeros((dim, dim), dtype=complex)
    n = np.arange(1, dim)
    a[n - 1, n] = np.sqrt(n)
    return a


def number_operator(dim: int) -> np.ndarray:
    return np.diag(np.arange(dim, dtype=complex))


def fock_state(dim: int, n: int) -> np.ndarray:
    """Number state |n> as a column vector."""
    if not 0 <= n < dim:
        raise ValueError(f"occupation {n} out of range for dim {dim}")
    psi = np.zeros(dim, dtype=complex)
    psi[n] = 1.0
    return psi


def thermal_state(dim: int, n_th: float) -> np.ndarray:
    """Bose-Einstein thermal density matrix, renormalized on the truncation."""
    if n_th < 0:
        raise ValueError(f"mean occupation must be >= 0, got {n_th}")
    if n_th == 0:
        rho = np.zeros((dim, dim), dtype=complex)
        rho[0, 0] = 1.0
        return rho
    # populations proportional to (n_th / (1 + n_th))**n
    ratio = n_th / (1.0 + n_th)
    pops = ratio ** np.arange(dim)
    pops /= pops.sum()
    return np.diag(pops).astype(complex)


def partial_trace(rho: np.ndarray, layout: SpaceLayout, keep) -> np.ndarray:
    """Reduced density matrix over the subsystems in ``keep`` (layout order)."""
    rho = np.asarray(rho, dtype=complex)
    dims = layout.dims
    total = layout.total_dim
    if rho.shape != (total, total):
        raise ValueError(f"state shape {rho.shape} does not match layout dimension {total}")
    keep = sorted(set(int(k) for k in keep))
    n = len(dims)
    reshaped = rho.reshape(dims + dims)
    traced = [i for i in range(n) if i not in keep]
    # trace highest axes first so lower axis numbers stay valid
    for i in sorted(traced, reverse=True):
        reshaped = np.trace(reshaped, axis1=i, axis2=i + reshaped.ndim // 2)
    d_keep = int(np.prod([dims[i] for i in keep])) if keep else 1
    return reshaped.reshape(d_keep, d_keep)


def matrix_exp(a: np.ndarray) -> np.ndarray:
    """Matrix exponential (scaling-and-squaring with Pade kernel)."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix_exp needs a square matrix, got shape {a.shape}")
    return _expm(a)


def dagger(a: np.ndarray) -> np.ndarray:
    return np.asarray(a).conj().T


def matmul(*ops: np.ndarray) -> np.ndarray:
    out = np.asarray(ops[0], dtype=complex)
    for op in ops[1:]:
        out = out @ op
    return out


def add(*ops: np.ndarray) -> np.ndarray:
    out = np.asarray(ops[0], dtype=complex).copy()
    for op in ops[1:]:
        out = out + op
    return out


def scale(c: complex, a: np.ndarray) -> np.ndarray:
    return c * np.asarray(a, dtype=complex)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def expectation(op: np.ndarray, rho: np.ndarray) -> complex:
    """<A> = tr(A rho)."""
    return complex(np.trace(op @ rho))


def frobenius_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a))


def is_hermitian(a: np.ndarray, tol: float = 1e-12) -> bool:
    """Check max |A - A^dagger| element against tol, relative to max |A|."""
    a = np.asarray(a)
    scale_ = np.abs(a).max()
    if scale_ == 0:
        return True
    return np.abs(a - a.conj().T).max() <= tol * scale_


def vec(rho: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization: vec(A rho B) = (B^T kron A) vec(rho)."""
    return np.asarray(rho, dtype=complex).flatten(order="F")


def unvec(v: np.ndarray, dim: int | None = None) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    if dim is None:
        dim = int(round(np.sqrt(v.size)))
    return v.reshape(dim, dim, order="F")
