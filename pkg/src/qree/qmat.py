"""Dense complex linear algebra for small quantum systems (dim <= 8).

Everything here operates on plain ``numpy`` arrays of ``complex128``.  A
density matrix is an ordinary square array that passes
:func:`validate_density`; there is no wrapper class.  Qubit 1 is the
leftmost tensor factor (most significant bit of the basis index), so
``|011>`` is basis index 3 of an 8-dimensional state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

HERM_TOL = 1e-12
TRACE_TOL = 1e-10
PSD_TOL = 1e-10

# Eigenvalue floor used inside fractional/negative matrix powers: small
# enough not to move any optimizer objective, large enough to regularize
# rank-deficient states.
DEFAULT_FLOOR = 1e-12


class SpectralDecomposition(NamedTuple):
    """Eigenvalues (ascending, real) and orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass(frozen=True)
class Bipartition:
    """A fixed A:B split of a tensor-product space.

    ``dim_a`` is the dimension of the leading (leftmost) factor.  For three
    qubits the 1:23 cut is ``Bipartition(2, 4)`` and the 1:2 / 1:3 cuts act
    on the reduced 4-dimensional states as ``Bipartition(2, 2)``.
    """

    dim_a: int
    dim_b: int

    def __post_init__(self) -> None:
        if self.dim_a < 1 or self.dim_b < 1:
            raise ValueError("bipartition dimensions must be positive")

    @property
    def dim(self) -> int:
        return self.dim_a * self.dim_b


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with the leading factor on the left."""
    return np.kron(np.asarray(a), np.asarray(b))


def dagger(a: np.ndarray) -> np.ndarray:
    return np.asarray(a).conj().T


def is_hermitian(h: np.ndarray, tol: float = HERM_TOL) -> bool:
    h = np.asarray(h)
    return h.shape[0] == h.shape[1] and np.abs(h - h.conj().T).max() <= tol


def validate_density(rho: np.ndarray, *, herm_tol: float = HERM_TOL,
                     trace_tol: float = TRACE_TOL, psd_tol: float = PSD_TOL) -> np.ndarray:
    """Check Hermiticity, unit trace and positivity; return rho as complex128.

    Raises ``ValueError`` naming the violated property.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    dev = np.abs(rho - rho.conj().T).max()
    if dev > herm_tol:
        raise ValueError(f"not Hermitian: max |M - M^dag| = {dev:.3e} > {herm_tol:.0e}")
    tr = complex(np.trace(rho))
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"trace {tr} deviates from 1 by more than {trace_tol:.0e}")
    lo = float(np.linalg.eigvalsh(rho)[0])
    if lo < -psd_tol:
        raise ValueError(f"not PSD: smallest eigenvalue {lo:.3e} < -{psd_tol:.0e}")
    return rho


def eig_hermitian(h: np.ndarray, tol: float = 1e-10) -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Backed by LAPACK (``numpy.linalg.eigh``); rejects non-Hermitian input.
    """
    h = np.asarray(h, dtype=complex)
    if not is_hermitian(h, tol):
        raise ValueError("matrix is not Hermitian within tolerance")
    w, v = np.linalg.eigh(h)
    return SpectralDecomposition(w, v)


def partial_trace(rho: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Trace out every tensor factor not listed in ``keep``.

    ``dims`` lists the factor dimensions left to right (factor 0 is the
    most significant index).  The kept factors stay in their original
    order.
    """
    rho = np.asarray(rho, dtype=complex)
    dims = list(dims)
    n = len(dims)
    if math.prod(dims) != rho.shape[0] or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"product of dims {dims} does not match matrix dim {rho.shape}")
    keep = sorted(set(keep))
    if not keep or any(k < 0 or k >= n for k in keep):
        raise ValueError(f"keep indices {keep} invalid for {n} factors")
    work = rho.reshape(dims + dims)
    traced = 0
    for idx in sorted(set(range(n)) - set(keep), reverse=True):
        m = n - traced
        work = np.trace(work, axis1=idx, axis2=idx + m)
        traced += 1
    d_keep = math.prod(dims[k] for k in keep)
    return work.reshape(d_keep, d_keep)


def mat_func(rho: np.ndarray, f: Callable[[np.ndarray], np.ndarray],
             floor: float = 0.0) -> np.ndarray:
    """Apply a scalar function to the eigenvalues: V f(max(w, floor)) V^dag."""
    w, v = eig_hermitian(rho)
    fw = f(np.maximum(w, floor))
    out = (v * fw) @ v.conj().T
    return 0.5 * (out + out.conj().T)


def mat_power(rho: np.ndarray, p: float, floor: float = 0.0) -> np.ndarray:
    """Hermitian matrix power with eigenvalue floor (needed when p < 0)."""
    return mat_func(rho, lambda x: x**p, floor)


def numerical_rank(rho: np.ndarray, tol: float) -> int:
    """Number of eigenvalues above ``tol``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    w = np.linalg.eigvalsh(np.asarray(rho, dtype=complex))
    return int(np.count_nonzero(w > tol))


def operator_norm(rho: np.ndarray) -> float:
    """Largest eigenvalue (operator norm of a PSD matrix)."""
    return float(np.linalg.eigvalsh(np.asarray(rho, dtype=complex))[-1])


def random_density_matrix(dim: int, rank: int, seed) -> np.ndarray:
    """Seeded random density matrix of exact numerical rank ``rank``.

    Built as G G^dag / Tr from a complex normal ``dim x rank`` factor, so
    the result is PSD with probability-one rank ``rank``.
    """
    if not 1 <= rank <= dim:
        raise ValueError(f"rank must be in [1, {dim}], got {rank}")
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    return 0.5 * (rho + rho.conj().T)


def random_unitary(dim: int, seed) -> np.ndarray:
    """Seeded Haar-ish random unitary via QR of a complex normal matrix."""
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def projector(psi: np.ndarray) -> np.ndarray:
    """|psi><psi| for a state vector."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    return np.outer(psi, psi.conj())


def fix_phase(psi: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Rotate a global phase so the first non-negligible amplitude is real positive."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    for a in psi:
        if abs(a) > tol:
            return psi * (abs(a) / a)
    return psi
