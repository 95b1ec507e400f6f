"""Canonical three-qubit states and their analytically known reductions.

Amplitude vectors use the basis order |000> ... |111> with qubit 1 as the
leftmost (most significant) bit.  Global phases are fixed so the first
nonzero amplitude is real positive.
"""

from __future__ import annotations

import numpy as np

from .qmat import partial_trace, projector

SQRT2 = np.sqrt(2.0)
SQRT3 = np.sqrt(3.0)


def ghz() -> np.ndarray:
    """(|000> + |111>)/sqrt(2)."""
    v = np.zeros(8, dtype=complex)
    v[0] = v[7] = 1 / SQRT2
    return v


def w() -> np.ndarray:
    """(|001> + |010> + |100>)/sqrt(3)."""
    v = np.zeros(8, dtype=complex)
    v[1] = v[2] = v[4] = 1 / SQRT3
    return v


def wbar() -> np.ndarray:
    """Spin-flipped W state (|011> + |101> + |110>)/sqrt(3)."""
    v = np.zeros(8, dtype=complex)
    v[3] = v[5] = v[6] = 1 / SQRT3
    return v


def star() -> np.ndarray:
    """(|000> + |001> + |101> + |111>)/2; qubit 1 is the central qubit."""
    v = np.zeros(8, dtype=complex)
    v[0b000] = v[0b001] = v[0b101] = v[0b111] = 0.5
    return v


def tfi_ground(phi: float) -> np.ndarray:
    """Symmetric transverse-field Ising ground-state ansatz.

    sin(phi)|000> + cos(phi)/sqrt(3) (|011> + |101> + |110>); equals the
    wbar state at phi = 0 and the product state |000> at phi = pi/2.  The
    mixing angle for a given field ratio is extracted numerically in
    ``spinchain.fit_tfi_angle``.
    """
    v = np.zeros(8, dtype=complex)
    v[0] = np.sin(phi)
    v[3] = v[5] = v[6] = np.cos(phi) / SQRT3
    return v


def star_reduced(pair: int) -> np.ndarray:
    """Two-qubit reduction of the star state, pair in {12, 13}.

    Exact spectral form: weights (2 +/- sqrt 2)/4 on
        |s12+-> = (|00> +/- |1+>)/sqrt(2),
        |s13+-> = (|0+> +/- |11>)/sqrt(2),
    with |+> = (|0> + |1>)/sqrt(2).  Note the factor order in |s12+->:
    qubit 2 carries the |+> component (the swapped form (|00> +/- |+1>)/
    sqrt(2) does not reproduce the partial trace, which is the ground
    truth here; the test suite checks both pairs entry-wise against it).
    """
    plus = np.array([1.0, 1.0], dtype=complex) / SQRT2
    zero = np.array([1.0, 0.0], dtype=complex)
    one = np.array([0.0, 1.0], dtype=complex)
    if pair == 12:
        s_main, s_side = np.kron(zero, zero), np.kron(one, plus)
    elif pair == 13:
        s_main, s_side = np.kron(zero, plus), np.kron(one, one)
    else:
        raise ValueError(f"pair must be 12 or 13, got {pair}")
    s_plus = (s_main + s_side) / SQRT2
    s_minus = (s_main - s_side) / SQRT2
    w_plus, w_minus = (2 + SQRT2) / 4, (2 - SQRT2) / 4
    return w_plus * projector(s_plus) + w_minus * projector(s_minus)


def w_reduced() -> np.ndarray:
    """Two-qubit reduction of the W state (any pair; all are equal).

    (1/3)|00><00| + (2/3)|psi+><psi+| with |psi+> = (|01> + |10>)/sqrt(2).
    The entangled component is the triplet |psi+>, not (|00> + |11>)/
    sqrt(2): the trace of W carries no |11> weight at all.
    """
    psi_plus = np.zeros(4, dtype=complex)
    psi_plus[1] = psi_plus[2] = 1 / SQRT2
    ket00 = np.zeros(4, dtype=complex)
    ket00[0] = 1.0
    return projector(ket00) / 3 + 2 * projector(psi_plus) / 3


def tfi_reduced_eigensystem(phi: float) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-weights and eigenvectors of Tr_3 |psi_TFI(phi)><psi_TFI(phi)|.

    Returns ``(weights, vectors)`` with ``vectors[:, i]`` the eigenvector of
    ``weights[i]``:  w1 = sin^2 phi + cos^2 phi / 3 on the partially
    entangled sin(phi)|00> + cos(phi)/sqrt(3)|11> (normalized), and
    w2 = 2 cos^2 phi / 3 on the maximally entangled (|01> + |10>)/sqrt(2).
    """
    s, c = np.sin(phi), np.cos(phi)
    w1 = s * s + c * c / 3
    w2 = 2 * c * c / 3
    v1 = np.zeros(4, dtype=complex)
    if w1 > 0:
        v1[0], v1[3] = s, c / SQRT3
        v1 /= np.linalg.norm(v1)
    v2 = np.zeros(4, dtype=complex)
    v2[1] = v2[2] = 1 / SQRT2
    return np.array([w1, w2]), np.column_stack([v1, v2])


def reduced_pair(psi: np.ndarray, pair: int) -> np.ndarray:
    """Partial trace of a three-qubit pure state onto a qubit pair {12, 13, 23}."""
    keep = {12: (0, 1), 13: (0, 2), 23: (1, 2)}[pair]
    return partial_trace(projector(psi), [2, 2, 2], keep)
