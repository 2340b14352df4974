"""Classicality and its two-qubit counterpart, symmetric separability.

A spin-1 state is identified with a symmetric two-qubit state through
``|1,1> = |uu>``, ``|1,0> = (|ud> + |du>)/sqrt(2)``, ``|1,-1> = |dd>``.  Its
partial transpose is the Bloch matrix written in another basis, so
classicality, PPT and separability coincide.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, NotPSDError
from .numkernel import PSD_TOL, eigh_hermitian, eigh_sym_real, psd_sqrt
from .states import as_bloch, as_density, bloch_from_density

_S = 1.0 / math.sqrt(2.0)

#: Unitary taking the Bloch matrix to the partial transpose: rho^PT = R X R^dagger / 2.
PPT_BASIS = _S * np.array(
    [
        [1, 0, 0, 1],
        [0, 1, -1j, 0],
        [0, 1, 1j, 0],
        [1, 0, 0, -1],
    ]
)
PPT_BASIS.setflags(write=False)

#: Columns are the Dicke states D0, D1, D2 in the basis (uu, ud, du, dd).
DICKE_ISOMETRY = np.array(
    [
        [1.0, 0.0, 0.0],
        [0.0, _S, 0.0],
        [0.0, _S, 0.0],
        [0.0, 0.0, 1.0],
    ]
)
DICKE_ISOMETRY.setflags(write=False)

SINGLET = np.array([0.0, _S, -_S, 0.0])
_SIGMA_YY = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))


@dataclass(frozen=True)
class ClassicalityVerdict:
    lambda_min: float
    classical: bool
    witness: np.ndarray
    boundary: bool


def _check_two_qubit(rho) -> np.ndarray:
    m = np.array(rho, dtype=complex)
    if m.shape != (4, 4) or not np.all(np.isfinite(m)):
        raise InvalidInputError("two-qubit state must be a finite 4x4 matrix")
    if np.max(np.abs(m - m.conj().T)) > PSD_TOL:
        raise InvalidInputError("two-qubit state is not Hermitian")
    if abs(np.trace(m).real - 1.0) > PSD_TOL:
        raise InvalidInputError("two-qubit state does not have unit trace")
    return 0.5 * (m + m.conj().T)


def min_bloch_eig(rho) -> float:
    """Smallest eigenvalue of the Bloch matrix; negative exactly for non-classical states."""
    return float(bloch_from_density(rho).eigenvalues[0])


def is_classical(rho, tol: float = PSD_TOL) -> ClassicalityVerdict:
    """Decide classicality from positivity of the Bloch matrix.

    States with ``|lambda_min| <= tol`` are reported classical with the
    ``boundary`` flag set.
    """
    dec = eigh_sym_real(bloch_from_density(rho).matrix)
    lam = float(dec.eigenvalues[0])
    return ClassicalityVerdict(
        lambda_min=lam,
        classical=lam >= -tol,
        witness=dec.eigenvectors[:, 0],
        boundary=abs(lam) <= tol,
    )


def ppt_from_bloch(x) -> np.ndarray:
    """Partial transpose of the embedded two-qubit state, ``R X R^dagger / 2``.

    Hermitian with unit trace but not necessarily positive.
    """
    xm = as_bloch(x).matrix
    m = 0.5 * (PPT_BASIS @ xm @ PPT_BASIS.conj().T)
    return 0.5 * (m + m.conj().T)


def dicke_embed(rho) -> np.ndarray:
    """Symmetric two-qubit state ``E rho E^T`` in the basis (uu, ud, du, dd)."""
    m = as_density(rho).matrix
    return DICKE_ISOMETRY @ m @ DICKE_ISOMETRY.T


def partial_transpose(rho_2q, qubit: int = 0) -> np.ndarray:
    """Transpose one factor of a two-qubit operator (``qubit`` 0 or 1)."""
    t = np.asarray(rho_2q).reshape(2, 2, 2, 2)
    if qubit == 0:
        t = t.transpose(2, 1, 0, 3)
    elif qubit == 1:
        t = t.transpose(0, 3, 2, 1)
    else:
        raise InvalidInputError("qubit must be 0 or 1")
    return t.reshape(4, 4)


def negativity(rho) -> float:
    """``sum(|mu| - mu) / 2`` over the partial-transpose spectrum of the embedded state."""
    pt = partial_transpose(dicke_embed(rho))
    mu = eigh_hermitian(pt).eigenvalues
    return float(np.sum(np.abs(mu) - mu) / 2.0)


def spin_flip(rho_2q) -> np.ndarray:
    return _SIGMA_YY @ np.conj(rho_2q) @ _SIGMA_YY


def concurrence(rho_2q) -> float:
    """Wootters concurrence of a two-qubit state.

    The ``tau_i`` are the eigenvalues of ``sqrt(sqrt(rho) rho~ sqrt(rho))``.
    Since ``sqrt(rho) rho~ sqrt(rho) = B B^dagger`` with
    ``B = sqrt(rho) (sigma_y x sigma_y) conj(sqrt(rho))``, they are the singular
    values of ``B``, which keeps small ``tau`` accurate to rounding instead of
    to its square root.
    """
    m = _check_two_qubit(rho_2q)
    try:
        root = psd_sqrt(m, ref_scale=1.0)
    except NotPSDError as exc:
        raise InvalidInputError(f"two-qubit state is not positive: {exc}") from exc
    tau = np.linalg.svd(root @ _SIGMA_YY @ root.conj(), compute_uv=False)
    return float(max(0.0, tau[0] - tau[1] - tau[2] - tau[3]))


def spin1_concurrence(rho) -> float:
    return concurrence(dicke_embed(rho))
