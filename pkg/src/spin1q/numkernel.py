"""Small dense eigenproblems solved by cyclic Jacobi rotations.

Everything here works on matrices of dimension at most 4: Bloch matrices,
spin-1 density matrices and two-qubit operators.  The routines are pure
functions of their inputs and return fresh arrays.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import InvalidInputError, NotPSDError

#: Absolute threshold below which a negative eigenvalue counts as rounding noise.
PSD_TOL = 1e-10

MAX_DIM = 4
_SYM_TOL = 1e-12
_OFF_RTOL = 1e-14
_MAX_SWEEPS = 60
_SIGN_TOL = 1e-12
_TINY = 1e-30
_ZERO_EIG = 64 * np.finfo(float).eps


class EigDecomposition(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def frobenius_norm(m) -> float:
    m = np.asarray(m)
    return float(np.sqrt(np.sum(np.abs(m) ** 2)))


def _check_square(m: np.ndarray, name: str) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidInputError(f"{name} must be square, got shape {m.shape}")
    if not 1 <= m.shape[0] <= MAX_DIM:
        raise InvalidInputError(f"{name} must have dimension 1..{MAX_DIM}, got {m.shape[0]}")
    if not np.all(np.isfinite(m)):
        raise InvalidInputError(f"{name} has non-finite entries")


def _check_hermitian(m: np.ndarray, name: str) -> None:
    asym = np.max(np.abs(m - m.conj().T))
    if asym > _SYM_TOL * max(1.0, frobenius_norm(m)):
        raise InvalidInputError(f"{name} is not Hermitian (asymmetry {asym:.3e})")


def _jacobi(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Diagonalize a Hermitian (or real symmetric) matrix in place.

    Each rotation zeroes one off-diagonal pair.  For complex input the pair is
    first made real by a diagonal phase, then a real Givens rotation follows.
    """
    n = a.shape[0]
    v = np.eye(n, dtype=a.dtype)
    scale = frobenius_norm(a)
    if scale == 0.0:
        return np.zeros(n), v
    offdiag = ~np.eye(n, dtype=bool)
    for _ in range(_MAX_SWEEPS):
        off = np.sqrt(np.sum(np.abs(a[offdiag]) ** 2))
        if off < _OFF_RTOL * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag < _TINY * scale:
                    a[p, q] = a[q, p] = 0.0
                    continue
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (aqq - app) / (2.0 * mag)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                u = np.conj(apq) / mag
                g = np.array([[c, s], [-s * u, c * u]], dtype=a.dtype)
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ g
    return np.diag(a).real.copy(), v


def _normalize_columns(vals: np.ndarray, vecs: np.ndarray) -> EigDecomposition:
    order = np.argsort(vals, kind="stable")
    vals = vals[order]
    vecs = vecs[:, order].copy()
    for k in range(vecs.shape[1]):
        col = vecs[:, k]
        col /= np.linalg.norm(col)
        lead = np.flatnonzero(np.abs(col) > _SIGN_TOL)[0]
        z = col[lead]
        col *= np.conj(z) / abs(z)
        col[lead] = abs(z)
    return EigDecomposition(vals, vecs)


def eigh_sym_real(m) -> EigDecomposition:
    """Eigendecomposition of a real symmetric matrix, eigenvalues ascending.

    Eigenvectors are the columns of the returned matrix; each is scaled so its
    first non-negligible component is positive, which makes the output
    deterministic.
    """
    m = np.asarray(m)
    if np.iscomplexobj(m):
        raise InvalidInputError("eigh_sym_real expects a real matrix")
    m = np.array(m, dtype=float)
    _check_square(m, "matrix")
    _check_hermitian(m, "matrix")
    a = 0.5 * (m + m.T)
    vals, vecs = _jacobi(a)
    return _normalize_columns(vals, vecs)


def eigh_hermitian(m) -> EigDecomposition:
    """Eigendecomposition of a complex Hermitian matrix, eigenvalues ascending."""
    m = np.array(m, dtype=complex)
    _check_square(m, "matrix")
    _check_hermitian(m, "matrix")
    a = 0.5 * (m + m.conj().T)
    vals, vecs = _jacobi(a)
    return _normalize_columns(vals, vecs)


def eigvalsh(m) -> np.ndarray:
    """Ascending eigenvalues of a real symmetric or complex Hermitian matrix."""
    m = np.asarray(m)
    if np.iscomplexobj(m):
        return eigh_hermitian(m).eigenvalues
    return eigh_sym_real(m).eigenvalues


def psd_sqrt(m, ref_scale: float = 0.0) -> np.ndarray:
    """Principal square root of a positive semi-definite Hermitian matrix.

    Eigenvalues in ``[-PSD_TOL, 0)`` are clamped to zero; anything more
    negative raises :class:`NotPSDError`.  Eigenvalues below ``64 eps`` times
    the spectral radius (or ``ref_scale``, if larger) are indistinguishable
    from zero and are zeroed too, so that projectors map to themselves instead
    of picking up ``sqrt(eps)`` noise.
    """
    m = np.asarray(m)
    dec = eigh_hermitian(m) if np.iscomplexobj(m) else eigh_sym_real(m)
    lo = dec.eigenvalues[0]
    if lo < -PSD_TOL:
        raise NotPSDError(f"matrix has eigenvalue {lo:.3e} < -{PSD_TOL:g}")
    vals = dec.eigenvalues.copy()
    vals[vals < _ZERO_EIG * max(abs(vals[0]), abs(vals[-1]), ref_scale)] = 0.0
    root = np.sqrt(vals)
    v = dec.eigenvectors
    r = (v * root) @ v.conj().T
    r = 0.5 * (r + r.conj().T)
    return r if np.iscomplexobj(m) else r.real
