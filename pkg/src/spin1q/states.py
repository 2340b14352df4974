"""Spin-1 states in the density-matrix and Bloch-matrix pictures.

Basis ordering is ``(|1,1>, |1,0>, |1,-1>)`` throughout.  The angular momentum
matrices use hbar = 1 and the phase convention in which the coherent state

    |theta, phi> = cos^2(t/2)|1,1> + sqrt(2) cos(t/2) sin(t/2) e^{-i phi}|1,0>
                   + sin^2(t/2) e^{-2i phi}|1,-1>

has Bloch vector ``(sin t cos phi, sin t sin phi, cos t)``.  With the
e^{-i phi} phase this fixes ``J_y = i (J_+ - J_-) / 2``.

The Bloch matrix is ``X[mu, nu] = tr(rho S[mu, nu])`` with ``S[0, 0] = 1``,
``S[0, a] = S[a, 0] = J_a`` and ``S[a, b] = J_a J_b + J_b J_a - delta_ab``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidInputError, NotPSDError
from .numkernel import PSD_TOL, eigh_hermitian, eigvalsh, frobenius_norm

STATE_TOL = 1e-12
WEIGHT_TOL = 1e-10
SQRT2 = math.sqrt(2.0)

_JP = SQRT2 * np.array([[0, 1, 0], [0, 0, 1], [0, 0, 0]], dtype=complex)
_JM = _JP.T.copy()
JX = 0.5 * (_JP + _JM)
JY = 0.5j * (_JP - _JM)
JZ = np.diag([1.0, 0.0, -1.0]).astype(complex)
SPIN_MATRICES = (JX, JY, JZ)


def _tensor_basis() -> np.ndarray:
    eye = np.eye(3, dtype=complex)
    s = np.zeros((4, 4, 3, 3), dtype=complex)
    s[0, 0] = eye
    for a, ja in enumerate(SPIN_MATRICES, start=1):
        s[0, a] = s[a, 0] = ja
        for b, jb in enumerate(SPIN_MATRICES, start=1):
            s[a, b] = ja @ jb + jb @ ja - (a == b) * eye
    for m in s.reshape(16, 3, 3):
        m.setflags(write=False)
    s.setflags(write=False)
    return s


#: The 16 operators S[mu, nu] spanning the Bloch expansion.
TENSOR_BASIS = _tensor_basis()


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a)
    a.setflags(write=False)
    return a


class DensityMatrix:
    """A 3x3 spin-1 density matrix.

    Parameters
    ----------
    matrix : array_like
        3x3 complex matrix in the basis ``(|1,1>, |1,0>, |1,-1>)``.
    check_psd : bool
        Reject matrices with an eigenvalue below ``-PSD_TOL``.  Switch off to
        hold the image of a synthetic Bloch matrix that may leave state space.
    """

    __slots__ = ("matrix",)

    def __init__(self, matrix, *, check_psd: bool = True):
        m = np.array(matrix, dtype=complex)
        if m.shape != (3, 3):
            raise InvalidInputError(f"density matrix must be 3x3, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise InvalidInputError("density matrix has non-finite entries")
        asym = np.max(np.abs(m - m.conj().T))
        if asym > STATE_TOL:
            raise InvalidInputError(f"density matrix is not Hermitian (asymmetry {asym:.3e})")
        tr = np.trace(m).real
        if abs(tr - 1.0) > STATE_TOL:
            raise InvalidInputError(f"density matrix trace is {tr:.15g}, expected 1")
        m = 0.5 * (m + m.conj().T)
        if check_psd:
            lo = eigvalsh(m)[0]
            if lo < -PSD_TOL:
                raise NotPSDError(f"density matrix has eigenvalue {lo:.3e}")
        object.__setattr__(self, "matrix", _frozen(m))

    def __setattr__(self, name, value):
        raise AttributeError("DensityMatrix is immutable")

    def __repr__(self) -> str:
        return f"DensityMatrix({np.array2string(self.matrix, precision=6)})"

    def __eq__(self, other) -> bool:
        return isinstance(other, DensityMatrix) and np.array_equal(self.matrix, other.matrix)

    __hash__ = None

    @classmethod
    def from_pure(cls, psi: "PureSpin1") -> "DensityMatrix":
        d = psi.amplitudes
        return cls(np.outer(d, d.conj()))

    @classmethod
    def maximally_mixed(cls) -> "DensityMatrix":
        return cls(np.eye(3) / 3.0)

    @property
    def purity(self) -> float:
        return float(np.sum(np.abs(self.matrix) ** 2))

    @property
    def is_psd(self) -> bool:
        return bool(eigvalsh(self.matrix)[0] >= -PSD_TOL)


@dataclass(frozen=True)
class PureSpin1:
    """Normalized amplitudes ``(d_plus, d_zero, d_minus)`` of a pure spin-1 state."""

    d_plus: complex
    d_zero: complex
    d_minus: complex

    def __post_init__(self):
        vals = [complex(x) for x in (self.d_plus, self.d_zero, self.d_minus)]
        if not all(np.isfinite(v) for v in vals):
            raise InvalidInputError("amplitudes must be finite")
        norm2 = sum(abs(v) ** 2 for v in vals)
        if abs(norm2 - 1.0) > STATE_TOL:
            raise InvalidInputError(f"amplitudes have squared norm {norm2:.15g}, expected 1")
        for name, v in zip(("d_plus", "d_zero", "d_minus"), vals):
            object.__setattr__(self, name, v)

    @classmethod
    def from_vector(cls, vec: Sequence[complex], normalize: bool = False) -> "PureSpin1":
        v = np.asarray(vec, dtype=complex).reshape(-1)
        if v.shape != (3,):
            raise InvalidInputError(f"pure state needs 3 amplitudes, got {v.size}")
        if normalize:
            nrm = np.linalg.norm(v)
            if nrm == 0.0 or not np.isfinite(nrm):
                raise InvalidInputError("cannot normalize a zero or non-finite vector")
            v = v / nrm
        return cls(*v)

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([self.d_plus, self.d_zero, self.d_minus])

    def density(self) -> DensityMatrix:
        return DensityMatrix.from_pure(self)


@dataclass(frozen=True)
class CoherentAngles:
    """Direction ``(theta, phi)`` of a spin coherent state.

    ``theta`` is clamped to ``[0, pi]`` and ``phi`` wrapped to ``[0, 2 pi)``.
    """

    theta: float
    phi: float

    def __post_init__(self):
        theta, phi = float(self.theta), float(self.phi)
        if not (math.isfinite(theta) and math.isfinite(phi)):
            raise InvalidInputError("angles must be finite")
        theta = min(max(theta, 0.0), math.pi)
        phi = math.fmod(phi, 2.0 * math.pi)
        if phi < 0.0:
            phi += 2.0 * math.pi
        if phi >= 2.0 * math.pi:
            phi = 0.0
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)

    @classmethod
    def from_vector(cls, n: Sequence[float]) -> "CoherentAngles":
        x, y, z = (float(c) for c in n)
        r = math.sqrt(x * x + y * y + z * z)
        if r == 0.0:
            raise InvalidInputError("direction vector must be non-zero")
        return cls(math.atan2(math.hypot(x, y), z), math.atan2(y, x))

    @property
    def unit_vector(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)])


class Rotation3:
    """A proper rotation of three-dimensional space."""

    __slots__ = ("matrix",)

    def __init__(self, matrix):
        r = np.array(matrix, dtype=float)
        if r.shape != (3, 3) or not np.all(np.isfinite(r)):
            raise InvalidInputError("rotation must be a finite 3x3 matrix")
        if np.max(np.abs(r.T @ r - np.eye(3))) > STATE_TOL:
            raise InvalidInputError("rotation matrix is not orthogonal")
        if abs(np.linalg.det(r) - 1.0) > STATE_TOL:
            raise InvalidInputError("rotation matrix has determinant != +1")
        object.__setattr__(self, "matrix", _frozen(r))

    def __setattr__(self, name, value):
        raise AttributeError("Rotation3 is immutable")

    def __repr__(self) -> str:
        return f"Rotation3({np.array2string(self.matrix, precision=6)})"

    @classmethod
    def identity(cls) -> "Rotation3":
        return cls(np.eye(3))

    @classmethod
    def about_axis(cls, axis: Sequence[float], angle: float) -> "Rotation3":
        k = np.asarray(axis, dtype=float)
        k = k / np.linalg.norm(k)
        kx = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
        r = np.eye(3) + math.sin(angle) * kx + (1 - math.cos(angle)) * (kx @ kx)
        return cls(r)

    def inverse(self) -> "Rotation3":
        return Rotation3(self.matrix.T)

    def apply(self, n) -> np.ndarray:
        return self.matrix @ np.asarray(n, dtype=float)

    def __matmul__(self, other: "Rotation3") -> "Rotation3":
        return Rotation3(self.matrix @ other.matrix)


class BlochMatrix:
    """The 4x4 real symmetric trace-2 tensor representation of a spin-1 state.

    Index 0 is the identity slot; ``X[0, 0]`` is set to exactly 1.
    """

    __slots__ = ("matrix",)

    def __init__(self, matrix):
        x = np.array(matrix, dtype=float)
        if x.shape != (4, 4) or not np.all(np.isfinite(x)):
            raise InvalidInputError("Bloch matrix must be a finite 4x4 real matrix")
        if np.max(np.abs(x - x.T)) > STATE_TOL:
            raise InvalidInputError("Bloch matrix is not symmetric")
        if abs(x[0, 0] - 1.0) > STATE_TOL:
            raise InvalidInputError(f"Bloch matrix has X[0,0] = {x[0, 0]:.15g}, expected 1")
        tr = np.trace(x)
        if abs(tr - 2.0) > STATE_TOL:
            raise InvalidInputError(f"Bloch matrix trace is {tr:.15g}, expected 2")
        x = 0.5 * (x + x.T)
        x[0, 0] = 1.0
        object.__setattr__(self, "matrix", _frozen(x))

    def __setattr__(self, name, value):
        raise AttributeError("BlochMatrix is immutable")

    def __repr__(self) -> str:
        return f"BlochMatrix({np.array2string(self.matrix, precision=6)})"

    @classmethod
    def coherent(cls, angles: CoherentAngles) -> "BlochMatrix":
        n = np.concatenate([[1.0], angles.unit_vector])
        return cls(np.outer(n, n))

    @property
    def eigenvalues(self) -> np.ndarray:
        return eigvalsh(self.matrix)


@dataclass(frozen=True)
class Decomposition:
    """A finite mixture of coherent states, the certificate of classicality."""

    weights: tuple[float, ...]
    atoms: tuple[CoherentAngles, ...]

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        atoms = tuple(self.atoms)
        if len(w) != len(atoms) or not w:
            raise InvalidInputError("weights and atoms must be non-empty and equally long")
        if min(w) < 0.0:
            raise InvalidInputError("weights must be non-negative")
        if abs(sum(w) - 1.0) > WEIGHT_TOL:
            raise InvalidInputError(f"weights sum to {sum(w):.15g}, expected 1")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "atoms", atoms)

    def __len__(self) -> int:
        return len(self.weights)

    @property
    def directions(self) -> np.ndarray:
        return np.array([a.unit_vector for a in self.atoms])

    def bloch(self) -> BlochMatrix:
        n = np.hstack([np.ones((len(self), 1)), self.directions])
        w = np.asarray(self.weights)
        x = (n.T * w) @ n
        x[0, 0] = 1.0
        return BlochMatrix(x)

    def density(self) -> DensityMatrix:
        amps = np.array([coherent_amplitudes(a).amplitudes for a in self.atoms])
        w = np.asarray(self.weights)
        m = (amps.T * w) @ amps.conj()
        return DensityMatrix(m / np.trace(m).real)

    def rotated(self, rotation: Rotation3) -> "Decomposition":
        atoms = tuple(CoherentAngles.from_vector(rotation.apply(a.unit_vector)) for a in self.atoms)
        return Decomposition(self.weights, atoms)


def as_density(rho) -> DensityMatrix:
    if isinstance(rho, DensityMatrix):
        return rho
    if isinstance(rho, PureSpin1):
        return rho.density()
    return DensityMatrix(rho)


def as_bloch(x) -> BlochMatrix:
    return x if isinstance(x, BlochMatrix) else BlochMatrix(x)


def coherent_amplitudes(angles: CoherentAngles) -> PureSpin1:
    """Amplitudes of the spin-1 coherent state pointing along ``angles``."""
    c = math.cos(angles.theta / 2.0)
    s = math.sin(angles.theta / 2.0)
    ph = np.exp(-1j * angles.phi)
    vec = np.array([c * c, SQRT2 * c * s * ph, s * s * ph * ph])
    return PureSpin1.from_vector(vec / np.linalg.norm(vec))


def coherent_amplitudes_array(theta, phi) -> np.ndarray:
    """Vectorized coherent amplitudes, shape ``theta.shape + (3,)``."""
    theta = np.asarray(theta, dtype=float)
    ph = np.exp(-1j * np.asarray(phi, dtype=float))
    c = np.cos(theta / 2.0)
    s = np.sin(theta / 2.0)
    return np.stack([c * c + 0j, SQRT2 * c * s * ph, s * s * ph * ph], axis=-1)


def bloch_from_density(rho) -> BlochMatrix:
    """Bloch matrix ``X[mu, nu] = tr(rho S[mu, nu])`` of a density matrix."""
    m = as_density(rho).matrix
    x = np.einsum("ij,mnji->mn", m, TENSOR_BASIS).real
    return BlochMatrix(x)


def density_from_bloch(x) -> DensityMatrix:
    """Invert :func:`bloch_from_density`: ``rho = 1/4 sum X[mu,nu] S[mu,nu]``.

    Positivity is not checked; use :attr:`DensityMatrix.is_psd` when ``x`` is
    synthetic.
    """
    xm = as_bloch(x).matrix
    m = 0.25 * np.einsum("mn,mnij->ij", xm, TENSOR_BASIS)
    return DensityMatrix(m, check_psd=False)


def rotate_bloch(x, rotation: Rotation3) -> BlochMatrix:
    """Rotate a Bloch matrix: ``X' = (1 + R) X (1 + R)^T``."""
    if not isinstance(rotation, Rotation3):
        rotation = Rotation3(rotation)
    full = np.eye(4)
    full[1:, 1:] = rotation.matrix
    return BlochMatrix(full @ as_bloch(x).matrix @ full.T)


def hs_distance(rho1, rho2) -> float:
    """Hilbert-Schmidt distance ``sqrt(tr((rho1 - rho2)^2))``."""
    d = as_density(rho1).matrix - as_density(rho2).matrix
    return frobenius_norm(d)


def bloch_distance(x1, x2) -> float:
    """Half the Frobenius distance of two Bloch matrices (equals :func:`hs_distance`)."""
    return 0.5 * frobenius_norm(as_bloch(x1).matrix - as_bloch(x2).matrix)


def random_rotation(rng: np.random.Generator) -> Rotation3:
    """Haar-random proper rotation from a QR factorization of a Gaussian matrix."""
    q, r = np.linalg.qr(rng.standard_normal((3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return Rotation3(q)


def coherent_overlap(a: CoherentAngles, b: CoherentAngles) -> float:
    """``|<a|b>|^2 = ((1 + n_a . n_b) / 2)^2``."""
    c = float(np.dot(a.unit_vector, b.unit_vector))
    return ((1.0 + c) / 2.0) ** 2


def mixture_density(weights: Iterable[float], atoms: Iterable[CoherentAngles]) -> DensityMatrix:
    return Decomposition(tuple(weights), tuple(atoms)).density()


def pure_from_density(rho, tol: float = 1e-10) -> PureSpin1:
    """Dominant eigenvector of a (numerically) pure density matrix."""
    rho = as_density(rho)
    if rho.purity < 1.0 - tol:
        raise InvalidInputError(f"state is not pure (purity {rho.purity:.15g})")
    dec = eigh_hermitian(rho.matrix)
    return PureSpin1.from_vector(dec.eigenvectors[:, -1], normalize=True)
