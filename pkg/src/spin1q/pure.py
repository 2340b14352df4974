"""Exact quantumness of pure spin-1 states.

A pure state is characterised, up to rotation, by the angle between its two
Majorana points.  In the canonical frame its Bloch matrix depends on a single
parameter ``lam`` (the smallest Bloch eigenvalue, in ``[-1, 0]``) and both the
quantumness and the closest classical state are known in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConsistencyError, DomainError
from .numkernel import PSD_TOL, eigvalsh
from .states import (
    BlochMatrix,
    CoherentAngles,
    Decomposition,
    PureSpin1,
    Rotation3,
    as_density,
    bloch_from_density,
    pure_from_density,
    rotate_bloch,
)

SQRT3_8 = math.sqrt(3.0 / 8.0)
SQRT3_2 = math.sqrt(3.0) / 2.0
BRANCH_POINT = -0.5

_DEGENERATE_TOL = 1e-6
_ANTIPODAL_TOL = 1e-9
_LAMBDA_CHECK_TOL = 1e-8
_DOMAIN_SLACK = 1e-12
_CUBIC_RESIDUAL = 1e-14


@dataclass(frozen=True)
class MajoranaPair:
    p1: np.ndarray
    p2: np.ndarray
    degenerate: bool

    @property
    def angles(self) -> tuple[CoherentAngles, CoherentAngles]:
        return CoherentAngles.from_vector(self.p1), CoherentAngles.from_vector(self.p2)


@dataclass(frozen=True)
class CanonicalForm:
    """Canonical parameters of a pure state.

    ``rotation`` maps the original Majorana points onto ``(gamma, 0)`` and
    ``(pi - gamma, 0)``; applying it to the Bloch matrix of the state gives the
    canonical Bloch matrix :func:`canonical_bloch` of ``lam``.
    """

    gamma: float
    lam: float
    rotation: Rotation3


@dataclass(frozen=True)
class EllEvaluation:
    lam: float
    d_root: float
    ell: float
    h_aux: Optional[float] = None


@dataclass(frozen=True)
class ClosestClassical:
    """Closest classical state, as a Bloch matrix and an explicit mixture.

    ``branch`` is ``"steep"`` for ``lam <= -1/2``, ``"shallow"`` above, and
    ``"coherent"`` when the state is itself classical.
    """

    W: BlochMatrix
    decomposition: Decomposition
    branch: str


def _check_lambda(lam: float, lo: float, hi: float, what: str) -> float:
    lam = float(lam)
    if not (lo - _DOMAIN_SLACK <= lam <= hi + _DOMAIN_SLACK):
        raise DomainError(f"{what}: lambda = {lam!r} outside [{lo}, {hi}]")
    return min(max(lam, lo), hi)


def lambda_of_gamma(gamma: float) -> float:
    s2 = math.sin(gamma) ** 2
    return (s2 - 1.0) / (s2 + 1.0)


def canonical_state(gamma: float) -> PureSpin1:
    """The state with Majorana points at ``(gamma, 0)`` and ``(pi - gamma, 0)``."""
    s = math.sin(gamma)
    vec = np.array([s, math.sqrt(2.0), s], dtype=complex)
    return PureSpin1.from_vector(vec, normalize=True)


def canonical_bloch(lam: float) -> BlochMatrix:
    lam = _check_lambda(lam, -1.0, 0.0, "canonical_bloch")
    c = math.sqrt(1.0 - lam * lam)
    x = np.array(
        [
            [1.0, c, 0.0, 0.0],
            [c, 1.0, 0.0, 0.0],
            [0.0, 0.0, -lam, 0.0],
            [0.0, 0.0, 0.0, lam],
        ]
    )
    return BlochMatrix(x)


def _spinor_to_vector(a: complex, b: complex) -> np.ndarray:
    # (a, b) ~ z = a / b = cot(theta/2) e^{i phi}
    na, nb = abs(a) ** 2, abs(b) ** 2
    t = na + nb
    xy = 2.0 * a * np.conj(b) / t
    v = np.array([xy.real, xy.imag, (na - nb) / t])
    return v / np.linalg.norm(v)


def majorana_points(psi: PureSpin1) -> MajoranaPair:
    """The two Majorana points of a pure spin-1 state.

    The roots of ``d_plus - sqrt(2) d_zero z + d_minus z^2`` are found in
    homogeneous form, so a vanishing leading coefficient simply yields the
    point at infinity (``theta = 0``).
    """
    d1, d0, dm = psi.d_plus, psi.d_zero, psi.d_minus
    # A a^2 + B a b + C b^2 = 0 with z = a / b
    A, B, C = dm, -math.sqrt(2.0) * d0, d1
    sq = np.sqrt(complex(B * B - 4.0 * A * C))
    if (np.conj(B) * sq).real < 0.0:
        sq = -sq
    q = -0.5 * (B + sq)
    if q == 0:
        # B = 0 and A C = 0: a double root at 0 or at infinity
        r = (0.0, 1.0) if abs(A) >= abs(C) else (1.0, 0.0)
        roots = [r, r]
    else:
        roots = [(q, A), (C, q)]
    p1 = _spinor_to_vector(*roots[0])
    p2 = _spinor_to_vector(*roots[1])
    degenerate = bool(np.linalg.norm(p1 - p2) < _DEGENERATE_TOL)
    if degenerate:
        m = p1 + p2
        p1 = p2 = m / np.linalg.norm(m)
    return MajoranaPair(p1, p2, degenerate)


def _orthogonal_unit(u: np.ndarray, preference: tuple[int, int, int]) -> np.ndarray:
    """Unit vector orthogonal to ``u`` built from the coordinate axis least aligned with it."""
    mags = np.abs(u)
    k = min(preference, key=lambda i: (round(mags[i], 12), preference.index(i)))
    axis = np.zeros(3)
    axis[k] = 1.0
    v = axis - np.dot(axis, u) * u
    return v / np.linalg.norm(v)


def _positive_lead(v: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(v)))
    return v if v[k] > 0 else -v


def canonicalize(psi: PureSpin1) -> CanonicalForm:
    """Rotate a pure state into canonical position and read off ``lam``."""
    pair = majorana_points(psi)
    u1, u2 = pair.p1, pair.p2
    plus = np.linalg.norm(u1 + u2)
    minus = np.linalg.norm(u1 - u2)
    if pair.degenerate:
        ex = u1
        ez = _orthogonal_unit(ex, (2, 0, 1))
        gamma = math.pi / 2.0
    elif plus < _ANTIPODAL_TOL:
        ez = _positive_lead(u1)
        ex = _orthogonal_unit(ez, (0, 1, 2))
        gamma = 0.0
    else:
        ex = (u1 + u2) / plus
        ez = _positive_lead((u1 - u2) / minus)
        ez = ez - np.dot(ez, ex) * ex
        ez /= np.linalg.norm(ez)
        gamma = math.atan2(plus, minus)
    ey = np.cross(ez, ex)
    rotation = Rotation3(np.vstack([ex, ey, ez]))
    lam = lambda_of_gamma(gamma)

    x = rotate_bloch(bloch_from_density(psi.density()), rotation)
    lam_eig = eigvalsh(x.matrix)[0]
    if abs(lam_eig - lam) > _LAMBDA_CHECK_TOL:
        raise ConsistencyError(
            f"Majorana angle gives lambda = {lam:.15g}, Bloch spectrum gives {lam_eig:.15g}"
        )
    return CanonicalForm(gamma=gamma, lam=lam, rotation=rotation)


def _cubic(lam: float) -> float:
    """Real root in ``[sqrt(3)/2, 1]`` of ``sqrt(1 - lam^2) + y (1 + lam) - 2 y^3``.

    Newton from ``y = 1`` with a bisection fallback; the polynomial is strictly
    decreasing on the bracket.
    """
    s = math.sqrt(1.0 - lam * lam)
    a = 1.0 + lam
    lo, hi = SQRT3_2, 1.0
    y = 1.0
    for _ in range(200):
        py = s + a * y - 2.0 * y ** 3
        if abs(py) <= _CUBIC_RESIDUAL:
            break
        if py > 0.0:
            lo = y
        else:
            hi = y
        step = py / (a - 6.0 * y * y)
        y_new = y - step
        if not lo <= y_new <= hi:
            y_new = 0.5 * (lo + hi)
        if y_new == y:
            break
        y = y_new
    return y


def ell(lam: float) -> EllEvaluation:
    """Minimum of ``F(u, v, g)`` via the cubic root ``d``; valid for ``lam`` in ``[-1/2, 0]``.

    Returns ``ell = (1 - d^2)^2 + (lam + 1 - d^2)^2 + 2 (sqrt(1 - lam^2) - d)^2``.
    """
    lam = _check_lambda(lam, BRANCH_POINT, 0.0, "ell")
    d = _cubic(lam)
    u = d * d
    s = math.sqrt(1.0 - lam * lam)
    value = (1.0 - u) ** 2 + (lam + 1.0 - u) ** 2 + 2.0 * (s - d) ** 2
    return EllEvaluation(lam=lam, d_root=d, ell=value)


def ell_closed_form_parts(lam: float) -> EllEvaluation:
    """Radical expression for ``ell``, kept as an independent cross-check.

    Loses a few digits to cancellation close to ``lam = 0``.
    """
    lam = _check_lambda(lam, BRANCH_POINT, 0.0, "ell_closed_form")
    s = math.sqrt(1.0 - lam * lam)
    a = lam + 1.0
    h = 6.0 ** (1.0 / 3.0) * (9.0 * s + math.sqrt(3.0 * a * (25.0 - 31.0 * lam - 2.0 * lam * lam))) ** (1.0 / 3.0)
    value = (
        3.0 * h ** 5 * math.sqrt((1.0 - lam) / a ** 3)
        - 6.0 * h * h * (lam * lam - 52.0 * lam + 55.0) / a
        + h ** 4
        - 216.0 * h * s
        + 72.0 * (11.0 - 4.0 * lam * lam + 4.0 * lam)
    ) / 216.0
    return EllEvaluation(lam=lam, d_root=float("nan"), ell=value, h_aux=h)


def ell_closed_form(lam: float) -> float:
    return ell_closed_form_parts(lam).ell


def f_quantumness(lam: float) -> float:
    """Quantumness of a pure state whose smallest Bloch eigenvalue is ``lam``."""
    lam = _check_lambda(lam, -1.0, 0.0, "f_quantumness")
    if lam <= BRANCH_POINT:
        return -SQRT3_8 * lam
    return 0.5 * math.sqrt(lam * lam + ell(lam).ell)


def steep_parameters(lam: float) -> tuple[float, float]:
    """Weight ``w`` and azimuth ``beta`` of the three-atom closest state (``lam <= -1/2``)."""
    s = math.sqrt(1.0 - lam * lam)
    w = ((4.0 * lam + 2.0) * (1.0 - s) - lam * lam) / (17.0 * lam + 8.0)
    cb = (-s - 2.0 * lam - 1.0) / (2.0 * lam)
    beta = math.acos(min(1.0, max(-1.0, cb)))
    return w, beta


def ccs_canonical(lam: float) -> ClosestClassical:
    """Closest classical state to the canonical pure state with parameter ``lam``."""
    lam = _check_lambda(lam, -1.0, 0.0, "ccs_canonical")
    if lam >= 0.0:
        raise DomainError("lambda >= 0: the state is already classical")
    s = math.sqrt(1.0 - lam * lam)
    half_pi = math.pi / 2.0
    if lam <= BRANCH_POINT:
        w, beta = steep_parameters(lam)
        W = np.array(
            [
                [1.0, s, 0.0, 0.0],
                [s, 1.0 + lam / 2.0, 0.0, 0.0],
                [0.0, 0.0, -lam / 2.0, 0.0],
                [0.0, 0.0, 0.0, 0.0],
            ]
        )
        centre = max(0.0, 1.0 - 2.0 * w)
        weights = [centre, w, w]
        atoms = [CoherentAngles(half_pi, 0.0), CoherentAngles(half_pi, beta), CoherentAngles(half_pi, -beta)]
        keep = [i for i, x in enumerate(weights) if x > 0.0]
        decomposition = Decomposition(tuple(weights[i] for i in keep), tuple(atoms[i] for i in keep))
        branch = "steep"
    else:
        d = ell(lam).d_root
        beta = math.acos(d)
        W = np.array(
            [
                [1.0, d, 0.0, 0.0],
                [d, d * d, 0.0, 0.0],
                [0.0, 0.0, 1.0 - d * d, 0.0],
                [0.0, 0.0, 0.0, 0.0],
            ]
        )
        decomposition = Decomposition((0.5, 0.5), (CoherentAngles(half_pi, beta), CoherentAngles(half_pi, -beta)))
        branch = "shallow"
    return ClosestClassical(W=BlochMatrix(W), decomposition=decomposition, branch=branch)


def ccs_of_pure(psi: PureSpin1, classical_tol: float = PSD_TOL) -> ClosestClassical:
    """Closest classical state to an arbitrary pure state.

    A coherent input (``lam >= -classical_tol``) is returned as its own closest
    classical state with branch ``"coherent"``.
    """
    canon = canonicalize(psi)
    if canon.lam >= -classical_tol:
        x = bloch_from_density(psi.density())
        atom = CoherentAngles.from_vector(x.matrix[0, 1:])
        return ClosestClassical(W=x, decomposition=Decomposition((1.0,), (atom,)), branch="coherent")
    cc = ccs_canonical(canon.lam)
    back = canon.rotation.inverse()
    return ClosestClassical(
        W=rotate_bloch(cc.W, back),
        decomposition=cc.decomposition.rotated(back),
        branch=cc.branch,
    )


def pure_lambda(psi: PureSpin1) -> float:
    return float(eigvalsh(bloch_from_density(psi.density()).matrix)[0])


def appendix_oracle_F_min(lam: float, grid_n: int = 500, zoom_rounds: int = 12) -> float:
    """Brute-force minimum of ``F(u, v, g) = (1-u)^2 + (lam+v)^2 + 2 (sqrt(1-lam^2) - g)^2``.

    The feasible set is ``u, v >= 0``, ``u + v <= 1`` and ``|g| <= sqrt(u)``.
    For fixed ``u`` the optimal ``g`` is the clamp of ``sqrt(1 - lam^2)`` onto
    ``[-sqrt(u), sqrt(u)]``; the remaining two variables are searched on a
    grid that is repeatedly zoomed around the incumbent.
    """
    lam = _check_lambda(lam, BRANCH_POINT, 0.0, "appendix_oracle_F_min")
    if grid_n < 200:
        raise DomainError("grid_n must be at least 200")
    s = math.sqrt(1.0 - lam * lam)

    def evaluate(u, v):
        g = np.minimum(s, np.sqrt(u))
        return (1.0 - u) ** 2 + (lam + v) ** 2 + 2.0 * (s - g) ** 2

    u_lo, u_hi, v_lo, v_hi = 0.0, 1.0, 0.0, 1.0
    best = math.inf
    for _ in range(zoom_rounds + 1):
        uu, vv = np.meshgrid(np.linspace(u_lo, u_hi, grid_n + 1), np.linspace(v_lo, v_hi, grid_n + 1), indexing="ij")
        feasible = uu + vv <= 1.0
        vals = np.where(feasible, evaluate(uu, vv), np.inf)
        k = np.unravel_index(np.argmin(vals), vals.shape)
        best = min(best, float(vals[k]))
        ub, vb = float(uu[k]), float(vv[k])
        du = 4.0 * (u_hi - u_lo) / grid_n
        dv = 4.0 * (v_hi - v_lo) / grid_n
        u_lo, u_hi = max(0.0, ub - du), min(1.0, ub + du)
        v_lo, v_hi = max(0.0, vb - dv), min(1.0, vb + dv)
    return best


def pure_quantumness(psi: PureSpin1) -> float:
    """``f`` evaluated at the smallest Bloch eigenvalue of ``psi``; 0 for coherent states."""
    lam = pure_lambda(psi)
    if lam >= -PSD_TOL:
        return 0.0
    return f_quantumness(lam)


def as_pure(state) -> PureSpin1:
    if isinstance(state, PureSpin1):
        return state
    return pure_from_density(as_density(state))
