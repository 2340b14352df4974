"""Quantumness of arbitrary states as a distance to the coherent-state hull.

The classical states form the convex hull of the coherent projectors.  For a
finite sample of atoms the nearest hull point is the solution of a quadratic
program over the probability simplex,

    minimize  w^T G w - 2 b^T w + tr(rho^2),   w >= 0,  sum(w) = 1,

with ``G[i, j] = |<a_i|a_j>|^2`` and ``b[i] = <a_i|rho|a_i>``.  Sampling only
restricts the feasible set, so the estimate never undershoots the true value.
:func:`refine` moves and augments the support atoms to close that gap.

Hermitian 3x3 matrices are handled through a 9-component real feature vector
``phi(A)`` with ``tr(A B) = phi(A) . phi(B)``, so ``G = F F^T`` for the feature
rows ``F`` of the atoms and all solver work happens in 9 dimensions.
"""

from __future__ import annotations

import functools
import json
import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import minimize

from .ensembles import PURPOSE_ATOMS, PURPOSE_REFINE, RngStream
from .errors import DomainError, InvalidInputError
from .numkernel import PSD_TOL
from .pure import ccs_of_pure, f_quantumness, pure_lambda
from .states import (
    SQRT2,
    CoherentAngles,
    Decomposition,
    DensityMatrix,
    PureSpin1,
    as_density,
    bloch_from_density,
    hs_distance,
    pure_from_density,
    random_rotation,
)

logger = logging.getLogger(__name__)

ATOM_STRATEGIES = ("uniform_random", "fibonacci")
QP_METHODS = ("active_set", "apg")
MIN_ATOMS = 4
PRUNE_TOL = 1e-12
CLASSICAL_TOL = 1e-10
PURITY_TOL = 1e-10
DEFAULT_ATOMS = 1024
DEFAULT_REFINE_ROUNDS = 2
DEFAULT_TOL = 1e-9
#: Excess over f(lambda) above which a QP value is logged as a bound violation.
REPORT_TOL = 1e-5

_GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))
_WOLFE_EPS = 1e-15
_WOLFE_POS = 1e-14
_POWER_ITERS = 200
_JITTER_SCALES = (3e-2, 3e-3, 3e-4)
_JITTER_PER_SCALE = 6
_POLISH_ITERS = 2000


# ---------------------------------------------------------------------------
# features and atom sets


def hermitian_features(m) -> np.ndarray:
    """Real feature vectors of Hermitian 3x3 matrices, shape ``m.shape[:-2] + (9,)``."""
    m = np.asarray(m)
    return np.stack(
        [
            m[..., 0, 0].real,
            m[..., 1, 1].real,
            m[..., 2, 2].real,
            SQRT2 * m[..., 0, 1].real,
            SQRT2 * m[..., 0, 1].imag,
            SQRT2 * m[..., 0, 2].real,
            SQRT2 * m[..., 0, 2].imag,
            SQRT2 * m[..., 1, 2].real,
            SQRT2 * m[..., 1, 2].imag,
        ],
        axis=-1,
    )


def projector_features(vectors) -> np.ndarray:
    """Features of coherent projectors directly from unit vectors ``(..., 3)``.

    The projector entries are quadratic in ``n``:
    ``P00 = (1+z)^2/4``, ``P11 = (1-z^2)/2``, ``P22 = (1-z)^2/4``,
    ``P01 = (1+z)(x+iy)/(2 sqrt 2)``, ``P02 = (x+iy)^2/4``,
    ``P12 = (1-z)(x+iy)/(2 sqrt 2)``.
    """
    n = np.asarray(vectors, dtype=float)
    x, y, z = n[..., 0], n[..., 1], n[..., 2]
    return np.stack(
        [
            0.25 * (1.0 + z) ** 2,
            0.5 * (1.0 - z * z),
            0.25 * (1.0 - z) ** 2,
            0.5 * (1.0 + z) * x,
            0.5 * (1.0 + z) * y,
            0.25 * SQRT2 * (x * x - y * y),
            0.5 * SQRT2 * x * y,
            0.5 * (1.0 - z) * x,
            0.5 * (1.0 - z) * y,
        ],
        axis=-1,
    )


def _unit_rows(v: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(v, axis=1)
    if np.any(norms == 0.0) or not np.all(np.isfinite(norms)):
        raise InvalidInputError("atom directions must be finite and non-zero")
    return v / norms[:, None]


class CoherentAtomSet:
    """A non-empty, immutable set of coherent-state directions.

    Unit vectors and projector features are computed once at construction.

    Parameters
    ----------
    vectors : array_like, shape (n, 3)
        Directions; rows are normalized.
    seed, strategy
        Provenance metadata from :func:`sample_atoms` (``None`` and
        ``"explicit"`` for hand-built sets).
    """

    __slots__ = ("vectors", "features", "seed", "strategy")

    def __init__(self, vectors, seed: int | None = None, strategy: str = "explicit"):
        v = np.array(vectors, dtype=float)
        if v.ndim != 2 or v.shape[1] != 3 or v.shape[0] == 0:
            raise InvalidInputError("atom set needs a non-empty (n, 3) array of directions")
        v = _unit_rows(v)
        feats = projector_features(v)
        v.setflags(write=False)
        feats.setflags(write=False)
        object.__setattr__(self, "vectors", v)
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "seed", seed)
        object.__setattr__(self, "strategy", strategy)

    def __setattr__(self, name, value):
        raise AttributeError("CoherentAtomSet is immutable")

    def __len__(self) -> int:
        return self.vectors.shape[0]

    def __repr__(self) -> str:
        return f"CoherentAtomSet(n={len(self)}, strategy={self.strategy!r}, seed={self.seed!r})"

    @classmethod
    def from_angles(cls, atoms) -> "CoherentAtomSet":
        return cls([CoherentAngles(a.theta, a.phi).unit_vector for a in atoms])

    def angles(self, indices=None) -> tuple[CoherentAngles, ...]:
        idx = range(len(self)) if indices is None else indices
        return tuple(CoherentAngles.from_vector(self.vectors[i]) for i in idx)

    @property
    def atoms(self) -> tuple[CoherentAngles, ...]:
        return self.angles()


def _fibonacci_vectors(n: int) -> np.ndarray:
    i = np.arange(n, dtype=float)
    z = 1.0 - (2.0 * i + 1.0) / n
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    ang = _GOLDEN_ANGLE * i
    return np.column_stack([r * np.cos(ang), r * np.sin(ang), z])


def sample_atoms(n: int, seed: int = 0, strategy: str = "fibonacci") -> CoherentAtomSet:
    """Sample ``n`` coherent-state directions.

    ``"uniform_random"`` draws i.i.d. uniform points on the sphere;
    ``"fibonacci"`` takes the golden-angle spiral lattice and applies a
    seeded random rotation.  Output is a deterministic function of
    ``(n, seed, strategy)``.
    """
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < MIN_ATOMS:
        raise InvalidInputError(f"need an integer number of atoms >= {MIN_ATOMS}, got {n!r}")
    if strategy not in ATOM_STRATEGIES:
        raise InvalidInputError(f"unknown atom strategy {strategy!r}; choose from {ATOM_STRATEGIES}")
    gen = RngStream(int(seed), 0, PURPOSE_ATOMS).generator()
    if strategy == "fibonacci":
        v = _fibonacci_vectors(int(n)) @ random_rotation(gen).matrix.T
    else:
        u = gen.random((2, int(n)))
        z = 1.0 - 2.0 * u[0]
        r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
        ang = 2.0 * math.pi * u[1]
        v = np.column_stack([r * np.cos(ang), r * np.sin(ang), z])
    return CoherentAtomSet(v, seed=int(seed), strategy=strategy)


@functools.lru_cache(maxsize=16)
def _cached_atoms(n: int, seed: int, strategy: str) -> CoherentAtomSet:
    return sample_atoms(n, seed, strategy)


def atom_gram(atoms: CoherentAtomSet) -> np.ndarray:
    """Overlap matrix ``G[i, j] = ((1 + n_i . n_j) / 2)^2``."""
    v = atoms.vectors
    c = np.clip(v @ v.T, -1.0, 1.0)
    g = (0.5 * (1.0 + c)) ** 2
    g = 0.5 * (g + g.T)
    np.fill_diagonal(g, 1.0)
    return g


# ---------------------------------------------------------------------------
# simplex QP


def simplex_project(v) -> np.ndarray:
    """Euclidean projection onto the probability simplex (sort and threshold)."""
    v = np.asarray(v, dtype=float).ravel()
    if v.size == 0:
        raise InvalidInputError("cannot project an empty vector")
    if not np.all(np.isfinite(v)):
        raise InvalidInputError("vector entries must be finite")
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    k = np.arange(1, v.size + 1)
    rho = int(k[u - css / k > 0][-1])
    tau = css[rho - 1] / rho
    return np.maximum(v - tau, 0.0)


@dataclass(frozen=True)
class QPResult:
    """Outcome of a simplex QP solve.

    ``quantumness_estimate`` is the distance from the input state to the
    mixture described by ``decomposition``, which therefore certifies it.
    """

    quantumness_estimate: float
    decomposition: Decomposition
    objective_history_len: int
    converged: bool
    residual_gradient_norm: float
    method: str = "active_set"


def _largest_eig(h: np.ndarray) -> float:
    # power iteration on the 9x9 matrix F^T F, whose top eigenvalue is that of G
    v = np.ones(h.shape[0]) / math.sqrt(h.shape[0])
    lam = 0.0
    for _ in range(_POWER_ITERS):
        hv = h @ v
        nv = float(np.linalg.norm(hv))
        if nv == 0.0:
            return 1.0
        new = float(v @ hv)
        v = hv / nv
        if abs(new - lam) <= 1e-13 * new:
            lam = new
            break
        lam = new
    return max(lam, float(v @ h @ v))


def _residual(f: np.ndarray, r: np.ndarray, w: np.ndarray, lip: float) -> float:
    grad = f @ (f.T @ w - r)
    return float(np.linalg.norm(w - simplex_project(w - grad / lip)))


def _apg(f, r, lip, w0, max_iter, tol, check_every=10):
    """Accelerated projected gradient with function-value restart."""
    n = f.shape[0]
    w = simplex_project(w0) if w0 is not None else np.full(n, 1.0 / n)
    y = w.copy()
    t = 1.0
    fprev = float(np.sum((f.T @ w - r) ** 2))
    it = 0
    for it in range(1, max_iter + 1):
        grad = f @ (f.T @ y - r)
        wn = simplex_project(y - grad / lip)
        fn = float(np.sum((f.T @ wn - r) ** 2))
        if fn > fprev:
            # momentum overshot: restart from the last accepted iterate
            y = w.copy()
            t = 1.0
            continue
        tn = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * t * t))
        y = wn + ((t - 1.0) / tn) * (wn - w)
        w, t, fprev = wn, tn, fn
        if it % check_every == 0 and _residual(f, r, w, lip) <= tol:
            break
    return w, it


def _wolfe(p: np.ndarray, max_iter: int):
    """Wolfe's minimum-norm-point algorithm on the rows of ``p``.

    Returns simplex weights of the nearest hull point to the origin and the
    number of major plus minor cycles.
    """
    n = p.shape[0]
    sq = np.einsum("ij,ij->i", p, p)
    scale = max(float(sq.max()), 1e-300)
    j = int(np.argmin(sq))
    support = [j]
    lam = np.array([1.0])
    x = p[j].copy()
    cycles = 0
    while cycles < max_iter:
        cycles += 1
        dots = p @ x
        j = int(np.argmin(dots))
        xx = float(x @ x)
        if xx - dots[j] <= _WOLFE_EPS * scale or j in support:
            break
        support.append(j)
        lam = np.append(lam, 0.0)
        while cycles < max_iter:
            cycles += 1
            q = p[support]
            k = len(support)
            kkt = np.zeros((k + 1, k + 1))
            kkt[:k, :k] = q @ q.T
            kkt[:k, k] = 1.0
            kkt[k, :k] = 1.0
            rhs = np.zeros(k + 1)
            rhs[k] = 1.0
            alpha = np.linalg.lstsq(kkt, rhs, rcond=None)[0][:k]
            if np.all(alpha > _WOLFE_POS):
                lam = alpha
                break
            mask = alpha <= _WOLFE_POS
            step = float(np.min(lam[mask] / (lam[mask] - alpha[mask])))
            lam = lam + step * (alpha - lam)
            keep = lam > _WOLFE_POS
            support = [s for s, kp in zip(support, keep) if kp]
            lam = lam[keep]
            lam = lam / lam.sum()
        x = lam @ p[support]
    w = np.zeros(n)
    w[support] = lam
    return w, cycles


def solve_simplex_qp(
    rho,
    atoms: CoherentAtomSet,
    tol: float = DEFAULT_TOL,
    method: str = "active_set",
    w0=None,
    max_iter: int | None = None,
) -> QPResult:
    """Nearest mixture of the given atoms to ``rho`` in Hilbert-Schmidt distance.

    Parameters
    ----------
    rho : DensityMatrix or array_like
    atoms : CoherentAtomSet
    tol : float
        Convergence threshold on the projected-gradient residual
        ``||w - P(w - grad/L)||`` with ``grad = G w - b`` and ``L`` the
        largest eigenvalue of ``G``.
    method : {"active_set", "apg"}
        ``"active_set"`` is Wolfe's minimum-norm-point method (exact up to
        rounding, typically a few dozen cycles).  ``"apg"`` is accelerated
        projected gradient with restart, optionally warm-started at ``w0``.
        If the active-set pass stalls above ``tol`` it is polished with APG.
    max_iter : int, optional
        Iteration cap, default ``50 * n``.

    Returns
    -------
    QPResult
        Not converged results are returned with ``converged=False``.
    """
    if not tol > 0:
        raise InvalidInputError("tol must be positive")
    if method not in QP_METHODS:
        raise InvalidInputError(f"unknown QP method {method!r}; choose from {QP_METHODS}")
    if not isinstance(atoms, CoherentAtomSet):
        raise InvalidInputError("atoms must be a CoherentAtomSet")
    rho = as_density(rho)
    n = len(atoms)
    cap = int(max_iter) if max_iter is not None else 50 * n
    f = atoms.features
    r = hermitian_features(rho.matrix)
    lip = _largest_eig(f.T @ f)

    if w0 is not None:
        w0 = np.asarray(w0, dtype=float).ravel()
        if w0.shape != (n,):
            raise InvalidInputError("warm start must have one weight per atom")
    if method == "active_set":
        w, iters = _wolfe(f - r, cap)
        if _residual(f, r, w, lip) > tol:
            w, more = _apg(f, r, lip, w, cap, tol)
            iters += more
    else:
        w, iters = _apg(f, r, lip, w0, cap, tol)

    res = _residual(f, r, w, lip)
    return _make_result(rho, atoms, w, iters, res <= tol, res, method)


def _make_result(rho, atoms, w, iters, converged, res, method) -> QPResult:
    keep = np.flatnonzero(w > PRUNE_TOL)
    if keep.size == 0:
        keep = np.array([int(np.argmax(w))])
    ws = w[keep] / w[keep].sum()
    dec = Decomposition(tuple(ws), atoms.angles(keep))
    est = hs_distance(rho, dec.density())
    return QPResult(
        quantumness_estimate=max(0.0, est),
        decomposition=dec,
        objective_history_len=int(iters),
        converged=bool(converged),
        residual_gradient_norm=float(res),
        method=method,
    )


# ---------------------------------------------------------------------------
# refinement


def _tangent_frame(n: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a = np.zeros(3)
    a[int(np.argmin(np.abs(n)))] = 1.0
    t1 = np.cross(n, a)
    t1 /= np.linalg.norm(t1)
    return t1, np.cross(n, t1)


def _projector_jacobian(n: np.ndarray) -> np.ndarray:
    """Derivatives of :func:`projector_features` with respect to ``n``, shape ``(k, 9, 3)``."""
    x, y, z = n[:, 0], n[:, 1], n[:, 2]
    zero = np.zeros_like(x)
    h = 0.5 * SQRT2
    rows = [
        [zero, zero, 0.5 * (1.0 + z)],
        [zero, zero, -z],
        [zero, zero, -0.5 * (1.0 - z)],
        [0.5 * (1.0 + z), zero, 0.5 * x],
        [zero, 0.5 * (1.0 + z), 0.5 * y],
        [h * x, -h * y, zero],
        [h * y, h * x, zero],
        [0.5 * (1.0 - z), zero, -0.5 * x],
        [zero, 0.5 * (1.0 - z), -0.5 * y],
    ]
    return np.array(rows).transpose(2, 0, 1)


class _JointObjective:
    """Squared distance as a smooth function of all support directions and weights.

    Directions are moved in their tangent planes, ``n = (n0 + a t1 + b t2) / |.|``,
    and weights are ``u^2 / sum(u^2)``, so every point is feasible.
    """

    def __init__(self, r: np.ndarray, vectors: np.ndarray):
        self.r = r
        self.n0 = vectors
        frames = [_tangent_frame(v) for v in vectors]
        self.t1 = np.array([f[0] for f in frames])
        self.t2 = np.array([f[1] for f in frames])
        self.k = vectors.shape[0]

    def unpack(self, x: np.ndarray):
        k = self.k
        a, b, u = x[:k], x[k : 2 * k], x[2 * k :]
        v = self.n0 + a[:, None] * self.t1 + b[:, None] * self.t2
        s = np.linalg.norm(v, axis=1)
        uu = u * u
        return v / s[:, None], s, uu / uu.sum(), u, uu.sum()

    def __call__(self, x: np.ndarray):
        n, s, w, u, tot = self.unpack(x)
        f = projector_features(n)
        resid = w @ f - self.r
        value = float(resid @ resid)
        # chain rule through the normalization and the feature polynomials
        jac = _projector_jacobian(n)
        ga = np.einsum("i,kij->kj", resid, jac)
        da = (self.t1 - n * np.einsum("kj,kj->k", n, self.t1)[:, None]) / s[:, None]
        db = (self.t2 - n * np.einsum("kj,kj->k", n, self.t2)[:, None]) / s[:, None]
        g = f @ resid
        grad = np.concatenate(
            [
                2.0 * w * np.einsum("kj,kj->k", ga, da),
                2.0 * w * np.einsum("kj,kj->k", ga, db),
                (4.0 * u / tot) * (g - w @ g),
            ]
        )
        return value, grad


def _polish_support(r: np.ndarray, weights: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """Jointly move the support directions and weights to a local minimum.

    Returns the moved directions; the weights are re-derived by the QP.
    """
    obj = _JointObjective(r, vectors)
    x0 = np.concatenate([np.zeros(2 * obj.k), np.sqrt(weights)])
    sol = minimize(obj, x0, jac=True, method="BFGS", options={"gtol": 1e-13, "maxiter": _POLISH_ITERS})
    return obj.unpack(sol.x)[0]


def _jitter(vectors: np.ndarray, gen: np.random.Generator) -> np.ndarray:
    out = []
    for scale in _JITTER_SCALES:
        g = gen.standard_normal((vectors.shape[0], _JITTER_PER_SCALE, 3))
        out.append((vectors[:, None, :] + scale * g).reshape(-1, 3))
    return _unit_rows(np.vstack(out))


def refine(
    rho,
    result: QPResult,
    rounds: int = DEFAULT_REFINE_ROUNDS,
    *,
    seed: int = 0,
    stream_index: int = 0,
    tol: float = DEFAULT_TOL,
) -> QPResult:
    """Improve a QP result by moving and augmenting its support atoms.

    Each round runs a local quasi-Newton descent over the support
    directions and weights together, then re-solves the QP on the old support, the moved support and seeded
    random perturbations of it.  A round is kept only if it does not
    increase the estimate, so the estimate is non-increasing.
    """
    if rounds < 0:
        raise InvalidInputError("rounds must be non-negative")
    rho = as_density(rho)
    r = hermitian_features(rho.matrix)
    gen = RngStream(int(seed), int(stream_index), PURPOSE_REFINE).generator()
    best = result
    total = result.objective_history_len
    for _ in range(int(rounds)):
        dec = best.decomposition
        old = dec.directions
        moved = _polish_support(r, np.asarray(dec.weights), old)
        cand = CoherentAtomSet(np.vstack([old, moved, _jitter(moved, gen)]))
        trial = solve_simplex_qp(rho, cand, tol=tol, method="active_set")
        total += trial.objective_history_len
        if trial.quantumness_estimate <= best.quantumness_estimate:
            best = trial
    return replace(best, objective_history_len=total)


# ---------------------------------------------------------------------------
# reports


def lower_bound(lam: float) -> float:
    """Lower bound ``-lambda / sqrt(3)`` on the quantumness, for ``lambda`` in [-1, 0]."""
    lam = float(lam)
    if not (-1.0 - 1e-12 <= lam <= 1e-12):
        raise DomainError(f"lambda must lie in [-1, 0], got {lam!r}")
    return max(0.0, -min(lam, 0.0)) / math.sqrt(3.0)


@dataclass(frozen=True)
class QuantumnessConfig:
    """Knobs for :func:`quantumness`.  ``force_qp`` skips both analytic shortcuts."""

    atoms: int = DEFAULT_ATOMS
    strategy: str = "fibonacci"
    seed: int = 0
    refine_rounds: int = DEFAULT_REFINE_ROUNDS
    tol: float = DEFAULT_TOL
    qp_method: str = "active_set"
    force_qp: bool = False

    def __post_init__(self):
        if self.atoms < MIN_ATOMS:
            raise InvalidInputError(f"atoms must be >= {MIN_ATOMS}")
        if self.strategy not in ATOM_STRATEGIES:
            raise InvalidInputError(f"unknown atom strategy {self.strategy!r}")
        if self.refine_rounds < 0:
            raise InvalidInputError("refine_rounds must be non-negative")
        if not self.tol > 0:
            raise InvalidInputError("tol must be positive")
        if self.qp_method not in QP_METHODS:
            raise InvalidInputError(f"unknown QP method {self.qp_method!r}")


@dataclass(frozen=True)
class QuantumnessReport:
    lambda_min: float
    value: float
    method: str
    lower_bound: float
    f_lambda_bound: float
    decomposition: Decomposition | None = None
    converged: bool = True
    purity: float = field(default=float("nan"))

    @property
    def excess_over_f(self) -> float:
        return self.value - self.f_lambda_bound


def _bounds(lam: float) -> tuple[float, float]:
    if lam >= 0.0:
        return 0.0, 0.0
    lam = max(lam, -1.0)
    return lower_bound(lam), f_quantumness(lam)


def _log_violation(rho: DensityMatrix, report: QuantumnessReport) -> None:
    payload = [[[z.real, z.imag] for z in row] for row in rho.matrix.tolist()]
    logger.warning(
        "quantumness exceeds f(lambda) by %.3e (lambda=%.17g); state=%s",
        report.excess_over_f,
        report.lambda_min,
        json.dumps({"kind": "density", "matrix": payload}),
    )


def quantumness(rho, config: QuantumnessConfig | None = None, *, stream_index: int = 0) -> QuantumnessReport:
    """Quantumness of a spin-1 state with bounds and a certificate.

    Classical states (``lambda >= -1e-10``) return 0 without solving; pure
    states use the closed form; everything else runs the sampled QP
    followed by :func:`refine`.  ``stream_index`` selects the refinement
    random stream so batch results do not depend on scheduling.
    """
    cfg = config or QuantumnessConfig()
    rho = as_density(rho)
    lam = float(bloch_from_density(rho).eigenvalues[0])
    purity = rho.purity
    lo, hi = _bounds(lam)

    if not cfg.force_qp:
        if lam >= -CLASSICAL_TOL:
            return QuantumnessReport(lam, 0.0, "classical_zero", lo, hi, None, True, purity)
        if purity >= 1.0 - PURITY_TOL:
            psi = pure_from_density(rho, tol=PURITY_TOL)
            ccs = ccs_of_pure(psi)
            return QuantumnessReport(lam, f_quantumness(max(lam, -1.0)), "analytic_pure", lo, hi,
                                     ccs.decomposition, True, purity)

    atoms = _cached_atoms(int(cfg.atoms), int(cfg.seed), cfg.strategy)
    res = solve_simplex_qp(rho, atoms, tol=cfg.tol, method=cfg.qp_method)
    res = refine(rho, res, cfg.refine_rounds, seed=cfg.seed, stream_index=stream_index, tol=cfg.tol)
    report = QuantumnessReport(lam, res.quantumness_estimate, "qp", lo, hi, res.decomposition,
                               res.converged, purity)
    if lam < 0.0 and report.excess_over_f > REPORT_TOL:
        _log_violation(rho, report)
    return report


def interpolated_state(psi: PureSpin1, a: float) -> DensityMatrix:
    """Mixture ``a |psi><psi| + (1 - a) ccs(psi)`` of a pure state and its closest classical state."""
    a = float(a)
    if not (0.0 <= a <= 1.0):
        raise DomainError(f"mixing parameter must lie in [0, 1], got {a!r}")
    if not isinstance(psi, PureSpin1):
        raise InvalidInputError("psi must be a PureSpin1")
    if pure_lambda(psi) >= -PSD_TOL:
        raise DomainError("psi must be non-classical")
    ccs = ccs_of_pure(psi).decomposition.density().matrix
    m = a * psi.density().matrix + (1.0 - a) * ccs
    return DensityMatrix(m / np.trace(m).real)
