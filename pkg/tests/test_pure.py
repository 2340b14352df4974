import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given
from hypothesis import strategies as st

import oracles
from spin1q.errors import DomainError
from spin1q.pure import (
    BRANCH_POINT,
    SQRT3_8,
    appendix_oracle_F_min,
    canonical_bloch,
    canonical_state,
    canonicalize,
    ccs_canonical,
    ccs_of_pure,
    ell,
    ell_closed_form,
    f_quantumness,
    lambda_of_gamma,
    majorana_points,
    pure_lambda,
    pure_quantumness,
    steep_parameters,
)
from spin1q.states import (
    CoherentAngles,
    DensityMatrix,
    PureSpin1,
    bloch_from_density,
    coherent_amplitudes,
    hs_distance,
    rotate_bloch,
)

M0 = PureSpin1(0, 1, 0)

complex_amp = st.builds(complex, st.floats(-1, 1), st.floats(-1, 1))


@st.composite
def pure_states(draw):
    v = np.array([draw(complex_amp) for _ in range(3)])
    if np.linalg.norm(v) < 1e-3:
        v = np.array([0, 1, 0], dtype=complex)
    return PureSpin1.from_vector(v, normalize=True)


def _random_pure(rng):
    return PureSpin1.from_vector(oracles.haar_vector(rng))


def _spin_rotation(axis, angle):
    n = np.asarray(axis, float)
    n /= np.linalg.norm(n)
    nj = n[0] * oracles.JX + n[1] * oracles.JY + n[2] * oracles.JZ
    return scipy.linalg.expm(-1j * angle * nj), n


def _vector_rotation(n, angle):
    k = np.array([[0, -n[2], n[1]], [n[2], 0, -n[0]], [-n[1], n[0], 0]])
    return np.eye(3) + math.sin(angle) * k + (1 - math.cos(angle)) * k @ k


class TestMajorana:
    def test_m0_poles(self):
        mp = majorana_points(M0)
        zs = sorted([mp.p1[2], mp.p2[2]])
        np.testing.assert_allclose(zs, [-1, 1], atol=1e-15)
        assert not mp.degenerate

    def test_coherent_degenerate(self):
        a = CoherentAngles(1.1, 2.3)
        mp = majorana_points(coherent_amplitudes(a))
        assert mp.degenerate
        np.testing.assert_allclose(mp.p1, a.unit_vector, atol=1e-7)
        np.testing.assert_allclose(mp.p2, a.unit_vector, atol=1e-7)

    def test_north_pole(self):
        mp = majorana_points(PureSpin1(1, 0, 0))
        np.testing.assert_allclose(mp.p1, [0, 0, 1], atol=1e-15)
        np.testing.assert_allclose(mp.p2, [0, 0, 1], atol=1e-15)

    @given(pure_states())
    def test_unit_points(self, psi):
        mp = majorana_points(psi)
        assert abs(np.linalg.norm(mp.p1) - 1) < 1e-12
        assert abs(np.linalg.norm(mp.p2) - 1) < 1e-12

    def test_roots_of_polynomial(self):
        # stereographic images of the points are roots of d1 - sqrt2 d0 z + d-1 z^2
        rng = np.random.default_rng(2)
        for _ in range(100):
            psi = _random_pure(rng)
            d1, d0, dm = psi.amplitudes
            for p in majorana_points(psi).angles:
                z = math.cos(p.theta / 2) / math.sin(p.theta / 2) * np.exp(1j * p.phi)
                assert abs(d1 - math.sqrt(2) * d0 * z + dm * z * z) < 1e-9 * max(1, abs(z) ** 2)


class TestCanonicalize:
    def test_m0(self):
        c = canonicalize(M0)
        assert c.gamma == pytest.approx(0, abs=1e-15)
        assert c.lam == pytest.approx(-1, abs=1e-15)
        np.testing.assert_allclose(c.rotation.matrix, np.eye(3), atol=1e-15)

    def test_coherent(self):
        c = canonicalize(coherent_amplitudes(CoherentAngles(0.4, 1.9)))
        assert c.gamma == pytest.approx(math.pi / 2, abs=1e-6)
        assert c.lam == pytest.approx(0, abs=1e-12)

    def test_gamma_quarter(self):
        c = canonicalize(canonical_state(math.pi / 4))
        assert c.lam == pytest.approx(-1 / 3, abs=1e-14)
        assert c.gamma == pytest.approx(math.pi / 4, abs=1e-14)
        np.testing.assert_allclose(c.rotation.matrix, np.eye(3), atol=1e-14)

    def test_lambda_of_gamma(self):
        assert lambda_of_gamma(0) == -1
        assert lambda_of_gamma(math.pi / 2) == 0

    def test_random_states_reach_canonical_form(self):
        rng = np.random.default_rng(17)
        for _ in range(1000):
            psi = _random_pure(rng)
            c = canonicalize(psi)
            assert 0 <= c.gamma <= math.pi / 2
            assert abs(c.lam - lambda_of_gamma(c.gamma)) < 1e-12
            x = rotate_bloch(bloch_from_density(psi.density()), c.rotation)
            np.testing.assert_allclose(x.matrix, oracles.canonical_bloch(c.lam), atol=1e-10)
            assert abs(c.lam - np.linalg.eigvalsh(x.matrix)[0]) < 1e-10

    @given(pure_states())
    def test_property_canonical(self, psi):
        c = canonicalize(psi)
        x = rotate_bloch(bloch_from_density(psi.density()), c.rotation)
        np.testing.assert_allclose(x.matrix, canonical_bloch(c.lam).matrix, atol=1e-9)


class TestEll:
    def test_zero(self):
        e = ell(0.0)
        assert e.d_root == pytest.approx(1, abs=1e-15)
        assert e.ell == pytest.approx(0, abs=1e-15)

    def test_branch_point(self):
        e = ell(-0.5)
        assert e.d_root == pytest.approx(math.sqrt(3) / 2, abs=1e-14)
        assert e.ell == pytest.approx(1 / 8, abs=1e-14)

    def test_quarter(self):
        e = ell(-0.25)
        assert e.d_root == pytest.approx(oracles.cubic_root(-0.25), abs=1e-13)
        assert e.d_root == pytest.approx(0.94266, abs=5e-5)
        assert e.ell == pytest.approx(0.032929, abs=1e-6)
        assert e.ell == pytest.approx(oracles.ell(-0.25), abs=1e-13)

    def test_domain(self):
        with pytest.raises(DomainError):
            ell(-0.6)
        with pytest.raises(DomainError):
            ell(0.1)

    @given(st.floats(-0.5, 0.0))
    def test_invariants(self, lam):
        e = ell(lam)
        d = e.d_root
        assert abs(math.sqrt(1 - lam * lam) + d * (1 + lam) - 2 * d**3) < 1e-12
        assert math.sqrt(3) / 2 - 1e-12 <= d <= 1 + 1e-12
        assert e.ell >= lam * lam / 2 - 1e-15

    def test_closed_form_examples(self):
        assert ell_closed_form(0.0) == pytest.approx(0, abs=1e-8)
        assert ell_closed_form(-0.5) == pytest.approx(1 / 8, abs=1e-8)
        assert ell_closed_form(-0.25) == pytest.approx(0.032929616520535075, abs=1e-8)

    def test_closed_form_grid(self):
        for lam in np.linspace(-0.5, 0.0, 401):
            assert abs(ell_closed_form(lam) - ell(lam).ell) < 1e-8


class TestF:
    def test_values(self):
        assert f_quantumness(-1) == pytest.approx(math.sqrt(3 / 8), abs=1e-15)
        assert f_quantumness(0) == 0
        assert f_quantumness(-0.5) == pytest.approx(math.sqrt(3 / 8) / 2, abs=1e-15)
        assert f_quantumness(-0.25) == pytest.approx(0.154458, abs=1e-6)
        assert f_quantumness(-0.25) == pytest.approx(oracles.f(-0.25), abs=1e-14)

    def test_continuity(self):
        left = -SQRT3_8 * BRANCH_POINT
        right = 0.5 * math.sqrt(0.25 + ell(-0.5).ell)
        assert abs(left - right) <= 1e-10
        assert abs(f_quantumness(-0.5 - 1e-13) - f_quantumness(-0.5 + 1e-13)) <= 1e-10

    def test_domain(self):
        with pytest.raises(DomainError):
            f_quantumness(0.2)
        with pytest.raises(DomainError):
            f_quantumness(-1.1)

    def test_near_linearity_and_monotonicity(self):
        grid = np.linspace(-1, 0, 10_000)
        vals = np.array([f_quantumness(x) for x in grid])
        assert np.max(np.abs(vals + SQRT3_8 * grid)) < 0.0016
        assert np.all(np.diff(vals) < 0)

    def test_dominance(self):
        for lam in np.linspace(-0.5, 0, 500)[1:-1]:
            assert f_quantumness(lam) > -SQRT3_8 * lam

    def test_scaling_law(self):
        for lam in np.linspace(-1, 0, 41):
            for a in np.linspace(0, 1, 21):
                assert a * f_quantumness(lam) <= f_quantumness(a * lam) + 1e-15


class TestCcsCanonical:
    def test_minus_one(self):
        w, beta = steep_parameters(-1.0)
        assert w == pytest.approx(1 / 3, abs=1e-15)
        assert beta == pytest.approx(2 * math.pi / 3, abs=1e-15)
        cc = ccs_canonical(-1.0)
        np.testing.assert_allclose(cc.W.matrix, np.diag([1, 0.5, 0.5, 0]), atol=1e-15)
        assert cc.branch == "steep"

    def test_branch_point(self):
        w, _ = steep_parameters(-0.5)
        assert w == pytest.approx(0.5, abs=1e-15)
        cc = ccs_canonical(-0.5)
        assert len(cc.decomposition) == 2
        np.testing.assert_allclose(cc.W.matrix, oracles.ccs_bloch(-0.5 + 1e-15), atol=1e-12)

    def test_quarter(self):
        cc = ccs_canonical(-0.25)
        assert cc.branch == "shallow"
        d = oracles.cubic_root(-0.25)
        assert cc.W.matrix[1, 1] == pytest.approx(d * d, abs=1e-13)
        assert cc.W.matrix[1, 1] == pytest.approx(0.888608, abs=5e-5)
        assert math.cos(cc.decomposition.atoms[0].phi) == pytest.approx(d, abs=1e-13)
        x = canonical_bloch(-0.25)
        assert 0.5 * np.linalg.norm(x.matrix - cc.W.matrix) == pytest.approx(0.154458, abs=1e-6)

    def test_domain(self):
        with pytest.raises(DomainError):
            ccs_canonical(0.0)

    def test_grid(self):
        for lam in np.linspace(-1, 0, 201)[:-1]:
            cc = ccs_canonical(lam)
            np.testing.assert_allclose(cc.W.matrix, oracles.ccs_bloch(lam), atol=1e-12)
            np.testing.assert_allclose(cc.decomposition.bloch().matrix, cc.W.matrix, atol=1e-10)
            assert np.linalg.eigvalsh(cc.W.matrix)[0] >= -1e-10
            assert sum(cc.decomposition.weights) == pytest.approx(1, abs=1e-12)
            dist = hs_distance(canonical_state_for(lam).density(), cc.decomposition.density())
            assert abs(dist - f_quantumness(lam)) < 1e-12


def canonical_state_for(lam):
    return PureSpin1.from_vector(oracles.canonical_vector(lam))


class TestCcsOfPure:
    def test_m0_three_atoms(self):
        cc = ccs_of_pure(M0)
        assert cc.branch == "steep"
        np.testing.assert_allclose(cc.decomposition.weights, [1 / 3] * 3, atol=1e-15)
        dirs = cc.decomposition.directions
        np.testing.assert_allclose(dirs[:, 2], 0, atol=1e-15)
        gram = dirs @ dirs.T
        off = gram[~np.eye(3, dtype=bool)]
        np.testing.assert_allclose(off, -0.5, atol=1e-14)

    def test_coherent_itself(self):
        psi = coherent_amplitudes(CoherentAngles(0.7, 0.2))
        cc = ccs_of_pure(psi)
        assert cc.branch == "coherent"
        assert hs_distance(psi.density(), cc.decomposition.density()) < 1e-7
        assert pure_quantumness(psi) == 0.0

    def test_random_certificates(self):
        rng = np.random.default_rng(5)
        for _ in range(300):
            psi = _random_pure(rng)
            lam = pure_lambda(psi)
            cc = ccs_of_pure(psi)
            rho_c = cc.decomposition.density()
            assert rho_c.is_psd
            assert abs(hs_distance(psi.density(), rho_c) - f_quantumness(lam)) < 1e-10
            np.testing.assert_allclose(bloch_from_density(rho_c).matrix, cc.W.matrix, atol=1e-10)

    def test_not_isotropic_mixture(self):
        rng = np.random.default_rng(6)
        for _ in range(20):
            psi = _random_pure(rng)
            if pure_lambda(psi) < -0.999:
                continue
            rho_c = ccs_of_pure(psi).decomposition.density().matrix
            p = psi.density().matrix
            # best a in a P + (1 - a) I/3 by least squares
            basis = p - np.eye(3) / 3
            a = np.vdot(basis, rho_c - np.eye(3) / 3).real / np.vdot(basis, basis).real
            assert np.linalg.norm(a * p + (1 - a) * np.eye(3) / 3 - rho_c) > 1e-4

    def test_rotation_covariance(self):
        rng = np.random.default_rng(7)
        for _ in range(30):
            psi = _random_pure(rng)
            axis = rng.standard_normal(3)
            angle = rng.uniform(0, 2 * math.pi)
            u, n = _spin_rotation(axis, angle)
            # with this J_y sign, exp(-i t n.J) acts on Bloch vectors as a rotation by -t
            r = _vector_rotation(n, -angle)
            np.testing.assert_allclose(
                rotate_bloch(bloch_from_density(psi.density()), r).matrix,
                bloch_from_density(PureSpin1.from_vector(u @ psi.amplitudes).density()).matrix,
                atol=1e-12,
            )
            rotated = PureSpin1.from_vector(u @ psi.amplitudes, normalize=True)
            w1 = ccs_of_pure(psi).W
            w2 = ccs_of_pure(rotated).W
            np.testing.assert_allclose(rotate_bloch(w1, r).matrix, w2.matrix, atol=1e-9)
            assert abs(pure_quantumness(psi) - pure_quantumness(rotated)) < 1e-12

    def test_optimality_spot_check(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            psi = _random_pure(rng)
            f = f_quantumness(pure_lambda(psi))
            rho_c = ccs_of_pure(psi).decomposition.density().matrix
            for _ in range(5):
                theta, phi = math.acos(rng.uniform(-1, 1)), rng.uniform(0, 2 * math.pi)
                eps = rng.uniform(0, 0.2)
                other = oracles.projector(oracles.coherent_vector(theta, phi))
                trial = DensityMatrix((1 - eps) * rho_c + eps * other)
                assert hs_distance(psi.density(), trial) >= f - 1e-9


class TestAppendixOracle:
    def test_zero(self):
        assert appendix_oracle_F_min(0.0) <= 1e-4

    def test_branch_point(self):
        assert appendix_oracle_F_min(-0.5) == pytest.approx(0.125, abs=1e-3)

    def test_quarter(self):
        assert appendix_oracle_F_min(-0.25) == pytest.approx(0.0329, abs=1e-3)

    def test_grid_size_checked(self):
        with pytest.raises(DomainError):
            appendix_oracle_F_min(-0.2, grid_n=50)

    def test_band(self):
        for lam in (-0.45, -0.3, -0.1, -0.02):
            v = appendix_oracle_F_min(lam)
            assert abs(v - ell(lam).ell) <= 1e-4
