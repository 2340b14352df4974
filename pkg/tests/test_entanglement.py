import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from spin1q.chull import interpolated_state
from spin1q.entanglement import (
    DICKE_ISOMETRY,
    PPT_BASIS,
    SINGLET,
    concurrence,
    dicke_embed,
    is_classical,
    min_bloch_eig,
    negativity,
    partial_transpose,
    ppt_from_bloch,
    spin1_concurrence,
)
from spin1q.errors import InvalidInputError
from spin1q.pure import canonical_state
from spin1q.states import (
    CoherentAngles,
    DensityMatrix,
    PureSpin1,
    bloch_from_density,
    coherent_amplitudes,
    mixture_density,
)

M0 = PureSpin1(0, 1, 0).density()
MIXED = DensityMatrix(np.eye(3) / 3)
SIGMA_Y = np.array([[0, -1j], [1j, 0]])


def _coherent(theta, phi):
    return coherent_amplitudes(CoherentAngles(theta, phi)).density()


def _wootters(rho):
    # textbook route: square roots of the (non-Hermitian) product spectrum
    flip = np.kron(SIGMA_Y, SIGMA_Y) @ rho.conj() @ np.kron(SIGMA_Y, SIGMA_Y)
    ev = np.sort(np.sqrt(np.abs(np.linalg.eigvals(rho @ flip).real)))[::-1]
    return max(0.0, ev[0] - ev[1] - ev[2] - ev[3])


def _random_states(seed, n):
    rng = np.random.default_rng(seed)
    return [DensityMatrix(oracles.hs_random_density(rng)) for _ in range(n)]


class TestMinBlochEig:
    def test_examples(self):
        assert min_bloch_eig(M0) == pytest.approx(-1, abs=1e-14)
        assert min_bloch_eig(MIXED) == pytest.approx(1 / 3, abs=1e-14)
        assert min_bloch_eig(_coherent(0.9, -2.0)) == pytest.approx(0, abs=1e-12)


class TestIsClassical:
    def test_examples(self):
        assert is_classical(MIXED).classical
        v = is_classical(M0)
        assert not v.classical
        assert v.lambda_min == pytest.approx(-1, abs=1e-14)
        rho = mixture_density([0.5, 0.5], [CoherentAngles(0.3, 0.1), CoherentAngles(2.0, 1.5)])
        assert is_classical(rho).classical

    def test_witness(self):
        for rho in _random_states(1, 50):
            v = is_classical(rho)
            x = bloch_from_density(rho).matrix
            np.testing.assert_allclose(x @ v.witness, v.lambda_min * v.witness, atol=1e-12)
            assert abs(np.linalg.norm(v.witness) - 1) < 1e-12

    def test_boundary_flag(self):
        v = is_classical(_coherent(1.0, 1.0))
        assert v.classical and v.boundary
        assert not is_classical(MIXED).boundary


class TestPpt:
    def test_unitary(self):
        np.testing.assert_allclose(PPT_BASIS @ PPT_BASIS.conj().T, np.eye(4), atol=1e-14)

    def test_examples(self):
        ev = np.linalg.eigvalsh(ppt_from_bloch(bloch_from_density(MIXED)))
        np.testing.assert_allclose(ev, [1 / 6, 1 / 6, 1 / 6, 1 / 2], atol=1e-14)
        ev = np.linalg.eigvalsh(ppt_from_bloch(np.diag([1.0, 1, 1, -1])))
        assert ev[0] == pytest.approx(-0.5, abs=1e-14)
        ev = np.linalg.eigvalsh(ppt_from_bloch(bloch_from_density(_coherent(0.4, 2.2))))
        np.testing.assert_allclose(ev, [0, 0, 0, 1], atol=1e-12)

    def test_equals_partial_transpose(self):
        for rho in _random_states(2, 100):
            pt = partial_transpose(dicke_embed(rho), 0)
            np.testing.assert_allclose(ppt_from_bloch(bloch_from_density(rho)), pt, atol=1e-12)

    def test_spectrum_correspondence(self):
        for rho in _random_states(3, 500):
            x = bloch_from_density(rho).matrix
            ev_pt = np.linalg.eigvalsh(ppt_from_bloch(x))
            np.testing.assert_allclose(ev_pt, np.linalg.eigvalsh(x) / 2, atol=1e-11)

    def test_qubit_choice(self):
        rho = dicke_embed(_random_states(4, 1)[0]).copy()
        a = np.linalg.eigvalsh(partial_transpose(rho, 0))
        b = np.linalg.eigvalsh(partial_transpose(rho, 1))
        np.testing.assert_allclose(a, b, atol=1e-13)
        with pytest.raises(InvalidInputError):
            partial_transpose(rho, 2)


class TestNegativity:
    def test_examples(self):
        assert negativity(M0) == pytest.approx(0.5, abs=1e-14)
        assert negativity(_coherent(1.3, 0.6)) == pytest.approx(0, abs=1e-12)
        rho = interpolated_state(PureSpin1(0, 1, 0), 0.3)
        assert min_bloch_eig(rho) == pytest.approx(-0.3, abs=1e-12)
        assert negativity(rho) == pytest.approx(0.15, abs=1e-10)

    def test_half_lambda(self):
        for rho in _random_states(5, 500):
            lam = min_bloch_eig(rho)
            if lam < 0:
                assert abs(negativity(rho) + lam / 2) < 1e-10
            else:
                assert negativity(rho) < 1e-10


class TestDickeEmbed:
    def test_examples(self):
        e = dicke_embed(PureSpin1(1, 0, 0).density())
        np.testing.assert_allclose(e, np.diag([1.0, 0, 0, 0]), atol=1e-15)
        d1 = np.array([0, 1, 1, 0]) / math.sqrt(2)
        np.testing.assert_allclose(dicke_embed(M0), np.outer(d1, d1), atol=1e-15)

    def test_coherent_product(self):
        # qubit factor carries the same azimuthal phase convention as the spin-1 state
        theta, phi = 1.1, 0.7
        q = np.array([math.cos(theta / 2), math.sin(theta / 2) * np.exp(-1j * phi)])
        prod = np.kron(q, q)
        np.testing.assert_allclose(dicke_embed(_coherent(theta, phi)), np.outer(prod, prod.conj()), atol=1e-12)

    def test_isometry(self):
        np.testing.assert_allclose(DICKE_ISOMETRY.T @ DICKE_ISOMETRY, np.eye(3), atol=1e-15)

    def test_symmetric_support(self):
        for rho in _random_states(6, 100):
            e = dicke_embed(rho)
            assert abs(np.trace(e) - 1) < 1e-13
            assert np.linalg.eigvalsh(e)[0] > -1e-13
            assert abs(SINGLET @ e @ SINGLET) < 1e-14

    def test_classical_image_is_product_mixture(self):
        rng = np.random.default_rng(7)
        angles = [CoherentAngles(math.acos(rng.uniform(-1, 1)), rng.uniform(0, 6.28)) for _ in range(4)]
        w = rng.dirichlet(np.ones(4))
        rho = mixture_density(w, angles)
        total = np.zeros((4, 4), complex)
        for wi, a in zip(w, angles):
            q = np.array([math.cos(a.theta / 2), math.sin(a.theta / 2) * np.exp(-1j * a.phi)])
            total += wi * np.outer(np.kron(q, q), np.kron(q, q).conj())
        np.testing.assert_allclose(dicke_embed(rho), total, atol=1e-12)


class TestConcurrence:
    def test_examples(self):
        assert spin1_concurrence(M0) == pytest.approx(1, abs=1e-12)
        assert spin1_concurrence(_coherent(2.0, 0.4)) == pytest.approx(0, abs=1e-7)
        assert spin1_concurrence(canonical_state(math.pi / 4).density()) == pytest.approx(1 / 3, abs=1e-9)

    def test_not_psd(self):
        bad = np.diag([1.2, -0.2, 0, 0]).astype(complex)
        with pytest.raises(InvalidInputError):
            concurrence(bad)
        with pytest.raises(InvalidInputError):
            concurrence(np.eye(3) / 3)

    def test_matches_wootters(self):
        rng = np.random.default_rng(8)
        for _ in range(200):
            g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
            rho = g @ g.conj().T
            rho /= np.trace(rho).real
            assert abs(concurrence(rho) - _wootters(rho)) < 1e-9

    def test_mixed_spin1_matches_wootters(self):
        for rho in _random_states(9, 200):
            e = dicke_embed(rho)
            assert abs(spin1_concurrence(rho) - _wootters(e)) < 1e-8

    @settings(max_examples=100)
    @given(st.lists(st.floats(-1, 1), min_size=6, max_size=6))
    def test_pure_relations(self, parts):
        v = np.array(parts[:3]) + 1j * np.array(parts[3:])
        if np.linalg.norm(v) < 1e-2:
            return
        rho = PureSpin1.from_vector(v, normalize=True).density()
        lam = min_bloch_eig(rho)
        c = spin1_concurrence(rho)
        assert abs(c + lam) < 1e-9
        assert abs(c - 2 * negativity(rho)) < 1e-9


def test_entanglement_equivalence_1e4():
    rng = np.random.default_rng(10)
    for _ in range(10_000):
        rho = DensityMatrix(oracles.hs_random_density(rng))
        assert is_classical(rho).classical == (negativity(rho) <= 1e-10)
