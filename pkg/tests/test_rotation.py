import numpy as np
import pytest

from ergospectra.errors import InvalidInput, UnsupportedBase
from ergospectra.cocycle import LagrangianFrame, transfer_product
from ergospectra.model import constant_model, free_model
from ergospectra.rotation import (HomotopyPath, PhaseLedger, bridge_terms,
                                  char_poly_identity, conjugation_shift,
                                  frame_after, omega_matrix, phase_curves,
                                  rot_number, rot_number_batch)

from conftest import random_model


class TestHomotopyPath:
    def test_endpoints(self, rng):
        model = random_model(rng, m=2)
        path = HomotopyPath(model, 0.4, [0.13])
        assert np.abs(path.evaluate(0.0) - np.eye(4)).max() < 1e-12
        A1 = transfer_product(model, 0.4, [0.13], 1)
        assert np.abs(path.evaluate(1.0) - A1).max() < 1e-9

    def test_two_step_extension(self, rng):
        model = random_model(rng, m=2)
        path = HomotopyPath(model, -0.6, [0.42])
        A2 = transfer_product(model, -0.6, [0.42], 2)
        assert np.abs(path.evaluate(2.0) - A2).max() < 1e-9
        # interior point sits between the unit products, continuous in t
        mid = path.evaluate(1.5)
        assert np.all(np.isfinite(mid))

    def test_negative_t_rejected(self, rng):
        path = HomotopyPath(random_model(rng, m=1), 0.0, [0.0])
        with pytest.raises(InvalidInput):
            path.evaluate(-0.5)

    def test_continuity_near_unit_time(self, rng):
        model = random_model(rng, m=2)
        path = HomotopyPath(model, 0.2, [0.3])
        # first-order modulus of continuity: the gap at eps shrinks in
        # proportion to a coarse finite-difference slope of the path
        slope = np.abs(path.evaluate(1.0) - path.evaluate(0.99)).max() / 0.01
        eps = 1e-6
        gap = np.abs(path.evaluate(1.0 - eps) - path.evaluate(1.0)).max()
        assert gap < 4.0 * slope * eps + 1e-12


class TestPhaseLedger:
    def test_accumulates_small_steps(self):
        ledger = PhaseLedger()
        for ph in np.linspace(0, 1.5, 61)[1:]:
            ledger.record(ph)
        assert ledger.accumulated == pytest.approx(1.5, abs=1e-12)
        assert ledger.consistent()

    def test_wraparound(self):
        ledger = PhaseLedger(last_phase=0.9)
        ledger.record(0.05)  # crosses the integer upward by 0.15
        assert ledger.accumulated == pytest.approx(0.15)


class TestRotNumber:
    def test_free_center(self):
        est, ledger = rot_number(free_model(), 0.0, N=1000)
        assert abs(est - 0.5) < 1e-2
        assert ledger.consistent()

    def test_free_large_E(self):
        est, _ = rot_number(free_model(), 50.0, N=1000)
        assert abs(est) < 1e-2

    def test_below_spectrum_full_turn(self):
        est, _ = rot_number(free_model(), -3.0, N=1000)
        assert abs(est - 1.0) < 1e-2

    def test_fine_subdivision_oracle(self, rng):
        # N=1 accumulated phase is substep-size independent once resolved
        model = random_model(rng, m=2)
        coarse, _ = rot_number(model, 0.8, N=1, substeps=16)
        fine, _ = rot_number(model, 0.8, N=1, substeps=4096)
        assert abs(coarse - fine) < 1e-6

    def test_substep_halving_cauchy(self, rng):
        model = random_model(rng, m=1)
        a, _ = rot_number(model, 0.3, N=20, substeps=256)
        b, _ = rot_number(model, 0.3, N=20, substeps=512)
        assert abs(a - b) * 20 < 1e-7

    def test_frame_independence(self):
        model = free_model()
        frames = [LagrangianFrame.standard(1).stack,
                  np.array([[1.0], [1.0]]),
                  np.array([[0.0], [1.0]])]
        for N in (10, 100):
            vals, _ = rot_number_batch(model, 0.7, [0.0], frames, N)
            spread = vals.max() - vals.min()
            assert N * spread <= 1 + 1e-3


class TestCharPoly:
    def test_single_site(self):
        model = constant_model(np.array([[1.3]]))
        # U_z(2) = z - b exactly, so the residual is at rounding level
        assert char_poly_identity(model, [0.0], 1, 2.0 + 0.5j) < 1e-12

    def test_free_three_sites(self):
        assert char_poly_identity(free_model(), [0.0], 3, 0.0) < 1e-10

    def test_random_block(self, rng):
        model = random_model(rng, m=2)
        z = complex(rng.normal(), rng.normal())
        assert char_poly_identity(model, [0.21], 6, z) < 1e-8


class TestPhaseCurves:
    def test_free_non_increasing(self):
        curves = phase_curves(free_model(), [0.0], 4, np.linspace(-3, 3, 121))
        assert np.all(np.diff(curves.phases[:, 0]) <= 1e-9)

    def test_crossings_count_eigenvalues(self):
        # tracking to t = 3 sees H^2 of the free Laplacian, whose
        # eigenvalues are -1 and 1
        curves = phase_curves(free_model(), [0.0], 3, np.linspace(-3, 3, 121))
        assert curves.integer_crossings(0) == 2

    def test_above_spectrum_no_integer_values(self):
        curves = phase_curves(free_model(), [0.0], 4, np.linspace(3.0, 3.5, 11))
        frac = np.abs(curves.phases - np.round(curves.phases))
        assert np.all(frac > 1e-6)

    def test_bad_grid(self):
        with pytest.raises(InvalidInput):
            phase_curves(free_model(), [0.0], 3, [1.0, 0.5])


class TestBridge:
    def test_between_clusters(self, rng):
        model = random_model(rng, m=2)
        from ergospectra.model import restriction_eigenvalues
        ev = restriction_eigenvalues(model, [0.0], 8)
        gaps = np.diff(ev)
        k = int(np.argmax(gaps))
        E = 0.5 * (ev[k] + ev[k + 1])
        ell, mx = bridge_terms(model, [0.0], E, 8)
        assert ell - 1e-6 <= mx <= ell + model.m + 1e-6


class TestDerivative:
    def test_dW_dE_matches_generator(self, rng):
        model = random_model(rng, m=2)
        E, n = 0.35, 8
        h = 1e-6
        from ergospectra.cocycle import frame_to_unitary

        def W_at(energy):
            F = frame_after(model, energy, [0.0], n, normalize=False)
            return frame_to_unitary(LagrangianFrame(F, tol_symmetry=1e-6))

        dW = (W_at(E + h) - W_at(E - h)) / (2 * h)
        W = W_at(E)
        Omega = omega_matrix(model, E, [0.0], n)
        pred = 1j * W @ Omega
        assert np.abs(dW - pred).max() < 1e-4 * max(1.0, np.abs(pred).max())
        # the generator is Hermitian negative semidefinite
        w = np.linalg.eigvalsh(Omega)
        assert np.all(w <= 1e-8)


class TestConjugationShift:
    def test_zero_r(self):
        shift = conjugation_shift(free_model(), 3.0, [0], N=300)
        assert min(shift, 1 - shift) < 1e-6

    def test_half_degree(self):
        model = free_model()
        alpha = model.base.alpha[0]
        shift = conjugation_shift(model, 3.0, [1], N=500)
        expect = np.mod(-alpha / 2, 1.0)
        assert abs(shift - expect) < 5e-3

    def test_requires_torus(self):
        from ergospectra.model import BaseDynamics, CAT, ConstantPotential, \
            OperatorModel
        model = OperatorModel(1, np.eye(1), ConstantPotential([[0.0]]),
                              BaseDynamics(CAT))
        with pytest.raises(UnsupportedBase):
            conjugation_shift(model, 3.0, [1, 0], N=10)
