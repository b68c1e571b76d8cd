import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import assert_sharp_inequality
from etlab.discretize import (
    cell_replacement_potential,
    discretize_measure,
    moment_match_cell,
    rationalize,
    sharpness_pipeline,
)
from etlab.errors import NegativeDensity, QTooSmall
from etlab.extremal import rho_type1
from etlab.measures import (
    EmpiricalMeasure,
    MixedMeasureT,
    UniformPlusDensity,
    discrepancy_empirical,
    height_T,
)


def constant(c):
    return lambda x: np.full_like(np.asarray(x, dtype=float), c)


class TestMomentMatch:
    def test_constant_cell(self):
        m1, m2 = moment_match_cell(constant(1.0), 0.0, 0.125)
        assert m1 == pytest.approx(0.0625, abs=1e-12)
        assert m2 == pytest.approx(0.0625, abs=1e-12)

    def test_linear_ramp(self):
        m1, m2 = moment_match_cell(lambda x: np.asarray(x, dtype=float), 0.0, 1.0)
        assert m1 == pytest.approx(1.0 / 6.0, abs=1e-10)
        assert m2 == pytest.approx(1.0 / 3.0, abs=1e-10)

    def test_zero_density(self):
        m1, m2 = moment_match_cell(constant(0.0), 0.2, 0.3)
        assert m1 == 0.0 and m2 == 0.0

    def test_negative_density_rejected(self):
        with pytest.raises(NegativeDensity):
            moment_match_cell(lambda x: np.asarray(x, dtype=float) - 10.0, 0.0, 1.0)

    @given(st.floats(0.1, 2.0), st.floats(-1.0, 1.0))
    @settings(max_examples=40, deadline=None)
    def test_moments_conserved(self, c0, c1):
        a, b = 0.25, 0.375
        dens = lambda x: c0 + (c1 if c1 > -c0 * 0.5 else 0.0) * (np.asarray(x) - a)
        m1, m2 = moment_match_cell(dens, a, b)
        from etlab.kernels import integrate_piece
        s0 = integrate_piece(dens, a, b)
        s1 = integrate_piece(lambda x: np.asarray(x) * dens(x), a, b)
        assert m1 + m2 == pytest.approx(s0, abs=1e-12)
        assert m1 * a + m2 * b == pytest.approx(s1, abs=1e-12)


class TestDiscretize:
    def test_uniform_density(self):
        uni = MixedMeasureT(diracs=(), density=UniformPlusDensity(np.zeros(1)),
                            even=True)
        em = discretize_measure(uni, 8)
        assert em.n_atoms == 8
        assert np.allclose(em.weights, 0.125, atol=1e-10)
        assert em.total == pytest.approx(1.0, abs=1e-10)

    def test_type1_dirac_kept_and_discrepancy(self):
        rho = rho_type1(0.2)
        em = discretize_measure(rho, 512)
        at_zero = em.weights[np.argmin(np.abs(em.angles))]
        assert at_zero >= 0.4 - 1e-12
        d, w = discrepancy_empirical(em)
        assert d == pytest.approx(at_zero, abs=1e-12)
        assert em.total == pytest.approx(1.0, abs=1e-10)

    def test_mass_conservation_tight(self):
        rho = rho_type1(0.05)
        for n in (64, 256):
            em = discretize_measure(rho, n)
            assert em.total == pytest.approx(1.0, abs=1e-10)

    def test_height_drift_scaling(self):
        # H[rho_n] <= H[rho] + C log n / n with a stable fitted constant
        rho = rho_type1(0.05)
        h_cont, _ = height_T(rho, 512)
        drifts = {}
        for n in (256, 1024):
            em = discretize_measure(rho, n)
            h_n, _ = height_T(em, 2048)
            drifts[n] = h_n - h_cont
            assert drifts[n] > -1e-9
        c_fit = drifts[1024] / (math.log(1024) / 1024)
        assert drifts[256] <= 1.8 * c_fit * math.log(256) / 256
        assert drifts[256] >= 0.4 * c_fit * math.log(256) / 256

    def test_convexity_transfer_outside_cells(self, rng):
        # the moment-matched swap raises the potential at every grid point
        # outside the cell
        rho = rho_type1(0.2)
        dens = rho.density.evaluate
        xs = (np.arange(2048) + 0.5) / 2048 - 0.5
        gap = rho.density.gap
        n = 256
        for j in rng.choice(np.arange(int(gap * n) + 1, n // 2), size=8, replace=False):
            a, b = j / n, (j + 1) / n
            outside = (xs < a - 1e-9) | (xs > b + 1e-9)
            delta = cell_replacement_potential(dens, a, b, xs[outside])
            assert float(delta.min()) >= -1e-9


class TestRationalize:
    def test_exact_halves(self):
        em = EmpiricalMeasure.from_pairs([(0.0, 0.5), (0.25, 0.5)])
        rq = rationalize(em, 2)
        assert np.allclose(rq.weights, 0.5)

    def test_thirds_into_quarters(self):
        em = EmpiricalMeasure.from_pairs([(0.0, 1 / 3), (0.25, 1 / 3), (0.5, 1 / 3)])
        rq = rationalize(em, 4)
        assert rq.total == pytest.approx(1.0)
        assert np.all(np.abs(rq.weights - 1 / 3) <= 0.25 + 1e-12)

    def test_boundary_drop(self):
        em = EmpiricalMeasure.from_pairs([(0.0, 0.999), (0.25, 0.001)])
        rq = rationalize(em, 100)
        assert rq.n_atoms == 1 and rq.weights[0] == 1.0

    def test_q_too_small(self):
        em = EmpiricalMeasure.from_pairs([(k / 5, 0.2) for k in range(5)])
        with pytest.raises(QTooSmall):
            rationalize(em, 4)

    @given(st.lists(st.floats(0.01, 1.0), min_size=1, max_size=20),
           st.integers(30, 200))
    @settings(max_examples=60, deadline=None)
    def test_apportionment_properties(self, raw, q):
        w = np.asarray(raw)
        w = w / w.sum()
        em = EmpiricalMeasure.from_pairs([(i / len(w) - 0.49, wi)
                                          for i, wi in enumerate(w)])
        rq = rationalize(em, q)
        nums = rq.weights * q
        assert np.allclose(nums, np.rint(nums), atol=1e-9)
        assert int(round(nums.sum())) == q
        # per-atom error bound, checked against the surviving atoms
        kept = {round(a, 12): wt for a, wt in zip(rq.angles, rq.weights)}
        for a, wt in zip(em.angles, em.weights):
            got = kept.get(round(a, 12), 0.0)
            assert abs(got - wt) <= 1.0 / q + 1e-12
        # cumulative closeness, the property the height functional needs
        orig_cum = np.cumsum(em.weights)
        new_w = np.array([kept.get(round(a, 12), 0.0) for a in em.angles])
        assert np.max(np.abs(np.cumsum(new_w) - orig_cum)) <= 0.5 / q + 1e-12


class TestPipeline:
    def test_degenerate_top(self):
        rep = sharpness_pipeline(0.5, 64, 64)
        assert rep.continuum.D == pytest.approx(1.0)
        assert rep.continuum.H == pytest.approx(math.log(2.0), abs=1e-9)
        assert rep.continuum.G == pytest.approx(math.log(2.0), abs=1e-9)

    def test_chain_small(self):
        rep = sharpness_pipeline(0.1, 256, 512, include_polynomial=True)
        assert rep.continuum.G == pytest.approx(0.5034, abs=2e-3)
        assert rep.continuum.G > 0.5
        assert rep.discrete.G > 0.5
        assert rep.rational.G > 0.5
        for stage in (rep.continuum, rep.discrete, rep.rational, rep.polynomial):
            assert_sharp_inequality(stage.D, stage.H)
        # polynomial realization reproduces the rational measure's functionals
        assert rep.polynomial.D == pytest.approx(rep.rational.D, abs=1e-12)
        assert rep.polynomial.H == pytest.approx(rep.rational.H, abs=1e-5)

    def test_json_report(self):
        rep = sharpness_pipeline(0.2, 128, 256)
        doc = rep.to_json()
        assert doc["continuum"]["G"] > 0.5 and doc["polynomial"] is None

    def test_g_rational_floor_at_stated_parameters(self):
        # Oracle record for the full-size chain (m=0.05, n=q=4096): with q
        # equal to n every integer rounding must drop ~150 near-edge atoms,
        # which dents the potential by ~ log(n)/q, so G_rational lands near
        # 0.63 -- not the 0.52 the acceptance check asks for.  The
        # acceptance suite asserts that threshold verbatim; this test
        # freezes what the construction actually yields.
        rep = sharpness_pipeline(0.05, 4096, 4096)
        assert rep.rational.G == pytest.approx(0.6317, abs=5e-3)
        assert rep.rational.G > 0.5
        assert rep.discrete.G == pytest.approx(0.5177, abs=2e-3)

    def test_g_rational_reaches_threshold_with_fine_denominator(self):
        # with q >> n the rational stage tracks the discrete one and the
        # intended 0.52 threshold is met
        rep = sharpness_pipeline(0.05, 4096, 1 << 20)
        assert 0.5 < rep.rational.G <= 0.52
