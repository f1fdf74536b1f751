"""Sigma/zeta evaluator against independent oracles and quasi-periodicity."""

import numpy as np
import pytest

from ellcauchy import (
    InvalidLattice,
    PoleAtLatticePoint,
    lattice_new,
    reduce_to_cell,
    sigma,
    sigma_k,
    zeta_w,
)
from ellcauchy.weierstrass import lattice_distance

from conftest import cell_points


def lattice_sum_zeta(lat, x, m_max=200):
    """Truncated Eisenstein sum for zeta; symmetric truncation cancels the
    odd tail so the error is O(1/m_max^2)."""
    ms = np.arange(-m_max, m_max + 1)
    s = (2 * lat.omega * ms[:, None] + 2 * lat.omega_prime * ms[None, :]).ravel()
    s = s[np.abs(s) > 1e-12]
    return 1 / x + np.sum(1 / (x - s) + 1 / s + x / s**2)


def lattice_product_sigma(lat, x, m_max=40):
    """Direct truncated lattice product for sigma (slowly convergent)."""
    ms = np.arange(-m_max, m_max + 1)
    s = (2 * lat.omega * ms[:, None] + 2 * lat.omega_prime * ms[None, :]).ravel()
    s = s[np.abs(s) > 1e-12]
    return x * np.exp(np.sum(np.log1p(-x / s) + x / s + x**2 / (2 * s**2)))


class TestLattice:
    def test_legendre_relation(self, lat):
        res = 2 * lat.eta * lat.omega_prime - 2 * lat.eta_prime * lat.omega - 1j * np.pi
        assert abs(res) < 1e-12

    @pytest.mark.parametrize("tau", [0.3 + 0.7j, 1j, -0.5 + 1.2j, 0.1 + 3j])
    def test_legendre_across_lattices(self, tau):
        lat = lattice_new(1.0, tau)
        res = 2 * lat.eta * lat.omega_prime - 2 * lat.eta_prime * lat.omega - 1j * np.pi
        assert abs(res) < 1e-12

    def test_square_lattice_eta(self):
        # for omega = 1, omega' = i the constant eta is real and equals pi/4
        lat = lattice_new(1.0, 1j)
        assert abs(lat.eta.imag) < 1e-12
        assert abs(lat.eta - np.pi / 4) < 1e-10
        assert abs(lat.eta - lattice_sum_zeta(lat, lat.omega)) < 1e-4

    def test_eta_matches_lattice_sum(self, lat):
        assert abs(lat.eta - lattice_sum_zeta(lat, lat.omega)) < 1e-4 * abs(lat.eta)

    def test_invalid_lattice(self):
        with pytest.raises(InvalidLattice):
            lattice_new(1.0, -1j)
        with pytest.raises(InvalidLattice):
            lattice_new(0.0, 1j)
        with pytest.raises(InvalidLattice):
            lattice_new(1.0, 1j, series_tol=1.0)

    def test_nome_inside_unit_disc(self, lat):
        assert abs(lat.nome) < 1


class TestReduceToCell:
    def test_origin(self, lat):
        r = reduce_to_cell(lat, 0.0)
        assert (r.x_reduced, r.m, r.m_prime) == (0.0, 0, 0)

    def test_exact_lattice_vector(self, lat):
        r = reduce_to_cell(lat, 2 * lat.omega)
        assert abs(r.x_reduced) < 1e-14
        assert (r.m, r.m_prime) == (1, 0)

    def test_generic_shift(self, lat):
        r = reduce_to_cell(lat, 2 * lat.omega + 2 * lat.omega_prime + 0.1)
        assert abs(r.x_reduced - 0.1) < 1e-13
        assert (r.m, r.m_prime) == (1, 1)

    def test_roundtrip(self, lat, rng):
        for x in rng.standard_normal(20) + 1j * rng.standard_normal(20):
            r = reduce_to_cell(lat, x)
            back = r.x_reduced + 2 * r.m * lat.omega + 2 * r.m_prime * lat.omega_prime
            assert abs(back - x) < 1e-12 * max(1.0, abs(x))


class TestSigma:
    def test_zero(self, lat):
        assert sigma(lat, 0.0) == 0.0

    def test_small_argument(self, lat):
        assert abs(sigma(lat, 1e-4) / 1e-4 - 1) < 1e-12

    def test_normalization_at_1e3(self, lat):
        assert abs(sigma(lat, 1e-3) / 1e-3 - 1) < 1e-10

    def test_odd(self, lat, rng):
        x = cell_points(lat, rng, 100)
        s = sigma(lat, x)
        assert np.abs(sigma(lat, -x) + s).max() < 1e-12 * np.abs(s).max()

    @pytest.mark.parametrize("period_attr,eta_attr", [("omega", "eta"), ("omega_prime", "eta_prime")])
    def test_monodromy(self, lat, rng, period_attr, eta_attr):
        w = getattr(lat, period_attr)
        e = getattr(lat, eta_attr)
        x = cell_points(lat, rng, 50)
        lhs = sigma(lat, x + 2 * w)
        rhs = -np.exp(2 * e * (x + w)) * sigma(lat, x)
        assert np.abs(lhs - rhs).max() / np.abs(rhs).max() < 1e-10

    def test_elliptic_ratio_is_periodic(self, lat, rng):
        # f(x) = prod sigma(x-a)/sigma(x-b) with sum(a) = sum(b) has both periods
        a = cell_points(lat, rng, 3)
        b = cell_points(lat, rng, 3)
        b[-1] = b[:-1].sum() * -1 + a.sum()  # enforce sum(a - b) = 0

        def f(x):
            return np.prod(sigma(lat, x - a) / sigma(lat, x - b))

        for x in cell_points(lat, rng, 5):
            base = f(x)
            assert abs(f(x + 2 * lat.omega) - base) < 1e-10 * abs(base)
            assert abs(f(x + 2 * lat.omega_prime) - base) < 1e-10 * abs(base)

    def test_matches_lattice_product(self, lat, rng):
        # slow-converging direct product; loose tolerance
        pts = 0.5 * cell_points(lat, rng, 20)
        for x in pts:
            ref = lattice_product_sigma(lat, x)
            assert abs(sigma(lat, x) - ref) < 1e-6 * abs(ref)


class TestZeta:
    def test_eta_at_half_period(self, lat):
        assert abs(zeta_w(lat, lat.omega) - lat.eta) < 1e-12
        assert abs(zeta_w(lat, lat.omega_prime) - lat.eta_prime) < 1e-12

    def test_odd(self, lat, rng):
        for x in cell_points(lat, rng, 10):
            assert abs(zeta_w(lat, -x) + zeta_w(lat, x)) < 1e-10 * abs(zeta_w(lat, x))

    def test_finite_difference_oracle(self, lat, rng):
        h = 1e-5
        for x in cell_points(lat, rng, 10):
            fd = (sigma(lat, x + h) - sigma(lat, x - h)) / (2 * h * sigma(lat, x))
            assert abs(zeta_w(lat, x) - fd) < 1e-6

    def test_pole_at_lattice_point(self, lat):
        with pytest.raises(PoleAtLatticePoint):
            zeta_w(lat, 0.0)
        with pytest.raises(PoleAtLatticePoint):
            zeta_w(lat, 2 * lat.omega + 2 * lat.omega_prime)


class TestSigmaK:
    def test_single_factor_case(self, lat):
        x = 0.17 + 0.05j
        expect = np.exp(2 * lat.eta_prime * x) * sigma(lat, x - 2 * lat.omega_prime)
        assert abs(sigma_k(lat, 1, 1, x) - expect) < 1e-12 * abs(expect)

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
    def test_monodromy_both_periods(self, lat, n):
        x = 0.11 + 0.07j
        sign = (-1.0) ** n
        for k in range(1, n + 1):
            base = sigma_k(lat, n, k, x)
            lhs = sigma_k(lat, n, k, x + 2 * lat.omega)
            rhs = sign * np.exp(2 * lat.eta * n * (x + lat.omega)) * base
            assert abs(lhs - rhs) < 1e-10 * abs(rhs)
            lhs = sigma_k(lat, n, k, x + 2 * lat.omega_prime)
            rhs = sign * np.exp(2 * lat.eta_prime * n * (x + lat.omega_prime)) * base
            assert abs(lhs - rhs) < 1e-10 * abs(rhs)

    def test_k_out_of_range(self, lat):
        with pytest.raises(ValueError):
            sigma_k(lat, 3, 4, 0.1)


def test_lattice_distance(lat):
    assert lattice_distance(lat, 2 * lat.omega) < 1e-13
    assert abs(lattice_distance(lat, 0.1) - 0.1) < 1e-13
