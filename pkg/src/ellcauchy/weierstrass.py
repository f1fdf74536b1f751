"""Weierstrass sigma and zeta functions over a period lattice.

The lattice is generated by 2*omega and 2*omega_prime with
Im(omega_prime/omega) > 0.  Sigma is evaluated through the first Jacobi
theta function

    sigma(x) = (2 omega / pi) * exp(eta x^2 / (2 omega))
               * theta1(pi x / (2 omega), q) / theta1'(0, q),

with nome q = exp(i pi omega_prime/omega).  The series converges
geometrically in |q| once the argument has been reduced to the fundamental
cell, so every evaluation first splits x = x_red + 2m*omega + 2m'*omega_prime
and re-applies the quasi-periodicity factors afterwards.

The constants eta = zeta(omega) and eta_prime = zeta(omega_prime) are
computed from theta derivatives at zero; they satisfy the Legendre relation
2*eta*omega_prime - 2*eta_prime*omega = i*pi, which is used as a correctness
sentinel throughout the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InvalidLattice, PoleAtLatticePoint

#: hard cap on theta-series terms; convergence needs far fewer for |q| < 1
_MAX_TERMS = 64

#: proximity threshold (in cell-reduced coordinates) for "is a lattice point"
LATTICE_POINT_TOL = 1e-12


@dataclass(frozen=True)
class Lattice:
    """Immutable evaluation context for all elliptic functions.

    ``omega`` and ``omega_prime`` are the half quasi-periods (full periods
    are 2*omega, 2*omega_prime); ``eta`` and ``eta_prime`` are the
    Weierstrass zeta values at the half periods.
    """

    omega: complex
    omega_prime: complex
    eta: complex
    eta_prime: complex
    nome: complex
    series_tol: float


@dataclass(frozen=True)
class CellReduced:
    """Decomposition x = x_reduced + 2*m*omega + 2*m_prime*omega_prime."""

    x_reduced: complex
    m: int
    m_prime: int


def _theta1(v, q, tol):
    """theta1(v, q) = 2 sum_{n>=0} (-1)^n q^{(n+1/2)^2} sin((2n+1)v)."""
    v = np.asarray(v, dtype=complex)
    s = np.zeros_like(v)
    for n in range(_MAX_TERMS):
        term = (-1) ** n * q ** ((n + 0.5) ** 2) * np.sin((2 * n + 1) * v)
        s = s + term
        if n > 2 and np.all(np.abs(term) <= tol * (np.abs(s) + 1e-300)):
            break
    return 2.0 * s


def _theta1_deriv(v, q, tol):
    """d/dv theta1(v, q)."""
    v = np.asarray(v, dtype=complex)
    s = np.zeros_like(v)
    for n in range(_MAX_TERMS):
        k = 2 * n + 1
        term = (-1) ** n * q ** ((n + 0.5) ** 2) * k * np.cos(k * v)
        s = s + term
        if n > 2 and np.all(np.abs(term) <= tol * (np.abs(s) + 1e-300)):
            break
    return 2.0 * s


@lru_cache(maxsize=64)
def _theta1_prime0(nome, tol):
    return complex(_theta1_deriv(0.0, nome, tol))


def lattice_new(omega, omega_prime, series_tol=1e-15):
    """Build a :class:`Lattice` with derived constants.

    eta comes from eta = -(pi^2 / (12 omega)) * theta1'''(0)/theta1'(0);
    eta_prime is then recovered from the Legendre relation, which makes the
    Legendre invariant exact up to the eta series error.

    Raises :class:`InvalidLattice` unless Im(omega_prime/omega) > 0.
    """
    omega = complex(omega)
    omega_prime = complex(omega_prime)
    if omega == 0 or omega_prime == 0:
        raise InvalidLattice("periods must be nonzero")
    tau = omega_prime / omega
    if tau.imag <= 0:
        raise InvalidLattice(f"Im(omega'/omega) = {tau.imag} must be positive")
    if not (0 < series_tol <= 1e-6):
        raise InvalidLattice(f"series_tol {series_tol} outside (0, 1e-6]")
    q = np.exp(1j * np.pi * tau)

    d1 = 0.0 + 0.0j  # theta1'(0)
    d3 = 0.0 + 0.0j  # theta1'''(0)
    for n in range(_MAX_TERMS):
        k = 2 * n + 1
        c = (-1) ** n * q ** ((n + 0.5) ** 2)
        d1 += 2.0 * c * k
        d3 += -2.0 * c * k**3
        if n > 2 and abs(c) * k**3 <= series_tol * abs(d1):
            break
    eta = -(np.pi**2) / (12 * omega) * d3 / d1
    eta_prime = (2 * eta * omega_prime - 1j * np.pi) / (2 * omega)
    return Lattice(
        omega=omega,
        omega_prime=omega_prime,
        eta=complex(eta),
        eta_prime=complex(eta_prime),
        nome=complex(q),
        series_tol=float(series_tol),
    )


def _reduce(lat, x):
    """Vectorized cell reduction; returns (x_reduced, m, m_prime) arrays."""
    x = np.asarray(x, dtype=complex)
    w1 = 2 * lat.omega
    w2 = 2 * lat.omega_prime
    ratio = w2 / w1
    b = np.imag(x / w1) / ratio.imag
    a = np.real(x / w1) - b * ratio.real
    m = np.floor(a + 0.5).astype(int)
    m_prime = np.floor(b + 0.5).astype(int)
    return x - m * w1 - m_prime * w2, m, m_prime


def reduce_to_cell(lat, x):
    """Reduce x into the fundamental parallelogram centered at 0."""
    xr, m, mp = _reduce(lat, complex(x))
    return CellReduced(x_reduced=complex(xr), m=int(m), m_prime=int(mp))


def lattice_distance(lat, x):
    """Distance from x to the nearest lattice point (elementwise)."""
    xr, _, _ = _reduce(lat, x)
    return np.abs(xr)


def sigma(lat, x):
    """Weierstrass sigma, elementwise over array input.

    Evaluates in the fundamental cell via the theta series and re-applies
    the quasi-periodicity factors
    sigma(x + Omega) = (-1)^(m + m' + m m') exp(eta_Omega (x + Omega/2)) sigma(x)
    for the lattice vector Omega = 2m*omega + 2m'*omega_prime,
    eta_Omega = 2m*eta + 2m'*eta_prime.
    """
    scalar = np.isscalar(x) or np.asarray(x).ndim == 0
    xr, m, mp = _reduce(lat, x)
    v = np.pi * xr / (2 * lat.omega)
    t1 = _theta1(v, lat.nome, lat.series_tol)
    d1 = _theta1_prime0(lat.nome, lat.series_tol)
    s0 = (2 * lat.omega / np.pi) * np.exp(lat.eta * xr**2 / (2 * lat.omega)) * t1 / d1
    big_omega = 2 * m * lat.omega + 2 * mp * lat.omega_prime
    eta_omega = 2 * m * lat.eta + 2 * mp * lat.eta_prime
    sign = np.where((m + mp + m * mp) % 2 == 0, 1.0, -1.0)
    out = sign * np.exp(eta_omega * (xr + big_omega / 2)) * s0
    return complex(out) if scalar else out


def zeta_w(lat, x):
    """Weierstrass zeta, zeta(x) = sigma'(x)/sigma(x).

    Uses zeta(x_red) = eta*x_red/omega + (pi/(2 omega)) theta1'(v)/theta1(v)
    plus the additive shift 2m*eta + 2m'*eta_prime.

    Raises :class:`PoleAtLatticePoint` within ``LATTICE_POINT_TOL`` of a
    lattice point.
    """
    xr, m, mp = _reduce(lat, complex(x))
    if abs(xr) < LATTICE_POINT_TOL:
        raise PoleAtLatticePoint(f"zeta pole at lattice point, x = {x}")
    v = np.pi * xr / (2 * lat.omega)
    ratio = _theta1_deriv(v, lat.nome, lat.series_tol) / _theta1(v, lat.nome, lat.series_tol)
    z = lat.eta * xr / lat.omega + np.pi / (2 * lat.omega) * ratio
    return complex(z + 2 * m * lat.eta + 2 * mp * lat.eta_prime)


def sigma_k(lat, n_size, k, x):
    """Auxiliary quasi-periodic product used by the elliptic factorization.

    sigma_k(x) = exp(2 eta' k x) * prod_{l=0}^{N-1}
                 sigma(x + ((N-2l-1)/N) omega - (2k/N) omega_prime)

    with N = n_size.  Under shifts by a full period it picks up the
    multiplier (-1)^N exp(2 eta N (x + omega)) (and the primed analogue).
    Elementwise over array input.
    """
    if not (1 <= k <= n_size):
        raise ValueError(f"k = {k} outside 1..{n_size}")
    x = np.asarray(x, dtype=complex)
    scalar = x.ndim == 0
    out = np.exp(2 * lat.eta_prime * k * x)
    for l in range(n_size):
        shift = (n_size - 2 * l - 1) / n_size * lat.omega - (2 * k / n_size) * lat.omega_prime
        out = out * sigma(lat, x + shift)
    return complex(out) if scalar else out
