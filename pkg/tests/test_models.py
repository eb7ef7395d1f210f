"""Model Hamiltonians: spectra, vertex operator, coupling constants."""

import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.linalg import expm

from htent import (ConfigError, Model, ModelParams, breather_mass,
                   enumerate_full_basis, h_massive, h_massless,
                   h_sine_gordon, kappa, vertex_matrix)
from htent.states import decompose


def test_massless_diagonal():
    basis = enumerate_full_basis(6)
    H = h_massless(basis, L=2.0).H
    assert np.count_nonzero(H - np.diag(np.diag(H))) == 0
    want = (np.pi / 2.0) * (np.array(basis.levels()) - 1.0 / 24.0)
    assert np.allclose(np.diag(H), want)


def test_massive_single_particle_levels():
    """Gaps above the vacuum approach the free dispersion sqrt(k^2 pi^2 + m^2)."""
    basis = enumerate_full_basis(14)
    m = 5.0
    e = decompose(h_massive(basis, 1.0, m)).eigenvalues
    for k in (1, 2):
        want = math.sqrt((k * math.pi) ** 2 + m ** 2)
        got = e[k] - e[0]
        assert abs(got - want) / want < 0.05


def test_massive_zero_mass_reduces_to_massless():
    basis = enumerate_full_basis(8)
    assert np.allclose(h_massive(basis, 1.0, 0.0).H,
                       h_massless(basis, 1.0).H)


def vertex_quad_oracle(basis, q: float, L: float) -> np.ndarray:
    """Integrated normal-ordered vertex operator, assembled from ladder
    matrices and adaptive quadrature.

    For each x the per-mode factor exp(i q f_k a+) exp(i q f_k a) with
    f_k = (2 / sqrt(k)) sin(k pi x / L) is evaluated by exact matrix
    exponentials on a per-mode truncated ladder space (triangular, hence
    exact elementwise); the product over modes is weighted by the
    normal-ordering factor [2 sin(pi x / L)]^(-q^2).
    """
    dim = basis.dim
    nmc = basis.mode_count
    caps = [0] * nmc
    for st in basis.states:
        for k1, n in enumerate(st):
            caps[k1] = max(caps[k1], n)
    ladders = []
    for cap in caps:
        d = cap + 1
        a = np.diag(np.sqrt(np.arange(1, d)), 1)
        ladders.append(a)
    padded = [tuple(st) + (0,) * (nmc - len(st)) for st in basis.states]

    def element(ai, bi, x):
        w = (2.0 * math.sin(math.pi * x / L)) ** (-q * q)
        val = w
        for k1 in range(nmc):
            na, nb = padded[ai][k1], padded[bi][k1]
            if caps[k1] == 0:
                continue
            f = (2.0 / math.sqrt(k1 + 1)) * math.sin((k1 + 1) * math.pi * x / L)
            a = ladders[k1]
            Mk = expm(1j * q * f * a.T) @ expm(1j * q * f * a)
            val = val * Mk[na, nb]
        return val

    V = np.zeros((dim, dim), dtype=complex)
    for ai in range(dim):
        for bi in range(dim):
            re = quad(lambda x: element(ai, bi, x).real, 0.0, L, limit=200)[0]
            im = quad(lambda x: element(ai, bi, x).imag, 0.0, L, limit=200)[0]
            V[ai, bi] = re + 1j * im
    return V


def test_vertex_matrix_against_operator_quadrature():
    basis = enumerate_full_basis(3)
    q = 0.5
    got = vertex_matrix(basis, q, 1.0)
    want = vertex_quad_oracle(basis, q, 1.0)
    assert np.max(np.abs(got - want.real)) < 1e-8
    # entries between states of opposite level parity are purely imaginary
    for a in range(basis.dim):
        for b in range(basis.dim):
            if (basis.level2(basis.states[a])
                    + basis.level2(basis.states[b])) % 2:
                assert abs(want[a, b].real) < 1e-10


def test_vertex_matrix_symmetric_and_identity_at_zero_charge():
    basis = enumerate_full_basis(5)
    V = vertex_matrix(basis, 0.7, 1.0)
    assert np.max(np.abs(V - V.T)) < 1e-10
    V0 = vertex_matrix(basis, 0.0, 1.0)
    assert np.allclose(V0, np.eye(basis.dim), atol=1e-12)


def test_vertex_exponent_range_guard():
    basis = enumerate_full_basis(3)
    with pytest.raises(ConfigError):
        vertex_matrix(basis, 1.5, 1.0)


def test_kappa_against_high_precision_evaluation():
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 40
    for lam in (7.0, 17.0):
        delta = 1.0 / (1.0 + lam)
        D = mpmath.mpf(delta)
        pref = mpmath.gamma(D) / mpmath.gamma(1 - D) / mpmath.pi
        inner = (mpmath.sqrt(mpmath.pi) * mpmath.gamma(1 / (2 - 2 * D))
                 / (2 * mpmath.gamma(D / (2 - 2 * D))))
        want = float(pref * inner ** (2 - 2 * D))
        assert kappa(delta) == pytest.approx(want, rel=1e-12)


def test_breather_mass_guards():
    assert breather_mass(1, 7.0, 25.0) == pytest.approx(
        50.0 * math.sin(math.pi / 14.0))
    with pytest.raises(ConfigError):
        breather_mass(8, 7.0, 25.0)
    with pytest.raises(ConfigError):
        breather_mass(0, 7.0, 25.0)


def test_sine_gordon_gap_is_the_breather_mass():
    """Physical oracle for the vertex/coupling conventions: two parameter
    sets with the same nominal gap must both produce it spectrally."""
    basis = enumerate_full_basis(12)
    for lam, M in ((7.0, 25.0), (17.0, 60.29)):
        p = ModelParams(Model.SINE_GORDON, lam=lam, M_soliton=M)
        e = decompose(h_sine_gordon(basis, p)).eigenvalues
        m1 = breather_mass(1, lam, M)
        assert abs((e[1] - e[0]) - m1) / m1 < 0.12


def test_sine_gordon_param_validation():
    with pytest.raises(ConfigError):
        ModelParams(Model.SINE_GORDON, lam=0.5, M_soliton=1.0)
