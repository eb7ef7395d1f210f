"""Mode allocation, gamma coefficients, and the Bogoliubov map."""

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.linalg import expm

from htent import (BogoliubovMatrix, ConfigError, CutBC, CutConfig,
                   CutoffScheme, Rounding, SingularSplitError, allocate_modes,
                   assemble_M, gamma_coefficients, split_frequencies,
                   squeeze_kernel, symplectic_deviation)


@pytest.mark.parametrize("s_F,frac,expect", [
    (10, 0.5, (5, 5)),
    (18, 1.0 / 3.0, (6, 12)),
    (10, 0.34, (3, 7)),
])
def test_density_allocation_half_up(s_F, frac, expect):
    cut = CutConfig(1.0, frac, s_F)
    assert allocate_modes(cut) == expect


def test_count_allocation_splits_evenly():
    cut = CutConfig(1.0, 0.3, 10, scheme=CutoffScheme.CONSTANT_COUNT)
    assert allocate_modes(cut) == (5, 5)
    with pytest.raises(ConfigError):
        allocate_modes(CutConfig(1.0, 0.5, 9,
                                 scheme=CutoffScheme.CONSTANT_COUNT))


def test_floor_rounding_differs_from_half_up():
    half_up = allocate_modes(CutConfig(1.0, 0.34, 10))
    floored = allocate_modes(CutConfig(1.0, 0.34, 10,
                                       rounding=Rounding.FLOOR))
    assert half_up == (3, 7)
    assert floored == (3, 7) or floored[0] <= half_up[0]


def test_empty_side_rejected():
    with pytest.raises(ConfigError):
        allocate_modes(CutConfig(1.0, 0.01, 4))


def test_split_frequencies_neumann_are_half_integer():
    cut = CutConfig(1.0, 0.5, 8)
    ql, qr = split_frequencies(cut, 4, 4)
    assert np.allclose(ql, (np.arange(1, 5) - 0.5) * np.pi / 0.5)
    assert np.allclose(qr, ql)


def gamma_quad_oracle(cut: CutConfig) -> tuple[np.ndarray, np.ndarray]:
    """Adaptive-quadrature projection integrals for the gamma coefficients."""
    s_left, s_right = allocate_modes(cut)
    ql, qr = split_frequencies(cut, s_left, s_right)
    L, ell = cut.L, cut.ell
    pk = np.arange(1, cut.s_F + 1) * np.pi / L
    gp = np.empty((cut.s_F, s_left + s_right))
    gm = np.empty_like(gp)
    for ki, p in enumerate(pk):
        for mi, q in enumerate(ql):
            ov = quad(lambda x: np.sin(q * x) * np.sin(p * x), 0.0, ell,
                      limit=200)[0]
            base = np.sqrt(p / (L * ell)) * ov / np.sqrt(q)
            gp[ki, mi] = base * (1.0 + q / p)
            gm[ki, mi] = base * (1.0 - q / p)
        for mi, q in enumerate(qr):
            if cut.half_integer:
                f = lambda x: np.sin(q * (L - x)) * np.sin(p * x)
            else:
                f = lambda x: np.sin(q * (x - ell)) * np.sin(p * x)
            ov = quad(f, ell, L, limit=200)[0]
            base = np.sqrt(p / (L * (L - ell))) * ov / np.sqrt(q)
            gp[ki, s_left + mi] = base * (1.0 + q / p)
            gm[ki, s_left + mi] = base * (1.0 - q / p)
    return gp, gm


@pytest.mark.parametrize("bc", [CutBC.NEUMANN, CutBC.DIRICHLET])
def test_gamma_against_quadrature_resonant_cut(bc):
    """ell/L = 1/2 makes split and full frequencies collide for Dirichlet;
    the integrated overlap must stay smooth through those resonances."""
    cut = CutConfig(1.0, 0.5, 8, cut_bc=bc)
    g = gamma_coefficients(cut)
    gp, gm = gamma_quad_oracle(cut)
    assert np.max(np.abs(g.plus - gp)) < 1e-10
    assert np.max(np.abs(g.minus - gm)) < 1e-10


def test_exact_symplectic_matrix_has_zero_deviation():
    rng = np.random.default_rng(7)
    Z = rng.normal(size=(5, 5))
    Z = 0.3 * (Z + Z.T)
    M = BogoliubovMatrix(u=expm(Z) / 2 + expm(-Z) / 2,
                         v=expm(Z) / 2 - expm(-Z) / 2)
    d_full, d_split = symplectic_deviation(M)
    assert d_full < 1e-12
    assert d_split < 1e-12
    # and the squeeze kernel recovers tanh(Z) / 2, symmetric
    ker = squeeze_kernel(M)
    tanh = expm(2 * Z) - np.eye(5)
    tanh = np.linalg.solve(expm(2 * Z) + np.eye(5), tanh)
    assert np.max(np.abs(ker.chi - 0.5 * tanh)) < 1e-10


def test_truncated_map_deviation_shrinks_with_more_full_modes():
    cut = CutConfig(1.0, 0.5, 8)
    g_sq = gamma_coefficients(cut)
    # keep the split towers, extend the full tower: the split-commutator
    # reconstruction must improve
    g_tall = gamma_coefficients(cut, n_full=64)
    M_sq = assemble_M(g_sq).M
    tall = np.block([[g_tall.plus, g_tall.minus],
                     [g_tall.minus, g_tall.plus]])
    n = 8
    K_sq = np.diag(np.concatenate([np.ones(n), -np.ones(n)]))
    K_tall = np.diag(np.concatenate([np.ones(64), -np.ones(64)]))
    dev_sq = np.max(np.abs(M_sq.T @ K_sq @ M_sq - K_sq))
    Kt = np.diag(np.concatenate([np.ones(n), -np.ones(n)]))
    dev_tall = np.max(np.abs(tall.T @ K_tall @ tall - Kt))
    assert dev_tall < 0.25 * dev_sq


def test_singular_split_raises():
    with pytest.raises(SingularSplitError):
        squeeze_kernel(BogoliubovMatrix(u=np.zeros((3, 3)), v=np.eye(3)))
