"""Lattice covariance-matrix oracle: exact free-field properties."""

import numpy as np
import pytest

from htent import (LatticeConfig, UnphysicalStateError, dispersion,
                   entropy_at_cut, gaussian_renyi, gaussian_vn,
                   quench_covariance, reduce_covariance, symplectic_spectrum,
                   thermal_covariance)
from htent.gaussian import CovarianceMatrix


def test_dispersion_continuum_limit():
    cfg = LatticeConfig(400, 1.0)
    eps = dispersion(cfg, 3.0)
    want = np.sqrt((np.arange(1, 11) * np.pi) ** 2 + 9.0)
    assert np.allclose(eps[:10], want, rtol=2e-4)


def test_vacuum_is_pure():
    cfg = LatticeConfig(60, 1.0)
    G = thermal_covariance(2.0, 0.0, cfg)
    gam = symplectic_spectrum(G)
    assert np.max(np.abs(gam - 0.5)) < 1e-8
    assert gaussian_vn(G) < 1e-6


def test_thermal_entropy_positive_and_extensive():
    cfg = LatticeConfig(80, 1.0)
    G = thermal_covariance(5.0, 6.0, cfg)
    s_half, _ = entropy_at_cut(G, cfg, 0.5)
    s_quarter, _ = entropy_at_cut(G, cfg, 0.25)
    assert s_quarter > 0.0
    assert s_half > 1.5 * s_quarter  # roughly linear in subsystem size


def test_quench_covariance_starts_from_thermal():
    cfg = LatticeConfig(50, 1.0)
    G0 = thermal_covariance(4.0, 0.0, cfg)
    Gq = quench_covariance(4.0, 0.0, 7.0, 0.0, cfg)
    assert np.allclose(Gq.Q, G0.Q, atol=1e-12)
    assert np.allclose(Gq.P, G0.P, atol=1e-12)


def test_quench_conserves_global_purity():
    cfg = LatticeConfig(40, 1.0)
    for t in (0.1, 0.37):
        G = quench_covariance(3.0, 0.0, 8.0, t, cfg)
        gam = symplectic_spectrum(G)
        assert np.max(np.abs(gam - 0.5)) < 1e-7


def test_renyi_ordering():
    cfg = LatticeConfig(60, 1.0)
    G = thermal_covariance(2.0, 1.0, cfg)
    sub = reduce_covariance(G, np.arange(0, 20))
    s1 = gaussian_vn(sub)
    s2 = gaussian_renyi(sub, 2.0)
    shalf = gaussian_renyi(sub, 0.5)
    assert shalf >= s1 >= s2 > 0.0


def test_unphysical_covariance_rejected():
    bad = CovarianceMatrix(Q=np.eye(3) * 0.01, P=np.eye(3) * 0.01,
                           R=np.zeros((3, 3)))
    with pytest.raises(UnphysicalStateError):
        symplectic_spectrum(bad)
