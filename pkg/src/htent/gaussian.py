"""Covariance-matrix engine for free-boson entanglement, used as an
independent cross-check of the Fock-space pipeline.

The field on [0, L] with Dirichlet ends is discretized on K sites
x_n = n a, a = L/(K+1), keeping the relativistic dispersion
eps_k = sqrt((k pi / L)^2 + m^2).  Thermal and quenched Gaussian states
are fully described by their second moments; entropies follow from the
symplectic spectrum of the reduced covariance matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigvalsh, sqrtm

from .errors import ConfigError, UnphysicalStateError


@dataclass(frozen=True)
class LatticeConfig:
    K: int
    L: float = 1.0

    def __post_init__(self):
        if self.K < 1:
            raise ConfigError("need at least one site")
        if self.L <= 0:
            raise ConfigError("L must be positive")

    @property
    def a(self) -> float:
        return self.L / (self.K + 1)

    @property
    def sites(self) -> np.ndarray:
        return self.a * np.arange(1, self.K + 1)


@dataclass(frozen=True)
class CovarianceMatrix:
    """Second moments of (phi_n, pi_n): Q = <phi phi>, P = <pi pi>,
    R = <{phi, pi}/2>, all K x K, in lattice units (fields carry one
    factor of the spacing a)."""

    Q: np.ndarray
    P: np.ndarray
    R: np.ndarray

    @property
    def K(self) -> int:
        return self.Q.shape[0]

    @property
    def gamma(self) -> np.ndarray:
        return np.block([[self.Q, self.R], [self.R.T, self.P]])


def dispersion(cfg: LatticeConfig, m: float) -> np.ndarray:
    k = np.arange(1, cfg.K + 1)
    return np.sqrt((k * np.pi / cfg.L) ** 2 + m ** 2)


def _sine_basis(cfg: LatticeConfig) -> np.ndarray:
    """Rows index modes k, columns sites n; scaled to be orthogonal."""
    k = np.arange(1, cfg.K + 1)[:, None]
    n = np.arange(1, cfg.K + 1)[None, :]
    return np.sqrt(2.0 / (cfg.K + 1)) * np.sin(k * n * np.pi / (cfg.K + 1))


def _coth_over_2(x: np.ndarray) -> np.ndarray:
    # coth(x)/1 with the x -> inf limit 1; x = eps/(2T)
    return 1.0 / np.tanh(x)


def thermal_covariance(m: float, T: float, cfg: LatticeConfig
                       ) -> CovarianceMatrix:
    """Thermal (or T = 0 ground) state of the mass-m boson.

    Modewise <phi_k phi_k> = coth(eps/2T)/(2 eps), <pi_k pi_k> =
    eps coth(eps/2T)/2, rotated to position space by the discrete sine
    transform.  Site variables absorb one lattice spacing so that the
    symplectic units are dimensionless.
    """
    if T < 0 or m < 0:
        raise ConfigError("mass and temperature must be non-negative")
    eps = dispersion(cfg, m)
    cth = np.ones_like(eps) if T == 0 else _coth_over_2(eps / (2.0 * T))
    W = _sine_basis(cfg)
    Q = W.T @ np.diag(cth / (2.0 * eps)) @ W
    P = W.T @ np.diag(0.5 * eps * cth) @ W
    return CovarianceMatrix(Q=Q, P=P, R=np.zeros_like(Q))


def quench_covariance(m0: float, T0: float, m: float, t: float,
                      cfg: LatticeConfig) -> CovarianceMatrix:
    """Mass quench m0 -> m: thermal initial moments propagated modewise.

    phi_k(t) = cos(e t) phi_k + sin(e t)/e pi_k and the conjugate
    relation rotate each mode's 2x2 covariance block; the R block is
    generally nonzero for t > 0.
    """
    eps0 = dispersion(cfg, m0)
    cth = np.ones_like(eps0) if T0 == 0 else _coth_over_2(eps0 / (2.0 * T0))
    q0 = cth / (2.0 * eps0)
    p0 = 0.5 * eps0 * cth
    eps = dispersion(cfg, m)
    c, s = np.cos(eps * t), np.sin(eps * t)
    qt = c ** 2 * q0 + (s / eps) ** 2 * p0
    pt = (eps * s) ** 2 * q0 + c ** 2 * p0
    rt = -eps * s * c * q0 + s * c / eps * p0
    W = _sine_basis(cfg)
    return CovarianceMatrix(Q=W.T @ np.diag(qt) @ W,
                            P=W.T @ np.diag(pt) @ W,
                            R=W.T @ np.diag(rt) @ W)


def reduce_covariance(G: CovarianceMatrix, sites: slice | np.ndarray
                      ) -> CovarianceMatrix:
    """Principal submatrices over the kept lattice sites."""
    if isinstance(sites, slice):
        idx = np.arange(G.K)[sites]
    else:
        idx = np.asarray(sites)
    if idx.size == 0:
        raise ConfigError("site selection is empty")
    ix = np.ix_(idx, idx)
    return CovarianceMatrix(Q=G.Q[ix], P=G.P[ix], R=G.R[ix])


def symplectic_spectrum(G: CovarianceMatrix) -> np.ndarray:
    """Positive halves of the eigenvalues of i J Gamma, ascending.

    Computed from the Hermitian equivalent i Gamma^(1/2) J Gamma^(1/2),
    which handles a nonzero R block without a general complex
    eigensolver.
    """
    K = G.K
    J = np.zeros((2 * K, 2 * K))
    J[:K, K:] = np.eye(K)
    J[K:, :K] = -np.eye(K)
    root = sqrtm(G.gamma)
    if np.iscomplexobj(root):
        if np.max(np.abs(root.imag)) > 1e-8:
            raise UnphysicalStateError("covariance matrix not positive")
        root = root.real
    herm = 1j * (root @ J @ root)
    ev = eigvalsh(herm)
    gam = np.sort(ev[ev > 0])
    if gam.size != K or gam[0] < 0.5 - 1e-6:
        raise UnphysicalStateError(
            f"symplectic spectrum violates the uncertainty bound "
            f"(min {gam[0] if gam.size else float('nan'):.6g})")
    return gam


def gaussian_vn(G: CovarianceMatrix) -> float:
    gam = symplectic_spectrum(G)
    up = gam + 0.5
    dn = np.maximum(gam - 0.5, 1e-300)
    s = up * np.log(up) - np.where(gam - 0.5 > 1e-12, dn * np.log(dn), 0.0)
    return float(s.sum())


def gaussian_renyi(G: CovarianceMatrix, alpha: float) -> float:
    if alpha <= 0 or alpha == 1.0:
        raise ConfigError("alpha must be positive and different from 1")
    gam = symplectic_spectrum(G)
    up = (gam + 0.5) ** alpha
    dn = (np.maximum(gam - 0.5, 0.0)) ** alpha
    return float(np.log(up - dn).sum() / (alpha - 1.0))


def entropy_at_cut(G: CovarianceMatrix, cfg: LatticeConfig, ell: float,
                   alphas=()) -> tuple[float, dict[float, float]]:
    """Entropies of the subsystem [0, ell]: sites with x_n <= ell."""
    idx = np.where(cfg.sites <= ell + 1e-12)[0]
    red = reduce_covariance(G, idx)
    ren = {a: gaussian_renyi(red, a) for a in alphas}
    return gaussian_vn(red), ren
