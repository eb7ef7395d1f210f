"""State preparation in the truncated full-interval basis.

Ground states, Boltzmann thermal states, and sudden-quench evolution.
Equilibrium paths stay in real arithmetic; only quench evolution is
complex.  All density matrices are unit-trace and Hermitian by
construction.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh

from .errors import ConfigError
from .models import HamiltonianMatrix


@dataclass(frozen=True)
class DensityMatrix:
    rho: np.ndarray
    basis_tag: str


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray   # ascending
    eigenvectors: np.ndarray  # columns, orthonormal


def decompose(H: HamiltonianMatrix | np.ndarray) -> SpectralDecomposition:
    mat = H.H if isinstance(H, HamiltonianMatrix) else np.asarray(H)
    w, v = eigh(mat)
    return SpectralDecomposition(w, v)


def _tag(H: HamiltonianMatrix | np.ndarray) -> str:
    if isinstance(H, HamiltonianMatrix):
        return f"full:{H.basis.dim}"
    return f"matrix:{np.asarray(H).shape[0]}"


def ground_state(H: HamiltonianMatrix | np.ndarray) -> DensityMatrix:
    """Rank-1 projector onto the lowest eigenvector.

    A numerically degenerate ground level triggers a warning and picks the
    lowest-index vector, which eigh orders deterministically.
    """
    dec = decompose(H)
    scale = max(abs(dec.eigenvalues[0]), abs(dec.eigenvalues[-1]), 1.0)
    if len(dec.eigenvalues) > 1 and \
            dec.eigenvalues[1] - dec.eigenvalues[0] < 1e-10 * scale:
        warnings.warn("ground state is numerically degenerate; "
                      "choosing the first eigenvector")
    psi = dec.eigenvectors[:, 0]
    return DensityMatrix(np.outer(psi, psi), _tag(H))


def thermal_state(H: HamiltonianMatrix | np.ndarray, T: float) -> DensityMatrix:
    """Boltzmann state exp(-H/T)/Z with a max-exponent shift."""
    if T <= 0:
        raise ConfigError("temperature must be positive")
    dec = decompose(H)
    expo = -(dec.eigenvalues - dec.eigenvalues[0]) / T
    pops = np.exp(expo)
    pops /= pops.sum()
    rho = (dec.eigenvectors * pops) @ dec.eigenvectors.T
    return DensityMatrix(rho, _tag(H))


def quench_evolve(rho0: DensityMatrix, H_post: HamiltonianMatrix | np.ndarray,
                  times) -> list[DensityMatrix]:
    """rho(t) = exp(-iHt) rho0 exp(iHt), one decomposition for all times."""
    dec = decompose(H_post)
    v = dec.eigenvectors
    rho_e = v.T @ rho0.rho @ v
    out = []
    for t in times:
        phase = np.exp(-1j * dec.eigenvalues * t)
        rot = phase[:, None] * rho_e * phase.conj()[None, :]
        out.append(DensityMatrix(v @ rot @ v.conj().T, rho0.basis_tag))
    return out
