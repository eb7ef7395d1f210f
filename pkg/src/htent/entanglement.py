"""Entanglement measures of states mapped into the split product basis.

split_density conjugates a full-basis density matrix with the overlap
matrix and renormalizes; downstream functions compute partial traces,
von Neumann / Renyi entropies, mutual information, logarithmic
negativity, entanglement Hamiltonians, and DFT spectra of entropy time
series.  Pure states take a cheaper Schmidt route internally.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.linalg import eigh, eigvalsh, svd

from .errors import ConfigError, UnphysicalStateError
from .fock import ProductBasis
from .overlap import SplitIsometry
from .states import DensityMatrix

EIG_FLOOR = 1e-12


class Keep(Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class EntropyRecord:
    """One cut's worth of measures, as written to the CSV outputs."""

    cut_position: float
    S_vN: float
    S_renyi: dict[float, float] = field(default_factory=dict)
    S_L: float = 0.0
    S_R: float = 0.0
    S_LR: float = 0.0
    mutual_information: float = 0.0
    log_negativity: float = 0.0
    iso_defect: float = 0.0


def split_density(rho: DensityMatrix, U: SplitIsometry) -> DensityMatrix:
    """rho_LR = U rho U^T, symmetrized and normalized to unit trace."""
    out = U.U @ rho.rho @ U.U.conj().T
    out = 0.5 * (out + out.conj().T)
    tr = float(np.real(np.trace(out)))
    if tr < 0.5:
        warnings.warn(f"transformed trace {tr:.3g} below 0.5; "
                      "truncation too aggressive for this state")
    return DensityMatrix(out / tr, basis_tag=f"split:{U.prod.dim}")


def partial_trace(rho_lr: DensityMatrix, keep: Keep, prod: ProductBasis
                  ) -> DensityMatrix:
    dl, dr = prod.left.dim, prod.right.dim
    r4 = rho_lr.rho.reshape(dl, dr, dl, dr)
    if keep is Keep.LEFT:
        red = np.einsum("arbr->ab", r4)
    else:
        red = np.einsum("rarb->ab", r4)
    return DensityMatrix(red, basis_tag=f"{keep.value}:{red.shape[0]}")


def _clean_spectrum(rho: np.ndarray) -> np.ndarray:
    lam = eigvalsh(0.5 * (rho + rho.conj().T))
    if lam.min() < -1e-8:
        raise UnphysicalStateError(
            f"density matrix eigenvalue {lam.min():.3g} below -1e-8")
    return lam[lam > EIG_FLOOR]


def spectrum_entropy(lam: np.ndarray) -> float:
    lam = lam[lam > EIG_FLOOR]
    return float(-(lam * np.log(lam)).sum())


def von_neumann(rho: DensityMatrix | np.ndarray) -> float:
    mat = rho.rho if isinstance(rho, DensityMatrix) else rho
    return spectrum_entropy(_clean_spectrum(mat))


def renyi(rho: DensityMatrix | np.ndarray, alpha: float) -> float:
    if alpha <= 0 or alpha == 1.0:
        raise ConfigError("alpha must be positive and different from 1")
    mat = rho.rho if isinstance(rho, DensityMatrix) else rho
    lam = _clean_spectrum(mat)
    return float(np.log((lam ** alpha).sum()) / (1.0 - alpha))


def log_negativity(rho_lr: DensityMatrix, prod: ProductBasis) -> float:
    """ln of the trace norm of the partial transpose on the right factor."""
    dl, dr = prod.left.dim, prod.right.dim
    r4 = rho_lr.rho.reshape(dl, dr, dl, dr)
    pt = np.transpose(r4, (0, 3, 2, 1)).reshape(dl * dr, dl * dr)
    lam = eigvalsh(0.5 * (pt + pt.conj().T))
    return float(np.log(np.abs(lam).sum()))


def entanglement_hamiltonian(rho: DensityMatrix | np.ndarray,
                             floor_energy: float | None = None
                             ) -> tuple[np.ndarray, bool]:
    """H_A = -ln rho_A; eigenvalues below the floor get a large constant.

    Returns (matrix, rank_deficient flag).
    """
    mat = rho.rho if isinstance(rho, DensityMatrix) else rho
    if floor_energy is None:
        floor_energy = float(np.log(1.0 / EIG_FLOOR))
    lam, vec = eigh(0.5 * (mat + mat.conj().T))
    deficient = bool((lam <= EIG_FLOOR).any())
    energies = np.where(lam > EIG_FLOOR, -np.log(np.maximum(lam, EIG_FLOOR)),
                        floor_energy)
    return (vec * energies) @ vec.conj().T, deficient


def schmidt_values(psi_lr: np.ndarray, prod: ProductBasis) -> np.ndarray:
    """Singular values of the reshaped pure split-basis state vector."""
    m = psi_lr.reshape(prod.left.dim, prod.right.dim)
    return svd(m, compute_uv=False)


def pure_state_measures(psi_lr: np.ndarray, prod: ProductBasis,
                        alphas=()) -> tuple[float, dict, float]:
    """(S_vN, renyi dict, log-negativity) from a Schmidt decomposition.

    For pure states E_N = 2 ln sum(s_k) with s_k the Schmidt values; the
    dense partial-transpose spectrum is never formed.
    """
    s = schmidt_values(psi_lr, prod)
    s = s / np.linalg.norm(s)
    p = s ** 2
    svn = spectrum_entropy(p)
    ren = {}
    for a in alphas:
        pa = p[p > EIG_FLOOR]
        ren[a] = float(np.log((pa ** a).sum()) / (1.0 - a))
    neg = float(2.0 * np.log(s.sum()))
    return svn, ren, neg


def fourier_spectrum(series) -> list[tuple[float, float]]:
    """One-sided DFT amplitude spectrum of a uniformly sampled series.

    Input: iterable of (t, S).  The mean is subtracted first (the zero
    bin is reported as 0); returned frequencies are angular.
    """
    pts = list(series)
    if len(pts) < 2:
        raise ConfigError("need at least two samples")
    t = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts], dtype=float)
    dt = np.diff(t)
    if np.max(np.abs(dt - dt[0])) > 1e-9 * max(abs(dt[0]), 1e-30):
        raise ConfigError("time grid must be uniform")
    n = len(y)
    amps = np.abs(np.fft.rfft(y - y.mean())) / n
    omegas = 2.0 * np.pi * np.arange(len(amps)) / (n * dt[0])
    return list(zip(omegas.tolist(), amps.tolist()))
