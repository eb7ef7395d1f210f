"""End-to-end drivers: cut sweeps, thermal profiles, quench series, and
their covariance-matrix counterparts.

These functions tie the basis, splitting, overlap, model, and
entanglement layers together and are what the CLI and service expose.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cache import CacheStore, cache_key
from .entanglement import (EntropyRecord, Keep, log_negativity,
                           partial_trace, pure_state_measures, split_density,
                           spectrum_entropy, von_neumann, renyi)
from .errors import ConfigError
from .fock import BasisTable, enumerate_full_basis, enumerate_split_basis, \
    product_basis
from .gaussian import LatticeConfig, entropy_at_cut, quench_covariance, \
    thermal_covariance
from .models import HamiltonianMatrix, Model, ModelParams, h_massive, \
    h_massless, h_sine_gordon
from .overlap import SplitIsometry, build_U_T
from .pairing import TContext
from .splitting import CutBC, CutConfig, allocate_modes, assemble_M, \
    gamma_coefficients, squeeze_kernel
from .states import DensityMatrix, decompose, ground_state, thermal_state


def build_hamiltonian(basis: BasisTable, p: ModelParams) -> HamiltonianMatrix:
    if p.model is Model.MASSLESS_FB:
        return h_massless(basis, p.L)
    if p.model is Model.MASSIVE_FB:
        return h_massive(basis, p.L, p.m)
    return h_sine_gordon(basis, p)


def check_commensurate(frac: float, s_F: int, allow: bool = False) -> None:
    """Cut positions should be multiples of 1/s_F so that the two split
    towers have exactly matching mode density."""
    f = Fraction(frac).limit_denominator(10 ** 6)
    if (f * s_F).denominator != 1:
        if not allow:
            raise ConfigError(
                f"cut {frac} is not commensurate (n/{s_F}); rounding of the "
                "mode allocation will degrade the transformation. Pass the "
                "incommensurate override to proceed anyway.")
        import warnings
        warnings.warn(f"incommensurate cut {frac}: expect larger errors")


def build_transform(cut: CutConfig, budget: int = 64,
                    cache: CacheStore | None = None) -> SplitIsometry:
    """Overlap matrix for one cut, optionally from/to the binary cache."""
    g = gamma_coefficients(cut)
    full = enumerate_full_basis(cut.s_F)
    left = enumerate_split_basis(g.s_left, cut.half_integer)
    right = enumerate_split_basis(g.s_right, cut.half_integer)
    prod = product_basis(left, right)

    def compute() -> np.ndarray:
        ctx = TContext(g, squeeze_kernel(assemble_M(g)))
        return build_U_T(full, prod, ctx, budget=budget).U

    if cache is None:
        U = compute()
    else:
        key = cache_key(kind="u_t", L=cut.L, ell=cut.ell, s_F=cut.s_F,
                        bc=cut.cut_bc.value, scheme=cut.scheme.value,
                        rounding=cut.rounding.value)
        U = cache.get_or_build(key, compute)
    from .overlap import iso_defect
    return SplitIsometry(U=U, cut=cut, iso_defect=iso_defect(U),
                         prod=prod, full=full)


def _pure_record(frac: float, psi_lr: np.ndarray, iso: SplitIsometry,
                 alphas) -> EntropyRecord:
    svn, ren, neg = pure_state_measures(psi_lr, iso.prod, alphas)
    return EntropyRecord(cut_position=frac, S_vN=svn, S_renyi=ren,
                         S_L=svn, S_R=svn, S_LR=0.0,
                         mutual_information=2.0 * svn, log_negativity=neg,
                         iso_defect=iso.iso_defect)


def _mixed_record(frac: float, rho: DensityMatrix, iso: SplitIsometry,
                  alphas, negativity: bool) -> EntropyRecord:
    U = iso.U
    dl, dr = iso.prod.left.dim, iso.prod.right.dim
    Ur = U.reshape(dl, dr, U.shape[1])
    rho_l = np.einsum("arf,fg,brg->ab", Ur, rho.rho, Ur.conj(), optimize=True)
    rho_r = np.einsum("raf,fg,rbg->ab", Ur, rho.rho, Ur.conj(), optimize=True)
    tr = float(np.real(np.trace(rho_l)))
    rho_l /= tr
    rho_r /= tr
    # S_LR from the nonzero spectrum of U rho U^T via the small-side
    # Gram trick: spec(U rho U^T) = spec(sqrt(rho) U^T U sqrt(rho))
    w, v = np.linalg.eigh(rho.rho)
    w = np.clip(w, 0.0, None)
    sq = (v * np.sqrt(w)) @ v.conj().T
    small = sq @ (U.conj().T @ U) @ sq
    lam = np.linalg.eigvalsh(small)
    lam = np.clip(lam.real, 0.0, None)
    lam /= lam.sum()
    s_lr = spectrum_entropy(lam)

    s_l = von_neumann(rho_l)
    s_r = von_neumann(rho_r)
    ren = {a: renyi(rho_l, a) for a in alphas}
    neg = 0.0
    if negativity:
        rho_lr = split_density(rho, iso)
        neg = log_negativity(rho_lr, iso.prod)
    return EntropyRecord(cut_position=frac, S_vN=s_l, S_renyi=ren,
                         S_L=s_l, S_R=s_r, S_LR=s_lr,
                         mutual_information=s_l + s_r - s_lr,
                         log_negativity=neg, iso_defect=iso.iso_defect)


def entropy_profile(params: ModelParams, s_F: int, fractions,
                    T: float | None = None, alphas=(),
                    bc: CutBC = CutBC.NEUMANN, negativity: bool = False,
                    budget: int = 64, cache: CacheStore | None = None,
                    allow_incommensurate: bool = False) -> list[EntropyRecord]:
    """Entanglement measures across a list of cut positions ell/L.

    T = None requests the ground state; the ground-state path is pure and
    uses the Schmidt decomposition throughout.
    """
    basis = enumerate_full_basis(s_F)
    H = build_hamiltonian(basis, params)
    pure = T is None
    if pure:
        psi = decompose(H).eigenvectors[:, 0]
    else:
        rho = thermal_state(H, T)

    out = []
    for frac in fractions:
        check_commensurate(frac, s_F, allow_incommensurate)
        cut = CutConfig(params.L, frac * params.L, s_F, cut_bc=bc)
        iso = build_transform(cut, budget=budget, cache=cache)
        if pure:
            out.append(_pure_record(frac, iso.U @ psi, iso, alphas))
        else:
            out.append(_mixed_record(frac, rho, iso, alphas, negativity))
    return out


def quench_series(pre: ModelParams, post: ModelParams, s_F: int, frac: float,
                  times, bc: CutBC = CutBC.NEUMANN, budget: int = 64,
                  cache: CacheStore | None = None,
                  allow_incommensurate: bool = False
                  ) -> list[tuple[float, float, float]]:
    """(t, S_vN, iso_defect) after a sudden quench from pre to post.

    The initial state is the pre-quench ground state; evolution uses one
    spectral decomposition of the post-quench Hamiltonian and the split
    transform is built once for the fixed cut.
    """
    check_commensurate(frac, s_F, allow_incommensurate)
    basis = enumerate_full_basis(s_F)
    psi0 = decompose(build_hamiltonian(basis, pre)).eigenvectors[:, 0]
    dec = decompose(build_hamiltonian(basis, post))
    c0 = dec.eigenvectors.T @ psi0

    cut = CutConfig(pre.L, frac * pre.L, s_F, cut_bc=bc)
    iso = build_transform(cut, budget=budget, cache=cache)
    UV = iso.U @ dec.eigenvectors

    out = []
    for t in times:
        psi_t = UV @ (np.exp(-1j * dec.eigenvalues * t) * c0)
        svn, _, _ = pure_state_measures(psi_t, iso.prod, ())
        out.append((float(t), svn, iso.iso_defect))
    return out


def oracle_profile(m: float, fractions, K: int = 200, L: float = 1.0,
                   T: float = 0.0, alphas=()) -> list[EntropyRecord]:
    """Covariance-matrix counterpart of entropy_profile (free boson only)."""
    cfg = LatticeConfig(K, L)
    G = thermal_covariance(m, T, cfg)
    out = []
    for frac in fractions:
        svn, ren = entropy_at_cut(G, cfg, frac * L, alphas)
        out.append(EntropyRecord(cut_position=frac, S_vN=svn, S_renyi=ren,
                                 S_L=svn, S_R=svn, S_LR=0.0,
                                 mutual_information=0.0, log_negativity=0.0,
                                 iso_defect=0.0))
    return out


def oracle_quench(m0: float, m: float, frac: float, times, K: int = 200,
                  L: float = 1.0, T0: float = 0.0
                  ) -> list[tuple[float, float, float]]:
    cfg = LatticeConfig(K, L)
    out = []
    for t in times:
        G = quench_covariance(m0, T0, m, float(t), cfg)
        svn, _ = entropy_at_cut(G, cfg, frac * L)
        out.append((float(t), svn, 0.0))
    return out


def shift_align(series_a, series_b, anchor: float,
                tol: float = 1e-9) -> list[tuple[float, float]]:
    """Shift series_b by a constant so the two coincide at the anchor.

    Series are (x, y) pairs; both must contain the anchor x value.
    """
    da = dict(series_a)
    db = dict(series_b)
    ka = next((k for k in da if abs(k - anchor) <= tol), None)
    kb = next((k for k in db if abs(k - anchor) <= tol), None)
    if ka is None or kb is None:
        raise ConfigError(f"anchor {anchor} missing from one of the series")
    off = da[ka] - db[kb]
    return [(x, y + off) for x, y in series_b]
