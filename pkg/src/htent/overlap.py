"""Overlap matrix U_T between split-interval and full-interval Fock states.

Each entry is <n_L, n_R | n_F>, a multi-index derivative of the squeezed
vacuum's generating functional divided by the usual sqrt(n!) Fock
normalization.  matrix_element returns overlaps relative to the vacuum
overlap (<0,0|0> = 1); build_U_T multiplies in the absolute vacuum overlap
det(1 - Z^2)^(1/4), Z = chi + chi^T, so that U_T approximates an isometry
and its defect is a meaningful truncation diagnostic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import BudgetExceededError, SingularSplitError
from .fock import BasisTable, ProductBasis
from .pairing import (DerivativeSpec, Side, TContext, _mixed_radix_mults,
                      _wick_value, evaluate_derivative, full_index, new_memo,
                      split_index)
from .splitting import CutConfig


def _spec_from_occupations(n_left, n_right, n_full) -> DerivativeSpec:
    pairs = []
    for m, n in enumerate(n_left):
        if n:
            pairs.append((split_index(m + 1, Side.L), int(n)))
    for m, n in enumerate(n_right):
        if n:
            pairs.append((split_index(m + 1, Side.R), int(n)))
    for k, n in enumerate(n_full):
        if n:
            pairs.append((full_index(k + 1), int(n)))
    return DerivativeSpec.from_pairs(pairs)


def matrix_element(n_left, n_right, n_full, ctx: TContext,
                   method: str = "auto", budget: int = 64) -> float:
    """Single overlap <n_L, n_R | n_F>, normalized so <0,0|0> = 1.

    Entries with odd total excitation number vanish identically (the
    generating functional is quadratic) and return exactly 0.0.
    """
    total = sum(n_left) + sum(n_right) + sum(n_full)
    if total % 2:
        return 0.0
    nu = _spec_from_occupations(n_left, n_right, n_full)
    val = evaluate_derivative(nu, ctx, method=method, budget=budget)
    norm = 1.0
    for _, n in nu.entries:
        norm *= math.factorial(n)
    return val / math.sqrt(norm)


@njit(cache=True)
def _fill_matrix(T, lr_counts, f_counts, lr_parity, f_parity,
                 lr_norm, f_norm, mults, memo, order_cap):  # pragma: no cover
    n_rows = lr_counts.shape[0]
    n_cols = f_counts.shape[0]
    ns = lr_counts.shape[1]
    nf = f_counts.shape[1]
    d = ns + nf
    counts = np.empty(d, dtype=np.int64)
    U = np.zeros((n_rows, n_cols))
    max_order = 0
    for c in range(n_cols):
        fc = f_counts[c]
        f_tot = 0
        for a in range(nf):
            f_tot += fc[a]
        for r in range(n_rows):
            if (lr_parity[r] + f_parity[c]) % 2 == 1:
                continue
            lr_tot = 0
            for a in range(ns):
                counts[a] = lr_counts[r, a]
                lr_tot += counts[a]
            for a in range(nf):
                counts[ns + a] = fc[a]
            order = lr_tot + f_tot
            if order > max_order:
                max_order = order
                if order > order_cap:
                    return U, max_order
            U[r, c] = _wick_value(T, counts, mults, memo) * lr_norm[r] * f_norm[c]
    return U, max_order


def _count_arrays(prod: ProductBasis, full: BasisTable, ctx: TContext):
    ns, nf = ctx.n_split, ctx.n_full
    sl = ctx.gammas.s_left
    dim_lr = prod.dim
    lr_counts = np.zeros((dim_lr, ns), dtype=np.int64)
    for il, st_l in enumerate(prod.left.states):
        for ir, st_r in enumerate(prod.right.states):
            row = prod.pair_index(il, ir)
            for m, n in enumerate(st_l):
                lr_counts[row, m] = n
            for m, n in enumerate(st_r):
                lr_counts[row, sl + m] = n
    f_counts = np.zeros((full.dim, nf), dtype=np.int64)
    for ic, st in enumerate(full.states):
        for k, n in enumerate(st):
            f_counts[ic, k] = n
    return lr_counts, f_counts


def _inv_sqrt_factorials(counts: np.ndarray) -> np.ndarray:
    out = np.empty(counts.shape[0])
    for i in range(counts.shape[0]):
        acc = 1.0
        for n in counts[i]:
            acc *= math.factorial(int(n))
        out[i] = 1.0 / math.sqrt(acc)
    return out


@dataclass(frozen=True)
class SplitIsometry:
    """Dense U_T over (product basis rows) x (full basis columns)."""

    U: np.ndarray
    cut: CutConfig
    iso_defect: float
    prod: ProductBasis
    full: BasisTable


def iso_defect(U: np.ndarray) -> float:
    dim = U.shape[1]
    return float(np.max(np.abs(U.T @ U - np.eye(dim))))


def build_U_T(full: BasisTable, prod: ProductBasis, ctx: TContext,
              budget: int = 64) -> SplitIsometry:
    """Assemble the full overlap matrix with a shared memoization table.

    All elements of one build share Wick sub-results: any residual
    occupation vector reached during the recursion is again a (pair of)
    valid basis states, so the memo is bounded by dim(prod) * dim(full).
    """
    lr_counts, f_counts = _count_arrays(prod, full, ctx)
    lr_parity = lr_counts.sum(axis=1) % 2
    f_parity = f_counts.sum(axis=1) % 2
    lr_norm = _inv_sqrt_factorials(lr_counts)
    f_norm = _inv_sqrt_factorials(f_counts)

    caps = np.concatenate([lr_counts.max(axis=0), f_counts.max(axis=0)])
    mults = _mixed_radix_mults(caps)
    memo = new_memo()

    U, max_order = _fill_matrix(ctx.T, lr_counts, f_counts, lr_parity,
                                f_parity, lr_norm, f_norm, mults, memo,
                                budget)
    if max_order > budget:
        raise BudgetExceededError(
            f"element order {max_order} exceeds budget {budget}")

    # absolute vacuum overlap: the squeezed state exp(-1/2 a+ Z a+)|0>
    # with Z = chi + chi^T has squared norm det(1 - Z^2)^(-1/2); under an
    # exact symplectic transformation this equals |det u|^(-1), but the
    # determinant form stays correctly normalized under truncation
    z_eigs = np.linalg.eigvalsh(ctx.chi.chi + ctx.chi.chi.T)
    if np.max(np.abs(z_eigs)) >= 1.0:
        raise SingularSplitError(
            "squeeze kernel spectral radius >= 1: squeezed vacuum is not "
            "normalizable at this truncation")
    U *= float(np.prod(1.0 - z_eigs ** 2) ** 0.25)

    return SplitIsometry(U=U, cut=ctx.gammas.cut, iso_defect=iso_defect(U),
                         prod=prod, full=full)
