"""High-order derivatives of exp(T) at zero for a quadratic exponent T.

The overlap of Fock states across a Bogoliubov transformation reduces to a
multi-index derivative of exp(T(J)) at J = 0, where T is quadratic in the
source variables J.  Only complete pairings of the derivative indices
survive.  Two evaluation routes are provided:

* explicit enumeration of the unique pairing strings with their exact
  integer multiplicities (transparent, exponential in the order);
* a memoized Wick recursion over residual occupation vectors (fast,
  polynomial in the number of reachable sub-vectors), compiled with numba.

Both must agree; the test suite pins their equality.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

import numpy as np
from numba import njit, types
from numba.typed import Dict as NumbaDict

from .errors import BudgetExceededError, ConfigError
from .splitting import GammaSet, SqueezeKernel


class IndexKind(Enum):
    SPLIT_MODE = "split"
    FULL_MODE = "full"


class Side(Enum):
    L = "L"
    R = "R"


@dataclass(frozen=True, order=False)
class DerivIndex:
    """One source variable: J_k (full mode) or j_{m,sigma} (split mode).

    Canonical total order: split-L < split-R < full, each by mode number.
    """

    kind: IndexKind
    mode: int
    side: Side | None = None

    def __post_init__(self):
        if self.mode < 1:
            raise ConfigError("mode numbers are 1-based positive")
        if self.kind is IndexKind.SPLIT_MODE and self.side is None:
            raise ConfigError("split-mode index needs a side")
        if self.kind is IndexKind.FULL_MODE and self.side is not None:
            raise ConfigError("full-mode index takes no side")

    @property
    def sort_key(self) -> tuple[int, int]:
        if self.kind is IndexKind.SPLIT_MODE:
            group = 0 if self.side is Side.L else 1
        else:
            group = 2
        return (group, self.mode)

    def __lt__(self, other: "DerivIndex") -> bool:
        return self.sort_key < other.sort_key

    def __le__(self, other: "DerivIndex") -> bool:
        return self.sort_key <= other.sort_key


def full_index(k: int) -> DerivIndex:
    return DerivIndex(IndexKind.FULL_MODE, k)


def split_index(m: int, side: Side) -> DerivIndex:
    return DerivIndex(IndexKind.SPLIT_MODE, m, side)


@dataclass(frozen=True)
class DerivativeSpec:
    """Multi-index nu: distinct sorted indices with multiplicities n_i >= 1."""

    entries: tuple[tuple[DerivIndex, int], ...]

    def __post_init__(self):
        idx = [i for i, _ in self.entries]
        if any(n < 1 for _, n in self.entries):
            raise ConfigError("multiplicities must be >= 1")
        if len(set(idx)) != len(idx):
            raise ConfigError("indices must be distinct")
        if any(b < a for a, b in zip(idx, idx[1:])):
            raise ConfigError("indices must be sorted")

    @classmethod
    def from_pairs(cls, pairs) -> "DerivativeSpec":
        merged: dict[DerivIndex, int] = {}
        for i, n in pairs:
            merged[i] = merged.get(i, 0) + n
        ent = tuple(sorted(((i, n) for i, n in merged.items() if n > 0),
                           key=lambda e: e[0].sort_key))
        return cls(ent)

    @property
    def order(self) -> int:
        return sum(n for _, n in self.entries)


@dataclass(frozen=True)
class PairString:
    """One unique pairing: sorted pairs with powers, covering nu exactly."""

    pairs: tuple[tuple[tuple[DerivIndex, DerivIndex], int], ...]

    @property
    def order(self) -> int:
        return 2 * sum(p for _, p in self.pairs)


def enumerate_pairings(nu: DerivativeSpec) -> list[PairString]:
    """All unique complete pairings of nu, in canonical lexicographic order.

    Recursive expansion: every step pairs the smallest remaining index with
    a partner, and a branch is pruned as soon as its next pair would sort
    below the previously emitted pair.  This produces each string exactly
    once, already ordered, with no deduplication pass.
    """
    if nu.order % 2:
        raise ConfigError("pairings exist only for even total order")
    idx = [i for i, _ in nu.entries]
    counts = [n for _, n in nu.entries]
    d = len(idx)
    out: list[PairString] = []
    flat: list[tuple[int, int]] = []

    def rec(prev: tuple[int, int] | None):
        first = next((a for a in range(d) if counts[a]), None)
        if first is None:
            compressed: list[tuple[tuple[DerivIndex, DerivIndex], int]] = []
            for pair in flat:
                if compressed and compressed[-1][0] is not None and \
                        (idx[pair[0]], idx[pair[1]]) == compressed[-1][0]:
                    compressed[-1] = (compressed[-1][0], compressed[-1][1] + 1)
                else:
                    compressed.append(((idx[pair[0]], idx[pair[1]]), 1))
            out.append(PairString(tuple(compressed)))
            return
        counts[first] -= 1
        for b in range(first, d):
            if counts[b] == 0:
                continue
            if prev is not None and (first, b) < prev:
                continue
            counts[b] -= 1
            flat.append((first, b))
            rec((first, b))
            flat.pop()
            counts[b] += 1
        counts[first] += 1

    rec(None)
    return out


def multiplicity(nu: DerivativeSpec, s: PairString) -> int:
    """Exact number of raw derivative terms collapsing onto the string s.

    c = prod_i n_i! / (2^{N_diag} * prod_l p_l!), with N_diag the total
    power carried by diagonal pairs (i, i).  Arbitrary-precision integers
    keep this exact at any order.
    """
    num = 1
    for _, n in nu.entries:
        num *= math.factorial(n)
    den = 1
    n_diag = 0
    for (a, b), p in s.pairs:
        den *= math.factorial(p)
        if a == b:
            n_diag += p
    return num // (den * 2 ** n_diag)


@dataclass(frozen=True)
class TContext:
    """Pair-value table for one cut: the quadratic exponent's Hessian.

    Index layout of the combined matrix: split-L modes, split-R modes,
    then full modes.  Built once from the gamma blocks and the squeeze
    kernel; immutable afterwards.
    """

    gammas: GammaSet
    chi: SqueezeKernel

    def __post_init__(self):
        if self.chi.chi.shape != (self.gammas.n_split, self.gammas.n_split):
            raise ConfigError("chi dimension does not match the gamma set")

    @property
    def n_split(self) -> int:
        return self.gammas.n_split

    @property
    def n_full(self) -> int:
        return self.gammas.n_full

    @property
    def dim(self) -> int:
        return self.n_split + self.n_full

    @cached_property
    def T(self) -> np.ndarray:
        """Symmetric matrix of second derivatives d^2 T / dJ_i dJ_j at 0."""
        u, v = self.gammas.plus, self.gammas.minus
        x = self.chi.chi
        xsym = x + x.T
        ns, nf = self.n_split, self.n_full
        T = np.empty((ns + nf, ns + nf))
        T[:ns, :ns] = -xsym
        T[:ns, ns:] = (u - v @ xsym).T
        T[ns:, :ns] = T[:ns, ns:].T
        T[ns:, ns:] = 0.5 * (u @ v.T + v @ u.T) - v @ xsym @ v.T
        return T

    def position(self, i: DerivIndex) -> int:
        if i.kind is IndexKind.SPLIT_MODE:
            if i.side is Side.L:
                if i.mode > self.gammas.s_left:
                    raise ConfigError("left split mode out of range")
                return i.mode - 1
            if i.mode > self.gammas.s_right:
                raise ConfigError("right split mode out of range")
            return self.gammas.s_left + i.mode - 1
        if i.mode > self.n_full:
            raise ConfigError("full mode out of range")
        return self.n_split + i.mode - 1


def t_pair_value(i: DerivIndex, j: DerivIndex, ctx: TContext) -> float:
    return float(ctx.T[ctx.position(i), ctx.position(j)])


_KEY = types.int64
_VAL = types.float64


def new_memo() -> NumbaDict:
    return NumbaDict.empty(key_type=_KEY, value_type=_VAL)


@njit(cache=True)
def _wick_value(T, counts, mults, memo):  # pragma: no cover - jitted
    """Memoized Wick recursion, iterative with an explicit work stack.

    counts is the occupation vector of derivative indices; keys encode
    counts in mixed radix via `mults`.  memo may be shared across calls
    with the same radix layout.
    """
    d = counts.shape[0]
    key0 = np.int64(0)
    for a in range(d):
        key0 += counts[a] * mults[a]
    if key0 in memo:
        return memo[key0]

    stack = [key0]
    cur = np.empty(d, dtype=np.int64)
    while stack:
        key = stack[-1]
        if key in memo:
            stack.pop()
            continue
        # decode mixed-radix key into cur
        rem = key
        for a in range(d - 1, -1, -1):
            cur[a] = rem // mults[a]
            rem -= cur[a] * mults[a]
        first = -1
        for a in range(d):
            if cur[a] > 0:
                first = a
                break
        if first < 0:
            memo[key] = 1.0
            stack.pop()
            continue
        cur[first] -= 1
        total = 0.0
        ready = True
        for b in range(d):
            if cur[b] == 0:
                continue
            child = key - mults[first] - mults[b]
            if child in memo:
                total += T[first, b] * cur[b] * memo[child]
            else:
                stack.append(child)
                ready = False
        if ready:
            memo[key] = total
            stack.pop()
    return memo[key0]


def _mixed_radix_mults(caps: np.ndarray) -> np.ndarray:
    """Place values for mixed-radix encoding with per-index radix caps+1.

    Raises if the code space exceeds signed 64-bit range.
    """
    mults = np.empty(len(caps), dtype=np.int64)
    acc = 1
    for a, c in enumerate(caps):
        mults[a] = acc
        acc *= int(c) + 1
        if acc > 2**62:
            raise ConfigError("occupation key space exceeds 64-bit encoding")
    return mults


def evaluate_derivative(nu: DerivativeSpec, ctx: TContext,
                        method: str = "auto", budget: int = 64,
                        memo: NumbaDict | None = None,
                        mults: np.ndarray | None = None) -> float:
    """d^nu exp(T) at J = 0.

    Odd total order vanishes identically and short-circuits.  method is
    "strings" (explicit pairing enumeration), "recursive" (memoized Wick
    recursion), or "auto" (strings up to order 10, recursive beyond).
    A shared memo/mults pair lets callers reuse sub-results across many
    evaluations with a common per-index occupancy cap.
    """
    if nu.order % 2:
        return 0.0
    if nu.order == 0:
        return 1.0
    if nu.order > budget:
        raise BudgetExceededError(
            f"derivative order {nu.order} exceeds budget {budget}")
    if method == "auto":
        method = "strings" if nu.order <= 10 else "recursive"

    if method == "strings":
        terms = []
        for s in enumerate_pairings(nu):
            val = float(multiplicity(nu, s))
            for (a, b), p in s.pairs:
                val *= t_pair_value(a, b, ctx) ** p
            terms.append(val)
        return math.fsum(terms)

    if method != "recursive":
        raise ConfigError(f"unknown evaluation method {method!r}")

    counts = np.zeros(ctx.dim, dtype=np.int64)
    for i, n in nu.entries:
        counts[ctx.position(i)] = n
    if mults is None:
        mults = _mixed_radix_mults(counts)
        memo = new_memo()
    elif memo is None:
        memo = new_memo()
    return float(_wick_value(ctx.T, counts, mults, memo))


def dump_strings_csv(nu: DerivativeSpec, path: str) -> None:
    """Debug dump: `string_id, pairs, c_k` rows for a small nu."""

    def label(i: DerivIndex) -> str:
        if i.kind is IndexKind.FULL_MODE:
            return f"J{i.mode}"
        return f"j{i.mode}{i.side.value}"

    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["string_id", "pairs", "c_k"])
        for sid, s in enumerate(enumerate_pairings(nu)):
            txt = " ".join(f"({label(a)},{label(b)})^{p}" for (a, b), p in s.pairs)
            writer.writerow([sid, txt, multiplicity(nu, s)])
