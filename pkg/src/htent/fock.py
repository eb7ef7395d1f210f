"""Truncated bosonic Fock bases for the full interval and the subintervals.

States are occupation-number tuples ``(n_1, n_2, ...)`` with trailing zeros
stripped (the vacuum is the empty tuple).  Two mode families exist: full
interval modes with integer frequency weights ``k`` and split-interval modes
(Neumann conditions at the cut) with half-integer weights ``k - 1/2``.
Weighted levels are tracked internally as doubled integers so cutoff
comparisons stay exact.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator


class ModeFamily(Enum):
    FULL_INTEGER = "full_integer"
    HALF_INTEGER = "half_integer"


def _weight2(family: ModeFamily, mode: int) -> int:
    """Doubled frequency weight of a single quantum in `mode` (1-based)."""
    if family is ModeFamily.FULL_INTEGER:
        return 2 * mode
    return 2 * mode - 1


@dataclass(frozen=True)
class BasisTable:
    """Ordered, dense-indexed truncated Fock basis.

    States are sorted by (weighted level, lexicographic occupations); the
    `index` map is the exact inverse of the position in `states`.  Instances
    are immutable and safe to share between threads.
    """

    family: ModeFamily
    cutoff2: int                      # doubled weighted-level cutoff
    mode_count: int                   # s: largest mode kept
    states: tuple[tuple[int, ...], ...]
    index: dict[tuple[int, ...], int] = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.states)

    @property
    def cutoff(self) -> float:
        return self.cutoff2 / 2.0

    def level2(self, state: tuple[int, ...]) -> int:
        return sum(n * _weight2(self.family, m + 1) for m, n in enumerate(state))

    def level(self, state: tuple[int, ...]) -> float:
        return self.level2(state) / 2.0

    def levels(self) -> list[float]:
        return [self.level(s) for s in self.states]

    def total_quanta(self, ordinal: int) -> int:
        return sum(self.states[ordinal])


def _enumerate_states(family: ModeFamily, cutoff2: int, mode_count: int
                      ) -> Iterator[tuple[int, ...]]:
    """Yield all occupation tuples with doubled weighted level <= cutoff2."""

    def rec(mode: int, budget2: int, prefix: list[int]) -> Iterator[tuple[int, ...]]:
        if mode > mode_count:
            yield _canonical(prefix)
            return
        w2 = _weight2(family, mode)
        for n in range(budget2 // w2 + 1):
            prefix.append(n)
            yield from rec(mode + 1, budget2 - n * w2, prefix)
            prefix.pop()

    if cutoff2 < 0:
        yield ()
        return
    yield from rec(1, cutoff2, [])


def _canonical(occ: list[int]) -> tuple[int, ...]:
    last = len(occ)
    while last > 0 and occ[last - 1] == 0:
        last -= 1
    return tuple(occ[:last])


def _build_table(family: ModeFamily, cutoff2: int, mode_count: int) -> BasisTable:
    raw = set(_enumerate_states(family, cutoff2, mode_count))

    def sort_key(s: tuple[int, ...]):
        lvl = sum(n * _weight2(family, m + 1) for m, n in enumerate(s))
        return (lvl, s + (0,) * (mode_count - len(s)))

    states = tuple(sorted(raw, key=sort_key))
    index = {s: i for i, s in enumerate(states)}
    return BasisTable(family, cutoff2, mode_count, states, index)


def enumerate_full_basis(s_F: int) -> BasisTable:
    """All integer-mode states with sum_k k*n_k <= s_F.

    The dimension equals the cumulative integer-partition count
    p(0) + p(1) + ... + p(s_F).
    """
    if s_F < 0:
        raise ValueError("s_F must be non-negative")
    return _build_table(ModeFamily.FULL_INTEGER, 2 * s_F, max(s_F, 1))


def enumerate_half_mode_basis(s: int) -> BasisTable:
    """All half-integer-mode states with sum_m (m - 1/2) n_m <= s - 1/2.

    The cutoff is the weighted level of a single quantum in the largest kept
    mode `s`; s = 0 yields the vacuum-only table.
    """
    if s < 0:
        raise ValueError("s must be non-negative")
    return _build_table(ModeFamily.HALF_INTEGER, 2 * s - 1, max(s, 1))


def enumerate_split_basis(s: int, half_integer: bool,
                          level_cutoff: float | None = None) -> BasisTable:
    """Split-interval table: half-integer modes (Neumann at the cut) or
    integer modes (Dirichlet at the cut).

    level_cutoff overrides the default weighted-level cutoff (one quantum
    of mode s) while keeping the mode count fixed; used for convergence
    sweeps of the overlap matrix.
    """
    if level_cutoff is None:
        cutoff2 = 2 * s - 1 if half_integer else 2 * s
    else:
        cutoff2 = int(math.floor(2 * level_cutoff + 1e-9))
    family = ModeFamily.HALF_INTEGER if half_integer else ModeFamily.FULL_INTEGER
    return _build_table(family, cutoff2, max(s, 1))


@dataclass(frozen=True)
class ProductBasis:
    """Row-major pairing of a left and a right split table."""

    left: BasisTable
    right: BasisTable

    def __post_init__(self):
        if self.left.family is not self.right.family:
            raise ValueError("left and right tables must share a mode family")

    @property
    def dim(self) -> int:
        return self.left.dim * self.right.dim

    def pair_index(self, ordinal_left: int, ordinal_right: int) -> int:
        return ordinal_left * self.right.dim + ordinal_right

    def unpair(self, ordinal: int) -> tuple[int, int]:
        return divmod(ordinal, self.right.dim)


def product_basis(left: BasisTable, right: BasisTable) -> ProductBasis:
    return ProductBasis(left, right)


def dump_basis_csv(table: BasisTable, path: str) -> None:
    """Write `ordinal, level, occupations` rows ("mode:count" space-separated)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["ordinal", "level", "occupations"])
        for i, state in enumerate(table.states):
            occ = " ".join(f"{m + 1}:{n}" for m, n in enumerate(state) if n)
            writer.writerow([i, table.level(state), occ])


def partition_count(n: int) -> int:
    """Integer partition function p(n) via Euler's pentagonal recurrence.

    Independent of the basis enumeration; used as a counting cross-check.
    """
    if n < 0:
        return 0
    p = [1] + [0] * n
    for i in range(1, n + 1):
        k, total = 1, 0
        while True:
            g1 = k * (3 * k - 1) // 2
            g2 = k * (3 * k + 1) // 2
            if g1 > i and g2 > i:
                break
            sign = -1 if (k % 2 == 0) else 1
            if g1 <= i:
                total += sign * p[i - g1]
            if g2 <= i:
                total += sign * p[i - g2]
            k += 1
        p[i] = total
    return p[n]
