"""Exact sector combinatorics for Temperley-Lieb and SU(2) symmetric chains.

Everything in this module is integer or rational arithmetic: commutant irrep
dimensions come from an integer Chebyshev recurrence, Krylov-subspace
dimensions from binomials with an exact division, and sector weights are
`fractions.Fraction` values that sum to 1 exactly. Floating point never
enters until a caller takes logarithms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

__all__ = [
    "CommutantSpec",
    "Bipartition",
    "SectorRow",
    "SectorTable",
    "q_from_n",
    "qdim",
    "krylov_dim",
    "sector_table",
]


def q_from_n(n: int) -> float:
    """Deformation parameter q >= 1 solving n = q + 1/q.

    Exactly 1.0 for n = 2 (double root); otherwise the larger root of
    q**2 - n*q + 1 = 0.
    """
    if n < 2:
        raise ValueError(f"local dimension must be >= 2, got {n}")
    if n == 2:
        return 1.0
    return (n + math.sqrt(n * n - 4)) / 2.0


def qdim(lam: int, n: int) -> int:
    """Dimension [2*lam + 1]_q of the commutant irrep labelled `lam`.

    Uses the integer recurrence [0] = 0, [1] = 1, [k+1] = n*[k] - [k-1],
    so the result is exact at any size; q itself never appears. For n = 2
    this reduces to the familiar 2*lam + 1.
    """
    if lam < 0:
        raise ValueError(f"irrep label must be >= 0, got {lam}")
    if n < 2:
        raise ValueError(f"local dimension must be >= 2, got {n}")
    prev, cur = 0, 1
    for _ in range(2 * lam):
        prev, cur = cur, n * cur - prev
    return cur


def krylov_dim(lam: int, length: int) -> int:
    """Dimension of the Krylov subspace with label `lam` on `length` sites.

    Equals (2*lam+1)/(length/2+lam+1) * C(length, length/2+lam). The division
    is always exact: the same number counts standard Young tableaux of the
    two-row shape (length/2+lam, length/2-lam).
    """
    if length < 2 or length % 2:
        raise ValueError(f"chain length must be a positive even integer, got {length}")
    half = length // 2
    if not 0 <= lam <= half:
        raise ValueError(f"irrep label must lie in [0, {half}], got {lam}")
    numerator = (2 * lam + 1) * math.comb(length, half + lam)
    quotient, remainder = divmod(numerator, half + lam + 1)
    if remainder:  # pragma: no cover - the division is exact by construction
        raise ArithmeticError("inexact division in krylov_dim")
    return quotient


@dataclass(frozen=True)
class CommutantSpec:
    """Symmetry family of a chain of n-dits; n fixes q through n = q + 1/q."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"local dimension must be >= 2, got {self.n}")

    @property
    def q(self) -> float:
        return q_from_n(self.n)


@dataclass(frozen=True)
class Bipartition:
    """Spatial split of a chain into two contiguous blocks of even site count.

    Odd block sizes would require half-integer irrep labels and are rejected.
    """

    l_a: int
    l_b: int

    def __post_init__(self) -> None:
        for name, value in (("l_a", self.l_a), ("l_b", self.l_b)):
            if value < 2 or value % 2:
                raise ValueError(f"{name} must be a positive even integer, got {value}")

    @property
    def total(self) -> int:
        return self.l_a + self.l_b


class SectorRow(NamedTuple):
    """One irrep sector of a bipartitioned invariant subspace."""

    lam: int          # irrep label
    irrep_dim: int    # [2*lam+1]_q, dimension of the commutant irrep
    krylov_a: int     # Krylov-subspace dimension of the label on the A block
    krylov_b: int     # same on the B block
    weight: Fraction  # exact sector probability


@dataclass(frozen=True)
class SectorTable:
    """Per-irrep dimensions and exact weights for one bipartition."""

    spec: CommutantSpec
    bipartition: Bipartition
    rows: tuple[SectorRow, ...]

    @property
    def invariant_dim(self) -> int:
        """Dimension of the invariant subspace: sum of krylov_a * krylov_b."""
        return sum(row.krylov_a * row.krylov_b for row in self.rows)

    def weights(self) -> tuple[Fraction, ...]:
        return tuple(row.weight for row in self.rows)


def sector_table(spec: CommutantSpec, bip: Bipartition) -> SectorTable:
    """Sector decomposition of the invariant subspace across `bip`.

    Rows run over lam = 0 .. min(l_a, l_b)/2 in ascending order. Weights are
    krylov_a * krylov_b normalized by their exact integer sum, so they add
    to 1 exactly.
    """
    top = min(bip.l_a, bip.l_b) // 2
    dims_a = [krylov_dim(lam, bip.l_a) for lam in range(top + 1)]
    dims_b = [krylov_dim(lam, bip.l_b) for lam in range(top + 1)]
    invariant_dim = sum(a * b for a, b in zip(dims_a, dims_b))
    rows = tuple(
        SectorRow(
            lam,
            qdim(lam, spec.n),
            dims_a[lam],
            dims_b[lam],
            Fraction(dims_a[lam] * dims_b[lam], invariant_dim),
        )
        for lam in range(top + 1)
    )
    return SectorTable(spec, bip, rows)
