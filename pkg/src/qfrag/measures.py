"""Closed-form entanglement measures for singlet-ensemble mixed states.

A state here is a probability vector over the irrep sectors of a
:class:`~qfrag.algebra.SectorTable`. Mixtures of the flat-Schmidt singlet
basis states are fully described by those marginal sector weights: both
measure families below depend on the fine-grained per-pair weights only
through their per-sector sums, so nothing finer is ever stored.

Two numbers summarize the bipartite entanglement of such a state:

* ``e_less`` -- sum_lam p_lam * log(d_lam). The common value of the
  entanglement of formation, the (asymptotic) entanglement cost, the
  squashed entanglement and the distillable entanglement. Despite the
  familiar shape of the formula this is not an entropy.
* ``e_greater`` -- log(sum_lam p_lam * d_lam). The common value of the
  logarithmic negativity and the exact PPT entanglement cost.

By concavity of the logarithm ``e_greater >= e_less`` always, with equality
exactly when a single sector carries all the weight.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .algebra import Bipartition, CommutantSpec, SectorTable, sector_table

__all__ = [
    "MMIS",
    "TRUNCATED",
    "CUSTOM",
    "EXACT_RATIONAL",
    "LOG_SPACE",
    "LOG_BASE_SCALE",
    "Truncation",
    "EnsembleState",
    "MeasureReport",
    "log_of_fraction",
    "mmis",
    "custom_state",
    "e_less",
    "e_greater",
    "truncate",
    "trace_distance_truncated",
    "measure_report",
]

MMIS = "mmis"
TRUNCATED = "truncated"
CUSTOM = "custom"

EXACT_RATIONAL = "exact-rational"
LOG_SPACE = "log-space-float"

# natural-log divisor per reporting base
LOG_BASE_SCALE = {"e": 1.0, "2": math.log(2.0)}


def log_of_fraction(value: Fraction) -> float:
    """Natural log of a positive rational, safe for huge numerator/denominator."""
    if value <= 0:
        raise ValueError(f"expected a positive rational, got {value}")
    return math.log(value.numerator) - math.log(value.denominator)


@dataclass(frozen=True)
class Truncation:
    """Bookkeeping for a tail truncation."""

    requested_tail: Fraction  # the eps that was asked for
    actual_tail: Fraction     # the tail mass actually removed (eps')
    cutoff: int               # largest retained irrep label


@dataclass(frozen=True)
class EnsembleState:
    """Singlet-ensemble mixed state reduced to its per-sector weight vector."""

    table: SectorTable
    weights: tuple[Fraction, ...]
    provenance: str = CUSTOM
    truncation: Truncation | None = None

    def __post_init__(self) -> None:
        if self.provenance not in (MMIS, TRUNCATED, CUSTOM):
            raise ValueError(f"unknown provenance {self.provenance!r}")
        if len(self.weights) != len(self.table.rows):
            raise ValueError("need exactly one weight per sector row")
        if any(w < 0 for w in self.weights):
            raise ValueError("sector weights must be non-negative")
        if sum(self.weights) != 1:
            raise ValueError("sector weights must sum to 1 exactly")
        if self.provenance == TRUNCATED:
            if self.truncation is None:
                raise ValueError("truncated states must carry truncation metadata")
            if any(w != 0 for w in self.weights[self.truncation.cutoff + 1:]):
                raise ValueError("weights beyond the truncation cutoff must vanish")


def mmis(spec: CommutantSpec, bip: Bipartition) -> EnsembleState:
    """Maximally mixed invariant state: weight per sector is krylov_a*krylov_b
    over the invariant-subspace dimension."""
    table = sector_table(spec, bip)
    return EnsembleState(table, table.weights(), MMIS)


def custom_state(table: SectorTable, weights) -> EnsembleState:
    """Singlet-ensemble state with caller-chosen sector weights (exact rationals)."""
    return EnsembleState(table, tuple(Fraction(w) for w in weights), CUSTOM)


def e_less(state: EnsembleState, base: str = "e") -> float:
    """sum_lam p_lam * log(d_lam).

    The shared value of formation, cost, squashed and distillable
    entanglement for singlet-ensemble states.
    """
    total = sum(
        float(weight) * math.log(row.irrep_dim)
        for weight, row in zip(state.weights, state.table.rows)
        if weight
    )
    return total / LOG_BASE_SCALE[base]


def e_greater(state: EnsembleState, base: str = "e") -> float:
    """log(sum_lam p_lam * d_lam).

    The shared value of logarithmic negativity and exact PPT entanglement
    cost. The inner sum is accumulated as an exact rational; floating point
    enters only in the final logarithm.
    """
    inner = Fraction(0)
    for weight, row in zip(state.weights, state.table.rows):
        inner += weight * row.irrep_dim
    return log_of_fraction(inner) / LOG_BASE_SCALE[base]


def truncate(state: EnsembleState, eps) -> EnsembleState:
    """Drop the largest-label tail of total mass <= eps and renormalize.

    The cutoff is the smallest label A with sum_{lam > A} p_lam <= eps. The
    realized tail mass eps' is recorded and the kept weights are divided by
    (1 - eps'), so the result sums to 1 exactly and the trace distance to the
    input is exactly 2*eps'.
    """
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise ValueError(f"tail mass must lie in (0, 1), got {eps}")
    if state.provenance == TRUNCATED:
        raise ValueError("refusing to truncate an already truncated state")
    cutoff = len(state.weights) - 1
    tail = Fraction(0)
    while cutoff > 0 and tail + state.weights[cutoff] <= eps:
        tail += state.weights[cutoff]
        cutoff -= 1
    keep = 1 - tail
    weights = tuple(
        weight / keep if lam <= cutoff else Fraction(0)
        for lam, weight in enumerate(state.weights)
    )
    return EnsembleState(state.table, weights, TRUNCATED, Truncation(eps, tail, cutoff))


def trace_distance_truncated(state: EnsembleState, truncated: EnsembleState) -> Fraction:
    """Trace distance between a state and its truncation, exactly 2*eps'.

    Both states are diagonal in the same singlet basis, so the 1-norm of the
    sector-weight difference equals the trace distance of the density
    matrices.
    """
    if truncated.provenance != TRUNCATED or truncated.truncation is None:
        raise ValueError("second argument must come from truncate()")
    if truncated.table != state.table:
        raise ValueError("states live on different sector tables")
    return sum(
        (abs(a - b) for a, b in zip(state.weights, truncated.weights)),
        Fraction(0),
    )


@dataclass(frozen=True)
class MeasureReport:
    """Computed measure pair with enough metadata to reproduce it."""

    n: int
    l_a: int
    l_b: int
    e_less: float
    e_greater: float
    log_base: str
    mode: str

    def __post_init__(self) -> None:
        slack = 1e-12 * max(1.0, abs(self.e_greater))
        if self.e_less < -slack:
            raise ValueError(f"e_less must be non-negative, got {self.e_less}")
        if self.e_greater < self.e_less - slack:
            raise ValueError(
                f"measure ordering violated: e_greater={self.e_greater} < e_less={self.e_less}"
            )


def measure_report(state: EnsembleState, base: str = "e") -> MeasureReport:
    """Bundle e_less / e_greater with reporting metadata."""
    bip = state.table.bipartition
    return MeasureReport(
        state.table.spec.n,
        bip.l_a,
        bip.l_b,
        e_less(state, base),
        e_greater(state, base),
        base,
        EXACT_RATIONAL,
    )
