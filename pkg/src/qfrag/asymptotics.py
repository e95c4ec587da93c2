"""Large-size closed forms and a numerically stable log-space evaluator.

Length convention
-----------------
All closed-form estimates below are expressed in the quarter-chain length
``s`` of an equally bipartitioned chain: blocks of ``2*s`` sites each, total
chain ``4*s``. :func:`scaling_length` and :func:`equal_bipartition` convert
between that convention and a :class:`~qfrag.algebra.Bipartition`, so callers
can never pick up a stray factor of two.

For q > 1 the two measure families separate parametrically: the sector-weight
maximum sits at ``lambda_max = sqrt(s/2)`` which drives
``e_less ~ log(q)*sqrt(2*s)``, while the weighted-dimension sum peaks at
``lambda_star = s*log(q)/2`` which drives ``e_greater ~ (log(q)**2/2)*s``.
For q = 1 both grow like ``log(s)/2``.

The log-space evaluator computes the *exact* sums (no Gaussian shortcut) from
log-gamma, for sizes far beyond what big-rational arithmetic can reach.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp

from .algebra import Bipartition, CommutantSpec
from .measures import LOG_BASE_SCALE, LOG_SPACE, MeasureReport

__all__ = [
    "ConsistencyError",
    "AsymptoticEstimate",
    "TruncatedMeasures",
    "scaling_length",
    "equal_bipartition",
    "lambda_max",
    "lambda_star",
    "p_lambda_asymp",
    "e_less_asymp",
    "e_greater_asymp",
    "e_su2_asymp",
    "gaussian_tail",
    "a_epsilon",
    "estimate",
    "log_sector_weights",
    "log_space_measures",
    "log_space_truncated_measures",
]


class ConsistencyError(RuntimeError):
    """Internal log-space bookkeeping failed a sanity check."""


def scaling_length(bip: Bipartition) -> int:
    """Quarter-chain length of an equal bipartition: l_a = l_b = 2*s -> s."""
    if bip.l_a != bip.l_b:
        raise ValueError("closed-form estimates assume an equal bipartition")
    return bip.l_a // 2


def equal_bipartition(length: int) -> Bipartition:
    """Bipartition whose scaling_length is `length`: blocks of 2*length sites."""
    return Bipartition(2 * length, 2 * length)


def lambda_max(length: int) -> float:
    """Location of the sector-weight maximum, sqrt(length/2)."""
    return math.sqrt(length / 2.0)


def lambda_star(length: int, q: float) -> float:
    """Location of the maximum of weight * irrep dimension, length*log(q)/2."""
    return 0.5 * length * math.log(q)


def p_lambda_asymp(lam: float, length: int) -> float:
    """Gaussian-regime sector weight: (8*sqrt(2/pi)) * lam**2/length**1.5 * exp(-2*lam**2/length).

    Valid deep inside 1 << lam << length; warns when lam falls outside
    [1, length/2].
    """
    if length <= 0:
        raise ValueError(f"length must be positive, got {length}")
    if not 1.0 <= lam <= length / 2.0:
        warnings.warn(
            f"sector-weight asymptotics assume 1 <= lam <= length/2, got lam={lam}",
            stacklevel=2,
        )
    return (
        8.0 * math.sqrt(2.0 / math.pi)
        * lam * lam / length ** 1.5
        * math.exp(-2.0 * lam * lam / length)
    )


def e_less_asymp(length: int, q: float) -> float:
    """Mode estimate log(q)*sqrt(2*length) of the formation-cost family (q > 1).

    This uses the location of the weight maximum; the true mean of the label
    distribution is larger by a factor 2/sqrt(pi), so treat the prefactor as
    an order-of-magnitude guide and the sqrt scaling as the real content.
    """
    if q <= 1.0:
        raise ValueError("defined for q > 1; use e_su2_asymp for q = 1")
    if length < 0:
        raise ValueError(f"length must be non-negative, got {length}")
    return math.log(q) * math.sqrt(2.0 * length)


def e_greater_asymp(length: int, q: float) -> float:
    """Saddle estimate (log(q)**2/2)*length of negativity / exact PPT cost (q > 1)."""
    if q <= 1.0:
        raise ValueError("defined for q > 1; use e_su2_asymp for q = 1")
    if length < 0:
        raise ValueError(f"length must be non-negative, got {length}")
    return 0.5 * math.log(q) ** 2 * length


def e_su2_asymp(length: int) -> float:
    """Leading q = 1 behavior log(length)/2; the additive O(1) is not modelled."""
    if length < 1:
        raise ValueError(f"length must be >= 1, got {length}")
    return 0.5 * math.log(length)


def gaussian_tail(a: float) -> float:
    """Mass of the normalized lam**2-Gaussian weight profile beyond a*lambda_max.

    Equals (2*a*exp(-a**2) + sqrt(pi)*erfc(a)) / sqrt(pi); strictly decreasing
    from gaussian_tail(0) = 1.
    """
    root_pi = math.sqrt(math.pi)
    return (2.0 * a * math.exp(-a * a) + root_pi * math.erfc(a)) / root_pi


def a_epsilon(eps: float, tol: float = 1e-10) -> float:
    """Solve gaussian_tail(a) = eps by bisection on [0, 10] to absolute `tol`."""
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    lo, hi = 0.0, 10.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if gaussian_tail(mid) > eps:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class AsymptoticEstimate:
    """Closed-form estimates at one scaling length."""

    length: int
    q: float
    e_less_est: float
    e_greater_est: float
    lambda_max: float
    lambda_star: float


def estimate(spec: CommutantSpec, length: int) -> AsymptoticEstimate:
    """Asymptotic estimate pair for the given symmetry at scaling length `length`.

    For n = 2 both estimates collapse to log(length)/2 and lambda_star is
    reported as 0 (the weighted-dimension sum has no exponential saddle).
    """
    q = spec.q
    if spec.n == 2:
        value = e_su2_asymp(length)
        return AsymptoticEstimate(length, q, value, value, lambda_max(length), 0.0)
    return AsymptoticEstimate(
        length,
        q,
        e_less_asymp(length, q),
        e_greater_asymp(length, q),
        lambda_max(length),
        lambda_star(length, q),
    )


def _log_krylov_dims(lams: np.ndarray, length: int) -> np.ndarray:
    half = length // 2
    return (
        np.log(2 * lams + 1)
        - np.log(half + lams + 1)
        + gammaln(length + 1)
        - gammaln(half + lams + 1)
        - gammaln(half - lams + 1)
    )


def _log_irrep_dims(lams: np.ndarray, spec: CommutantSpec) -> np.ndarray:
    if spec.n == 2:
        return np.log(2 * lams + 1)
    log_q = math.log(spec.q)
    leading = (2 * lams + 1) * log_q
    return leading + np.log1p(-np.exp(-2.0 * leading)) - math.log(spec.q - 1.0 / spec.q)


def log_sector_weights(spec: CommutantSpec, bip: Bipartition):
    """Arrays (lams, log p_lam, log d_lam) for log-space evaluation.

    log p is normalized by a log-sum-exp over the joint Krylov dimensions;
    a drift of the exponentiated weights from 1 beyond 1e-8 raises
    :class:`ConsistencyError`.
    """
    lams = np.arange(min(bip.l_a, bip.l_b) // 2 + 1)
    log_joint = _log_krylov_dims(lams, bip.l_a) + _log_krylov_dims(lams, bip.l_b)
    log_p = log_joint - logsumexp(log_joint)
    drift = abs(float(np.exp(log_p).sum()) - 1.0)
    if drift > 1e-8:
        raise ConsistencyError(f"sector weights drifted from 1 by {drift:.3e}")
    return lams, log_p, _log_irrep_dims(lams, spec)


def log_space_measures(spec: CommutantSpec, bip: Bipartition, base: str = "e") -> MeasureReport:
    """Measure pair from the exact sums evaluated in log space.

    Matches the rational mode to ~1e-9 where both apply, but stays finite for
    block sizes far beyond big-rational feasibility: e_less is a weighted sum
    in probability space, e_greater a log-sum-exp over log p + log d.
    """
    _, log_p, log_d = log_sector_weights(spec, bip)
    weights = np.exp(log_p)
    scale = LOG_BASE_SCALE[base]
    less = float(weights @ log_d) / scale
    greater = float(logsumexp(log_p + log_d)) / scale
    return MeasureReport(spec.n, bip.l_a, bip.l_b, less, greater, base, LOG_SPACE)


@dataclass(frozen=True)
class TruncatedMeasures:
    """Log-space analogue of truncate() followed by the measure pair."""

    cutoff: int        # largest retained irrep label
    actual_tail: float # tail mass removed (eps')
    e_less: float
    e_greater: float


def log_space_truncated_measures(
    spec: CommutantSpec, bip: Bipartition, eps: float, base: str = "e"
) -> TruncatedMeasures:
    """Truncate the sector tail (mass <= eps) in log space and re-evaluate.

    Uses the same cutoff rule as the exact-rational truncation: the smallest
    label A whose strict tail mass does not exceed eps.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    _, log_p, log_d = log_sector_weights(spec, bip)
    weights = np.exp(log_p)
    # tail_beyond[k] = sum of weights with lam > k, decreasing in k
    tail_beyond = np.concatenate([np.cumsum(weights[::-1])[::-1][1:], [0.0]])
    cutoff = int(np.argmax(tail_beyond <= eps))
    actual = float(tail_beyond[cutoff])
    kept = slice(0, cutoff + 1)
    scale = LOG_BASE_SCALE[base]
    less = float(weights[kept] @ log_d[kept]) / (1.0 - actual) / scale
    greater = (float(logsumexp(log_p[kept] + log_d[kept])) - math.log1p(-actual)) / scale
    return TruncatedMeasures(cutoff, actual, less, greater)
