"""Dense brute-force cross-checks on small chains.

Builds the Temperley-Lieb generators explicitly, grows the invariant
subspace from a dimer-product seed, and verifies the closed-form measures
against eigendecompositions of the reconstructed density matrix. All
operators here are real symmetric in the computational product basis and
every routine is deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .algebra import Bipartition, SectorTable, krylov_dim
from .measures import LOG_BASE_SCALE

__all__ = [
    "DEFAULT_DIM_CAP",
    "MemoryCapExceeded",
    "VerificationError",
    "CheckResult",
    "KrylovBasis",
    "dimer_vector",
    "tl_generator",
    "krylov_subspace",
    "mmis_dense",
    "partial_transpose",
    "trace_norm",
    "log_negativity_dense",
    "predicted_negativity_spectrum",
    "negativity_spectrum_check",
    "binegativity_check",
    "tl_relation_check",
    "entanglement_entropy",
    "truncated_mmis_dense",
]

DEFAULT_DIM_CAP = 3 ** 8

_GRAM_TOL = 1e-8       # residual norm above which a new direction is accepted
_ZERO_EIG_TOL = 1e-10  # |eigenvalue| below this counts as zero


class MemoryCapExceeded(RuntimeError):
    """Requested dense dimension exceeds the configured cap."""


class VerificationError(RuntimeError):
    """A brute-force computation contradicted a closed-form prediction."""


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one verification check."""

    name: str
    passed: bool
    max_abs_deviation: float
    detail: str = ""


@dataclass(frozen=True)
class KrylovBasis:
    """Orthonormal basis (as rows) of the invariant subspace of an n-dit chain."""

    n: int
    length: int
    vectors: np.ndarray  # shape (count, n**length)

    @property
    def count(self) -> int:
        return self.vectors.shape[0]


def dimer_vector(n: int) -> np.ndarray:
    """Maximally entangled two-site state (1/sqrt(n)) * sum_a |aa>."""
    vec = np.zeros(n * n)
    vec[:: n + 1] = 1.0 / math.sqrt(n)
    return vec


def tl_generator(j: int, n: int, length: int) -> sp.csr_matrix:
    """Generator acting as sum_{ab} |aa><bb| on sites (j, j+1), 1-based.

    On the pair this equals n times the dimer projector; elsewhere identity.
    """
    if not 1 <= j <= length - 1:
        raise ValueError(f"site index must lie in [1, {length - 1}], got {j}")
    dimer = dimer_vector(n)
    pair = sp.csr_matrix(n * np.outer(dimer, dimer))
    left = sp.identity(n ** (j - 1), format="csr")
    right = sp.identity(n ** (length - j - 1), format="csr")
    return sp.kron(sp.kron(left, pair), right).tocsr()


def krylov_subspace(n: int, length: int, dim_cap: int = DEFAULT_DIM_CAP) -> KrylovBasis:
    """Breadth-first closure of the dimer-product seed under all generators.

    Candidates are orthogonalized against the current basis with modified
    Gram-Schmidt plus one re-orthogonalization pass and accepted when the
    residual norm exceeds 1e-8. The final count is verified against the
    closed-form invariant-subspace dimension.
    """
    if length < 2 or length % 2:
        raise ValueError(f"chain length must be a positive even integer, got {length}")
    dim = n ** length
    if dim > dim_cap:
        raise MemoryCapExceeded(f"dense dimension {dim} exceeds the cap {dim_cap}")
    dimer = dimer_vector(n)
    seed = dimer
    for _ in range(length // 2 - 1):
        seed = np.kron(seed, dimer)
    generators = [tl_generator(j, n, length) for j in range(1, length)]
    basis: list[np.ndarray] = [seed]
    frontier = [seed]
    while frontier:
        fresh: list[np.ndarray] = []
        for vec in frontier:
            for gen in generators:
                candidate = gen @ vec
                for _ in range(2):
                    for known in basis:
                        candidate = candidate - (known @ candidate) * known
                norm = float(np.linalg.norm(candidate))
                if norm > _GRAM_TOL:
                    candidate /= norm
                    basis.append(candidate)
                    fresh.append(candidate)
        frontier = fresh
    expected = krylov_dim(0, length)
    if len(basis) != expected:
        raise VerificationError(
            f"invariant-subspace closure found {len(basis)} vectors, expected {expected}"
        )
    return KrylovBasis(n, length, np.array(basis))


def mmis_dense(
    n: int,
    length: int,
    dim_cap: int = DEFAULT_DIM_CAP,
    basis: KrylovBasis | None = None,
) -> np.ndarray:
    """Normalized projector onto the invariant subspace as a dense matrix."""
    if basis is None:
        basis = krylov_subspace(n, length, dim_cap)
    return basis.vectors.T @ basis.vectors / basis.count


def partial_transpose(mat: np.ndarray, n: int, bip: Bipartition) -> np.ndarray:
    """Transpose the A-block indices in the computational product basis.

    Involutive and trace-preserving; entries move as
    (a, b; a', b') -> (a', b; a, b').
    """
    dim_a = n ** bip.l_a
    dim_b = n ** bip.l_b
    if mat.shape != (dim_a * dim_b, dim_a * dim_b):
        raise ValueError(f"operator shape {mat.shape} does not match the bipartition")
    blocks = mat.reshape(dim_a, dim_b, dim_a, dim_b)
    return blocks.transpose(2, 1, 0, 3).reshape(dim_a * dim_b, dim_a * dim_b)


def trace_norm(mat: np.ndarray) -> float:
    """Sum of absolute eigenvalues of a real symmetric matrix."""
    return float(np.abs(np.linalg.eigvalsh(mat)).sum())


def log_negativity_dense(
    rho: np.ndarray, n: int, bip: Bipartition, base: str = "e"
) -> float:
    """Log of the trace norm of the partial transpose."""
    return math.log(trace_norm(partial_transpose(rho, n, bip))) / LOG_BASE_SCALE[base]


def predicted_negativity_spectrum(table: SectorTable, dim: int) -> np.ndarray:
    """Partial-transpose eigenvalues implied by the sector block structure.

    Per sector: +-1/(D0 * d) with multiplicities krylov_a*krylov_b*d*(d+1)/2
    and krylov_a*krylov_b*d*(d-1)/2, padded with zeros up to `dim`; returned
    sorted ascending.
    """
    d0 = table.invariant_dim
    values: list[float] = []
    for row in table.rows:
        d = row.irrep_dim
        magnitude = 1.0 / (d0 * d)
        pairs = row.krylov_a * row.krylov_b
        values.extend([magnitude] * (pairs * d * (d + 1) // 2))
        values.extend([-magnitude] * (pairs * d * (d - 1) // 2))
    if len(values) > dim:
        raise ValueError("sector multiplicities exceed the ambient dimension")
    values.extend([0.0] * (dim - len(values)))
    return np.sort(np.array(values))


def _multiset_summary(values: np.ndarray, decimals: int = 8) -> str:
    rounded = np.round(values, decimals)
    uniq, counts = np.unique(rounded, return_counts=True)
    return ", ".join(f"{u:+.2e} x{c}" for u, c in zip(uniq, counts))


def negativity_spectrum_check(
    rho: np.ndarray,
    n: int,
    bip: Bipartition,
    table: SectorTable,
    atol: float = 1e-9,
    eigenvalues: np.ndarray | None = None,
) -> CheckResult:
    """Compare the partial-transpose spectrum against the block prediction.

    Pass `eigenvalues` to reuse a precomputed eigendecomposition.
    """
    if eigenvalues is None:
        eigenvalues = np.linalg.eigvalsh(partial_transpose(rho, n, bip))
    predicted = predicted_negativity_spectrum(table, eigenvalues.shape[0])
    deviation = float(np.max(np.abs(np.sort(eigenvalues) - predicted)))
    if deviation <= atol:
        return CheckResult("negativity-spectrum", True, deviation)
    return CheckResult(
        "negativity-spectrum",
        False,
        deviation,
        f"computed [{_multiset_summary(eigenvalues)}] "
        f"vs predicted [{_multiset_summary(predicted)}]",
    )


def binegativity_check(
    rho: np.ndarray,
    n: int,
    bip: Bipartition,
    atol: float = 1e-9,
    pt_eig: tuple[np.ndarray, np.ndarray] | None = None,
) -> CheckResult:
    """Check |rho^PT|^PT >= 0 by explicit eigendecomposition.

    Pass `pt_eig = (eigenvalues, eigenvectors)` of the partial transpose to
    reuse a precomputed factorization.
    """
    if pt_eig is None:
        pt_eig = np.linalg.eigh(partial_transpose(rho, n, bip))
    eigvals, eigvecs = pt_eig
    abs_pt = (eigvecs * np.abs(eigvals)) @ eigvecs.T
    lowest = float(np.linalg.eigvalsh(partial_transpose(abs_pt, n, bip))[0])
    passed = lowest >= -atol
    return CheckResult(
        "binegativity",
        passed,
        max(0.0, -lowest),
        "" if passed else f"minimum eigenvalue {lowest:.3e}",
    )


def _max_abs(mat: sp.spmatrix) -> float:
    coo = mat.tocoo()
    return float(np.abs(coo.data).max()) if coo.nnz else 0.0


def tl_relation_check(n: int, length: int, atol: float = 1e-12) -> CheckResult:
    """Verify e^2 = n*e, e_j e_{j+-1} e_j = e_j and disjoint commutation.

    Sparse throughout, so this stays cheap even where dense storage would not.
    """
    generators = [tl_generator(j, n, length) for j in range(1, length)]
    worst = 0.0
    for i, gen in enumerate(generators):
        worst = max(worst, _max_abs(gen @ gen - n * gen))
        if i + 1 < len(generators):
            nxt = generators[i + 1]
            worst = max(worst, _max_abs(gen @ nxt @ gen - gen))
            worst = max(worst, _max_abs(nxt @ gen @ nxt - nxt))
        for far in generators[i + 2:]:
            worst = max(worst, _max_abs(gen @ far - far @ gen))
    return CheckResult("tl-relations", worst <= atol, worst)


def entanglement_entropy(vec: np.ndarray, dim_a: int, base: str = "e") -> float:
    """Von Neumann entropy of either block of a pure state.

    `dim_a` is the Hilbert-space dimension of the A block (n**l_a); the B
    dimension is inferred from the vector length.
    """
    norm = float(np.linalg.norm(vec))
    if abs(norm - 1.0) > 1e-10:
        raise ValueError(f"state vector must be normalized, |norm-1| = {abs(norm - 1.0):.3e}")
    if vec.size % dim_a:
        raise ValueError(f"vector length {vec.size} is not divisible by dim_a={dim_a}")
    schmidt_sq = np.linalg.svd(vec.reshape(dim_a, -1), compute_uv=False) ** 2
    schmidt_sq = schmidt_sq[schmidt_sq > 1e-15]
    return float(-(schmidt_sq * np.log(schmidt_sq)).sum()) / LOG_BASE_SCALE[base]


def truncated_mmis_dense(
    rho: np.ndarray,
    n: int,
    bip: Bipartition,
    table: SectorTable,
    cutoff: int,
    pt_eig: tuple[np.ndarray, np.ndarray] | None = None,
) -> np.ndarray:
    """Project onto the sectors lam <= cutoff and renormalize.

    Sector blocks are read off the eigenspaces of the partial transpose:
    eigenvalue magnitude 1/(D0*d) identifies the label uniquely because the
    irrep dimensions are strictly increasing.
    """
    if pt_eig is None:
        pt_eig = np.linalg.eigh(partial_transpose(rho, n, bip))
    eigvals, eigvecs = pt_eig
    d0 = table.invariant_dim
    magnitudes = [1.0 / (d0 * row.irrep_dim) for row in table.rows]
    projected = np.zeros_like(rho)
    for row in table.rows[: cutoff + 1]:
        mag = magnitudes[row.lam]
        others = [m for m in magnitudes if m != mag] + [0.0]
        tol = max(0.5 * min(abs(mag - other) for other in others), _ZERO_EIG_TOL)
        members = np.abs(np.abs(eigvals) - mag) < tol
        block = eigvecs[:, members]
        projected += block @ (block.T @ rho @ block) @ block.T
    trace = float(np.trace(projected))
    if trace <= 0.0:
        raise VerificationError("projected state has non-positive trace")
    return projected / trace
