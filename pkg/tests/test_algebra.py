"""Exact combinatorics: closed forms pinned by brute-force enumeration."""

import math
from fractions import Fraction
from functools import cache

import pytest
from hypothesis import given, strategies as st

from qfrag.algebra import (
    Bipartition,
    CommutantSpec,
    krylov_dim,
    q_from_n,
    qdim,
    sector_table,
)


# --- independent oracle: standard Young tableaux of a two-row shape ----------

@cache
def count_two_row_tableaux(row1: int, row2: int) -> int:
    """Enumerate standard fillings by walking the Young lattice downward."""
    if row2 > row1 or row2 < 0:
        return 0
    if row1 == 0:
        return 1
    total = 0
    if row1 > row2:
        total += count_two_row_tableaux(row1 - 1, row2)
    if row2 > 0:
        total += count_two_row_tableaux(row1, row2 - 1)
    return total


def test_tableau_oracle_sanity():
    assert count_two_row_tableaux(1, 0) == 1
    assert count_two_row_tableaux(1, 1) == 1
    assert count_two_row_tableaux(2, 1) == 2
    assert count_two_row_tableaux(4, 4) == 14  # Catalan number


# --- q_from_n -----------------------------------------------------------------

def test_q_from_n_examples():
    assert q_from_n(2) == 1.0
    assert q_from_n(3) == pytest.approx((3 + math.sqrt(5)) / 2, abs=1e-14)
    assert q_from_n(4) == pytest.approx(2 + math.sqrt(3), abs=1e-14)


@pytest.mark.parametrize("n", range(2, 10))
def test_q_from_n_solves_defining_equation(n):
    q = q_from_n(n)
    assert q >= 1.0
    assert abs(q + 1.0 / q - n) <= 1e-12


def test_q_from_n_rejects_small_n():
    with pytest.raises(ValueError):
        q_from_n(1)


# --- qdim ---------------------------------------------------------------------

def test_qdim_examples():
    for n in range(2, 7):
        assert qdim(0, n) == 1
    assert qdim(3, 2) == 7
    assert qdim(1, 3) == 8
    assert qdim(2, 3) == 55


def test_qdim_su2_case():
    for lam in range(51):
        assert qdim(lam, 2) == 2 * lam + 1


@pytest.mark.parametrize("n", [3, 4, 5])
def test_qdim_matches_float_formula(n):
    q = q_from_n(n)
    for lam in range(51):
        exact = qdim(lam, n)
        power = 2 * lam + 1
        approx = (q ** power - q ** (-power)) / (q - 1.0 / q)
        assert abs(exact - approx) / exact <= 1e-10


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_qdim_strictly_increasing(n):
    dims = [qdim(lam, n) for lam in range(51)]
    assert all(a < b for a, b in zip(dims, dims[1:]))
    assert dims[0] == 1


def test_qdim_rejects_bad_input():
    with pytest.raises(ValueError):
        qdim(-1, 3)
    with pytest.raises(ValueError):
        qdim(2, 1)


# --- krylov_dim ---------------------------------------------------------------

def test_krylov_dim_examples():
    for length in range(2, 14, 2):
        assert krylov_dim(length // 2, length) == 1
    assert krylov_dim(0, 8) == 14
    assert krylov_dim(1, 4) == 3


def test_krylov_dim_counts_tableaux():
    for length in range(2, 12, 2):
        half = length // 2
        for lam in range(half + 1):
            assert krylov_dim(lam, length) == count_two_row_tableaux(half + lam, half - lam)


def test_krylov_dim_rejects_bad_input():
    with pytest.raises(ValueError):
        krylov_dim(0, 7)
    with pytest.raises(ValueError):
        krylov_dim(5, 8)
    with pytest.raises(ValueError):
        krylov_dim(-1, 8)


@pytest.mark.parametrize("length", range(8, 42, 2))
def test_krylov_dim_unimodal_with_interior_max(length):
    # rises to an interior peak (possibly a two-wide plateau) and then falls
    dims = [krylov_dim(lam, length) for lam in range(length // 2 + 1)]
    top = max(dims)
    first = dims.index(top)
    last = len(dims) - 1 - dims[::-1].index(top)
    assert 0 < first and last < length // 2
    assert all(a < b for a, b in zip(dims[:first], dims[1:first + 1]))
    assert all(a > b for a, b in zip(dims[last:], dims[last + 1:]))


def test_catalan_convolution_small():
    for half in range(2, 42, 2):
        total = sum(krylov_dim(lam, half) ** 2 for lam in range(half // 2 + 1))
        assert total == krylov_dim(0, 2 * half)


def test_hilbert_space_count_small():
    for n in (2, 3, 4, 5):
        for length in range(2, 22, 2):
            total = sum(
                krylov_dim(lam, length) * qdim(lam, n)
                for lam in range(length // 2 + 1)
            )
            assert total == n ** length


# --- domain types and sector_table ---------------------------------------------

def test_bipartition_rejects_odd_or_nonpositive_blocks():
    for l_a, l_b in [(3, 4), (4, 3), (0, 4), (4, 0), (-2, 4)]:
        with pytest.raises(ValueError):
            Bipartition(l_a, l_b)


def test_commutant_spec_rejects_small_n():
    with pytest.raises(ValueError):
        CommutantSpec(1)


def test_sector_table_examples():
    table = sector_table(CommutantSpec(3), Bipartition(4, 4))
    assert table.weights() == (Fraction(4, 14), Fraction(9, 14), Fraction(1, 14))
    assert [row.irrep_dim for row in table.rows] == [1, 8, 55]
    assert [row.krylov_a for row in table.rows] == [2, 3, 1]
    assert table.invariant_dim == 14

    for n in (2, 3, 4, 5):
        small = sector_table(CommutantSpec(n), Bipartition(2, 2))
        assert small.weights() == (Fraction(1, 2), Fraction(1, 2))
        assert small.rows[0].irrep_dim == 1


def test_sector_table_asymmetric_cut():
    table = sector_table(CommutantSpec(2), Bipartition(2, 6))
    assert [row.lam for row in table.rows] == [0, 1]
    assert table.weights() == (Fraction(5, 14), Fraction(9, 14))


@given(
    n=st.integers(min_value=2, max_value=5),
    half_a=st.integers(min_value=1, max_value=6),
    half_b=st.integers(min_value=1, max_value=6),
)
def test_sector_table_invariants(n, half_a, half_b):
    bip = Bipartition(2 * half_a, 2 * half_b)
    table = sector_table(CommutantSpec(n), bip)
    d0 = table.invariant_dim
    assert sum(table.weights()) == 1
    assert [row.lam for row in table.rows] == list(range(min(bip.l_a, bip.l_b) // 2 + 1))
    for row in table.rows:
        assert row.weight == Fraction(row.krylov_a * row.krylov_b, d0)
        assert row.weight > 0
    # the joint sector count over any even split rebuilds the full invariant dimension
    assert d0 == krylov_dim(0, bip.total)
