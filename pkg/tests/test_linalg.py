import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from codegraphs.linalg import (
    MatrixGF,
    PrimeField,
    complete_basis,
    inverse,
    kernel_basis,
    orthogonal_complement,
    rank,
    row_basis,
    row_space_equal,
    rref,
)

from catalog import RM8_ROWS
from oracles import rank_by_enumeration, span

GF2 = PrimeField(2)
GF3 = PrimeField(3)


def test_field_rejects_composite_and_small():
    for bad in (0, 1, 4, 9, 15):
        with pytest.raises(ValueError):
            PrimeField(bad)


def test_field_axioms_gf5():
    f = PrimeField(5)
    for a in f.elements():
        assert f.add(a, f.neg(a)) == 0
        if a:
            assert f.mul(a, f.inv(a)) == 1
    with pytest.raises(ZeroDivisionError):
        f.inv(0)


def test_matrix_entries_reduced_and_immutable():
    m = MatrixGF(GF3, [[4, -1], [3, 5]])
    assert m.tolist() == [[1, 2], [0, 2]]
    with pytest.raises(ValueError):
        m.array[0, 0] = 2
    with pytest.raises(AttributeError):
        m.field = GF2


def test_rref_duplicate_rows():
    r, k, piv = rref(MatrixGF(GF2, [[1, 1], [1, 1]]))
    assert r.tolist() == [[1, 1], [0, 0]] and k == 1 and piv == [0]


def test_rref_identity():
    eye = MatrixGF.identity(GF3, 3)
    r, k, piv = rref(eye)
    assert r == eye and k == 3 and piv == [0, 1, 2]


def test_rank_of_dependent_reed_muller_generators():
    m = MatrixGF(GF2, RM8_ROWS)
    assert rank(m) == 4
    assert rank_by_enumeration(RM8_ROWS, 2) == 4


def test_kernel_of_zero_and_identity():
    assert kernel_basis(MatrixGF.zeros(GF2, 2, 3)) == MatrixGF.identity(GF2, 3)
    assert kernel_basis(MatrixGF.identity(GF2, 3)).rows == 0


def test_reed_muller_generators_have_one_dependency():
    m = MatrixGF(GF2, RM8_ROWS)
    k = kernel_basis(m.T)
    assert k.rows == 1
    # brute force: exactly one nonzero coefficient vector annihilates the rows
    hits = [
        c for c in itertools.product(range(2), repeat=5)
        if any(c) and not ((np.array(c) @ np.array(RM8_ROWS)) % 2).any()
    ]
    assert hits == [tuple(k.row(0))]


def test_orthogonal_complement_examples():
    c = MatrixGF(GF2, [[1, 1, 0], [1, 0, 1]])
    assert row_space_equal(orthogonal_complement(c, 3), MatrixGF(GF2, [[1, 1, 1]]))
    assert orthogonal_complement(MatrixGF.zeros(GF2, 0, 3), 3).rows == 3
    rm = row_basis(MatrixGF(GF2, RM8_ROWS))
    assert row_space_equal(orthogonal_complement(rm, 8), rm)


def test_row_space_equal_examples():
    assert row_space_equal(MatrixGF(GF2, [[1, 1]]), MatrixGF(GF2, [[1, 1], [0, 0]]))
    assert not row_space_equal(MatrixGF(GF2, [[1, 0]]), MatrixGF(GF2, [[0, 1]]))
    a, b = MatrixGF(GF3, [[1, 2]]), MatrixGF(GF3, [[2, 1]])
    assert row_space_equal(a, b)
    assert span([[1, 2]], 3, 2) == span([[2, 1]], 3, 2)


def test_complete_basis_examples():
    out = complete_basis(MatrixGF(GF2, [[1, 1]]), 2)
    assert out.tolist() == [[1, 1], [1, 0]]
    assert len(span(out.tolist(), 2, 2)) == 4
    eye = MatrixGF.identity(GF2, 2)
    assert complete_basis(eye, 2) == eye
    assert complete_basis(MatrixGF.zeros(GF3, 0, 2), 2) == MatrixGF.identity(GF3, 2)
    with pytest.raises(ValueError):
        complete_basis(MatrixGF(GF2, [[1, 1], [1, 1]]), 2)


def test_inverse_roundtrip_and_singular():
    m = MatrixGF(GF3, [[1, 2], [0, 1]])
    assert m @ inverse(m) == MatrixGF.identity(GF3, 2)
    with pytest.raises(ValueError):
        inverse(MatrixGF(GF3, [[1, 2], [2, 1]]))


@st.composite
def matrices(draw, max_rows=5, max_cols=6):
    p = draw(st.sampled_from([2, 3, 5]))
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(1, max_cols))
    entries = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return MatrixGF(PrimeField(p), np.array(entries, dtype=np.int64).reshape(r, c), cols=c)


@settings(max_examples=200, derandomize=True, deadline=None)
@given(matrices())
def test_rank_nullity_and_kernel_annihilates(m):
    k = kernel_basis(m)
    assert rank(m) + k.rows == m.cols
    if k.rows and m.rows:
        assert (m @ k.T).is_zero()


@settings(max_examples=200, derandomize=True, deadline=None)
@given(matrices())
def test_rref_matches_enumerated_span(m):
    p = m.field.p
    if p ** m.rows > 5000:
        return
    assert span(m.tolist(), p, m.cols) == span(row_basis(m).tolist(), p, m.cols)
    _, k, piv = rref(m)
    assert piv == sorted(piv) and len(piv) == k


@settings(max_examples=200, derandomize=True, deadline=None)
@given(matrices())
def test_orthogonal_complement_is_involution(m):
    once = orthogonal_complement(m, m.cols)
    assert row_space_equal(orthogonal_complement(once, m.cols), row_basis(m))
    assert once.rows == m.cols - rank(m)


@settings(max_examples=200, derandomize=True, deadline=None)
@given(matrices())
def test_complete_basis_full_rank(m):
    b = row_basis(m)
    out = complete_basis(b, m.cols)
    assert out.rows == m.cols and rank(out) == m.cols
    assert MatrixGF(m.field, out.array[: b.rows], cols=m.cols) == b
