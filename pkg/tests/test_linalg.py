import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from loophecke.linalg import (
    DimensionMismatch, Matrix, SpanBasis, direct_sum, kronecker, span_insert, subspace_product_dim,
    trace_form_radical,
)
from loophecke.scalars import GF, QQ, QQt

entries = st.integers(-4, 4)


def mats(r, c):
    return st.lists(st.lists(entries, min_size=c, max_size=c), min_size=r, max_size=r)


@settings(max_examples=40, derandomize=True)
@given(mats(4, 5))
def test_rank_and_det_match_sympy(rows):
    m = Matrix(QQ, rows)
    ref = sympy.Matrix(rows)
    assert m.rank() == ref.rank()
    sq = Matrix(QQ, [r[:4] for r in rows])
    assert sq.det() == Fraction(int(sympy.Matrix([r[:4] for r in rows]).det()))


@settings(max_examples=40, derandomize=True)
@given(mats(4, 6))
def test_rref_is_idempotent(rows):
    R, piv = Matrix(QQ, rows).rref()
    R2, piv2 = Matrix(QQ, R).rref()
    assert R == R2 and piv == piv2


@settings(max_examples=30, derandomize=True)
@given(mats(3, 5))
def test_rank_nullity(rows):
    m = Matrix(QQ, rows)
    null = m.nullspace()
    assert m.rank() + len(null) == 5
    for v in null:
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)


@settings(max_examples=25, derandomize=True)
@given(mats(2, 2), mats(2, 3), mats(2, 2), mats(3, 2))
def test_kronecker_mixed_product(a, b, c, d):
    A, B, C, D = (Matrix(QQ, x) for x in (a, b, c, d))
    assert kronecker(A, B) @ kronecker(C, D) == kronecker(A @ C, B @ D)


def test_prime_field_inverse():
    F = GF(101)
    rng = random.Random(3)
    while True:
        m = Matrix(F, [[rng.randrange(101) for _ in range(4)] for _ in range(4)])
        if m.rank() == 4:
            break
    assert m @ m.inverse() == Matrix.identity(F, 4)


def test_rational_function_matrix():
    t = QQt.gen()
    m = Matrix(QQt, [[1 - t, t], [1, 0]])
    assert m @ m == m.scale(1 - t) + Matrix.identity(QQt, 2).scale(t)
    assert m.det() == -t


def test_direct_sum_and_mismatch():
    a, b = Matrix.identity(QQ, 2), Matrix(QQ, [[5]])
    s = direct_sum(a, b)
    assert s.shape == (3, 3) and s[2, 2] == 5
    with pytest.raises(DimensionMismatch):
        a @ b


def test_span_insert():
    span = SpanBasis.empty(QQ, 3)
    span, new = span_insert(span, [1, 2, 3])
    assert new
    span, new = span_insert(span, [2, 4, 6])
    assert not new and span.dim() == 1


def test_trace_form_radical_of_upper_triangular():
    # span{E11, E12, E22}: radical is span{E12}
    E = lambda i, j: Matrix(QQ, [[1 if (r, c) == (i, j) else 0 for c in range(2)] for r in range(2)])
    rad = trace_form_radical([E(0, 0), E(0, 1), E(1, 1)])
    assert rad.dim() == 1


def test_subspace_product_dim():
    E = lambda i, j: Matrix(QQ, [[1 if (r, c) == (i, j) else 0 for c in range(2)] for r in range(2)])
    full = [E(i, j) for i in range(2) for j in range(2)]
    assert subspace_product_dim(E(0, 0), full, E(1, 1)) == 1
    assert subspace_product_dim(E(0, 0), [E(0, 0), E(1, 1)], E(1, 1)) == 0
