import random
from fractions import Fraction

import sympy
from hypothesis import given, strategies as st

from equivar.linalg import (
    RowReducer,
    SparseMatrix,
    canonical_basis,
    dense,
    in_span,
    kernel,
    rank,
    same_span,
)


def test_kernel_examples():
    assert kernel([[1, 0], [0, 1]]) == (0, [])
    dim, basis = kernel(SparseMatrix(3))
    assert dim == 3
    assert basis == [{0: 1}, {1: 1}, {2: 1}]
    assert kernel([[1, 1, 0], [0, 0, 1]]) == (1, [{0: 1, 1: -1}])


def test_seeded_invertible_matrix_has_full_rank():
    rng = random.Random(7)
    while True:
        M = [[rng.randint(-4, 4) for _ in range(3)] for _ in range(3)]
        if sympy.Matrix(M).det():
            break
    assert kernel(M)[0] == 0
    assert rank([{j: v for j, v in enumerate(r) if v} for r in M], 3) == 3


matrices = st.integers(1, 5).flatmap(lambda n: st.lists(
    st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=0, max_size=6).map(lambda rows: (n, rows)))


@given(matrices)
def test_kernel_against_sympy(data):
    n, rows = data
    M = SparseMatrix.from_dense(rows, n)
    dim, basis = kernel(M)
    ref = sympy.Matrix(rows).rank() if rows else 0
    assert dim == n - ref
    for v in basis:
        assert min(v) in v and v[min(v)] == 1
        for r in rows:
            assert sum(Fraction(r[j]) * x for j, x in v.items()) == 0


@given(matrices, st.randoms(use_true_random=False))
def test_kernel_basis_independent_of_row_order(data, rnd):
    n, rows = data
    shuffled = list(rows)
    rnd.shuffle(shuffled)
    scaled = [[3 * x for x in r] for r in shuffled]
    assert kernel(SparseMatrix.from_dense(rows, n)) == kernel(SparseMatrix.from_dense(scaled, n))


def test_reducer_streams_rows():
    red = RowReducer(3)
    assert red.add({0: 2, 1: 2})
    assert not red.add({0: 1, 1: 1})
    assert red.add({1: 1, 2: 1})
    assert red.rref() == [{0: 1, 2: -1}, {1: 1, 2: 1}]
    assert red.kernel() == [{0: 1, 1: -1, 2: 1}]
    assert red.reduce({0: 1}) == {2: 1}


def test_span_helpers():
    a = [{0: 1, 1: 1}, {1: 1}]
    b = [{0: 1}, {0: 2, 1: 5}]
    assert same_span(a, b)
    assert not same_span(a, [{0: 1}])
    assert in_span({0: 3, 1: -1}, a)
    assert not in_span({2: 1}, a, 3)
    assert canonical_basis(a) == [{0: 1}, {1: 1}]
    assert dense({2: Fraction(1, 2)}, 4) == [0, 0, Fraction(1, 2), 0]


def test_sparse_matrix_bounds():
    M = SparseMatrix(2)
    try:
        M.append({2: 1})
    except IndexError:
        pass
    else:
        raise AssertionError("column outside the range accepted")
    M.append({0: 0, 1: 3})
    assert M.rows == [{1: 3}]
