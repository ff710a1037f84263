import random
from fractions import Fraction

import pytest

from kronhf.errors import ShapeError, ValidationError
from kronhf.fields import QQ, PrimeField, is_prime, parse_rational
from kronhf.matrices import (Matrix, column_space_dim_of_stack, matrix_from_text,
                             min_eigenvalue_symmetric, random_matrix,
                             random_invertible)


def test_is_prime_small():
    primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31]
    for n in range(2, 32):
        assert is_prime(n) == (n in primes)
    assert is_prime(2_147_483_647)
    assert not is_prime(2_147_483_647 * 3)


def test_prime_field_rejects_composite():
    with pytest.raises(ValidationError):
        PrimeField(4)


def test_prime_field_arithmetic():
    F7 = PrimeField(7)
    assert F7.add(5, 4) == 2
    assert F7.mul(3, 5) == 1
    assert F7.inv(3) == 5
    assert F7.coerce(-1) == 6
    assert F7.coerce(Fraction(1, 2)) == 4


def test_parse_rational_rejects_floats():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational("-2") == Fraction(-2)
    with pytest.raises(ValidationError):
        parse_rational("0.75")


def test_rank_identity_and_zero():
    F5 = PrimeField(5)
    assert Matrix.identity(F5, 3).rank() == 3
    assert Matrix.zeros(QQ, 2, 4).rank() == 0


def test_kernel_identity_zero_and_f2():
    assert Matrix.identity(QQ, 4).kernel_basis().cols == 0
    assert Matrix.zeros(QQ, 2, 3).kernel_basis().cols == 3
    F2 = PrimeField(2)
    m = Matrix.from_dense(F2, [[1, 1], [1, 1]])
    ker = m.kernel_basis()
    assert ker.cols == 1
    assert [ker.entry(0, 0), ker.entry(1, 0)] == [1, 1]


def test_rank_transpose_invariant_random():
    rng = random.Random(7)
    for fld in (QQ, PrimeField(5)):
        for _ in range(200):
            m = random_matrix(fld, rng.randint(0, 6), rng.randint(0, 6), rng)
            assert m.rank() == m.transpose().rank()


def test_rank_nullity_and_exact_kernel():
    rng = random.Random(11)
    for fld in (QQ, PrimeField(3)):
        for _ in range(60):
            m = random_matrix(fld, rng.randint(1, 6), rng.randint(1, 6), rng)
            ker = m.kernel_basis()
            assert m.cols == m.rank() + ker.cols
            assert (m @ ker).is_zero()


def test_solve_exact():
    rng = random.Random(3)
    a = random_invertible(QQ, 5, rng)
    b = random_matrix(QQ, 5, 2, rng)
    x = a.solve(b)
    assert a @ x == b


def test_column_space_dim_of_stack():
    F2 = PrimeField(2)
    i2 = Matrix.identity(QQ, 2)
    assert column_space_dim_of_stack([i2, i2]) == 2
    e1 = Matrix.from_dense(QQ, [[1], [0]])
    e2 = Matrix.from_dense(QQ, [[0], [1]])
    assert column_space_dim_of_stack([e1, e2]) == 2
    # both images of span{(1,1)} under id and the swap coincide over F_2
    v = Matrix.from_dense(F2, [[1], [1]])
    swap = Matrix.from_dense(F2, [[0, 1], [1, 0]])
    assert column_space_dim_of_stack([v, swap @ v]) == 1
    with pytest.raises(ShapeError):
        column_space_dim_of_stack([i2, Matrix.identity(QQ, 3)])


def test_matrix_text_roundtrip():
    m = Matrix.from_dense(QQ, [[Fraction(1, 2), -1], [0, 3]])
    again = matrix_from_text(m.to_text())
    assert again == m
    F5 = PrimeField(5)
    m5 = Matrix.from_dense(F5, [[1, 4, 0], [2, 2, 3]])
    assert matrix_from_text(m5.to_text()) == m5


def test_selection_detection():
    s = Matrix.selection(QQ, 6, [2, 0, 5])
    assert s.is_selection() == [2, 0, 5]
    assert s.rank() == 3
    m = Matrix.from_dense(QQ, [[1, 1], [0, 0]])
    assert m.is_selection() == [0, 0]  # unit columns, repeated row
    assert m.rank() == 1  # duplicate rows force the generic path
    assert Matrix.from_dense(QQ, [[2, 0], [0, 1]]).is_selection() is None


def test_min_eigenvalue_symmetric():
    assert min_eigenvalue_symmetric([[1.0, 0, 0], [0, 2, 0], [0, 0, 3]]) == pytest.approx(1.0)
    assert min_eigenvalue_symmetric([[0.0, 0], [0, 0]]) == pytest.approx(0.0)
    assert min_eigenvalue_symmetric([[2.0, 1], [1, 2]]) == pytest.approx(1.0, abs=1e-10)
    with pytest.raises(ValidationError):
        min_eigenvalue_symmetric([[0.0, 1], [0, 0]])


def test_min_eigenvalue_random_diagonal():
    rng = random.Random(5)
    for _ in range(20):
        diag = [rng.uniform(-4, 4) for _ in range(rng.randint(1, 8))]
        m = [[diag[i] if i == j else 0.0 for j in range(len(diag))]
             for i in range(len(diag))]
        assert min_eigenvalue_symmetric(m) == pytest.approx(min(diag), abs=1e-10)
