from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sheafbn.errors import DegreeOutOfRange, InputError, NotAComplex, RingMismatch
from sheafbn.exactalg import (INTEGERS, RATIONALS, CochainComplex, FpModule, Matrix,
                              RingSpec, cohomology_at, determinant, fp_module,
                              kernel_basis, modules_isomorphic, prime_field, rank,
                              smith_normal_form, solve)

Z, Q = INTEGERS, RATIONALS

int_matrices = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n),
                           min_size=m, max_size=m)))


@settings(max_examples=60, deadline=None)
@given(int_matrices)
def test_snf_properties(rows):
    M = Matrix(Z, rows)
    U, S, V = smith_normal_form(M)
    assert U @ M @ V == S
    assert abs(determinant(U)) == 1 and abs(determinant(V)) == 1
    diag = [S[i, i] for i in range(min(S.shape))]
    for i in range(S.nrows):
        for j in range(S.ncols):
            if i != j:
                assert S[i, j] == 0
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    assert diag[:len(nz)] == nz
    assert all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))


@settings(max_examples=40, deadline=None)
@given(int_matrices)
def test_kernel_basis_is_kernel(rows):
    M = Matrix(Z, rows)
    K = kernel_basis(M)
    assert (M @ K).is_zero()
    assert K.ncols == M.ncols - rank(M)


def test_snf_known():
    M = Matrix(Z, [[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    _, S, _ = smith_normal_form(M)
    assert [S[i, i] for i in range(3)] == [2, 6, 12]


def test_fp_module_canonical():
    assert fp_module(Matrix(Z, [[2, 0], [0, 3]])) == FpModule(Z, 0, (6,))
    assert str(fp_module(Matrix(Z, [[2], [0], [0]]))) == "Z^2 ⊕ Z/2"
    assert FpModule.from_factors(Z, 0, [4, 6]) == FpModule(Z, 0, (2, 12))
    assert fp_module(Matrix(Q, [[2, 0], [0, 0]])) == FpModule(Q, 1)


def test_fp_module_rejects_bad_chain():
    with pytest.raises(InputError):
        FpModule(Z, 0, (3, 2))
    with pytest.raises(InputError):
        FpModule(Q, 0, (2,))


def test_modules_isomorphic_ring_mismatch():
    with pytest.raises(RingMismatch):
        modules_isomorphic(FpModule(Z, 1), FpModule(Q, 1))


def test_ring_parsing_and_arithmetic():
    F5 = RingSpec.parse("Z/5")
    assert F5 == prime_field(5) and F5.is_field
    assert F5.inv(2) == 3
    assert RingSpec.parse("Q").coerce("1/3") == Fraction(1, 3)
    with pytest.raises(InputError):
        RingSpec.parse("Z/4")
    with pytest.raises(InputError):
        Z.coerce(Fraction(1, 2))


def test_rank_over_fields_differs():
    M = Matrix(Z, [[2, 0], [0, 1]])
    assert rank(M) == 2
    assert rank(Matrix(prime_field(2), M.rows)) == 1


def test_solve_exact():
    A = Matrix(Z, [[1, 0], [1, 1], [0, 2]])
    B = A @ Matrix(Z, [[3], [-2]])
    assert solve(A, B) == Matrix(Z, [[3], [-2]])
    with pytest.raises(InputError):
        solve(Matrix(Z, [[2]]), Matrix(Z, [[1]]))


def test_inverse_over_q_and_z():
    M = Matrix(Q, [[1, 2], [3, 4]])
    assert M @ M.inverse() == Matrix.identity(Q, 2)
    with pytest.raises(ZeroDivisionError):
        Matrix(Z, [[2]]).inverse()


def test_cochain_complex_cohomology():
    d0 = Matrix(Z, [[2]])
    C = CochainComplex(Z, {0: 1, 1: 1}, {0: d0})
    assert cohomology_at(C, 0).is_zero()
    assert cohomology_at(C, 1) == FpModule(Z, 0, (2,))
    assert C.euler_characteristic() == 0
    with pytest.raises(DegreeOutOfRange):
        cohomology_at(C, 2)


def test_not_a_complex():
    one = Matrix(Z, [[1]])
    C = CochainComplex(Z, {0: 1, 1: 1, 2: 1}, {0: one, 1: one})
    with pytest.raises(NotAComplex):
        C.check()
    with pytest.raises(NotAComplex):
        cohomology_at(C, 1)
