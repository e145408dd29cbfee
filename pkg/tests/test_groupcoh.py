import pytest

from samples import F2, Q, Z, pres, sample_reps
from sheafbn.errors import SizeCapExceeded
from sheafbn.exactalg import FpModule
from sheafbn.fundgroup import GroupPresentation, todd_coxeter
from sheafbn.groupcoh import (EXACT, PRESENTATION_COMPLEX_ONLY, bar_cohomology, bar_complex,
                              fox_cohomology, multiplication_table)
from sheafbn.localsys import permutation_representation, representation, trivial_representation


def cyclic(m):
    return GroupPresentation(1, ((1,) * m,))


def table(P):
    return multiplication_table(todd_coxeter(P))


@pytest.mark.parametrize("m", [2, 3, 4])
def test_cyclic_integral_cohomology(m):
    P = cyclic(m)
    M = table(P)
    got = [bar_cohomology(M, trivial_representation(P, Z), n) for n in range(5)]
    assert got == [FpModule(Z, 1), FpModule(Z, 0), FpModule(Z, 0, (m,)),
                   FpModule(Z, 0), FpModule(Z, 0, (m,))]


def test_sign_representation_of_z2():
    P = cyclic(2)
    rho = representation(P, Z, [[[-1]]])
    got = [str(bar_cohomology(table(P), rho, n)) for n in range(5)]
    assert got == ["0", "Z/2", "0", "Z/2", "0"]


def test_bar_complex_is_a_complex():
    P = GroupPresentation(2, ((1, 1), (2, 2, 2), (1, 2, 1, 2)))
    M = table(P)
    assert M.order == 6
    bar_complex(M, trivial_representation(P, Z), 3).check()


def test_s3_low_degrees():
    P = GroupPresentation(2, ((1, 1), (2, 2, 2), (1, 2, 1, 2)))
    M = table(P)
    triv = trivial_representation(P, Z)
    assert [str(bar_cohomology(M, triv, n)) for n in range(3)] == ["Z", "0", "Z/2"]
    assert bar_cohomology(M, trivial_representation(P, F2), 1) == FpModule(F2, 1)


def test_regular_rep_is_coinduced():
    P, _ = pres("rp2")
    T = todd_coxeter(P)
    rho = permutation_representation(T, Z)
    M = multiplication_table(T)
    assert [str(bar_cohomology(M, rho, n)) for n in range(4)] == ["Z", "0", "0", "0"]


def test_size_cap():
    P = cyclic(3)
    with pytest.raises(SizeCapExceeded):
        bar_cohomology(table(P), trivial_representation(P, Z), 4, size_cap=50)


FINITE = [r for r in sample_reps() if r[1] in ("rp2", "s2", "cone")]


@pytest.mark.parametrize("rid,name,rho", FINITE, ids=[r[0] for r in FINITE])
def test_bar_and_fox_agree_low_degrees(rid, name, rho):
    P, _ = pres(name)
    M = multiplication_table(todd_coxeter(P))
    for n in (0, 1):
        fox, flag = fox_cohomology(P, rho, n)
        assert flag == EXACT
        assert bar_cohomology(M, rho, n) == fox


@pytest.mark.parametrize("m", [2, 3, 5])
def test_bar_and_fox_agree_cyclic(m):
    P = cyclic(m)
    M = table(P)
    for rho in (trivial_representation(P, Z), trivial_representation(P, Q)):
        for n in (0, 1):
            assert bar_cohomology(M, rho, n) == fox_cohomology(P, rho, n)[0]


def test_fox_degree_two_flag():
    P = GroupPresentation(2, ((1, 2, -1, -2),))
    mod, flag = fox_cohomology(P, trivial_representation(P, Q), 2)
    assert mod == FpModule(Q, 1) and flag == PRESENTATION_COMPLEX_ONLY
    assert fox_cohomology(P, trivial_representation(P, Z), 1)[0] == FpModule(Z, 2)
