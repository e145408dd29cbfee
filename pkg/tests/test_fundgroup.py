import pytest

from samples import cx, collapse_map, pres
from sheafbn.errors import NotAnEdge, NotConnected
from sheafbn.exactalg import INTEGERS
from sheafbn.fundgroup import (Finite, GroupPresentation, Unknown, abelianization, edge_word,
                               group_order, induced_homomorphism, inverse_word, presentation,
                               reduce_word, substitute, todd_coxeter)
from sheafbn.simplicial import build_complex, homology


def test_word_reduction():
    assert reduce_word([1, 2, -2, -1, 3]) == (3,)
    assert inverse_word((1, -2)) == (2, -1)


@pytest.mark.parametrize("name", ["circle", "s2", "rp2", "torus", "wedge", "cylinder", "cone"])
def test_abelianization_is_h1(name):
    P, _ = pres(name)
    assert abelianization(P) == homology(cx(name), 1, INTEGERS)


def test_presentation_is_deterministic():
    X = cx("rp2")
    assert presentation(X) == presentation(X)
    P, L = presentation(X)
    assert P.generator_count == X.count(1) - (X.vertex_count - 1)
    assert len(P.relators) <= X.count(2)


def test_edge_word_orientation():
    _, L = pres("circle")
    (u, v), = L.generators
    assert edge_word(L, u, v) == (1,)
    assert edge_word(L, v, u) == (-1,)
    with pytest.raises(NotAnEdge):
        edge_word(L, 0, 0)


def test_not_connected():
    with pytest.raises(NotConnected):
        presentation(build_complex([[0, 1], [2, 3]]))


@pytest.mark.parametrize("name,order", [("s2", 1), ("rp2", 2), ("cone", 1), ("point", 1)])
def test_finite_orders(name, order):
    res = group_order(pres(name)[0])
    assert isinstance(res, Finite) and res.order == order


@pytest.mark.parametrize("name", ["circle", "wedge"])
def test_infinite_groups_report_unknown(name):
    assert isinstance(group_order(pres(name)[0], budget=200), Unknown)


def test_todd_coxeter_s3():
    # <a, b | a^2, b^3, (ab)^2>
    P = GroupPresentation(2, ((1, 1), (2, 2, 2), (1, 2, 1, 2)))
    T = todd_coxeter(P)
    assert T.complete and T.coset_count == 6
    T2 = todd_coxeter(P, [(2,)])
    assert T2.coset_count == 2
    # the action is a right action on cosets
    for c in range(T.coset_count):
        assert T.apply(T.apply(c, (1,)), (2,)) == T.apply(c, (1, 2))


def test_todd_coxeter_budget():
    P = GroupPresentation(2, ())
    assert not todd_coxeter(P, max_cosets=50).complete


def test_induced_homomorphism_collapse():
    f = collapse_map()
    Pc, Lc = pres("cylinder")
    Pt, Lt = pres("circle")
    h = induced_homomorphism(f, Lc, Lt)
    # relators of the cylinder go to the identity in the free group on one letter
    for r in Pc.relators:
        assert substitute(r, h) == ()
    # some generator hits the circle's loop once
    assert any(abs(sum(w)) == 1 for w in h.values())
