import pytest

from samples import F2, Q, Z, cx, pres, sample_reps
from sheafbn.bncheck import (ASPHERICAL, NOT_ASPHERICAL, UNKNOWN, _consistency,
                             asphericity_check, bn_verdict, derived_quasicoherator, e2_page,
                             quasicoherator, tree_ball, universal_cover)
from sheafbn.cellsheaf import constant_sheaf, pullback_along_map, sheaf_cohomology_all
from sheafbn.covers import pushforward_sheaf
from sheafbn.errors import InfiniteOrUnknownGroup, NonFieldRing
from sheafbn.exactalg import FpModule
from sheafbn.localsys import invariants, rep_to_sheaf, representation

REPS = sample_reps()


def reps_for(name):
    return [(rid, rho) for rid, n, rho in REPS if n == name]


@pytest.mark.parametrize("name,status", [("circle", ASPHERICAL), ("wedge", ASPHERICAL),
                                         ("point", ASPHERICAL), ("cone", ASPHERICAL),
                                         ("s2", NOT_ASPHERICAL), ("rp2", NOT_ASPHERICAL)])
def test_asphericity(name, status):
    assert asphericity_check(cx(name), Z).status == status


def test_asphericity_witness_and_unknown():
    v = asphericity_check(cx("rp2"), Z)
    assert v.witness_degree == 2 and v.module == FpModule(Z, 1)
    assert asphericity_check(cx("circle"), Z).to_json() == {"certificate": "dimension-1",
                                                            "status": "aspherical"}
    assert asphericity_check(cx("torus"), Q, budget=300).status == UNKNOWN


def test_universal_cover_requires_finite_group():
    with pytest.raises(InfiniteOrUnknownGroup):
        universal_cover(cx("circle"), 100)


@pytest.mark.parametrize("rid,rho", reps_for("rp2"), ids=[r[0] for r in reps_for("rp2")])
def test_quasicoherator_recovers_representation_invariants(rid, rho):
    X = cx("rp2")
    F = rep_to_sheaf(X, pres("rp2")[1], rho)
    Qc = quasicoherator(X, F)
    # sections over the universal cover: one copy of E per sheet of a connected cover
    assert Qc.module.free_rank == rho.dimension
    # the deck action has the representation's invariants
    assert invariants(Qc.as_representation()).free_rank == invariants(rho).free_rank


@pytest.mark.parametrize("name", ["rp2", "s2"])
@pytest.mark.parametrize("ring", [Z, Q, F2])
def test_derived_quasicoherator_three_routes(name, ring):
    X = cx(name)
    F = constant_sheaf(X, ring)
    _, _, C, _ = universal_cover(X)
    via_map = sheaf_cohomology_all(pullback_along_map(C.projection_map(), F), 3)
    via_pushforward = sheaf_cohomology_all(
        pushforward_sheaf(C, pullback_along_map(C.projection_map(), F)), 3)
    for i in range(4):
        got = derived_quasicoherator(X, F, i).module
        assert got == via_map[i] == via_pushforward[i]


def test_rp2_deck_action_on_top_class_is_sign():
    R = derived_quasicoherator(cx("rp2"), constant_sheaf(cx("rp2"), Q), 2)
    assert R.module == FpModule(Q, 1)
    assert {m.rows for m in R.action} == {((1,),), ((-1,),)}


@pytest.mark.parametrize("name", ["circle", "wedge"])
def test_graphs_have_no_higher_qc(name):
    X = cx(name)
    P, L = pres(name)
    for rid, rho in reps_for(name):
        F = rep_to_sheaf(X, L, rho)
        for i in (1, 2):
            assert derived_quasicoherator(X, F, i, budget=200).module.is_zero(), rid


def test_tree_ball_is_a_tree():
    B = tree_ball(cx("wedge"), radius=3)
    Y = B.total
    assert Y.count(1) == Y.vertex_count - 1
    for s in Y.simplices[1]:
        assert B.project(s) in cx("wedge")


def test_consistency_rules():
    assert _consistency(True, True, True)
    assert _consistency(False, False, False)
    assert not _consistency(True, False, True)
    assert not _consistency(False, True, None)
    assert not _consistency(False, None, True)
    assert _consistency(None, None, True)


@pytest.mark.parametrize("name", ["circle", "s2", "rp2", "wedge", "cylinder", "cone", "point",
                                  "torus"])
def test_bn_consistent_on_fixtures(name):
    ring = Q if name == "torus" else Z
    reps = [(rid, rho) for rid, rho in reps_for(name) if rho.ring == ring]
    report = bn_verdict(cx(name), ring, reps, max_degree=2, budget=500)
    assert report.consistent


def test_rp2_fails_every_condition():
    reps = [(rid, rho) for rid, rho in reps_for("rp2") if rid == "rp2-trivial"]
    r = bn_verdict(cx("rp2"), Z, reps, max_degree=4)
    assert r.passes == {"condition2": False, "condition3": False, "condition4": False}
    assert r.consistent
    deg4 = next(e for e in r.condition4 if e.degree == 4)
    assert deg4.group_side == FpModule(Z, 0, (2,)) and deg4.sheaf_side.is_zero()
    assert not deg4.agree


def test_circle_sign_passes():
    P, _ = pres("circle")
    rho = representation(P, Z, [[[-1]]])
    r = bn_verdict(cx("circle"), Z, [("sign", rho)], max_degree=1, budget=200)
    assert r.passes == {"condition2": True, "condition3": True, "condition4": True}
    h1 = next(e for e in r.condition4 if e.degree == 1)
    assert h1.group_side == h1.sheaf_side == FpModule(Z, 0, (2,))


def test_size_cap_marks_entries():
    reps = reps_for("rp2")[:1]
    r = bn_verdict(cx("rp2"), Z, reps, max_degree=4, size_cap=8)
    assert any(e.status == "size-cap-exceeded" for e in r.condition4)


def test_e2_rp2_mod2():
    X = cx("rp2")
    page = e2_page(X, constant_sheaf(X, F2), 4, 2)
    for p in range(5):
        assert page.entries[(p, 0)].dim == 1 and page.entries[(p, 1)].dim == 0
        assert page.entries[(p, 2)].dim == 1
    for n in range(5):
        assert page.checks[n]["inequality_holds"]
    assert [n for n in range(5) if page.checks[n]["edge_equal"] is False] == [3, 4]
    assert page.checks[3]["differentials_nonzero"] and page.checks[4]["differentials_nonzero"]


@pytest.mark.parametrize("name,kind", [("s2", "trivial-group"), ("cone", "aspherical"),
                                       ("point", "aspherical")])
def test_e2_collapse_cases(name, kind):
    X = cx(name)
    page = e2_page(X, constant_sheaf(X, Q), 3, 2)
    for n, chk in page.checks.items():
        if n <= 2:
            assert chk["collapse"] == kind
            assert chk["collapse_equality_holds"]


def test_e2_needs_field():
    with pytest.raises(NonFieldRing):
        e2_page(cx("rp2"), constant_sheaf(cx("rp2"), Z), 2, 2)
