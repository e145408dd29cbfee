"""Quasicoherator, its derived functors and the BN (Boekstedt-Neeman) report.

On a finite connected simplicial complex with finite fundamental group the
quasicoherator of a sheaf is computed as equivariant global sections over
the universal cover, and its derived functors as the cohomology of the
pulled-back sheaf there.  Infinite groups are only handled where that is
honest: for graphs (via a ball in the tree that is the universal cover) and
through the Fox complex in degrees <= 1.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache

from .cellsheaf import (CellularSheaf, coboundary, constant_sheaf,
                        is_locally_constant, sheaf_cochain_complex,
                        sheaf_cohomology_all, validate_sheaf)
from .covers import Covering, build_cover, deck_generators, pullback_sheaf
from .errors import (InfiniteOrUnknownGroup, InvalidSheaf, NonFieldRing,
                     NotConnected, SizeCapExceeded)
from .exactalg import (FpModule, Matrix, RingSpec, cohomology_at, hstack,
                       kernel_basis, pivot_columns, solve)
from .fundgroup import (Finite, GroupPresentation, concat, edge_word,
                        group_order, presentation)
from .groupcoh import (EXACT, bar_cohomology, default_size_cap, fox_cohomology,
                       multiplication_table)
from .localsys import GModule, Representation, rep_to_sheaf
from .simplicial import SimplicialComplex, homology, is_connected

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10000


@lru_cache(maxsize=64)
def _order(P: GroupPresentation, budget: int):
    return group_order(P, budget)


@lru_cache(maxsize=32)
def universal_cover(X: SimplicialComplex, budget: int = DEFAULT_BUDGET):
    """``(presentation, labeling, covering, deck action)`` for finite pi_1."""
    P, L = presentation(X)
    res = _order(P, budget)
    if not isinstance(res, Finite):
        raise InfiniteOrUnknownGroup(res.reason)
    cov = build_cover(X, L, res.table)
    return P, L, cov, deck_generators(cov)


@dataclass(frozen=True)
class TreeBall:
    """Finite subtree of the universal cover of a graph.

    Vertices are pairs ``(v, w)`` with ``w`` a reduced word, reachable from
    ``(basepoint, ())`` in at most ``radius`` edges.
    """

    base: SimplicialComplex
    total: SimplicialComplex
    labels: tuple

    def project(self, simplex) -> tuple:
        return tuple(self.labels[x][0] for x in simplex)


def tree_ball(X: SimplicialComplex, radius: int = 4) -> TreeBall:
    if X.dimension > 1:
        raise InvalidSheaf("tree balls only exist for graphs")
    P, L = presentation(X)
    start = (L.basepoint, ())
    dist = {start: 0}
    queue = deque([start])
    edges = set()
    while queue:
        v, w = queue.popleft()
        if dist[(v, w)] == radius:
            continue
        for u in X.neighbors[v]:
            nxt = (u, concat(w, edge_word(L, v, u)))
            if nxt not in dist:
                dist[nxt] = dist[(v, w)] + 1
                queue.append(nxt)
            edges.add(frozenset(((v, w), nxt)))
    labels = tuple(sorted(dist))
    idx = {lab: i for i, lab in enumerate(labels)}
    tops = [tuple(sorted(idx[a] for a in e)) for e in edges] or [(0,)]
    levels = [tuple((i,) for i in range(len(labels)))]
    if edges:
        levels.append(tuple(sorted(tops)))
    return TreeBall(X, SimplicialComplex(len(labels), tuple(levels)), labels)


def _cochain_action(C: Covering, deck, F_up: CellularSheaf, q: int) -> list:
    """Matrices of the deck generators on ``C^q`` of a pulled-back sheaf."""
    faces = C.total.faces(q)
    off, pos = 0, {}
    for s in faces:
        pos[s] = off
        off += F_up.rank(s)
    ring = F_up.ring
    mats = []
    for i in range(len(deck.generator_maps)):
        rows = [[ring.zero()] * off for _ in range(off)]
        for s in faces:
            t = deck.act(i, s)
            for k in range(F_up.rank(s)):
                rows[pos[t] + k][pos[s] + k] = ring.one()
        mats.append(Matrix._raw(ring, rows, off, off))
    return mats


def quasicoherator(X: SimplicialComplex, F: CellularSheaf, budget: int = DEFAULT_BUDGET) -> GModule:
    """Global sections of the pullback to the universal cover, with deck action."""
    if validate_sheaf(F):
        raise InvalidSheaf("invalid sheaf")
    P, L, C, deck = universal_cover(X, budget)
    up = pullback_sheaf(C, F)
    K = kernel_basis(coboundary(up, 0))
    acts = tuple(solve(K, A @ K) for A in _cochain_action(C, deck, up, 0))
    return GModule(F.ring, FpModule.free(F.ring, K.ncols), acts, P, K)


def _quotient_action(Z: Matrix, B: Matrix, actions: list):
    """Pick cohomology representatives in ``Z`` modulo ``B``; act on them (fields)."""
    ring = Z.ring
    basis = B.submatrix(range(B.nrows), pivot_columns(B))
    reps = []
    for j in range(Z.ncols):
        col = Z.submatrix(range(Z.nrows), [j])
        trial = hstack(ring, [basis, *reps, col])
        if trial.rank() == trial.ncols:
            reps.append(col)
    R = hstack(ring, reps, nrows=Z.nrows)
    full = hstack(ring, [basis, R])
    nb = basis.ncols
    out = []
    for A in actions:
        coeffs = solve(full, A @ R)
        out.append(coeffs.submatrix(range(nb, full.ncols), range(R.ncols)))
    return R, out


def derived_quasicoherator(X: SimplicialComplex, F: CellularSheaf, i: int,
                           budget: int = DEFAULT_BUDGET) -> GModule:
    """``R^i Qc(F) = H^i`` of the pullback of ``F`` to the universal cover.

    Over a field the deck action on a chosen cohomology basis is included.
    For graphs with a group that does not close within ``budget`` the value
    is computed on a finite ball of the (tree) universal cover and carries
    no action.
    """
    if validate_sheaf(F):
        raise InvalidSheaf("invalid sheaf")
    try:
        P, L, C, deck = universal_cover(X, budget)
    except InfiniteOrUnknownGroup:
        if X.dimension > 1:
            raise
        ball = tree_ball(X)
        up = pullback_sheaf(ball, F)
        mod = sheaf_cohomology_all(up, i)[i]
        return GModule(F.ring, mod)
    up = pullback_sheaf(C, F)
    cx = sheaf_cochain_complex(up)
    if i > cx.hi:
        return GModule(F.ring, FpModule.zero(F.ring), tuple(
            Matrix.zeros(F.ring, 0, 0) for _ in range(P.generator_count)), P)
    mod = cohomology_at(cx, i)
    if not F.ring.is_field:
        return GModule(F.ring, mod, None, P)
    Z = kernel_basis(cx.differential(i))
    B = cx.differential(i - 1) if i > 0 else Matrix.zeros(F.ring, cx.dims[i], 0)
    R, acts = _quotient_action(Z, B, _cochain_action(C, deck, up, i))
    return GModule(F.ring, mod, tuple(acts), P, R)


# ---------------------------------------------------------------------------
# Verdicts

ASPHERICAL = "aspherical"
NOT_ASPHERICAL = "not-aspherical"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class AsphericityVerdict:
    status: str
    certificate: str | None = None
    checked_degrees: tuple = ()
    witness_degree: int | None = None
    module: FpModule | None = None
    reason: str | None = None

    def to_json(self) -> dict:
        out = {"status": self.status}
        if self.certificate is not None:
            out["certificate"] = self.certificate
        if self.checked_degrees:
            out["checked_degrees"] = list(self.checked_degrees)
        if self.witness_degree is not None:
            out["witness_degree"] = self.witness_degree
            out["module"] = self.module.to_json()
        if self.reason is not None:
            out["reason"] = self.reason
        return out


def asphericity_check(X: SimplicialComplex, ring: RingSpec, budget: int = DEFAULT_BUDGET) -> AsphericityVerdict:
    if not is_connected(X):
        raise NotConnected("asphericity needs a connected complex")
    if X.dimension <= 1:
        return AsphericityVerdict(ASPHERICAL, "dimension-1")
    try:
        _, _, C, _ = universal_cover(X, budget)
    except InfiniteOrUnknownGroup as exc:
        return AsphericityVerdict(UNKNOWN, reason=str(exc))
    degrees = tuple(range(1, C.total.dimension + 1))
    for n in degrees:
        h = homology(C.total, n, ring)
        if not h.is_zero():
            return AsphericityVerdict(NOT_ASPHERICAL, witness_degree=n, module=h,
                                      checked_degrees=degrees[:n])
    return AsphericityVerdict(ASPHERICAL, "finite-cover-vanishing", degrees)


@dataclass(frozen=True)
class VanishingEntry:
    sheaf_id: str
    degree: int
    module: FpModule | None
    vanished: bool | None
    status: str = "ok"

    def to_json(self) -> dict:
        return {"sheaf": self.sheaf_id, "degree": self.degree, "status": self.status,
                "module": None if self.module is None else self.module.to_json(),
                "vanished": self.vanished}


@dataclass(frozen=True)
class ComparisonEntry:
    rep_id: str
    degree: int
    group_side: FpModule | None
    sheaf_side: FpModule | None
    flag: str
    resolution: str
    agree: bool | None
    status: str = "ok"

    def to_json(self) -> dict:
        return {"representation": self.rep_id, "degree": self.degree,
                "group_side": None if self.group_side is None else self.group_side.to_json(),
                "sheaf_side": None if self.sheaf_side is None else self.sheaf_side.to_json(),
                "flag": self.flag, "resolution": self.resolution,
                "agree": self.agree, "status": self.status}


@dataclass(frozen=True)
class BNReport:
    asphericity: AsphericityVerdict
    condition3: tuple
    condition3_skipped: str | None
    condition4: tuple
    consistent: bool
    passes: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        c3 = ({"skipped": self.condition3_skipped} if self.condition3_skipped is not None
              else {"entries": [e.to_json() for e in self.condition3]})
        return {"condition2": self.asphericity.to_json(),
                "condition3": c3,
                "condition4": [e.to_json() for e in self.condition4],
                "passes": dict(self.passes),
                "consistent": self.consistent}


def _tri(values):
    """All True -> True, any False -> False, nothing decided -> None."""
    decided = [v for v in values if v is not None]
    if not decided:
        return None
    return all(decided)


def _consistency(c2, c3, c4) -> bool:
    if c2 is True and (c3 is False or c4 is False):
        return False
    if c2 is False and c3 is True:
        return False
    if c2 is False and c3 is not False and c4 is True:
        return False
    return True


def _group_side(P, rho, n, budget, size_cap):
    res = _order(P, budget)
    if isinstance(res, Finite):
        M = multiplication_table(res.table)
        return bar_cohomology(M, rho, n, size_cap), EXACT, "bar"
    if n <= 2:
        mod, flag = fox_cohomology(P, rho, n)
        return mod, flag, "fox"
    return None, None, "fox"


def bn_verdict(X: SimplicialComplex, ring: RingSpec, sample_representations=(),
               sample_sheaves=(), max_degree: int = 2, budget: int = DEFAULT_BUDGET,
               size_cap: int | None = None) -> BNReport:
    """Check conditions (2), (3) and (4) and their mutual consistency.

    ``sample_representations`` and ``sample_sheaves`` are ``(id, object)``
    pairs.  The constant rank-1 sheaf over ``ring`` is always included in
    condition (3), and so is the local system of every sample
    representation.
    """
    if not is_connected(X):
        raise NotConnected("BN check needs a connected complex")
    cap = default_size_cap() if size_cap is None else size_cap
    P, L = presentation(X)
    verdict = asphericity_check(X, ring, budget)

    sheaves = [("constant", constant_sheaf(X, ring, 1))]
    sheaves += [(f"rep:{rid}", rep_to_sheaf(X, L, rho)) for rid, rho in sample_representations]
    sheaves += list(sample_sheaves)
    top3 = max(max_degree, X.dimension)
    c3_entries, c3_skip = [], None
    finite = isinstance(_order(P, budget), Finite)
    if not finite and X.dimension > 1:
        c3_skip = f"fundamental group not finite within budget {budget}"
    else:
        for sid, F in sheaves:
            if not is_locally_constant(F):
                c3_entries.append(VanishingEntry(sid, 0, None, None, "not-locally-constant"))
                continue
            for i in range(1, top3 + 1):
                mod = derived_quasicoherator(X, F, i, budget).module
                c3_entries.append(VanishingEntry(sid, i, mod, mod.is_zero()))

    c4_entries = []
    for rid, rho in sample_representations:
        sheaf_side = sheaf_cohomology_all(rep_to_sheaf(X, L, rho), max_degree)
        for n in range(max_degree + 1):
            try:
                grp, flag, how = _group_side(P, rho, n, budget, cap)
            except SizeCapExceeded as exc:
                log.warning("condition 4 entry %s/%d: %s", rid, n, exc)
                c4_entries.append(ComparisonEntry(rid, n, None, sheaf_side[n], "none", "bar",
                                                  None, "size-cap-exceeded"))
                continue
            if grp is None:
                c4_entries.append(ComparisonEntry(rid, n, None, sheaf_side[n], "none", how,
                                                  None, "not-computable"))
                continue
            c4_entries.append(ComparisonEntry(rid, n, grp, sheaf_side[n], flag, how,
                                              grp == sheaf_side[n]))

    c2 = {ASPHERICAL: True, NOT_ASPHERICAL: False}.get(verdict.status)
    c3 = None if c3_skip else _tri(e.vanished for e in c3_entries)
    c4 = _tri(e.agree for e in c4_entries if e.flag == EXACT)
    passes = {"condition2": c2, "condition3": c3, "condition4": c4}
    return BNReport(verdict, tuple(c3_entries), c3_skip, tuple(c4_entries),
                    _consistency(c2, c3, c4), passes)


# ---------------------------------------------------------------------------
# E2 page

@dataclass(frozen=True)
class E2Page:
    window: tuple
    entries: dict
    abutment: dict
    checks: dict

    def to_json(self) -> dict:
        pmax, qmax = self.window
        return {
            "window": [pmax, qmax],
            "entries": [[self.entries[(p, q)].to_json() for p in range(pmax + 1)]
                        for q in range(qmax + 1)],
            "abutment": [self.abutment[n].to_json() for n in sorted(self.abutment)],
            "checks": [dict(self.checks[n], degree=n) for n in sorted(self.checks)],
        }


def e2_page(X: SimplicialComplex, F: CellularSheaf, pmax: int, qmax: int,
            budget: int = DEFAULT_BUDGET, size_cap: int | None = None) -> E2Page:
    """``E_2^{p,q} = H^p(G, H^q(universal cover, pullback F))`` with sanity checks.

    Per total degree ``n`` the checks record the dimension inequality
    ``sum_{p+q=n} dim E_2^{p,q} >= dim H^n(X, F)``, whether differentials
    are forced to be nonzero (strict inequality), and the edge comparisons
    ``E_2^{n,0}`` and ``E_2^{0,n}`` against ``H^n(X, F)``, which must hold
    when the higher rows vanish (aspherical case) or the group is trivial.
    """
    if not F.ring.is_field:
        raise NonFieldRing("E2 page needs field coefficients")
    cap = default_size_cap() if size_cap is None else size_cap
    P, L, C, deck = universal_cover(X, budget)
    M = multiplication_table(C.table)
    ring = F.ring
    entries = {}
    rows_zero = True
    for q in range(qmax + 1):
        R = derived_quasicoherator(X, F, q, budget)
        if R.module.is_zero():
            for p in range(pmax + 1):
                entries[(p, q)] = FpModule.zero(ring)
            continue
        if q > 0:
            rows_zero = False
        rho = Representation(ring, R.module.free_rank, P, R.action)
        for p in range(pmax + 1):
            entries[(p, q)] = bar_cohomology(M, rho, p, cap)
    top_q = C.total.dimension
    abut = dict(enumerate(sheaf_cohomology_all(F, pmax + qmax)))
    checks = {}
    trivial_group = M.order == 1
    for n in range(pmax + qmax + 1):
        terms = [(p, n - p) for p in range(n + 1) if p <= pmax]
        window_complete = all(q <= qmax or q > top_q for _, q in terms)
        total = sum(entries[(p, q)].dim for p, q in terms if q <= qmax)
        h = abut[n].dim
        edge_equal = entries[(n, 0)] == abut[n] if n <= pmax else None
        column_equal = entries[(0, n)] == abut[n] if n <= qmax else None
        chk = {"e2_total": total, "abutment": h, "window_complete": window_complete,
               "inequality_holds": total >= h if window_complete else None,
               "differentials_nonzero": total > h if window_complete else None,
               "edge_equal": edge_equal, "column_equal": column_equal}
        if rows_zero and qmax >= 1:
            chk["collapse"] = "aspherical"
            chk["collapse_equality_holds"] = edge_equal
        elif trivial_group:
            chk["collapse"] = "trivial-group"
            chk["collapse_equality_holds"] = column_equal
        checks[n] = chk
    return E2Page((pmax, qmax), entries, abut, checks)
