"""Covering complexes built from complete coset tables.

The total space has vertex ``v * n + c`` for base vertex ``v`` and sheet
(coset) ``c``, where ``n`` is the number of cosets.  Numbering vertices
base-major keeps every lifted simplex in the same vertex order as its
projection, so incidence signs agree upstairs and downstairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .cellsheaf import CellularSheaf
from .errors import (BaseMismatch, IncompleteTable, NotRegularCover,
                     PresentationMismatch, TotalMismatch)
from .exactalg import Matrix, block_diag
from .fundgroup import CosetTable, EdgeLabeling, edge_word, presentation
from .simplicial import SimplicialComplex, SimplicialMap, face_signs


@dataclass(frozen=True)
class Covering:
    base: SimplicialComplex
    total: SimplicialComplex
    labeling: EdgeLabeling
    table: CosetTable

    @property
    def sheets(self) -> int:
        return self.table.coset_count

    def vertex(self, v: int, c: int) -> int:
        return v * self.sheets + c

    def sheet_of_vertex(self, x: int) -> tuple:
        return divmod(x, self.sheets)

    def project(self, simplex) -> tuple:
        return tuple(x // self.sheets for x in simplex)

    @cached_property
    def projection(self) -> dict:
        return {s: self.project(s) for s in self.total.all_simplices()}

    def lift(self, simplex, sheet: int) -> tuple:
        """The lift of ``simplex`` whose lowest vertex sits on ``sheet``."""
        a = simplex[0]
        T, L = self.table, self.labeling
        out = [self.vertex(a, sheet)]
        for b in simplex[1:]:
            out.append(self.vertex(b, T.apply(sheet, edge_word(L, a, b))))
        return tuple(out)

    def preimages(self, simplex) -> list:
        return [self.lift(simplex, c) for c in range(self.sheets)]

    def projection_map(self) -> SimplicialMap:
        return SimplicialMap(self.total, self.base,
                             tuple(x // self.sheets for x in range(self.total.vertex_count)))

    def to_json(self) -> dict:
        return {"sheets": self.sheets,
                "vertex_sheets": [list(self.sheet_of_vertex(x))
                                  for x in range(self.total.vertex_count)],
                "total": self.total.to_json()}


def build_cover(X: SimplicialComplex, L: EdgeLabeling, T: CosetTable) -> Covering:
    if not T.complete:
        raise IncompleteTable("coset table did not close")
    P, _ = presentation(X, L.basepoint)
    if T.presentation != P or L.complex != X:
        raise PresentationMismatch("table is not for this complex's edge-path presentation")
    cov = Covering(X, X, L, T)  # total filled in below
    levels = []
    for level in X.simplices:
        levels.append(tuple(sorted(cov.lift(s, c) for s in level for c in range(T.coset_count))))
    total = SimplicialComplex(X.vertex_count * T.coset_count, tuple(levels))
    return Covering(X, total, L, T)


@dataclass(frozen=True)
class DeckAction:
    """Deck transformations of a regular cover, one per group generator.

    ``sheet_maps[i][c]`` is the sheet of ``g_{i+1} . x_c`` where ``x_c`` is
    the group element labelling sheet ``c``; ``generator_maps`` are the
    corresponding vertex permutations of the total complex.
    """

    covering: Covering
    sheet_maps: tuple
    generator_maps: tuple

    def apply_word(self, word, vertex: int) -> int:
        # left action: the rightmost letter acts first
        for x in reversed(word):
            perm = self.generator_maps[abs(x) - 1]
            vertex = perm[vertex] if x > 0 else perm.index(vertex)
        return vertex

    def act(self, i: int, simplex) -> tuple:
        perm = self.generator_maps[i]
        return tuple(sorted(perm[x] for x in simplex))


def deck_generators(C: Covering) -> DeckAction:
    T = C.table
    if any(T.subgroup):
        raise NotRegularCover("deck action needs the table of the trivial subgroup")
    reps = T.representatives()
    n = T.coset_count
    sheet_maps, vertex_maps = [], []
    for i in range(T.presentation.generator_count):
        g = T.action[i][0]
        sheets = tuple(T.apply(g, reps[c]) for c in range(n))
        sheet_maps.append(sheets)
        vertex_maps.append(tuple(C.vertex(v, sheets[c])
                                 for v in range(C.base.vertex_count) for c in range(n)))
    return DeckAction(C, tuple(sheet_maps), tuple(vertex_maps))


def pullback_sheaf(C: Covering, F: CellularSheaf) -> CellularSheaf:
    if F.complex != C.base:
        raise BaseMismatch("sheaf does not live on the base of the cover")
    ranks = {s: F.rank(C.project(s)) for s in C.total.all_simplices()}
    res = {}
    for d in range(1, C.total.dimension + 1):
        for s in C.total.simplices[d]:
            ps = C.project(s)
            for face, _ in face_signs(s):
                res[(face, s)] = F.res(C.project(face), ps)
    return CellularSheaf(C.total, F.ring, ranks, res)


def pushforward_sheaf(C: Covering, F: CellularSheaf) -> CellularSheaf:
    """Stalk over ``s`` is the sum over the lifts of ``s``, ordered by sheet."""
    if F.complex != C.total:
        raise TotalMismatch("sheaf does not live on the total space of the cover")
    X = C.base
    ranks = {s: sum(F.rank(t) for t in C.preimages(s)) for s in X.all_simplices()}
    res = {}
    for d in range(1, X.dimension + 1):
        for s in X.simplices[d]:
            lifts = C.preimages(s)
            for face, _ in face_signs(s):
                face_lifts = C.preimages(face)
                pos = {t: k for k, t in enumerate(face_lifts)}
                # each lift of s has exactly one face over `face`
                blocks = [[None] * len(face_lifts) for _ in lifts]
                for r, up in enumerate(lifts):
                    idx = s.index(next(v for v in s if v not in face))
                    up_face = up[:idx] + up[idx + 1:]
                    blocks[r][pos[up_face]] = F.res(up_face, up)
                res[(face, s)] = _assemble(F.ring, blocks, [F.rank(u) for u in lifts],
                                           [F.rank(t) for t in face_lifts])
    return CellularSheaf(X, F.ring, ranks, res)


def _assemble(ring, blocks, row_sizes, col_sizes) -> Matrix:
    rows = []
    for r, size in enumerate(row_sizes):
        band = [[] for _ in range(size)]
        for c, width in enumerate(col_sizes):
            b = blocks[r][c]
            if b is None:
                b = Matrix.zeros(ring, size, width)
            for i in range(size):
                band[i].extend(b.rows[i])
        rows.extend(band)
    return Matrix._raw(ring, rows, sum(row_sizes), sum(col_sizes))
