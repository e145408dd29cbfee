"""Group cohomology H^n(G, E).

Two independent routes:

* finite groups: the normalized inhomogeneous bar complex over the
  multiplication table read off a complete coset table;
* finitely presented groups: the Fox-calculus complex
  ``E -> E^gens -> E^rels``, exact through degree 1.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import product as cartesian

from .errors import (DegreeNegative, InvalidRepresentation,
                     NotTrivialSubgroupTable, SizeCapExceeded)
from .exactalg import (CochainComplex, FpModule, Matrix, cohomology_at,
                       subquotient, vstack)
from .fundgroup import CosetTable, GroupPresentation
from .localsys import Representation, validate_representation

EXACT = "exact"
PRESENTATION_COMPLEX_ONLY = "presentation-complex-only"
DEFAULT_SIZE_CAP = 20000


def default_size_cap() -> int:
    return int(os.environ.get("SHEAFBN_SIZE_CAP", DEFAULT_SIZE_CAP))


@dataclass(frozen=True)
class MultiplicationTable:
    """Elements are the cosets of the trivial subgroup; 0 is the identity."""

    order: int
    product: tuple
    inverse: tuple
    generator_elements: tuple
    representatives: tuple

    def mul(self, x: int, y: int) -> int:
        return self.product[x][y]


def multiplication_table(T: CosetTable) -> MultiplicationTable:
    if not T.complete or any(T.subgroup):
        raise NotTrivialSubgroupTable("need a complete table for the trivial subgroup")
    reps = T.representatives()
    n = T.coset_count
    prod = tuple(tuple(T.apply(x, reps[y]) for y in range(n)) for x in range(n))
    inv = tuple(next(y for y in range(n) if prod[x][y] == 0) for x in range(n))
    gens = tuple(T.action[i][0] for i in range(T.presentation.generator_count))
    return MultiplicationTable(n, prod, inv, gens, tuple(reps))


def element_matrices(M: MultiplicationTable, rho: Representation) -> list:
    """``rho`` on every group element, via the shortest representative words."""
    return [rho(w) for w in M.representatives]


def _check_cap(M: MultiplicationTable, n: int, dim: int, cap: int):
    size = M.order ** n * dim
    if size > cap:
        raise SizeCapExceeded(f"|G|^{n} * dim E = {size} exceeds the cap {cap}")


def bar_coboundary(M: MultiplicationTable, mats: list, n: int) -> Matrix:
    """``d^n`` of the normalized bar complex (functions vanishing on tuples with a 1)."""
    ring = mats[0].ring
    d = mats[0].nrows
    nonid = list(range(1, M.order))
    k = len(nonid)
    src = list(cartesian(nonid, repeat=n))
    dst = list(cartesian(nonid, repeat=n + 1))
    col_of = {t: i for i, t in enumerate(src)}
    rows = [[ring.zero()] * (len(src) * d) for _ in range(len(dst) * d)]

    def add(r0, t, block, sign):
        c = col_of.get(t)
        if c is None:
            return
        c0 = c * d
        for i in range(d):
            row = rows[r0 + i]
            for j in range(d):
                x = block[i][j] if block is not None else (1 if i == j else 0)
                if x:
                    row[c0 + j] = ring.reduce(row[c0 + j] + sign * x)

    for r, g in enumerate(dst):
        r0 = r * d
        add(r0, g[1:], mats[g[0]].rows, 1)
        for i in range(n):
            merged = M.mul(g[i], g[i + 1])
            if merged == 0:
                continue
            add(r0, g[:i] + (merged,) + g[i + 2:], None, (-1) ** (i + 1))
        add(r0, g[:n], None, (-1) ** (n + 1))
    return Matrix._raw(ring, rows, len(dst) * d, len(src) * d)


def bar_cohomology(M: MultiplicationTable, rho: Representation, n: int,
                   size_cap: int | None = None) -> FpModule:
    if n < 0:
        raise DegreeNegative(f"degree {n}")
    cap = default_size_cap() if size_cap is None else size_cap
    d = rho.dimension
    _check_cap(M, n + 1, d, cap)
    if M.order == 1:
        return FpModule.free(rho.ring, d) if n == 0 else FpModule.zero(rho.ring)
    if validate_representation(rho):
        raise InvalidRepresentation("relators fail")
    mats = element_matrices(M, rho)
    dim = (M.order - 1) ** n * d
    out = bar_coboundary(M, mats, n)
    inc = bar_coboundary(M, mats, n - 1) if n > 0 else None
    return subquotient(rho.ring, dim, out, inc)


def bar_complex(M: MultiplicationTable, rho: Representation, top: int) -> CochainComplex:
    mats = element_matrices(M, rho)
    d = rho.dimension
    dims = {n: (M.order - 1) ** n * d for n in range(top + 1)}
    diffs = {n: bar_coboundary(M, mats, n) for n in range(top)} if M.order > 1 else {}
    return CochainComplex(rho.ring, dims, diffs)


def fox_derivative_matrix(rho: Representation, word, i: int) -> Matrix:
    """``rho`` applied to the Fox derivative of ``word`` along ``g_i``."""
    ring = rho.ring
    acc = Matrix.zeros(ring, rho.dimension, rho.dimension)
    for j, x in enumerate(word):
        if x == i:
            acc = acc + rho(word[:j])
        elif x == -i:
            acc = acc - rho(word[:j + 1])
    return acc


def fox_complex(P: GroupPresentation, rho: Representation) -> CochainComplex:
    if rho.presentation != P:
        raise InvalidRepresentation("representation is for a different presentation")
    if validate_representation(rho):
        raise InvalidRepresentation("relators fail")
    ring, d = rho.ring, rho.dimension
    m, r = P.generator_count, len(P.relators)
    eye = Matrix.identity(ring, d)
    diffs = {}
    if m:
        diffs[0] = vstack(ring, [g - eye for g in rho.generator_matrices])
    if m and r:
        rows = []
        for rel in P.relators:
            blocks = [fox_derivative_matrix(rho, rel, i + 1) for i in range(m)]
            for k in range(d):
                rows.append([x for b in blocks for x in b.rows[k]])
        diffs[1] = Matrix._raw(ring, rows, r * d, m * d)
    return CochainComplex(ring, {0: d, 1: m * d, 2: r * d}, diffs)


def fox_cohomology(P: GroupPresentation, rho: Representation, n: int):
    """``(module, flag)``; degree 2 is only the presentation-complex value."""
    if n not in (0, 1, 2):
        raise DegreeNegative(f"Fox cohomology is computed in degrees 0..2, not {n}")
    C = fox_complex(P, rho)
    return cohomology_at(C, n), (EXACT if n < 2 else PRESENTATION_COMPLEX_ONLY)
