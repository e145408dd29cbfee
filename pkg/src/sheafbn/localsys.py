"""Local systems: representations of pi_1 versus locally constant sheaves.

Conventions.  A representation evaluates words left to right,
``rho(l1 l2 ... lk) = rho(l1) rho(l2) ... rho(lk)``.  On an edge ``u < v``
with edge word ``w`` a section of the associated sheaf satisfies
``s_u = rho(w) s_v``; the stalk of a simplex is identified with the stalk
of its lowest vertex.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Sequence

from .cellsheaf import CellularSheaf, is_locally_constant, sheaf_cohomology
from .errors import (IncompleteTable, InputError, InvalidRepresentation, NotLocallyConstant,
                     PresentationMismatch, RelatorViolation)
from .exactalg import FpModule, Matrix, RingSpec, kernel_basis, rank, vstack
from .fundgroup import CosetTable, EdgeLabeling, GroupPresentation, edge_word, presentation
from .simplicial import SimplicialComplex, face_signs


@dataclass(frozen=True)
class Representation:
    ring: RingSpec
    dimension: int
    presentation: GroupPresentation
    generator_matrices: tuple

    def __post_init__(self):
        mats = tuple(self.generator_matrices)
        object.__setattr__(self, "generator_matrices", mats)
        if len(mats) != self.presentation.generator_count:
            raise InvalidRepresentation(f"{len(mats)} matrices for "
                                        f"{self.presentation.generator_count} generators")
        for m in mats:
            if m.ring != self.ring or m.shape != (self.dimension, self.dimension):
                raise InvalidRepresentation("generator matrix has the wrong ring or shape")

    @cached_property
    def _inverses(self):
        out = []
        for m in self.generator_matrices:
            try:
                out.append(m.inverse())
            except ZeroDivisionError:
                out.append(None)
        return tuple(out)

    def __call__(self, word: Sequence[int]) -> Matrix:
        acc = Matrix.identity(self.ring, self.dimension)
        for x in word:
            if x > 0:
                acc = acc @ self.generator_matrices[x - 1]
            else:
                inv = self._inverses[-x - 1]
                if inv is None:
                    raise InvalidRepresentation(f"generator {-x} is not invertible")
                acc = acc @ inv
        return acc

    def to_json(self) -> dict:
        R = self.ring
        return {"ring": R.name, "dimension": self.dimension,
                "matrices": [[[R.to_json_entry(x) for x in row] for row in m.rows]
                             for m in self.generator_matrices]}


def representation(P: GroupPresentation, ring: RingSpec, matrices) -> Representation:
    """Convenience constructor from nested lists (or Matrix objects)."""
    mats = tuple(m if isinstance(m, Matrix) else Matrix(ring, m) for m in matrices)
    if mats:
        dim = mats[0].nrows
    else:
        raise InputError("use trivial_representation for groups without generators")
    return Representation(ring, dim, P, mats)


def trivial_representation(P: GroupPresentation, ring: RingSpec, dim: int = 1) -> Representation:
    eye = Matrix.identity(ring, dim)
    return Representation(ring, dim, P, (eye,) * P.generator_count)


def permutation_representation(T: CosetTable, ring: RingSpec) -> Representation:
    """Action of the group on the cosets of a complete table, as permutation matrices.

    Row ``c`` of a generator's matrix has its single 1 in column ``c . g``, so
    words multiply left to right like the table action.
    """
    if not T.complete:
        raise IncompleteTable("coset table is not complete")
    n = T.coset_count
    mats = []
    for i in range(1, T.presentation.generator_count + 1):
        rows = [[ring.zero()] * n for _ in range(n)]
        for c in range(n):
            rows[c][T.apply(c, (i,))] = ring.one()
        mats.append(Matrix(ring, rows, n, n))
    return Representation(ring, n, T.presentation, tuple(mats))


def validate_representation(rho: Representation) -> list:
    """Relators (as words) that fail; non-invertible generators fail every relator."""
    bad_gens = [i + 1 for i, m in enumerate(rho.generator_matrices) if not m.is_invertible()]
    if bad_gens:
        return [("non-invertible generator", g) for g in bad_gens]
    eye = Matrix.identity(rho.ring, rho.dimension)
    return [r for r in rho.presentation.relators if rho(r) != eye]


def _require_valid(rho: Representation):
    failing = validate_representation(rho)
    if failing:
        raise InvalidRepresentation(f"relators fail: {failing[:3]}")


def rep_to_sheaf(X: SimplicialComplex, L: EdgeLabeling, rho: Representation) -> CellularSheaf:
    """The locally constant sheaf whose holonomy is ``rho``."""
    P, _ = presentation(X, L.basepoint)
    if rho.presentation != P or L.complex != X:
        raise PresentationMismatch("representation is not over this complex's presentation")
    _require_valid(rho)
    eye = Matrix.identity(rho.ring, rho.dimension)
    ranks = {s: rho.dimension for s in X.all_simplices()}
    res = {}
    cache = {}
    for d in range(1, X.dimension + 1):
        for s in X.simplices[d]:
            for face, _ in face_signs(s):
                a, b = s[0], face[0]
                if a == b:
                    res[(face, s)] = eye
                else:
                    if (a, b) not in cache:
                        cache[(a, b)] = rho(edge_word(L, a, b))
                    res[(face, s)] = cache[(a, b)]
    return CellularSheaf(X, rho.ring, ranks, res)


def sheaf_to_rep(X: SimplicialComplex, L: EdgeLabeling, F: CellularSheaf) -> Representation:
    """Holonomy of a locally constant sheaf, trivialized along the BFS tree."""
    if not is_locally_constant(F):
        raise NotLocallyConstant("sheaf has a non-invertible restriction")
    P, _ = presentation(X, L.basepoint)
    d = F.rank((L.basepoint,))
    frame = {L.basepoint: Matrix.identity(F.ring, d)}
    for v in sorted(L.parent, key=lambda x: len(L.tree_path(x))):
        p = L.parent[v]
        if p is None:
            continue
        e = (min(p, v), max(p, v))
        frame[v] = F.res((v,), e).inverse() @ F.res((p,), e) @ frame[p]
    mats = []
    for u, v in L.generators:
        e = (u, v)
        mats.append((F.res((u,), e) @ frame[u]).inverse() @ F.res((v,), e) @ frame[v])
    rho = Representation(F.ring, d, P, tuple(mats))
    _require_valid(rho)
    return rho


def invariant_kernel(rho: Representation) -> Matrix:
    """Columns span ``E^G = ker [rho(g_i) - I]_i``."""
    eye = Matrix.identity(rho.ring, rho.dimension)
    if not rho.generator_matrices:
        return eye
    stacked = vstack(rho.ring, [m - eye for m in rho.generator_matrices])
    return kernel_basis(stacked)


def invariants(rho: Representation) -> FpModule:
    eye = Matrix.identity(rho.ring, rho.dimension)
    if not rho.generator_matrices:
        return FpModule.free(rho.ring, rho.dimension)
    stacked = vstack(rho.ring, [m - eye for m in rho.generator_matrices])
    # a submodule of a free module over Z or a field is free
    return FpModule.free(rho.ring, rho.dimension - rank(stacked))


def invariants_match(X: SimplicialComplex, L: EdgeLabeling, rho: Representation):
    """``(E^G, H^0(X, L_E), equal)``."""
    _require_valid(rho)
    inv = invariants(rho)
    h0 = sheaf_cohomology(rep_to_sheaf(X, L, rho), 0)
    return inv, h0, inv == h0


def pullback_rep(h: dict, rho: Representation, source: GroupPresentation) -> Representation:
    """Compose ``rho`` with a generator map ``h: source gens -> target words``."""
    if set(h) != set(range(1, source.generator_count + 1)):
        raise InputError("generator map must cover every source generator")
    mats = tuple(rho(h[i]) for i in range(1, source.generator_count + 1))
    out = Representation(rho.ring, rho.dimension, source, mats)
    failing = validate_representation(out)
    if failing:
        raise RelatorViolation(f"source relators not killed: {failing[:3]}")
    return out


@dataclass(frozen=True)
class GModule:
    """A module over the group ring, possibly without computable action.

    ``basis`` (when present) holds the chosen generators as columns of some
    ambient cochain space.
    """

    ring: RingSpec
    module: FpModule
    action: tuple | None = None
    presentation: GroupPresentation | None = None
    basis: Matrix | None = None

    def as_representation(self) -> Representation:
        if self.action is None or self.presentation is None:
            raise InputError("module carries no action")
        return Representation(self.ring, self.module.free_rank, self.presentation, self.action)


def rep_from_json(P: GroupPresentation, data: dict) -> Representation:
    try:
        ring = RingSpec.parse(data["ring"])
        dim = int(data["dimension"])
        mats = tuple(Matrix(ring, m, dim, dim) for m in data["matrices"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidRepresentation(f"bad representation JSON: {exc}") from exc
    return Representation(ring, dim, P, mats)


def load_rep(P: GroupPresentation, path) -> Representation:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    return rep_from_json(P, data)
