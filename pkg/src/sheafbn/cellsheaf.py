"""Cellular sheaves on simplicial complexes and their cohomology.

A sheaf assigns a free module ``ring^r`` to each simplex and a restriction
matrix to each codimension-one incidence ``face -> coface``.  The cochain
complex uses the alternating face signs of the increasing vertex order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import (ComplexMismatch, DegreeNegative, InputError, InvalidSheaf,
                     RingMismatch)
from .exactalg import (CochainComplex, FpModule, Matrix, RingSpec, block_diag,
                       cohomology_at)
from .simplicial import SimplicialComplex, SimplicialMap, components, face_signs


def simplex_key(s) -> str:
    return "-".join(str(v) for v in s)


def parse_simplex_key(key: str) -> tuple:
    return tuple(sorted(int(v) for v in key.split("-")))


@dataclass(frozen=True)
class CellularSheaf:
    complex: SimplicialComplex
    ring: RingSpec
    stalk_rank: dict
    restriction: dict

    def rank(self, s) -> int:
        return self.stalk_rank[tuple(s)]

    def res(self, face, coface) -> Matrix:
        """Restriction matrix; zero matrices may be left implicit."""
        m = self.restriction.get((face, coface))
        if m is None:
            return Matrix.zeros(self.ring, self.rank(coface), self.rank(face))
        return m

    def incidences(self):
        """Yield ``(face, coface, sign)`` for every codimension-one pair."""
        X = self.complex
        for d in range(1, X.dimension + 1):
            for s in X.simplices[d]:
                for face, sign in face_signs(s):
                    yield face, s, sign

    def to_json(self) -> dict:
        R = self.ring
        return {
            "ring": R.name,
            "stalks": {simplex_key(s): self.stalk_rank[s] for s in self.complex.all_simplices()},
            "restrictions": {
                f"{simplex_key(t)}->{simplex_key(s)}": [[R.to_json_entry(x) for x in row]
                                                         for row in m.rows]
                for (t, s), m in sorted(self.restriction.items(),
                                        key=lambda kv: (len(kv[0][1]), kv[0][1], kv[0][0]))
                if m.nrows and m.ncols
            },
        }


def make_sheaf(X: SimplicialComplex, ring: RingSpec, stalk_rank: dict, restriction: dict) -> CellularSheaf:
    """Normalize inputs: every simplex gets a rank and every incidence a matrix."""
    ranks = {}
    for s in X.all_simplices():
        r = int(stalk_rank.get(s, 0))
        if r < 0:
            raise InvalidSheaf(f"negative rank at {s}")
        ranks[s] = r
    unknown = set(stalk_rank) - set(ranks)
    if unknown:
        raise InvalidSheaf(f"stalks on non-simplices {sorted(unknown)}")
    res = {}
    for d in range(1, X.dimension + 1):
        for s in X.simplices[d]:
            for face, _ in face_signs(s):
                m = restriction.get((face, s))
                if m is None:
                    m = Matrix.zeros(ring, ranks[s], ranks[face])
                elif m.ring != ring:
                    raise RingMismatch(f"restriction {face}->{s} over {m.ring}")
                res[(face, s)] = m
    extra = set(restriction) - set(res)
    if extra:
        raise InvalidSheaf(f"restrictions on non-incidences {sorted(extra)}")
    return CellularSheaf(X, ring, ranks, res)


def constant_sheaf(X: SimplicialComplex, ring: RingSpec, rank: int = 1) -> CellularSheaf:
    if rank < 0:
        raise InputError("rank must be non-negative")
    eye = Matrix.identity(ring, rank)
    ranks = {s: rank for s in X.all_simplices()}
    res = {}
    for d in range(1, X.dimension + 1):
        for s in X.simplices[d]:
            for face, _ in face_signs(s):
                res[(face, s)] = eye
    return CellularSheaf(X, ring, ranks, res)


def validate_sheaf(F: CellularSheaf) -> list:
    """Violations as readable strings; an empty list means the sheaf is valid.

    Shapes are checked per incidence and functoriality per codimension-two
    pair, via the corresponding block of ``d d``.
    """
    problems = []
    for face, s, _ in F.incidences():
        m = F.restriction.get((face, s))
        want = (F.rank(s), F.rank(face))
        if m is None:
            problems.append(f"missing restriction {simplex_key(face)}->{simplex_key(s)}")
        elif m.shape != want:
            problems.append(f"restriction {simplex_key(face)}->{simplex_key(s)} has shape "
                            f"{m.shape}, expected {want}")
    if problems:
        return problems
    X = F.complex
    for d in range(2, X.dimension + 1):
        for top in X.simplices[d]:
            for i in range(d + 1):
                for j in range(i + 1, d + 1):
                    low = top[:i] + top[i + 1:j] + top[j + 1:]
                    # through top minus v_j, then minus v_i; and the other order
                    via_j = top[:j] + top[j + 1:]
                    via_i = top[:i] + top[i + 1:]
                    a = (F.res(via_j, top) @ F.res(low, via_j)).scale((-1) ** (j + i))
                    b = (F.res(via_i, top) @ F.res(low, via_i)).scale((-1) ** (i + j - 1))
                    if not (a + b).is_zero():
                        problems.append(f"non-commuting square {simplex_key(low)} < "
                                        f"{simplex_key(top)}")
    return problems


def _require_valid(F: CellularSheaf):
    problems = validate_sheaf(F)
    if problems:
        raise InvalidSheaf("; ".join(problems[:5]))


def is_locally_constant(F: CellularSheaf) -> bool:
    _require_valid(F)
    for (face, s), m in F.restriction.items():
        if m.nrows != m.ncols or not m.is_invertible():
            return False
    for comp in components(F.complex):
        if len({F.rank((v,)) for v in comp}) > 1:
            return False
    return True


def coboundary(F: CellularSheaf, n: int) -> Matrix:
    """``d^n: C^n -> C^{n+1}`` assembled from signed restriction blocks."""
    X = F.complex
    src, dst = X.faces(n), X.faces(n + 1)
    col_off, off = {}, 0
    for t in src:
        col_off[t] = off
        off += F.rank(t)
    ncols = off
    row_off, off = {}, 0
    for s in dst:
        row_off[s] = off
        off += F.rank(s)
    nrows = off
    rows = [[F.ring.zero()] * ncols for _ in range(nrows)]
    for s in dst:
        for face, sign in face_signs(s):
            m = F.res(face, s)
            r0, c0 = row_off[s], col_off[face]
            for i, row in enumerate(m.rows):
                for j, x in enumerate(row):
                    if x:
                        rows[r0 + i][c0 + j] = F.ring.reduce(sign * x)
    return Matrix._raw(F.ring, rows, nrows, ncols)


def cochain_dims(F: CellularSheaf) -> dict:
    X = F.complex
    return {n: sum(F.rank(s) for s in X.simplices[n]) for n in range(X.dimension + 1)}


def sheaf_cochain_complex(F: CellularSheaf) -> CochainComplex:
    _require_valid(F)
    X = F.complex
    diffs = {n: coboundary(F, n) for n in range(X.dimension)}
    return CochainComplex(F.ring, cochain_dims(F), diffs)


def sheaf_cohomology(F: CellularSheaf, n: int) -> FpModule:
    if n < 0:
        raise DegreeNegative(f"degree {n}")
    C = sheaf_cochain_complex(F)
    if n > C.hi:
        return FpModule.zero(F.ring)
    return cohomology_at(C, n)


def sheaf_cohomology_all(F: CellularSheaf, top: int | None = None) -> list:
    """``[H^0, ..., H^top]``, assembling the complex once."""
    C = sheaf_cochain_complex(F)
    top = C.hi if top is None else top
    return [cohomology_at(C, n) if n <= C.hi else FpModule.zero(F.ring) for n in range(top + 1)]


def direct_sum(F: CellularSheaf, G: CellularSheaf) -> CellularSheaf:
    if F.complex != G.complex:
        raise ComplexMismatch("direct sum of sheaves on different complexes")
    if F.ring != G.ring:
        raise RingMismatch(f"{F.ring} vs {G.ring}")
    ranks = {s: F.rank(s) + G.rank(s) for s in F.stalk_rank}
    res = {key: block_diag(F.ring, [F.res(*key), G.res(*key)]) for key in F.restriction}
    return CellularSheaf(F.complex, F.ring, ranks, res)


def pullback_along_map(f: SimplicialMap, F: CellularSheaf) -> CellularSheaf:
    """``f^{-1} F``: the stalk at ``s`` is the stalk at ``f(s)``."""
    if F.complex != f.target:
        raise ComplexMismatch("sheaf does not live on the map's target")
    X = f.source
    ranks = {s: F.rank(f.image(s)) for s in X.all_simplices()}
    res = {}
    for d in range(1, X.dimension + 1):
        for s in X.simplices[d]:
            fs = f.image(s)
            for face, _ in face_signs(s):
                ft = f.image(face)
                if ft == fs:
                    res[(face, s)] = Matrix.identity(F.ring, F.rank(fs))
                else:
                    res[(face, s)] = F.res(ft, fs)
    return CellularSheaf(X, F.ring, ranks, res)


def sheaf_from_json(X: SimplicialComplex, data: dict) -> CellularSheaf:
    try:
        ring = RingSpec.parse(data["ring"])
        ranks = {parse_simplex_key(k): int(v) for k, v in data["stalks"].items()}
        res = {}
        for key, m in data.get("restrictions", {}).items():
            a, _, b = key.replace("→", "->").partition("->")
            face, coface = parse_simplex_key(a), parse_simplex_key(b)
            ncols = ranks.get(face, 0)
            res[(face, coface)] = Matrix(ring, m, len(m), ncols if not m else None)
    except (KeyError, ValueError, TypeError, AttributeError) as exc:
        raise InvalidSheaf(f"bad sheaf JSON: {exc}") from exc
    return make_sheaf(X, ring, ranks, res)


def load_sheaf(X: SimplicialComplex, path) -> CellularSheaf:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    return sheaf_from_json(X, data)
