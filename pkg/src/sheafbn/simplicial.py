"""Finite abstract simplicial complexes, boundary maps and simplicial maps."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from pathlib import Path

from .errors import DegreeOutOfRange, EmptyInput, InputError, InvalidVertexIndex
from .exactalg import INTEGERS, FpModule, Matrix, RingSpec, subquotient

Simplex = tuple


@dataclass(frozen=True)
class SimplicialComplex:
    """Simplices are increasing vertex tuples; ``simplices[d]`` is sorted."""

    vertex_count: int
    simplices: tuple

    @property
    def dimension(self) -> int:
        return len(self.simplices) - 1

    def __len__(self):
        return sum(len(s) for s in self.simplices)

    def count(self, d: int) -> int:
        return len(self.simplices[d]) if 0 <= d <= self.dimension else 0

    def faces(self, d: int) -> tuple:
        return self.simplices[d] if 0 <= d <= self.dimension else ()

    @cached_property
    def index(self) -> dict:
        """Simplex -> position inside its dimension."""
        return {s: i for level in self.simplices for i, s in enumerate(level)}

    def all_simplices(self):
        for level in self.simplices:
            yield from level

    def __contains__(self, simplex) -> bool:
        return tuple(simplex) in self.index

    @cached_property
    def edges(self) -> tuple:
        return self.faces(1)

    @cached_property
    def neighbors(self) -> dict:
        nb = {v: [] for v in range(self.vertex_count)}
        for u, v in self.edges:
            nb[u].append(v)
            nb[v].append(u)
        return {v: sorted(ns) for v, ns in nb.items()}

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * len(level) for d, level in enumerate(self.simplices))

    def to_json(self) -> dict:
        maximal = [list(s) for s in maximal_simplices(self)]
        return {"vertices": self.vertex_count, "maximal_simplices": maximal}


def build_complex(maximal_simplices, vertex_count: int | None = None) -> SimplicialComplex:
    """Downward closure of the given simplices, stored canonically."""
    tops = [tuple(sorted(set(int(v) for v in s))) for s in maximal_simplices]
    tops = [s for s in tops if s]
    if not tops:
        raise EmptyInput("no simplices given")
    used = {v for s in tops for v in s}
    if min(used) < 0:
        raise InvalidVertexIndex(f"negative vertex index {min(used)}")
    n = max(used) + 1 if vertex_count is None else vertex_count
    if max(used) >= n:
        raise InvalidVertexIndex(f"vertex {max(used)} out of range for {n} vertices")
    if len(used) != n:
        missing = sorted(set(range(n)) - used)
        raise InvalidVertexIndex(f"vertices {missing} belong to no simplex")
    dim = max(len(s) for s in tops) - 1
    levels = [set() for _ in range(dim + 1)]
    for s in tops:
        for k in range(1, len(s) + 1):
            levels[k - 1].update(combinations(s, k))
    return SimplicialComplex(n, tuple(tuple(sorted(level)) for level in levels))


def maximal_simplices(X: SimplicialComplex) -> list:
    out = []
    for d in range(X.dimension, -1, -1):
        higher = [set(s) for s in out]
        out.extend(s for s in X.simplices[d] if not any(set(s) <= h for h in higher))
    return sorted(out)


def load_complex(path) -> SimplicialComplex:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    return complex_from_json(data)


def complex_from_json(data: dict) -> SimplicialComplex:
    try:
        return build_complex(data["maximal_simplices"], data.get("vertices"))
    except (KeyError, TypeError) as exc:
        raise InputError(f"bad complex JSON: {exc}") from exc


def face_signs(simplex: Simplex):
    """Yield ``(face, sign)`` over codimension-one faces."""
    for i in range(len(simplex)):
        yield simplex[:i] + simplex[i + 1:], (-1) ** i


def boundary_matrix(X: SimplicialComplex, d: int, ring: RingSpec = INTEGERS) -> Matrix:
    """Matrix of ``C_d -> C_{d-1}``."""
    if not 1 <= d <= X.dimension:
        raise DegreeOutOfRange(f"boundary degree {d} outside [1, {X.dimension}]")
    rows = [[0] * X.count(d) for _ in range(X.count(d - 1))]
    idx = X.index
    for j, s in enumerate(X.simplices[d]):
        for face, sign in face_signs(s):
            rows[idx[face]][j] = sign
    return Matrix(ring, rows, X.count(d - 1), X.count(d))


def homology(X: SimplicialComplex, n: int, ring: RingSpec = INTEGERS) -> FpModule:
    if not 0 <= n <= X.dimension:
        raise DegreeOutOfRange(f"homology degree {n} outside [0, {X.dimension}]")
    out = boundary_matrix(X, n, ring) if n >= 1 else None
    inc = boundary_matrix(X, n + 1, ring) if n + 1 <= X.dimension else None
    return subquotient(ring, X.count(n), out, inc)


def betti_numbers(X: SimplicialComplex, ring: RingSpec) -> list:
    return [homology(X, n, ring).free_rank for n in range(X.dimension + 1)]


def components(X: SimplicialComplex) -> list:
    seen = [False] * X.vertex_count
    comps = []
    for start in range(X.vertex_count):
        if seen[start]:
            continue
        seen[start] = True
        comp, queue = [], deque([start])
        while queue:
            v = queue.popleft()
            comp.append(v)
            for w in X.neighbors[v]:
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
        comps.append(sorted(comp))
    return comps


def is_connected(X: SimplicialComplex) -> bool:
    return len(components(X)) == 1


@dataclass(frozen=True)
class SimplicialMap:
    source: SimplicialComplex
    target: SimplicialComplex
    vertex_images: tuple

    def __post_init__(self):
        imgs = tuple(int(v) for v in self.vertex_images)
        object.__setattr__(self, "vertex_images", imgs)
        if len(imgs) != self.source.vertex_count:
            raise InputError("one image per source vertex required")
        if any(not 0 <= v < self.target.vertex_count for v in imgs):
            raise InvalidVertexIndex("vertex image out of range")
        for s in self.source.all_simplices():
            if self.image(s) not in self.target:
                raise InputError(f"image of {s} is not a simplex of the target")

    def __call__(self, v: int) -> int:
        return self.vertex_images[v]

    def image(self, simplex) -> Simplex:
        return tuple(sorted({self.vertex_images[v] for v in simplex}))

    def compose(self, other: "SimplicialMap") -> "SimplicialMap":
        """``other`` after ``self``."""
        return SimplicialMap(self.source, other.target,
                             tuple(other(self(v)) for v in range(self.source.vertex_count)))
