"""Edge-path presentations of the fundamental group and coset enumeration.

Words are tuples of signed 1-based generator indices: ``+i`` is ``g_i`` and
``-i`` its inverse.  Coset tables use right actions, so a coset ``c`` moved
by the word ``w = l1 l2 ... lk`` is ``(...((c.l1).l2)...).lk``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .errors import (BasepointMismatch, InputError, NotAnEdge, NotConnected)
from .exactalg import INTEGERS, FpModule, Matrix, fp_module
from .simplicial import SimplicialComplex, SimplicialMap, is_connected

Word = tuple


def reduce_word(letters: Sequence[int]) -> Word:
    out = []
    for x in letters:
        if x == 0:
            raise InputError("0 is not a generator letter")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inverse_word(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def concat(*words) -> Word:
    return reduce_word([x for w in words for x in w])


@dataclass(frozen=True)
class GroupPresentation:
    generator_count: int
    relators: tuple = ()

    def __post_init__(self):
        rels = []
        for r in self.relators:
            w = reduce_word(r)
            if any(abs(x) > self.generator_count for x in w):
                raise InputError(f"relator {list(r)} uses an unknown generator")
            if w:
                rels.append(w)
        object.__setattr__(self, "relators", tuple(rels))

    def to_json(self) -> dict:
        return {"generators": self.generator_count,
                "relators": [list(r) for r in self.relators]}

    @classmethod
    def from_json(cls, data: dict) -> "GroupPresentation":
        return cls(int(data["generators"]), tuple(tuple(r) for r in data.get("relators", [])))


@dataclass(frozen=True)
class EdgeLabeling:
    """Spanning tree plus one generator per non-tree edge.

    ``generators[i - 1]`` is the edge ``(u, v)``, ``u < v``, whose canonical
    orientation reads as ``g_i``.  ``parent`` records the BFS tree.
    """

    complex: SimplicialComplex
    basepoint: int
    tree: frozenset
    generators: tuple
    parent: dict = field(compare=False)

    @property
    def edge_to_generator(self) -> dict:
        return {e: i + 1 for i, e in enumerate(self.generators)}

    def tree_path(self, v: int) -> list:
        """Vertices from the basepoint to ``v`` along the tree."""
        path = [v]
        while path[-1] != self.basepoint:
            path.append(self.parent[path[-1]])
        return path[::-1]


def edge_word(L: EdgeLabeling, a: int, b: int) -> Word:
    e = (min(a, b), max(a, b))
    if a == b or e not in L.complex:
        raise NotAnEdge(f"{{{a}, {b}}} is not an edge")
    if e in L.tree:
        return ()
    i = L.edge_to_generator[e]
    return (i,) if a < b else (-i,)


def presentation(X: SimplicialComplex, basepoint: int = 0):
    """Return ``(GroupPresentation, EdgeLabeling)`` for ``pi_1(X, basepoint)``."""
    if not is_connected(X):
        raise NotConnected("fundamental group needs a connected complex")
    if not 0 <= basepoint < X.vertex_count:
        raise InputError(f"basepoint {basepoint} is not a vertex")
    parent = {basepoint: None}
    tree = set()
    queue = deque([basepoint])
    while queue:
        v = queue.popleft()
        for w in X.neighbors[v]:
            if w not in parent:
                parent[w] = v
                tree.add((min(v, w), max(v, w)))
                queue.append(w)
    gens = tuple(e for e in X.edges if e not in tree)
    L = EdgeLabeling(X, basepoint, frozenset(tree), gens, parent)
    rels = []
    for a, b, c in X.faces(2):
        rels.append(concat(edge_word(L, a, b), edge_word(L, b, c), edge_word(L, c, a)))
    return GroupPresentation(len(gens), tuple(rels)), L


def abelianization(P: GroupPresentation) -> FpModule:
    """Relator exponent sums; agrees with ``H_1`` for edge-path presentations."""
    m = P.generator_count
    cols = []
    for r in P.relators:
        col = [0] * m
        for x in r:
            col[abs(x) - 1] += 1 if x > 0 else -1
        cols.append(col)
    R = Matrix(INTEGERS, [list(row) for row in zip(*cols)] if cols else [[] for _ in range(m)],
               m, len(cols))
    return fp_module(R)


# ---------------------------------------------------------------------------
# Coset enumeration

COMPLETE = "complete"
BUDGET_EXCEEDED = "budget-exceeded"


def _col(letter: int) -> int:
    return 2 * (letter - 1) if letter > 0 else 2 * (-letter - 1) + 1


@dataclass(frozen=True)
class CosetTable:
    """``action[i][c]`` is the coset ``c . g_{i+1}``."""

    presentation: GroupPresentation
    subgroup: tuple
    coset_count: int
    action: tuple
    status: str

    @property
    def complete(self) -> bool:
        return self.status == COMPLETE

    def apply(self, c: int, word: Sequence[int]) -> int:
        for x in word:
            perm = self.action[abs(x) - 1]
            c = perm[c] if x > 0 else perm.index(c)
        return c

    @property
    def inverse_action(self) -> tuple:
        inv = []
        for perm in self.action:
            q = [0] * len(perm)
            for i, j in enumerate(perm):
                q[j] = i
            inv.append(tuple(q))
        return tuple(inv)

    def representatives(self) -> list:
        """Shortest words (BFS, letters ``1, -1, 2, -2, ...``) reaching each coset."""
        inv = self.inverse_action
        reps = [None] * self.coset_count
        reps[0] = ()
        queue = deque([0])
        while queue:
            c = queue.popleft()
            for i in range(self.presentation.generator_count):
                for letter, img in ((i + 1, self.action[i][c]), (-(i + 1), inv[i][c])):
                    if reps[img] is None:
                        reps[img] = reps[c] + (letter,)
                        queue.append(img)
        return reps


class _BudgetExceeded(Exception):
    pass


class _Enumerator:
    def __init__(self, P: GroupPresentation, max_cosets: int):
        self.ncols = 2 * P.generator_count
        self.table = [[None] * self.ncols]
        self.parent = [0]
        self.live = 1
        self.max_cosets = max_cosets
        self.hard_limit = 50 * max_cosets + 1000

    def rep(self, c):
        p = self.parent
        root = c
        while p[root] != root:
            root = p[root]
        while p[c] != root:
            p[c], c = root, p[c]
        return root

    def define(self, c, x):
        if self.live >= self.max_cosets or len(self.table) >= self.hard_limit:
            raise _BudgetExceeded
        d = len(self.table)
        self.table.append([None] * self.ncols)
        self.parent.append(d)
        self.live += 1
        self.table[c][x] = d
        self.table[d][x ^ 1] = c

    def merge(self, k, l, queue):
        k, l = self.rep(k), self.rep(l)
        if k == l:
            return
        lo, hi = min(k, l), max(k, l)
        self.parent[hi] = lo
        self.live -= 1
        queue.append(hi)

    def coincidence(self, a, b):
        queue = []
        self.merge(a, b, queue)
        t = self.table
        i = 0
        while i < len(queue):
            e = queue[i]
            i += 1
            for x in range(self.ncols):
                f = t[e][x]
                if f is None:
                    continue
                if t[f][x ^ 1] == e:
                    t[f][x ^ 1] = None
                e1, f1 = self.rep(e), self.rep(f)
                if t[e1][x] is not None:
                    self.merge(f1, t[e1][x], queue)
                elif t[f1][x ^ 1] is not None:
                    self.merge(e1, t[f1][x ^ 1], queue)
                else:
                    t[e1][x] = f1
                    t[f1][x ^ 1] = e1

    def scan_and_fill(self, c, cols):
        t = self.table
        f = b = c
        i, j = 0, len(cols) - 1
        while True:
            while i <= j and t[f][cols[i]] is not None:
                f = t[f][cols[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and t[b][cols[j] ^ 1] is not None:
                b = t[b][cols[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                t[f][cols[i]] = b
                t[b][cols[i] ^ 1] = f
                return
            self.define(f, cols[i])

    def alive(self, c):
        return self.parent[c] == c


def todd_coxeter(P: GroupPresentation, subgroup: Sequence[Sequence[int]] = (),
                 max_cosets: int = 10000) -> CosetTable:
    """HLT coset enumeration with eager coincidence processing.

    The result is standardized (cosets renumbered in BFS order over the
    columns ``g1, g1^-1, g2, ...``), so equal inputs give equal tables.
    """
    if max_cosets < 1:
        raise InputError("max_cosets must be at least 1")
    sub = tuple(reduce_word(w) for w in subgroup)
    rel_cols = [[_col(x) for x in r] for r in P.relators]
    en = _Enumerator(P, max_cosets)
    try:
        for w in sub:
            if w:
                en.scan_and_fill(0, [_col(x) for x in w])
        c = 0
        while c < len(en.table):
            if en.alive(c):
                for r in rel_cols:
                    en.scan_and_fill(c, r)
                    if not en.alive(c):
                        break
                if en.alive(c):
                    for x in range(en.ncols):
                        if en.table[c][x] is None:
                            en.define(c, x)
            c += 1
    except _BudgetExceeded:
        return CosetTable(P, sub, en.live, (), BUDGET_EXCEEDED)
    # renumber live cosets in BFS order from coset 0
    t = en.table
    order = {0: 0}
    queue = deque([0])
    while queue:
        c = queue.popleft()
        for x in range(en.ncols):
            d = en.rep(t[c][x])
            if d not in order:
                order[d] = len(order)
                queue.append(d)
    n = len(order)
    action = []
    for i in range(P.generator_count):
        perm = [0] * n
        for c, k in order.items():
            perm[k] = order[en.rep(t[c][2 * i])]
        action.append(tuple(perm))
    return CosetTable(P, sub, n, tuple(action), COMPLETE)


@dataclass(frozen=True)
class Finite:
    order: int
    table: CosetTable


@dataclass(frozen=True)
class Unknown:
    reason: str


def group_order(P: GroupPresentation, budget: int = 10000):
    """``Finite(order, table)`` when enumeration closes, else ``Unknown``.

    ``Unknown`` never claims the group is infinite.
    """
    T = todd_coxeter(P, (), budget)
    if T.complete:
        return Finite(T.coset_count, T)
    return Unknown(f"coset enumeration exceeded {budget} cosets")


def induced_homomorphism(f: SimplicialMap, L_src: EdgeLabeling, L_tgt: EdgeLabeling) -> dict:
    """Map each source generator index to a target word.

    The source generator of edge ``(u, v)`` is the loop tree(b->u), (u->v),
    tree(v->b); its image is that edge path pushed through ``f`` and read
    with the target labeling.
    """
    if f(L_src.basepoint) != L_tgt.basepoint:
        raise BasepointMismatch(f"f({L_src.basepoint}) = {f(L_src.basepoint)}, "
                                f"target basepoint is {L_tgt.basepoint}")

    def image_word(a, b):
        fa, fb = f(a), f(b)
        return () if fa == fb else edge_word(L_tgt, fa, fb)

    transport = {L_src.basepoint: ()}
    order = sorted(L_src.parent, key=lambda v: len(L_src.tree_path(v)))
    for v in order:
        p = L_src.parent[v]
        if p is not None:
            transport[v] = concat(transport[p], image_word(p, v))
    return {i + 1: concat(transport[u], image_word(u, v), inverse_word(transport[v]))
            for i, (u, v) in enumerate(L_src.generators)}


def substitute(word: Sequence[int], h: dict) -> Word:
    """Image of a source word under the generator map ``h``."""
    return concat(*(h[x] if x > 0 else inverse_word(h[-x]) for x in word))
