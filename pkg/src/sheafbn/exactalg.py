"""Exact linear algebra over Z, Q and Z/p.

Everything here works on Python integers and :class:`fractions.Fraction`
so results are exact regardless of entry growth.  Matrices act on column
vectors: a map ``k^a -> k^b`` is a ``b x a`` matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence

from .errors import DegreeOutOfRange, InputError, NotAComplex, RingMismatch


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, isqrt(p) + 1))


@dataclass(frozen=True)
class RingSpec:
    """Coefficient ring: ``Z``, ``Q`` or ``Z/p`` for a prime ``p``."""

    kind: str
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "Zp"):
            raise InputError(f"unknown ring kind {self.kind!r}")
        if self.kind == "Zp":
            if not _is_prime(self.p):
                raise InputError(f"{self.p} is not prime")
        elif self.p != 0:
            raise InputError("only Z/p carries a modulus")

    @classmethod
    def parse(cls, text: str) -> "RingSpec":
        text = text.strip()
        if text in ("Z", "ZZ"):
            return INTEGERS
        if text in ("Q", "QQ"):
            return RATIONALS
        if text.startswith(("Z/", "GF(", "F")):
            digits = text.strip("ZGF/()")
            try:
                return cls("Zp", int(digits))
            except ValueError:
                pass
        raise InputError(f"cannot parse ring {text!r}")

    @property
    def name(self) -> str:
        return {"Z": "Z", "Q": "Q"}.get(self.kind, f"Z/{self.p}")

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    def __str__(self) -> str:
        return self.name

    def coerce(self, x):
        if self.kind == "Q":
            if isinstance(x, str):
                return Fraction(x)
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator != 1:
                if self.kind == "Z":
                    raise InputError(f"{x} is not an integer")
                return x.numerator * pow(x.denominator, -1, self.p) % self.p
            x = x.numerator
        if isinstance(x, str):
            x = int(x)
        if isinstance(x, bool) or not isinstance(x, int):
            if isinstance(x, float) and x.is_integer():
                x = int(x)
            else:
                raise InputError(f"{x!r} is not an exact ring element")
        return x % self.p if self.kind == "Zp" else x

    def zero(self):
        return Fraction(0) if self.kind == "Q" else 0

    def one(self):
        return Fraction(1) if self.kind == "Q" else 1

    def is_unit(self, x) -> bool:
        if self.kind == "Z":
            return x in (1, -1)
        return x != 0

    def inv(self, x):
        if self.kind == "Z":
            if x not in (1, -1):
                raise ZeroDivisionError(f"{x} is not a unit of Z")
            return x
        if self.kind == "Q":
            return 1 / Fraction(x)
        return pow(x, -1, self.p)

    def reduce(self, x):
        return x % self.p if self.kind == "Zp" else x

    def to_json_entry(self, x):
        if self.kind == "Q":
            return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
        return x


INTEGERS = RingSpec("Z")
RATIONALS = RingSpec("Q")


def prime_field(p: int) -> RingSpec:
    return RingSpec("Zp", p)


class Matrix:
    """Immutable dense matrix with entries in a :class:`RingSpec`."""

    __slots__ = ("ring", "nrows", "ncols", "_rows")

    def __init__(self, ring: RingSpec, rows: Iterable[Sequence], nrows=None, ncols=None):
        data = tuple(tuple(ring.coerce(x) for x in row) for row in rows)
        if nrows is None:
            nrows = len(data)
        if ncols is None:
            ncols = len(data[0]) if data else 0
        if len(data) != nrows or any(len(r) != ncols for r in data):
            raise InputError("ragged matrix or wrong shape")
        self.ring = ring
        self.nrows = nrows
        self.ncols = ncols
        self._rows = data

    @classmethod
    def _raw(cls, ring, rows, nrows, ncols):
        # trusted constructor: rows already coerced
        m = object.__new__(cls)
        m.ring, m.nrows, m.ncols = ring, nrows, ncols
        m._rows = tuple(tuple(r) for r in rows)
        return m

    @classmethod
    def zeros(cls, ring, nrows, ncols):
        z = ring.zero()
        return cls._raw(ring, [[z] * ncols for _ in range(nrows)], nrows, ncols)

    @classmethod
    def identity(cls, ring, n):
        z, o = ring.zero(), ring.one()
        return cls._raw(ring, [[o if i == j else z for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def diag(cls, ring, values, nrows=None, ncols=None):
        values = [ring.coerce(v) for v in values]
        nrows = len(values) if nrows is None else nrows
        ncols = len(values) if ncols is None else ncols
        rows = [[ring.zero()] * ncols for _ in range(nrows)]
        for i, v in enumerate(values):
            rows[i][i] = v
        return cls._raw(ring, rows, nrows, ncols)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @property
    def rows(self):
        return self._rows

    def tolist(self):
        return [list(r) for r in self._rows]

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.ring == other.ring and self.shape == other.shape
                and self._rows == other._rows)

    def __hash__(self):
        return hash((self.ring, self.shape, self._rows))

    def __repr__(self):
        return f"Matrix({self.ring}, {self.tolist()!r}, shape={self.shape})"

    def _check(self, other):
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.ncols != other.nrows:
            raise InputError(f"cannot multiply {self.shape} by {other.shape}")
        ring = self.ring
        cols = list(zip(*other._rows)) if other.nrows else [()] * other.ncols
        z = ring.zero()
        out = []
        for row in self._rows:
            nz = [(k, a) for k, a in enumerate(row) if a]
            out.append([ring.reduce(sum((a * col[k] for k, a in nz), z)) for col in cols])
        return Matrix._raw(ring, out, self.nrows, other.ncols)

    def __add__(self, other):
        self._check(other)
        if self.shape != other.shape:
            raise InputError("shape mismatch")
        r = self.ring.reduce
        return Matrix._raw(self.ring, [[r(a + b) for a, b in zip(x, y)]
                                       for x, y in zip(self._rows, other._rows)],
                           self.nrows, self.ncols)

    def __neg__(self):
        r = self.ring.reduce
        return Matrix._raw(self.ring, [[r(-a) for a in row] for row in self._rows],
                           self.nrows, self.ncols)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = self.ring.coerce(c)
        r = self.ring.reduce
        return Matrix._raw(self.ring, [[r(c * a) for a in row] for row in self._rows],
                           self.nrows, self.ncols)

    @property
    def T(self) -> "Matrix":
        if not self.nrows:
            return Matrix.zeros(self.ring, self.ncols, 0)
        return Matrix._raw(self.ring, [list(c) for c in zip(*self._rows)], self.ncols, self.nrows)

    def is_zero(self) -> bool:
        return all(not a for row in self._rows for a in row)

    def column(self, j):
        return [row[j] for row in self._rows]

    def submatrix(self, rows, cols):
        rows, cols = list(rows), list(cols)
        return Matrix._raw(self.ring, [[self._rows[i][j] for j in cols] for i in rows],
                           len(rows), len(cols))

    def rank(self) -> int:
        return rank(self)

    def det(self):
        return determinant(self)

    def inverse(self) -> "Matrix":
        return inverse(self)

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and self.ring.is_unit(self.det())


def hstack(ring, blocks: Sequence[Matrix], nrows=None) -> Matrix:
    if not blocks:
        return Matrix.zeros(ring, nrows or 0, 0)
    n = blocks[0].nrows
    rows = [[] for _ in range(n)]
    for b in blocks:
        if b.nrows != n:
            raise InputError("hstack height mismatch")
        for i in range(n):
            rows[i].extend(b._rows[i])
    return Matrix._raw(ring, rows, n, sum(b.ncols for b in blocks))


def vstack(ring, blocks: Sequence[Matrix], ncols=None) -> Matrix:
    if not blocks:
        return Matrix.zeros(ring, 0, ncols or 0)
    n = blocks[0].ncols
    rows = []
    for b in blocks:
        if b.ncols != n:
            raise InputError("vstack width mismatch")
        rows.extend(b._rows)
    return Matrix._raw(ring, rows, len(rows), n)


def block_diag(ring, blocks: Sequence[Matrix]) -> Matrix:
    nr = sum(b.nrows for b in blocks)
    nc = sum(b.ncols for b in blocks)
    rows = [[ring.zero()] * nc for _ in range(nr)]
    r0 = c0 = 0
    for b in blocks:
        for i, row in enumerate(b._rows):
            rows[r0 + i][c0:c0 + b.ncols] = row
        r0 += b.nrows
        c0 += b.ncols
    return Matrix._raw(ring, rows, nr, nc)


# ---------------------------------------------------------------------------
# Diagonalization core

def _diagonalize(ring: RingSpec, A: list, track: bool, chain: bool = True):
    """Reduce ``A`` in place to Smith form; return ``(U, V)`` (lists) or ``None``.

    Over Z the pivot is the entry of least absolute value, which keeps the
    intermediate numbers small at the sizes we care about.  Over a field every
    pivot is scaled to 1.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    field = ring.is_field
    red = ring.reduce
    zero, one = ring.zero(), ring.one()
    U = [[one if i == j else zero for j in range(m)] for i in range(m)] if track else None
    V = [[one if i == j else zero for j in range(n)] for i in range(n)] if track else None

    def swap_rows(i, j):
        if i != j:
            A[i], A[j] = A[j], A[i]
            if track:
                U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        if i != j:
            for row in A:
                row[i], row[j] = row[j], row[i]
            if track:
                for row in V:
                    row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst -= q * row_src
        rs, rd = A[src], A[dst]
        A[dst] = [red(a - q * b) if b else a for a, b in zip(rd, rs)]
        if track:
            U[dst] = [red(a - q * b) if b else a for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in A:
            b = row[src]
            if b:
                row[dst] = red(row[dst] - q * b)
        if track:
            for row in V:
                b = row[src]
                if b:
                    row[dst] = red(row[dst] - q * b)

    def scale_row(i, c):
        A[i] = [red(c * a) for a in A[i]]
        if track:
            U[i] = [red(c * a) for a in U[i]]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                a = row[j]
                if a and (best is None or (not field and abs(a) < best[0])):
                    best = (abs(a) if not field else 1, i, j)
                    if field or best[0] == 1:
                        break
            if best is not None and (field or best[0] == 1):
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = A[t][t]
            if field:
                if p != one:
                    scale_row(t, ring.inv(p))
                    p = one
            dirty = False
            for i in range(t + 1, m):
                a = A[i][t]
                if a:
                    add_row(i, t, a * ring.inv(p) if field else a // p)
                    if A[i][t]:
                        dirty = True
            if dirty:
                k = min((i for i in range(t + 1, m) if A[i][t]), key=lambda i: abs(A[i][t]))
                swap_rows(t, k)
                continue
            for j in range(t + 1, n):
                a = A[t][j]
                if a:
                    add_col(j, t, a * ring.inv(p) if field else a // p)
                    if A[t][j]:
                        dirty = True
            if dirty:
                k = min((j for j in range(t + 1, n) if A[t][j]), key=lambda j: abs(A[t][j]))
                swap_cols(t, k)
                continue
            if chain and not field:
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                            if A[i][j] % p), None)
                if bad is not None:
                    # row_t += row_i, then re-reduce
                    add_row(t, bad[0], -1)
                    continue
            break
        if not field and A[t][t] < 0:
            scale_row(t, -1)
        t += 1
    return (U, V) if track else None


def smith_normal_form(M: Matrix):
    """Return ``(U, S, V)`` with ``U @ M @ V == S`` and S in Smith normal form.

    Over a field S is ``diag(1, ..., 1, 0, ...)``.
    """
    A = [list(r) for r in M.rows]
    U, V = _diagonalize(M.ring, A, track=True)
    return (Matrix._raw(M.ring, U, M.nrows, M.nrows),
            Matrix._raw(M.ring, A, M.nrows, M.ncols),
            Matrix._raw(M.ring, V, M.ncols, M.ncols))


def smith_diagonal(M: Matrix, chain: bool = True) -> list:
    """Nonzero diagonal of the Smith form, without transforms.

    With ``chain=False`` the divisibility chain is not enforced; the length
    (the rank) is still correct.
    """
    A = [list(r) for r in M.rows]
    _diagonalize(M.ring, A, track=False, chain=chain)
    out = []
    for i in range(min(M.nrows, M.ncols)):
        if not A[i][i]:
            break
        out.append(A[i][i])
    return out


def rank(M: Matrix) -> int:
    return len(smith_diagonal(M, chain=False))


def determinant(M: Matrix):
    if M.nrows != M.ncols:
        raise InputError("determinant of a non-square matrix")
    ring = M.ring
    work = RATIONALS if ring.kind == "Z" else ring
    A = [[work.coerce(a) for a in r] for r in M.rows]
    n = M.nrows
    det = work.one()
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c]), None)
        if piv is None:
            return ring.zero()
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = work.reduce(-det)
        p = A[c][c]
        det = work.reduce(det * p)
        pinv = work.inv(p)
        for r in range(c + 1, n):
            f = A[r][c]
            if f:
                q = work.reduce(f * pinv)
                A[r] = [work.reduce(a - q * b) for a, b in zip(A[r], A[c])]
    if ring.kind == "Z":
        return int(det)
    return det


def _rref(ring: RingSpec, A: list):
    """Row-reduce a field matrix in place; return pivot columns."""
    m = len(A)
    n = len(A[0]) if m else 0
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = ring.inv(A[r][c])
        A[r] = [ring.reduce(a * inv) for a in A[r]]
        for i in range(m):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [ring.reduce(a - f * b) for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return pivots


def pivot_columns(M: Matrix) -> list:
    """Indices of a maximal independent set of columns (field entries)."""
    if not M.nrows or not M.ncols:
        return []
    return _rref(M.ring, [list(r) for r in M.rows])


def inverse(M: Matrix) -> Matrix:
    if M.nrows != M.ncols:
        raise InputError("inverse of a non-square matrix")
    n = M.nrows
    ring = M.ring
    work = RATIONALS if ring.kind == "Z" else ring
    A = [[work.coerce(a) for a in r] + [work.one() if i == j else work.zero() for j in range(n)]
         for i, r in enumerate(M.rows)]
    piv = _rref(work, A)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ZeroDivisionError("matrix is singular")
    out = [row[n:] for row in A]
    if ring.kind == "Z":
        if any(x.denominator != 1 for row in out for x in row):
            raise ZeroDivisionError("matrix is not unimodular")
        out = [[int(x) for x in row] for row in out]
    return Matrix._raw(ring, out, n, n)


def kernel_basis(M: Matrix) -> Matrix:
    """Columns form a basis (a Z-basis over Z) of the kernel of ``M``."""
    ring = M.ring
    if ring.kind == "Z":
        _, S, V = smith_normal_form(M)
        r = sum(1 for i in range(min(S.nrows, S.ncols)) if S[i, i])
        return V.submatrix(range(V.nrows), range(r, V.ncols))
    A = [list(r) for r in M.rows]
    piv = _rref(ring, A) if A else []
    free = [c for c in range(M.ncols) if c not in piv]
    cols = []
    for f in free:
        v = [ring.zero()] * M.ncols
        v[f] = ring.one()
        for i, c in enumerate(piv):
            v[c] = ring.reduce(-A[i][f])
        cols.append(v)
    if not cols:
        return Matrix.zeros(ring, M.ncols, 0)
    return Matrix._raw(ring, cols, len(cols), M.ncols).T


def solve(A: Matrix, B: Matrix) -> Matrix:
    """Solve ``A @ X == B`` exactly for ``A`` of full column rank.

    Raises ``InputError`` when there is no solution in the ring.
    """
    ring = A.ring
    work = RATIONALS if ring.kind == "Z" else ring
    n, k = A.ncols, B.ncols
    aug = [[work.coerce(a) for a in ra] + [work.coerce(b) for b in rb]
           for ra, rb in zip(A.rows, B.rows)]
    piv = _rref(work, aug)
    if piv[:n] != list(range(n)) and n:
        raise InputError("coefficient matrix is not of full column rank")
    if any(c >= n for c in piv):
        raise InputError("system has no solution")
    X = [aug[i][n:] for i in range(n)]
    if ring.kind == "Z":
        if any(x.denominator != 1 for row in X for x in row):
            raise InputError("system has no integral solution")
        X = [[int(x) for x in row] for row in X]
    return Matrix._raw(ring, X, n, k)


# ---------------------------------------------------------------------------
# Finitely presented modules

def _normalize_factors(values: Iterable[int]) -> tuple:
    vals = [abs(v) for v in values if abs(v) != 1]
    if any(v == 0 for v in vals):
        raise InputError("zero is not an invariant factor")
    if not vals:
        return ()
    diag = smith_diagonal(Matrix.diag(INTEGERS, vals))
    return tuple(d for d in diag if d != 1)


@dataclass(frozen=True)
class FpModule:
    """Isomorphism class ``ring^free_rank + (+) ring/d_i`` with ``d_1 | d_2 | ...``."""

    ring: RingSpec
    free_rank: int
    torsion: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.free_rank < 0:
            raise InputError("negative free rank")
        if self.ring.is_field and self.torsion:
            raise InputError("torsion over a field")
        t = self.torsion
        if any(d <= 1 for d in t) or any(t[i + 1] % t[i] for i in range(len(t) - 1)):
            raise InputError(f"{t} is not an invariant factor chain")

    @classmethod
    def zero(cls, ring):
        return cls(ring, 0)

    @classmethod
    def free(cls, ring, n):
        return cls(ring, n)

    @classmethod
    def from_factors(cls, ring, free_rank, factors):
        if ring.is_field:
            return cls(ring, free_rank)
        return cls(ring, free_rank, _normalize_factors(factors))

    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def dim(self) -> int:
        """Dimension over a field; free rank over Z."""
        return self.free_rank

    def __add__(self, other: "FpModule") -> "FpModule":
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        return FpModule.from_factors(self.ring, self.free_rank + other.free_rank,
                                     self.torsion + other.torsion)

    def __str__(self):
        parts = []
        r = self.ring.name if self.ring.kind != "Zp" else f"({self.ring.name})"
        if self.free_rank == 1:
            parts.append(r)
        elif self.free_rank > 1:
            parts.append(f"{r}^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " ⊕ ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"ring": self.ring.name, "free_rank": self.free_rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, data: dict) -> "FpModule":
        return cls(RingSpec.parse(data["ring"]), int(data["free_rank"]),
                   tuple(data.get("torsion", ())))


def fp_module(presentation: Matrix) -> FpModule:
    """Cokernel of ``presentation: k^a -> k^b`` in canonical form."""
    diag = smith_diagonal(presentation)
    free = presentation.nrows - len(diag)
    ring = presentation.ring
    if ring.is_field:
        return FpModule(ring, free)
    return FpModule.from_factors(ring, free, diag)


def modules_isomorphic(A: FpModule, B: FpModule) -> bool:
    if A.ring != B.ring:
        raise RingMismatch(f"{A.ring} vs {B.ring}")
    return A == B


def subquotient(ring: RingSpec, dim: int, outgoing: Matrix | None, incoming: Matrix | None) -> FpModule:
    """``ker(outgoing) / im(incoming)`` on ``ring^dim``; ``None`` means a zero map."""
    r_out = rank(outgoing) if outgoing is not None and outgoing.nrows else 0
    if incoming is not None and incoming.ncols and incoming.nrows:
        diag = smith_diagonal(incoming)
    else:
        diag = []
    free = dim - r_out - len(diag)
    if free < 0:
        raise NotAComplex("image larger than kernel")
    return FpModule.from_factors(ring, free, diag)


# ---------------------------------------------------------------------------
# Cochain complexes

@dataclass(frozen=True)
class CochainComplex:
    """Cochain complex ``C^lo -> ... -> C^hi`` of free modules.

    ``differentials[n]`` is the matrix of ``d^n: C^n -> C^{n+1}`` for
    ``lo <= n < hi``.
    """

    ring: RingSpec
    dims: dict
    differentials: dict

    def __post_init__(self):
        degs = sorted(self.dims)
        if not degs:
            raise InputError("empty complex")
        if degs != list(range(degs[0], degs[-1] + 1)):
            raise InputError("degrees must be contiguous")
        for n, d in self.differentials.items():
            if n not in self.dims or n + 1 not in self.dims:
                raise InputError(f"differential d^{n} leaves the degree range")
            if d.ring != self.ring:
                raise RingMismatch(f"d^{n} over {d.ring}")
            if d.shape != (self.dims[n + 1], self.dims[n]):
                raise InputError(f"d^{n} has shape {d.shape}, expected "
                                 f"{(self.dims[n + 1], self.dims[n])}")

    @property
    def lo(self) -> int:
        return min(self.dims)

    @property
    def hi(self) -> int:
        return max(self.dims)

    def differential(self, n) -> Matrix:
        if n in self.differentials:
            return self.differentials[n]
        return Matrix.zeros(self.ring, self.dims.get(n + 1, 0), self.dims.get(n, 0))

    def check(self):
        """Raise :class:`NotAComplex` if some ``d^{n+1} d^n`` is nonzero."""
        for n in range(self.lo, self.hi - 1):
            if not (self.differential(n + 1) @ self.differential(n)).is_zero():
                raise NotAComplex(f"d^{n + 1} d^{n} != 0")

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * d for n, d in self.dims.items())


def cohomology_at(C: CochainComplex, n: int) -> FpModule:
    if not C.lo <= n <= C.hi:
        raise DegreeOutOfRange(f"degree {n} outside [{C.lo}, {C.hi}]")
    out = C.differential(n)
    inc = C.differential(n - 1) if n - 1 >= C.lo else None
    if inc is not None and not (out @ inc).is_zero():
        raise NotAComplex(f"d^{n} d^{n - 1} != 0")
    return subquotient(C.ring, C.dims[n], out, inc)
