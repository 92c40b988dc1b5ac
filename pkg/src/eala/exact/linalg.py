"""Exact sparse linear algebra over Q or a cyclotomic field.

Vectors are plain dicts ``{index: scalar}`` with no stored zeros.  Indices
may be any hashable, sortable key, which lets the module code use PBW
monomials or tensor labels directly as coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Hashable, Iterable, List

SparseVec = Dict[Hashable, object]


class SingularMatrixError(ArithmeticError):
    """Raised by :func:`solve` on a singular system; ``witness`` spans the kernel."""

    def __init__(self, message, witness):
        super().__init__(message)
        self.witness = witness


# -- vector helpers ------------------------------------------------------------

def vec_add(u: SparseVec, v: SparseVec, scale=1) -> SparseVec:
    out = dict(u)
    for k, x in v.items():
        y = out.get(k, 0) + scale * x
        if y:
            out[k] = y
        else:
            out.pop(k, None)
    return out


def vec_iadd(acc: SparseVec, v: SparseVec, scale=1) -> None:
    """In-place ``acc += scale * v``."""
    if not scale:
        return
    for k, x in v.items():
        y = acc.get(k, 0) + scale * x
        if y:
            acc[k] = y
        else:
            acc.pop(k, None)


def vec_scale(v: SparseVec, s) -> SparseVec:
    if not s:
        return {}
    return {k: s * x for k, x in v.items()}


def vec_sub(u: SparseVec, v: SparseVec) -> SparseVec:
    return vec_add(u, v, -1)


def vec_clean(v: SparseVec) -> SparseVec:
    return {k: x for k, x in v.items() if x}


# -- matrices ------------------------------------------------------------------

@dataclass
class SparseMat:
    nrows: int
    ncols: int
    rows: Dict[int, Dict[int, object]] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for i, row in self.rows.items():
            if not 0 <= i < self.nrows:
                raise IndexError(f"row {i} outside 0..{self.nrows - 1}")
            r = {}
            for j, x in row.items():
                if not 0 <= j < self.ncols:
                    raise IndexError(f"column {j} outside 0..{self.ncols - 1}")
                if x:
                    r[j] = x
            if r:
                clean[i] = r
        self.rows = clean

    @classmethod
    def from_dense(cls, data) -> "SparseMat":
        data = [list(r) for r in data]
        nrows = len(data)
        ncols = len(data[0]) if data else 0
        return cls(nrows, ncols, {i: {j: x for j, x in enumerate(r)} for i, r in enumerate(data)})

    @classmethod
    def identity(cls, n: int) -> "SparseMat":
        return cls(n, n, {i: {i: Fraction(1)} for i in range(n)})

    def dense(self) -> List[list]:
        return [[self.rows.get(i, {}).get(j, Fraction(0)) for j in range(self.ncols)]
                for i in range(self.nrows)]

    def __getitem__(self, ij):
        i, j = ij
        return self.rows.get(i, {}).get(j, Fraction(0))

    def matvec(self, v: SparseVec) -> SparseVec:
        out = {}
        for i, row in self.rows.items():
            s = 0
            for j, x in row.items():
                y = v.get(j)
                if y:
                    s = s + x * y
            if s:
                out[i] = s
        return out

    def transpose(self) -> "SparseMat":
        t: Dict[int, Dict[int, object]] = {}
        for i, row in self.rows.items():
            for j, x in row.items():
                t.setdefault(j, {})[i] = x
        return SparseMat(self.ncols, self.nrows, t)


def exact_det(m: SparseMat):
    """Determinant by fraction-free (Bareiss) elimination."""
    if m.nrows != m.ncols:
        raise ValueError(f"determinant of non-square {m.nrows}x{m.ncols} matrix")
    n = m.nrows
    if n == 0:
        return Fraction(1)
    a = m.dense()
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if not a[k][k]:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return Fraction(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        piv = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (piv * row_i[j] - aik * row_k[j]) / prev
            row_i[k] = Fraction(0)
        prev = piv
    d = a[n - 1][n - 1]
    return d if sign > 0 else -d


def rref(m: SparseMat):
    """Reduced row echelon form; returns (rows as dicts keyed by column, pivot columns)."""
    rows = [dict(r) for _, r in sorted(m.rows.items())]
    pivots: List[int] = []
    reduced: List[Dict[int, object]] = []
    for row in rows:
        for p, prow in zip(pivots, reduced):
            x = row.get(p)
            if x:
                vec_iadd(row, prow, -x)
        if not row:
            continue
        p = min(row)
        inv = Fraction(1) / row[p]
        row = {j: x * inv for j, x in row.items()}
        for idx, prow in enumerate(reduced):
            x = prow.get(p)
            if x:
                vec_iadd(prow, row, -x)
        pivots.append(p)
        reduced.append(row)
    order = sorted(range(len(pivots)), key=lambda i: pivots[i])
    return [reduced[i] for i in order], [pivots[i] for i in order]


def rank(m: SparseMat) -> int:
    return len(rref(m)[1])


def nullspace(m: SparseMat) -> List[SparseVec]:
    """Basis of the right kernel, one vector per free column."""
    reduced, pivots = rref(m)
    pivot_set = set(pivots)
    basis = []
    for free in range(m.ncols):
        if free in pivot_set:
            continue
        v = {free: Fraction(1)}
        for p, row in zip(pivots, reduced):
            x = row.get(free)
            if x:
                v[p] = -x
        basis.append(v)
    return basis


def solve(m: SparseMat, rhs: Iterable[SparseVec]) -> List[SparseVec]:
    """Solve ``m x = b`` for each ``b``; ``m`` must be square and invertible."""
    if m.nrows != m.ncols:
        raise ValueError("solve needs a square matrix")
    n = m.nrows
    rhs = list(rhs)
    # augmented elimination on [m | b_1 ... b_t]
    aug = {}
    for i in range(n):
        row = dict(m.rows.get(i, {}))
        for t, b in enumerate(rhs):
            x = b.get(i)
            if x:
                row[n + t] = x
        aug[i] = row
    reduced, pivots = rref(SparseMat(n, n + len(rhs), aug))
    if len([p for p in pivots if p < n]) < n:
        raise SingularMatrixError("singular system", nullspace(m))
    sols = [dict() for _ in rhs]
    for p, row in zip(pivots, reduced):
        for j, x in row.items():
            if j >= n:
                sols[j - n][p] = x
    return sols


class EchelonBasis:
    """Incrementally maintained reduced basis of a subspace.

    Coordinates are arbitrary sortable keys.  ``add`` returns True when the
    vector enlarged the span.
    """

    def __init__(self):
        self.pivots: Dict[Hashable, Dict[Hashable, object]] = {}

    def __len__(self):
        return len(self.pivots)

    def reduce(self, v: SparseVec) -> SparseVec:
        # pivot rows are fully reduced, so one pass suffices
        v = dict(v)
        for p in [k for k in v if k in self.pivots]:
            x = v.get(p)
            if x:
                vec_iadd(v, self.pivots[p], -x)
        return v

    def contains(self, v: SparseVec) -> bool:
        return not self.reduce(v)

    def add(self, v: SparseVec) -> bool:
        r = self.reduce(v)
        if not r:
            return False
        p = min(r)
        inv = Fraction(1) / r[p]
        r = {k: x * inv for k, x in r.items()}
        for q, row in self.pivots.items():
            x = row.get(p)
            if x:
                vec_iadd(row, r, -x)
        self.pivots[p] = r
        return True

    def vectors(self) -> List[SparseVec]:
        return [dict(v) for _, v in sorted(self.pivots.items())]
