"""Component extraction through generalized Vandermonde systems.

For an element family ``X(n)`` of t1-degree ``n`` the action on a tensor is
``X(n) v = sum_i sum_s a_i^n n^s u_(s,i)`` with finitely many ``s``.  Sampling
``n = 1..k(N+1)`` and inverting the matrix ``(a_i^n n^s)`` recovers the
vectors ``u_(s,i)``; particular ``u`` are slot actions such as
``v_1 (x) ... (x) x(m) v_i (x) ... (x) v_k``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from ..exact.linalg import EchelonBasis, SparseMat, exact_det, solve, vec_iadd
from ..exact.scalars import Scalar
from ..loop import LoopModule, vectors_rank
from ..toroidal import kahler_reduce

Vec = Dict
KINDS = ("k1", "x", "d1", "L")


class InternalError(ArithmeticError):
    """A system that the theory guarantees to be regular was not."""


def vandermonde_matrix(points: Sequence[Scalar], N: int) -> SparseMat:
    """Rows ``j = 1..k(N+1)``, columns ``i = s*k + t`` with entry ``a_t^j * j^s``."""
    k = len(points)
    size = k * (N + 1)
    rows = {}
    for r in range(size):
        j = r + 1
        rows[r] = {c: points[c % k] ** j * Fraction(j) ** (c // k) for c in range(size)}
    return SparseMat(size, size, rows)


def vandermonde_det(points: Sequence[Scalar], N: int):
    return exact_det(vandermonde_matrix(points, N))


_INVERSES: Dict[Tuple, List[Dict[int, Scalar]]] = {}


def vandermonde_inverse(points: Sequence[Scalar], N: int) -> List[Dict[int, Scalar]]:
    """Rows of the inverse matrix as sparse dicts, cached per ``(points, N)``."""
    key = (tuple(points), N)
    hit = _INVERSES.get(key)
    if hit is None:
        mat = vandermonde_matrix(points, N)
        size = mat.nrows
        try:
            cols = solve(mat, [{j: Fraction(1)} for j in range(size)])
        except ArithmeticError as exc:
            raise InternalError(f"singular extraction system for N = {N}") from exc
        hit = [{} for _ in range(size)]
        for j, col in enumerate(cols):
            for r, x in col.items():
                if x:
                    hit[r][j] = x
        _INVERSES[key] = hit
    return hit


# -- span tracking -------------------------------------------------------------

class SpanTracker:
    """A growing subspace ``W`` of the hat module, one echelon basis per weight slice."""

    def __init__(self, lm: LoopModule):
        self.lm = lm
        self.slices: Dict[Tuple, EchelonBasis] = {}
        self.frontier: List[Vec] = []

    def _split(self, v: Vec) -> Dict[Tuple, Vec]:
        parts: Dict[Tuple, Vec] = {}
        for states, x in v.items():
            if x:
                parts.setdefault(self.lm.weight(states), {})[states] = x
        return parts

    def add(self, v: Vec) -> bool:
        """Add the weight components of ``v``; returns True if the span grew."""
        grew = False
        for w, part in self._split(v).items():
            basis = self.slices.setdefault(w, EchelonBasis())
            if basis.add(part):
                self.frontier.append(part)
                grew = True
        return grew

    def contains(self, v: Vec) -> bool:
        for w, part in self._split(v).items():
            basis = self.slices.get(w)
            if basis is None or not basis.contains(part):
                return False
        return True

    def dim(self, w: Optional[Tuple] = None) -> int:
        if w is not None:
            return len(self.slices.get(w, ()))
        return sum(len(b) for b in self.slices.values())

    def pop_frontier(self) -> List[Vec]:
        out, self.frontier = self.frontier, []
        return out

    def certify(self) -> bool:
        """Re-check by exact rank that the stored vectors are independent."""
        return all(vectors_rank(b.vectors()) == len(b) for b in self.slices.values())


# -- extraction ------------------------------------------------------------------

def slot_depth_bound(lm: LoopModule, v: Vec) -> int:
    """The minimal ``M`` with every slot vector of ``v`` of depth at most ``M``."""
    M = 0
    for states in v:
        for i, s in enumerate(states):
            M = max(M, lm.slots[i].depth(s))
    return M


def family_element(kind: str, m: int, n: int, label: Optional[str] = None) -> Dict:
    if kind == "k1":
        return kahler_reduce(0, m, n)          # t0^m t1^n k0
    if kind == "x":
        return {("loop", label, m, n): Fraction(1)}
    if kind in ("d1", "L"):
        return {("skew", m, n): Fraction(1)}
    raise ValueError(f"unknown extraction kind {kind!r}")


def family_degree(kind: str, M: int, m: int) -> int:
    """Degree bound in ``n``, never below the coefficient that is read off."""
    if kind == "k1":
        return max(2 * M - m, 1)
    if kind == "x":
        return max(3 * M - m, 0)
    return max(3 * M - m + 2, 1)


def solve_family(lm: LoopModule, v: Vec, kind: str, m: int, label: Optional[str] = None,
                 M: Optional[int] = None) -> Dict[Tuple[int, int], Vec]:
    """The vectors ``u_(s,i)`` of the family ``kind`` at ``t0``-mode ``m``.

    One extra sample beyond the square system checks the degree bound.
    """
    k = lm.k
    M = slot_depth_bound(lm, v) if M is None else M
    N = family_degree(kind, M, m)
    size = k * (N + 1)
    inv = vandermonde_inverse(lm.cfg.points, N)
    samples = [lm.hat_action(family_element(kind, m, n, label), v) for n in range(1, size + 2)]
    u: Dict[Tuple[int, int], Vec] = {}
    for c in range(size):
        acc: Vec = {}
        for j, x in inv[c].items():
            vec_iadd(acc, samples[j], x)
        u[(c // k, c % k)] = acc
    extra = size + 1
    check: Vec = {}
    for (s, i), vec in u.items():
        vec_iadd(check, vec, lm.cfg.points[i] ** extra * Fraction(extra) ** s)
    vec_iadd(check, samples[size], -1)
    if check:
        raise InternalError(f"degree bound N = {N} too small for kind {kind} at m = {m}")
    return u


def extract_components(lm: LoopModule, v: Vec, kind: str, m: int,
                       label: Optional[str] = None, W: Optional[SpanTracker] = None
                       ) -> List[Vec]:
    """Per-slot vectors ``v_1 (x) ... (x) X(m) v_i (x) ... (x) v_k`` from ĝ actions only.

    ``X`` is ``k1``, ``d1``, ``L`` or a simple label (kind ``x``).  Every
    returned vector is added to ``W`` when given.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown extraction kind {kind!r}")
    k = lm.k
    if kind == "k1":
        u = solve_family(lm, v, "k1", m)
        out = [{key: -m * x for key, x in u[(1, i)].items() if x} for i in range(k)]
    elif kind == "x":
        if label is None:
            raise ValueError("kind x needs a label")
        u = solve_family(lm, v, "x", m, label)
        out = [u[(0, i)] for i in range(k)]
    elif kind == "d1":
        if m == 0:
            out = [{} for _ in range(k)]        # d1(0) acts by the zero charge
        else:
            u = solve_family(lm, v, "d1", m)
            out = [{key: x / m for key, x in u[(0, i)].items()} for i in range(k)]
    else:
        out = _extract_L(lm, v, m)
    for vec in out:
        for key in [key for key, x in vec.items() if not x]:
            del vec[key]
    if W is not None:
        for vec in out:
            W.add(vec)
    return out


def _extract_L(lm: LoopModule, v: Vec, m: int) -> List[Vec]:
    """``L(m)`` per slot: the ``n^1`` coefficient of the skew family plus corrections.

    The correction ``mu c_i delta_(m,0) v`` comes from the ``k0`` shift in the
    skew action and ``(m/c_i) sum_j (1/j) d1(m-j) k1(j) v_i`` from the linear
    part of the d1 family; both are obtained by further extractions.
    """
    k = lm.k
    M = slot_depth_bound(lm, v)
    u = solve_family(lm, v, "L", m, M=M)
    out = [dict(u[(1, i)]) for i in range(k)]
    cfg = lm.cfg
    if m == 0:
        for i in range(k):
            vec_iadd(out[i], v, cfg.mu * cfg.weights[i].c)
        return out
    for j in range(m - M, M + 1):
        if j in (0, m):
            continue
        k1j = extract_components(lm, v, "k1", j)
        for i in range(k):
            if not k1j[i]:
                continue
            inner = extract_components(lm, k1j[i], "d1", m - j)[i]
            vec_iadd(out[i], inner, Fraction(m, j) / cfg.weights[i].c)
    return out


def direct_component(lm: LoopModule, v: Vec, kind: str, m: int, i: int,
                     label: Optional[str] = None) -> Vec:
    """The slot action computed directly from the f-bar modes (oracle for extraction)."""
    mode = (label if kind == "x" else kind, m)
    bm = lm.slots[i]
    out: Vec = {}
    for states, x in v.items():
        for s2, y in bm.fbar_mode(mode, states[i]).items():
            vec_iadd(out, {states[:i] + (s2,) + states[i + 1:]: y}, x)
    return out
