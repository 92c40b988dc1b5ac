"""The nullity-two toroidal algebra g~(mu) over a type A simple Lie algebra.

Elements are sparse dicts from basis keys to exact scalars.  Keys are tuples:

* ``("loop", x, m0, m1)``  for ``t0^m0 t1^m1 (x)`` with ``x`` a label of sl_{l+1}
* ``("central", a, m0, m1)`` for ``t0^m0 t1^m1 k_a`` in canonical form
* ``("skew", m0, m1)``  for the skew derivation ``d(m0, m1)``, ``(m0, m1) != (0, 0)``
* ``("deg", i)``  for ``d_i``

The centre is the space of Kahler differentials modulo exact forms; every
central output goes through :func:`kahler_reduce` so equality of elements
is plain dict equality.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Hashable, List, Tuple

from .exact.linalg import vec_iadd, vec_scale
from .exact.scalars import Scalar, format_scalar, parse_scalar

Key = Tuple
ToroidalElem = Dict[Key, Scalar]


# -- the finite simple algebra ---------------------------------------------------

class SimpleAlgebra:
    """sl_{l+1} in its matrix realization with the trace form.

    Basis labels are ``"Eij"`` (elementary matrix, i != j) and ``"Hi"``
    (``E_ii - E_{i+1,i+1}``), indices 1-based.  Finite roots are written in
    simple-root coordinates, so ``E13`` has root ``(1, 1)`` in sl_3.
    """

    def __init__(self, rank: int):
        if not 1 <= rank <= 8:
            raise ValueError("rank must lie in 1..8 (labels use single digits)")
        self.rank = rank
        self.n = rank + 1
        n = self.n
        pos = [f"E{i}{j}" for i in range(1, n + 1) for j in range(i + 1, n + 1)]
        neg = [f"E{j}{i}" for i in range(1, n + 1) for j in range(i + 1, n + 1)]
        cartan = [f"H{i}" for i in range(1, n)]
        self.positive = pos
        self.negative = neg
        self.cartan = cartan
        self.labels: List[str] = pos + cartan + neg
        self.index = {x: i for i, x in enumerate(self.labels)}
        self.dim = len(self.labels)
        self.dual_coxeter = n
        self._bracket_cache: Dict[Tuple[str, str], Dict[str, Fraction]] = {}

    def __repr__(self):
        return f"SimpleAlgebra(rank={self.rank})"

    def __eq__(self, other):
        return isinstance(other, SimpleAlgebra) and other.rank == self.rank

    def __hash__(self):
        return hash(("sl", self.rank))

    # matrices are dicts {(i, j): value}, 0-based
    def matrix(self, label: str) -> Dict[Tuple[int, int], Fraction]:
        if label[0] == "E":
            i, j = int(label[1]) - 1, int(label[2]) - 1
            return {(i, j): Fraction(1)}
        i = int(label[1:]) - 1
        return {(i, i): Fraction(1), (i + 1, i + 1): Fraction(-1)}

    def from_matrix(self, mat: Dict[Tuple[int, int], Fraction]) -> Dict[str, Fraction]:
        out: Dict[str, Fraction] = {}
        for (i, j), v in mat.items():
            if i != j and v:
                out[f"E{i + 1}{j + 1}"] = v
        # diagonal d_1..d_n with trace 0: coefficient of H_i is d_1 + ... + d_i
        run = Fraction(0)
        for i in range(self.n - 1):
            run += mat.get((i, i), 0)
            if run:
                out[f"H{i + 1}"] = run
        return out

    @staticmethod
    def _matmul(a, b):
        out: Dict[Tuple[int, int], Fraction] = {}
        for (i, j), x in a.items():
            for (k, l), y in b.items():
                if j == k:
                    out[(i, l)] = out.get((i, l), 0) + x * y
        return {k: v for k, v in out.items() if v}

    def bracket_basis(self, a: str, b: str) -> Dict[str, Fraction]:
        key = (a, b)
        hit = self._bracket_cache.get(key)
        if hit is None:
            ma, mb = self.matrix(a), self.matrix(b)
            ab, ba = self._matmul(ma, mb), self._matmul(mb, ma)
            diff = dict(ab)
            for k, v in ba.items():
                diff[k] = diff.get(k, 0) - v
            hit = self.from_matrix({k: v for k, v in diff.items() if v})
            self._bracket_cache[key] = hit
        return hit

    @lru_cache(maxsize=None)
    def form_basis(self, a: str, b: str) -> Fraction:
        prod = self._matmul(self.matrix(a), self.matrix(b))
        return sum((v for (i, j), v in prod.items() if i == j), Fraction(0))

    def bracket(self, x: Dict[str, Scalar], y: Dict[str, Scalar]) -> Dict[str, Scalar]:
        out: Dict[str, Scalar] = {}
        for a, p in x.items():
            for b, q in y.items():
                vec_iadd(out, self.bracket_basis(a, b), p * q)
        return out

    def form(self, x: Dict[str, Scalar], y: Dict[str, Scalar]) -> Scalar:
        total = Fraction(0)
        for a, p in x.items():
            for b, q in y.items():
                f = self.form_basis(a, b)
                if f:
                    total = total + f * p * q
        return total

    @lru_cache(maxsize=None)
    def root(self, label: str) -> Tuple[int, ...]:
        """Root of a basis label in simple-root coordinates (zero for Cartan labels)."""
        r = [0] * self.rank
        if label[0] == "E":
            i, j = int(label[1]), int(label[2])
            lo, hi, s = (i, j, 1) if i < j else (j, i, -1)
            for t in range(lo, hi):
                r[t - 1] = s
        return tuple(r)

    def transpose(self, label: str) -> str:
        return f"E{label[2]}{label[1]}" if label[0] == "E" else label

    @lru_cache(maxsize=None)
    def cartan_matrix(self) -> Tuple[Tuple[int, ...], ...]:
        n = self.rank
        return tuple(tuple(2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(n))
                     for i in range(n))

    def pair_root(self, i: int, eta: Tuple[int, ...]) -> int:
        """``alpha(H_{i+1})`` for the root ``alpha`` with simple-root coordinates ``eta``."""
        row = self.cartan_matrix()[i]
        return sum(row[j] * eta[j] for j in range(self.rank))

    @lru_cache(maxsize=None)
    def dual_basis(self) -> Dict[str, Dict[str, Fraction]]:
        """``x^a`` with ``<x_a, x^b> = delta_ab`` under the trace form."""
        from .exact.linalg import SparseMat, solve
        idx = {x: i for i, x in enumerate(self.labels)}
        n = self.dim
        gram = SparseMat(n, n, {i: {j: self.form_basis(a, b) for j, b in enumerate(self.labels)}
                                for i, a in enumerate(self.labels)})
        cols = solve(gram, [{i: Fraction(1)} for i in range(n)])
        return {a: {self.labels[j]: v for j, v in cols[idx[a]].items()} for a in self.labels}

    def highest_root_label(self) -> str:
        return f"E1{self.n}"


# -- configuration ---------------------------------------------------------------

@dataclass(frozen=True)
class AlgebraConfig:
    simple: SimpleAlgebra
    mu: Scalar = Fraction(0)
    # exponent of (m0 n1 - m1 n0) in the cocycle; anything but 2 is a fault injection
    cocycle_exponent: int = 2


@dataclass(frozen=True)
class Weight:
    finite: Tuple[int, ...]
    c0: int = 0
    c1: int = 0

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(tuple(a + b for a, b in zip(self.finite, other.finite)),
                      self.c0 + other.c0, self.c1 + other.c1)


# -- centre ----------------------------------------------------------------------

def kahler_reduce(a: int, m0: int, m1: int) -> ToroidalElem:
    """Canonical representative of ``t0^m0 t1^m1 k_a`` modulo exact forms."""
    if a not in (0, 1):
        raise ValueError(f"central index {a} not in (0, 1)")
    if m0 == 0 and m1 == 0:
        return {("central", a, 0, 0): Fraction(1)}
    if m0 != 0:
        if a == 1:
            return {("central", 1, m0, m1): Fraction(1)}
        return {("central", 1, m0, m1): Fraction(-m1, m0)} if m1 else {}
    return {("central", 0, 0, m1): Fraction(1)} if a == 0 else {}


def _central_sum(m0: int, m1: int, w0, w1) -> ToroidalElem:
    """``w0 t^m k0 + w1 t^m k1`` reduced."""
    out: ToroidalElem = {}
    if w0:
        vec_iadd(out, kahler_reduce(0, m0, m1), w0)
    if w1:
        vec_iadd(out, kahler_reduce(1, m0, m1), w1)
    return out


def key_degree(key: Key) -> Tuple[int, int]:
    kind = key[0]
    if kind in ("loop", "central"):
        return key[2], key[3]
    if kind == "skew":
        return key[1], key[2]
    return 0, 0


# -- bracket ---------------------------------------------------------------------

def bracket_keys(cfg: AlgebraConfig, p: Key, q: Key) -> ToroidalElem:
    """Bracket of two basis keys."""
    return _bracket_keys(cfg, p, q)


@lru_cache(maxsize=200000)
def _bracket_keys(cfg: AlgebraConfig, p: Key, q: Key) -> ToroidalElem:
    kp, kq = p[0], q[0]
    if kp == "central" or kq == "central":
        if kp == "skew" and kq == "central":
            return _skew_on_central(p[1], p[2], q[1], q[2], q[3])
        if kq == "skew" and kp == "central":
            return vec_scale(_skew_on_central(q[1], q[2], p[1], p[2], p[3]), -1)
        if kp == "deg" and kq == "central":
            return {q: Fraction(key_degree(q)[p[1]])} if key_degree(q)[p[1]] else {}
        if kq == "deg" and kp == "central":
            d = key_degree(p)[q[1]]
            return {p: Fraction(-d)} if d else {}
        return {}
    if kp == "deg" or kq == "deg":
        if kp == "deg" and kq == "deg":
            return {}
        if kp == "deg":
            d = key_degree(q)[p[1]]
            return {q: Fraction(d)} if d else {}
        d = key_degree(p)[q[1]]
        return {p: Fraction(-d)} if d else {}
    if kp == "loop" and kq == "loop":
        g = cfg.simple
        x, m0, m1 = p[1], p[2], p[3]
        y, n0, n1 = q[1], q[2], q[3]
        out: ToroidalElem = {}
        for z, v in g.bracket_basis(x, y).items():
            out[("loop", z, m0 + n0, m1 + n1)] = v
        f = g.form_basis(x, y)
        if f:
            vec_iadd(out, _central_sum(m0 + n0, m1 + n1, m0, m1), f)
        return out
    if kp == "skew" and kq == "loop":
        m0, m1 = p[1], p[2]
        n0, n1 = q[2], q[3]
        det = m0 * n1 - m1 * n0
        return {("loop", q[1], m0 + n0, m1 + n1): Fraction(det)} if det else {}
    if kp == "loop" and kq == "skew":
        return vec_scale(_bracket_keys(cfg, q, p), -1)
    # skew, skew
    m0, m1 = p[1], p[2]
    n0, n1 = q[1], q[2]
    det = m0 * n1 - m1 * n0
    if not det:
        return {}
    out = {}
    if (m0 + n0, m1 + n1) != (0, 0):
        out[("skew", m0 + n0, m1 + n1)] = Fraction(det)
    coeff = cfg.mu * det ** cfg.cocycle_exponent
    if coeff:
        vec_iadd(out, _central_sum(m0 + n0, m1 + n1, m0, m1), coeff)
    return out


def _skew_on_central(m0, m1, a, n0, n1) -> ToroidalElem:
    """``[d(m), t^n k_a]`` from the action of ``t^m d_i`` on one-forms."""
    det = m0 * n1 - m1 * n0
    out: ToroidalElem = {}
    if det:
        vec_iadd(out, kahler_reduce(a, m0 + n0, m1 + n1), det)
    w = m0 if a == 1 else -m1
    if w:
        vec_iadd(out, _central_sum(m0 + n0, m1 + n1, m0, m1), w)
    return out


def bracket(cfg: AlgebraConfig, e1: ToroidalElem, e2: ToroidalElem) -> ToroidalElem:
    out: ToroidalElem = {}
    for p, x in e1.items():
        for q, y in e2.items():
            b = _bracket_keys(cfg, p, q)
            if b:
                vec_iadd(out, b, x * y)
    return out


def jacobi_residual(cfg: AlgebraConfig, e1, e2, e3) -> ToroidalElem:
    out: ToroidalElem = {}
    vec_iadd(out, bracket(cfg, bracket(cfg, e1, e2), e3))
    vec_iadd(out, bracket(cfg, bracket(cfg, e2, e3), e1))
    vec_iadd(out, bracket(cfg, bracket(cfg, e3, e1), e2))
    return out


# -- invariant form --------------------------------------------------------------

def _form_keys(g: SimpleAlgebra, p: Key, q: Key) -> Fraction:
    kp, kq = p[0], q[0]
    if kp == "loop" and kq == "loop":
        if p[2] + q[2] == 0 and p[3] + q[3] == 0:
            return g.form_basis(p[1], q[1])
        return Fraction(0)
    if kp == "deg" and kq == "central":
        return Fraction(1) if q == ("central", p[1], 0, 0) else Fraction(0)
    if kp == "skew" and kq == "central":
        m0, m1 = p[1], p[2]
        a, n0, n1 = q[1], q[2], q[3]
        if m0 + n0 or m1 + n1:
            return Fraction(0)
        # d(m) = m0 t^m d1 - m1 t^m d0 paired through <t^m d_i, t^-m k_j> = delta_ij
        return Fraction(-m1 if a == 0 else m0)
    if kq in ("deg", "skew") and kp == "central":
        return _form_keys(g, q, p)
    return Fraction(0)


def invariant_form(cfg: AlgebraConfig, e1: ToroidalElem, e2: ToroidalElem) -> Scalar:
    total = Fraction(0)
    for p, x in e1.items():
        for q, y in e2.items():
            f = _form_keys(cfg.simple, p, q)
            if f:
                total = total + f * x * y
    return total


# -- roots -----------------------------------------------------------------------

def root_of(g: SimpleAlgebra, key: Key) -> Weight:
    m0, m1 = key_degree(key)
    fin = g.root(key[1]) if key[0] == "loop" else (0,) * g.rank
    return Weight(fin, m0, m1)


def _finite_sign(fin: Tuple[int, ...]) -> int:
    if any(fin):
        return 1 if max(fin) > 0 else -1
    return 0


def triangular_part(g: SimpleAlgebra, key: Key) -> str:
    """``"+"``, ``"0"`` or ``"-"`` for the triangular decomposition graded by d_0 and the finite root."""
    w = root_of(g, key)
    if w.c0 > 0 or (w.c0 == 0 and _finite_sign(w.finite) > 0):
        return "+"
    if w.c0 == 0 and _finite_sign(w.finite) == 0:
        return "0"
    return "-"


# -- enumeration -----------------------------------------------------------------

def basis_keys(g: SimpleAlgebra, bound: int, include_d1: bool = True) -> List[Key]:
    """All canonical keys with ``|m0|, |m1| <= bound``, deterministic order."""
    rng = range(-bound, bound + 1)
    keys: List[Key] = []
    for m0 in rng:
        for m1 in rng:
            for x in g.labels:
                keys.append(("loop", x, m0, m1))
            if (m0, m1) == (0, 0):
                keys += [("central", 0, 0, 0), ("central", 1, 0, 0)]
            elif m0 != 0:
                keys.append(("central", 1, m0, m1))
            else:
                keys.append(("central", 0, 0, m1))
            if (m0, m1) != (0, 0):
                keys.append(("skew", m0, m1))
    keys.append(("deg", 0))
    if include_d1:
        keys.append(("deg", 1))
    return keys


# -- text form -------------------------------------------------------------------

def format_key(key: Key) -> str:
    kind = key[0]
    if kind == "loop":
        parts = []
        for var, e in (("t0", key[2]), ("t1", key[3])):
            if e == 1:
                parts.append(var)
            elif e:
                parts.append(f"{var}^{e}")
        parts.append(key[1])
        return "*".join(parts)
    if kind == "central":
        return f"k{key[1]}({key[2]},{key[3]})"
    if kind == "skew":
        return f"d({key[1]},{key[2]})"
    return f"d{key[1]}"


def format_elem(e: ToroidalElem) -> str:
    if not e:
        return "0"
    out = []
    for key in sorted(e, key=_sort_key):
        c = e[key]
        body = format_key(key)
        text = format_scalar(c)
        neg = text.startswith("-") and " " not in text
        mag = text[1:] if neg else text
        if " " in mag:
            term = f"({mag})*{body}"
        elif mag == "1":
            term = body
        else:
            term = f"{mag}*{body}"
        out.append(("-" if neg else "+", term))
    s = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, term in out[1:]:
        s += f" {sign} {term}"
    return s


def _sort_key(key: Key):
    order = {"loop": 0, "central": 1, "skew": 2, "deg": 3}
    return (order[key[0]],) + tuple(str(x) if isinstance(x, str) else x for x in key[1:])


_MONO = re.compile(r"^(?:(t[01])(?:\^(-?\d+))?\*)?(?:(t[01])(?:\^(-?\d+))?\*)?([EH]\d+)$")
_CENTRAL = re.compile(r"^k([01])(?:\((-?\d+),(-?\d+)\))?$")
_SKEW = re.compile(r"^d\((-?\d+),(-?\d+)\)$")


def parse_monomial(text: str, g: SimpleAlgebra) -> ToroidalElem:
    s = text.replace(" ", "")
    m = _CENTRAL.match(s)
    if m:
        a = int(m.group(1))
        m0 = int(m.group(2) or 0)
        m1 = int(m.group(3) or 0)
        return kahler_reduce(a, m0, m1)
    m = _SKEW.match(s)
    if m:
        m0, m1 = int(m.group(1)), int(m.group(2))
        if (m0, m1) == (0, 0):
            return {}
        return {("skew", m0, m1): Fraction(1)}
    if s in ("d0", "d1"):
        return {("deg", int(s[1])): Fraction(1)}
    m = _MONO.match(s)
    if m:
        exps = {"t0": 0, "t1": 0}
        for var, e in ((m.group(1), m.group(2)), (m.group(3), m.group(4))):
            if var:
                exps[var] += int(e) if e is not None else 1
        label = m.group(5)
        if label not in g.index:
            raise ValueError(f"unknown label {label!r} for {g}")
        return {("loop", label, exps["t0"], exps["t1"]): Fraction(1)}
    raise ValueError(f"cannot parse monomial {text!r}")


def parse_elem(text: str, g: SimpleAlgebra, order: int | None = None) -> ToroidalElem:
    """Parse sums like ``"3/2*k1(2,3) - d(1,0) + (1/2*e - 1)*d0"``."""
    s = text.strip()
    if s == "0":
        return {}
    # split on top-level + / - that follow a complete term
    terms, depth, start = [], 0, 0
    for i, ch in enumerate(s):
        if ch in "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and i > 0 and s[i - 1] == " ":
            terms.append(s[start:i])
            start = i
    terms.append(s[start:])
    out: ToroidalElem = {}
    for t in terms:
        t = t.replace(" ", "")
        sign = 1
        if t[0] in "+-":
            sign = -1 if t[0] == "-" else 1
            t = t[1:]
        coeff: Scalar = Fraction(1)
        if t.startswith("("):
            close = t.index(")*")
            coeff = parse_scalar(t[1:close], order)
            t = t[close + 2:]
        else:
            m = re.match(r"^(\d+(?:/\d+)?)\*(.+)$", t)
            if m:
                coeff = Fraction(m.group(1))
                t = m.group(2)
        vec_iadd(out, parse_monomial(t, g), sign * coeff)
    return out
