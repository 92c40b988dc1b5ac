"""Vertex-operator calculus on V(Virasoro + affine) (x) Fock.

Two independent routes to the toroidal action are implemented:

* :class:`BilligModule.mode_action` uses the explicit operators
  ``x(m,n) = sum_j x(m-j) E_j(n)`` and friends on ``V (x) S(b_-)``;
* :func:`field_action` builds the fields ``Y(n,z)``, ``L(z)`` and the
  normal ordered products from a small field calculus and acts on
  ``V (x) S(b_-) (x) C[t1, t1^-1]``.

States are ``(g, f)`` or ``(g, f, l)`` with ``g`` a basis element of the
Virasoro + affine factor, ``f`` a Fock monomial and ``l`` the t1-degree.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

from .exact.linalg import vec_iadd
from .exact.scalars import Scalar, fast_vec
from .toroidal import SimpleAlgebra
from .viraffine import (HWParams, LazyIrreducible, Monomial, TruncatedHWModule, VAAlgebra,
                        VermaModule, tilde_kv)

Vec = Dict[Hashable, Scalar]

# z-exponent offsets: sum_m A(m,n) z^(-m - shift)
OPERATOR_SHIFT = {"k0": 0, "k1": 1, "x": 1, "barL": 2, "bark1": 2, "bard1": 2, "bard": 2}


# -- the phi polynomials ---------------------------------------------------------

@lru_cache(maxsize=None)
def _compositions(m: int, s: int) -> Tuple[Tuple[int, ...], ...]:
    if s == 0:
        return ((),) if m == 0 else ()
    out = []
    for first in range(1, m - s + 2):
        for rest in _compositions(m - first, s - 1):
            out.append((first,) + rest)
    return tuple(out)


def phi(sign: int, m: int, s: int, c: Scalar) -> Dict[Tuple[int, ...], Scalar]:
    """``phi^sign(m, s)`` as a polynomial in commuting k1 modes.

    Keys are sorted tuples of k1 modes (``+m_i`` for sign +1, ``-m_i`` for
    sign -1); values are exact coefficients.
    """
    if not c:
        raise ValueError("phi needs c != 0")
    if not 0 <= s <= m and not (m == 0 and s == 0):
        raise ValueError(f"need 0 <= s <= m, got m={m}, s={s}")
    if s == 0:
        return {(): Fraction(1)} if m == 0 else {}
    out: Dict[Tuple[int, ...], Scalar] = {}
    for comp in _compositions(m, s):
        coeff: Scalar = Fraction(1, factorial(s))
        for mi in comp:
            coeff = coeff * (-sign) / (c * mi)
        key = tuple(sorted(sign * mi for mi in comp))
        out[key] = out.get(key, 0) + coeff
    return {k: v for k, v in out.items() if v}


def phi_n(sign: int, m: int, n: int, c: Scalar) -> Dict[Tuple[int, ...], Scalar]:
    """``phi_n^sign(m) = sum_s n^s phi^sign(m, s)``."""
    out: Dict[Tuple[int, ...], Scalar] = {}
    for s in range(0, m + 1):
        if s == 0 and m:
            continue
        w = n ** s
        if w:
            vec_iadd(out, phi(sign, m, s, c), w)
    return out


def exp_series_coeff(sign: int, m: int, n: int, c: Scalar) -> Dict[Tuple[int, ...], Scalar]:
    """Coefficient of ``z^(-sign m)`` in ``E^sign(n, z)`` by direct power-series exponentiation.

    Independent of :func:`phi`; used as a test oracle.
    """
    # exponent X = sum_j a_j z^(-sign j) with a_j = n k1(sign j) / (-sign j c)
    series: List[Dict[Tuple[int, ...], Scalar]] = [{(): Fraction(1)}] + [{} for _ in range(m)]
    term = [{(): Fraction(1)}] + [{} for _ in range(m)]
    for k in range(1, m + 1):
        new = [{} for _ in range(m + 1)]
        for deg, poly in enumerate(term):
            for j in range(1, m - deg + 1):
                a = n / (-sign * j * c)
                for mono, v in poly.items():
                    key = tuple(sorted(mono + (sign * j,)))
                    new[deg + j][key] = new[deg + j].get(key, 0) + v * a / k
        term = new
        for deg in range(m + 1):
            vec_iadd(series[deg], term[deg])
    return {k: v for k, v in series[m].items() if v}


# -- factors -----------------------------------------------------------------------

class GFactor:
    """Virasoro + affine factor in one of three coordinate systems.

    ``verma``: PBW monomials of the Verma module (exact at every depth).
    ``gram``: irreducible quotient via Gram matrices on the window.
    ``lazy``: irreducible quotient via annihilator images, for deep windows.
    """

    def __init__(self, module, coords: str):
        if coords not in ("verma", "gram", "lazy"):
            raise ValueError(f"unknown coordinates {coords!r}")
        self.module = module
        self.verma = module.verma
        self.verma_coords = coords == "verma"
        self._cache: Dict[Tuple, Vec] = {}

    def depth(self, b) -> int:
        return self.verma.weight(b)[0] if self.verma_coords else b[0][0]

    def eta(self, b):
        return self.verma.weight(b)[1] if self.verma_coords else b[0][1]

    def act(self, key, b) -> Vec:
        hit = self._cache.get((key, b))
        if hit is None:
            if self.verma_coords:
                hit = self.verma.act(key, b)
            else:
                hit = fast_vec(self.module.act(key, {b: Fraction(1)}))
            self._cache[(key, b)] = hit
        return hit

    def vacuum(self):
        rank = self.verma.alg.simple.rank
        return () if self.verma_coords else ((0, (0,) * rank), 0)

    def basis(self) -> List:
        """Window basis: quotient representatives (as Verma monomials in Verma mode)."""
        if not self.verma_coords:
            return self.module.basis_vectors()
        out = []
        for w in self.module.weights:
            out += list(self.module.space(w).reps)
        return out


class Fock:
    """Fock module of the Heisenberg pair (k1, d1) with K0 = c and zero charges."""

    def __init__(self, simple: SimpleAlgebra, c: Scalar):
        if not c:
            raise ValueError("Fock module needs c != 0")
        self.c = c
        params = HWParams((Fraction(0),) * simple.rank, c)
        self.verma = VermaModule(VAAlgebra(simple, ("heis",)), params)
        self._e_cache: Dict[Tuple[int, int, Monomial], Vec] = {}
        self._phi_cache: Dict[Tuple[int, int, int], Dict] = {}

    def depth(self, f: Monomial) -> int:
        return -sum(k[1] for k in f)

    def act(self, key, f: Monomial) -> Vec:
        return self.verma.act(key, f)

    def apply_poly(self, poly: Dict[Tuple[int, ...], Scalar], f: Monomial) -> Vec:
        out: Vec = {}
        for modes, coeff in poly.items():
            v = {f: Fraction(1)}
            for p in modes:
                v = self.verma.act_vec(("k1", p), v)
                if not v:
                    break
            if v:
                vec_iadd(out, v, coeff)
        return out

    def phi_n(self, sign, m, n):
        key = (sign, m, n)
        hit = self._phi_cache.get(key)
        if hit is None:
            hit = phi_n(sign, m, n, self.c)
            self._phi_cache[key] = hit
        return hit

    def e_coeff(self, n: int, j: int, f: Monomial) -> Vec:
        """``E_j(n) f``: sum over m2 - m1 = j of phi_n^-(m1) phi_n^+(m2)."""
        key = (n, j, f)
        hit = self._e_cache.get(key)
        if hit is not None:
            return hit
        out: Vec = {}
        if n == 0:
            out = {f: Fraction(1)} if j == 0 else {}
        else:
            for m2 in range(max(0, j), self.depth(f) + 1):
                mid = self.apply_poly(self.phi_n(1, m2, n), f)
                for f2, x in mid.items():
                    vec_iadd(out, self.apply_poly(self.phi_n(-1, m2 - j, n), f2), x)
        out = fast_vec(out)
        self._e_cache[key] = out
        return out

    def basis(self, D: int) -> List[Monomial]:
        return [m for ms in self.verma.verma_basis(D, 0).values() for m in ms]


def e_coeff(fock: Fock, n: int, j: int, f: Monomial) -> Vec:
    return fock.e_coeff(n, j, f)


def billig_operator(module: "BilligModule", label: str, m: int, n: int) -> Callable[[Vec], Vec]:
    """The operator ``label(m, n)`` as a function on vectors of ``module``."""
    if label not in OPERATOR_SHIFT and label not in module.simple.labels:
        raise ValueError(f"unknown operator label {label!r}")
    return lambda v: module.op_vec(label, m, n, v)


# -- the module ---------------------------------------------------------------------

class BilligModule:
    """``V(Virasoro + affine) (x) S(b_-)`` with the toroidal operator families.

    ``lam`` gives the values on H_1..H_l, ``c`` the level, ``mu`` the cocycle
    parameter.  ``coords`` selects the first factor: the Verma module
    (``verma``) or the irreducible quotient on the window ``(D, H)``
    computed by Gram matrices (``gram``) or lazily (``lazy``, exact up to
    ``work_depth``).
    """

    def __init__(self, simple: SimpleAlgebra, lam: Sequence[Scalar], c: Scalar,
                 d0val: Scalar = Fraction(0), mu: Scalar = Fraction(0), D: int = 2, H: int = 2,
                 coords: str = "verma", work_depth: Optional[int] = None):
        if not c:
            raise ValueError("c = lambda(k0) must be nonzero")
        self.simple = simple
        self.c = c
        self.mu = mu
        self.d0val = d0val
        self.D = D
        self.H = H
        self.lam = tuple(lam)
        params = HWParams(self.lam, c, d0val, tilde_kv(c, mu))
        alg = VAAlgebra(simple, ("vir", "affine"))
        if coords == "lazy":
            self.gmod = LazyIrreducible(alg, params, D, H, work_depth)
        else:
            self.gmod = TruncatedHWModule(alg, params, D, H)
        self.g = GFactor(self.gmod, coords)
        self.fock = Fock(simple, c)
        self._op_cache: Dict[Tuple, Vec] = {}

    # -- bookkeeping ------------------------------------------------------------
    def depth(self, state) -> int:
        return self.g.depth(state[0]) + self.fock.depth(state[1])

    def vacuum(self):
        return (self.g.vacuum(), ())

    def basis(self, D: Optional[int] = None) -> List[Tuple]:
        """Window basis states of total depth <= D (default: the module window)."""
        D = self.D if D is None else D
        gb = self.g.basis()
        fb = self.fock.basis(D)
        out = []
        for g in gb:
            dg = self.g.depth(g)
            for f in fb:
                if dg + self.fock.depth(f) <= D:
                    out.append((g, f))
        return out

    def _tensor_g(self, vg: Vec, f, coeff, out):
        for g2, x in vg.items():
            key = (g2, f)
            val = out.get(key, 0) + coeff * x
            if val:
                out[key] = val
            else:
                out.pop(key, None)

    # -- Fourier modes ----------------------------------------------------------
    def op(self, label: str, m: int, n: int, state) -> Vec:
        """One of ``k0, k1, bark1, bard1, barL, bard`` or a simple label, at ``(m, n)``."""
        key = (label, m, n, state)
        hit = self._op_cache.get(key)
        if hit is None:
            hit = fast_vec(self._op(label, m, n, state))
            self._op_cache[key] = hit
        return hit

    def _j_range(self, m: int, state) -> range:
        gd, fd = self.g.depth(state[0]), self.fock.depth(state[1])
        return range(m - max(gd, fd), fd + 1)

    def _op(self, label, m, n, state) -> Vec:
        g, f = state
        fock = self.fock
        out: Vec = {}
        if label == "k0":
            for f2, x in fock.e_coeff(n, m, f).items():
                out[(g, f2)] = self.c * x
            return out
        if label == "bard":
            if n:
                vec_iadd(out, self.op("barL", m, n, state), n)
                if self.mu:
                    vec_iadd(out, self.op("bark1", m, n, state), n * n * self.mu)
            vec_iadd(out, self.op("bard1", m, n, state), -1)
            return out
        for j in self._j_range(m, state):
            p = m - j
            if label in ("k1", "bark1"):
                w = Fraction(1) if label == "k1" else Fraction(-p)
                if not w or p == 0:
                    continue  # k1(0) acts by zero
                for f2, x in fock.e_coeff(n, j, f).items():
                    for f3, y in fock.act(("k1", p), f2).items():
                        vec_iadd(out, {(g, f3): w * x * y})
            elif label == "bard1":
                if p == 0:
                    continue
                if p < 0:   # d1(p) placed left
                    for f2, x in fock.e_coeff(n, j, f).items():
                        for f3, y in fock.act(("d1", p), f2).items():
                            vec_iadd(out, {(g, f3): -p * x * y})
                else:
                    for f2, x in fock.act(("d1", p), f).items():
                        for f3, y in fock.e_coeff(n, j, f2).items():
                            vec_iadd(out, {(g, f3): -p * x * y})
            else:
                gkey = ("L", p) if label == "barL" else (label, p)
                vg = self.g.act(gkey, g)
                if not vg:
                    continue
                for f2, x in fock.e_coeff(n, j, f).items():
                    self._tensor_g(vg, f2, x, out)
        return out

    def op_vec(self, label, m, n, v: Vec) -> Vec:
        out: Vec = {}
        for s, x in v.items():
            vec_iadd(out, self.op(label, m, n, s), x)
        return out

    # -- the toroidal action ----------------------------------------------------
    def mode_key(self, key, state) -> Vec:
        kind = key[0]
        if kind == "loop":
            return self.op(key[1], key[2], key[3], state)
        if kind == "central":
            a, m0, m1 = key[1], key[2], key[3]
            return self.op("k1" if a == 1 else "k0", m0, m1, state)
        if kind == "skew":
            m0, m1 = key[1], key[2]
            out = dict(self.op("bard", m0, m1, state))
            if m1 and self.mu:
                vec_iadd(out, self.op("k0", m0, m1, state), -m1 * self.mu)
            return out
        if key == ("deg", 0):
            return {state: self.d0val - self.depth(state)}
        raise ValueError("d1 is not in the subalgebra acting on the highest weight module")

    def mode_action(self, elem: Dict, v: Vec) -> Vec:
        out: Vec = {}
        for key, a in elem.items():
            for s, x in v.items():
                vec_iadd(out, self.mode_key(key, s), a * x)
        return out

    # -- raw f-bar modes on the tensor product ----------------------------------
    def fbar_mode(self, key, state) -> Vec:
        """An f-bar mode acting on ``V (x) S(b_-)``; L includes the Fock Sugawara term."""
        g, f = state
        label, m = key
        out: Vec = {}
        if label in ("k1", "d1"):
            for f2, x in self.fock.act(key, f).items():
                out[(g, f2)] = x
            return out
        self._tensor_g(self.g.act(key, g), f, Fraction(1), out)
        if label == "L":
            fd = self.fock.depth(f)
            for a in range(m - fd, fd + 1):
                b = m - a
                if a == 0 or b == 0:
                    continue   # zero charges
                word = [("d1", a), ("k1", b)] if a < 0 else [("k1", b), ("d1", a)]
                r = self.fock.verma.act_word(word, {f: Fraction(1)})
                for f2, x in r.items():
                    vec_iadd(out, {(g, f2): x / self.c})
        return out

    def fbar_vec(self, key, v: Vec) -> Vec:
        out: Vec = {}
        for s, x in v.items():
            vec_iadd(out, self.fbar_mode(key, s), x)
        return out


# -- field calculus on V (x) S(b_-) (x) C[t1^+-1] ------------------------------------

class Field:
    """``A(z) = sum_p A(p) z^(-p-h)`` given by a mode function on basis states."""

    def __init__(self, h: int, mode: Callable[[int, Hashable], Vec], name: str = ""):
        self.h = h
        self.mode = mode
        self.name = name

    def apply(self, p: int, v: Vec) -> Vec:
        out: Vec = {}
        for s, x in v.items():
            r = self.mode(p, s)
            if r:
                vec_iadd(out, r, x)
        return out


class FieldModule:
    """States ``(g, f, l)``; ``d1(0)`` reads ``l`` and ``k1(0)`` is zero."""

    def __init__(self, bm: BilligModule):
        self.bm = bm
        self.c = bm.c
        self.mu = bm.mu

    def depth(self, s) -> int:
        return self.bm.depth((s[0], s[1]))

    # primitive fields
    def heis(self, label):
        bm = self.bm

        def mode(p, s):
            g, f, l = s
            if p == 0:
                return {s: Fraction(l)} if (label == "d1" and l) else {}
            return {(g, f2, l): x for f2, x in bm.fock.act((label, p), f).items()}
        return Field(1, mode, label)

    def gfield(self, label, h):
        bm = self.bm

        def mode(p, s):
            g, f, l = s
            return {(g2, f, l): x for g2, x in bm.g.act((label, p), g).items()}
        return Field(h, mode, label)

    def Y(self, n: int) -> Field:
        bm = self.bm

        def mode(j, s):
            g, f, l = s
            return {(g, f2, l + n): x for f2, x in bm.fock.e_coeff(n, j, f).items()}
        return Field(0, mode, f"Y({n})")

    # combinators
    def nop(self, A: Field, B: Field) -> Field:
        """Normal ordered product; ``A(p)`` is placed left when ``p <= -h_A``."""

        def mode(m, s):
            d = self.depth(s)
            out: Vec = {}
            # left terms need p >= m - d, right terms need 1 - h_A <= p <= d
            for p in range(min(m - d, 1 - A.h), d + 1):
                if p <= -A.h:
                    r = A.apply(p, B.mode(m - p, s))
                else:
                    r = B.apply(m - p, A.mode(p, s))
                if r:
                    vec_iadd(out, r)
            return out
        return Field(A.h + B.h, mode, f":{A.name}{B.name}:")

    def product(self, A: Field, B: Field) -> Field:
        """Plain product ``A(z)B(z)`` of commuting fields."""

        def mode(m, s):
            d = self.depth(s)
            out: Vec = {}
            for p in range(m - d, d + 1):
                r = A.apply(p, B.mode(m - p, s))
                if r:
                    vec_iadd(out, r)
            return out
        return Field(A.h + B.h, mode, f"{A.name}{B.name}")

    @staticmethod
    def deriv(A: Field) -> Field:
        return Field(A.h + 1, lambda p, s: _scaled(A.mode(p, s), -p - A.h), f"d{A.name}")

    @staticmethod
    def zdress(A: Field) -> Field:
        """``(z^-1 + d/dz) A``."""
        return Field(A.h + 1, lambda p, s: _scaled(A.mode(p, s), 1 - p - A.h), f"D{A.name}")

    @staticmethod
    def combo(terms: Sequence[Tuple[Scalar, Field]], h: int) -> Field:
        def mode(p, s):
            out: Vec = {}
            for w, F in terms:
                if w:
                    vec_iadd(out, F.mode(p, s), w)
            return out
        return Field(h, mode, "+".join(F.name for _, F in terms))

    # composite fields
    def L_total(self) -> Field:
        """``L_gbar(z) + (1/c) :d1(z) k1(z):``."""
        return self.combo([(Fraction(1), self.gfield("L", 2)),
                           (1 / self.c, self.nop(self.heis("d1"), self.heis("k1")))], 2)

    def dhat_field(self, n: int) -> Field:
        c, mu = self.c, self.mu
        Y = self.Y(n)
        terms = [(Fraction(n), self.nop(self.L_total(), Y)),
                 (n * n * (mu - 1 / c), self.product(self.deriv(self.heis("k1")), Y)),
                 (Fraction(-1), self.zdress(self.nop(self.heis("d1"), Y)))]
        return self.combo(terms, 2)


def _scaled(v: Vec, w) -> Vec:
    if not w:
        return {}
    return {k: w * x for k, x in v.items()}


def field_key(tm: FieldModule, key, s) -> Vec:
    """Action of one canonical toroidal key on a state ``(g, f, l)``."""
    kind = key[0]
    c, mu = tm.c, tm.mu
    if kind == "deg":
        if key[1] == 1:
            return {s: Fraction(s[2])} if s[2] else {}
        return {s: tm.bm.d0val - tm.depth(s)}
    if kind == "central":
        a, m0, m1 = key[1], key[2], key[3]
        Y = tm.Y(m1)
        if a == 0:
            return _scaled(Y.mode(m0, s), c)
        return tm.product(tm.heis("k1"), Y).mode(m0, s)
    if kind == "loop":
        x, m0, m1 = key[1], key[2], key[3]
        return tm.product(tm.gfield(x, 1), tm.Y(m1)).mode(m0, s)
    # skew: d(m,n) = dhat(m,n) - n mu (m+1) t0^m t1^n k0
    m0, m1 = key[1], key[2]
    out = dict(tm.dhat_field(m1).mode(m0, s))
    w = m1 * mu * (m0 + 1)
    if w:
        vec_iadd(out, tm.Y(m1).mode(m0, s), -w * c)
    return out


def field_action(tm: FieldModule, elem: Dict, v: Vec) -> Vec:
    out: Vec = {}
    for key, a in elem.items():
        for s, x in v.items():
            vec_iadd(out, field_key(tm, key, s), a * x)
    return out


def quasi_assoc_residual(tm: FieldModule, n: int, m: int, s) -> Vec:
    """Mode ``m`` of ``::d1 k1: Y: - :d1 :k1 Y:: - n (dk1) Y`` applied to ``s``."""
    d1, k1, Y = tm.heis("d1"), tm.heis("k1"), tm.Y(n)
    lhs = tm.nop(tm.nop(d1, k1), Y).mode(m, s)
    rhs = tm.nop(d1, tm.nop(k1, Y)).mode(m, s)
    extra = tm.product(tm.deriv(k1), Y).mode(m, s)
    out: Vec = dict(lhs)
    vec_iadd(out, rhs, -1)
    vec_iadd(out, extra, -n)
    return out
