"""The Virasoro-affine algebra f-bar and its truncated highest weight modules.

A mode key is a tuple ``(label, m)`` where ``label`` is ``"L"``, a label of
sl_{l+1}, ``"k1"`` or ``"d1"``.  The central elements ``K0`` and ``Kv`` act
by the scalars ``c`` and ``kv`` of the highest weight.

Module vectors live in PBW coordinates: a monomial is a sorted tuple of
creation keys meaning ``y1 y2 ... yk v``, sorted by mode descending and then
by the label order L < simple labels < k1 < d1.  The same engine serves the
subalgebras used in the construction (Virasoro, affine, Virasoro + affine,
Heisenberg) by restricting the label set.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .exact.linalg import SparseMat, rref, solve, vec_iadd
from .exact.scalars import Scalar, fast_vec
from .toroidal import SimpleAlgebra

ModeKey = Tuple[str, int]
Monomial = Tuple[ModeKey, ...]
Vec = Dict[Monomial, Scalar]
WeightKey = Tuple[int, Tuple[int, ...]]   # (depth, finite shift eta in simple roots)

PARTS = ("vir", "affine", "heis")


class TruncationEscape(RuntimeError):
    """An action left the truncation window; the computation is inconclusive."""


@dataclass(frozen=True)
class HWParams:
    """Highest weight data: ``lam`` lists the values on H_1..H_l."""
    lam: Tuple[Scalar, ...]
    c: Scalar
    d0val: Scalar = Fraction(0)
    kv: Scalar = Fraction(0)
    k1val: Scalar = Fraction(0)
    d1val: Scalar = Fraction(0)


def barlambda_from_lambda(lam: Sequence[Scalar], c: Scalar, d0val: Scalar, mu: Scalar) -> HWParams:
    """The f-bar weight attached to an affine weight: ``kv = 24 mu c`` and zero on k1, d1."""
    return HWParams(tuple(Fraction(x) if isinstance(x, int) else x for x in lam),
                    c, d0val, 24 * mu * c, Fraction(0), Fraction(0))


def tilde_kv(c: Scalar, mu: Scalar) -> Scalar:
    """Virasoro charge of the Virasoro + affine factor, ``24 mu c - 2``."""
    return 24 * mu * c - 2


class VAAlgebra:
    """f-bar, or one of its subalgebras selected by ``parts``."""

    def __init__(self, simple: SimpleAlgebra, parts: Iterable[str] = PARTS):
        parts = frozenset(parts)
        if not parts <= set(PARTS):
            raise ValueError(f"unknown parts {set(parts) - set(PARTS)}")
        self.simple = simple
        self.parts = parts
        labels: List[str] = []
        if "vir" in parts:
            labels.append("L")
        if "affine" in parts:
            labels += simple.labels
        if "heis" in parts:
            labels += ["k1", "d1"]
        self.labels = labels
        self.label_index = {x: i for i, x in enumerate(labels)}
        self._neg_roots = set(simple.negative)
        self._pos_roots = set(simple.positive)
        self._theta_height = simple.rank
        self._bracket_cache: Dict[Tuple[ModeKey, ModeKey], tuple] = {}

    def __repr__(self):
        return f"VAAlgebra({self.simple!r}, {sorted(self.parts)})"

    # -- classification ---------------------------------------------------------
    def sort_key(self, key: ModeKey):
        return (-key[1], self.label_index[key[0]])

    def kind(self, key: ModeKey) -> str:
        """``"cre"``, ``"ann"`` or ``"cartan"`` for the triangular decomposition."""
        label, m = key
        if m < 0:
            return "cre"
        if m > 0:
            return "ann"
        if label in self._neg_roots:
            return "cre"
        if label in self._pos_roots:
            return "ann"
        return "cartan"

    def root(self, key: ModeKey) -> Tuple[int, ...]:
        label = key[0]
        if label in ("L", "k1", "d1"):
            return (0,) * self.simple.rank
        return self.simple.root(label)

    def omega(self, key: ModeKey) -> ModeKey:
        """Anti-involution used for the contravariant form."""
        label, m = key
        if label == "k1":
            return ("d1", -m)
        if label == "d1":
            return ("k1", -m)
        if label == "L":
            return ("L", -m)
        return (self.simple.transpose(label), -m)

    # -- bracket ----------------------------------------------------------------
    def bracket(self, a: ModeKey, b: ModeKey):
        """``[a, b]`` as ``(dict key -> coeff, K0 coefficient, Kv coefficient)``."""
        hit = self._bracket_cache.get((a, b))
        if hit is None:
            hit = self._bracket(a, b)
            self._bracket_cache[(a, b)] = hit
        return hit

    def _bracket(self, a: ModeKey, b: ModeKey):
        (x, m), (y, n) = a, b
        zero = Fraction(0)
        if x == "L" and y == "L":
            out = {("L", m + n): Fraction(m - n)} if m != n else {}
            kv = Fraction(m ** 3 - m, 12) if m + n == 0 else zero
            return out, zero, kv
        if x == "L":
            return ({(y, m + n): Fraction(-n)} if n else {}), zero, zero
        if y == "L":
            return ({(x, m + n): Fraction(m)} if m else {}), zero, zero
        xb, yb = x in ("k1", "d1"), y in ("k1", "d1")
        if xb != yb:
            return {}, zero, zero
        if xb:
            k0 = Fraction(m) if (m + n == 0 and x != y) else zero
            return {}, k0, zero
        g = self.simple
        out = {(z, m + n): v for z, v in g.bracket_basis(x, y).items()}
        k0 = m * g.form_basis(x, y) if m + n == 0 else zero
        return out, Fraction(k0), zero


def fbar_bracket(alg: VAAlgebra, a: ModeKey, b: ModeKey) -> Dict:
    """Bracket with central terms spelled out as keys ``"K0"`` and ``"Kv"``."""
    out, k0, kv = alg.bracket(a, b)
    res: Dict = dict(out)
    if k0:
        res["K0"] = k0
    if kv:
        res["Kv"] = kv
    return res


# -- Verma modules -------------------------------------------------------------------

class VermaModule:
    """Verma module over a :class:`VAAlgebra` in PBW coordinates."""

    def __init__(self, alg: VAAlgebra, params: HWParams):
        if len(params.lam) != alg.simple.rank:
            raise ValueError("highest weight has the wrong number of finite labels")
        self.alg = alg
        self.params = params
        self._memo: Dict[Tuple[ModeKey, Monomial], Vec] = {}
        self._gram: Dict[WeightKey, Tuple[List[Monomial], Dict]] = {}
        self._by_weight: Optional[Dict[WeightKey, List[Monomial]]] = None

    # -- weights ----------------------------------------------------------------
    def weight(self, mon: Monomial) -> WeightKey:
        depth = 0
        eta = [0] * self.alg.simple.rank
        for key in mon:
            depth -= key[1]
            for i, r in enumerate(self.alg.root(key)):
                eta[i] -= r
        return depth, tuple(eta)

    def cartan_value(self, key: ModeKey, w: WeightKey) -> Scalar:
        label = key[0]
        p = self.params
        depth, eta = w
        if label == "L":
            return -p.d0val + depth
        if label == "k1":
            return p.k1val
        if label == "d1":
            return p.d1val
        i = int(label[1:]) - 1
        return p.lam[i] - self.alg.simple.pair_root(i, eta)

    # -- straightening ----------------------------------------------------------
    def act(self, key: ModeKey, mon: Monomial) -> Vec:
        """``key . mon`` in PBW coordinates."""
        memo_key = (key, mon)
        hit = self._memo.get(memo_key)
        if hit is not None:
            return hit
        alg = self.alg
        kind = alg.kind(key)
        if kind == "cartan":
            val = self.cartan_value(key, self.weight(mon))
            res = {mon: val} if val else {}
        elif not mon:
            res = {(key,): Fraction(1)} if kind == "cre" else {}
        elif kind == "cre" and alg.sort_key(key) <= alg.sort_key(mon[0]):
            res = {(key,) + mon: Fraction(1)}
        else:
            y1, rest = mon[0], mon[1:]
            res = {}
            for m2, c2 in self.act(key, rest).items():
                vec_iadd(res, self.act(y1, m2), c2)
            br, k0, kv = alg.bracket(key, y1)
            scal = k0 * self.params.c + kv * self.params.kv
            if scal:
                vec_iadd(res, {rest: scal})
            for z, cz in br.items():
                vec_iadd(res, self.act(z, rest), cz)
        res = fast_vec(res)
        self._memo[memo_key] = res
        return res

    def act_vec(self, key: ModeKey, v: Vec) -> Vec:
        out: Vec = {}
        for mon, x in v.items():
            vec_iadd(out, self.act(key, mon), x)
        return out

    def act_word(self, word: Sequence[ModeKey], v: Vec) -> Vec:
        """Apply ``word[-1]`` first, as for the product ``word[0] ... word[-1]``."""
        for key in reversed(word):
            v = self.act_vec(key, v)
        return v

    # -- enumeration ------------------------------------------------------------
    def creation_keys(self, depth: int) -> List[ModeKey]:
        keys: List[ModeKey] = []
        if "affine" in self.alg.parts:
            keys += [(x, 0) for x in self.alg.simple.negative]
        for m in range(1, depth + 1):
            keys += [(x, -m) for x in self.alg.labels]
        return sorted(keys, key=self.alg.sort_key)

    def verma_basis(self, D: int, H: int) -> Dict[WeightKey, List[Monomial]]:
        """All PBW monomials of depth <= D whose finite shift has height <= H, by weight.

        Weight spaces are complete: every monomial of a listed weight is included.
        """
        alg = self.alg
        rank = alg.simple.rank
        theta = alg._theta_height
        neg_modes = [k for k in self.creation_keys(D) if k[1] < 0]
        zero_modes = [k for k in self.creation_keys(D) if k[1] == 0]
        out: Dict[WeightKey, List[Monomial]] = {}

        def parts_of(budget, keys, start):
            # multisets of negative-mode keys with total depth <= budget
            yield ()
            for i in range(start, len(keys)):
                k = keys[i]
                if -k[1] <= budget:
                    for rest in parts_of(budget + k[1], keys, i):
                        yield (k,) + rest

        for neg in parts_of(D, neg_modes, 0):
            depth = -sum(k[1] for k in neg)
            max_zero = H + theta * len(neg)
            zero_lists = [()]
            for size in range(1, max_zero + 1):
                zero_lists += list(combinations_with_replacement(zero_modes, size))
            for zl in zero_lists:
                if sum(sum(alg.root(k)) for k in zl) < -max_zero:
                    continue
                mon = tuple(sorted(zl + neg, key=alg.sort_key))
                w = self.weight(mon)
                if sum(w[1]) > H:
                    continue
                out.setdefault(w, []).append(mon)
        for w in out:
            out[w] = sorted(set(out[w]), key=lambda m: [alg.sort_key(k) for k in m])
        return dict(sorted(out.items()))

    # -- contravariant form -----------------------------------------------------
    def pair_monomial(self, u: Monomial, w: Vec) -> Scalar:
        """``B(u, w)``: apply omega of the factors of ``u`` left to right, read off v."""
        for key in u:
            w = self.act_vec(self.alg.omega(key), w)
            if not w:
                return Fraction(0)
        return w.get((), Fraction(0))

    def contravariant_form(self, u: Vec, w: Vec) -> Scalar:
        total = Fraction(0)
        for mon, x in u.items():
            val = self.pair_monomial(mon, w)
            if val:
                total = total + x * val
        return total

    def gram(self, basis: List[Monomial]) -> SparseMat:
        n = len(basis)
        rows = {}
        for i, u in enumerate(basis):
            rows[i] = {j: self.pair_monomial(u, {w: Fraction(1)}) for j, w in enumerate(basis)}
        return SparseMat(n, n, rows)


# -- irreducible quotient -----------------------------------------------------------

@dataclass
class QuotientSpace:
    """Coordinates on one weight space of the irreducible quotient.

    ``reps`` are Verma monomials whose images form a basis; ``proj`` sends a
    Verma monomial of this weight to its coordinates over ``reps``.
    """
    weight: WeightKey
    verma: List[Monomial]
    reps: List[Monomial]
    proj: Dict[Monomial, Dict[int, Scalar]]


class TruncatedHWModule:
    """Irreducible highest weight module realized on weights of depth <= D, height <= H.

    Vectors are dicts keyed by ``(weight, index)`` pairs, ``index`` into the
    representative list of that weight.  Actions go through the Verma module
    and are projected back; leaving the window raises :class:`TruncationEscape`.
    """

    def __init__(self, alg: VAAlgebra, params: HWParams, D: int, H: int):
        self.verma = VermaModule(alg, params)
        self.alg = alg
        self.params = params
        self.D = D
        self.H = H
        self.weights = self.verma.verma_basis(D, H)
        self.spaces: Dict[WeightKey, QuotientSpace] = {}

    def in_window(self, w: WeightKey) -> bool:
        return 0 <= w[0] <= self.D and sum(w[1]) <= self.H

    def space(self, w: WeightKey) -> QuotientSpace:
        sp = self.spaces.get(w)
        if sp is None:
            if not self.in_window(w):
                raise TruncationEscape(f"weight {w} outside window D={self.D}, H={self.H}")
            basis = self.weights.get(w, [])
            sp = self._quotient(w, basis)
            self.spaces[w] = sp
        return sp

    def _quotient(self, w: WeightKey, basis: List[Monomial]) -> QuotientSpace:
        if not basis:
            return QuotientSpace(w, [], [], {})
        g = self.verma.gram(basis)
        _, pivots = rref(g)
        reps = [basis[j] for j in pivots]
        if not pivots:
            return QuotientSpace(w, basis, [], {u: {} for u in basis})
        r = len(pivots)
        gss = SparseMat(r, r, {a: {b: g[pivots[a], pivots[b]] for b in range(r)} for a in range(r)})
        # column j of G restricted to pivot rows, solved against G_SS
        cols = solve(gss, [{a: g[pivots[a], j] for a in range(r)} for j in range(len(basis))])
        proj = {basis[j]: cols[j] for j in range(len(basis))}
        return QuotientSpace(w, basis, reps, proj)

    def dim(self, w: WeightKey) -> int:
        return len(self.space(w).reps)

    def project(self, v: Vec) -> Dict[Tuple[WeightKey, int], Scalar]:
        """Verma vector to quotient coordinates."""
        out: Dict[Tuple[WeightKey, int], Scalar] = {}
        for mon, x in v.items():
            w = self.verma.weight(mon)
            sp = self.space(w)
            if mon not in sp.proj:
                raise TruncationEscape(f"monomial {mon} not enumerated in window")
            for i, y in sp.proj[mon].items():
                key = (w, i)
                val = out.get(key, 0) + x * y
                if val:
                    out[key] = val
                else:
                    out.pop(key, None)
        return out

    def lift(self, q: Dict[Tuple[WeightKey, int], Scalar]) -> Vec:
        out: Vec = {}
        for (w, i), x in q.items():
            mon = self.space(w).reps[i]
            out[mon] = out.get(mon, 0) + x
        return {k: v for k, v in out.items() if v}

    def act(self, key: ModeKey, q):
        return self.project(self.verma.act_vec(key, self.lift(q)))

    def basis_vectors(self) -> List[Tuple[WeightKey, int]]:
        out = []
        for w in self.weights:
            out += [(w, i) for i in range(self.dim(w))]
        return out

    def highest_weight_vector(self):
        return {((0, (0,) * self.alg.simple.rank), 0): Fraction(1)}

    def multiplicity_rows(self):
        """``(depth, finite weight, dim_verma, dim_irreducible)`` per weight in window."""
        rows = []
        g = self.alg.simple
        for w, basis in self.weights.items():
            depth, eta = w
            fin = tuple(self.params.lam[i] - g.pair_root(i, eta) for i in range(g.rank))
            rows.append((depth, fin, len(basis), self.dim(w)))
        return rows


class _CoordSolver:
    """Echelon rows that remember how they combine the representatives of a weight."""

    def __init__(self):
        self.rows: Dict = {}        # pivot -> (row, combination over representatives)
        self.size = 0

    def reduce(self, r: Dict):
        r = dict(r)
        combo: Dict[int, Scalar] = {}
        for p in [k for k in r if k in self.rows]:
            x = r.get(p)
            if x:
                row, cmb = self.rows[p]
                vec_iadd(r, row, -x)
                vec_iadd(combo, cmb, x)
        return r, combo

    def add(self, r: Dict) -> bool:
        res, combo = self.reduce(r)
        if not res:
            return False
        t = self.size
        self.size += 1
        cmb = {t: Fraction(1)}
        vec_iadd(cmb, combo, -1)
        p = min(res, key=repr)
        inv = 1 / res[p]
        res = {k: x * inv for k, x in res.items()}
        cmb = {k: x * inv for k, x in cmb.items()}
        for q, (row, c) in self.rows.items():
            x = row.get(p)
            if x:
                vec_iadd(row, res, -x)
                vec_iadd(c, cmb, -x)
        self.rows[p] = (res, cmb)
        return True

    def coords(self, r: Dict) -> Dict[int, Scalar]:
        res, combo = self.reduce(r)
        if res:
            raise ArithmeticError("vector outside the span of the representatives")
        return combo


class LazyIrreducible:
    """Irreducible highest weight module computed weight by weight without Gram matrices.

    A vector of weight ``w`` is zero in the irreducible quotient exactly when
    every annihilator in a generating set of the positive part sends it to
    zero at the lower weights, because a nonzero vector killed by all of them
    would be a second highest weight vector.  Coordinates are therefore built
    recursively: ``Phi_w(u) = (Phi(a u))_a`` expressed over representatives
    ``y . rep`` taken from lower weights.  Weights deeper than ``work_depth``
    raise :class:`TruncationEscape`.
    """

    def __init__(self, alg: VAAlgebra, params: HWParams, D: int, H: int,
                 work_depth: Optional[int] = None):
        self.verma = VermaModule(alg, params)
        self.alg = alg
        self.params = params
        self.D = D
        self.H = H
        self.work_depth = D if work_depth is None else work_depth
        rank = alg.simple.rank
        self.zero_weight: WeightKey = (0, (0,) * rank)
        self._reps: Dict[WeightKey, List[Vec]] = {self.zero_weight: [{(): Fraction(1)}]}
        self._solvers: Dict[WeightKey, _CoordSolver] = {}
        self._phi: Dict[Monomial, Dict[int, Scalar]] = {(): {0: Fraction(1)}}
        self._weights: Optional[List[WeightKey]] = None

    # -- generators -------------------------------------------------------------
    def _annihilators(self, depth: int) -> List[ModeKey]:
        alg = self.alg
        gens: List[ModeKey] = []
        if "affine" in alg.parts:
            gens += [(x, 0) for x in alg.simple.positive]
            gens += [(x, 1) for x in alg.simple.labels]
        if "vir" in alg.parts:
            gens += [("L", 1), ("L", 2)]
            if "heis" in alg.parts:
                gens += [("k1", 1), ("d1", 1)]
        elif "heis" in alg.parts:
            gens += [(x, m) for m in range(1, depth + 1) for x in ("k1", "d1")]
        return gens

    def _creators(self, depth: int) -> List[ModeKey]:
        return self.verma.creation_keys(depth)

    def _shift(self, w: WeightKey, key: ModeKey) -> WeightKey:
        depth, eta = w
        r = self.alg.root(key)
        return depth - key[1], tuple(e - x for e, x in zip(eta, r))

    # -- coordinates ------------------------------------------------------------
    def _raw(self, u: Vec, w: WeightKey) -> Dict:
        out: Dict = {}
        for idx, a in enumerate(self._annihilators(w[0])):
            target = self._shift(w, a)
            if target[0] < 0:
                continue
            av = self.verma.act_vec(a, u)
            if not av:
                continue
            for j, x in self.phi_vec(av).items():
                out[(idx, j)] = x
        return out

    def _space(self, w: WeightKey) -> _CoordSolver:
        sol = self._solvers.get(w)
        if sol is not None:
            return sol
        if w[0] > self.work_depth:
            raise TruncationEscape(f"weight {w} deeper than working depth {self.work_depth}")
        sol = _CoordSolver()
        if w == self.zero_weight:
            sol.add({(0, 0): Fraction(1)})
            self._solvers[w] = sol
            return sol
        reps: List[Vec] = []
        if w[0] >= 0:
            for y in self._creators(w[0]):
                src = self._source(w, y)
                if src is None:
                    continue
                for rep in self.reps(src):
                    cand = self.verma.act_vec(y, rep)
                    if cand and sol.add(self._raw(cand, w)):
                        reps.append(cand)
        self._reps[w] = reps
        self._solvers[w] = sol
        return sol

    def _source(self, w: WeightKey, y: ModeKey) -> Optional[WeightKey]:
        depth, eta = w
        r = self.alg.root(y)
        src = (depth + y[1], tuple(e + x for e, x in zip(eta, r)))
        # each factor moves a simple-root coordinate by at most one, so a
        # Verma weight of depth d has every coordinate >= -d
        if src[0] < 0 or any(e < -src[0] for e in src[1]):
            return None
        return src

    def reps(self, w: WeightKey) -> List[Vec]:
        self._space(w)
        return self._reps[w]

    def phi_mon(self, mon: Monomial) -> Dict[int, Scalar]:
        hit = self._phi.get(mon)
        if hit is None:
            w = self.verma.weight(mon)
            sol = self._space(w)
            hit = fast_vec(sol.coords(self._raw({mon: Fraction(1)}, w))) if sol.size else {}
            self._phi[mon] = hit
        return hit

    def phi_vec(self, v: Vec) -> Dict[int, Scalar]:
        out: Dict[int, Scalar] = {}
        for mon, x in v.items():
            vec_iadd(out, self.phi_mon(mon), x)
        return out

    # -- module interface (mirrors TruncatedHWModule) ---------------------------
    def dim(self, w: WeightKey) -> int:
        return len(self.reps(w))

    def project(self, v: Vec) -> Dict[Tuple[WeightKey, int], Scalar]:
        out: Dict[Tuple[WeightKey, int], Scalar] = {}
        by_weight: Dict[WeightKey, Vec] = {}
        for mon, x in v.items():
            by_weight.setdefault(self.verma.weight(mon), {})[mon] = x
        for w, part in by_weight.items():
            for j, x in self.phi_vec(part).items():
                out[(w, j)] = x
        return out

    def lift(self, q) -> Vec:
        out: Vec = {}
        for (w, i), x in q.items():
            vec_iadd(out, self.reps(w)[i], x)
        return out

    def act(self, key: ModeKey, q):
        out: Dict = {}
        for (w, i), x in q.items():
            target = self._shift(w, key)
            if target[0] < 0:
                continue
            img = self.verma.act_vec(key, self.reps(w)[i])
            if img:
                for j, y in self.phi_vec(img).items():
                    vec_iadd(out, {(target, j): y}, x)
        return out

    @property
    def weights(self) -> List[WeightKey]:
        """Weights with depth <= D and height <= H reachable from the top."""
        if self._weights is None:
            seen = {self.zero_weight}
            frontier = [self.zero_weight]
            while frontier:
                nxt = []
                for w in frontier:
                    for y in self._creators(self.D - w[0]):
                        t = self._shift(w, y)
                        if t[0] <= self.D and sum(t[1]) <= self.H and t not in seen:
                            seen.add(t)
                            nxt.append(t)
                frontier = nxt
            self._weights = sorted(seen)
        return self._weights

    def basis_vectors(self) -> List[Tuple[WeightKey, int]]:
        out = []
        for w in self.weights:
            out += [(w, i) for i in range(self.dim(w))]
        return out

    def highest_weight_vector(self):
        return {(self.zero_weight, 0): Fraction(1)}


def format_finite_weight(fin) -> str:
    from .exact.scalars import format_scalar
    return "(" + ",".join(format_scalar(x) for x in fin) + ")"


def multiplicity_tsv(module: TruncatedHWModule) -> str:
    lines = ["depth\tfinite_weight\tdim_verma\tdim_irreducible"]
    for depth, fin, dv, di in module.multiplicity_rows():
        lines.append(f"{depth}\t{format_finite_weight(fin)}\t{dv}\t{di}")
    return "\n".join(lines) + "\n"


def fock_module(simple: SimpleAlgebra, c: Scalar, D: int) -> TruncatedHWModule:
    """Fock space on k1(-m), d1(-m), m <= D, with K0 = c."""
    if not c:
        raise ValueError("the Fock module needs c != 0")
    params = HWParams((Fraction(0),) * simple.rank, c)
    return TruncatedHWModule(VAAlgebra(simple, ("heis",)), params, D, 0)


def irreducible_quotient(simple: SimpleAlgebra, params: HWParams, D: int, H: int,
                         parts: Iterable[str] = PARTS) -> TruncatedHWModule:
    return TruncatedHWModule(VAAlgebra(simple, parts), params, D, H)


# -- Sugawara -------------------------------------------------------------------------

def sugawara_operator(verma: VermaModule, m: int, v: Vec) -> Vec:
    """``L^Sug(m) v`` on a module of the affine algebra, exactly.

    Uses the trace-dual basis and the normal order placing negative modes left.
    """
    g = verma.alg.simple
    c = verma.params.c
    if c + g.dual_coxeter == 0:
        raise ValueError("Sugawara operator undefined at the critical level")
    pref = Fraction(1, 2) / (c + g.dual_coxeter)
    dual = g.dual_basis()
    out: Vec = {}
    for mon, x in v.items():
        depth = verma.weight(mon)[0]
        for a in g.labels:
            for b, y in dual[a].items():
                for q in range(m - depth, depth + 1):
                    if q < 0:
                        word = [(a, q), (b, m - q)]
                    else:
                        word = [(b, m - q), (a, q)]
                    r = verma.act_word(word, {mon: Fraction(1)})
                    if r:
                        vec_iadd(out, r, pref * x * y)
    return out


def sugawara_central_charge(simple: SimpleAlgebra, c: Scalar) -> Scalar:
    return c * simple.dim / (c + simple.dual_coxeter)
