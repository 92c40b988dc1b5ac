"""Loop modules over tensor products of Billig modules.

``LoopModule`` realizes the hat module ``V_1 (x) ... (x) V_k`` on which a
degree ``(m, n)`` element acts slotwise with weight ``a_i^n``; vectors of the
tilde module carry an extra ``t1`` exponent ``l``.  Pure tensors are tuples
of slot states ``(g, f)`` and vectors are sparse dicts over them (hat) or
over ``(states, l)`` (tilde).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from math import comb, gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .billig import BilligModule
from .exact.linalg import SparseMat, rank, vec_iadd
from .exact.scalars import CycScalar, Scalar, as_field, primitive_root
from .toroidal import SimpleAlgebra, key_degree

Vec = Dict
States = Tuple


@dataclass(frozen=True)
class SlotWeight:
    """Highest weight data of one tensor factor: finite part, level and d0 value."""

    finite: Tuple[Scalar, ...]
    c: Scalar
    d0: Scalar = Fraction(0)


@dataclass
class LoopConfig:
    simple: SimpleAlgebra
    weights: Tuple[SlotWeight, ...]
    points: Tuple[Scalar, ...]
    mu: Scalar = Fraction(0)
    D: int = 2
    H: int = 2
    order: int = 1
    coords: str = "lazy"
    # depth up to which lazy slot factors are computed; None means D + 2
    work_depth: Optional[int] = None
    # fault knob: slot i is scaled by a_i^(n + scaling_offset); 0 is the true action
    scaling_offset: int = 0

    def __post_init__(self):
        self.weights = tuple(self.weights)
        self.points = tuple(as_field(a, self.order) for a in self.points)
        if not self.weights:
            raise ValueError("at least one tensor factor is required")
        if len(self.weights) != len(self.points):
            raise ValueError("one point per weight is required")
        for w in self.weights:
            if len(w.finite) != self.simple.rank:
                raise ValueError(f"finite weight {w.finite} does not match rank {self.simple.rank}")
            if not w.c:
                raise ValueError("every level c_i must be nonzero")
        for i, a in enumerate(self.points):
            if not a:
                raise ValueError("points must be nonzero")
            if any(a == b for b in self.points[:i]):
                raise ValueError("points must be pairwise distinct")

    @property
    def k(self) -> int:
        return len(self.weights)


class LoopModule:
    """The hat and tilde loop modules of a :class:`LoopConfig`."""

    def __init__(self, cfg: LoopConfig):
        self.cfg = cfg
        shared: Dict[SlotWeight, BilligModule] = {}
        self.work_depth = cfg.D + 2 if cfg.work_depth is None else cfg.work_depth
        rank = cfg.simple.rank
        # a slot of a complete total slice can carry height up to H + rank * D
        slot_h = cfg.H + rank * cfg.D
        for w in cfg.weights:
            if w not in shared:
                shared[w] = BilligModule(cfg.simple, w.finite, w.c, w.d0, cfg.mu,
                                         D=cfg.D, H=slot_h, coords=cfg.coords,
                                         work_depth=self.work_depth)
        self.slots: List[BilligModule] = [shared[w] for w in cfg.weights]
        self._pow: Dict[Tuple[int, int], Scalar] = {}
        self._slices: Optional[Dict[Tuple, List[States]]] = None

    @property
    def k(self) -> int:
        return self.cfg.k

    def scale(self, i: int, n: int) -> Scalar:
        hit = self._pow.get((i, n))
        if hit is None:
            hit = self.cfg.points[i] ** (n + self.cfg.scaling_offset)
            self._pow[(i, n)] = hit
        return hit

    # -- weights -----------------------------------------------------------------
    def slot_weight(self, i: int, state) -> Tuple[int, Tuple[int, ...]]:
        bm = self.slots[i]
        return bm.depth(state), bm.g.eta(state[0])

    def weight(self, states: States) -> Tuple[int, Tuple[int, ...]]:
        """``(depth, eta)``: the weight is the top weight minus ``eta`` minus ``depth * delta0``."""
        depth = 0
        eta = [0] * self.cfg.simple.rank
        for i, s in enumerate(states):
            d, e = self.slot_weight(i, s)
            depth += d
            eta = [x + y for x, y in zip(eta, e)]
        return depth, tuple(eta)

    def vacuum(self) -> States:
        return tuple(bm.vacuum() for bm in self.slots)

    def vacuum_vec(self) -> Vec:
        return {self.vacuum(): Fraction(1)}

    # -- window ------------------------------------------------------------------
    def slices(self) -> Dict[Tuple, List[States]]:
        """Complete weight slices of the hat module with depth <= D and height <= H."""
        if self._slices is None:
            D, H = self.cfg.D, self.cfg.H
            per_slot = []
            for i, bm in enumerate(self.slots):
                per_slot.append([(s, self.slot_weight(i, s)) for s in bm.basis(D)])
            out: Dict[Tuple, List[States]] = {}

            def grow(i, acc, depth, eta):
                if i == self.k:
                    if sum(eta) <= H:
                        out.setdefault((depth, tuple(eta)), []).append(tuple(acc))
                    return
                for s, (d, e) in per_slot[i]:
                    if depth + d <= D:
                        grow(i + 1, acc + [s], depth + d, [x + y for x, y in zip(eta, e)])

            grow(0, [], 0, [0] * self.cfg.simple.rank)
            self._slices = dict(sorted(out.items()))
        return self._slices

    def basis(self) -> List[States]:
        return [s for part in self.slices().values() for s in part]

    # -- hat action ----------------------------------------------------------------
    def hat_key(self, key, states: States) -> Vec:
        """A canonical toroidal key (without ``d1``) on a pure tensor."""
        if key == ("deg", 1):
            raise ValueError("d1 acts only on the tilde module")
        n = key_degree(key)[1]
        out: Vec = {}
        for i, s in enumerate(states):
            img = self.slots[i].mode_key(key, s)
            if not img:
                continue
            a = self.scale(i, n) if key != ("deg", 0) else 1
            head, tail = states[:i], states[i + 1:]
            for s2, x in img.items():
                vec_iadd(out, {head + (s2,) + tail: x}, a)
        return out

    def hat_action(self, elem: Dict, v: Vec) -> Vec:
        out: Vec = {}
        for key, c in elem.items():
            for states, x in v.items():
                vec_iadd(out, self.hat_key(key, states), c * x)
        return out

    # -- tilde action --------------------------------------------------------------
    def tilde_key(self, key, w) -> Vec:
        states, l = w
        if key == ("deg", 1):
            return {w: Fraction(l)} if l else {}
        n = key_degree(key)[1]
        return {(s2, l + n): x for s2, x in self.hat_key(key, states).items()}

    def tilde_action(self, elem: Dict, w: Vec) -> Vec:
        out: Vec = {}
        for key, c in elem.items():
            for basis_w, x in w.items():
                vec_iadd(out, self.tilde_key(key, basis_w), c * x)
        return out

    def omega_vector(self, l: int) -> Vec:
        """The top vector of the ``t1^l`` sector."""
        return {(self.vacuum(), l): Fraction(1)}

    # -- powers ----------------------------------------------------------------------
    def slot_powers(self, i: int, key, s, N: int) -> List[Vec]:
        """``[A^j s for j = 0..N]`` for the slot operator ``A`` of ``key`` (unscaled)."""
        bm = self.slots[i]
        seq = [{s: Fraction(1)}]
        for _ in range(N):
            prev = seq[-1]
            if not prev:
                seq.append({})
                continue
            seq.append(bm.mode_action({key: 1}, prev))
        return seq

    def power_key(self, key, states: States, N: int) -> Vec:
        """``key^N`` on a pure tensor by the multinomial expansion of commuting slot terms."""
        n = key_degree(key)[1]
        seqs = [self.slot_powers(i, key, s, N) for i, s in enumerate(states)]
        out: Vec = {}

        def expand(i, left, coeff, acc):
            if i == self.k - 1:
                j = left
                if not seqs[i][j]:
                    return
                c = coeff * self.scale(i, n) ** j
                for parts in _pure_products(acc + [seqs[i][j]]):
                    vec_iadd(out, {parts[0]: parts[1]}, c)
                return
            for j in range(left + 1):
                if not seqs[i][j]:
                    continue
                expand(i + 1, left - j, coeff * comb(left, j) * self.scale(i, n) ** j,
                       acc + [seqs[i][j]])

        expand(0, N, Fraction(1), [])
        return out

    def power_direct(self, key, states: States, N: int) -> Vec:
        v = {states: Fraction(1)}
        for _ in range(N):
            if not v:
                break
            v = self.hat_action({key: 1}, v)
        return v


def _pure_products(vecs: List[Vec]):
    """Expand a list of slot vectors into ``(states tuple, coefficient)`` pairs."""
    for combo in product(*[list(v.items()) for v in vecs]):
        coeff = Fraction(1)
        for _, x in combo:
            coeff = coeff * x
        yield tuple(s for s, _ in combo), coeff


# -- psi characters ----------------------------------------------------------------

def heis_generators(simple: SimpleAlgebra, bound: int) -> List[Tuple]:
    """Generators of the degree ``(0, n)`` Cartan-type subalgebra with ``|n| <= bound``."""
    gens: List[Tuple] = []
    for n in range(-bound, bound + 1):
        gens += [("h", h, n) for h in simple.cartan]
        gens.append(("k0", n))
        gens.append(("d0", n))
    gens.append(("k1", 0))
    return gens


def generator_element(gen) -> Dict:
    """A generator as a toroidal element; ``t1^n d0 = -skew(0, n) / n`` for ``n != 0``."""
    kind = gen[0]
    if kind == "h":
        return {("loop", gen[1], 0, gen[2]): Fraction(1)}
    if kind == "k0":
        return {("central", 0, 0, gen[1]): Fraction(1)}
    if kind == "k1":
        return {("central", 1, 0, 0): Fraction(1)}
    n = gen[1]
    if n == 0:
        return {("deg", 0): Fraction(1)}
    return {("skew", 0, n): Fraction(-1, n)}


def generator_degree(gen) -> int:
    return gen[2] if gen[0] == "h" else gen[1]


def psi_hat_formula(cfg: LoopConfig, gen) -> Scalar:
    """Closed-form value of the character on one generator."""
    kind, n = gen[0], generator_degree(gen)
    total: Scalar = Fraction(0)
    for w, a in zip(cfg.weights, cfg.points):
        an = a ** n
        if kind == "h":
            idx = cfg.simple.cartan.index(gen[1])
            total = total + an * w.finite[idx]
        elif kind == "k0":
            total = total + an * w.c
        elif kind == "d0":
            total = total + (w.d0 if n == 0 else an * (w.d0 + cfg.mu * w.c))
    return total


def psi_hat_direct(lm: LoopModule, gen) -> Scalar:
    """The eigenvalue of a generator on the top vector, computed from the action."""
    top = lm.vacuum()
    img = lm.hat_action(generator_element(gen), lm.vacuum_vec())
    extra = [s for s in img if s != top]
    if extra:
        raise ArithmeticError(f"{gen} does not preserve the top line")
    return img.get(top, Fraction(0))


@dataclass
class PsiChar:
    values: Dict[Tuple, Scalar]
    r: int
    mismatches: List[Tuple] = field(default_factory=list)


def psi_char(lm: LoopModule, bound: Optional[int] = None) -> PsiChar:
    """Values of the character on generators up to degree ``2k`` and the detected ``r``.

    Each value is computed from the action and compared with the closed form.
    ``r`` is the gcd of the degrees with a nonzero value among generators and
    products of two generators.
    """
    bound = 2 * lm.k if bound is None else bound
    values: Dict[Tuple, Scalar] = {}
    mismatches = []
    for gen in heis_generators(lm.cfg.simple, bound):
        got = psi_hat_direct(lm, gen)
        if got != psi_hat_formula(lm.cfg, gen):
            mismatches.append(gen)
        values[gen] = got
    live = [generator_degree(g) for g, x in values.items() if x and generator_degree(g)]
    degrees = set(live) | {p + q for p in live for q in live if p + q}
    r = 0
    for d in degrees:
        r = gcd(r, abs(d))
    return PsiChar(values, r, mismatches)


def detect_r(lm: LoopModule) -> int:
    return psi_char(lm).r


# -- normalization and sigma -----------------------------------------------------------

def root_of_unity(order: int, r: int) -> Scalar:
    """A primitive ``r``-th root of unity inside Q(e_order)."""
    if r <= 2:
        return primitive_root(r)
    if order % r:
        raise ValueError(f"Q(e_{order}) has no primitive {r}-th root of unity")
    return CycScalar.gen(order, order // r)


@dataclass
class BlockWitness:
    """Slot order ``tau`` (0-based) with ``a[tau[s*r + j - 1]] = eps^j * base[s]``."""

    tau: Tuple[int, ...]
    base: Tuple[Scalar, ...]
    eps: Scalar
    r: int


def block_witness(cfg: LoopConfig, r: int) -> Optional[BlockWitness]:
    """Search for a grouping into blocks of ``r`` equal weights on an ``eps``-spiral.

    Returns ``None`` when no permutation works.
    """
    k = cfg.k
    if r < 1 or k % r:
        raise ValueError(f"r = {r} does not divide k = {k}")
    eps = root_of_unity(cfg.order, r)
    powers = [eps ** j for j in range(r + 1)]
    for tau in permutations(range(k)):
        bases = []
        ok = True
        for s in range(k // r):
            block = tau[s * r:(s + 1) * r]
            if any(cfg.weights[i] != cfg.weights[block[0]] for i in block):
                ok = False
                break
            base = cfg.points[block[-1]] / powers[r]
            if any(cfg.points[i] != powers[j + 1] * base for j, i in enumerate(block)):
                ok = False
                break
            bases.append(base)
        if ok:
            return BlockWitness(tuple(tau), tuple(bases), eps, r)
    return None


def normalize(cfg: LoopConfig, witness: BlockWitness) -> LoopConfig:
    """Reorder the slots so that the blocks are contiguous."""
    tau = witness.tau
    return LoopConfig(cfg.simple, tuple(cfg.weights[i] for i in tau),
                      tuple(cfg.points[i] for i in tau), cfg.mu, cfg.D, cfg.H, cfg.order,
                      cfg.coords, cfg.work_depth, cfg.scaling_offset)


class Sigma:
    """The block rotation automorphism of the tilde module of a normalized config.

    Slot ``i`` of ``sigma(w)`` holds slot ``sigma(i)`` of ``w``, where ``sigma``
    moves each position one step back inside its block, and the ``t1^l``
    sector is scaled by ``eps^l``.
    """

    def __init__(self, lm: LoopModule, witness: BlockWitness):
        cfg, r = lm.cfg, witness.r
        if witness.tau != tuple(range(cfg.k)):
            raise ValueError("config is not normalized; apply normalize() first")
        self.lm = lm
        self.r = r
        self.eps = witness.eps
        self.perm = []
        for i in range(cfg.k):
            s, j = divmod(i, r)
            self.perm.append(s * r + (j - 1) % r)
        for s in range(cfg.k // r):
            block = range(s * r, (s + 1) * r)
            if any(cfg.weights[i] != cfg.weights[s * r] for i in block):
                raise ValueError("weights differ inside a block")
            base = witness.base[s]
            for i in block:
                if cfg.points[i] != self.eps ** (i - s * r + 1) * base:
                    raise ValueError("points are not on the block spiral")

    def apply(self, w: Vec) -> Vec:
        out: Vec = {}
        for (states, l), x in w.items():
            new = tuple(states[self.perm[i]] for i in range(len(states)))
            vec_iadd(out, {(new, l): x}, self.eps ** l)
        return out

    def power(self, j: int, w: Vec) -> Vec:
        for _ in range(j % self.r):
            w = self.apply(w)
        return w

    def project(self, i: int, w: Vec) -> Vec:
        """``P_i = (1/r) sum_j eps^(ij) sigma^j``, onto ``{sigma v = eps^(-i) v}``."""
        out: Vec = {}
        cur = w
        for j in range(self.r):
            vec_iadd(out, cur, self.eps ** (i * j) / self.r)
            cur = self.apply(cur)
        return out

    def component_of_omega(self, l: int) -> int:
        """The component index ``i`` with the top vector of sector ``l`` in it."""
        return (-l) % self.r


def eigen_slice_dims(sig: Sigma, states_list: Sequence[States], l: int) -> List[int]:
    """Dimensions of the ``r`` eigencomponents of one tilde slice."""
    dims = []
    for i in range(sig.r):
        rows = [sig.project(i, {(s, l): Fraction(1)}) for s in states_list]
        dims.append(vectors_rank(rows))
    return dims


def vectors_rank(rows: List[Vec]) -> int:
    """Exact rank of a list of sparse vectors."""
    cols: Dict = {}
    mat = {}
    for r, row in enumerate(rows):
        mat[r] = {cols.setdefault(key, len(cols)): x for key, x in row.items() if x}
    return rank(SparseMat(len(rows), len(cols), mat))
