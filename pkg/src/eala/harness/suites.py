"""Verification suites.  Every pass is an exact-zero statement inside the window."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ..billig import BilligModule, FieldModule, quasi_assoc_residual, field_action
from ..exact.linalg import vec_iadd
from ..exact.scalars import Scalar, format_scalar
from ..loop import (LoopConfig, LoopModule, Sigma, SlotWeight, eigen_slice_dims,
                    generator_degree, generator_element, heis_generators, block_witness,
                    normalize, psi_char, vectors_rank)
from ..toroidal import (AlgebraConfig, SimpleAlgebra, basis_keys, bracket_keys, format_key,
                        jacobi_residual)
from ..viraffine import (HWParams, TruncationEscape, VAAlgebra, VermaModule,
                         sugawara_central_charge, sugawara_operator)
from .extract import (InternalError, SpanTracker, extract_components, vandermonde_det)
from .report import FAIL, INCONCLUSIVE, PASS, CheckReport, format_vec, stopwatch
from .scenario import ScenarioConfig

Vec = Dict


def _bracket_elem(cfg: AlgebraConfig, a: Dict, b: Dict) -> Dict:
    out: Dict = {}
    for p, x in a.items():
        for q, y in b.items():
            vec_iadd(out, bracket_keys(cfg, p, q), x * y)
    return out


# -- Jacobi --------------------------------------------------------------------------

def jacobi_check(simple: SimpleAlgebra, mu: Scalar, bound: int, cocycle_exponent: int = 2,
                 stop_at_first: bool = False):
    """All unordered key triples with modes bounded by ``bound``.

    Returns ``(checked, first failing triple or None, its residual)``.
    """
    cfg = AlgebraConfig(simple, mu, cocycle_exponent)
    keys = basis_keys(simple, bound)
    checked = 0
    for a, b, c in combinations_with_replacement(keys, 3):
        res = jacobi_residual(cfg, {a: 1}, {b: 1}, {c: 1})
        checked += 1
        if res:
            return checked, (a, b, c), res
    return checked, None, None


def run_jacobi(simple: SimpleAlgebra, mus: Sequence[Scalar], bound: int = 2,
               control: bool = True) -> CheckReport:
    report = CheckReport("jacobi", {"rank": simple.rank, "bound": bound,
                                    "mus": [format_scalar(m) for m in mus]})
    for mu in mus:
        with stopwatch() as t:
            n, triple, res = jacobi_check(simple, mu, bound)
        params = {"mu": format_scalar(mu), "triples": n}
        if triple is None:
            report.add(f"jacobi mu={format_scalar(mu)}", PASS, params, millis=t[0])
        else:
            report.add(f"jacobi mu={format_scalar(mu)}", FAIL, params,
                       witness=_triple_text(triple, res), millis=t[0])
    if control:
        # corrupted cocycle: the identity must break, and on Skew keys
        with stopwatch() as t:
            n, triple, res = _corrupted_skew_triple(simple, bound)
        ok = triple is not None and all(k[0] == "skew" for k in triple)
        report.add("control: corrupted cocycle exponent 1", PASS if ok else FAIL,
                   {"expected": "fail", "triples": n},
                   witness=_triple_text(triple, res) if triple else None, millis=t[0],
                   detail="expected failure observed" if ok else "corruption went undetected")
    return report


def _corrupted_skew_triple(simple: SimpleAlgebra, bound: int):
    cfg = AlgebraConfig(simple, Fraction(1, 2), 1)
    skews = [k for k in basis_keys(simple, bound) if k[0] == "skew"]
    n = 0
    for a, b, c in combinations_with_replacement(skews, 3):
        n += 1
        res = jacobi_residual(cfg, {a: 1}, {b: 1}, {c: 1})
        if res:
            return n, (a, b, c), res
    return n, None, None


def _triple_text(triple, res) -> str:
    return "[" + ", ".join(format_key(k) for k in triple) + "] residual " + format_vec(res)


# -- module axioms -------------------------------------------------------------------

def mode_axiom_check(bm: BilligModule, mu: Scalar, bound: int, depth: Optional[int] = None,
                       pairs: Optional[Iterable[Tuple]] = None):
    """Commutator consistency ``a(bv) - b(av) = [a, b]v`` on the window basis.

    Returns ``(checked, escapes, first failure or None)``.
    """
    cfg = AlgebraConfig(bm.simple, mu)
    keys = basis_keys(bm.simple, bound, include_d1=False)
    if pairs is None:
        pairs = combinations_with_replacement(keys, 2)
    states = bm.basis(depth)
    checked = escapes = 0
    for a, b in pairs:
        br = bracket_keys(cfg, a, b)
        for s in states:
            try:
                lhs = bm.mode_action({a: 1}, bm.mode_key(b, s))
                vec_iadd(lhs, bm.mode_action({b: 1}, bm.mode_key(a, s)), -1)
                vec_iadd(lhs, bm.mode_action(br, {s: Fraction(1)}), -1)
            except TruncationEscape:
                escapes += 1
                continue
            checked += 1
            if lhs:
                return checked, escapes, (a, b, s, lhs)
    return checked, escapes, None


def loop_axiom_check(lm: LoopModule, pairs: Sequence[Tuple]):
    cfg = AlgebraConfig(lm.cfg.simple, lm.cfg.mu)
    checked = escapes = 0
    for a, b in pairs:
        br = bracket_keys(cfg, a, b)
        for states in lm.basis():
            try:
                lhs = lm.hat_action({a: 1}, lm.hat_key(b, states))
                vec_iadd(lhs, lm.hat_action({b: 1}, lm.hat_key(a, states)), -1)
                vec_iadd(lhs, lm.hat_action(br, {states: Fraction(1)}), -1)
            except TruncationEscape:
                escapes += 1
                continue
            checked += 1
            if lhs:
                return checked, escapes, (a, b, states, lhs)
    return checked, escapes, None


def _status(failure, escapes) -> str:
    if failure is not None:
        return FAIL
    return INCONCLUSIVE if escapes else PASS


def _axiom_witness(failure) -> Optional[str]:
    if failure is None:
        return None
    a, b, s, res = failure
    return f"[{format_key(a)}, {format_key(b)}] on {s!r}: residual {format_vec(res)}"


def run_module_axiom(sc: ScenarioConfig, mus: Optional[Sequence[Scalar]] = None,
                     k1_depth: Optional[int] = None, k1_height: Optional[int] = None,
                     bound: Optional[int] = None, loop_samples: Optional[int] = None,
                     control: bool = True) -> CheckReport:
    """Single-module axioms in Verma coordinates, then the loop action on the scenario."""
    bound = sc.mode_bound if bound is None else bound
    mus = [sc.mu] if mus is None else list(mus)
    D1 = sc.D if k1_depth is None else k1_depth
    H1 = sc.H if k1_height is None else k1_height
    w = sc.weights[0]
    report = CheckReport("module-axiom", {"bound": bound, "k1_window": [D1, H1],
                                          "k": len(sc.weights), "window": [sc.D, sc.H]})
    for mu in mus:
        bm = BilligModule(sc.simple, w.finite, w.c, w.d0, mu, D=D1, H=H1, coords="verma")
        with stopwatch() as t:
            n, esc, fail = mode_axiom_check(bm, mu, bound)
        report.add(f"k=1 mu={format_scalar(mu)}", _status(fail, esc),
                   {"checks": n, "escapes": esc, "states": len(bm.basis())},
                   witness=_axiom_witness(fail), millis=t[0])
    samples = sc.samples * 10 if loop_samples is None else loop_samples
    keys = basis_keys(sc.simple, bound, include_d1=False)
    rng = random.Random(sc.seed)
    pairs = [(rng.choice(keys), rng.choice(keys)) for _ in range(samples)]
    # two modes of size <= bound act in succession
    work = sc.D + 2 * bound
    lm = LoopModule(sc.loop_config(work_depth=work))
    with stopwatch() as t:
        n, esc, fail = loop_axiom_check(lm, pairs)
    report.add(f"k={lm.k} loop action", _status(fail, esc),
               {"checks": n, "escapes": esc, "pairs": len(pairs), "states": len(lm.basis())},
               witness=_axiom_witness(fail), millis=t[0])
    # with every a_i = 1 the shifted scaling a_i^(n+1) is the true action
    if control and any(a != 1 for a in sc.points):
        bad = LoopModule(sc.loop_config(scaling_offset=1, work_depth=work))
        with stopwatch() as t:
            n, esc, fail = loop_axiom_check(bad, pairs)
        ok = fail is not None
        report.add("control: scaling a_i^(n+1)", PASS if ok else FAIL,
                   {"expected": "fail", "checks": n}, witness=_axiom_witness(fail),
                   millis=t[0],
                   detail="expected failure observed" if ok else "corruption went undetected")
    return report


# -- field calculus equivalence ---------------------------------------------------------

def run_field_equivalence(simple: SimpleAlgebra, lam, c: Scalar, mus: Sequence[Scalar],
                          samples: int = 20, seed: int = 0, depth: int = 2) -> CheckReport:
    """Quasi-associativity residuals and agreement of the two action formulas."""
    report = CheckReport("field-equivalence", {"samples": samples, "depth": depth})
    for mu in mus:
        bm = BilligModule(simple, lam, c, Fraction(0), mu, D=depth, H=2)
        tm = FieldModule(bm)
        with stopwatch() as t:
            bad = None
            n = 0
            for nn in (0, 1, 2):
                for g, f in bm.basis(depth):
                    for m in range(-2, 3):
                        for l in (0, 1):
                            res = quasi_assoc_residual(tm, nn, m, (g, f, l))
                            n += 1
                            if res and bad is None:
                                bad = (nn, m, (g, f, l), res)
        report.add(f"quasi-associativity mu={format_scalar(mu)}", FAIL if bad else PASS,
                   {"checks": n}, witness=None if bad is None else
                   f"n={bad[0]} m={bad[1]} on {bad[2]!r}: {format_vec(bad[3])}", millis=t[0])
        rng = random.Random(seed)
        keys = basis_keys(simple, 2, include_d1=False)
        states = bm.basis(depth)
        with stopwatch() as t:
            bad = None
            for _ in range(samples):
                key = rng.choice(keys)
                g, f = rng.choice(states)
                l = rng.randint(-2, 2)
                n_deg = 0 if key[0] == "deg" else key[-1]
                got = field_action(tm, {key: Fraction(1)}, {(g, f, l): Fraction(1)})
                want = {(a, b, l + n_deg): x for (a, b), x in bm.mode_key(key, (g, f)).items()}
                if got != want and bad is None:
                    bad = (key, (g, f, l))
        report.add(f"field vs mode action mu={format_scalar(mu)}", FAIL if bad else PASS,
                   {"samples": samples}, witness=None if bad is None else
                   f"{format_key(bad[0])} on {bad[1]!r}", millis=t[0])
    return report


# -- Vandermonde -------------------------------------------------------------------------

def run_vandermonde(instances: Sequence[Tuple[int, int, Sequence[Scalar]]]) -> CheckReport:
    report = CheckReport("vandermonde", {"instances": len(instances)})
    for k, N, pts in instances:
        pts = list(pts)[:k]
        with stopwatch() as t:
            det = vandermonde_det(pts, N)
        params = {"k": k, "N": N, "a": [format_scalar(a) for a in pts], "size": k * (N + 1)}
        report.add(f"det k={k} N={N}", PASS if det else FAIL, params,
                   witness=f"det = {format_scalar(det)}", millis=t[0])
    return report


# -- extraction ------------------------------------------------------------------------

def run_extraction(lm: LoopModule, modes: Sequence[int] = (-1, 0, 1)) -> CheckReport:
    """Extracted slot vectors against the directly computed ones on every window vector."""
    from .extract import direct_component
    report = CheckReport("extraction", {"k": lm.k, "modes": list(modes)})
    kinds = [("k1", None), ("d1", None), ("L", None)] + [("x", x) for x in lm.cfg.simple.labels]
    for kind, label in kinds:
        name = kind if label is None else f"x={label}"
        with stopwatch() as t:
            n = esc = 0
            bad = None
            for states in lm.basis():
                v = {states: Fraction(1)}
                for m in modes:
                    try:
                        got = extract_components(lm, v, kind, m, label)
                        want = [direct_component(lm, v, kind, m, i, label) for i in range(lm.k)]
                    except TruncationEscape:
                        esc += 1
                        continue
                    n += 1
                    if got != want and bad is None:
                        bad = (m, states)
        status = FAIL if bad else (INCONCLUSIVE if esc else PASS)
        report.add(f"extract {name}", status, {"checks": n, "escapes": esc},
                   witness=None if bad is None else f"m={bad[0]} on {bad[1]!r}", millis=t[0])
    return report


# -- highest weight kernel ------------------------------------------------------------------

def positive_keys(simple: SimpleAlgebra, max_m0: int, bound: int,
                  skip_n: Sequence[int] = ()) -> List[Tuple]:
    """Keys of the positive part: ``m0 > 0``, or ``m0 = 0`` with a positive root vector."""
    keys = []
    for m0 in range(0, max_m0 + 1):
        for n in range(-bound, bound + 1):
            if n in skip_n:
                continue
            if m0 == 0:
                keys += [("loop", x, 0, n) for x in simple.positive]
                continue
            keys += [("loop", x, m0, n) for x in simple.labels]
            keys += [("central", 1, m0, n), ("skew", m0, n)]
    return keys


def joint_kernel_dims(lm: LoopModule, keys: Sequence[Tuple]) -> Dict[Tuple, Optional[int]]:
    """Kernel dimension of the stacked key actions on each window slice (None on escape)."""
    out: Dict[Tuple, Optional[int]] = {}
    for w, states in lm.slices().items():
        rows = []
        try:
            for s in states:
                row: Vec = {}
                for idx, key in enumerate(keys):
                    for t, x in lm.hat_key(key, s).items():
                        row[(idx, t)] = x
                rows.append(row)
        except TruncationEscape:
            out[w] = None
            continue
        out[w] = len(states) - vectors_rank(rows)
    return out


def run_hwv_kernel(sc: ScenarioConfig, bound: Optional[int] = None,
                   control: bool = True) -> CheckReport:
    """Joint kernel of the positive part on every window slice.

    The t1-degree range defaults to ``k(D+1)`` on each side: the slot actions are
    ``a_i^n`` times polynomials in ``n``, so too few degrees leave spurious kernel.
    """
    lm = LoopModule(sc.loop_config())
    if bound is None:
        bound = max(sc.mode_bound, lm.k * (sc.D + 1))
    top = (0, (0,) * sc.simple.rank)
    report = CheckReport("hwv", {"window": [sc.D, sc.H], "bound": bound, "k": lm.k})
    keys = positive_keys(sc.simple, sc.D, bound)
    with stopwatch() as t:
        dims = joint_kernel_dims(lm, keys)
    bad = {w: d for w, d in dims.items() if d is not None and d != (1 if w == top else 0)}
    esc = [w for w, d in dims.items() if d is None]
    status = FAIL if bad else (INCONCLUSIVE if esc else PASS)
    report.add("joint positive kernel is the top line", status,
               {"slices": len(dims), "keys": len(keys), "escapes": len(esc)},
               witness=None if not bad else f"kernel dims {bad}", millis=t[0])
    if control:
        # t1-degrees {-1, 0, 1} with +-1 removed: only the diagonal t1-degree 0 part remains
        ckeys = positive_keys(sc.simple, sc.D, 1, skip_n=(-1, 1))
        with stopwatch() as t:
            cdims = joint_kernel_dims(lm, ckeys)
        grown = {w: d for w, d in cdims.items() if w != top and d}
        report.add("control: drop t1-degree +-1 generators", PASS if grown else FAIL,
                   {"expected": "kernel grows", "keys": len(ckeys)},
                   witness=f"kernel dims {grown}" if grown else None, millis=t[0],
                   detail="expected failure observed" if grown else "kernel did not grow")
    return report


# -- cyclicity -----------------------------------------------------------------------------

def _op_order(simple: SimpleAlgebra):
    rank = {x: i for i, x in enumerate(["k1", "d1", "L"] + list(simple.labels))}
    return lambda op: (abs(op[2]), op[2] < 0, rank[op[1] if op[0] == "x" else op[0]])


def _annihilator_ops(simple: SimpleAlgebra):
    ops = [("x", x, 0) for x in simple.positive]
    ops += [("x", x, 1) for x in simple.labels]
    ops += [("k1", None, 1), ("d1", None, 1), ("L", None, 1), ("L", None, 2)]
    return sorted(ops, key=_op_order(simple))


def _creation_ops(simple: SimpleAlgebra, D: int):
    ops = [("x", x, 0) for x in simple.negative]
    for m in range(1, D + 1):
        ops += [("x", x, -m) for x in simple.labels]
        ops += [("k1", None, -m), ("d1", None, -m), ("L", None, -m)]
    return sorted(ops, key=_op_order(simple))


def _in_window(lm: LoopModule, v: Vec) -> Vec:
    slices = lm.slices()
    return {s: x for s, x in v.items() if lm.weight(s) in slices}


def closure(lm: LoopModule, W: SpanTracker, ops, stop=None, limit: int = 100000):
    """Close ``W`` under per-slot extractions; returns the number of escapes."""
    escapes = 0
    steps = 0
    while W.frontier and steps < limit:
        for u in W.pop_frontier():
            for kind, label, m in ops:
                steps += 1
                try:
                    comps = extract_components(lm, u, kind, m, label)
                except TruncationEscape:
                    escapes += 1
                    continue
                for vec in comps:
                    vec = _in_window(lm, vec)
                    if vec:
                        W.add(vec)
                if stop is not None and stop(W):
                    return escapes
    return escapes


def random_window_vector(lm: LoopModule, rng: random.Random, max_depth: int) -> Vec:
    basis = [s for s in lm.basis() if lm.weight(s)[0] <= max_depth]
    v: Vec = {}
    for _ in range(rng.randint(1, 3)):
        vec_iadd(v, {rng.choice(basis): Fraction(rng.randint(1, 5) * rng.choice((1, -1)))})
    return v or {basis[-1]: Fraction(1)}


def run_cyclicity(sc: ScenarioConfig, seeds: Optional[int] = None,
                  seed_depth: Optional[int] = None) -> CheckReport:
    lm = LoopModule(sc.loop_config())
    seeds = sc.samples if seeds is None else seeds
    seed_depth = sc.D if seed_depth is None else seed_depth
    rng = random.Random(sc.seed)
    top = lm.vacuum_vec()
    report = CheckReport("cyclicity", {"window": [sc.D, sc.H], "seeds": seeds, "k": lm.k})
    up_ops = _annihilator_ops(sc.simple)
    for idx in range(seeds):
        v = random_window_vector(lm, rng, seed_depth)
        W = SpanTracker(lm)
        W.add(v)
        with stopwatch() as t:
            esc = closure(lm, W, up_ops, stop=lambda W: W.contains(top))
        reached = W.contains(top)
        status = PASS if reached else (INCONCLUSIVE if esc else FAIL)
        report.add(f"seed {idx} reaches the top vector", status,
                   {"terms": len(v), "span": W.dim(), "escapes": esc,
                    "independent": W.certify()},
                   witness=None if reached else format_vec(v), millis=t[0])
    W = SpanTracker(lm)
    W.add(top)
    with stopwatch() as t:
        esc = closure(lm, W, _creation_ops(sc.simple, sc.D))
    short = {w: (W.dim(w), len(states)) for w, states in lm.slices().items()
             if W.dim(w) != len(states)}
    status = PASS if not short else (INCONCLUSIVE if esc else FAIL)
    report.add("descending closure fills every window slice", status,
               {"slices": len(lm.slices()), "span": W.dim(), "escapes": esc,
                "independent": W.certify()},
               witness=None if not short else f"(span, slice) dims {short}", millis=t[0])
    return report


# -- decomposition ----------------------------------------------------------------------------

def reach_omega(lm: LoopModule, pc, base: int, target: int):
    """An element of degree ``target - base`` mapping the top of sector ``base`` to ``target``.

    Tries single generators, then products of two.  Returns ``(gens, scalar)`` or ``None``.
    """
    d = target - base
    live = [(g, x) for g, x in pc.values.items() if x]
    cands = [[g] for g, _ in live if generator_degree(g) == d]
    cands += [[g, h] for g, _ in live for h, _ in live
              if generator_degree(g) + generator_degree(h) == d]
    for gens in cands:
        w = lm.omega_vector(base)
        for g in reversed(gens):
            w = lm.tilde_action(generator_element(g), w)
        key = (lm.vacuum(), target)
        if set(w) == {key} and w[key]:
            return gens, w[key]
    return None


def _tilde_window(lm: LoopModule, v: Vec, lrange) -> Vec:
    slices = lm.slices()
    return {(s, l): x for (s, l), x in v.items() if l in lrange and lm.weight(s) in slices}


def tilde_closure(lm: LoopModule, start: Vec, keys, lrange, limit: int = 10 ** 6):
    """Span of ``U . start`` cut to the tilde window, one echelon basis per slice."""
    from ..exact.linalg import EchelonBasis
    spans: Dict[Tuple, EchelonBasis] = {}
    frontier = []

    def add(v):
        parts: Dict[Tuple, Vec] = {}
        for (s, l), x in v.items():
            parts.setdefault((lm.weight(s), l), {})[(s, l)] = x
        for key, part in parts.items():
            if spans.setdefault(key, EchelonBasis()).add(part):
                frontier.append(part)

    add(_tilde_window(lm, start, lrange))
    escapes = steps = 0
    while frontier and steps < limit:
        u = frontier.pop()
        for key in keys:
            steps += 1
            try:
                img = lm.tilde_action({key: 1}, u)
            except TruncationEscape:
                escapes += 1
                continue
            img = _tilde_window(lm, img, lrange)
            if img:
                add(img)
    return spans, escapes


def run_decomposition(sc: ScenarioConfig, l_bound: int = 2, samples: Optional[int] = None,
                      closure_bound: int = 1) -> CheckReport:
    report = CheckReport("decompose", {"window": [sc.D, sc.H], "l_bound": l_bound})
    base_cfg = sc.loop_config()
    pc = psi_char(LoopModule(base_cfg))
    r = pc.r
    report.params["r"] = r
    report.add("character formula matches the action", FAIL if pc.mismatches else PASS,
               {"generators": len(pc.values)},
               witness=None if not pc.mismatches else repr(pc.mismatches[:3]))
    if r == 0 or base_cfg.k % r:
        report.add("r divides k", FAIL, {"r": r, "k": base_cfg.k})
        return report
    witness = block_witness(base_cfg, r)
    if witness is None:
        report.add("block normalization", FAIL, {"r": r}, witness="no permutation found")
        return report
    report.add("block normalization", PASS,
               {"tau": list(witness.tau), "base": [format_scalar(b) for b in witness.base],
                "eps": format_scalar(witness.eps)})
    cfg = normalize(base_cfg, witness)
    lm = LoopModule(cfg)
    sig = Sigma(lm, block_witness(cfg, r))
    sectors = range(-l_bound, l_bound + 1)
    # (a) direct sums per slice
    with stopwatch() as t:
        bad = []
        for w, states in lm.slices().items():
            for l in range(r):
                dims = eigen_slice_dims(sig, states, l)
                if sum(dims) != len(states):
                    bad.append((w, l, dims))
    report.add("eigenspaces sum directly on every slice", FAIL if bad else PASS,
               {"slices": len(lm.slices())}, witness=repr(bad[:3]) if bad else None,
               millis=t[0])
    # (b) invariance under sampled actions
    rng = random.Random(sc.seed)
    nsamp = sc.samples * 4 if samples is None else samples
    keys = basis_keys(sc.simple, sc.mode_bound, include_d1=True)
    basis = lm.basis()
    with stopwatch() as t:
        bad = None
        esc = 0
        for _ in range(nsamp):
            key = rng.choice(keys)
            i = rng.randrange(r)
            w = sig.project(i, {(rng.choice(basis), rng.randint(-1, 1)): Fraction(1)})
            try:
                img = lm.tilde_action({key: 1}, w)
            except TruncationEscape:
                esc += 1
                continue
            if sig.project(i, img) != img and bad is None:
                bad = (key, i)
    report.add("components are invariant", FAIL if bad else (INCONCLUSIVE if esc else PASS),
               {"samples": nsamp, "escapes": esc},
               witness=None if bad is None else f"{format_key(bad[0])} leaves component {bad[1]}",
               millis=t[0])
    # (c) reachability of the top vectors of other sectors
    with stopwatch() as t:
        missing = []
        found = {}
        for base in range(r):
            for l in range(-l_bound, l_bound + 1):
                if l == 0:
                    continue
                hit = reach_omega(lm, pc, base, base + r * l)
                if hit is None:
                    missing.append((base, base + r * l))
                else:
                    found[f"{base}->{base + r * l}"] = (
                        "*".join(map(str, hit[0])) + " = " + format_scalar(hit[1]))
    report.add("top vectors reachable through the character", FAIL if missing else PASS,
               {"pairs": len(found) + len(missing)},
               witness=repr(missing) if missing else None, millis=t[0],
               detail=None if missing else "; ".join(f"{k}: {v}" for k, v in
                                                     sorted(found.items())[:6]))
    # (d) each component generated by its top vector inside the window
    ckeys = basis_keys(sc.simple, closure_bound, include_d1=True)
    for base in range(r):
        comp = sig.component_of_omega(base)
        with stopwatch() as t:
            spans, esc = tilde_closure(lm, lm.omega_vector(base), ckeys, sectors)
            short = []
            for w, states in lm.slices().items():
                for l in sectors:
                    want = eigen_slice_dims(sig, states, l)[comp]
                    got = len(spans.get((w, l), ()))
                    if got != want:
                        short.append((w, l, got, want))
        status = PASS if not short else (INCONCLUSIVE if esc else FAIL)
        report.add(f"component {comp} generated by the top of sector {base}", status,
                   {"slices": len(lm.slices()) * len(sectors), "escapes": esc},
                   witness=repr(short[:4]) if short else None, millis=t[0])
    return report


# -- integrability -----------------------------------------------------------------------------

def dominant_integral(simple: SimpleAlgebra, w: SlotWeight) -> bool:
    vals = list(w.finite)
    if not all(Fraction(x).denominator == 1 and x >= 0 for x in vals):
        return False
    c = Fraction(w.c)
    return c.denominator == 1 and c - sum(vals) >= 0


def real_root_keys(simple: SimpleAlgebra, bound: int) -> List[Tuple]:
    roots = list(simple.positive) + list(simple.negative)
    return [("loop", x, m, n) for x in roots for m in range(-bound, bound + 1)
            for n in range(-bound, bound + 1)]


def nilpotency_check(lm: LoopModule, keys, nmax: int, vectors=None):
    """``x^nmax v`` for every key and window vector; counts zeros, failures, escapes."""
    vectors = lm.basis() if vectors is None else vectors
    ok = escapes = 0
    failures = []
    weight_errors = []
    for key in keys:
        root = lm.cfg.simple.root(key[1])
        for states in vectors:
            try:
                out = lm.power_key(key, states, nmax)
                seqs = [lm.slot_powers(i, key, s, nmax) for i, s in enumerate(states)]
            except TruncationEscape:
                escapes += 1
                continue
            d0, e0 = lm.weight(states)
            for i, seq in enumerate(seqs):
                di, ei = lm.slot_weight(i, states[i])
                for j, vec in enumerate(seq):
                    for s2 in vec:
                        dj, ej = lm.slot_weight(i, s2)
                        if dj != di - j * key[2] or any(
                                a != b - j * r for a, b, r in zip(ej, ei, root)):
                            weight_errors.append((key, states, j))
            if out:
                failures.append((key, states, out))
            else:
                ok += 1
    return ok, escapes, failures, weight_errors


def run_integrability(sc: ScenarioConfig, nmax: int = 4, bound: Optional[int] = None,
                      depth: Optional[int] = None, control: bool = True) -> CheckReport:
    bound = sc.mode_bound if bound is None else bound
    D = sc.D if depth is None else depth
    report = CheckReport("integrability", {"nmax": nmax, "bound": bound, "depth": D,
                                           "k": len(sc.weights)})
    if not all(dominant_integral(sc.simple, w) for w in sc.weights):
        report.add("weights are dominant integral", INCONCLUSIVE, {},
                   detail="precondition fails; nilpotency is not expected")
    else:
        cfg = sc.loop_config(D=D, H=sc.H, work_depth=D + nmax * bound + 2)
        lm = LoopModule(cfg)
        keys = real_root_keys(sc.simple, bound)
        with stopwatch() as t:
            ok, esc, failures, werr = nilpotency_check(lm, keys, nmax)
        status = FAIL if failures else (INCONCLUSIVE if esc else PASS)
        witness = None
        if failures:
            key, states, out = failures[0]
            witness = (f"{format_key(key)}^{nmax} on {states!r} = {format_vec(out, 3)} "
                       f"({len(failures)} failing pairs)")
        report.add(f"real root generators nilpotent with N <= {nmax}", status,
                   {"keys": len(keys), "vectors": len(lm.basis()), "zero": ok,
                    "failing": len(failures), "escapes": esc}, witness=witness, millis=t[0])
        report.add("string weights shift by the root", FAIL if werr else PASS,
                   {"errors": len(werr)}, witness=repr(werr[:2]) if werr else None)
    if control:
        generic = SlotWeight((Fraction(1, 2),) * sc.simple.rank, Fraction(1))
        cfg = LoopConfig(sc.simple, (generic,), (Fraction(1),), D=0, H=nmax + 1,
                         work_depth=2)
        lm = LoopModule(cfg)
        key = ("loop", sc.simple.negative[0], 0, 0)
        with stopwatch() as t:
            nonzero = all(lm.power_key(key, lm.vacuum(), n) for n in range(1, nmax + 1))
        report.add("control: non-integral weight", PASS if nonzero else FAIL,
                   {"expected": "fail", "N": nmax},
                   detail="expected failure observed: f(0,0)^N v != 0 for all N <= nmax"
                   if nonzero else "unexpected nilpotency", millis=t[0])
    return report


# -- Sugawara -----------------------------------------------------------------------------

def run_sugawara(sc: ScenarioConfig, depth: Optional[int] = None, samples: int = 10
                 ) -> CheckReport:
    D = sc.D if depth is None else depth
    w = sc.weights[0]
    simple = sc.simple
    report = CheckReport("sugawara", {"depth": D, "c": format_scalar(w.c)})
    if w.c + simple.dual_coxeter == 0:
        report.add("non-critical level", FAIL, {}, detail="critical level")
        return report
    cc = sugawara_central_charge(simple, w.c)
    expect = Fraction(w.c) * simple.dim / (w.c + simple.dual_coxeter)
    report.add("central charge identity", PASS if cc == expect else FAIL,
               {"central_charge": format_scalar(cc), "dim": simple.dim,
                "dual_coxeter": simple.dual_coxeter})
    aff = VermaModule(VAAlgebra(simple, ("affine",)), HWParams(w.finite, w.c))
    basis = [m for ms in aff.verma_basis(D, D).values() for m in ms]
    with stopwatch() as t:
        bad = None
        n = 0
        for mon in basis:
            v = {mon: Fraction(1)}
            for m in range(-2, 3):
                for p in range(-2, 3):
                    lhs = sugawara_operator(aff, m, sugawara_operator(aff, p, v))
                    vec_iadd(lhs, sugawara_operator(aff, p, sugawara_operator(aff, m, v)), -1)
                    rhs: Vec = {}
                    vec_iadd(rhs, sugawara_operator(aff, m + p, v), m - p)
                    if m + p == 0:
                        vec_iadd(rhs, v, Fraction(m ** 3 - m, 12) * cc)
                    vec_iadd(lhs, rhs, -1)
                    n += 1
                    if lhs and bad is None:
                        bad = (m, p, mon)
    report.add("Virasoro relations", FAIL if bad else PASS, {"checks": n},
               witness=None if bad is None else repr(bad), millis=t[0])
    with stopwatch() as t:
        bad = None
        n = 0
        for mon in basis:
            v = {mon: Fraction(1)}
            for x in simple.labels:
                for m in range(-2, 3):
                    for p in range(-2, 3):
                        lhs = sugawara_operator(aff, m, aff.act_vec((x, p), v))
                        vec_iadd(lhs, aff.act_vec((x, p), sugawara_operator(aff, m, v)), -1)
                        vec_iadd(lhs, aff.act_vec((x, m + p), v), p)
                        n += 1
                        if lhs and bad is None:
                            bad = (x, m, p, mon)
    report.add("[L(m), x(n)] = -n x(m+n)", FAIL if bad else PASS, {"checks": n},
               witness=None if bad is None else repr(bad), millis=t[0])
    # coset: L(m) - L^Sug(m) commutes with the affine modes on the Virasoro + affine module
    from ..viraffine import tilde_kv
    full = VermaModule(VAAlgebra(simple, ("vir", "affine")),
                       HWParams(w.finite, w.c, w.d0, tilde_kv(w.c, sc.mu)))
    fbasis = [m for ms in full.verma_basis(D, D).values() for m in ms]
    rng = random.Random(sc.seed)

    def coset(m, v):
        out = full.act_vec(("L", m), v)
        vec_iadd(out, sugawara_operator(full, m, v), -1)
        return out

    with stopwatch() as t:
        bad = None
        for _ in range(samples):
            m, p = rng.randint(-2, 2), rng.randint(-2, 2)
            x = rng.choice(simple.labels)
            v = {rng.choice(fbasis): Fraction(1)}
            lhs = coset(m, full.act_vec((x, p), v))
            vec_iadd(lhs, full.act_vec((x, p), coset(m, v)), -1)
            if lhs and bad is None:
                bad = (m, x, p)
    report.add("coset operator commutes with affine modes", FAIL if bad else PASS,
               {"samples": samples}, witness=None if bad is None else repr(bad), millis=t[0])
    return report


# -- characters --------------------------------------------------------------------------------

TSV_HEADER = "component\tt1_degree\tdepth\tfinite_weight\tdim"


def finite_weight(lm: LoopModule, eta: Tuple[int, ...]) -> Tuple[Scalar, ...]:
    simple = lm.cfg.simple
    cm = simple.cartan_matrix()
    top = [sum(w.finite[j] for w in lm.cfg.weights) for j in range(simple.rank)]
    return tuple(top[j] - sum(eta[a] * cm[a][j] for a in range(simple.rank))
                 for j in range(simple.rank))


def character_rows(lm: LoopModule, sig: Optional[Sigma], sectors: Sequence[int]):
    rows = []
    for (depth, eta), states in lm.slices().items():
        fin = finite_weight(lm, eta)
        for l in sectors:
            if sig is None:
                rows.append((0, l, depth, fin, len(states)))
                continue
            for i, d in enumerate(eigen_slice_dims(sig, states, l)):
                rows.append((i, l, depth, fin, d))
    rows.sort(key=lambda r: (r[0], r[1], r[2], tuple(-x for x in r[3])))
    return rows


def character_tsv(rows) -> str:
    lines = [TSV_HEADER]
    for i, l, depth, fin, d in rows:
        fw = "(" + ",".join(format_scalar(x) for x in fin) + ")"
        lines.append(f"{i}\t{l}\t{depth}\t{fw}\t{d}")
    return "\n".join(lines) + "\n"


def run_characters(sc: ScenarioConfig, sectors: Optional[Sequence[int]] = None):
    """Returns ``(report, tsv)``; components come from the block rotation when ``r > 1``."""
    report = CheckReport("characters", {"window": [sc.D, sc.H]})
    base = sc.loop_config()
    pc = psi_char(LoopModule(base))
    r = pc.r
    sig = None
    lm = LoopModule(base)
    if r > 1 and base.k % r == 0:
        witness = block_witness(base, r)
        if witness is not None:
            cfg = normalize(base, witness)
            lm = LoopModule(cfg)
            sig = Sigma(lm, block_witness(cfg, r))
    sectors = list(range(max(r, 1))) if sectors is None else list(sectors)
    with stopwatch() as t:
        rows = character_rows(lm, sig, sectors)
    top = [row for row in rows if row[2] == 0 and row[4]]
    ok = all(row[4] == 1 for row in top) and len(top) == len(sectors)
    report.add("top weight spaces are lines", PASS if ok else FAIL,
               {"rows": len(rows), "r": r}, witness=None if ok else repr(top), millis=t[0])
    return report, character_tsv(rows)


def _module_axiom_suite(sc: ScenarioConfig) -> CheckReport:
    mus = [_tok(m) for m in sc.option("module-axiom", "mus", [])] or None
    report = run_module_axiom(sc, mus=mus, k1_depth=sc.option("module-axiom", "k1_depth"),
                              k1_height=sc.option("module-axiom", "k1_height"),
                              loop_samples=sc.option("module-axiom", "loop_samples"))
    w = sc.weights[0]
    fe = run_field_equivalence(sc.simple, w.finite, w.c, mus or [sc.mu], seed=sc.seed)
    report.checks += fe.checks
    return report


def _cyclicity_suite(sc: ScenarioConfig) -> CheckReport:
    report = run_cyclicity(sc, sc.option("cyclicity", "seeds"),
                           sc.option("cyclicity", "seed_depth"))
    if sc.option("cyclicity", "extraction_oracle", True):
        report.checks += run_extraction(LoopModule(sc.loop_config())).checks
    return report


SUITE_RUNNERS = {
    "jacobi": lambda sc: run_jacobi(sc.simple, [_tok(m) for m in sc.option("jacobi", "mus", [])]
                                    or [sc.mu], sc.option("jacobi", "bound", sc.mode_bound)),
    "module-axiom": _module_axiom_suite,
    "vandermonde": lambda sc: run_vandermonde(_vandermonde_instances(sc)),
    "hwv": lambda sc: run_hwv_kernel(sc, sc.option("hwv", "bound")),
    "cyclicity": _cyclicity_suite,
    "decompose": lambda sc: run_decomposition(sc, sc.option("decompose", "l_bound", 2)),
    "integrability": lambda sc: run_integrability(sc, sc.option("integrability", "nmax", 4),
                                                  sc.option("integrability", "bound"),
                                                  sc.option("integrability", "depth")),
    "sugawara": lambda sc: run_sugawara(sc, sc.option("sugawara", "depth")),
    "characters": lambda sc: run_characters(sc)[0],
}


def run_suite(name: str, sc: ScenarioConfig) -> CheckReport:
    """Top-level entry so that suites can run in worker processes."""
    return SUITE_RUNNERS[name](sc)


def _tok(x) -> Scalar:
    from ..exact.scalars import as_field
    return as_field(str(x))


def _vandermonde_instances(sc: ScenarioConfig):
    kmax = sc.option("vandermonde", "kmax", 3)
    nmax = sc.option("vandermonde", "nmax", 3)
    base = [_tok(a) for a in sc.option("vandermonde", "points", ["1", "2", "3"])]
    out = [(k, N, base[:k]) for k in range(1, min(kmax, len(base)) + 1)
           for N in range(nmax + 1)]
    out.append((len(sc.points), sc.option("vandermonde", "scenario_N", 2), sc.points))
    return out
