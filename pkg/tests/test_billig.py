from fractions import Fraction as F
import random

import pytest

from eala.billig import (OPERATOR_SHIFT, BilligModule, FieldModule, billig_operator,
                         exp_series_coeff, phi, phi_n, quasi_assoc_residual, field_action,
                         field_key)
from eala.exact.linalg import vec_iadd
from eala.toroidal import AlgebraConfig, SimpleAlgebra, basis_keys, bracket_keys, parse_elem
from eala.viraffine import TruncationEscape

SL2 = SimpleAlgebra(1)
VAC = ((), ())


def module(mu=F(0), c=F(1), lam=(F(0),), d0=F(0), D=2, coords="verma"):
    return BilligModule(SL2, lam, c, d0, mu, D=D, H=2, coords=coords)


# -- phi and E ---------------------------------------------------------------------------

def test_phi_examples():
    c = F(3)
    assert phi(1, 0, 0, c) == {(): 1} and phi(-1, 0, 0, c) == {(): 1}
    assert phi(1, 1, 1, c) == {(1,): F(-1, 3)}
    assert phi(-1, 2, 2, c) == {(-1, -1): F(1, 18)}
    assert phi(1, 3, 0, c) == {}
    with pytest.raises(ValueError):
        phi(1, 1, 1, F(0))


def test_phi_n_examples():
    c = F(2)
    for n in (-2, 1, 3):
        assert phi_n(1, 0, n, c) == {(): 1}
        assert phi_n(-1, 1, n, c) == {(-1,): F(n, 2)}
    assert phi_n(1, 3, 0, c) == {}


@pytest.mark.parametrize("sign", [1, -1])
def test_phi_n_matches_exponential_series(sign):
    for c in (F(1), F(-2, 3)):
        for n in range(-2, 4):
            for m in range(1, 5):
                assert phi_n(sign, m, n, c) == exp_series_coeff(sign, m, n, c), (sign, m, n)


def test_e_coeff_on_vacuum():
    bm = module(c=F(2))
    fock = bm.fock
    assert fock.e_coeff(0, 0, ()) == {(): 1}
    assert fock.e_coeff(0, 1, (("k1", -1),)) == {}
    assert fock.e_coeff(3, -1, ()) == {(("k1", -1),): F(3, 2)}
    assert fock.e_coeff(3, 1, ()) == {}


def test_e_coeff_is_homogeneous():
    bm = module(c=F(1))
    for f in bm.fock.basis(3):
        d = bm.fock.depth(f)
        for j in range(-2, 3):
            for f2 in bm.fock.e_coeff(2, j, f):
                assert bm.fock.depth(f2) == d - j


# -- the operator family --------------------------------------------------------------------

def test_index_shift_table():
    assert OPERATOR_SHIFT == {"k0": 0, "k1": 1, "x": 1, "barL": 2, "bark1": 2, "bard1": 2,
                              "bard": 2}


@pytest.mark.parametrize("m", [-2, -1, 0, 1, 2])
def test_n_zero_operators_reduce_to_modes(m):
    # E(0, z) = 1, so each label reduces to its field mode with the listed shift
    bm = module(lam=(F(1),), c=F(2))
    for s in bm.basis():
        g, f = s
        one = {s: F(1)}
        k0 = bm.op("k0", m, 0, s)
        assert k0 == ({s: F(2)} if m == 0 else {})
        xg = bm.g.act(("E12", m), g)
        assert bm.op("E12", m, 0, s) == {(g2, f): x for g2, x in xg.items()}
        lg = bm.g.act(("L", m), g)
        assert bm.op("barL", m, 0, s) == {(g2, f): x for g2, x in lg.items()}
        k1 = {(g, f2): x for f2, x in bm.fock.act(("k1", m), f).items()} if m else {}
        assert bm.op("k1", m, 0, s) == k1
        assert bm.op("bark1", m, 0, s) == {k: -m * x for k, x in k1.items()}
        d1 = {(g, f2): x for f2, x in bm.fock.act(("d1", m), f).items()} if m else {}
        assert bm.op("bard", m, 0, s) == {k: m * x for k, x in d1.items() if m}
        assert billig_operator(bm, "bard1", m, 0)(one) == {k: -m * x for k, x in d1.items()}


def test_operators_are_homogeneous():
    bm = module(mu=F(1, 2), c=F(1), D=2)
    for s in bm.basis():
        d = bm.depth(s)
        for label in ("k0", "k1", "bark1", "bard1", "barL", "bard", "E12", "H1", "E21"):
            for m in range(-2, 3):
                for n in (-1, 2):
                    for s2 in bm.op(label, m, n, s):
                        assert bm.depth(s2) == d - m, (label, m, n, s)


def test_unknown_label_rejected():
    with pytest.raises(ValueError):
        billig_operator(module(), "nope", 0, 0)


def test_central_character():
    bm = module(lam=(F(1),), c=F(3))
    k1 = parse_elem("k1", SL2)
    k0 = parse_elem("k0", SL2)
    for s in bm.basis():
        assert bm.mode_action(k1, {s: F(1)}) == {}
        assert bm.mode_action(k0, {s: F(1)}) == {s: F(3)}


def test_mode_action_examples():
    bm = module(lam=(F(2),), c=F(1))
    v = {VAC: F(1)}
    assert bm.mode_action(parse_elem("H1", SL2), v) == {VAC: F(2)}
    with pytest.raises(ValueError):
        bm.mode_action(parse_elem("d1", SL2), v)


def test_mode_action_commutator_sample():
    bm = module(c=F(1))
    cfg = AlgebraConfig(SL2, F(0))
    a = parse_elem("t0*t1*E12", SL2)
    b = parse_elem("t0^-1*t1^-1*E21", SL2)
    for s in bm.basis(2):
        v = {s: F(1)}
        lhs = bm.mode_action(a, bm.mode_action(b, v))
        vec_iadd(lhs, bm.mode_action(b, bm.mode_action(a, v)), -1)
        assert lhs == bm.mode_action(_bracket(cfg, a, b), v)


def _bracket(cfg, a, b):
    out = {}
    for p, x in a.items():
        for q, y in b.items():
            vec_iadd(out, bracket_keys(cfg, p, q), x * y)
    return out


def _axiom_residuals(bm, cfg, bound, depth):
    keys = basis_keys(SL2, bound, include_d1=False)
    checked = 0
    for i, a in enumerate(keys):
        for b in keys[i:]:
            br = bracket_keys(cfg, a, b)
            for s in bm.basis(depth):
                v = {s: F(1)}
                try:
                    lhs = bm.mode_action({a: 1}, bm.mode_key(b, s))
                    vec_iadd(lhs, bm.mode_action({b: 1}, bm.mode_key(a, s)), -1)
                    vec_iadd(lhs, bm.mode_action(br, v), -1)
                except TruncationEscape:
                    continue
                assert not lhs, (a, b, s)
                checked += 1
    return checked


@pytest.mark.parametrize("mu", [F(0), F(1, 2)])
def test_mode_action_module_axiom_bound_one(mu):
    bm = module(mu=mu, c=F(1), lam=(F(1),), D=2)
    assert _axiom_residuals(bm, AlgebraConfig(SL2, mu), 1, 2) > 0


@pytest.mark.parametrize("coords", ["gram", "lazy"])
def test_mode_action_module_axiom_on_irreducible_factor(coords):
    bm = module(mu=F(1, 2), c=F(1), D=3, coords=coords)
    assert len(bm.basis(2)) == 22
    assert _axiom_residuals(bm, AlgebraConfig(SL2, F(1, 2)), 1, 2) == 22058


def test_unknown_coordinates_rejected():
    with pytest.raises(ValueError):
        module(coords="dense")


# -- the field calculus route ---------------------------------------------------------------

def test_d1_reads_charge():
    tm = FieldModule(module())
    s = ((), (), 3)
    assert field_key(tm, ("deg", 1), s) == {s: 3}
    assert field_key(tm, ("deg", 1), ((), (), 0)) == {}


def test_k0_family_at_n_zero():
    tm = FieldModule(module(c=F(5)))
    for g, f in tm.bm.basis(2):
        s = (g, f, 1)
        assert field_key(tm, ("central", 0, 0, 0), s) == {s: 5}


@pytest.mark.parametrize("n", [0, 1, 2])
def test_quasi_associativity(n):
    tm = FieldModule(module(c=F(1)))
    for g, f in tm.bm.basis(2):
        for m in range(-2, 3):
            for l in (0, 2):
                assert quasi_assoc_residual(tm, n, m, (g, f, l)) == {}


@pytest.mark.parametrize("mu", [F(0), F(1), F(1, 2)])
def test_field_action_agrees_with_mode_action(mu):
    bm = module(mu=mu, c=F(2), lam=(F(1),))
    tm = FieldModule(bm)
    rng = random.Random(11)
    keys = basis_keys(SL2, 2, include_d1=False)
    states = bm.basis(2)
    for _ in range(40):
        key = rng.choice(keys)
        g, f = rng.choice(states)
        l = rng.randint(-2, 2)
        n = 0 if key[0] == "deg" else key[-1]
        got = field_action(tm, {key: F(1)}, {(g, f, l): F(1)})
        want = {(a, b, l + n): x for (a, b), x in bm.mode_key(key, (g, f)).items()}
        assert got == want, key
