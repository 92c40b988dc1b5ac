from fractions import Fraction as F
import random

import pytest

from eala.exact.linalg import vec_iadd
from eala.exact.scalars import CycScalar
from eala.loop import (LoopConfig, LoopModule, Sigma, SlotWeight, detect_r, eigen_slice_dims,
                       generator_element, block_witness, normalize, psi_char, psi_hat_direct,
                       psi_hat_formula, vectors_rank)
from eala.toroidal import AlgebraConfig, SimpleAlgebra, basis_keys, bracket_keys, parse_elem

SL2 = SimpleAlgebra(1)
LAM0 = SlotWeight((F(0),), F(1))


def cfg2(D=2, H=2, mu=F(0), **kw):
    return LoopConfig(SL2, (LAM0, LAM0), (F(1), F(-1)), mu=mu, D=D, H=H, **kw)


@pytest.fixture(scope="module")
def lm2():
    return LoopModule(cfg2())


def bracket(cfg, a, b):
    out = {}
    for p, x in a.items():
        for q, y in b.items():
            vec_iadd(out, bracket_keys(cfg, p, q), x * y)
    return out


# -- config ----------------------------------------------------------------------------

def test_config_invariants():
    with pytest.raises(ValueError):
        LoopConfig(SL2, (LAM0, LAM0), (F(1), F(1)))
    with pytest.raises(ValueError):
        LoopConfig(SL2, (LAM0,), (F(0),))
    with pytest.raises(ValueError):
        LoopConfig(SL2, (SlotWeight((F(0),), F(0)),), (F(1),))
    with pytest.raises(ValueError):
        LoopConfig(SL2, (LAM0,), (F(1), F(2)))


def test_cyclotomic_points_are_parsed():
    cfg = LoopConfig(SL2, (LAM0,) * 3, ("1", "e", "e^2"), order=3)
    assert cfg.points[1] == CycScalar.gen(3)


# -- hat and tilde actions --------------------------------------------------------------

def test_k_one_reduces_to_single_module():
    a = F(3)
    lm = LoopModule(LoopConfig(SL2, (LAM0,), (a,), D=2, H=2))
    bm = lm.slots[0]
    for key in (("loop", "E21", -1, 2), ("central", 0, 0, -1), ("skew", -1, 1)):
        for s in bm.basis(1):
            want = {(s2,): x * a ** key[-1] for s2, x in bm.mode_key(key, s).items()}
            assert lm.hat_key(key, (s,)) == want


def test_d0_on_top_vector():
    w = SlotWeight((F(1),), F(2), F(5, 2))
    lm = LoopModule(LoopConfig(SL2, (w, LAM0), (F(1), F(2)), D=1, H=1))
    assert lm.hat_action({("deg", 0): 1}, lm.vacuum_vec()) == {lm.vacuum(): F(5, 2)}


def test_cartan_modes_on_top_vector():
    w1, w2 = SlotWeight((F(1),), F(1)), SlotWeight((F(3),), F(1))
    lm = LoopModule(LoopConfig(SL2, (w1, w2), (F(2), F(-3)), D=1, H=1))
    for n in (-2, -1, 1, 2):
        got = lm.hat_action({("loop", "H1", 0, n): 1}, lm.vacuum_vec())
        assert got == {lm.vacuum(): F(2) ** n * 1 + F(-3) ** n * 3}


def test_d1_reads_sector(lm2):
    w = ((lm2.vacuum(), 3))
    assert lm2.tilde_key(("deg", 1), w) == {w: 3}
    assert lm2.tilde_key(("deg", 1), (lm2.vacuum(), 0)) == {}


def test_degree_bookkeeping(lm2):
    for key in (("loop", "E12", 0, 2), ("central", 0, 0, -1), ("skew", 1, -2)):
        for states in lm2.basis()[:10]:
            for (s2, l2) in lm2.tilde_key(key, (states, 1)):
                assert l2 == 1 + key[-1]


@pytest.mark.parametrize("x,y,value", [("t1*E12", "t1^-1*E21", 0),
                                         ("t0*t1*E12", "t0^-1*t1^-1*E21", 2)])
def test_tilde_module_axiom_sample(lm2, x, y, value):
    cfg = AlgebraConfig(SL2, F(0))
    a, b = parse_elem(x, SL2), parse_elem(y, SL2)
    w = lm2.omega_vector(0)
    lhs = lm2.tilde_action(a, lm2.tilde_action(b, w))
    vec_iadd(lhs, lm2.tilde_action(b, lm2.tilde_action(a, w)), -1)
    assert lhs == lm2.tilde_action(bracket(cfg, a, b), w)
    # the bracket is h + m0 k0 + m1 k1; only k0 survives, once per slot of level one
    assert lhs == ({(lm2.vacuum(), 0): value} if value else {})


@pytest.mark.parametrize("offset,expect_ok", [(0, True), (1, False)])
def test_hat_module_axiom_and_scaling_control(offset, expect_ok):
    lm = LoopModule(cfg2(D=1, H=1, scaling_offset=offset))
    cfg = AlgebraConfig(SL2, F(0))
    keys = basis_keys(SL2, 1, include_d1=False)
    rng = random.Random(5)
    failures = 0
    for _ in range(60):
        a, b = rng.choice(keys), rng.choice(keys)
        for states in lm.basis():
            v = {states: F(1)}
            lhs = lm.hat_action({a: 1}, lm.hat_key(b, states))
            vec_iadd(lhs, lm.hat_action({b: 1}, lm.hat_key(a, states)), -1)
            vec_iadd(lhs, lm.hat_action(bracket(cfg, {a: 1}, {b: 1}), v), -1)
            failures += bool(lhs)
    assert (failures == 0) == expect_ok


def test_power_expansion_matches_direct(lm2):
    for key in (("loop", "E21", 0, 1), ("loop", "E12", -1, 0), ("loop", "E21", 1, -1)):
        for states in lm2.basis()[:8]:
            for N in (1, 2, 3):
                assert lm2.power_key(key, states, N) == lm2.power_direct(key, states, N)


# -- characters -------------------------------------------------------------------------

def test_psi_formula_matches_action(lm2):
    pc = psi_char(lm2)
    assert pc.mismatches == []
    assert pc.values[("k0", 2)] == 2
    assert pc.values[("k0", 1)] == 0


def test_psi_d0_modes_carry_mu_term():
    w = SlotWeight((F(1),), F(2), F(1, 3))
    cfg = LoopConfig(SL2, (w, LAM0), (F(2), F(-1)), mu=F(1, 2), D=1, H=1)
    lm = LoopModule(cfg)
    for n in (-1, 1, 2):
        val = psi_hat_direct(lm, ("d0", n))
        assert val == F(2) ** n * (F(1, 3) + 1) + F(-1) ** n * F(1, 2)
        assert val == psi_hat_formula(cfg, ("d0", n))
    assert psi_hat_direct(lm, ("d0", 0)) == F(1, 3)


def test_generator_element_for_d0():
    assert generator_element(("d0", 2)) == {("skew", 0, 2): F(-1, 2)}
    assert generator_element(("d0", 0)) == {("deg", 0): 1}


def test_detect_r():
    assert detect_r(LoopModule(LoopConfig(SL2, (LAM0,), (F(3),), D=1, H=1))) == 1
    assert detect_r(LoopModule(cfg2(D=1, H=1))) == 2
    other = SlotWeight((F(0),), F(2))
    assert detect_r(LoopModule(LoopConfig(SL2, (LAM0, other), (F(1), F(-1)), D=1, H=1))) == 1


# -- normalization and sigma ------------------------------------------------------------------

def test_block_witness_witnesses():
    w = block_witness(cfg2(), 2)
    assert w.tau == (0, 1) and w.base == (F(-1),) and w.eps == -1
    assert block_witness(LoopConfig(SL2, (LAM0,), (F(3),)), 1).base == (F(3),)
    other = SlotWeight((F(0),), F(2))
    assert block_witness(LoopConfig(SL2, (LAM0, other), (F(1), F(-1))), 2) is None
    with pytest.raises(ValueError):
        block_witness(LoopConfig(SL2, (LAM0,), (F(3),)), 2)


def test_block_witness_cyclotomic_permutation():
    e = CycScalar.gen(3)
    cfg = LoopConfig(SL2, (LAM0,) * 3, (e ** 2 * 5, e * 5, F(5)), order=3, D=0, H=0)
    w = block_witness(cfg, 3)
    assert w is not None and w.eps == e
    assert all(cfg.points[t] == e ** (j + 1) * w.base[0] for j, t in enumerate(w.tau))
    ncfg = normalize(cfg, w)
    assert ncfg.points == tuple(e ** j * w.base[0] for j in (1, 2, 3))
    lm = LoopModule(ncfg)
    assert detect_r(lm) == 3
    sig = Sigma(lm, block_witness(ncfg, 3))
    omega = lm.omega_vector(1)
    assert sig.apply(omega) == {(lm.vacuum(), 1): e}


def test_sigma_requires_normalized_order():
    e = CycScalar.gen(3)
    cfg = LoopConfig(SL2, (LAM0,) * 3, (e * 5, F(5), e ** 2 * 5), order=3, D=0, H=0)
    w = block_witness(cfg, 3)
    assert w.tau != (0, 1, 2)
    with pytest.raises(ValueError):
        Sigma(LoopModule(cfg), w)


def test_sigma_order_and_projectors(lm2):
    sig = Sigma(lm2, block_witness(lm2.cfg, 2))
    rng = random.Random(2)
    basis = lm2.basis()
    for _ in range(20):
        w = {(rng.choice(basis), rng.randint(-2, 2)): F(rng.randint(1, 5)) for _ in range(3)}
        assert sig.power(2, w) == w and sig.apply(sig.apply(w)) == w
        p0, p1 = sig.project(0, w), sig.project(1, w)
        total = dict(p0)
        vec_iadd(total, p1)
        assert total == w
        assert sig.project(0, p0) == p0 and sig.project(1, p0) == {}
        assert sig.apply(p1) == {k: -x for k, x in p1.items()}


def test_sigma_commutes_with_action(lm2):
    sig = Sigma(lm2, block_witness(lm2.cfg, 2))
    rng = random.Random(9)
    keys = basis_keys(SL2, 2, include_d1=True)
    basis = [s for s in lm2.basis() if lm2.weight(s)[0] <= 1]
    for _ in range(40):
        key = rng.choice(keys)
        w = {(rng.choice(basis), rng.randint(-1, 1)): F(1)}
        assert sig.apply(lm2.tilde_key(key, next(iter(w)))) == \
            lm2.tilde_action({key: 1}, sig.apply(w)), key


@pytest.mark.parametrize("l", [-2, -1, 0, 1, 2])
def test_omega_components(lm2, l):
    sig = Sigma(lm2, block_witness(lm2.cfg, 2))
    om = lm2.omega_vector(l)
    for i in range(2):
        assert sig.project(i, om) == (om if (l - i) % 2 == 0 else {})
    assert sig.component_of_omega(l) == l % 2


def test_omega_is_killed_by_positive_part(lm2):
    om = lm2.omega_vector(0)
    for key in (("loop", "E12", 0, 1), ("loop", "E12", 0, -2), ("loop", "E21", 1, 0),
                ("loop", "H1", 1, 1), ("skew", 1, 2), ("central", 1, 2, -1)):
        assert lm2.tilde_key(key, (lm2.vacuum(), 0)) == {}, key
    assert lm2.tilde_action({("loop", "E21", 0, 0): 1}, om) == {}   # level-one top is f(0)-singular


def test_eigen_slices_sum_to_slice(lm2):
    sig = Sigma(lm2, block_witness(lm2.cfg, 2))
    for wt, states in lm2.slices().items():
        for l in (0, 1):
            dims = eigen_slice_dims(sig, states, l)
            assert sum(dims) == len(states) == vectors_rank(
                [{(s, l): F(1)} for s in states])


def test_weights_lie_below_top(lm2):
    slices = lm2.slices()
    assert slices[(0, (0,))] == [lm2.vacuum()]
    for depth, eta in slices:
        assert depth > 0 or eta == (0,)
