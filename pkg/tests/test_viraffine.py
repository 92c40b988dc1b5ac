from fractions import Fraction as F
import random

import pytest

from eala.exact.linalg import exact_det, nullspace, vec_iadd
from eala.toroidal import SimpleAlgebra
from eala.viraffine import (HWParams, LazyIrreducible, TruncationEscape, VAAlgebra,
                            VermaModule,
                            barlambda_from_lambda, fbar_bracket, fock_module,
                            irreducible_quotient, multiplicity_tsv, sugawara_central_charge,
                            sugawara_operator, tilde_kv)

SL2 = SimpleAlgebra(1)
FBAR = VAAlgebra(SL2)


def verma(lam=(F(0),), c=F(1), d0=F(0), kv=F(0), parts=("vir", "affine", "heis")):
    return VermaModule(VAAlgebra(SL2, parts), HWParams(tuple(lam), c, d0, kv))


def commutator(mod, a, b, v):
    out = mod.act_vec(a, mod.act_vec(b, v))
    vec_iadd(out, mod.act_vec(b, mod.act_vec(a, v)), -1)
    return out


# -- brackets -------------------------------------------------------------------------

def test_fbar_bracket_examples():
    assert fbar_bracket(FBAR, ("L", 2), ("L", -2)) == {("L", 0): 4, "Kv": F(1, 2)}
    assert fbar_bracket(FBAR, ("d1", 1), ("k1", -1)) == {"K0": 1}
    assert fbar_bracket(FBAR, ("L", 1), ("E12", -1)) == {("E12", 0): 1}


def test_fbar_bracket_affine_central_term():
    assert fbar_bracket(FBAR, ("E12", 2), ("E21", -2)) == {("H1", 0): 1, "K0": 2}
    assert fbar_bracket(FBAR, ("k1", 1), ("k1", -1)) == {}


@pytest.mark.parametrize("c,mu,kv", [(F(1), F(0), 0), (F(1), F(1, 2), 12), (F(2), F(1), 48)])
def test_barlambda_from_lambda(c, mu, kv):
    p = barlambda_from_lambda([F(0)], c, F(0), mu)
    assert p.kv == kv and p.k1val == 0 and p.d1val == 0
    assert tilde_kv(c, mu) == kv - 2


# -- Verma enumeration and action -----------------------------------------------------

def test_verma_basis_small_windows():
    V = verma()
    assert V.verma_basis(0, 0) == {(0, (0,)): [()]}
    assert V.verma_basis(0, 1)[(0, (1,))] == [(("E21", 0),)]
    # weight spaces are complete: f(0)e(-1) shares the weight -delta0
    w = V.verma_basis(1, 0)[(1, (0,))]
    assert set(w) == {(("L", -1),), (("H1", -1),), (("k1", -1),), (("d1", -1),),
                      (("E21", 0), ("E12", -1))}


def test_verma_basis_matches_brute_force_partition_count():
    # Fock factor: depth-n space has dimension = number of 2-coloured partitions of n
    fock = verma(parts=("heis",))
    spaces = fock.verma_basis(4, 0)
    counts = [len(spaces.get((n, (0,)), [])) for n in range(5)]
    assert counts == [1, 2, 5, 10, 20]


def test_act_examples():
    V = verma(lam=(F(1),), c=F(3), d0=F(5))
    v = {(): F(1)}
    # [L(1), L(-1)] = 2 L(0) and L(0) v = -d0 v
    assert V.act_word([("L", 1), ("L", -1)], v) == {(): F(-10)}
    assert V.act_word([("d1", 1), ("k1", -1)], v) == {(): F(3)}
    assert V.act(("E12", 0), ()) == {}
    assert V.act(("H1", 0), ()) == {(): F(1)}


def test_act_respects_bracket_on_sampled_vectors():
    V = verma(lam=(F(1, 2),), c=F(2), d0=F(1), kv=F(3))
    rng = random.Random(7)
    keys = [(x, m) for x in FBAR.labels for m in range(-2, 3)]
    basis = [m for ms in V.verma_basis(2, 1).values() for m in ms]
    for _ in range(60):
        a, b = rng.choice(keys), rng.choice(keys)
        mon = rng.choice(basis)
        v = {mon: F(1)}
        lhs = commutator(V, a, b, v)
        br, k0, kv = FBAR.bracket(a, b)
        rhs = {}
        for key, x in br.items():
            vec_iadd(rhs, V.act_vec(key, v), x)
        vec_iadd(rhs, v, k0 * V.params.c + kv * V.params.kv)
        assert lhs == rhs, (a, b, mon)


# -- contravariant form -----------------------------------------------------------------

def test_form_normalization_and_weight_orthogonality():
    V = verma(c=F(2))
    assert V.contravariant_form({(): F(1)}, {(): F(1)}) == 1
    assert V.contravariant_form({(("H1", -1),): F(1)}, {(("k1", -1),): F(1)}) == 0


def test_fock_gram_depth_one():
    for c in (F(1), F(-3, 2), F(7)):
        fock = verma(c=c, parts=("heis",))
        g = fock.gram([(("k1", -1),), (("d1", -1),)])
        assert g.dense() == [[c, 0], [0, c]]


def test_form_symmetric_and_contravariant():
    V = verma(lam=(F(1),), c=F(1), d0=F(0), kv=F(-2))
    rng = random.Random(3)
    spaces = V.verma_basis(2, 1)
    for w, basis in spaces.items():
        g = V.gram(basis).dense()
        assert all(g[i][j] == g[j][i] for i in range(len(basis)) for j in range(len(basis)))
    keys = [(x, m) for x in FBAR.labels for m in range(-2, 3)]
    all_mons = [m for ms in spaces.values() for m in ms]
    for _ in range(40):
        x = rng.choice(keys)
        u = rng.choice(all_mons)
        xu = V.act(x, u)
        if not xu:
            continue
        target_w = V.weight(next(iter(xu)))
        if target_w not in spaces:
            continue
        for w in spaces[target_w]:
            lhs = V.contravariant_form(xu, {w: F(1)})
            rhs = V.contravariant_form({u: F(1)}, V.act(FBAR.omega(x), w))
            assert lhs == rhs


# -- quotients ----------------------------------------------------------------------------

def test_fock_dims_and_zero_radical():
    for D, dims in ((0, [1]), (1, [1, 2]), (2, [1, 2, 5])):
        fock = fock_module(SL2, F(1), D)
        assert [fock.dim((n, (0,))) for n in range(D + 1)] == dims
    fock = fock_module(SL2, F(5, 3), 3)
    for w, basis in fock.weights.items():
        assert nullspace(fock.verma.gram(basis)) == []
    with pytest.raises(ValueError):
        fock_module(SL2, F(0), 1)


def test_affine_level_one_radical():
    mod = irreducible_quotient(SL2, HWParams((F(0),), F(1)), 2, 2, parts=("affine",))
    assert mod.dim((0, (1,))) == 0          # f(0) v is singular at Lambda_0
    assert [sum(mod.dim(w) for w in mod.weights if w[0] == d) for d in range(3)] == [1, 3, 4]


def test_quotient_gram_is_invertible():
    mod = irreducible_quotient(SL2, HWParams((F(1),), F(1), F(0), F(-2)), 2, 2,
                               parts=("vir", "affine"))
    for w in mod.weights:
        reps = mod.space(w).reps
        if reps:
            assert exact_det(mod.verma.gram(reps)) != 0
    assert mod.dim((0, (0,))) == 1


def test_depth_zero_module_is_one_dimensional():
    mod = irreducible_quotient(SL2, HWParams((F(3),), F(1)), 0, 0)
    assert mod.basis_vectors() == [((0, (0,)), 0)]


def test_truncation_escape_is_raised():
    mod = irreducible_quotient(SL2, HWParams((F(1),), F(1)), 1, 1, parts=("affine",))
    v = mod.highest_weight_vector()
    q = mod.act(("E21", -1), v)
    with pytest.raises(TruncationEscape):
        mod.act(("E21", -1), q)


def test_cross_construction_dimensions():
    # V(vir + affine, kv - 2) (x) Fock has the characters of the direct f-bar quotient
    lam, c, mu, D, H = (F(1),), F(1), F(1, 2), 3, 1
    direct = irreducible_quotient(SL2, barlambda_from_lambda(lam, c, F(0), mu), D, H)
    gpart = irreducible_quotient(SL2, HWParams(lam, c, F(0), tilde_kv(c, mu)), D, H,
                                 parts=("vir", "affine"))
    fock = fock_module(SL2, c, D)
    for (depth, eta) in direct.weights:
        tensor = sum(gpart.dim((d, eta)) * fock.dim((depth - d, (0,)))
                     for d in range(depth + 1) if (d, eta) in gpart.weights)
        assert direct.dim((depth, eta)) == tensor, (depth, eta)


LAZY_CASES = [
    (("affine",), HWParams((F(0),), F(1))),
    (("affine",), HWParams((F(1, 3),), F(2, 5))),
    (("vir", "affine"), HWParams((F(0),), F(1), F(0), F(-2))),
    (("vir", "affine"), HWParams((F(1),), F(1), F(1, 2), F(10))),
    (("vir", "affine", "heis"), HWParams((F(0),), F(1))),
    (("heis",), HWParams((F(0),), F(3))),
    (("vir",), HWParams((F(0),), F(1), F(0), F(1, 2))),
]


@pytest.mark.parametrize("parts,params", LAZY_CASES)
def test_lazy_quotient_matches_gram_quotient(parts, params):
    gram = irreducible_quotient(SL2, params, 3, 3, parts=parts)
    lazy = LazyIrreducible(VAAlgebra(SL2, parts), params, 3, 3)
    dims = {w: gram.dim(w) for w in gram.weights if gram.dim(w)}
    assert {w: lazy.dim(w) for w in lazy.weights if lazy.dim(w)} == dims


def test_lazy_quotient_respects_bracket():
    alg = VAAlgebra(SL2, ("vir", "affine"))
    params = HWParams((F(0),), F(1), F(0), F(-2))
    mod = LazyIrreducible(alg, params, 4, 3)
    rng = random.Random(1)
    keys = [(x, m) for x in alg.labels for m in range(-2, 3)]
    basis = mod.basis_vectors()
    checked = 0
    for _ in range(200):
        a, b = rng.choice(keys), rng.choice(keys)
        v = {rng.choice(basis): F(1)}
        try:
            lhs = mod.act(a, mod.act(b, v))
            vec_iadd(lhs, mod.act(b, mod.act(a, v)), -1)
            br, k0, kv = alg.bracket(a, b)
            rhs = {}
            for key, x in br.items():
                vec_iadd(rhs, mod.act(key, v), x)
        except TruncationEscape:
            continue
        vec_iadd(rhs, v, k0 * params.c + kv * params.kv)
        assert lhs == rhs, (a, b, v)
        checked += 1
    assert checked > 100


def test_multiplicity_tsv_header_and_rows():
    mod = irreducible_quotient(SL2, HWParams((F(0),), F(1)), 1, 1, parts=("affine",))
    lines = multiplicity_tsv(mod).splitlines()
    assert lines[0] == "depth\tfinite_weight\tdim_verma\tdim_irreducible"
    assert "0\t(0)\t1\t1" in lines


# -- Sugawara -------------------------------------------------------------------------------

def sug_commutator(V, m, n, v):
    out = sugawara_operator(V, m, sugawara_operator(V, n, v))
    vec_iadd(out, sugawara_operator(V, n, sugawara_operator(V, m, v)), -1)
    return out


def test_sugawara_relations_sl2_level_one():
    V = verma(lam=(F(0),), c=F(1), parts=("affine",))
    cc = sugawara_central_charge(SL2, F(1))
    assert cc == 1
    basis = [m for ms in V.verma_basis(2, 2).values() for m in ms]
    for mon in basis:
        v = {mon: F(1)}
        # [L(1), e(-1)] = e(0)
        lhs = sugawara_operator(V, 1, V.act(("E12", -1), mon))
        vec_iadd(lhs, V.act_vec(("E12", -1), sugawara_operator(V, 1, v)), -1)
        assert lhs == V.act(("E12", 0), mon)
        for m, n in ((1, -1), (2, -2), (2, -1)):
            rhs = {}
            vec_iadd(rhs, sugawara_operator(V, m + n, v), m - n)
            if m + n == 0:
                vec_iadd(rhs, v, F(m ** 3 - m, 12) * cc)
            assert sug_commutator(V, m, n, v) == rhs, (mon, m, n)


def test_sugawara_critical_level_rejected():
    V = verma(c=F(-2), parts=("affine",))
    with pytest.raises(ValueError):
        sugawara_operator(V, 0, {(): F(1)})
