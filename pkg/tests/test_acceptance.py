"""Acceptance criteria, one printed PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v``; the lines appear even when
output capture is on.
"""
from fractions import Fraction as F

import pytest

from eala.billig import BilligModule
from eala.exact.scalars import as_field
from eala.harness import suites as S
from eala.harness.report import FAIL, PASS
from eala.harness.scenario import ScenarioConfig
from eala.loop import LoopModule
from eala.toroidal import SimpleAlgebra

SL2 = SimpleAlgebra(1)

LEVEL_ONE_PAIR = {
    "name": "sl2 level one, a = (1, -1)",
    "algebra": {"type": "A", "rank": 1},
    "weights": [{"finite": [0], "c": 1}, {"finite": [0], "c": 1}],
    "points": ["1", "-1"],
    "window": {"depth": 2, "height": 2},
    "sampling": {"mode_bound": 2, "samples": 10, "seed": 7},
}


def scenario(**over):
    return ScenarioConfig.from_dict(dict(LEVEL_ONE_PAIR, **over))


@pytest.fixture
def verdict(capsys):
    def emit(number, title, ok, detail=""):
        with capsys.disabled():
            print(f"\ncriterion {number:2d} {'PASS' if ok else 'FAIL'}: {title}"
                  + (f" ({detail})" if detail else ""))
        assert ok, detail
    return emit


def summary(report):
    return "; ".join(f"{c.name}={c.status}" + (f" [{c.witness}]" if c.status == FAIL and
                                               c.witness else "") for c in report.checks)


def test_criterion_01_jacobi_identity(verdict):
    rep = S.run_jacobi(SL2, [F(0), F(1), F(1, 2)], bound=2)
    triples = sum(c.params.get("triples", 0) for c in rep.checks[:3])
    verdict(1, "Jacobi identity on all triples with |m0|,|m1| <= 2, mu in {0, 1, 1/2}",
            rep.status == PASS and triples > 0, f"{triples} triples; {summary(rep)}")


def test_criterion_02_single_module_axiom(verdict):
    results = []
    for mu in (F(0), F(1, 2)):
        bm = BilligModule(SL2, (F(0),), F(1), F(0), mu, D=3, H=3, coords="verma")
        n, esc, fail = S.mode_axiom_check(bm, mu, 2)
        results.append((mu, n, esc, fail))
    ok = all(fail is None and esc == 0 and n > 0 for _, n, esc, fail in results)
    detail = ", ".join(f"mu={mu}: {n} checks, {esc} escapes" + (
        "" if fail is None else f", witness {S._axiom_witness(fail)}")
        for mu, n, esc, fail in results)
    verdict(2, "module axiom for a single module, c = 1, window 3/3, modes <= 2", ok, detail)


def test_criterion_03_field_calculus_equivalence(verdict):
    rep = S.run_field_equivalence(SL2, (F(0),), F(1), [F(0), F(1, 2)], samples=20, depth=2)
    verdict(3, "quasi-associativity residual and field vs mode action on 20 samples",
            rep.status == PASS, summary(rep))


def test_criterion_04_generalized_vandermonde(verdict):
    inst = [(k, N, [F(1), F(2), F(3)][:k]) for k in range(1, 4) for N in range(4)]
    inst.append((2, 2, [F(1), as_field("e", 2)]))
    rep = S.run_vandermonde(inst)
    verdict(4, "nonzero determinants for k <= 3, N <= 3 and a = (1, e_2)",
            rep.status == PASS and len(rep.checks) == 13, f"{len(rep.checks)} determinants")


def test_criterion_05_extraction_oracle(verdict):
    lm = LoopModule(scenario().loop_config())
    rep = S.run_extraction(lm, modes=(-1, 0, 1))
    n = sum(c.params["checks"] for c in rep.checks)
    verdict(5, "extracted slot vectors equal direct k1, x, d1, L actions for m in {-1,0,1}",
            rep.status == PASS, f"{n} vectors; {summary(rep)}")


def test_criterion_06_highest_weight_kernel(verdict):
    rep = S.run_hwv_kernel(scenario())
    verdict(6, "joint positive kernel is the top line; control kernel grows",
            rep.status == PASS and len(rep.checks) == 2, summary(rep))


def test_criterion_07_cyclicity(verdict):
    rep = S.run_cyclicity(scenario(), seeds=10, seed_depth=2)
    verdict(7, "10 seeds reach the top vector; descending closure fills the window",
            rep.status == PASS and len(rep.checks) == 11, summary(rep))


def test_criterion_08_decomposition(verdict):
    rep = S.run_decomposition(scenario(), l_bound=2)
    verdict(8, "r = 2 components: direct sums, generation, top-vector reachability |l| <= 2",
            rep.status == PASS and rep.params.get("r") == 2, summary(rep))


def test_criterion_09_integrability(verdict):
    parts = []
    ok = True
    for weights, points in (([{"finite": [0], "c": 1}], ["1"]), (LEVEL_ONE_PAIR["weights"],
                                                                 ["1", "-1"])):
        sc = scenario(weights=weights, points=points, window={"depth": 1, "height": 2})
        rep = S.run_integrability(sc, nmax=4, bound=2, depth=1)
        ok = ok and rep.status == PASS
        parts.append(f"k={len(points)}: {summary(rep)}")
    verdict(9, "real-root generators |m|,|n| <= 2 nilpotent with N <= 4; non-integral control",
            ok, " | ".join(parts))


def test_criterion_10_sugawara(verdict):
    sc = scenario(weights=[{"finite": [0], "c": 1}], points=["1"],
                  window={"depth": 3, "height": 3})
    rep = S.run_sugawara(sc, depth=3, samples=10)
    cc = rep.checks[0].params["central_charge"]
    verdict(10, "Sugawara relations, coset commutation and central charge at c = 1",
            rep.status == PASS and cc == "1", f"central charge {cc}; {summary(rep)}")
