"""A short tour: build a two-point loop module for sl2 at level one and inspect it.

Run with ``python3 demos/loop_module_tour.py``.
"""
from fractions import Fraction as F

from eala.harness.extract import SpanTracker, extract_components
from eala.harness.report import format_vec
from eala.harness.suites import character_rows, character_tsv
from eala.loop import (LoopConfig, LoopModule, Sigma, SlotWeight, block_witness, psi_char)
from eala.toroidal import SimpleAlgebra, format_key

sl2 = SimpleAlgebra(1)
lam0 = SlotWeight((F(0),), F(1))
cfg = LoopConfig(sl2, (lam0, lam0), (F(1), F(-1)), D=2, H=2)
lm = LoopModule(cfg)

print("window slices (depth, eta) -> dimension")
for w, states in sorted(lm.slices().items()):
    print(f"  {w}: {len(states)}")

pc = psi_char(lm)
print(f"\ncharacter period r = {pc.r}")
for gen in (("k0", 1), ("k0", 2), ("h", "H1", 2)):
    print(f"  psi{gen} = {pc.values.get(gen)}")

# one creation step and its recovery from the span of the result
key = ("loop", "E21", -1, 3)
v = lm.hat_key(key, lm.vacuum())
print(f"\n{format_key(key)} v = {format_vec(v)}")
W = SpanTracker(lm)
W.add(v)
for comp in extract_components(lm, v, "x", 1, "E12", W=W):
    print(f"  slot component of e(1): {format_vec(comp)}")
print(f"  top vector recovered: {W.contains(lm.vacuum_vec())}")

sig = Sigma(lm, block_witness(cfg, pc.r))
print("\ncharacter table by component")
print(character_tsv(character_rows(lm, sig, range(pc.r))))
