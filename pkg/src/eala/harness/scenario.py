"""Scenario files: JSON, schema-validated, turned into loop configurations."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import jsonschema

from ..exact.scalars import Scalar, as_field
from ..loop import LoopConfig, SlotWeight
from ..toroidal import SimpleAlgebra

SUITES = ("jacobi", "module-axiom", "vandermonde", "hwv", "cyclicity", "decompose",
          "integrability", "sugawara", "characters")

_TOKEN = {"type": ["string", "integer"]}

SCHEMA: Dict[str, Any] = {
    "type": "object",
    "required": ["algebra", "weights", "points", "window"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "algebra": {
            "type": "object",
            "required": ["type", "rank"],
            "additionalProperties": False,
            "properties": {"type": {"const": "A"}, "rank": {"type": "integer", "minimum": 1}},
        },
        "mu": _TOKEN,
        "cyclotomic_order": {"type": "integer", "minimum": 1},
        "weights": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["finite", "c"],
                "additionalProperties": False,
                "properties": {
                    "finite": {"type": "array", "items": _TOKEN},
                    "c": _TOKEN,
                    "d0": _TOKEN,
                },
            },
        },
        "points": {"type": "array", "minItems": 1, "items": _TOKEN},
        "window": {
            "type": "object",
            "required": ["depth", "height"],
            "additionalProperties": False,
            "properties": {"depth": {"type": "integer", "minimum": 0},
                           "height": {"type": "integer", "minimum": 0}},
        },
        "suites": {"type": "array", "items": {"enum": list(SUITES) + ["all"]}},
        "sampling": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"mode_bound": {"type": "integer", "minimum": 0},
                           "samples": {"type": "integer", "minimum": 0},
                           "seed": {"type": "integer"}},
        },
        "options": {
            "type": "object",
            "propertyNames": {"enum": list(SUITES)},
            "additionalProperties": {"type": "object"},
        },
    },
}


@dataclass
class ScenarioConfig:
    simple: SimpleAlgebra
    mu: Scalar
    order: int
    weights: List[SlotWeight]
    points: List[Scalar]
    D: int
    H: int
    suites: List[str] = field(default_factory=lambda: ["all"])
    mode_bound: int = 2
    samples: int = 10
    seed: int = 0
    options: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    name: str = "scenario"

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ScenarioConfig":
        jsonschema.validate(data, SCHEMA)
        order = data.get("cyclotomic_order", 1)
        simple = SimpleAlgebra(data["algebra"]["rank"])
        weights = []
        for w in data["weights"]:
            finite = tuple(as_field(str(x)) for x in w["finite"])
            weights.append(SlotWeight(finite, as_field(str(w["c"])),
                                      as_field(str(w.get("d0", "0")))))
        points = [as_field(str(a), order) for a in data["points"]]
        sampling = data.get("sampling", {})
        sc = cls(simple, as_field(str(data.get("mu", "0"))), order, weights, points,
                 data["window"]["depth"], data["window"]["height"],
                 list(data.get("suites", ["all"])), sampling.get("mode_bound", 2),
                 sampling.get("samples", 10), sampling.get("seed", 0),
                 dict(data.get("options", {})), data.get("name", "scenario"))
        sc.loop_config()        # enforce the loop invariants up front
        return sc

    @classmethod
    def load(cls, path) -> "ScenarioConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def option(self, suite: str, key: str, default=None):
        return self.options.get(suite, {}).get(key, default)

    def loop_config(self, D: Optional[int] = None, H: Optional[int] = None, **kw) -> LoopConfig:
        return LoopConfig(self.simple, tuple(self.weights), tuple(self.points), mu=self.mu,
                          D=self.D if D is None else D, H=self.H if H is None else H,
                          order=self.order, **kw)

    def selected(self) -> List[str]:
        return list(SUITES) if "all" in self.suites else list(self.suites)
