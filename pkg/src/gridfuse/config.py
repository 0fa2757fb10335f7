"""Scenario configuration files.

A scenario is one JSON document::

    {
      "name": "fig6a",
      "seed": 0,
      "topology": {"n": 16, "d0": 4, "row_links": true, "hierarchy": null},
      "fusion": {"name": "max", "weights": null, "cost": 1, "prf": null},
      "readings": {"source": "explicit", "values": ["12", "5", ...]},
      "faults": {"failed_nodes": [], "failed_links": [[6, 5]], ...},
      "analysis": {"kind": "detect"},
      "output": {"dir": null, "message_log": false},
      "expect": {"correct": true, "detected": true}
    }

``readings.source`` is ``explicit`` (``values`` in node-id order),
``random`` (``low``/``high``/``denominator``, drawn with ``seed``) or
``planted_max`` (``m`` nodes share the maximum).  ``analysis.kind`` is
``none``, ``detect`` or ``montecarlo`` (``trials``, ``m``, ``p_f`` list,
``failure_mode``, ``workers``).  ``hierarchy`` is
``{"clusters": [grid, ...], "top": grid}``.

``ScenarioConfig.from_dict(cfg.to_dict()) == cfg`` for every valid config.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple

from .analysis import exact, planted_max
from .errors import ConfigError, InputError, MissingReading
from .fusion import FusionSpec, as_reading, builtin, from_prf
from .prf_syntax import parse
from .sim import FaultPlan
from .topology import GridParams, Topology, build_grid, build_hierarchical


def _grid(d: Mapping[str, Any]) -> GridParams:
    _only(d, {"n", "d0", "row_links"}, "grid")
    try:
        return GridParams(int(d["n"]), int(d["d0"]), bool(d.get("row_links", False)))
    except KeyError as exc:
        raise ConfigError(f"grid needs field {exc}") from None


def _grid_dict(p: GridParams) -> dict:
    return {"n": p.n, "d0": p.d0, "row_links": p.row_links}


def _only(d: Mapping[str, Any], allowed: set, what: str) -> None:
    if not isinstance(d, Mapping):
        raise ConfigError(f"{what} must be an object")
    extra = set(d) - allowed
    if extra:
        raise ConfigError(f"unknown {what} fields: {sorted(extra)}")


@dataclass(frozen=True)
class TopologyConfig:
    grid: GridParams
    clusters: Optional[Tuple[GridParams, ...]] = None

    def build(self) -> Topology:
        if self.clusters is None:
            return build_grid(self.grid)
        return build_hierarchical(list(self.clusters), self.grid)

    @property
    def sensor_count(self) -> int:
        if self.clusters is None:
            return self.grid.n
        return sum(c.n for c in self.clusters)

    def to_dict(self) -> dict:
        if self.clusters is None:
            return {**_grid_dict(self.grid), "hierarchy": None}
        return {
            "hierarchy": {
                "clusters": [_grid_dict(c) for c in self.clusters],
                "top": _grid_dict(self.grid),
            }
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "TopologyConfig":
        _only(d, {"n", "d0", "row_links", "hierarchy"}, "topology")
        h = d.get("hierarchy")
        if h is None:
            return cls(_grid({k: v for k, v in d.items() if k != "hierarchy"}))
        _only(h, {"clusters", "top"}, "hierarchy")
        if set(d) - {"hierarchy"}:
            raise ConfigError("a hierarchical topology is described by 'hierarchy' alone")
        top = _grid(h["top"])
        clusters = tuple(_grid(c) for c in h["clusters"])
        return cls(top, clusters)


@dataclass(frozen=True)
class FusionConfig:
    name: str = "max"
    weights: Optional[Tuple[str, ...]] = None
    cost: int = 1
    prf: Optional[str] = None  # s-expression, used when name == "prf"

    def build(self) -> FusionSpec:
        if self.name == "prf":
            if self.prf is None:
                raise ConfigError("fusion 'prf' needs a 'prf' expression")
            return from_prf(parse(self.prf), cost=self.cost)
        return builtin(self.name, self.weights, self.cost)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "weights": None if self.weights is None else list(self.weights),
            "cost": self.cost,
            "prf": self.prf,
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "FusionConfig":
        _only(d, {"name", "weights", "cost", "prf"}, "fusion")
        w = d.get("weights")
        return cls(
            name=d.get("name", "max"),
            weights=None if w is None else tuple(str(as_reading(x)) for x in w),
            cost=int(d.get("cost", 1)),
            prf=d.get("prf"),
        )


@dataclass(frozen=True)
class ReadingsConfig:
    source: str = "explicit"
    values: Optional[Tuple[str, ...]] = None
    low: str = "0"
    high: str = "100"
    denominator: int = 1
    m: int = 1

    def generate(self, count: int, seed: int) -> Dict[int, Fraction]:
        if self.source == "explicit":
            if not self.values:
                return {}
            return {i: as_reading(v) for i, v in enumerate(self.values)}
        if self.source == "random":
            rng = random.Random(seed)
            lo = int(as_reading(self.low) * self.denominator)
            hi = int(as_reading(self.high) * self.denominator)
            return {i: Fraction(rng.randint(lo, hi), self.denominator) for i in range(count)}
        if self.source == "planted_max":
            return planted_max(count, self.m, seed)
        raise ConfigError(f"unknown readings source {self.source!r}")

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "values": None if self.values is None else list(self.values),
            "low": self.low,
            "high": self.high,
            "denominator": self.denominator,
            "m": self.m,
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "ReadingsConfig":
        _only(d, {"source", "values", "low", "high", "denominator", "m"}, "readings")
        source = d.get("source", "explicit")
        if source not in ("explicit", "random", "planted_max"):
            raise ConfigError(f"unknown readings source {source!r}")
        vals = d.get("values")
        return cls(
            source=source,
            values=None if vals is None else tuple(str(as_reading(v)) for v in vals),
            low=str(as_reading(d.get("low", 0))),
            high=str(as_reading(d.get("high", 100))),
            denominator=int(d.get("denominator", 1)),
            m=int(d.get("m", 1)),
        )


@dataclass(frozen=True)
class AnalysisConfig:
    kind: str = "none"
    trials: int = 0
    m: int = 1
    p_f: Tuple[str, ...] = ()
    failure_mode: str = "reading"
    workers: int = 1

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "trials": self.trials,
            "m": self.m,
            "p_f": list(self.p_f),
            "failure_mode": self.failure_mode,
            "workers": self.workers,
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "AnalysisConfig":
        _only(d, {"kind", "trials", "m", "p_f", "failure_mode", "workers"}, "analysis")
        kind = d.get("kind", "none")
        if kind not in ("none", "detect", "montecarlo"):
            raise ConfigError(f"unknown analysis kind {kind!r}")
        return cls(
            kind=kind,
            trials=int(d.get("trials", 0)),
            m=int(d.get("m", 1)),
            p_f=tuple(str(exact(p)) for p in d.get("p_f", ())),
            failure_mode=d.get("failure_mode", "reading"),
            workers=int(d.get("workers", 1)),
        )


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    topology: TopologyConfig
    fusion: FusionConfig = field(default_factory=FusionConfig)
    readings: ReadingsConfig = field(default_factory=ReadingsConfig)
    faults: FaultPlan = field(default_factory=FaultPlan)
    analysis: AnalysisConfig = field(default_factory=AnalysisConfig)
    seed: int = 0
    description: str = ""
    output_dir: Optional[str] = None
    message_log: bool = False
    expect: Optional[Dict[str, bool]] = None

    def validate(self) -> None:
        """Cross-field checks; raises ``ConfigError`` or a more specific ``InputError``."""
        self.fusion.build()
        n = self.topology.sensor_count
        if self.readings.source == "explicit" and self.readings.values is not None:
            if len(self.readings.values) < n:
                raise MissingReading(f"{len(self.readings.values)} readings given for {n} sensors")
            if len(self.readings.values) > n:
                raise ConfigError(f"{len(self.readings.values)} readings given for {n} sensors")
        if self.readings.source == "planted_max" and not 1 <= self.readings.m <= n:
            raise ConfigError(f"planted max needs 1 <= M <= N, got M={self.readings.m}, N={n}")
        if self.fusion.weights is not None and len(self.fusion.weights) < n:
            raise ConfigError(f"{len(self.fusion.weights)} weights given for {n} sensors")
        a = self.analysis
        if a.kind == "montecarlo":
            if a.trials < 1:
                raise ConfigError(f"montecarlo needs trials >= 1, got {a.trials}")
            if not 1 <= a.m <= n:
                raise ConfigError(f"montecarlo needs 1 <= M <= N, got M={a.m}, N={n}")
            if not a.p_f:
                raise ConfigError("montecarlo needs a non-empty p_f list")
            if any(not 0 <= Fraction(p) <= 1 for p in a.p_f):
                raise ConfigError("every p_f must lie in [0, 1]")
            if a.failure_mode not in ("crash", "reading"):
                raise ConfigError(f"unknown failure_mode {a.failure_mode!r}")
            if self.topology.clusters is not None:
                raise ConfigError("montecarlo analysis runs on flat grids only")
        if a.kind == "detect" and self.topology.clusters is not None:
            raise ConfigError("detection is defined for flat grids only")

    def build_readings(self) -> Dict[int, Fraction]:
        return self.readings.generate(self.topology.sensor_count, self.seed)

    def with_seed(self, seed: int) -> "ScenarioConfig":
        faults = self.faults
        if faults.iid_node_failure is not None:
            faults = replace(faults, rng_seed=seed)
        return replace(self, seed=seed, faults=faults)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "description": self.description,
            "seed": self.seed,
            "topology": self.topology.to_dict(),
            "fusion": self.fusion.to_dict(),
            "readings": self.readings.to_dict(),
            "faults": self.faults.to_dict(),
            "analysis": self.analysis.to_dict(),
            "output": {"dir": self.output_dir, "message_log": self.message_log},
            "expect": self.expect,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "ScenarioConfig":
        _only(
            d,
            {"name", "description", "seed", "topology", "fusion", "readings", "faults", "analysis", "output", "expect"},
            "scenario",
        )
        if "topology" not in d:
            raise ConfigError("scenario needs a topology")
        out = d.get("output") or {}
        _only(out, {"dir", "message_log"}, "output")
        try:
            cfg = cls(
                name=str(d.get("name", "scenario")),
                description=str(d.get("description", "")),
                seed=int(d.get("seed", 0)),
                topology=TopologyConfig.from_dict(d["topology"]),
                fusion=FusionConfig.from_dict(d.get("fusion") or {}),
                readings=ReadingsConfig.from_dict(d.get("readings") or {}),
                faults=FaultPlan.from_dict(d.get("faults") or {}),
                analysis=AnalysisConfig.from_dict(d.get("analysis") or {}),
                output_dir=out.get("dir"),
                message_log=bool(out.get("message_log", False)),
                expect=d.get("expect"),
            )
        except InputError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"malformed scenario: {exc}") from exc
        cfg.validate()
        return cfg


def load(path: str | Path) -> ScenarioConfig:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc
    return ScenarioConfig.from_dict(data)


SCENARIO_DIR = Path(__file__).parent / "scenario_files"


def builtin_names() -> List[str]:
    return sorted(p.stem for p in SCENARIO_DIR.glob("*.json"))


def load_builtin(name: str) -> ScenarioConfig:
    path = SCENARIO_DIR / f"{name.lower()}.json"
    if not path.exists():
        raise ConfigError(f"no built-in scenario {name!r}; choose from {builtin_names()}")
    return load(path)
