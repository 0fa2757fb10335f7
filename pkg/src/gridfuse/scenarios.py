"""Named failure scenarios on the 4x4 row-linked grid.

All five use max fusion over the same readings (maximum 30 at node 6,
branch 1, depth 2):

========  ==================================  =======  ========
scenario  failure                             correct  detected
========  ==================================  =======  ========
fig4      none                                yes      no
fig5a     node 6 (the maximum) crashes        no       no
fig5b     node 9 (not the maximum) crashes    yes      no
fig6a     link 6-5 (carries the maximum)      yes      yes
fig6b     link 10-9 (does not carry it)       yes      no
========  ==================================  =======  ========

"correct" refers to the rerouting simulation; "detected" to the
row/column check, which never reroutes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional

from .config import ScenarioConfig, load_builtin
from .detection import DetectionReport, Verdict, detect
from .fusion import Reading
from .sim import SimReport, simulate, true_fold

BUILTIN_SCENARIOS = ("fig4", "fig5a", "fig5b", "fig6a", "fig6b")


@dataclass(frozen=True)
class ScenarioResult:
    name: str
    description: str
    report: SimReport
    detection: Optional[DetectionReport]
    true_value: Optional[Reading]
    expect: Optional[Dict[str, bool]] = None

    @property
    def correct(self) -> bool:
        return self.report.result is not None and self.report.result == self.true_value

    @property
    def detected(self) -> Optional[bool]:
        if self.detection is None:
            return None
        return self.detection.verdict is Verdict.DETECTED

    @property
    def matches_expectation(self) -> Optional[bool]:
        if not self.expect:
            return None
        ok = True
        if "correct" in self.expect:
            ok &= self.expect["correct"] == self.correct
        if "detected" in self.expect:
            ok &= self.expect["detected"] == self.detected
        return ok

    def summary(self) -> str:
        line = f"{self.name}: {self.report.summary()} correct={'yes' if self.correct else 'no'}"
        if self.detection is not None:
            line += f" verdict={self.detection.verdict.value}"
        return line

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "description": self.description,
            "true_value": None if self.true_value is None else str(self.true_value),
            "correct": self.correct,
            "simulation": self.report.to_dict(),
            "detection": None if self.detection is None else self.detection.to_dict(),
            "expect": self.expect,
            "matches_expectation": self.matches_expectation,
        }


def run_config(cfg: ScenarioConfig) -> ScenarioResult:
    topo = cfg.topology.build()
    spec = cfg.fusion.build()
    readings = cfg.build_readings()
    report = simulate(topo, spec, readings, cfg.faults)
    detection = None
    if cfg.analysis.kind == "detect":
        detection = detect(topo, spec, readings, cfg.faults)
    return ScenarioResult(
        name=cfg.name,
        description=cfg.description,
        report=report,
        detection=detection,
        true_value=true_fold(spec, readings),
        expect=cfg.expect,
    )


def run_scenario(name: str) -> ScenarioResult:
    return run_config(load_builtin(name))
