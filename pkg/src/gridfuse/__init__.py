"""In-network fusion on grid sensor networks under a two-register node model.

Modules:

``prf`` / ``prf_syntax``
    primitive recursive function trees, evaluation, s-expression syntax
``fusion``
    binary combiners with a per-application comparison cost
``topology``
    branch/backbone grids, row-linked grids, cluster hierarchies
``sim``
    lock-step message-passing simulation with fault injection
``detection``
    row-wise vs column-wise error check
``analysis``
    error probability: closed form, enumeration, Monte Carlo
``kernels``
    compiled or NumPy hot loops behind the analysis
"""

from .detection import DetectionReport, Verdict, detect
from .fusion import FusionSpec, builtin, fold, from_prf
from .prf import catalog, evaluate, validate
from .scenarios import run_scenario
from .sim import FaultPlan, NodeFailure, Outcome, SimReport, simulate
from .topology import GridParams, build_grid, build_hierarchical, theoretical_comparisons

__all__ = [
    "DetectionReport",
    "FaultPlan",
    "FusionSpec",
    "GridParams",
    "NodeFailure",
    "Outcome",
    "SimReport",
    "Verdict",
    "build_grid",
    "build_hierarchical",
    "builtin",
    "catalog",
    "detect",
    "evaluate",
    "fold",
    "from_prf",
    "run_scenario",
    "simulate",
    "theoretical_comparisons",
    "validate",
]
