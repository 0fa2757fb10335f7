"""Error probability of the max computation under iid node failures.

Three routes to the same question, "how often is the computed max wrong?":

* ``published_error_probability``: the published closed form
  ``p^M (1-p)^(N-M) / C(N, M)``, evaluated as written;
* ``enumerate_error_probability``: exact sum over all ``2^N`` failure
  subsets, each run through the grid fold;
* ``monte_carlo_error_probability``: seeded simulation with a normal
  approximation confidence interval.

Failures here follow the reading-loss model: a failed node's reading is
gone but relaying still works.  An empty result (every node failed) counts
as wrong, which makes the exact answer ``p^M``.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from statistics import NormalDist
from typing import Any, Dict, List, Optional, Sequence, Union

from . import kernels
from .errors import InputError, TooLarge
from .fusion import FusionSpec
from .sim import FaultPlan, NodeFailure, simulate, true_fold
from .topology import GridParams, build_grid

Number = Union[Fraction, float, int]
MAX_ENUMERATION_N = 25
Z99 = NormalDist().inv_cdf(0.995)


def exact(p: Any) -> Fraction:
    """Exact rational for a probability; floats are read as their decimal repr."""
    if isinstance(p, bool):
        raise InputError(f"not a probability: {p!r}")
    if isinstance(p, (int, Rational)):
        return Fraction(p)
    if isinstance(p, float):
        return Fraction(repr(p))
    if isinstance(p, str):
        try:
            return Fraction(p)
        except ValueError:
            raise InputError(f"not a probability: {p!r}") from None
    raise InputError(f"not a probability: {p!r}")


@dataclass(frozen=True)
class ErrorModel:
    n: int
    m: int
    p_f: Number

    def __post_init__(self) -> None:
        if not 1 <= self.m <= self.n:
            raise InputError(f"need 1 <= M <= N, got N={self.n}, M={self.m}")
        if not 0 <= exact(self.p_f) <= 1:
            raise InputError(f"p_f must lie in [0, 1], got {self.p_f}")

    @property
    def p(self) -> Fraction:
        return exact(self.p_f)


def published_error_probability(model: ErrorModel) -> Fraction:
    """``p^M (1-p)^(N-M) / C(N, M)`` exactly; M = 1 gives ``p (1-p)^(N-1) / N``."""
    p = model.p
    return Fraction(1, math.comb(model.n, model.m)) * p**model.m * (1 - p) ** (model.n - model.m)


def planted_max(n: int, m: int, seed: int = 0) -> Dict[int, Fraction]:
    """Readings for nodes ``0..n-1`` where exactly ``m`` nodes hold the maximum.

    The other nodes get the distinct values ``1..n-m``; the maximum is
    ``n - m + 1``.  Positions are shuffled by ``seed``.
    """
    if not 1 <= m <= n:
        raise InputError(f"need 1 <= M <= N, got N={n}, M={m}")
    values = list(range(1, n - m + 1)) + [n - m + 1] * m
    random.Random(seed).shuffle(values)
    return {i: Fraction(v) for i, v in enumerate(values)}


def _ranks(readings: Dict[int, Fraction]) -> List[int]:
    return [int(readings[i]) for i in range(len(readings))]


def enumerate_error_probability(
    model: ErrorModel,
    semantics: str = "AllMaxHoldersFail",
    grid: Optional[GridParams] = None,
) -> Fraction:
    """Exact error probability by running every failure subset through the grid fold.

    ``grid`` only fixes the fold order (default: a single chain); the
    answer does not depend on it.
    """
    if semantics != "AllMaxHoldersFail":
        raise InputError(f"unsupported semantics {semantics!r}")
    if model.n > MAX_ENUMERATION_N:
        raise TooLarge(f"enumeration is limited to N <= {MAX_ENUMERATION_N}, got {model.n}")
    grid = grid or GridParams(model.n, model.n)
    if grid.n != model.n:
        raise InputError("grid size differs from the error model's N")
    hist = kernels.failure_histogram(_ranks(planted_max(model.n, model.m)), grid.d0)
    p, q = model.p, 1 - model.p
    total = sum(count * p**k * q ** (model.n - k) for k, count in enumerate(hist) if count)
    total = Fraction(total)
    if total != p**model.m:
        raise RuntimeError(f"enumeration {total} disagrees with p^M = {p ** model.m}")
    return total


@dataclass(frozen=True)
class MonteCarloEstimate:
    estimate: float
    half_width: float  # 99% normal approximation
    wrong: int
    trials: int
    backend: str

    def to_dict(self) -> dict:
        return {
            "estimate": self.estimate,
            "half_width_99": self.half_width,
            "wrong": self.wrong,
            "trials": self.trials,
            "backend": self.backend,
        }


def _chunks(trials: int, workers: int) -> List[tuple]:
    size = -(-trials // workers)
    return [(lo, min(lo + size, trials)) for lo in range(0, trials, size)]


def monte_carlo_error_probability(
    model: ErrorModel,
    fusion: FusionSpec,
    grid: GridParams,
    trials: int,
    seed: int,
    *,
    failure_mode: Union[str, NodeFailure] = NodeFailure.READING,
    workers: int = 1,
) -> MonteCarloEstimate:
    """Fraction of seeded iid-failure runs whose result differs from the fault-free one.

    Trial ``t`` draws its failures from ``(seed, t)`` alone, so the count is
    the same for any ``workers``.  Max fusion under reading loss runs on the
    fold kernel; anything else goes through the full simulator.
    """
    if isinstance(trials, bool) or not isinstance(trials, int) or trials < 1:
        raise InputError(f"trials must be a positive integer, got {trials!r}")
    if grid.n != model.n:
        raise InputError(f"grid has {grid.n} nodes but the error model has N={model.n}")
    mode = NodeFailure(failure_mode)
    readings = planted_max(model.n, model.m, seed)
    p = float(model.p)
    workers = max(1, min(workers, trials))

    if fusion.name == "max" and fusion.prf is None and mode is NodeFailure.READING:
        values = _ranks(readings)
        backend = kernels.BACKEND

        def run(span: tuple) -> int:
            return kernels.count_wrong_trials(values, grid.d0, p, seed, span[0], span[1])

    else:
        backend = "simulator"
        topo = build_grid(grid)
        reference = true_fold(fusion, readings)
        plan = FaultPlan(iid_node_failure=p, rng_seed=seed, node_failure=mode)

        def run(span: tuple) -> int:
            wrong = 0
            for t in range(*span):
                report = simulate(topo, fusion, readings, plan, trial=t)
                wrong += report.result != reference
            return wrong

    spans = _chunks(trials, workers)
    if workers == 1:
        wrong = sum(run(s) for s in spans)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            wrong = sum(pool.map(run, spans))
    est = wrong / trials
    half = Z99 * math.sqrt(est * (1 - est) / trials)
    return MonteCarloEstimate(est, half, wrong, trials, backend)


def sweep(
    n: int,
    m: int,
    p_values: Sequence[Number],
    grid: GridParams,
    fusion: FusionSpec,
    trials: int,
    seed: int,
    *,
    failure_mode: Union[str, NodeFailure] = NodeFailure.READING,
    workers: int = 1,
) -> List[dict]:
    """One row per ``p_f`` with all three quantities side by side."""
    rows = []
    for p in p_values:
        model = ErrorModel(n, m, exact(p))
        published = published_error_probability(model)
        enum: Optional[Fraction] = None
        if n <= MAX_ENUMERATION_N:
            enum = enumerate_error_probability(model, grid=grid)
        mc = monte_carlo_error_probability(
            model, fusion, grid, trials, seed, failure_mode=failure_mode, workers=workers
        )
        rows.append(
            {
                "p_f": str(model.p),
                "published_formula": float(published),
                "published_formula_exact": str(published),
                "enumeration": None if enum is None else float(enum),
                "enumeration_exact": None if enum is None else str(enum),
                "monte_carlo": mc.estimate,
                "mc_half_width_99": mc.half_width,
                "mc_backend": mc.backend,
                "published_minus_enumeration": None if enum is None else float(published - enum),
            }
        )
    return rows


SWEEP_COLUMNS = (
    "p_f",
    "published_formula",
    "enumeration",
    "monte_carlo",
    "mc_half_width_99",
    "published_minus_enumeration",
)
