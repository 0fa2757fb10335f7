"""Lock-step message-passing simulation of in-network fusion.

Every node owns two registers: its accumulated partial and one incoming
slot.  A node transmits its partial to its route target one step after its
last expected input arrived (leaves transmit at step 1).  The receiver puts
the value in its incoming slot, combines it into its partial and clears the
slot before the next step.

Routing is planned once per run from the fault plan.  A node whose parent
or parent link is dead sends over a row link to a same-depth neighbour
(lower branch first) if that neighbour is alive, the row link is up and the
hop does not close a cycle; otherwise its partial is stuck and lost.

Hierarchies run in two phases: all clusters fold into their cluster heads,
then the top grid folds the heads' results into the base station.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Optional, Set, Tuple

from .errors import InputError, MissingReading, RegisterOverflow, SimulationError
from .fusion import FusionSpec, Reading, State, as_reading
from .rng import failure_mask
from .topology import GridTopology, HierarchicalTopology, Link, NodeId, Topology, link

log = logging.getLogger(__name__)


class NodeFailure(str, Enum):
    CRASH = "crash"  # no reading, no relaying
    READING = "reading"  # reading lost, node still relays


class Outcome(str, Enum):
    COMPLETED = "Completed"
    COMPLETED_WITH_REROUTE = "CompletedWithReroute"
    STALLED = "Stalled"


def _as_link(value: Any) -> Link:
    if isinstance(value, frozenset):
        pair = value
    else:
        pair = frozenset(value)
    if len(pair) != 2:
        raise InputError(f"a link joins two distinct nodes, got {sorted(value)}")
    return pair


@dataclass(frozen=True)
class FaultPlan:
    failed_nodes: FrozenSet[NodeId] = frozenset()
    failed_links: FrozenSet[Link] = frozenset()
    iid_node_failure: Optional[float] = None
    rng_seed: int = 0
    node_failure: NodeFailure = NodeFailure.CRASH

    def __post_init__(self) -> None:
        object.__setattr__(self, "failed_nodes", frozenset(self.failed_nodes))
        object.__setattr__(self, "failed_links", frozenset(_as_link(x) for x in self.failed_links))
        object.__setattr__(self, "node_failure", NodeFailure(self.node_failure))
        p = self.iid_node_failure
        if p is not None:
            if not 0 <= p <= 1:
                raise InputError(f"iid node failure probability must lie in [0, 1], got {p}")
            if self.failed_nodes or self.failed_links:
                raise InputError("explicit failure sets and iid failures are mutually exclusive")

    @property
    def is_empty(self) -> bool:
        return not self.failed_nodes and not self.failed_links and not self.iid_node_failure

    def resolve_nodes(self, nodes: Iterable[NodeId], trial: int = 0) -> FrozenSet[NodeId]:
        """Concrete failed-node set; iid draws go to nodes in ascending id order."""
        if self.iid_node_failure is None:
            return self.failed_nodes
        ordered = sorted(nodes)
        mask = failure_mask(self.rng_seed, trial, len(ordered), self.iid_node_failure)
        return frozenset(n for n, dead in zip(ordered, mask) if dead)

    def to_dict(self) -> dict:
        return {
            "failed_nodes": sorted(self.failed_nodes),
            "failed_links": sorted(sorted(x) for x in self.failed_links),
            "iid_node_failure": self.iid_node_failure,
            "rng_seed": self.rng_seed,
            "node_failure": self.node_failure.value,
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "FaultPlan":
        unknown = set(d) - {"failed_nodes", "failed_links", "iid_node_failure", "rng_seed", "node_failure"}
        if unknown:
            raise InputError(f"unknown fault plan fields: {sorted(unknown)}")
        try:
            mode = NodeFailure(d.get("node_failure", "crash"))
        except ValueError:
            raise InputError(f"node_failure must be 'crash' or 'reading', got {d['node_failure']!r}") from None
        return cls(
            failed_nodes=frozenset(d.get("failed_nodes", ())),
            failed_links=frozenset(_as_link(x) for x in d.get("failed_links", ())),
            iid_node_failure=d.get("iid_node_failure"),
            rng_seed=int(d.get("rng_seed", 0)),
            node_failure=mode,
        )


NO_FAULTS = FaultPlan()


def format_state(state: State) -> str:
    if state is None:
        return "-"
    if isinstance(state, tuple):
        return "(" + ", ".join(str(s) for s in state) + ")"
    return str(state)


@dataclass(frozen=True)
class SimReport:
    result: Optional[Reading]
    comparisons: int
    branch_delay: int
    total_delay: int
    messages: int
    message_log: Tuple[Tuple[int, NodeId, NodeId, str], ...]
    reroutes: int
    outcome: Outcome
    # value that reached the sink even when the run stalled
    partial_result: Optional[Reading] = None
    deferrals: int = 0
    failed_nodes: Tuple[NodeId, ...] = ()
    lost_nodes: Tuple[NodeId, ...] = ()

    def to_dict(self, include_log: bool = True) -> dict:
        out = {
            "result": None if self.result is None else str(self.result),
            "partial_result": None if self.partial_result is None else str(self.partial_result),
            "comparisons": self.comparisons,
            "branch_delay": self.branch_delay,
            "total_delay": self.total_delay,
            "messages": self.messages,
            "reroutes": self.reroutes,
            "deferrals": self.deferrals,
            "outcome": self.outcome.value,
            "failed_nodes": list(self.failed_nodes),
            "lost_nodes": list(self.lost_nodes),
        }
        if include_log:
            out["message_log"] = [list(entry) for entry in self.message_log]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def summary(self) -> str:
        return (
            f"result={format_state(self.result if self.result is not None else self.partial_result)} "
            f"comparisons={self.comparisons} branch_delay={self.branch_delay} "
            f"total_delay={self.total_delay} messages={self.messages} "
            f"reroutes={self.reroutes} outcome={self.outcome.value}"
        )


def message_log_csv(report: SimReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["step", "from", "to", "value"])
    w.writerows(report.message_log)
    return buf.getvalue()


# execution core -------------------------------------------------------------


@dataclass
class NodeState:
    own: State = None
    incoming: State = None
    has_incoming: bool = False
    alive: bool = True

    def receive(self, node: NodeId, value: State) -> None:
        if self.has_incoming:
            raise RegisterOverflow(f"node {node} received a second value in one step")
        self.incoming = value
        self.has_incoming = True

    def absorb(self, spec: FusionSpec) -> int:
        """Fold the incoming slot into ``own``; return comparisons spent."""
        value, self.incoming, self.has_incoming = self.incoming, None, False
        if value is None:
            return 0
        if self.own is None:
            self.own = value
            return 0
        self.own = spec.combine(self.own, value)
        return spec.comparison_cost


@dataclass
class _Trace:
    comparisons: int = 0
    messages: int = 0
    deferrals: int = 0
    step: int = 0
    log: List[Tuple[int, NodeId, NodeId, str]] = field(default_factory=list)
    arrivals: Dict[NodeId, List[Tuple[int, NodeId]]] = field(default_factory=dict)


def execute(
    routes: Mapping[NodeId, Optional[NodeId]],
    roots: Set[NodeId],
    states: Dict[NodeId, NodeState],
    spec: FusionSpec,
    *,
    strict: bool,
    rerouted: Set[NodeId] = frozenset(),
    trace: Optional[_Trace] = None,
) -> _Trace:
    """Run one routing plan to quiescence.

    ``routes`` maps every participating node to its target (``None`` for
    roots and stuck nodes).  In strict mode two senders hitting one node in
    the same step raise ``RegisterOverflow``; otherwise the receiver takes
    natural-route senders before rerouted ones, lower id first, and the rest
    wait a step.
    """
    trace = trace or _Trace()
    pending = {n: 0 for n in routes}
    for s, t in routes.items():
        if t is not None:
            if t not in pending:
                raise SimulationError(f"node {s} routes to non-participant {t}")
            pending[t] += 1
    ready = sorted(n for n, k in pending.items() if k == 0 and routes[n] is not None)
    sent: Set[NodeId] = set()

    while ready:
        trace.step += 1
        step = trace.step
        order = sorted(ready, key=lambda n: (n in rerouted, n))
        if strict:
            batch, waiting = order, []
        else:
            batch, waiting, taken = [], [], set()
            for s in order:
                t = routes[s]
                if t in taken:
                    waiting.append(s)
                    trace.deferrals += 1
                else:
                    taken.add(t)
                    batch.append(s)
        receivers = []
        for s in batch:
            t = routes[s]
            value = states[s].own
            states[s].own = None
            states[t].receive(t, value)
            receivers.append(t)
            sent.add(s)
            if value is not None:
                trace.messages += 1
                trace.log.append((step, s, t, format_state(value)))
            trace.arrivals.setdefault(t, []).append((step, s))
        newly_ready = []
        for t in receivers:
            trace.comparisons += states[t].absorb(spec)
            pending[t] -= 1
            if pending[t] == 0 and t not in roots and routes[t] is not None:
                newly_ready.append(t)
        ready = waiting + newly_ready

    unsent = [n for n, t in routes.items() if t is not None and n not in sent]
    if unsent:
        raise SimulationError(f"routing cycle: nodes {sorted(unsent)} never transmitted")
    return trace


def _reaches(routes: Mapping[NodeId, Optional[NodeId]], start: NodeId, roots: Set[NodeId]) -> bool:
    seen = set()
    node: Optional[NodeId] = start
    while node is not None and node not in seen:
        if node in roots:
            return True
        seen.add(node)
        node = routes.get(node)
    return False


def _closes_cycle(routes: Mapping[NodeId, Optional[NodeId]], src: NodeId, dst: NodeId) -> bool:
    node: Optional[NodeId] = dst
    seen = set()
    while node is not None and node not in seen:
        if node == src:
            return True
        seen.add(node)
        node = routes.get(node)
    return False


def plan_grid(
    grid: GridTopology,
    participants: Set[NodeId],
    crashed: FrozenSet[NodeId],
    dead_links: FrozenSet[Link],
    *,
    reroute: bool = True,
) -> Tuple[Dict[NodeId, Optional[NodeId]], Set[NodeId]]:
    """Route every participant of ``grid``; returns (routes, rerouted nodes)."""
    routes: Dict[NodeId, Optional[NodeId]] = {}
    rerouted: Set[NodeId] = set()
    for node in sorted(n for n in grid.nodes if n in participants):
        parent = grid.parent(node) if node != grid.sink else grid.uplink
        routes[node] = None
        if parent is None:
            continue
        if parent not in crashed and link(node, parent) not in dead_links:
            if not _closes_cycle(routes, node, parent):
                routes[node] = parent
            continue
        if not reroute or node == grid.sink:
            continue
        for cand in grid.row_neighbors(node):
            if cand in crashed or link(node, cand) in dead_links:
                continue
            if _closes_cycle(routes, node, cand):
                continue
            routes[node] = cand
            rerouted.add(node)
            log.debug("node %d rerouted to %d", node, cand)
            break
    return routes, rerouted


# public API -------------------------------------------------------------------


def check_readings(
    sensors: List[NodeId], readings: Mapping[NodeId, Any], all_nodes: Iterable[NodeId]
) -> Dict[NodeId, Reading]:
    missing = [n for n in sensors if n not in readings]
    if missing:
        raise MissingReading(f"no reading for nodes {missing[:10]}{'...' if len(missing) > 10 else ''}")
    sensor_set = set(sensors)
    extra = [n for n in readings if n not in sensor_set]
    if extra:
        known = set(all_nodes)
        bad = [n for n in extra if n not in known]
        if bad:
            raise InputError(f"readings for unknown nodes {sorted(bad)}")
        raise InputError(f"nodes {sorted(extra)} do not sense; drop their readings")
    return {n: as_reading(readings[n]) for n in sensors}


def _finish(
    spec: FusionSpec,
    root_state: State,
    trace: _Trace,
    branch_delay: int,
    rerouted: Set[NodeId],
    failed: FrozenSet[NodeId],
    lost: List[NodeId],
) -> SimReport:
    if root_state is not None:
        value: Optional[Reading] = spec.finish(root_state)
    else:
        value = spec.identity
    stalled = bool(lost) or value is None
    if stalled:
        outcome = Outcome.STALLED
    elif rerouted:
        outcome = Outcome.COMPLETED_WITH_REROUTE
    else:
        outcome = Outcome.COMPLETED
    return SimReport(
        result=None if stalled else value,
        comparisons=trace.comparisons,
        branch_delay=branch_delay,
        total_delay=trace.step,
        messages=trace.messages,
        message_log=tuple(trace.log),
        reroutes=len(rerouted),
        outcome=outcome,
        partial_result=value,
        deferrals=trace.deferrals,
        failed_nodes=tuple(sorted(failed)),
        lost_nodes=tuple(sorted(lost)),
    )


def _branch_delay(grids: Iterable[GridTopology], trace: _Trace, start: int = 0) -> int:
    worst = 0
    for g in grids:
        heads = set(g.backbone)
        for h in heads:
            steps = [s for s, sender in trace.arrivals.get(h, ()) if sender not in heads and sender in g.roles]
            if steps:
                worst = max(worst, max(steps) - start)
    return worst


def simulate(
    topology: Topology,
    spec: FusionSpec,
    readings: Mapping[NodeId, Any],
    faults: FaultPlan = NO_FAULTS,
    *,
    trial: int = 0,
    strict: Optional[bool] = None,
) -> SimReport:
    """Simulate one fusion run.

    ``strict`` defaults to True for fault-free runs: the grid schedule must
    then never deliver two values to one node in the same step.
    """
    if isinstance(topology, HierarchicalTopology):
        return _simulate_hierarchical(topology, spec, readings, faults, trial, strict)
    grid = topology
    values = check_readings(list(grid.nodes), readings, grid.nodes)
    failed = faults.resolve_nodes(grid.nodes, trial)
    crash = faults.node_failure is NodeFailure.CRASH
    crashed = failed if crash else frozenset()
    participants = set(grid.nodes) - crashed
    strict = (faults.is_empty if strict is None else strict)

    routes, rerouted = plan_grid(grid, participants, crashed, faults.failed_links)
    states = {
        n: NodeState(own=None if n in failed else spec.lift(n, values[n])) for n in participants
    }
    roots = {grid.sink} if grid.sink in participants else set()
    trace = execute(routes, roots, states, spec, strict=strict, rerouted=rerouted)
    root_state = states[grid.sink].own if roots else None
    lost = [n for n in participants if n not in failed and not _reaches(routes, n, roots)]
    return _finish(spec, root_state, trace, _branch_delay([grid], trace), rerouted, failed, lost)


def _simulate_hierarchical(
    topo: HierarchicalTopology,
    spec: FusionSpec,
    readings: Mapping[NodeId, Any],
    faults: FaultPlan,
    trial: int,
    strict: Optional[bool],
) -> SimReport:
    sensors = topo.sensors
    values = check_readings(sensors, readings, topo.nodes)
    failed = faults.resolve_nodes(topo.nodes, trial)
    crash = faults.node_failure is NodeFailure.CRASH
    crashed = failed if crash else frozenset()
    strict = (faults.is_empty if strict is None else strict)
    alive = set(topo.nodes) - crashed

    # phase 1: every cluster folds into its cluster head
    routes: Dict[NodeId, Optional[NodeId]] = {}
    rerouted: Set[NodeId] = set()
    for g in topo.clusters.values():
        r, rr = plan_grid(g, alive, crashed, faults.failed_links)
        routes.update(r)
        rerouted |= rr
    heads = {h for h in topo.clusters if h in alive}
    for h in heads:
        routes[h] = None
    states = {
        n: NodeState(own=None if n in failed or n not in values else spec.lift(n, values[n]))
        for n in routes
    }
    trace = execute(routes, heads, states, spec, strict=strict, rerouted=rerouted)
    branch_delay = _branch_delay(topo.clusters.values(), trace)
    lost = [n for n in sensors if n in alive and n not in failed and not _reaches(routes, n, heads)]

    # phase 2: the top grid folds cluster results into the base station
    top_routes, top_rerouted = plan_grid(topo.top, alive, crashed, faults.failed_links)
    bs = topo.base_station
    roots = {bs} if bs in alive else set()
    if roots:
        top_routes[bs] = None
    top_states = {n: NodeState(own=states[n].own if n in states else None) for n in top_routes}
    execute(top_routes, roots, top_states, spec, strict=strict, rerouted=top_rerouted, trace=trace)
    for h in heads:
        if not _reaches(top_routes, h, roots):
            lost.extend(n for n in sensors if _reaches(routes, n, {h}) and n not in failed)
    root_state = top_states[bs].own if roots else None
    return _finish(
        spec, root_state, trace, branch_delay, rerouted | top_rerouted, failed, sorted(set(lost))
    )


def true_fold(spec: FusionSpec, readings: Mapping[NodeId, Any], exclude: Iterable[NodeId] = ()) -> Optional[Reading]:
    """Direct fold over readings in node-id order, skipping ``exclude``."""
    skip = set(exclude)
    acc: State = None
    for n in sorted(readings):
        if n in skip:
            continue
        s = spec.lift(n, as_reading(readings[n]))
        acc = s if acc is None else spec.combine(acc, s)
    if acc is None:
        return spec.identity
    return spec.finish(acc)


__all__ = [
    "FaultPlan",
    "NO_FAULTS",
    "NodeFailure",
    "NodeState",
    "Outcome",
    "SimReport",
    "execute",
    "message_log_csv",
    "plan_grid",
    "simulate",
    "true_fold",
]
