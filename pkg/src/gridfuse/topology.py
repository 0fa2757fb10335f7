"""Grid, fault-tolerant grid and hierarchical cluster-grid topologies.

Layout of a grid with ``N`` nodes and branch length ``D0``: there are
``B = N / D0`` branches (columns), each a chain of ``D0`` nodes.  Node
``(b, d)`` sits in branch ``b`` at depth ``d``; depth 0 is the branch head
and depth ``D0 - 1`` the leaf.  Partials flow leaf -> head inside each
branch, then head 0 -> head 1 -> ... -> head ``B - 1``, which is the sink.

Row links join ``(b, d)`` and ``(b + 1, d)``.  At depth 0 the row link and
the backbone link join the same pair of heads and are one physical link.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple, Union

from .errors import ClusterCountMismatch, InputError, NonDivisible, ZeroNodes

NodeId = int
Link = FrozenSet[NodeId]


def link(a: NodeId, b: NodeId) -> Link:
    """Physical (undirected) link between two nodes."""
    return frozenset((a, b))


class Role(str, Enum):
    SENSOR = "sensor"
    CLUSTER_HEAD = "cluster_head"
    SINK = "sink"


@dataclass(frozen=True)
class GridParams:
    n: int
    d0: int
    row_links: bool = False

    def __post_init__(self) -> None:
        for name in ("n", "d0"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int):
                raise InputError(f"{name} must be an integer, got {v!r}")
        if self.n < 1:
            raise ZeroNodes(f"N must be >= 1, got {self.n}")
        if self.d0 < 1:
            raise InputError(f"D0 must be >= 1, got {self.d0}")
        if self.n % self.d0:
            raise NonDivisible(self.n, self.d0)

    @property
    def branches(self) -> int:
        return self.n // self.d0

    @property
    def branch_delay(self) -> int:
        return self.d0 - 1

    @property
    def total_delay(self) -> int:
        return (self.d0 - 1) + (self.branches - 1)


@dataclass(frozen=True, eq=False)
class GridTopology:
    params: GridParams
    roles: Dict[NodeId, Role]
    combine_links: Tuple[Tuple[NodeId, NodeId], ...]  # (child, parent)
    row_links: Tuple[Tuple[NodeId, NodeId], ...]
    branches: Tuple[Tuple[NodeId, ...], ...]  # each listed head first
    backbone: Tuple[NodeId, ...]  # branch heads in fold order, sink last
    uplink: Optional[NodeId] = None  # where the sink forwards its result, if anywhere
    _pos: Dict[NodeId, Tuple[int, int]] = field(init=False, repr=False)
    _parent: Dict[NodeId, NodeId] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        pos = {nid: (b, d) for b, chain in enumerate(self.branches) for d, nid in enumerate(chain)}
        object.__setattr__(self, "_pos", pos)
        object.__setattr__(self, "_parent", dict(self.combine_links))

    @property
    def nodes(self) -> Tuple[NodeId, ...]:
        return tuple(self.roles)

    @property
    def sink(self) -> NodeId:
        return self.backbone[-1]

    @property
    def n_rows(self) -> int:
        return self.params.d0

    @property
    def n_cols(self) -> int:
        return len(self.branches)

    def parent(self, node: NodeId) -> Optional[NodeId]:
        return self._parent.get(node)

    def position(self, node: NodeId) -> Tuple[int, int]:
        return self._pos[node]

    def node_at(self, branch: int, depth: int) -> NodeId:
        return self.branches[branch][depth]

    def row_neighbors(self, node: NodeId) -> List[NodeId]:
        """Same-depth neighbours over row links, lower branch first."""
        if not self.params.row_links:
            return []
        b, d = self._pos[node]
        out = []
        if b > 0:
            out.append(self.node_at(b - 1, d))
        if b + 1 < self.n_cols:
            out.append(self.node_at(b + 1, d))
        return out

    def physical_links(self) -> FrozenSet[Link]:
        return frozenset(link(a, b) for a, b in self.combine_links + self.row_links)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GridTopology):
            return NotImplemented
        return to_json_dict(self) == to_json_dict(other)


@dataclass(frozen=True, eq=False)
class HierarchicalTopology:
    top: GridTopology
    clusters: Dict[NodeId, GridTopology]  # cluster head -> grid of its sensors
    base_station: NodeId

    @property
    def sensors(self) -> List[NodeId]:
        return [nid for g in self.clusters.values() for nid in g.nodes]

    @property
    def cluster_heads(self) -> List[NodeId]:
        return list(self.top.nodes)

    @property
    def nodes(self) -> List[NodeId]:
        return self.sensors + self.cluster_heads + [self.base_station]

    def roles(self) -> Dict[NodeId, Role]:
        out: Dict[NodeId, Role] = {}
        for g in self.clusters.values():
            out.update(g.roles)
        out.update(self.top.roles)
        out[self.base_station] = Role.SINK
        return out


Topology = Union[GridTopology, HierarchicalTopology]


def build_grid(
    params: GridParams,
    *,
    first_id: int = 0,
    role: Role = Role.SENSOR,
    sink_role: Role = Role.SINK,
    uplink: Optional[NodeId] = None,
) -> GridTopology:
    """Build the branch/backbone grid; node ``(b, d)`` gets id ``first_id + b*D0 + d``."""
    d0, nb = params.d0, params.branches
    branches = tuple(tuple(first_id + b * d0 + d for d in range(d0)) for b in range(nb))
    combine: List[Tuple[NodeId, NodeId]] = []
    for chain in branches:
        combine.extend((chain[d], chain[d - 1]) for d in range(d0 - 1, 0, -1))
    backbone = tuple(chain[0] for chain in branches)
    combine.extend(zip(backbone, backbone[1:]))
    rows: List[Tuple[NodeId, NodeId]] = []
    if params.row_links:
        for d in range(d0):
            rows.extend((branches[b][d], branches[b + 1][d]) for b in range(nb - 1))
    roles = {nid: role for chain in branches for nid in chain}
    roles[backbone[-1]] = sink_role
    return GridTopology(
        params=params,
        roles=dict(sorted(roles.items())),
        combine_links=tuple(combine),
        row_links=tuple(rows),
        branches=branches,
        backbone=backbone,
        uplink=uplink,
    )


def build_hierarchical(
    cluster_params: Sequence[GridParams], top_params: GridParams
) -> HierarchicalTopology:
    """One level of clusters under a top grid of cluster heads.

    Sensors get ids ``0..S-1`` cluster by cluster, cluster heads ``S..S+C-1``
    (cluster ``i`` belongs to head ``S + i``) and the base station ``S + C``.
    Each cluster's grid forwards its result to its head; the top grid
    forwards to the base station.
    """
    if top_params.n != len(cluster_params):
        raise ClusterCountMismatch(
            f"top grid has {top_params.n} positions but {len(cluster_params)} clusters were given"
        )
    n_sensors = sum(p.n for p in cluster_params)
    first_head = n_sensors
    base_station = n_sensors + len(cluster_params)
    top = build_grid(
        top_params,
        first_id=first_head,
        role=Role.CLUSTER_HEAD,
        sink_role=Role.CLUSTER_HEAD,
        uplink=base_station,
    )
    clusters: Dict[NodeId, GridTopology] = {}
    next_id = 0
    for i, p in enumerate(cluster_params):
        head = first_head + i
        clusters[head] = build_grid(
            p, first_id=next_id, role=Role.SENSOR, sink_role=Role.SENSOR, uplink=head
        )
        next_id += p.n
    return HierarchicalTopology(top=top, clusters=clusters, base_station=base_station)


def theoretical_comparisons(params: GridParams, x: int) -> int:
    """Comparison count of a fault-free fold: per-branch chains plus the backbone."""
    if isinstance(x, bool) or not isinstance(x, int) or x < 1:
        raise InputError(f"x must be an integer >= 1, got {x!r}")
    nb = params.branches
    decomposed = nb * (params.d0 - 1) * x + (nb - 1) * x
    closed = (params.n - 1) * x
    if decomposed != closed:  # pragma: no cover - algebraic identity
        raise AssertionError(f"decomposition {decomposed} != closed form {closed}")
    return closed


# export -------------------------------------------------------------------


def _grid_dict(g: GridTopology) -> dict:
    nodes = []
    for nid, role in g.roles.items():
        b, d = g.position(nid) if nid in g._pos else (None, None)
        nodes.append({"id": nid, "role": role.value, "branch": b, "depth": d})
    out = {
        "kind": "grid",
        "params": {"n": g.params.n, "d0": g.params.d0, "row_links": g.params.row_links},
        "nodes": nodes,
        "links": {
            "combine": [list(e) for e in g.combine_links],
            "row": [list(e) for e in g.row_links],
        },
        "branches": [list(c) for c in g.branches],
        "backbone": list(g.backbone),
        "sink": g.sink,
    }
    if g.uplink is not None:
        out["uplink"] = [g.sink, g.uplink]
    return out


def to_json_dict(topo: Topology) -> dict:
    if isinstance(topo, GridTopology):
        return _grid_dict(topo)
    return {
        "kind": "hierarchical",
        "base_station": topo.base_station,
        "top": _grid_dict(topo.top),
        "clusters": [
            {"cluster_head": head, "grid": _grid_dict(g)} for head, g in topo.clusters.items()
        ],
        "counts": {
            "sensors": len(topo.sensors),
            "cluster_heads": len(topo.cluster_heads),
            "sinks": 1,
        },
    }


def to_json(topo: Topology) -> str:
    return json.dumps(to_json_dict(topo), indent=2, sort_keys=True)


def _edges(topo: Topology) -> Iterator[Tuple[NodeId, NodeId, str]]:
    grids = [topo] if isinstance(topo, GridTopology) else [*topo.clusters.values(), topo.top]
    for g in grids:
        for a, b in g.combine_links:
            yield a, b, "combine"
        for a, b in g.row_links:
            yield a, b, "row"
        if g.uplink is not None:
            yield g.sink, g.uplink, "uplink"


def to_dot(topo: Topology) -> str:
    """Graphviz digraph; row links are drawn undirected and dashed."""
    roles = topo.roles if isinstance(topo, GridTopology) else topo.roles()
    lines = ["digraph grid {"]
    for nid, role in sorted(roles.items()):
        shape = {"sensor": "circle", "cluster_head": "box", "sink": "doublecircle"}[role.value]
        lines.append(f'  {nid} [role="{role.value}", shape={shape}];')
    for a, b, kind in _edges(topo):
        style = ', dir=none, style=dashed' if kind == "row" else ""
        lines.append(f'  {a} -> {b} [kind="{kind}"{style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def edge_list_csv(topo: Topology) -> str:
    rows = ["source,target,kind"]
    rows.extend(f"{a},{b},{kind}" for a, b, kind in _edges(topo))
    return "\n".join(rows) + "\n"
