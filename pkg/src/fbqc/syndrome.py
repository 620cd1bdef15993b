"""Primal/dual syndrome multigraphs for the periodic lattice networks.

Vertices are parity checks (cells for the primal graph, lattice vertices for
the dual), edges are single fusion-measurement outcomes.  Every fusion
contributes outcome 1 of its measurement pair to the primal graph and
outcome 0 to the dual for the 4-star; for the 6-ring the split depends on
the fusion's location (face fusions: XX primal / ZZ dual, edge fusions:
ZZ primal / XX dual).  Per-edge seam-crossing bits record how edges wind
around the torus; the logical cut for a direction is the set of edges
crossing the fixed transverse seam plane at coordinate 0.

Checks are built geometrically; `check_operator` materializes any check as
a Pauli operator so tests can confirm membership in <R> and <F>.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .networks import (
    _CENTER,
    _CORNER,
    _EDGE_X,
    _EDGE_Y,
    _EDGE_Z,
    _FACE_X,
    _FACE_Y,
    _FACE_Z,
    FusionNetwork,
    _Lattice,
)
from .pauli import PauliOp, multiply

__all__ = [
    "SyndromeGraph",
    "Syndrome",
    "UnsupportedNetworkError",
    "derive_syndrome_graphs",
    "compute_syndrome",
    "logical_cut_parity",
    "check_operator",
    "export_edge_list",
]


class UnsupportedNetworkError(ValueError):
    """Syndrome graphs are only derived for the lattice builds."""


@dataclass
class SyndromeGraph:
    kind: str            # "four-star" | "six-ring"
    side: str            # "primal" | "dual"
    L: int
    n_vertices: int
    edges_u: np.ndarray       # int32 [E]
    edges_v: np.ndarray       # int32 [E]
    fusion_id: np.ndarray     # int32 [E]
    outcome_index: np.ndarray  # int8 [E], which measurement of the fusion
    geom_class: list[str]     # per edge
    cross: np.ndarray         # uint8 [E, 3] seam-crossing bits
    vertex_anchor: np.ndarray  # int [V, 3] cell or vertex coordinates
    logical_cuts: tuple[np.ndarray, np.ndarray, np.ndarray] = field(init=False)
    _incidence: Optional[list[np.ndarray]] = field(default=None, repr=False)

    def __post_init__(self):
        self.logical_cuts = tuple(
            np.flatnonzero(self.cross[:, d]).astype(np.int64) for d in range(3)
        )

    @property
    def n_edges(self) -> int:
        return len(self.edges_u)

    def measurement_ids(self) -> np.ndarray:
        """Global outcome ids (= 2*fusion + outcome index) of this graph."""
        return self.fusion_id.astype(np.int64) * 2 + self.outcome_index

    def incident_edges(self, vertex: int) -> np.ndarray:
        if self._incidence is None:
            inc: list[list[int]] = [[] for _ in range(self.n_vertices)]
            for e in range(self.n_edges):
                inc[self.edges_u[e]].append(e)
                inc[self.edges_v[e]].append(e)
            self._incidence = [np.array(a, dtype=np.int64) for a in inc]
        return self._incidence[vertex]

    def degree(self, vertex: int) -> int:
        return len(self.incident_edges(vertex))


@dataclass(frozen=True)
class Syndrome:
    odd_vertices: frozenset[int]
    cluster_labels: np.ndarray  # per-vertex erasure-cluster representative

    @property
    def merged_clusters(self) -> list[frozenset[int]]:
        groups: dict[int, list[int]] = {}
        for v, root in enumerate(self.cluster_labels):
            groups.setdefault(int(root), []).append(v)
        return [frozenset(g) for g in groups.values() if len(g) > 1]


def _vidx(L: int, i: int, j: int, k: int) -> int:
    return ((k % L) * L + (j % L)) * L + (i % L)


class _EdgeAccum:
    """Collects edges given unwrapped endpoint coordinates."""

    def __init__(self, L: int):
        self.L = L
        self.u: list[int] = []
        self.v: list[int] = []
        self.fusion: list[int] = []
        self.outcome: list[int] = []
        self.geom: list[str] = []
        self.cross: list[tuple[int, int, int]] = []

    def add(self, a, b, fusion_id, outcome_index, geom):
        L = self.L
        cross = tuple(
            (1 if (a[d] < 0 or a[d] >= L) else 0) ^ (1 if (b[d] < 0 or b[d] >= L) else 0)
            for d in range(3)
        )
        self.u.append(_vidx(L, *a))
        self.v.append(_vidx(L, *b))
        self.fusion.append(fusion_id)
        self.outcome.append(outcome_index)
        self.geom.append(geom)
        self.cross.append(cross)

    def build(self, kind, side, L) -> SyndromeGraph:
        anchors = np.array(
            [(i, j, k) for k in range(L) for j in range(L) for i in range(L)],
            dtype=np.int64,
        )
        return SyndromeGraph(
            kind=kind,
            side=side,
            L=L,
            n_vertices=L ** 3,
            edges_u=np.array(self.u, np.int32),
            edges_v=np.array(self.v, np.int32),
            fusion_id=np.array(self.fusion, np.int32),
            outcome_index=np.array(self.outcome, np.int8),
            geom_class=self.geom,
            cross=np.array(self.cross, np.uint8),
            vertex_anchor=anchors,
        )


def _derive_4star(net: FusionNetwork) -> tuple[SyndromeGraph, SyndromeGraph]:
    meta = net.lattice_meta
    L = meta.L
    lat = _Lattice(L, True, 6, 4)
    primal = _EdgeAccum(L)
    dual = _EdgeAccum(L)
    axis_of_face = {_FACE_X: 0, _FACE_Y: 1, _FACE_Z: 2}
    axis_of_edge = {_EDGE_X: 0, _EDGE_Y: 1, _EDGE_Z: 2}
    for fu in net.fusions:
        fq, eq = fu.qubits
        f_state = fq // 4
        e_state = eq // 4
        f_cell, f_slot = divmod(f_state, 6)
        e_cell, e_slot = divmod(e_state, 6)
        fi = f_cell % L
        fj = (f_cell // L) % L
        fk = f_cell // (L * L)
        ei = e_cell % L
        ej = (e_cell // L) % L
        ek = e_cell // (L * L)
        # primal: outcome 1 = Z_face X_edge; connects the two cells sharing
        # the face (cell behind the face along its normal, and the face cell)
        ax = axis_of_face[f_slot]
        a = [fi, fj, fk]
        b = list(a)
        b[ax] -= 1
        primal.add(tuple(a), tuple(b), fu.id, 1, f"cubic{'xyz'[ax]}")
        # dual: outcome 0 = X_face Z_edge; connects the edge's two endpoints
        ax = axis_of_edge[e_slot]
        a = [ei, ej, ek]
        b = list(a)
        b[ax] += 1
        dual.add(tuple(a), tuple(b), fu.id, 0, f"cubic{'xyz'[ax]}")
    return (
        primal.build(meta.kind, "primal", L),
        dual.build(meta.kind, "dual", L),
    )


# 6-ring: corner-local ring position -> fusion location kind
_RING_LOCATION = {
    0: "edge-x", 2: "edge-y", 4: "edge-z",
    1: "face-z", 3: "face-x", 5: "face-y",
}
# primal diagonal endpoints (cells, relative to the host corner v) and dual
# diagonal endpoints (vertices, relative to v) per location kind
_PRIMAL_DIAG = {
    "edge-x": ((0, -1, 0), (0, 0, -1)),
    "edge-y": ((-1, 0, 0), (0, 0, -1)),
    "edge-z": ((-1, 0, 0), (0, -1, 0)),
}
_DUAL_DIAG = {
    "face-x": ((0, 1, 0), (0, 0, 1)),
    "face-y": ((1, 0, 0), (0, 0, 1)),
    "face-z": ((1, 0, 0), (0, 1, 0)),
}
_FACE_NORMAL = {"face-x": 0, "face-y": 1, "face-z": 2}
_EDGE_AXIS = {"edge-x": 0, "edge-y": 1, "edge-z": 2}


def _derive_6ring(net: FusionNetwork) -> tuple[SyndromeGraph, SyndromeGraph]:
    meta = net.lattice_meta
    L = meta.L
    primal = _EdgeAccum(L)
    dual = _EdgeAccum(L)
    for fu in net.fusions:
        cq, _zq = fu.qubits
        c_state = cq // 6
        local = cq % 6
        cell = c_state // 2
        vi = cell % L
        vj = (cell // L) % L
        vk = cell // (L * L)
        kind = _RING_LOCATION[local]
        if kind.startswith("face"):
            # face fusion: XX (outcome 0) joins the two cells sharing the
            # face; ZZ (outcome 1) is a dual diagonal
            ax = _FACE_NORMAL[kind]
            a = [vi, vj, vk]
            b = list(a)
            b[ax] -= 1
            primal.add(tuple(a), tuple(b), fu.id, 0, f"cubic{'xyz'[ax]}")
            off1, off2 = _DUAL_DIAG[kind]
            a = (vi + off1[0], vj + off1[1], vk + off1[2])
            b = (vi + off2[0], vj + off2[1], vk + off2[2])
            dual.add(a, b, fu.id, 1, f"diag-{kind}")
        else:
            # edge fusion: ZZ (outcome 1) is a primal diagonal between the
            # two cells whose link set contains the edge; XX (outcome 0)
            # joins the edge's endpoint vertices in the dual
            off1, off2 = _PRIMAL_DIAG[kind]
            a = (vi + off1[0], vj + off1[1], vk + off1[2])
            b = (vi + off2[0], vj + off2[1], vk + off2[2])
            primal.add(a, b, fu.id, 1, f"diag-{kind}")
            ax = _EDGE_AXIS[kind]
            a = [vi, vj, vk]
            b = list(a)
            b[ax] += 1
            dual.add(tuple(a), tuple(b), fu.id, 0, f"cubic{'xyz'[ax]}")
    return (
        primal.build(meta.kind, "primal", L),
        dual.build(meta.kind, "dual", L),
    )


def derive_syndrome_graphs(
    net: FusionNetwork,
) -> tuple[SyndromeGraph, SyndromeGraph]:
    """(primal, dual) syndrome graphs of a periodic lattice network."""
    meta = net.lattice_meta
    if meta is None:
        raise UnsupportedNetworkError(
            "syndrome graphs are defined for lattice networks only"
        )
    if not meta.periodic:
        raise UnsupportedNetworkError(
            "open-boundary syndrome graphs are not supported"
        )
    if meta.kind == "four-star":
        return _derive_4star(net)
    if meta.kind == "six-ring":
        return _derive_6ring(net)
    raise UnsupportedNetworkError(f"unknown lattice kind {meta.kind!r}")


def compute_syndrome(
    graph: SyndromeGraph, flips: np.ndarray, erasures: np.ndarray
) -> Syndrome:
    """Check parities from the non-erased flips, plus erasure clusters.

    An erased outcome carries no information, so its flip bit does not
    contribute to any parity; instead the two checks it joins merge into
    one cluster.
    """
    flips = np.asarray(flips, dtype=np.uint8)
    erasures = np.asarray(erasures, dtype=np.uint8)
    if flips.shape != (graph.n_edges,) or erasures.shape != (graph.n_edges,):
        raise ValueError("bit-vector length does not match edge count")
    parity = np.zeros(graph.n_vertices, np.uint8)
    active = np.flatnonzero(flips & ~erasures)
    np.add.at(parity, graph.edges_u[active], 1)
    np.add.at(parity, graph.edges_v[active], 1)
    odd = frozenset(int(v) for v in np.flatnonzero(parity & 1))

    parent = np.arange(graph.n_vertices, dtype=np.int64)

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for e in np.flatnonzero(erasures):
        ra, rb = find(int(graph.edges_u[e])), find(int(graph.edges_v[e]))
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    labels = np.array([find(v) for v in range(graph.n_vertices)], np.int64)
    return Syndrome(odd_vertices=odd, cluster_labels=labels)


def logical_cut_parity(
    graph: SyndromeGraph, direction: int, edge_bits: np.ndarray
) -> int:
    """Parity of edge_bits over the stored transverse cut for a direction."""
    if not (0 <= direction < 3):
        raise ValueError("direction must be 0, 1, or 2")
    cut = graph.logical_cuts[direction]
    if cut.size == 0:
        raise ValueError("graph has no logical cut in this direction")
    edge_bits = np.asarray(edge_bits, dtype=np.uint8)
    if edge_bits.shape != (graph.n_edges,):
        raise ValueError("bit-vector length does not match edge count")
    return int(np.bitwise_xor.reduce(edge_bits[cut]))


def check_operator(
    net: FusionNetwork, graph: SyndromeGraph, vertex: int
) -> PauliOp:
    """The check at `vertex` as an explicit Pauli operator.

    Product of the measurement operators of all incident edges (multi-edges
    included once per edge).
    """
    acc = PauliOp.identity(net.n_qubits)
    for e in graph.incident_edges(vertex):
        fu = net.fusions[int(graph.fusion_id[e])]
        op = fu.embedded(net.n_qubits)[int(graph.outcome_index[e])]
        acc = multiply(acc, op)
    return acc


def export_edge_list(graph: SyndromeGraph) -> str:
    """Plain-text edge list: edge id, endpoints, fusion, outcome, class."""
    lines = [
        f"syndrome-graph v1 kind={graph.kind} side={graph.side} "
        f"L={graph.L} vertices={graph.n_vertices} edges={graph.n_edges}"
    ]
    for e in range(graph.n_edges):
        cross = "".join(str(int(b)) for b in graph.cross[e])
        lines.append(
            f"edge {e} {int(graph.edges_u[e])} {int(graph.edges_v[e])} "
            f"fusion {int(graph.fusion_id[e])} outcome "
            f"{int(graph.outcome_index[e])} class {graph.geom_class[e]} "
            f"cross {cross}"
        )
    return "\n".join(lines) + "\n"
