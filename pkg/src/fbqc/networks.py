"""Fusion-network constructions.

Two pedagogical networks (the 4-line graph-state merge and the 16-qubit
Bell-pair network with two parity checks) plus the two periodic 3D lattices
(4-star and 6-ring) used for threshold estimation.

Conventions:

* Qubits are indexed 0-based; the pedagogical builders follow the customary
  1-based labels of the worked examples, so builder qubit ``i`` is usually
  referred to as qubit ``i+1`` in printed output (``label_offset makes this
  explicit``).
* Lattice qubit indexing is lexicographic by (cell z, y, x, state slot,
  local qubit index), which keeps builds deterministic and cache friendly.
* Every fusion stores its two measurement operators in a fixed order; the
  syndrome-graph layer refers to them as outcome 0 and outcome 1.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np

from .pauli import GeneratorSet, PauliOp, canonicalize, commutes

__all__ = [
    "BasisTag",
    "ResourceState",
    "Fusion",
    "LatticeMeta",
    "FusionNetwork",
    "InvalidSizeError",
    "build_four_line_example",
    "build_bell_ftfn_example",
    "build_4star",
    "build_6ring",
    "network_groups",
]


class InvalidSizeError(ValueError):
    """Lattice size parameter out of range."""


class BasisTag(enum.Enum):
    XX_ZZ = "XX_ZZ"
    XZ_ZX = "XZ_ZX"
    SINGLE_QUBIT_Z = "SingleQubitZ"


Coord = tuple[Fraction, Fraction, Fraction]


@dataclass(frozen=True)
class ResourceState:
    """A small stabilizer state occupying `qubits` of the global index space.

    `stabilizers` is a local generator set on len(qubits) qubits; generator
    qubit i acts on global qubit qubits[i].
    """

    id: int
    qubits: tuple[int, ...]
    stabilizers: GeneratorSet
    position: Optional[Coord] = None

    def __post_init__(self):
        if len(self.stabilizers.gens) != len(self.qubits):
            raise ValueError("resource state must have one stabilizer per qubit")
        if self.stabilizers.n != len(self.qubits):
            raise ValueError("stabilizer width does not match qubit count")
        for i, a in enumerate(self.stabilizers.gens):
            for b in self.stabilizers.gens[i + 1 :]:
                if not commutes(a, b):
                    raise ValueError("resource-state stabilizers must commute")

    def embedded(self, n_total: int) -> list[PauliOp]:
        out = []
        idx = np.asarray(self.qubits, dtype=np.intp)
        for g in self.stabilizers.gens:
            x = np.zeros(n_total, np.uint8)
            z = np.zeros(n_total, np.uint8)
            x[idx] = g.x
            z[idx] = g.z
            out.append(PauliOp(n_total, x, z, g.phase))
        return out


@dataclass(frozen=True)
class Fusion:
    """A projective two-qubit measurement consuming one qubit of each state."""

    id: int
    qubits: tuple[int, int]
    measurements: tuple[PauliOp, PauliOp]  # local 2-qubit ops, fixed order
    basis_tag: BasisTag

    def __post_init__(self):
        a, b = self.measurements
        if a.n != 2 or b.n != 2:
            raise ValueError("fusion measurements must be 2-qubit operators")
        if not commutes(a, b):
            raise ValueError("fusion measurements must commute")

    def embedded(self, n_total: int) -> list[PauliOp]:
        out = []
        idx = np.asarray(self.qubits, dtype=np.intp)
        for g in self.measurements:
            x = np.zeros(n_total, np.uint8)
            z = np.zeros(n_total, np.uint8)
            x[idx] = g.x
            z[idx] = g.z
            out.append(PauliOp(n_total, x, z, g.phase))
        return out


@dataclass(frozen=True)
class LatticeMeta:
    kind: str  # "four-star" | "six-ring"
    L: int
    periodic: bool


@dataclass(frozen=True)
class FusionNetwork:
    n_qubits: int
    resource_states: tuple[ResourceState, ...]
    fusions: tuple[Fusion, ...]
    outer_qubits: frozenset[int]
    lattice_meta: Optional[LatticeMeta] = None
    label_offset: int = 0  # printed qubit label = index + offset

    def __post_init__(self):
        seen = np.zeros(self.n_qubits, np.int32)
        for rs in self.resource_states:
            for q in rs.qubits:
                seen[q] += 1
        if not np.all(seen == 1):
            raise ValueError("resource-state qubits must partition the index space")
        fused = np.zeros(self.n_qubits, np.int32)
        for fu in self.fusions:
            for q in fu.qubits:
                fused[q] += 1
        if fused.max(initial=0) > 1:
            raise ValueError("a qubit may appear in at most one fusion")
        expect_outer = frozenset(int(q) for q in np.flatnonzero(fused == 0))
        if expect_outer != self.outer_qubits:
            raise ValueError("outer_qubits must be exactly the unfused qubits")

    def state_of(self, qubit: int) -> ResourceState:
        for rs in self.resource_states:
            if qubit in rs.qubits:
                return rs
        raise KeyError(qubit)


def network_groups(net: FusionNetwork) -> tuple[GeneratorSet, GeneratorSet]:
    """(R, F): resource group and fusion group of the network.

    R is the union of the embedded resource-state stabilizers; F is the
    union of all fusion measurements, flagged as containing -1.
    """
    r_gens: list[PauliOp] = []
    for rs in net.resource_states:
        r_gens.extend(rs.embedded(net.n_qubits))
    f_gens: list[PauliOp] = []
    for fu in net.fusions:
        f_gens.extend(fu.embedded(net.n_qubits))
    return (
        GeneratorSet(net.n_qubits, r_gens),
        GeneratorSet(net.n_qubits, f_gens, contains_minus_one=True),
    )


def _local(labels: str) -> PauliOp:
    return PauliOp.from_label(labels)


def _gens(n: int, labels: Iterable[str]) -> GeneratorSet:
    return GeneratorSet(n, [_local(s) for s in labels])


_XZ_ZX = (_local("XZ"), _local("ZX"))
_XX_ZZ = (_local("XX"), _local("ZZ"))


def build_four_line_example() -> FusionNetwork:
    """Three graph states fused into a 4-line graph state (8 qubits).

    States: a 3-line on qubits {1,2,3}, a 2-line on {4,5}, a 3-line on
    {6,7,8} (1-based).  Two <XZ, ZX> fusions on (3,4) and (5,6) leave outer
    qubits {1,2,7,8}.  Measurement order per fusion: (X a Z b, Z a X b), so
    the classical outcomes are m1..m4 in the customary labelling.
    """
    states = (
        ResourceState(0, (0, 1, 2), _gens(3, ["XZI", "ZXZ", "IZX"])),
        ResourceState(1, (3, 4), _gens(2, ["XZ", "ZX"])),
        ResourceState(2, (5, 6, 7), _gens(3, ["XZI", "ZXZ", "IZX"])),
    )
    fusions = (
        Fusion(0, (2, 3), _XZ_ZX, BasisTag.XZ_ZX),
        Fusion(1, (4, 5), _XZ_ZX, BasisTag.XZ_ZX),
    )
    return FusionNetwork(
        8, states, fusions, frozenset({0, 1, 6, 7}), label_offset=1
    )


def build_bell_ftfn_example() -> FusionNetwork:
    """The 16-qubit fault-tolerant network producing a Bell pair on {1,16}.

    Seven <XX, ZZ> fusions on the pairs (2,5), (3,7), (4,13), (6,9), (8,11),
    (10,14), (12,15) (1-based).  All group data quoted for this example pins
    the fusion pairing, the check group, and the output stabilizers; the
    five resource states below were solved to reproduce those tables exactly
    (verified against the dense state-vector oracle):

      {1,2,3,4,8}       five-qubit entangled state
      {5,6}, {9,10}     two-qubit graph states <XZ, ZX>
      {7,12}            Bell pair <XX, ZZ>
      {11,13,14,15,16}  mirror five-qubit state

    The check group is generated by
      (XX)_{2,5} (ZZ)_{6,9} (XX)_{10,14} (ZZ)_{4,13}  and
      (XX)_{3,7} (ZZ)_{8,11} (XX)_{12,15} (ZZ)_{4,13},
    and the output stabilizers are (ZZ)_{4,13}-signed X1X16 and the
    seven-outcome-signed Z1Z16.
    """
    state_a = ResourceState(
        0,
        (0, 1, 2, 3, 7),
        _gens(5, ["XIIZI", "IXIZI", "IIXZZ", "ZZZXZ", "-IIZZX"]),
    )
    state_b = ResourceState(1, (4, 5), _gens(2, ["XZ", "ZX"]))
    state_c = ResourceState(2, (6, 11), _gens(2, ["XX", "ZZ"]))
    state_d = ResourceState(3, (8, 9), _gens(2, ["XZ", "ZX"]))
    state_e = ResourceState(
        4,
        (10, 12, 13, 14, 15),
        _gens(5, ["YIIZI", "-IYZZZ", "IZXII", "ZZIXI", "IZIIX"]),
    )
    pairs = [(1, 4), (2, 6), (3, 12), (5, 8), (7, 10), (9, 13), (11, 14)]
    fusions = tuple(
        Fusion(i, p, _XX_ZZ, BasisTag.XX_ZZ) for i, p in enumerate(pairs)
    )
    return FusionNetwork(
        16,
        (state_a, state_b, state_c, state_d, state_e),
        fusions,
        frozenset({0, 15}),
        label_offset=1,
    )


# ---------------------------------------------------------------------------
# periodic lattices
# ---------------------------------------------------------------------------

_GHZ4 = _gens(4, ["ZZZZ", "XXII", "IXXI", "IIXX"])
# six-ring graph state: K_m = Z_{m-1} X_m Z_{m+1}, indices mod 6
_RING6 = _gens(
    6,
    [
        "XZIIIZ",
        "ZXZIII",
        "IZXZII",
        "IIZXZI",
        "IIIZXZ",
        "ZIIIZX",
    ],
)

_HALF = Fraction(1, 2)


def _frac(i: int, half: bool = False) -> Fraction:
    return Fraction(i) + (_HALF if half else 0)


class _Lattice:
    """Index bookkeeping shared by the two lattice builders."""

    def __init__(self, L: int, periodic: bool, states_per_cell: int,
                 qubits_per_state: int):
        self.L = L
        self.periodic = periodic
        self.spc = states_per_cell
        self.qps = qubits_per_state

    def cell_index(self, i: int, j: int, k: int) -> Optional[int]:
        L = self.L
        if self.periodic:
            return ((k % L) * L + (j % L)) * L + (i % L)
        if 0 <= i < L and 0 <= j < L and 0 <= k < L:
            return (k * L + j) * L + i
        return None

    def state_index(self, i: int, j: int, k: int, slot: int) -> Optional[int]:
        c = self.cell_index(i, j, k)
        return None if c is None else c * self.spc + slot

    def qubit(self, i: int, j: int, k: int, slot: int, local: int) -> Optional[int]:
        s = self.state_index(i, j, k, slot)
        return None if s is None else s * self.qps + local


# 4-star state slots within a cell
_EDGE_X, _EDGE_Y, _EDGE_Z, _FACE_X, _FACE_Y, _FACE_Z = range(6)

# boundary edges of each face type: (edge slot, cell offset), in the fixed
# local order that assigns face/edge state qubits to fusions
_FACE_EDGES = {
    _FACE_X: [(_EDGE_Y, (0, 0, 0)), (_EDGE_Y, (0, 0, 1)),
              (_EDGE_Z, (0, 0, 0)), (_EDGE_Z, (0, 1, 0))],
    _FACE_Y: [(_EDGE_X, (0, 0, 0)), (_EDGE_X, (0, 0, 1)),
              (_EDGE_Z, (0, 0, 0)), (_EDGE_Z, (1, 0, 0))],
    _FACE_Z: [(_EDGE_X, (0, 0, 0)), (_EDGE_X, (0, 1, 0)),
              (_EDGE_Y, (0, 0, 0)), (_EDGE_Y, (1, 0, 0))],
}
# the faces around each edge type, mirroring _FACE_EDGES
_EDGE_FACES = {
    _EDGE_X: [(_FACE_Y, (0, 0, 0)), (_FACE_Y, (0, 0, -1)),
              (_FACE_Z, (0, 0, 0)), (_FACE_Z, (0, -1, 0))],
    _EDGE_Y: [(_FACE_X, (0, 0, 0)), (_FACE_X, (0, 0, -1)),
              (_FACE_Z, (0, 0, 0)), (_FACE_Z, (-1, 0, 0))],
    _EDGE_Z: [(_FACE_X, (0, 0, 0)), (_FACE_X, (0, -1, 0)),
              (_FACE_Y, (0, 0, 0)), (_FACE_Y, (-1, 0, 0))],
}

_STAR_POS = {
    _EDGE_X: (_HALF, Fraction(0), Fraction(0)),
    _EDGE_Y: (Fraction(0), _HALF, Fraction(0)),
    _EDGE_Z: (Fraction(0), Fraction(0), _HALF),
    _FACE_X: (Fraction(0), _HALF, _HALF),
    _FACE_Y: (_HALF, Fraction(0), _HALF),
    _FACE_Z: (_HALF, _HALF, Fraction(0)),
}


def build_4star(L: int, periodic: bool = True) -> FusionNetwork:
    """Cubic lattice of 4-GHZ states, one per cell edge and face.

    Each face state fuses with the four edge states bounding its face; every
    fusion measures <XZ, ZX> with the face qubit first, so outcome 0 is
    X_face Z_edge (dual) and outcome 1 is Z_face X_edge (primal).
    """
    if L < 1 or (periodic and L < 2):
        raise InvalidSizeError("4-star lattice needs L >= 2 (periodic) or L >= 1")
    lat = _Lattice(L, periodic, 6, 4)
    n_cells = L ** 3
    n_qubits = n_cells * 24

    states = []
    for k in range(L):
        for j in range(L):
            for i in range(L):
                for slot in range(6):
                    sid = lat.state_index(i, j, k, slot)
                    base = sid * 4
                    dx, dy, dz = _STAR_POS[slot]
                    states.append(ResourceState(
                        sid,
                        tuple(base + t for t in range(4)),
                        _GHZ4,
                        position=(_frac(i) + dx, _frac(j) + dy, _frac(k) + dz),
                    ))

    # local qubit of an edge state facing a given face: position of that
    # face in the edge's _EDGE_FACES list
    def edge_local(edge_slot, face_slot, rel):
        return _EDGE_FACES[edge_slot].index((face_slot, rel))

    fusions = []
    for k in range(L):
        for j in range(L):
            for i in range(L):
                for face_slot in (_FACE_X, _FACE_Y, _FACE_Z):
                    for local_f, (edge_slot, off) in enumerate(
                        _FACE_EDGES[face_slot]
                    ):
                        ei, ej, ek = i + off[0], j + off[1], k + off[2]
                        fq = lat.qubit(i, j, k, face_slot, local_f)
                        # the edge sees this face at the opposite offset
                        rel = (-off[0], -off[1], -off[2])
                        le = edge_local(edge_slot, face_slot, rel)
                        eq = lat.qubit(ei, ej, ek, edge_slot, le)
                        if eq is None:
                            continue  # open boundary: face qubit dangles
                        fusions.append(Fusion(
                            len(fusions), (fq, eq), _XZ_ZX, BasisTag.XZ_ZX
                        ))

    fused = set()
    for fu in fusions:
        fused.update(fu.qubits)
    outer = frozenset(q for q in range(n_qubits) if q not in fused)
    return FusionNetwork(
        n_qubits, tuple(states), tuple(fusions), outer,
        lattice_meta=LatticeMeta("four-star", L, periodic),
    )


# 6-ring: slot 0 = corner state at (i,j,k), slot 1 = center at +(1/2,1/2,1/2)
_CORNER, _CENTER = 0, 1

# fusion pairing: corner(v).ring_pos  <->  center(v+offset).ring_pos
# ring positions are 0-based (customary 1..6 labels minus one)
_RING_PAIRS = [
    # (corner local, center cell offset, center local, location kind)
    (0, (0, -1, -1), 3, "edge-x"),   # edge (i+1/2, j, k)
    (2, (-1, 0, -1), 5, "edge-y"),
    (4, (-1, -1, 0), 1, "edge-z"),
    (1, (0, 0, -1), 4, "face-z"),    # face at z = k
    (3, (-1, 0, 0), 0, "face-x"),
    (5, (0, -1, 0), 2, "face-y"),
]

_RING_QUBIT_POS = {
    0: (Fraction(1, 4), Fraction(0), Fraction(0)),
    1: (Fraction(1, 4), Fraction(1, 4), Fraction(0)),
    2: (Fraction(0), Fraction(1, 4), Fraction(0)),
    3: (Fraction(0), Fraction(1, 4), Fraction(1, 4)),
    4: (Fraction(0), Fraction(0), Fraction(1, 4)),
    5: (Fraction(1, 4), Fraction(0), Fraction(1, 4)),
}


def build_6ring(L: int, periodic: bool = True) -> FusionNetwork:
    """Body-centered-cubic lattice of six-qubit ring graph states.

    Ring qubits alternate between lattice-edge and lattice-face locations;
    each is fused (<XX, ZZ>, corner qubit first) with the co-located qubit
    of the neighboring sublattice state, three to the layer above and three
    below along the (1,1,1) direction.
    """
    if L < 1 or (periodic and L < 2):
        raise InvalidSizeError("6-ring lattice needs L >= 2 (periodic) or L >= 1")
    lat = _Lattice(L, periodic, 2, 6)
    n_cells = L ** 3
    n_qubits = n_cells * 12

    states = []
    for k in range(L):
        for j in range(L):
            for i in range(L):
                for slot in (_CORNER, _CENTER):
                    sid = lat.state_index(i, j, k, slot)
                    base = sid * 6
                    shift = _HALF if slot == _CENTER else Fraction(0)
                    states.append(ResourceState(
                        sid,
                        tuple(base + t for t in range(6)),
                        _RING6,
                        position=(
                            _frac(i) + shift, _frac(j) + shift, _frac(k) + shift
                        ),
                    ))

    fusions = []
    for k in range(L):
        for j in range(L):
            for i in range(L):
                for corner_local, off, center_local, _kind in _RING_PAIRS:
                    cq = lat.qubit(i, j, k, _CORNER, corner_local)
                    zq = lat.qubit(
                        i + off[0], j + off[1], k + off[2], _CENTER, center_local
                    )
                    if zq is None:
                        continue
                    fusions.append(Fusion(
                        len(fusions), (cq, zq), _XX_ZZ, BasisTag.XX_ZZ
                    ))

    fused = set()
    for fu in fusions:
        fused.update(fu.qubits)
    outer = frozenset(q for q in range(n_qubits) if q not in fused)
    return FusionNetwork(
        n_qubits, tuple(states), tuple(fusions), outer,
        lattice_meta=LatticeMeta("six-ring", L, periodic),
    )
