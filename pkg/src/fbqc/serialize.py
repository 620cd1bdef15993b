"""Versioned text serialization of fusion networks.

One record per resource state and per fusion; generator strings use the
``±[IXYZ]{n}`` dump format restricted to the state's own qubits.  Used for
golden-file tests and the CLI `inspect`/`algebra` round trip.
"""

from __future__ import annotations

from fractions import Fraction

from .networks import BasisTag, Fusion, FusionNetwork, LatticeMeta, ResourceState
from .pauli import GeneratorSet, PauliOp

__all__ = ["serialize_network", "parse_network"]

_FORMAT = "fbqc-network v1"


def serialize_network(net: FusionNetwork) -> str:
    lines = [_FORMAT]
    lines.append(f"n_qubits {net.n_qubits}")
    lines.append(f"label_offset {net.label_offset}")
    if net.lattice_meta is not None:
        m = net.lattice_meta
        lines.append(f"lattice {m.kind} {m.L} {'periodic' if m.periodic else 'open'}")
    lines.append("outer " + " ".join(str(q) for q in sorted(net.outer_qubits)))
    for rs in net.resource_states:
        rec = [
            f"state {rs.id}",
            "qubits " + " ".join(str(q) for q in rs.qubits),
            "gens " + ",".join(g.to_label() for g in rs.stabilizers.gens),
        ]
        if rs.position is not None:
            rec.append("pos " + " ".join(str(c) for c in rs.position))
        lines.append(" ".join(rec))
    for fu in net.fusions:
        lines.append(
            f"fusion {fu.id} qubits {fu.qubits[0]} {fu.qubits[1]} "
            f"basis {fu.basis_tag.value} meas "
            + ",".join(g.to_label() for g in fu.measurements)
        )
    return "\n".join(lines) + "\n"


def parse_network(text: str) -> FusionNetwork:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != _FORMAT:
        raise ValueError("not a fbqc-network v1 file")
    n_qubits = None
    label_offset = 0
    meta = None
    outer: set[int] = set()
    states: list[ResourceState] = []
    fusions: list[Fusion] = []
    for ln in lines[1:]:
        parts = ln.split()
        tag = parts[0]
        if tag == "n_qubits":
            n_qubits = int(parts[1])
        elif tag == "label_offset":
            label_offset = int(parts[1])
        elif tag == "lattice":
            meta = LatticeMeta(parts[1], int(parts[2]), parts[3] == "periodic")
        elif tag == "outer":
            outer = set(int(q) for q in parts[1:])
        elif tag == "state":
            sid = int(parts[1])
            iq = parts.index("qubits")
            ig = parts.index("gens")
            ip = parts.index("pos") if "pos" in parts else len(parts)
            qubits = tuple(int(q) for q in parts[iq + 1 : ig])
            gens = [PauliOp.from_label(s) for s in parts[ig + 1].split(",")]
            pos = None
            if ip < len(parts):
                pos = tuple(Fraction(c) for c in parts[ip + 1 : ip + 4])
            states.append(
                ResourceState(sid, qubits, GeneratorSet(len(qubits), gens), pos)
            )
        elif tag == "fusion":
            fid = int(parts[1])
            qubits = (int(parts[3]), int(parts[4]))
            basis = BasisTag(parts[6])
            meas = tuple(PauliOp.from_label(s) for s in parts[8].split(","))
            fusions.append(Fusion(fid, qubits, meas, basis))
        else:
            raise ValueError(f"unknown record {tag!r}")
    if n_qubits is None:
        raise ValueError("missing n_qubits record")
    return FusionNetwork(
        n_qubits,
        tuple(states),
        tuple(fusions),
        frozenset(outer),
        lattice_meta=meta,
        label_offset=label_offset,
    )
