"""Dense state-vector oracle for small fusion networks (<= 16 qubits).

Builds the joint resource state explicitly, applies the fusion measurements
as projectors for a fixed outcome assignment, and reads off the stabilizer
group of the post-measurement outer-qubit state by exhaustive Pauli
enumeration.  Everything here is deliberately brute force; it exists to
cross-check the symplectic algebra, not to be fast.

Qubit 0 is the most significant bit of the state index.
"""

from __future__ import annotations

import numpy as np

from .pauli import (
    GeneratorSet,
    Outcome,
    OutcomeVector,
    PauliOp,
    canonicalize,
)

__all__ = ["TooLargeError", "apply_pauli", "stabilizer_state", "brute_force_oracle"]

_MAX_QUBITS = 16
_ATOL = 1e-9


class TooLargeError(RuntimeError):
    """The network exceeds the brute-force qubit budget."""


def _masks(op: PauliOp) -> tuple[int, int]:
    xm = zm = 0
    for q in range(op.n):
        bit = 1 << (op.n - 1 - q)
        if op.x[q]:
            xm |= bit
        if op.z[q]:
            zm |= bit
    return xm, zm


def _parity(v: np.ndarray) -> np.ndarray:
    # bit-parity of each entry of an integer array
    p = v.copy()
    shift = 1
    while shift < 64:
        p ^= p >> shift
        shift *= 2
    return p & 1


def apply_pauli(op: PauliOp, psi: np.ndarray) -> np.ndarray:
    """Return (i^phase X^x Z^z) |psi> for a dense state vector."""
    n = op.n
    if psi.shape != (1 << n,):
        raise ValueError("state vector size mismatch")
    xm, zm = _masks(op)
    idx = np.arange(1 << n, dtype=np.uint64)
    # Z acts first on basis states: Z|b> = (-1)^(z.b)|b>, then X flips bits.
    signs = 1.0 - 2.0 * _parity(idx & np.uint64(zm)).astype(np.float64)
    out = np.empty_like(psi)
    out[(idx ^ np.uint64(xm)).astype(np.intp)] = signs * psi
    return (1j ** op.phase) * out


def stabilizer_state(group: GeneratorSet) -> np.ndarray:
    """Dense state vector stabilized by a full-rank Hermitian generator set."""
    n = group.n
    if n > _MAX_QUBITS:
        raise TooLargeError(f"{n} qubits exceeds the {_MAX_QUBITS}-qubit budget")
    rng = np.random.default_rng(12345)
    psi = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    for g in group.gens:
        psi = 0.5 * (psi + apply_pauli(g, psi))
    norm = np.linalg.norm(psi)
    if norm < _ATOL:
        # pathological overlap with the random start; retry deterministically
        psi = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
        for g in group.gens:
            psi = 0.5 * (psi + apply_pauli(g, psi))
        norm = np.linalg.norm(psi)
        if norm < _ATOL:
            raise ValueError("projectors annihilated the state; invalid group?")
    return psi / norm


def project_outcomes(
    psi: np.ndarray, f: GeneratorSet, outcomes: OutcomeVector
) -> tuple[np.ndarray, float]:
    """Apply (1 + m M)/2 for every fusion measurement; returns state & prob."""
    if len(outcomes) != len(f.gens):
        raise ValueError("outcome count mismatch")
    prob = 1.0
    for g, m in zip(f.gens, outcomes.values):
        if m is Outcome.ERASED:
            raise ValueError("cannot project an erased outcome")
        psi = 0.5 * (psi + m.value * apply_pauli(g, psi))
        p = float(np.vdot(psi, psi).real)
        if p < _ATOL:
            return psi, 0.0
        prob *= p
        psi = psi / np.sqrt(p)
    return psi, prob


def _extract_outer(psi: np.ndarray, n: int, outer: list[int]) -> np.ndarray:
    """Outer-qubit factor of a product state (rank-1 across the cut)."""
    inner = [q for q in range(n) if q not in set(outer)]
    tensor = psi.reshape([2] * n)
    tensor = np.transpose(tensor, axes=outer + inner)
    mat = tensor.reshape(1 << len(outer), 1 << len(inner))
    u, s, _ = np.linalg.svd(mat, full_matrices=False)
    if s.size > 1 and s[1] > 1e-6 * s[0]:
        raise ValueError("post-measurement state is entangled across the cut")
    vec = u[:, 0]
    # fix the global phase so the largest entry is real positive
    k = int(np.argmax(np.abs(vec)))
    vec = vec * (np.conj(vec[k]) / abs(vec[k]))
    return vec


def state_stabilizer_group(psi: np.ndarray, n: int) -> GeneratorSet:
    """All-Pauli scan for the stabilizer group of a pure n-qubit state."""
    if n > 6:
        raise TooLargeError("exhaustive Pauli scan limited to 6 qubits")
    found: list[PauliOp] = []
    for code in range(4**n):
        letters = []
        c = code
        for _ in range(n):
            letters.append("IXZY"[c % 4])
            c //= 4
        op = PauliOp.from_label("".join(letters))
        if op.is_identity:
            continue
        val = np.vdot(psi, apply_pauli(op, psi))
        if abs(val - 1.0) < 1e-7:
            found.append(op)
        elif abs(val + 1.0) < 1e-7:
            found.append(PauliOp(n, op.x, op.z, op.phase + 2))
    return canonicalize(GeneratorSet(n, found))


def brute_force_oracle(network, outcomes: OutcomeVector) -> GeneratorSet | None:
    """Output stabilizers of a network under a fixed outcome assignment.

    Returns None when the assignment has probability zero (it violates a
    check), otherwise the canonical stabilizer group of the outer-qubit
    state, with exact signs.
    """
    from .networks import network_groups  # local import to avoid a cycle

    if network.n_qubits > _MAX_QUBITS:
        raise TooLargeError(
            f"{network.n_qubits} qubits exceeds the {_MAX_QUBITS}-qubit budget"
        )
    r, f = network_groups(network)
    psi = stabilizer_state(r)
    psi, prob = project_outcomes(psi, f, outcomes)
    if prob == 0.0:
        return None
    outer = sorted(network.outer_qubits)
    if not outer:
        return GeneratorSet(0, [], canonical=True)
    vec = _extract_outer(psi, network.n_qubits, outer)
    return state_stabilizer_group(vec, len(outer))
