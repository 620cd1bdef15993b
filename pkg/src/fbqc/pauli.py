"""Exact symplectic-GF(2) Pauli group arithmetic.

An n-qubit Pauli operator is stored as a pair of GF(2) vectors (x, z) plus a
phase exponent p, representing

    i^p * prod_q X_q^{x_q} Z_q^{z_q}

with X applied before Z on every qubit.  All group computations (products,
commutation, row reduction, centralizers, intersections) happen on the (x|z)
vectors; phases are tracked exactly mod 4 alongside.

Conventions used throughout:

* A Hermitian operator satisfies ``phase == weight(x & z) (mod 2)``; stabilizer
  generators therefore carry phase 0 or 2 (sign +1 or -1).
* Canonical form of a generating set is the unique reduced row echelon form
  over the columns ordered ``x_0 .. x_{n-1}, z_0 .. z_{n-1}``.  This ordering
  reproduces the usual graph-state presentation (X-block = identity) for
  graph states.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

__all__ = [
    "PauliOp",
    "GeneratorSet",
    "Outcome",
    "OutcomeVector",
    "ErrorClass",
    "ErasedDependencyError",
    "NotRestrictableError",
    "multiply",
    "commutes",
    "canonicalize",
    "decompose",
    "centralizer_in",
    "intersection",
    "output_stabilizers",
    "classify_error",
    "flipped_outcomes",
]


class ErasedDependencyError(RuntimeError):
    """An output stabilizer needs a fusion outcome that was erased."""


class NotRestrictableError(RuntimeError):
    """The inner part of a surviving stabilizer is not in the fusion group."""


_PHASE_STR = {0: "+", 1: "+i", 2: "-", 3: "-i"}


@dataclass(frozen=True)
class PauliOp:
    """An n-qubit Pauli operator ``i^phase * X^x Z^z``."""

    n: int
    x: np.ndarray
    z: np.ndarray
    phase: int = 0

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.uint8) % 2
        z = np.asarray(self.z, dtype=np.uint8) % 2
        if x.shape != (self.n,) or z.shape != (self.n,):
            raise ValueError("x/z length does not match qubit count")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "phase", int(self.phase) % 4)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def identity(n: int) -> "PauliOp":
        return PauliOp(n, np.zeros(n, np.uint8), np.zeros(n, np.uint8), 0)

    @staticmethod
    def from_label(label: str, n: Optional[int] = None, phase: int = 0) -> "PauliOp":
        """Build from a dense IXYZ string, e.g. ``"XZI"``.

        ``Y`` contributes one unit of phase (Y = i XZ), so the stored phase of
        ``from_label("Y")`` is adjusted to keep the operator equal to the
        textbook Y matrix.
        """
        label = label.strip().lstrip("+")
        sign_phase = 0
        if label.startswith("-"):
            sign_phase = 2
            label = label[1:]
        if n is None:
            n = len(label)
        if len(label) != n:
            raise ValueError("label length does not match qubit count")
        x = np.zeros(n, np.uint8)
        z = np.zeros(n, np.uint8)
        ys = 0
        for q, ch in enumerate(label.upper()):
            if ch == "I":
                continue
            elif ch == "X":
                x[q] = 1
            elif ch == "Z":
                z[q] = 1
            elif ch == "Y":
                x[q] = 1
                z[q] = 1
                ys += 1
            else:
                raise ValueError(f"invalid Pauli letter {ch!r}")
        return PauliOp(n, x, z, (phase + sign_phase + ys) % 4)

    @staticmethod
    def from_support(n: int, support: dict[int, str], phase: int = 0) -> "PauliOp":
        """Build from a sparse {qubit: letter} mapping."""
        x = np.zeros(n, np.uint8)
        z = np.zeros(n, np.uint8)
        ys = 0
        for q, ch in support.items():
            ch = ch.upper()
            if ch == "X":
                x[q] = 1
            elif ch == "Z":
                z[q] = 1
            elif ch == "Y":
                x[q] = 1
                z[q] = 1
                ys += 1
            elif ch != "I":
                raise ValueError(f"invalid Pauli letter {ch!r}")
        return PauliOp(n, x, z, (phase + ys) % 4)

    # -- queries -----------------------------------------------------------

    @property
    def is_identity(self) -> bool:
        return not (self.x.any() or self.z.any())

    @property
    def is_hermitian(self) -> bool:
        return (self.phase - int(np.sum(self.x & self.z))) % 2 == 0

    @property
    def sign(self) -> int:
        """+1 or -1 for a Hermitian operator (in IXYZ letters)."""
        k = (self.phase - int(np.sum(self.x & self.z))) % 4
        if k == 0:
            return 1
        if k == 2:
            return -1
        raise ValueError("operator is not Hermitian")

    def support(self) -> np.ndarray:
        return np.flatnonzero(self.x | self.z)

    def weight(self) -> int:
        return int(np.sum(self.x | self.z))

    def letter(self, q: int) -> str:
        return "IXZY"[int(self.x[q]) + 2 * int(self.z[q])]

    def to_label(self) -> str:
        """Dense ``±[IXYZ]{n}`` string (the debug dump format)."""
        k = (self.phase - int(np.sum(self.x & self.z))) % 4
        body = "".join(self.letter(q) for q in range(self.n))
        return _PHASE_STR[k] + body

    def to_sparse_label(self, offset: int = 0) -> str:
        """Compact form like ``-Z1X2Z7`` (indices shifted by ``offset``)."""
        k = (self.phase - int(np.sum(self.x & self.z))) % 4
        if self.is_identity:
            return _PHASE_STR[k] + "I"
        body = "".join(
            f"{self.letter(q)}{q + offset}" for q in self.support()
        )
        return (_PHASE_STR[k] if k else "") + body

    def restrict(self, qubits: Sequence[int]) -> "PauliOp":
        """Restriction to a subset of qubits, reindexed, with phase 0 base.

        The per-qubit X-before-Z factors commute across qubits, so the
        operator factorizes as i^phase * (part on qubits) x (part elsewhere)
        where both parts carry phase 0.
        """
        idx = np.asarray(qubits, dtype=np.intp)
        return PauliOp(len(idx), self.x[idx], self.z[idx], 0)

    def __repr__(self):
        return f"PauliOp({self.to_label()!r})"

    def __hash__(self):
        return hash((self.n, self.x.tobytes(), self.z.tobytes(), self.phase))

    def __eq__(self, other):
        if not isinstance(other, PauliOp):
            return NotImplemented
        return (
            self.n == other.n
            and self.phase == other.phase
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.z, other.z)
        )

    def key(self) -> bytes:
        """Sign-insensitive GF(2) key for the (x|z) row."""
        return self.x.tobytes() + self.z.tobytes()


def _check_same_n(a: PauliOp, b: PauliOp):
    if a.n != b.n:
        raise ValueError(f"qubit count mismatch: {a.n} != {b.n}")


def multiply(a: PauliOp, b: PauliOp) -> PauliOp:
    """Product a*b with exact phase tracking mod 4.

    Moving Z^za past X^xb produces (-1)^(za.xb), hence the phase increment.
    """
    _check_same_n(a, b)
    phase = (a.phase + b.phase + 2 * int(np.sum(a.z & b.x))) % 4
    return PauliOp(a.n, a.x ^ b.x, a.z ^ b.z, phase)


def commutes(a: PauliOp, b: PauliOp) -> bool:
    """True iff the symplectic product <a.x,b.z> + <a.z,b.x> vanishes mod 2."""
    _check_same_n(a, b)
    return (int(np.sum(a.x & b.z)) + int(np.sum(a.z & b.x))) % 2 == 0


class Outcome(enum.Enum):
    PLUS = 1
    MINUS = -1
    ERASED = 0


@dataclass(frozen=True)
class OutcomeVector:
    """One measurement value per generator of a fusion group F."""

    values: tuple[Outcome, ...]

    @staticmethod
    def all_plus(k: int) -> "OutcomeVector":
        return OutcomeVector(tuple([Outcome.PLUS] * k))

    @staticmethod
    def from_signs(signs: Iterable[int]) -> "OutcomeVector":
        return OutcomeVector(tuple(Outcome(int(s)) for s in signs))

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]


class ErrorClass(enum.Enum):
    DETECTABLE = "detectable"
    UNDETECTABLE_TRIVIAL = "undetectable-trivial"
    UNDETECTABLE_NONTRIVIAL = "undetectable-nontrivial"


@dataclass
class GeneratorSet:
    """An ordered list of Pauli operators generating a Pauli subgroup.

    ``contains_minus_one`` marks groups (fusion groups) that include -1, in
    which case all GF(2) row operations are understood up to sign.
    """

    n: int
    gens: list[PauliOp] = field(default_factory=list)
    contains_minus_one: bool = False
    canonical: bool = False
    # Optional metadata attached by intersection(): per-generator expressions
    # over the parent groups' generators, as (indices, sign) pairs.
    r_expr: Optional[list[tuple[tuple[int, ...], int]]] = None
    f_expr: Optional[list[tuple[tuple[int, ...], int]]] = None

    def __post_init__(self):
        for g in self.gens:
            if g.n != self.n:
                raise ValueError("generator qubit count mismatch")
            if not g.is_hermitian:
                raise ValueError(f"non-Hermitian generator {g.to_label()}")

    def __len__(self):
        return len(self.gens)

    def __iter__(self):
        return iter(self.gens)

    def __getitem__(self, i) -> PauliOp:
        return self.gens[i]

    def rank(self) -> int:
        return len(canonicalize(self).gens)

    def dump(self, offset: int = 0) -> str:
        """One generator per line in ``±[IXYZ]{n}`` form."""
        del offset
        return "\n".join(g.to_label() for g in self.gens)


def _pivot_column(g: PauliOp) -> Optional[int]:
    """Leading column in the (x-block, z-block) ordering, or None."""
    nz = np.flatnonzero(g.x)
    if nz.size:
        return int(nz[0])
    nz = np.flatnonzero(g.z)
    if nz.size:
        return int(nz[0]) + g.n
    return None


def _col_value(g: PauliOp, col: int) -> int:
    return int(g.x[col]) if col < g.n else int(g.z[col - g.n])


def canonicalize(gset: GeneratorSet) -> GeneratorSet:
    """Unique reduced row echelon form of the generating set.

    Row operations are Pauli multiplications, so signs are tracked exactly.
    Pivot columns are scanned left-to-right with all X columns (by qubit)
    before all Z columns; this makes graph-state stabilizers come out in
    their standard X-diagonal presentation.  Rows reducing to the identity
    are dropped; reducing to -1 is only legal when the group contains -1.
    """
    rows: list[PauliOp] = list(gset.gens)
    out: list[PauliOp] = []
    for col in range(2 * gset.n):
        pivot = None
        for i, r in enumerate(rows):
            if _col_value(r, col):
                pivot = rows.pop(i)
                break
        if pivot is None:
            continue
        rows = [multiply(r, pivot) if _col_value(r, col) else r for r in rows]
        out = [multiply(r, pivot) if _col_value(r, col) else r for r in out]
        out.append(pivot)
    for r in rows:  # fully reduced leftovers
        if r.phase == 2:
            if not gset.contains_minus_one:
                raise ValueError("generating set spans -1 but is not flagged for it")
        elif r.phase != 0:
            raise ValueError("generating set spans an anti-Hermitian scalar")
    out.sort(key=_pivot_column)
    return GeneratorSet(
        gset.n, out, contains_minus_one=gset.contains_minus_one, canonical=True
    )


def decompose(gset: GeneratorSet, p: PauliOp) -> Optional[tuple[tuple[int, ...], int]]:
    """Express p over a canonicalized generating set, up to sign.

    Returns ``(indices, sign)`` with ``p == sign * prod(gens[i] for i in
    indices)`` and sign in {+1, -1}, or None when the (x|z) row of p is
    outside the span.  The canonical form makes the expression unique.
    """
    if not gset.canonical:
        gset = canonicalize(gset)
    r = p
    used: list[int] = []
    for i, g in enumerate(gset.gens):
        col = _pivot_column(g)
        if col is not None and _col_value(r, col):
            r = multiply(r, g)
            used.append(i)
    if not r.is_identity:
        return None
    if r.phase % 2:
        raise ValueError("decomposition produced an anti-Hermitian scalar")
    sign = 1 if r.phase == 0 else -1
    return tuple(used), sign


def decompose_in_basis(
    gens: Sequence[PauliOp], p: PauliOp
) -> Optional[tuple[tuple[int, ...], int]]:
    """Express p over an arbitrary generator list, up to sign.

    Unlike :func:`decompose` this keeps the caller's generator indexing (as
    needed to map fusion-group expressions onto measurement outcomes).  For a
    dependent list an arbitrary valid solution is returned.  The result
    satisfies ``p == sign * prod(gens[i] for i in indices)`` provided the
    chosen generators commute pairwise (true for all groups used here).
    """
    if not gens:
        return ((), 1) if p.is_identity and p.phase == 0 else None
    n = gens[0].n
    rows = np.array(
        [np.concatenate([g.x, g.z]) for g in gens], dtype=np.uint8
    )
    target = np.concatenate([p.x, p.z]).astype(np.uint8)
    # solve eps . rows == target by eliminating on rows^T with bookkeeping
    m = rows.copy()
    combos = np.eye(len(gens), dtype=np.uint8)
    acc = target.copy()
    sel = np.zeros(len(gens), np.uint8)
    r = 0
    for c in range(2 * n):
        piv = None
        for i in range(r, m.shape[0]):
            if m[i, c]:
                piv = i
                break
        if piv is None:
            continue
        m[[r, piv]] = m[[piv, r]]
        combos[[r, piv]] = combos[[piv, r]]
        for i in range(m.shape[0]):
            if i != r and m[i, c]:
                m[i] ^= m[r]
                combos[i] ^= combos[r]
        if acc[c]:
            acc ^= m[r]
            sel ^= combos[r]
        r += 1
    if acc.any():
        return None
    prod = _product_of(list(gens), sel, n)
    dp = (p.phase - prod.phase) % 4
    if dp % 2:
        raise ValueError("decomposition produced an anti-Hermitian scalar")
    return tuple(int(i) for i in np.flatnonzero(sel)), (1 if dp == 0 else -1)


def _nullspace_gf2(mat: np.ndarray) -> list[np.ndarray]:
    """Basis of the right nullspace of a GF(2) matrix (rows x cols)."""
    mat = mat.copy() % 2
    rows, cols = mat.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        sel = None
        for i in range(r, rows):
            if mat[i, c]:
                sel = i
                break
        if sel is None:
            continue
        mat[[r, sel]] = mat[[sel, r]]
        for i in range(rows):
            if i != r and mat[i, c]:
                mat[i] ^= mat[r]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    basis = []
    free = [c for c in range(cols) if c not in pivots]
    for fc in free:
        v = np.zeros(cols, np.uint8)
        v[fc] = 1
        for ri, pc in enumerate(pivots):
            if mat[ri, fc]:
                v[pc] = 1
        basis.append(v)
    return basis


def _product_of(gens: Sequence[PauliOp], mask: np.ndarray, n: int) -> PauliOp:
    acc = PauliOp.identity(n)
    for i in np.flatnonzero(mask):
        acc = multiply(acc, gens[int(i)])
    return acc


def centralizer_in(r: GeneratorSet, f: GeneratorSet) -> GeneratorSet:
    """Generators of the subgroup of <r> commuting with every generator of f.

    Solved as a GF(2) linear system over the exponent vectors of r's
    canonical generators.
    """
    if r.n != f.n:
        raise ValueError("qubit count mismatch between groups")
    rc = canonicalize(r)
    if not rc.gens:
        return GeneratorSet(r.n, [], canonical=True)
    comm = np.zeros((len(rc.gens), len(f.gens)), np.uint8)
    for i, g in enumerate(rc.gens):
        for j, h in enumerate(f.gens):
            comm[i, j] = 0 if commutes(g, h) else 1
    # combos eps with eps^T . comm == 0
    basis = _nullspace_gf2(comm.T) if f.gens else [
        np.eye(len(rc.gens), dtype=np.uint8)[i] for i in range(len(rc.gens))
    ]
    gens = [_product_of(rc.gens, v, r.n) for v in basis]
    return canonicalize(GeneratorSet(r.n, gens))


def intersection(r: GeneratorSet, f: GeneratorSet) -> GeneratorSet:
    """Generators of <r> ∩ <f> over (x|z) rows, ignoring signs.

    Computed via the Zassenhaus doubled-space reduction.  Each returned
    generator is re-signed to the element actually contained in <r>, and
    carries its expression over r's and f's generators in ``r_expr`` /
    ``f_expr`` (filled via decompose, so signs are exact).
    """
    if r.n != f.n:
        raise ValueError("qubit count mismatch between groups")
    rc = canonicalize(r)
    fc = canonicalize(f)
    nr, nf = len(rc.gens), len(fc.gens)
    if nr == 0 or nf == 0:
        return GeneratorSet(r.n, [], canonical=True)
    width = 2 * r.n
    mat = np.zeros((nr + nf, 2 * width), np.uint8)
    for i, g in enumerate(rc.gens):
        row = np.concatenate([g.x, g.z])
        mat[i, :width] = row
        mat[i, width:] = row
    for j, g in enumerate(fc.gens):
        mat[nr + j, :width] = np.concatenate([g.x, g.z])
    # GF(2) elimination on the left block
    rr = 0
    rows = mat.shape[0]
    for c in range(width):
        sel = None
        for i in range(rr, rows):
            if mat[i, c]:
                sel = i
                break
        if sel is None:
            continue
        mat[[rr, sel]] = mat[[sel, rr]]
        for i in range(rows):
            if i != rr and mat[i, c]:
                mat[i] ^= mat[rr]
        rr += 1
    inter_rows = [mat[i, width:] for i in range(rr, rows) if mat[i, width:].any()]
    gens = [PauliOp(r.n, row[: r.n], row[r.n :], 0) for row in inter_rows]
    gset0 = canonicalize(GeneratorSet(r.n, gens))
    # re-sign each canonical generator to the representative contained in <r>
    # and attach its exact expressions over both parent groups
    final: list[PauliOp] = []
    r_exprs: list[tuple[tuple[int, ...], int]] = []
    f_exprs: list[tuple[tuple[int, ...], int]] = []
    for g in gset0.gens:
        dec_r = decompose_in_basis(list(r.gens), g)
        if dec_r is None:
            raise AssertionError("intersection element not in <r>")
        idx_r, sign_r = dec_r
        # re-sign to the representative that is actually contained in <r>
        rep = g if sign_r == 1 else PauliOp(r.n, g.x, g.z, g.phase + 2)
        dec_f = decompose_in_basis(list(f.gens), rep)
        if dec_f is None:
            raise AssertionError("intersection element not in <f> span")
        final.append(rep)
        r_exprs.append((idx_r, 1))
        f_exprs.append(dec_f)
    return GeneratorSet(
        r.n, final, canonical=True, r_expr=r_exprs, f_expr=f_exprs
    )


def output_stabilizer_expressions(
    s: GeneratorSet,
    outer: Sequence[int],
    f: GeneratorSet,
) -> list[tuple[PauliOp, tuple[int, ...], int]]:
    """Symbolic output stabilizers: (outer operator, outcome indices, sign).

    Each surviving-stabilizer generator with outer support is reduced to a
    canonical representative whose measured part uses the fewest fusion
    outcomes (ties broken by lexicographic outcome-index order), then split
    into its outer operator and the outcome indices that determine its sign.
    """
    outer = sorted(outer)
    inner = [q for q in range(s.n) if q not in set(outer)]
    for g in f.gens:
        if g.x[outer].any() or g.z[outer].any():
            raise NotRestrictableError("fusion group acts on an outer qubit")
    f_inner = [g.restrict(inner) for g in f.gens]
    n_out = len(outer)

    # RREF with column priority (outer X | outer Z | inner X | inner Z), so
    # rows split exactly into output generators (pivot in the outer block,
    # outer parts mutually reduced) and pure-inner rows (the checks).
    cols = (
        [("x", q) for q in outer]
        + [("z", q) for q in outer]
        + [("x", q) for q in inner]
        + [("z", q) for q in inner]
    )

    def col_val(g: PauliOp, c) -> int:
        kind, q = c
        return int(g.x[q]) if kind == "x" else int(g.z[q])

    rows = list(s.gens)
    reduced: list[PauliOp] = []
    pivots: list[int] = []
    for ci, c in enumerate(cols):
        pivot = None
        for i, r in enumerate(rows):
            if col_val(r, c):
                pivot = rows.pop(i)
                break
        if pivot is None:
            continue
        rows = [multiply(r, pivot) if col_val(r, c) else r for r in rows]
        reduced = [multiply(r, pivot) if col_val(r, c) else r for r in reduced]
        reduced.append(pivot)
        pivots.append(ci)
    order = np.argsort(pivots, kind="stable")
    reduced = [reduced[int(i)] for i in order]
    pivots = [pivots[int(i)] for i in order]
    n_outer_cols = 2 * n_out
    out_rows = [g for g, p in zip(reduced, pivots) if p < n_outer_cols]
    inner_rows = [g for g, p in zip(reduced, pivots) if p >= n_outer_cols]

    def f_expression(g: PauliOp):
        in_part = g.restrict(inner)
        if in_part.is_identity:
            return (), 1
        dec = decompose_in_basis(f_inner, in_part)
        if dec is None:
            return None
        return dec

    # Inner rows that decompose over F (the checks, as represented inside S);
    # multiplying an output row by them changes only its outcome expression.
    check_rows = [g for g in inner_rows if f_expression(g) is not None]
    if len(check_rows) > 12:
        check_rows = []  # coset minimization only meant for small examples

    exprs: list[tuple[PauliOp, tuple[int, ...], int]] = []
    for g in out_rows:
        best = None
        for mask in range(1 << len(check_rows)):
            cand = g
            for i in range(len(check_rows)):
                if (mask >> i) & 1:
                    cand = multiply(cand, check_rows[i])
            dec = f_expression(cand)
            if dec is None:
                continue
            key = (len(dec[0]), tuple(dec[0]))
            if best is None or key < best[0]:
                best = (key, cand, dec)
        if best is None:
            raise NotRestrictableError(
                "output stabilizer has no fusion-group expression"
            )
        _, g, (idx, dsign) = best
        if g.phase % 2:
            raise ValueError("surviving stabilizer has anti-Hermitian phase")
        sign = (1 if g.phase % 4 == 0 else -1) * dsign
        exprs.append((g.restrict(outer), idx, sign))
    return exprs


def output_stabilizers(
    s: GeneratorSet,
    outer: Sequence[int],
    f: GeneratorSet,
    outcomes: OutcomeVector,
) -> GeneratorSet:
    """Restrict the surviving stabilizer group to the outer qubits with signs.

    Each generator s = s_in ⊗ s_out is split; s_in is decomposed over f's
    generators and the corresponding outcome signs (together with the exact
    residual sign of the decomposition) multiply into s_out.  Generators
    supported entirely on the measured qubits (the checks) are dropped.
    """
    if len(outcomes) != len(f.gens):
        raise ValueError("outcome vector length does not match fusion group")
    exprs = output_stabilizer_expressions(s, outer, f)
    n_out = len(sorted(outer))
    out_gens: list[PauliOp] = []
    for out_part, idx, base_sign in exprs:
        sign = base_sign
        for j in idx:
            val = outcomes[j]
            if val is Outcome.ERASED:
                raise ErasedDependencyError(
                    f"outcome {j} is erased but required by an output stabilizer"
                )
            sign *= val.value
        out_gens.append(
            PauliOp(n_out, out_part.x, out_part.z, 0 if sign == 1 else 2)
        )
    return GeneratorSet(n_out, out_gens, canonical=True)


def classify_error(e: PauliOp, c: GeneratorSet, s: GeneratorSet) -> ErrorClass:
    """Detectable / trivially-undetectable / nontrivially-undetectable."""
    if e.n != c.n or e.n != s.n:
        raise ValueError("qubit count mismatch")
    for g in c.gens:
        if not commutes(e, g):
            return ErrorClass.DETECTABLE
    for g in s.gens:
        if not commutes(e, g):
            return ErrorClass.UNDETECTABLE_NONTRIVIAL
    return ErrorClass.UNDETECTABLE_TRIVIAL


def flipped_outcomes(e: PauliOp, f: GeneratorSet) -> np.ndarray:
    """Bit i set iff e anticommutes with generator i of f (the P/F signature)."""
    if e.n != f.n:
        raise ValueError("qubit count mismatch")
    return np.array(
        [0 if commutes(e, g) else 1 for g in f.gens], dtype=np.uint8
    )
