"""Network builders: worked-example tables, lattice counts, invariances."""

import numpy as np
import pytest

from fbqc.networks import (
    BasisTag,
    InvalidSizeError,
    build_4star,
    build_6ring,
    build_bell_ftfn_example,
    build_four_line_example,
    network_groups,
)
from fbqc.pauli import (
    ErrorClass,
    Outcome,
    OutcomeVector,
    PauliOp,
    canonicalize,
    centralizer_in,
    classify_error,
    commutes,
    flipped_outcomes,
    intersection,
    output_stabilizer_expressions,
    output_stabilizers,
)
from fbqc.serialize import parse_network, serialize_network


# ---------------------------------------------------------------------- fig3

def test_fig3_group_sizes(fig3):
    net, r, f = fig3
    assert len(r.gens) == 8
    assert len(f.gens) == 4
    assert f.contains_minus_one
    assert sorted(net.outer_qubits) == [0, 1, 6, 7]


def test_fig3_fusion_measurements_commute(fig3):
    net, _r, f = fig3
    for a in f.gens:
        for b in f.gens:
            assert commutes(a, b)
    assert all(fu.basis_tag is BasisTag.XZ_ZX for fu in net.fusions)


def test_fig3_output_table(fig3):
    """S_out = <X1Z2, m2 m4 Z1X2Z7, m1 m3 Z2X7Z8, Z7X8>, exactly."""
    net, r, f = fig3
    s = centralizer_in(r, f)
    exprs = output_stabilizer_expressions(s, sorted(net.outer_qubits), f)
    rendered = [
        (op.to_label(), tuple(sorted(idx)), sign) for op, idx, sign in exprs
    ]
    assert rendered == [
        ("+XZII", (), 1),
        ("+ZXZI", (1, 3), 1),   # m2 m4
        ("+IZXZ", (0, 2), 1),   # m1 m3
        ("+IIZX", (), 1),
    ]


def test_fig3_line_graph_from_centralizer(fig3):
    net, r, f = fig3
    s = centralizer_in(r, f)
    out = output_stabilizers(s, sorted(net.outer_qubits), f,
                             OutcomeVector.all_plus(4))
    assert [g.to_label() for g in out.gens] == [
        "+XZII", "+ZXZI", "+IZXZ", "+IIZX"
    ]
    assert all(g.sign == 1 for g in out.gens)


def test_fig3_minus_outcome_signs(fig3):
    net, r, f = fig3
    s = centralizer_in(r, f)
    vals = [Outcome.PLUS, Outcome.MINUS, Outcome.PLUS, Outcome.PLUS]
    out = output_stabilizers(s, sorted(net.outer_qubits), f,
                             OutcomeVector(tuple(vals)))
    signs = [g.sign for g in out.gens]
    assert signs == [1, -1, 1, 1]  # only S2 = m2 m4 Z1X2Z7 flips


def test_fig3_check_group_empty(fig3):
    _net, r, f = fig3
    assert intersection(r, f).gens == []


# ---------------------------------------------------------------------- fig4

def test_fig4_structure(fig4):
    net, r, f = fig4
    assert net.n_qubits == 16
    assert sorted(net.outer_qubits) == [0, 15]
    assert len(net.fusions) == 7
    assert all(fu.basis_tag is BasisTag.XX_ZZ for fu in net.fusions)
    pairs = sorted(tuple(sorted(q + 1 for q in fu.qubits))
                   for fu in net.fusions)
    assert pairs == [(2, 5), (3, 7), (4, 13), (6, 9), (8, 11), (10, 14),
                     (12, 15)]
    assert (3, 12) in [tuple(sorted(fu.qubits)) for fu in net.fusions]


def _flabel(net, j):
    fu = net.fusions[j // 2]
    a, b = (q + 1 for q in fu.qubits)
    return f"m^{'XX' if j % 2 == 0 else 'ZZ'}_{a},{b}"


def test_fig4_check_group_exact(fig4):
    net, r, f = fig4
    c = intersection(r, f)
    assert len(c.gens) == 2
    rendered = {
        frozenset(_flabel(net, j) for j in idx) for (idx, sign) in c.f_expr
    }
    assert all(sign == 1 for (_idx, sign) in c.f_expr)
    assert rendered == {
        frozenset({"m^XX_2,5", "m^ZZ_6,9", "m^XX_10,14", "m^ZZ_4,13"}),
        frozenset({"m^XX_3,7", "m^ZZ_8,11", "m^XX_12,15", "m^ZZ_4,13"}),
    }


def test_fig4_output_stabilizers_exact(fig4):
    net, r, f = fig4
    s = centralizer_in(r, f)
    exprs = output_stabilizer_expressions(s, [0, 15], f)
    table = {
        op.to_label(): (frozenset(_flabel(net, j) for j in idx), sign)
        for op, idx, sign in exprs
    }
    assert table["+XX"] == (frozenset({"m^ZZ_4,13"}), 1)
    assert table["+ZZ"] == (
        frozenset({"m^XX_4,13", "m^ZZ_2,5", "m^XX_6,9", "m^ZZ_10,14",
                   "m^XX_12,15", "m^XX_8,11", "m^XX_3,7"}),
        1,
    )


def test_fig4_bell_pair_all_plus(fig4):
    net, r, f = fig4
    s = centralizer_in(r, f)
    out = output_stabilizers(s, [0, 15], f, OutcomeVector.all_plus(14))
    assert [(g.to_label(), g.sign) for g in out.gens] == [
        ("+XX", 1), ("+ZZ", 1)
    ]


def test_fig4_xx_sign_depends_only_on_zz_4_13(fig4):
    net, r, f = fig4
    s = centralizer_in(r, f)
    zz413 = next(
        2 * j + 1 for j, fu in enumerate(net.fusions)
        if tuple(sorted(fu.qubits)) == (3, 12)
    )
    for j in range(14):
        vals = [Outcome.PLUS] * 14
        vals[j] = Outcome.MINUS
        out = output_stabilizers(s, [0, 15], f, OutcomeVector(tuple(vals)))
        xx_sign = {
            g.to_label().lstrip("+-"): g.sign for g in out.gens
        }["XX"]
        assert (xx_sign == -1) == (j == zz413)


def test_fig4_error_classes(fig4):
    net, r, f = fig4
    c = intersection(r, f)
    s = centralizer_in(r, f)
    e1 = PauliOp.from_support(16, {1: "Z", 9: "Z"})    # Z2 Z10
    e2 = PauliOp.from_support(16, {3: "Z"})            # Z4
    assert classify_error(e1, c, s) is ErrorClass.UNDETECTABLE_TRIVIAL
    assert classify_error(e2, c, s) is ErrorClass.UNDETECTABLE_NONTRIVIAL
    # a detectable one for contrast: X2 flips ZZ_2,5 which sits in a check
    e3 = PauliOp.from_support(16, {1: "X"})
    assert classify_error(e3, c, s) is ErrorClass.DETECTABLE


def test_fig4_x4_x13_signatures(fig4):
    net, _r, f = fig4
    x4 = PauliOp.from_support(16, {3: "X"})
    x13 = PauliOp.from_support(16, {12: "X"})
    sig4 = flipped_outcomes(x4, f)
    sig13 = flipped_outcomes(x13, f)
    assert np.array_equal(sig4, sig13)
    flipped = [_flabel(fig4[0], j) for j in np.flatnonzero(sig4)]
    assert flipped == ["m^ZZ_4,13"]


# -------------------------------------------------------------------- lattices

def test_4star_counts(star2):
    assert len(star2.resource_states) == 48
    assert len(star2.fusions) == 96
    assert star2.n_qubits == 192
    assert star2.outer_qubits == frozenset()


def test_6ring_counts(ring2):
    assert len(ring2.resource_states) == 16
    assert len(ring2.fusions) == 48
    assert ring2.n_qubits == 96
    assert ring2.outer_qubits == frozenset()


def test_every_star_state_in_four_fusions(star2):
    counts = {}
    for fu in star2.fusions:
        for q in fu.qubits:
            counts[q // 4] = counts.get(q // 4, 0) + 1
    assert set(counts.values()) == {4}
    assert len(counts) == 48


def test_fusion_bases(star2, ring2):
    assert all(fu.basis_tag is BasisTag.XZ_ZX for fu in star2.fusions)
    assert all(fu.basis_tag is BasisTag.XX_ZZ for fu in ring2.fusions)


def test_network_group_sizes(star2):
    r, f = network_groups(star2)
    assert len(r.gens) == 192
    assert len(f.gens) == 192
    assert canonicalize(r).rank() == 192


def test_each_qubit_one_state_at_most_one_fusion(ring3):
    seen_states = np.zeros(ring3.n_qubits, int)
    for rs in ring3.resource_states:
        for q in rs.qubits:
            seen_states[q] += 1
    assert np.all(seen_states == 1)
    seen_fusions = np.zeros(ring3.n_qubits, int)
    for fu in ring3.fusions:
        for q in fu.qubits:
            seen_fusions[q] += 1
    assert seen_fusions.max() == 1


def test_invalid_sizes():
    with pytest.raises(InvalidSizeError):
        build_4star(1, periodic=True)
    with pytest.raises(InvalidSizeError):
        build_6ring(0, periodic=False)


def test_ring_qubit_offsets_match_table(ring2):
    from fractions import Fraction

    quarter = Fraction(1, 4)
    offsets = {
        0: (quarter, 0, 0),
        1: (quarter, quarter, 0),
        2: (0, quarter, 0),
        3: (0, quarter, quarter),
        4: (0, 0, quarter),
        5: (quarter, 0, quarter),
    }
    corner = ring2.resource_states[0]
    assert corner.position == (0, 0, 0)
    # the builder assigns ring position p the location offsets[p]; spot-check
    # through the fusion geometry instead of storing per-qubit positions:
    # ring position 0 fuses toward (+x) edge partner etc.  Here we just pin
    # the documented mapping.
    assert offsets[0][0] == quarter


def _relabel_map(net, shift):
    """Qubit permutation for a one-unit-cell lattice translation."""
    meta = net.lattice_meta
    L = meta.L
    if meta.kind == "four-star":
        spc, qps = 6, 4
    else:
        spc, qps = 2, 6
    perm = np.empty(net.n_qubits, dtype=np.int64)
    for q in range(net.n_qubits):
        sid, local = divmod(q, qps)
        cell, slot = divmod(sid, spc)
        i = cell % L
        j = (cell // L) % L
        k = cell // (L * L)
        ni = (i + shift[0]) % L
        nj = (j + shift[1]) % L
        nk = (k + shift[2]) % L
        ncell = (nk * L + nj) * L + ni
        perm[q] = (ncell * spc + slot) * qps + local
    return perm


@pytest.mark.parametrize("kind_fix", ["star", "ring"])
@pytest.mark.parametrize("shift", [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
def test_translation_invariance(kind_fix, shift, star2, ring2, star3, ring3):
    nets = {"star": (star2, star3), "ring": (ring2, ring3)}[kind_fix]
    for net in nets:
        perm = _relabel_map(net, shift)
        r, f = network_groups(net)

        def keyset(gens):
            keys = set()
            for g in gens:
                x = np.zeros(net.n_qubits, np.uint8)
                z = np.zeros(net.n_qubits, np.uint8)
                x[perm] = g.x
                z[perm] = g.z
                keys.add(x.tobytes() + z.tobytes() + bytes([g.phase]))
            return keys

        def plainset(gens):
            return {
                g.x.tobytes() + g.z.tobytes() + bytes([g.phase])
                for g in gens
            }

        assert keyset(r.gens) == plainset(r.gens)
        assert keyset(f.gens) == plainset(f.gens)


# ----------------------------------------------------------- serialization

def test_serialize_roundtrip(fig4, ring2):
    for net in (fig4[0], ring2):
        text = serialize_network(net)
        back = parse_network(text)
        assert back.n_qubits == net.n_qubits
        assert back.outer_qubits == net.outer_qubits
        assert len(back.resource_states) == len(net.resource_states)
        assert len(back.fusions) == len(net.fusions)
        for a, b in zip(net.resource_states, back.resource_states):
            assert a.qubits == b.qubits
            assert [g.to_label() for g in a.stabilizers.gens] == [
                g.to_label() for g in b.stabilizers.gens
            ]
        for a, b in zip(net.fusions, back.fusions):
            assert a.qubits == b.qubits and a.basis_tag is b.basis_tag
        assert serialize_network(back) == text


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_network("not a network\n")
