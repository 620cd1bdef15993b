"""State-vector oracle cross-checks for the worked examples."""

import itertools
import random

import numpy as np
import pytest

from fbqc.networks import (
    BasisTag,
    Fusion,
    FusionNetwork,
    ResourceState,
    build_4star,
    network_groups,
)
from fbqc.pauli import (
    GeneratorSet,
    Outcome,
    OutcomeVector,
    PauliOp,
    canonicalize,
    centralizer_in,
    decompose_in_basis,
    output_stabilizers,
)
from fbqc.statevec import (
    TooLargeError,
    brute_force_oracle,
    project_outcomes,
    stabilizer_state,
)


def algebra_outputs(net, outcomes):
    r, f = network_groups(net)
    s = centralizer_in(r, f)
    out = output_stabilizers(s, sorted(net.outer_qubits), f, outcomes)
    return canonicalize(GeneratorSet(out.n, list(out.gens)))


def test_fig3_oracle_all_assignments(fig3):
    net, _r, _f = fig3
    valid = 0
    for signs in itertools.product([1, -1], repeat=4):
        ov = OutcomeVector.from_signs(signs)
        grp = brute_force_oracle(net, ov)
        if grp is None:
            continue
        valid += 1
        alg = algebra_outputs(net, ov)
        assert [g.to_label() for g in grp.gens] == [
            g.to_label() for g in alg.gens
        ]
    assert valid == 16  # no checks: every assignment is reachable


def test_fig4_oracle_fifty_random_assignments(fig4):
    net, _r, _f = fig4
    rng = random.Random(99)
    checked = 0
    attempts = 0
    while checked < 50 and attempts < 500:
        attempts += 1
        ov = OutcomeVector.from_signs(
            [rng.choice([1, -1]) for _ in range(14)]
        )
        grp = brute_force_oracle(net, ov)
        if grp is None:
            continue
        alg = algebra_outputs(net, ov)
        assert [g.to_label() for g in grp.gens] == [
            g.to_label() for g in alg.gens
        ]
        checked += 1
    assert checked == 50


def test_fig4_checks_plus_one_on_valid_assignments(fig4):
    net, r, f = fig4
    from fbqc.pauli import intersection

    c = intersection(r, f)
    rng = random.Random(5)
    seen = 0
    while seen < 25:
        signs = [rng.choice([1, -1]) for _ in range(14)]
        if brute_force_oracle(net, OutcomeVector.from_signs(signs)) is None:
            continue
        seen += 1
        for (idx, sign) in c.f_expr:
            prod = sign
            for j in idx:
                prod *= signs[j]
            assert prod == 1


def test_bell_pair_self_fusion_scalar():
    bell = ResourceState(0, (0, 1), GeneratorSet(2, [
        PauliOp.from_label("XX"), PauliOp.from_label("ZZ")
    ]))
    fusion = Fusion(0, (0, 1), (
        PauliOp.from_label("XX"), PauliOp.from_label("ZZ")
    ), BasisTag.XX_ZZ)
    net = FusionNetwork(2, (bell,), (fusion,), frozenset())
    out = brute_force_oracle(net, OutcomeVector.all_plus(2))
    assert out is not None and len(out.gens) == 0
    # the opposite outcome assignment has probability zero
    assert brute_force_oracle(
        net, OutcomeVector.from_signs([1, -1])
    ) is None


def test_too_large_rejected():
    net = build_4star(2, periodic=True)  # 192 qubits
    with pytest.raises(TooLargeError):
        brute_force_oracle(net, OutcomeVector.all_plus(2 * len(net.fusions)))


def test_project_outcomes_probability(fig3):
    net, r, f = fig3
    psi = stabilizer_state(r)
    _psi, prob = project_outcomes(psi, f, OutcomeVector.all_plus(4))
    # four random outcomes: probability 1/16
    assert abs(prob - 1 / 16) < 1e-9
