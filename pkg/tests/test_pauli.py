"""Symplectic Pauli algebra against a dense matrix oracle and by properties."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fbqc.pauli import (
    ErrorClass,
    GeneratorSet,
    Outcome,
    OutcomeVector,
    PauliOp,
    canonicalize,
    centralizer_in,
    classify_error,
    commutes,
    decompose,
    decompose_in_basis,
    flipped_outcomes,
    intersection,
    multiply,
    output_stabilizers,
)

I2 = np.eye(2)
X2 = np.array([[0, 1], [1, 0]], complex)
Z2 = np.array([[1, 0], [0, -1]], complex)
Y2 = np.array([[0, -1j], [1j, 0]], complex)
MAT = {"I": I2, "X": X2, "Y": Y2, "Z": Z2}


def to_matrix(op: PauliOp) -> np.ndarray:
    m = np.array([[1]], complex)
    for q in range(op.n):
        xq, zq = int(op.x[q]), int(op.z[q])
        part = {(0, 0): I2, (1, 0): X2, (0, 1): Z2, (1, 1): X2 @ Z2}[(xq, zq)]
        m = np.kron(m, part)
    return (1j ** op.phase) * m


def random_op(rng, n):
    return PauliOp(
        n,
        rng.integers(0, 2, n),
        rng.integers(0, 2, n),
        int(rng.integers(0, 4)),
    )


def test_multiply_identity():
    z1 = PauliOp.from_label("IZ")
    assert multiply(PauliOp.identity(2), z1) == z1


def test_multiply_xz_is_minus_i_y():
    prod = multiply(PauliOp.from_label("X"), PauliOp.from_label("Z"))
    assert np.allclose(to_matrix(prod), -1j * Y2)
    # i^3 * Y in letter form
    assert prod.to_label() == "-iY"


def test_multiply_xx_zz_matrix_oracle():
    a = PauliOp.from_label("XX")
    b = PauliOp.from_label("ZZ")
    prod = multiply(a, b)
    want = np.kron(X2, X2) @ np.kron(Z2, Z2)
    assert np.allclose(to_matrix(prod), want)
    assert np.allclose(want, -np.kron(Y2, Y2))


def test_multiply_random_vs_matrices():
    rng = np.random.default_rng(1)
    for _ in range(200):
        n = int(rng.integers(1, 4))
        a, b = random_op(rng, n), random_op(rng, n)
        assert np.allclose(to_matrix(multiply(a, b)), to_matrix(a) @ to_matrix(b))


def test_multiply_dimension_mismatch():
    with pytest.raises(ValueError):
        multiply(PauliOp.from_label("X"), PauliOp.from_label("XX"))


def test_commutes_cases():
    assert commutes(PauliOp.from_label("XI"), PauliOp.from_label("IZ"))
    assert not commutes(PauliOp.from_label("X"), PauliOp.from_label("Z"))
    assert commutes(PauliOp.from_label("XX"), PauliOp.from_label("ZZ"))


@given(st.integers(1, 5), st.data())
@settings(max_examples=80, deadline=None)
def test_symplectic_form_alternating(n, data):
    bits = st.lists(st.integers(0, 1), min_size=n, max_size=n)
    a = PauliOp(n, data.draw(bits), data.draw(bits), data.draw(st.integers(0, 3)))
    assert commutes(a, a)


@given(st.integers(1, 4), st.data())
@settings(max_examples=60, deadline=None)
def test_hermitian_squares_to_identity(n, data):
    bits = st.lists(st.integers(0, 1), min_size=n, max_size=n)
    x = np.array(data.draw(bits), np.uint8)
    z = np.array(data.draw(bits), np.uint8)
    phase = (int(np.sum(x & z)) + 2 * data.draw(st.integers(0, 1))) % 4
    a = PauliOp(n, x, z, phase)
    assert a.is_hermitian
    sq = multiply(a, a)
    assert sq.is_identity and sq.phase == 0


def test_multiply_associative():
    rng = np.random.default_rng(7)
    for _ in range(100):
        n = int(rng.integers(1, 4))
        a, b, c = (random_op(rng, n) for _ in range(3))
        assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))


def test_canonicalize_duplicate_removal():
    x1 = PauliOp.from_label("X")
    g = canonicalize(GeneratorSet(1, [x1, x1]))
    assert [h.to_label() for h in g.gens] == ["+X"]


def test_canonicalize_rank_preserved():
    g = GeneratorSet(2, [PauliOp.from_label("XX"), PauliOp.from_label("IX")])
    gc = canonicalize(g)
    assert len(gc.gens) == 2
    # span unchanged: both original generators decompose
    for orig in g.gens:
        assert decompose(gc, orig) is not None


def test_canonicalize_fig3_rank(fig3):
    _net, r, _f = fig3
    assert canonicalize(r).rank() == 8


def test_canonicalize_rejects_hidden_minus_one():
    minus_x = PauliOp.from_label("-X")
    plus_x = PauliOp.from_label("X")
    with pytest.raises(ValueError):
        canonicalize(GeneratorSet(1, [minus_x, plus_x]))


def test_decompose_simple():
    g = canonicalize(GeneratorSet(1, [PauliOp.from_label("X")]))
    assert decompose(g, PauliOp.from_label("X")) == ((0,), 1)
    assert decompose(g, PauliOp.from_label("Z")) is None


def test_decompose_sign():
    g = canonicalize(
        GeneratorSet(2, [PauliOp.from_label("XX"), PauliOp.from_label("ZZ")])
    )
    idx, sign = decompose(g, PauliOp.from_label("-YY"))
    assert sign == 1 and len(idx) == 2  # XX * ZZ = -YY exactly
    idx, sign = decompose(g, PauliOp.from_label("YY"))
    assert sign == -1


def test_decompose_fig4_f_element(fig4):
    _net, _r, f = fig4
    fc = canonicalize(f)
    x4x13 = PauliOp.from_support(16, {3: "X", 12: "X"})
    dec = decompose(fc, x4x13)
    assert dec is not None and dec[1] == 1


def test_decompose_in_basis_keeps_indexing(fig3):
    _net, _r, f = fig3
    # m2 * m4 = Z3X4 * Z5X6 in the original generator order (indices 1, 3)
    target = PauliOp.from_support(8, {2: "Z", 3: "X", 4: "Z", 5: "X"})
    idx, sign = decompose_in_basis(list(f.gens), target)
    assert idx == (1, 3) and sign == 1


def test_centralizer_self():
    g = GeneratorSet(1, [PauliOp.from_label("X")])
    c = centralizer_in(g, g)
    assert [h.to_label() for h in c.gens] == ["+X"]


def test_centralizer_anticommuting():
    r = GeneratorSet(1, [PauliOp.from_label("Z")])
    f = GeneratorSet(1, [PauliOp.from_label("X")])
    assert centralizer_in(r, f).gens == []


def test_centralizer_members_commute_and_decompose(fig3):
    _net, r, f = fig3
    s = centralizer_in(r, f)
    rc = canonicalize(r)
    for g in s.gens:
        assert all(commutes(g, h) for h in f.gens)
        assert decompose(rc, g) is not None


def test_intersection_trivial_cases():
    a = GeneratorSet(2, [PauliOp.from_label("XX")])
    assert len(intersection(a, a).gens) == 1
    b = GeneratorSet(1, [PauliOp.from_label("X")])
    c = GeneratorSet(1, [PauliOp.from_label("Z")])
    assert intersection(b, c).gens == []


def test_intersection_members_decompose_both_ways(fig4):
    _net, r, f = fig4
    c = intersection(r, f)
    assert len(c.gens) == 2
    rc, fc = canonicalize(r), canonicalize(f)
    for g in c.gens:
        assert decompose(rc, g) == (decompose(rc, g)[0], 1)
        assert decompose(fc, g) is not None


def test_flipped_outcomes_homomorphism(fig4):
    _net, _r, f = fig4
    rng = np.random.default_rng(3)
    for _ in range(40):
        e1, e2 = random_op(rng, 16), random_op(rng, 16)
        lhs = flipped_outcomes(multiply(e1, e2), f)
        rhs = flipped_outcomes(e1, f) ^ flipped_outcomes(e2, f)
        assert np.array_equal(lhs, rhs)


def test_classify_identity_trivial(fig4):
    _net, r, f = fig4
    c = intersection(r, f)
    s = centralizer_in(r, f)
    assert classify_error(
        PauliOp.identity(16), c, s
    ) is ErrorClass.UNDETECTABLE_TRIVIAL


def test_elements_of_r_and_f_are_trivial(fig4):
    _net, r, f = fig4
    c = intersection(r, f)
    s = centralizer_in(r, f)
    rng = np.random.default_rng(5)
    for group in (r, f):
        for _ in range(20):
            mask = rng.integers(0, 2, len(group.gens))
            acc = PauliOp.identity(16)
            for i in np.flatnonzero(mask):
                acc = multiply(acc, group.gens[int(i)])
            assert classify_error(acc, c, s) is ErrorClass.UNDETECTABLE_TRIVIAL


def test_generator_set_rejects_non_hermitian():
    with pytest.raises(ValueError):
        GeneratorSet(1, [PauliOp(1, [1], [1], 0)])  # XZ = -iY


def test_output_stabilizers_erased_dependency(fig3):
    _net, r, f = fig3
    s = centralizer_in(r, f)
    from fbqc.pauli import ErasedDependencyError

    vals = [Outcome.PLUS, Outcome.ERASED, Outcome.PLUS, Outcome.PLUS]
    with pytest.raises(ErasedDependencyError):
        output_stabilizers(s, [0, 1, 6, 7], f, OutcomeVector(tuple(vals)))


def test_label_offset_rendering():
    op = PauliOp.from_support(8, {0: "X", 1: "Z"})
    assert op.to_sparse_label(1) == "X1Z2"
    assert PauliOp.from_label("-Y").to_sparse_label(1) == "-Y1"
