import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import brute_convolution
from kmsgibbs import algebra
from kmsgibbs.algebra import (AlgebraElement, allclose, canonicalize, convolve, evaluate_F, evaluate_at,
                              identity, involution, kms_boundary_residual, kms_residual,
                              positivity_check, random_element, sigma_t, state, zero)
from kmsgibbs.cocycle import RewritePiece, symmetric_conjugator
from kmsgibbs.errors import CapExceededError
from kmsgibbs.potential import FiniteRangePotential
from kmsgibbs.symbolic import EMPTY, Window, parse_cylinder
from kmsgibbs.thermo import normalize


def elem(*pieces, d=2):
    return AlgebraElement(tuple(pieces), d)


def test_canonicalize_cancels():
    p = RewritePiece(Window(-1, 0), (1, 2), (2, 1))
    A = elem(p, p.with_coeff(-1))
    assert canonicalize(A).pieces == ()
    assert canonicalize(A).is_zero


def test_canonicalize_merges_identity():
    A = identity(2) + elem(RewritePiece(Window(-1, -1), (1,), (1,)))
    C = canonicalize(A)
    assert {(p.source, p.coeff) for p in C.pieces} == {((1,), 2), ((2,), 1)}
    assert canonicalize(C) == C


@given(st.integers(0, 2 ** 31))
def test_canonicalize_idempotent_and_pointwise(seed):
    rng = np.random.default_rng(seed)
    A = random_element(rng, 2, n_pieces=3)
    C = canonicalize(A)
    assert canonicalize(C) == C
    assert allclose(A, C, 1e-14)


def test_identity_is_unit(rng):
    for _ in range(20):
        A = random_element(rng, 3)
        assert allclose(convolve(identity(3), A), A, 1e-14)
        assert allclose(convolve(A, identity(3)), A, 1e-14)
        assert convolve(zero(3), A).is_zero


def test_piece_times_adjoint():
    c = 1.5 - 2j
    p = RewritePiece(Window(-1, 0), (1, 2), (2, 2), c)
    prod = convolve(elem(p), involution(elem(p)))
    assert prod.pieces == (RewritePiece(Window(-1, 0), (1, 2), (1, 2), abs(c) ** 2),)


def test_convolution_matches_brute_force(rng):
    for _ in range(200):
        d = int(rng.integers(2, 4))
        A = random_element(rng, d, n_pieces=2, max_window=2)
        B = random_element(rng, d, n_pieces=2, max_window=2)
        AB = convolve(A, B)
        w = A.hull.hull(B.hull).widened(1, 1)
        x = tuple(int(s) for s in rng.integers(1, d + 1, len(w)))
        y = tuple(int(s) for s in rng.integers(1, d + 1, len(w)))
        if rng.random() < 0.5:
            y = x  # hit the diagonal and near-diagonal often
        assert abs(evaluate_at(AB, w, x, y) - brute_convolution(A, B, w, x, y)) <= 1e-12


def test_evaluate_outside_window():
    A = elem(RewritePiece(Window(0, 0), (1,), (2,), 3.0))
    w = Window(-1, 0)
    assert evaluate_at(A, w, (2, 1), (2, 2)) == 3.0
    assert evaluate_at(A, w, (1, 1), (2, 2)) == 0
    assert evaluate_at(A, w, (1, 2), (1, 2)) == 0
    with pytest.raises(ValueError):
        evaluate_at(A, w, (1,), (2, 2))


@given(st.integers(0, 2 ** 31))
def test_associativity_and_star_laws(seed):
    rng = np.random.default_rng(seed)
    A, B, C = (random_element(rng, 2) for _ in range(3))
    assert allclose(convolve(convolve(A, B), C), convolve(A, convolve(B, C)), 1e-12)
    assert allclose(involution(involution(A)), A, 1e-15)
    assert allclose(involution(convolve(A, B)), convolve(involution(B), involution(A)), 1e-12)
    assert allclose(involution(A + B.scaled(2j)), involution(A) + involution(B).scaled(-2j), 1e-14)


def test_hull_cap():
    p = RewritePiece(Window(-6, 5), (1,) * 12, (2,) * 12)
    with pytest.raises(CapExceededError):
        canonicalize(elem(p))
    with pytest.raises(CapExceededError):
        convolve(elem(p), identity(2), hull_cap=11)
    assert len(convolve(elem(p), identity(2), hull_cap=12).pieces) == 1


def test_sigma_zero_potential_and_zero_time(rng):
    A = random_element(rng, 2, n_pieces=3)
    assert allclose(sigma_t(A, 1.3, FiniteRangePotential.zero(2, 2)), A, 1e-15)
    assert allclose(sigma_t(A, 0.0, FiniteRangePotential.random(2, 2, rng)), A, 1e-15)


def test_sigma_single_piece():
    U = FiniteRangePotential(2, 1, [0.0, 0.8])
    A = elem(RewritePiece(Window(0, 0), (2,), (1,), 1.0))
    S = sigma_t(A, 0.5, U)
    assert S.pieces[0].coeff == pytest.approx(np.exp(1j * 0.8 * 0.5), abs=1e-15)


@given(st.integers(0, 2 ** 31))
def test_sigma_group_law_and_automorphism(seed):
    rng = np.random.default_rng(seed)
    U = FiniteRangePotential.random(2, int(rng.integers(1, 3)), rng)
    A, B = random_element(rng, 2), random_element(rng, 2)
    s, t = complex(rng.normal(), rng.normal()), float(rng.normal())
    assert allclose(sigma_t(sigma_t(A, s, U), t, U), sigma_t(A, s + t, U), 1e-10)
    assert allclose(sigma_t(convolve(A, B), t, U), convolve(sigma_t(A, t, U), sigma_t(B, t, U)), 1e-12)
    assert allclose(sigma_t(involution(A), t, U), involution(sigma_t(A, t, U)), 1e-12)


def test_state_examples():
    m = normalize(FiniteRangePotential.zero(2, 1))
    assert state(identity(2), m) == 1
    assert state(algebra.AlgebraElement((symmetric_conjugator((1, 1, 2, 1), (1, 1, 2, 1), 2),), 2), m) \
        == pytest.approx(1 / 16, abs=1e-16)
    off = elem(RewritePiece(Window(0, 0), (1,), (2,)))
    assert state(off, m) == 0
    assert state(identity(2), lambda c: 0.5) == 0.5


def test_state_invariant_under_sigma(rng):
    U = FiniteRangePotential.random(2, 2, rng)
    m = normalize(U)
    for _ in range(20):
        A = random_element(rng, 2)
        assert abs(state(sigma_t(A, 0.9, U), m) - state(A, m)) <= 1e-14


def test_trace_property_zero_potential(rng):
    m = normalize(FiniteRangePotential.zero(2, 2))
    for _ in range(100):
        A, B = random_element(rng, 2), random_element(rng, 2)
        assert abs(state(convolve(A, B), m) - state(convolve(B, A), m)) <= 1e-12


def test_trace_fails_for_nontrivial_potential(rng):
    U = FiniteRangePotential.random(2, 2, rng, scale=1.0)
    m = normalize(U)
    gaps = []
    for _ in range(20):
        A, B = random_element(rng, 2), random_element(rng, 2)
        gaps.append(abs(state(convolve(A, B), m) - state(convolve(B, A), m)))
    assert max(gaps) > 1e-3


@pytest.mark.parametrize("beta", [0.5, 1.0, 2.0])
def test_kms_condition(beta, rng):
    U = FiniteRangePotential.random(2, int(rng.integers(1, 3)), rng)
    m = normalize(U.scaled(beta))
    wrong = normalize(U)
    worst, worst_wrong = 0.0, 0.0
    for _ in range(15):
        A = random_element(rng, 2)
        B = involution(A) + random_element(rng, 2)
        worst = max(worst, kms_residual(A, B, m, U, beta))
        worst_wrong = max(worst_wrong, kms_residual(A, B, wrong, U, beta))
        for t in (0.0, 0.7, 1 + 0.3j):
            worst = max(worst, kms_boundary_residual(A, B, m, U, t, beta))
    assert worst <= 1e-10
    if beta != 1.0:
        assert worst_wrong > 1e-4


def test_F_constant_for_zero_potential(rng):
    U = FiniteRangePotential.zero(2, 1)
    m = normalize(U)
    A, B = random_element(rng, 2), random_element(rng, 2)
    vals = [evaluate_F(A, B, m, U, t) for t in (0.0, 1.0, 2j, -1 + 0.5j)]
    assert max(abs(v - vals[0]) for v in vals) <= 1e-15


def test_positivity(rng):
    for _ in range(200):
        d = int(rng.integers(2, 4))
        U = FiniteRangePotential.random(d, int(rng.integers(1, 3)), rng)
        m = normalize(U)
        A = random_element(rng, d, n_pieces=3)
        assert positivity_check(A, m) >= -1e-14


def test_positivity_flags_complex_state():
    A = elem(RewritePiece(EMPTY, (), (), 1.0))
    assert positivity_check(A, lambda c: 1.0) == 1.0
    with pytest.raises(AssertionError):
        positivity_check(A, lambda c: 1j)


def test_different_alphabets_rejected():
    with pytest.raises(ValueError):
        identity(2) + identity(3)
    with pytest.raises(ValueError):
        convolve(identity(2), identity(3))


def test_refined_cylinder_state_additivity():
    U = FiniteRangePotential.random(2, 2, np.random.default_rng(4))
    m = normalize(U)
    c = parse_cylinder("1|2", 2)
    coarse = elem(RewritePiece(c.window, c.word, c.word))
    fine = canonicalize(coarse, hull=Window(-2, 1))
    assert len(fine.pieces) == 4
    assert state(fine, m) == pytest.approx(state(coarse, m), rel=1e-14)
    parts = [elem(q) for q in fine.pieces]
    for a, b in itertools.combinations(parts, 2):
        assert convolve(a, b).is_zero
