"""Finitely supported functions on the homoclinic groupoid and KMS checks.

An :class:`AlgebraElement` is a formal sum of rewrite pieces; it denotes
``A(x, y) = sum of coeff over pieces whose graph contains (x, y)``.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .cocycle import RewritePiece, refine_for_cocycle, refine_piece
from .errors import CapExceededError
from .potential import FiniteRangePotential
from .symbolic import EMPTY, Cylinder, Window, Word

HULL_CAP = 10


@dataclass(frozen=True)
class AlgebraElement:
    pieces: tuple[RewritePiece, ...]
    d: int

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))

    @property
    def hull(self) -> Window:
        w = EMPTY
        for p in self.pieces:
            w = w.hull(p.window)
        return w

    @property
    def is_zero(self) -> bool:
        return all(p.coeff == 0 for p in self.pieces)

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        _same_alphabet(self, other)
        return AlgebraElement(self.pieces + other.pieces, self.d)

    def __neg__(self) -> "AlgebraElement":
        return self.scaled(-1)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def scaled(self, c: complex) -> "AlgebraElement":
        return AlgebraElement(tuple(p.with_coeff(c * p.coeff) for p in self.pieces), self.d)

    def __str__(self) -> str:
        return " + ".join(str(p) for p in self.pieces) or "0"


def _same_alphabet(a: AlgebraElement, b: AlgebraElement) -> None:
    if a.d != b.d:
        raise ValueError("elements live over different alphabets")


def identity(d: int) -> AlgebraElement:
    """``I_D``: the indicator of the diagonal."""
    return AlgebraElement((RewritePiece(EMPTY, (), ()),), d)


def zero(d: int) -> AlgebraElement:
    return AlgebraElement((), d)


def _check_cap(window: Window, hull_cap: int) -> None:
    if len(window) > hull_cap:
        raise CapExceededError(f"hull of {len(window)} slots exceeds cap {hull_cap}")


def _table(pieces: Iterable[RewritePiece], hull: Window, d: int) -> dict[tuple[Word, Word], complex]:
    out: dict[tuple[Word, Word], complex] = defaultdict(complex)
    for p in pieces:
        for q in refine_piece(p, hull, d):
            out[q.source, q.target] += q.coeff
    return out


def _from_table(table: dict, hull: Window, d: int) -> AlgebraElement:
    pieces = tuple(RewritePiece(hull, s, t, c) for (s, t), c in sorted(table.items()) if c != 0)
    return AlgebraElement(pieces, d)


def canonicalize(A: AlgebraElement, hull_cap: int = HULL_CAP, hull: Window | None = None) -> AlgebraElement:
    """All pieces on one hull window, duplicates merged, zeros dropped, sorted."""
    hull = A.hull if hull is None else hull.hull(A.hull)
    _check_cap(hull, hull_cap)
    return _from_table(_table(A.pieces, hull, A.d), hull, A.d)


def convolve(A: AlgebraElement, B: AlgebraElement, hull_cap: int = HULL_CAP) -> AlgebraElement:
    """``(A * B)(x, y) = sum_z A(x, z) B(z, y)``."""
    _same_alphabet(A, B)
    hull = A.hull.hull(B.hull)
    _check_cap(hull, hull_cap)
    by_source: dict[Word, list[tuple[Word, complex]]] = defaultdict(list)
    for (s, t), c in _table(B.pieces, hull, B.d).items():
        by_source[s].append((t, c))
    out: dict[tuple[Word, Word], complex] = defaultdict(complex)
    for (s, t), c in _table(A.pieces, hull, A.d).items():
        for t2, c2 in by_source.get(t, ()):
            out[s, t2] += c * c2
    return _from_table(out, hull, A.d)


def involution(A: AlgebraElement, hull_cap: int = HULL_CAP) -> AlgebraElement:
    """``A^*(x, y) = conj A(y, x)``."""
    flipped = tuple(RewritePiece(p.window, p.target, p.source, p.coeff.conjugate()) for p in A.pieces)
    return canonicalize(AlgebraElement(flipped, A.d), hull_cap)


def sigma_t(A: AlgebraElement, t: complex, U: FiniteRangePotential,
            hull_cap: int = HULL_CAP) -> AlgebraElement:
    """``(sigma^t A)(x, y) = exp(i V(x, y) t) A(x, y)``; complex ``t`` allowed."""
    pieces = []
    for p in A.pieces:
        for q, v in refine_for_cocycle(p, U):
            pieces.append(q.with_coeff(q.coeff * np.exp(1j * v * t)))
    return canonicalize(AlgebraElement(tuple(pieces), A.d), hull_cap)


def _measure_fn(measure) -> Callable[[Cylinder], float]:
    return measure.measure if hasattr(measure, "measure") else measure


def state(A: AlgebraElement, measure) -> complex:
    """``omega(A) = int A(x, x) d alpha``: diagonal pieces weighted by their cylinder."""
    mu = _measure_fn(measure)
    return complex(sum(p.coeff * mu(p.domain) for p in A.pieces if p.is_diagonal))


def kms_residual(A: AlgebraElement, B: AlgebraElement, measure, U: FiniteRangePotential,
                 beta: float = 1.0, hull_cap: int = HULL_CAP) -> float:
    """``|omega(A*B) - omega(B * sigma^{-i beta} A)| / (1 + |omega(A*B)|)``."""
    lhs = state(convolve(A, B, hull_cap), measure)
    rhs = state(convolve(B, sigma_t(A, -1j * beta, U, hull_cap), hull_cap), measure)
    return abs(lhs - rhs) / (1 + abs(lhs))


def evaluate_F(A: AlgebraElement, B: AlgebraElement, measure, U: FiniteRangePotential,
               t: complex, hull_cap: int = HULL_CAP) -> complex:
    """``F(t) = omega(sigma^t A * B)``."""
    return state(convolve(sigma_t(A, t, U, hull_cap), B, hull_cap), measure)


def kms_boundary_residual(A: AlgebraElement, B: AlgebraElement, measure, U: FiniteRangePotential,
                          t: complex, beta: float = 1.0, hull_cap: int = HULL_CAP) -> float:
    """``|F(t + i beta) - omega(B * sigma^t A)|``."""
    top = evaluate_F(A, B, measure, U, t + 1j * beta, hull_cap)
    other = state(convolve(B, sigma_t(A, t, U, hull_cap), hull_cap), measure)
    return abs(top - other)


def positivity_check(A: AlgebraElement, measure, hull_cap: int = HULL_CAP) -> float:
    """``omega(A * A^*)`` as a real number."""
    value = state(convolve(A, involution(A, hull_cap), hull_cap), measure)
    if abs(value.imag) > 1e-12 * max(1.0, abs(value)):
        raise AssertionError(f"omega(A A*) has imaginary part {value.imag:.3e}")
    return value.real


def evaluate_at(A: AlgebraElement, window: Window, x: Word, y: Word, tail: int = 1) -> complex:
    """``A(x, y)`` for configurations equal to ``x``, ``y`` on ``window`` and ``tail`` elsewhere."""
    x, y = tuple(x), tuple(y)
    if len(x) != len(window) or len(y) != len(window):
        raise ValueError("words must match the window")

    def sym(word: Word, i: int) -> int:
        return word[i - window.lo] if window.lo <= i <= window.hi else tail

    total = 0j
    for p in A.pieces:
        inside = set(p.window.indices())
        if any(sym(x, i) != sym(y, i) for i in window.indices() if i not in inside):
            continue
        if all(sym(x, i) == s and sym(y, i) == t
               for i, s, t in zip(p.window.indices(), p.source, p.target)):
            total += p.coeff
    return total


def allclose(A: AlgebraElement, B: AlgebraElement, tol: float = 1e-12,
             hull_cap: int = HULL_CAP) -> bool:
    """Pointwise equality up to ``tol`` on a common hull."""
    _same_alphabet(A, B)
    hull = A.hull.hull(B.hull)
    _check_cap(hull, hull_cap)
    a, b = _table(A.pieces, hull, A.d), _table(B.pieces, hull, B.d)
    return all(abs(a.get(k, 0) - b.get(k, 0)) <= tol for k in set(a) | set(b))


def random_element(rng: np.random.Generator, d: int, n_pieces: int = 2, max_window: int = 3,
                   reach: int = 3) -> AlgebraElement:
    """Random complex combination of pieces on windows of length ``<= max_window`` near the bar."""
    pieces = []
    for _ in range(n_pieces):
        n = int(rng.integers(1, max_window + 1))
        lo = int(rng.integers(-min(reach, n + 1), 1))
        window = Window(lo, lo + n - 1)
        src = tuple(int(s) for s in rng.integers(1, d + 1, n))
        tgt = tuple(int(s) for s in rng.integers(1, d + 1, n))
        coeff = complex(rng.normal(), rng.normal())
        pieces.append(RewritePiece(window, src, tgt, coeff))
    return AlgebraElement(tuple(pieces), d)
