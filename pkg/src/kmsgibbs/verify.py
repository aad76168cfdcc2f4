"""Numerical checks of the Gibbs identity, Bowen bounds, invariance and uniqueness."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cocycle import RewritePiece, refine_for_cocycle, refine_piece
from .errors import CapExceededError, InconsistentError
from .potential import FiniteRangePotential
from .symbolic import Cylinder, Window, intersect, words_array
from .thermo import (MarkovEquilibrium, cylinder_measure, cylinder_measures, normalize,
                     window_measures, word_measures)


def _check_unit(p: RewritePiece) -> None:
    if p.coeff != 1:
        raise ValueError("Gibbs residuals are defined for plain conjugators (coeff 1)")


def gibbs_residual(m: MarkovEquilibrium, p: RewritePiece, beta: float = 1.0,
                   potential: FiniteRangePotential | None = None) -> float:
    """Relative defect of ``alpha(image) = int_domain exp(-beta V(z, p z)) d alpha``.

    ``V`` comes from ``potential`` (default ``m.potential``); for ``beta != 1``
    pass the equilibrium of ``beta * potential`` as ``m``.
    """
    _check_unit(p)
    U = m.potential if potential is None else potential
    parts = refine_for_cocycle(p, U)
    window = parts[0][0].window
    V = np.array([v for _, v in parts])
    mass = cylinder_measures(m, window, np.array([q.source for q, _ in parts]))
    lhs = float(np.dot(np.exp(-beta * V), mass))
    rhs = cylinder_measure(m, p.image)
    assert rhs > 0, "cylinders of the full shift have positive measure"
    return abs(lhs - rhs) / rhs


def gibbs_residual_weighted(m: MarkovEquilibrium, p: RewritePiece, beta: float,
                            test: Cylinder, potential: FiniteRangePotential | None = None) -> float:
    """Gibbs identity tested against the indicator of ``test``, a sub-cylinder of the image."""
    _check_unit(p)
    if intersect(test, p.image) != test:
        raise ValueError(f"{test} is not contained in the image {p.image}")
    U = m.potential if potential is None else potential
    lhs = 0.0
    for q, v in refine_for_cocycle(p, U):
        hull = q.window.hull(test.window)
        subs = [s for s in refine_piece(q, hull, m.d) if intersect(s.image, test) is not None]
        if subs:
            mass = cylinder_measures(m, hull, np.array([s.source for s in subs]))
            lhs += np.exp(-beta * v) * mass.sum()
    rhs = cylinder_measure(m, test)
    assert rhs > 0, "cylinders of the full shift have positive measure"
    return abs(lhs - rhs) / rhs


def conjugator_windows(max_len: int) -> list[Window]:
    """Every window of length ``1..max_len`` that touches the bar."""
    return [Window(lo, lo + n - 1) for n in range(1, max_len + 1) for lo in range(-n, 1)]


def gibbs_scan(m: MarkovEquilibrium, window: Window, beta: float = 1.0,
               potential: FiniteRangePotential | None = None) -> np.ndarray:
    """Residuals of all ``d**n x d**n`` pieces on ``window`` at once; entry ``[u, v]``."""
    U = m.potential if potential is None else potential
    d, c, n = m.d, U.r - 1, len(window)
    ext = window.widened(c, c)
    mu = window_measures(m, ext).reshape(d ** c, d ** n, d ** c)
    S = U.birkhoff_sums(words_array(d, n + 2 * c)).reshape(d ** c, d ** n, d ** c)
    S = S - S.mean(axis=1, keepdims=True)
    X = (mu * np.exp(-beta * S)).transpose(0, 2, 1).reshape(-1, d ** n)
    Y = np.exp(beta * S).transpose(0, 2, 1).reshape(-1, d ** n)
    lhs = X.T @ Y
    rhs = mu.sum(axis=(0, 2))
    return np.abs(lhs - rhs[None, :]) / rhs[None, :]


def _tail_points(m: MarkovEquilibrium, words: np.ndarray, fill: int) -> np.ndarray:
    tail = np.full((words.shape[0], m.r - 1), fill, dtype=np.int64)
    return np.hstack([words, tail])


def bowen_ratios(m: MarkovEquilibrium, s: int, normalized: bool = False, fill: int = 1) -> np.ndarray:
    """``rho(|w) / exp(-P s + S_s U(x))`` for every ``|w| = s``, ``x = w`` followed by ``fill``."""
    U, P = (m.normalized, 0.0) if normalized else (m.potential, m.pressure)
    words = words_array(m.d, s)
    S = U.birkhoff_sums(_tail_points(m, words, fill), s)
    return word_measures(m, s) / np.exp(S - P * s)


def bowen_scan(m: MarkovEquilibrium, max_len: int, normalized: bool = False) -> tuple[float, float]:
    """Smallest and largest Bowen ratio over one-sided cylinders of length ``1..max_len``."""
    ratios = np.concatenate([bowen_ratios(m, s, normalized) for s in range(1, max_len + 1)])
    return float(ratios.min()), float(ratios.max())


def bowen_envelope(m: MarkovEquilibrium) -> tuple[float, float]:
    """``[min pi * exp(-(r-1) osc U~), max pi * exp((r-1) osc U~)]``."""
    k = (m.r - 1) * m.normalized.osc
    return float(m.stationary.min() * np.exp(-k)), float(m.stationary.max() * np.exp(k))


def bowen_bounds(m: MarkovEquilibrium) -> tuple[float, float]:
    """Bounds on the normalized Bowen ratio valid for every length.

    For ``s >= r - 1`` the ratio is ``pi(last state) * exp(-tail)`` where the
    tail collects the ``r - 1`` window values that reach past the word.
    """
    if m.r == 1:
        return 1.0, 1.0
    lo_u = float(m.normalized.values.min())
    upper = max(m.stationary.max() * np.exp(-(m.r - 1) * lo_u), np.exp(-(m.r - 2) * lo_u))
    return float(m.stationary.min()), float(upper)


def point_choice_spread(m: MarkovEquilibrium, s: int) -> float:
    """Largest relative change of the normalized Bowen ratio across tail fills ``1..d``."""
    ratios = np.array([bowen_ratios(m, s, True, fill) for fill in range(1, m.d + 1)])
    return float(np.max(ratios.max(axis=0) / ratios.min(axis=0) - 1))


def _table(measure, window: Window, d: int) -> np.ndarray:
    if isinstance(measure, MarkovEquilibrium):
        return window_measures(measure, window)
    return np.array([measure.measure(Cylinder(window, w)) for w in words_array(d, len(window))])


def invariance_check(m, max_len: int, max_shift: int, d: int | None = None) -> float:
    """``max |alpha(c) - alpha(shift_cylinder(c, k))|`` over windows up to ``max_len``."""
    d = m.d if d is None else d
    worst = 0.0
    for n in range(1, max_len + 1):
        base = _table(m, Window(0, n - 1), d)
        for k in range(-max_shift - n, max_shift + 1):
            if k:
                worst = max(worst, float(np.max(np.abs(base - _table(m, Window(k, k + n - 1), d)))))
    return worst


def bar_ratio_scan(m, max_len: int, d: int | None = None) -> tuple[float, float]:
    """Extremes of ``alpha(|a_1..a_n) / alpha(a_1..a_k | a_{k+1}..a_n)`` for ``n <= max_len``."""
    d = m.d if d is None else d
    lo, hi = np.inf, -np.inf
    for n in range(1, max_len + 1):
        right = _table(m, Window(0, n - 1), d)
        for k in range(1, n + 1):
            ratio = right / _table(m, Window(-k, n - k - 1), d)
            lo, hi = min(lo, ratio.min()), max(hi, ratio.max())
    return float(lo), float(hi)


def k_bound(U: FiniteRangePotential, max_m: int | None = None) -> float:
    """``sup_m sup_{u, v in |a_1..a_m} S_m U(u) - S_m U(v)``.

    Only the ``r - 1`` symbols after the cylinder matter, so ``m <= 2r``
    already attains the supremum.
    """
    max_m = 2 * U.r if max_m is None else max_m
    c = U.r - 1
    best = 0.0
    for n in range(1, max_m + 1):
        S = U.birkhoff_sums(words_array(U.d, n + c), n).reshape(U.d ** n, U.d ** c)
        best = max(best, float(np.ptp(S, axis=1).max()))
    return best


def trailing_symbol_bound(U: FiniteRangePotential, v_xy: float) -> float:
    """Bound ``2 r osc(U) + |V(x, y)|`` on the cocycle after changing one trailing symbol."""
    return 2 * U.r * U.osc + abs(v_xy)


@dataclass
class UniquenessResult:
    solution: np.ndarray
    rank_deficiency: int
    max_deviation: float
    residual: float
    n_gibbs_rows: int


def gibbs_system(U: FiniteRangePotential, depth: int, beta: float = 1.0) -> tuple[np.ndarray, int]:
    """Homogeneous rows (shift consistency, then Gibbs relations) over ``|w``, ``|w| = depth``.

    Returns the matrix and the number of Gibbs rows.  Words sharing their
    first and last ``r - 1`` symbols are related by a conjugator whose
    cocycle lies inside the word.
    """
    d, c = U.d, U.r - 1
    n = d ** depth
    words = words_array(d, depth)
    rows = []
    sub = d ** (depth - 1)
    for w in range(sub):
        row = np.zeros(n)
        row[np.arange(d) * sub + w] += 1.0
        row[w * d + np.arange(d)] -= 1.0
        rows.append(row)
    S = U.birkhoff_sums(words)
    ends = words[:, :c] @ (d ** np.arange(c)) * d ** c + words[:, depth - c:] @ (d ** np.arange(c)) \
        if c else np.zeros(n, dtype=np.int64)
    n_gibbs = 0
    for key in np.unique(ends):
        members = np.flatnonzero(ends == key)
        w0 = members[0]
        for w in members[1:]:
            row = np.zeros(n)
            row[w] = 1.0
            row[w0] = -np.exp(-beta * (S[w0] - S[w]))
            rows.append(row)
            n_gibbs += 1
    return np.array(rows), n_gibbs


def solve_gibbs_system(U: FiniteRangePotential, depth: int, beta: float = 1.0,
                       tol: float = 1e-8, cap: int = 4096) -> UniquenessResult:
    """Solve normalization + shift consistency + Gibbs relations for the depth-word measure.

    ``rank_deficiency`` is the nullity of the homogeneous rows; ``1`` means the
    relations pin the measure down up to scale.
    """
    if depth < U.r:
        raise ValueError("depth must be at least the range")
    n = U.d ** depth
    if n > cap:
        raise CapExceededError(f"{n} unknowns exceed cap {cap}")
    H, n_gibbs = gibbs_system(U, depth, beta)
    deficiency = n - int(np.linalg.matrix_rank(H))
    A = np.vstack([np.ones((1, n)), H])
    b = np.zeros(A.shape[0])
    b[0] = 1.0
    x, *_ = np.linalg.lstsq(A, b, rcond=None)
    residual = float(np.max(np.abs(A @ x - b)))
    if residual > tol:
        raise InconsistentError(f"constraint residual {residual:.3e} exceeds {tol:.1e}")
    ref = word_measures(normalize(U.scaled(beta)), depth)
    return UniquenessResult(x, deficiency, float(np.max(np.abs(x - ref))), residual, n_gibbs)


@dataclass
class GibbsReport:
    residuals: list[tuple[str, float]] = field(default_factory=list)
    max_residual: float = 0.0
    bowen_ratio_min: float = 0.0
    bowen_ratio_max: float = 0.0
    bar_ratio_min: float = 0.0
    bar_ratio_max: float = 0.0
    K_bound: float = 0.0
    osc: float = 0.0


def gibbs_report(m: MarkovEquilibrium, max_window: int = 4, max_len: int = 8,
                 beta: float = 1.0, potential: FiniteRangePotential | None = None) -> GibbsReport:
    """Per-window worst Gibbs residuals plus Bowen, bar-ratio and K summaries."""
    U = m.potential if potential is None else potential
    residuals = []
    for w in conjugator_windows(max_window):
        slots = w.to_json()
        residuals.append((f"[{slots[0]},{slots[1]}]", float(gibbs_scan(m, w, beta, U).max())))
    b_lo, b_hi = bowen_scan(m, max_len)
    r_lo, r_hi = bar_ratio_scan(m, min(max_len, 6))
    return GibbsReport(residuals, max(v for _, v in residuals), b_lo, b_hi, r_lo, r_hi,
                       k_bound(m.normalized), m.normalized.osc)
