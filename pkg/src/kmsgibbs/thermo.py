"""Transfer matrices, pressure, normalization and the Markov equilibrium measure.

States are words of length ``r - 1`` (a single empty state when ``r = 1``),
indexed in lexicographic order.  The transfer matrix appends one symbol:
``T[a, b] = exp f(a + b[-1:])`` whenever ``b = a[1:] + b[-1:]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CapExceededError, ConvergenceError
from .potential import FiniteRangePotential
from .symbolic import Cylinder, Window, Word, words_array


def n_states(U: FiniteRangePotential) -> int:
    return U.d ** (U.r - 1)


def transfer_matrix(U: FiniteRangePotential) -> np.ndarray:
    ns = n_states(U)
    idx = np.arange(U.d ** U.r)
    T = np.zeros((ns, ns))
    np.add.at(T, (idx // U.d, idx % ns), np.exp(U.values))
    return T


def symbol_matrices(U: FiniteRangePotential) -> np.ndarray:
    """``(d, ns, ns)`` stack splitting the transfer matrix by appended symbol."""
    ns = n_states(U)
    idx = np.arange(U.d ** U.r)
    Tj = np.zeros((U.d, ns, ns))
    Tj[idx % U.d, idx // U.d, idx % ns] = np.exp(U.values)
    return Tj


@dataclass(frozen=True, eq=False)
class PerronData:
    lam: float
    h: np.ndarray
    nu: np.ndarray
    iterations: int = 0

    @property
    def pressure(self) -> float:
        return math.log(self.lam)

    @property
    def log_h(self) -> np.ndarray:
        return np.log(self.h)


def perron(U: FiniteRangePotential, tol: float = 1e-13, max_iter: int = 200) -> PerronData:
    """Leading eigenvalue with right (``h``) and left (``nu``) eigenvectors, ``nu . h = 1``.

    Power iteration on ``T**(2**k)`` by repeated squaring from the all-ones
    start; the squared matrix tends to the rank-one Perron projector.
    """
    T = transfer_matrix(U)
    A = T / T.max()
    h = np.ones(T.shape[0])
    for it in range(1, max_iter + 1):
        A = A @ A
        A /= A.max()
        new = A @ np.ones(T.shape[0])
        new /= new.max()
        done = np.max(np.abs(new - h)) <= tol
        h = new
        if done:
            break
    else:
        raise ConvergenceError(f"power iteration did not converge in {max_iter} squarings")
    nu = np.ones(T.shape[0]) @ A
    for _ in range(3):
        h = T @ h
        h /= h.max()
        nu = nu @ T
        nu /= nu.max()
    lam = float(np.dot(nu, T @ h) / np.dot(nu, h))
    if np.max(np.abs(T @ h - lam * h)) / lam > max(tol, 1e-12):
        raise ConvergenceError("eigenvector residual above tolerance")
    return PerronData(lam, h, nu / np.dot(nu, h), it)


@dataclass(frozen=True, eq=False)
class MarkovEquilibrium:
    """Equilibrium measure of ``potential`` as a Markov chain on ``(r-1)``-words.

    ``transitions`` moves one slot right, ``reverse_transitions`` one slot
    left.  ``stationary`` is the law of the state occupying internal
    positions ``0..r-2``; cylinder measures are built outwards from there.
    """

    potential: FiniteRangePotential
    normalized: FiniteRangePotential
    perron: PerronData
    stationary: np.ndarray
    transitions: np.ndarray
    reverse_transitions: np.ndarray = field(repr=False)

    @property
    def d(self) -> int:
        return self.potential.d

    @property
    def r(self) -> int:
        return self.potential.r

    @property
    def pressure(self) -> float:
        return self.perron.pressure

    def measure(self, c: Cylinder) -> float:
        return cylinder_measure(self, c)


def normalize(U: FiniteRangePotential, tol: float = 1e-13, max_iter: int = 200) -> MarkovEquilibrium:
    """Cohomologous potential with ``sum_j exp U~(j w) = 1`` and the induced chain."""
    pd = perron(U, tol, max_iter)
    ns = n_states(U)
    idx = np.arange(U.d ** U.r)
    log_nu = np.log(pd.nu)
    tilde = U.values + log_nu[idx // U.d] - log_nu[idx % ns] - pd.pressure
    T = transfer_matrix(U)
    P = T * pd.h[None, :]
    P /= P.sum(axis=1, keepdims=True)
    Q = (T * pd.nu[:, None]).T
    Q /= Q.sum(axis=1, keepdims=True)
    pi = pd.nu * pd.h
    return MarkovEquilibrium(U, FiniteRangePotential(U.d, U.r, tilde), pd, pi / pi.sum(), P, Q)


def _state_indices(words: np.ndarray, d: int, r: int) -> np.ndarray:
    """``(rows, n - r + 2)`` indices of the ``(r-1)``-word starting at each column."""
    n = words.shape[1]
    k = r - 1
    out = np.zeros((words.shape[0], n - k + 1), dtype=np.int64)
    for j in range(k):
        out = out * d + (words[:, j:n - k + 1 + j] - 1)
    return out


def _block_probs(m: MarkovEquilibrium, lo: int, words: np.ndarray) -> np.ndarray:
    """Measures of the cylinders ``(Window(lo, ...), row)``, rows of length ``>= r - 1``."""
    d, r = m.d, m.r
    if r == 1:
        p = np.exp(m.normalized.values)
        return np.prod(p[words - 1], axis=1)
    S = _state_indices(words, d, r)
    p0, p1 = lo, lo + S.shape[1] - 1
    a = min(max(0, p0), p1)
    dist = m.stationary
    for _ in range(max(0, p0)):
        dist = dist @ m.transitions
    for _ in range(max(0, -p1)):
        dist = dist @ m.reverse_transitions
    k = a - p0
    prob = dist[S[:, k]].copy()
    for j in range(k, S.shape[1] - 1):
        prob *= m.transitions[S[:, j], S[:, j + 1]]
    for j in range(k, 0, -1):
        prob *= m.reverse_transitions[S[:, j], S[:, j - 1]]
    return prob


def window_measures(m: MarkovEquilibrium, window: Window) -> np.ndarray:
    """Measures of all ``d**len`` cylinders on ``window`` in lexicographic word order."""
    n = len(window)
    if n == 0:
        return np.ones(1)
    short = max(0, m.r - 1 - n)
    probs = _block_probs(m, window.lo, words_array(m.d, n + short))
    return probs.reshape(m.d ** n, -1).sum(axis=1)


def word_measures(m: MarkovEquilibrium, n: int) -> np.ndarray:
    """One-sided cylinders ``|w`` of length ``n``, lexicographic order."""
    return window_measures(m, Window(0, n - 1))


def cylinder_measures(m: MarkovEquilibrium, window: Window, words: np.ndarray) -> np.ndarray:
    """Measures of the cylinders ``(window, row)`` for each row of ``words``."""
    if window.empty:
        return np.ones(len(words))
    words = np.asarray(words, dtype=np.int64).reshape(-1, len(window))
    short = max(0, m.r - 1 - len(window))
    fills = words_array(m.d, short)
    rows = np.hstack([np.repeat(words, fills.shape[0], axis=0),
                      np.tile(fills, (words.shape[0], 1))])
    return _block_probs(m, window.lo, rows).reshape(words.shape[0], -1).sum(axis=1)


def cylinder_measure(m: MarkovEquilibrium, c: Cylinder) -> float:
    return float(cylinder_measures(m, c.window, np.array([c.word]))[0])


def entropy_and_integral(m: MarkovEquilibrium) -> tuple[float, float]:
    """Entropy of the chain and ``int U d rho`` over ``r``-word cylinders."""
    r, d = m.r, m.d
    mu = word_measures(m, r)
    integral = float(np.dot(mu, m.potential.values))
    cond = mu / mu.reshape(-1, d).sum(axis=1).repeat(d) if r > 1 else mu
    mask = mu > 0
    entropy = float(-np.sum(mu[mask] * np.log(cond[mask])))
    return entropy, integral


def birkhoff_sum(U: FiniteRangePotential, w: Word, s: int) -> float:
    """``sum_{k < s} f(w_k .. w_{k+r-1})``."""
    if len(w) < s + U.r - 1:
        raise ValueError(f"need at least {s + U.r - 1} symbols for {s} steps")
    return sum(U.f(tuple(w[k:k + U.r])) for k in range(s))


@dataclass(frozen=True, eq=False)
class FiniteVolumeMeasure:
    """Uniform measure reweighted by ``exp sum_{k=a}^{b-1} B o tau^k``.

    Weighted slots are internal positions ``a..b+r-2``; every other slot stays
    uniform and independent.
    """

    B: FiniteRangePotential
    a: int
    b: int
    span_cap: int = 20

    def __post_init__(self):
        if self.b <= self.a:
            raise ValueError("need a < b")
        if self.b - self.a > self.span_cap:
            raise CapExceededError(f"span {self.b - self.a} exceeds cap {self.span_cap}")

    @property
    def span(self) -> Window:
        return Window(self.a, self.b + self.B.r - 2)

    def _log_mass(self, allowed: np.ndarray) -> float:
        B = self.B
        Tj = symbol_matrices(B)
        k = B.r - 1
        if k == 0:
            v = np.ones(1)
        else:
            first = words_array(B.d, k)
            v = np.prod(allowed[np.arange(k), first - 1], axis=1).astype(float)
        log_scale = 0.0
        for t in range(k, allowed.shape[0]):
            v = v @ np.tensordot(allowed[t].astype(float), Tj, axes=1)
            s = v.sum()
            if s == 0:
                return -math.inf
            v /= s
            log_scale += math.log(s)
        return log_scale + math.log(v.sum())

    def measure(self, c: Cylinder) -> float:
        span = self.span
        d = self.B.d
        allowed = np.ones((len(span), d), dtype=bool)
        outside = 0
        for i, s in zip(c.window.indices(), c.word):
            if span.lo <= i <= span.hi:
                allowed[i - span.lo] = False
                allowed[i - span.lo, s - 1] = True
            else:
                outside += 1
        full = np.ones_like(allowed)
        return math.exp(self._log_mass(allowed) - self._log_mass(full)) * d ** -outside


def finite_volume_measure(B: FiniteRangePotential, a: int, b: int, c: Cylinder,
                          span_cap: int = 20) -> float:
    return FiniteVolumeMeasure(B, a, b, span_cap).measure(c)
