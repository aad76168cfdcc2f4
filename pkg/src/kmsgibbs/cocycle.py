"""Homoclinic pairs, the cocycle V and conjugating homeomorphisms as rewrite pieces.

A :class:`RewritePiece` ``(W, u, v, c)`` is the map "replace ``u`` by ``v`` on
window ``W``, leave every other slot alone", defined on the cylinder
``(W, u)`` and carrying a complex weight ``c``.  Every conjugator used in the
package, including bar-moving ones, is reduced to a finite family of such
pieces.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ContextError, DegenerateError, NotationError
from .potential import FiniteRangePotential
from .symbolic import (EMPTY, Cylinder, Window, Word, all_words, format_cylinder,
                       parse_cylinder, parse_word, to_slot)


@dataclass(frozen=True)
class HomoclinicPair:
    """Two configurations that agree off ``window``.

    ``left_ctx`` and ``right_ctx`` are the common symbols on the slots
    immediately left and right of the window; ``r - 1`` of each suffice to
    evaluate the cocycle of a range-``r`` potential exactly.
    """

    window: Window
    source: Word
    target: Word
    left_ctx: Word = ()
    right_ctx: Word = ()

    def __post_init__(self):
        for name in ("source", "target", "left_ctx", "right_ctx"):
            object.__setattr__(self, name, tuple(int(s) for s in getattr(self, name)))
        if not len(self.source) == len(self.target) == len(self.window):
            raise ValueError("source and target must match the window length")

    def differences(self) -> list[int]:
        """Internal indices where the two configurations differ."""
        return [i for i, a, b in zip(self.window.indices(), self.source, self.target) if a != b]

    def extended(self) -> tuple[Word, Word]:
        """Both configurations written out on context + window + context."""
        return (self.left_ctx + self.source + self.right_ctx,
                self.left_ctx + self.target + self.right_ctx)

    def swapped(self) -> "HomoclinicPair":
        return HomoclinicPair(self.window, self.target, self.source, self.left_ctx, self.right_ctx)


def kappa(p: HomoclinicPair) -> int:
    """Smallest ``M >= 0`` with agreement on all slots ``|j| > M``."""
    return max((abs(to_slot(i)) for i in p.differences()), default=0)


def vartheta(p: HomoclinicPair) -> int:
    """Largest ``N`` with agreement on slots ``-N..N``; the distance is ``2**-N``."""
    diffs = p.differences()
    if not diffs:
        raise DegenerateError("vartheta is undefined for equal points")
    return min(abs(to_slot(i)) for i in diffs) - 1


def distance(p: HomoclinicPair) -> float:
    return 2.0 ** -vartheta(p)


def _window_sum(word: Word, U: FiniteRangePotential) -> float:
    return sum(U.f(word[k:k + U.r]) for k in range(len(word) - U.r + 1))


def cocycle_V(p: HomoclinicPair, U: FiniteRangePotential) -> float:
    """``V(x, y) = sum_k U(tau^k x) - U(tau^k y)``, an exact finite sum."""
    if p.source == p.target:
        return 0.0
    need = U.r - 1
    if len(p.left_ctx) < need or len(p.right_ctx) < need:
        raise ContextError(f"cocycle of a range-{U.r} potential needs {need} context symbols per side")
    x, y = p.extended()
    return _window_sum(x, U) - _window_sum(y, U)


def parse_pair(text: str, d: int, left_ctx: str = "", right_ctx: str = "") -> HomoclinicPair:
    """Pair notation ``"<cyl>,<cyl>"``; both cylinders must share a window."""
    parts = text.split(",")
    if len(parts) != 2:
        raise NotationError(f"{text!r}: expected '<cyl>,<cyl>'")
    a, b = (parse_cylinder(s.strip(), d) for s in parts)
    if a.window != b.window:
        raise NotationError(f"{text!r}: cylinders must have the same window")
    lctx = parse_word(left_ctx, d) if left_ctx else ()
    rctx = parse_word(right_ctx, d) if right_ctx else ()
    return HomoclinicPair(a.window, a.word, b.word, lctx, rctx)


@dataclass(frozen=True)
class RewritePiece:
    """Replace ``source`` by ``target`` on ``window``; weight ``coeff``."""

    window: Window
    source: Word
    target: Word
    coeff: complex = field(default=1.0 + 0.0j)

    def __post_init__(self):
        object.__setattr__(self, "source", tuple(int(s) for s in self.source))
        object.__setattr__(self, "target", tuple(int(s) for s in self.target))
        object.__setattr__(self, "coeff", complex(self.coeff))
        if not len(self.source) == len(self.target) == len(self.window):
            raise ValueError("source and target must match the window length")

    @property
    def domain(self) -> Cylinder:
        return Cylinder(self.window, self.source)

    @property
    def image(self) -> Cylinder:
        return Cylinder(self.window, self.target)

    @property
    def is_diagonal(self) -> bool:
        return self.source == self.target

    def with_coeff(self, coeff: complex) -> "RewritePiece":
        return RewritePiece(self.window, self.source, self.target, coeff)

    def label(self) -> str:
        return f"{format_cylinder(self.domain)}->{format_cylinder(self.image)}"

    def __str__(self) -> str:
        return self.label() if self.coeff == 1 else f"{self.coeff}*[{self.label()}]"


def identity_piece(c: Cylinder = Cylinder(EMPTY, ())) -> RewritePiece:
    return RewritePiece(c.window, c.word, c.word)


def refine_piece(p: RewritePiece, target: Window, d: int) -> list[RewritePiece]:
    """Split ``p`` into pieces on the larger window ``target`` (same fill on both sides)."""
    if not target.contains(p.window):
        raise ValueError(f"target window {target} does not contain {p.window}")
    if p.window.empty:
        left, right = len(target), 0
    else:
        left, right = p.window.lo - target.lo, target.hi - p.window.hi
    out = []
    for fill in all_words(d, left + right):
        a, b = fill[:left], fill[left:]
        out.append(RewritePiece(target, a + p.source + b, a + p.target + b, p.coeff))
    return out


def symmetric_conjugator(x_word: Word, y_word: Word, n: int) -> RewritePiece:
    """Conjugator between the symmetric cylinders on slots ``-n..n``."""
    if len(x_word) != 2 * n or len(y_word) != 2 * n:
        raise ValueError(f"symmetric words for n={n} have length {2 * n}")
    return RewritePiece(Window.around_bar(n, n), x_word, y_word)


def bar_move_conjugator(c: Cylinder, steps: int, d: int) -> list[RewritePiece]:
    """Pieces of the map taking ``c`` onto ``shift_cylinder(c, steps)``.

    The ``steps`` symbols right of ``c`` are carried to the slots that the
    word of ``c`` vacates; one piece per choice of those symbols.
    """
    n_left = sum(1 for i in c.window.indices() if i < 0)
    if steps < 0 or steps > n_left:
        raise ValueError(f"steps must lie in 0..{n_left} for {format_cylinder(c)}")
    if steps == 0:
        return [identity_piece(c)]
    window = Window(c.window.lo, c.window.hi + steps)
    return [RewritePiece(window, c.word + z, z + c.word) for z in all_words(d, steps)]


def compose(p: RewritePiece, q: RewritePiece, d: int) -> list[RewritePiece]:
    """Pieces of ``q o p`` (apply ``p`` first) on the hull window; coefficients multiply."""
    hull = p.window.hull(q.window)
    q_off = q.window.lo - hull.lo
    q_len = len(q.window)
    out = []
    for piece in refine_piece(p, hull, d):
        mid = piece.target[q_off:q_off + q_len]
        if mid != q.source:
            continue
        target = piece.target[:q_off] + q.target + piece.target[q_off + q_len:]
        out.append(RewritePiece(hull, piece.source, target, p.coeff * q.coeff))
    return out


def invert(p: RewritePiece) -> RewritePiece:
    return RewritePiece(p.window, p.target, p.source, p.coeff)


def refine_for_cocycle(p: RewritePiece, U: FiniteRangePotential) -> list[tuple[RewritePiece, float]]:
    """Refine ``p`` until ``V(z, p(z))`` is constant on each piece.

    Adds ``r - 1`` context slots per side.  When every refined piece carries
    the same value the unrefined piece is returned instead.
    """
    if p.is_diagonal or U.r == 1 and not p.window.empty:
        pair = HomoclinicPair(p.window, p.source, p.target)
        return [(p, cocycle_V(pair, U))]
    if p.window.empty:
        return [(p, 0.0)]
    c = U.r - 1
    out = []
    for piece in refine_piece(p, p.window.widened(c, c), U.d):
        pair = HomoclinicPair(p.window, piece.source[c:-c], piece.target[c:-c],
                              piece.source[:c], piece.source[-c:])
        out.append((piece, cocycle_V(pair, U)))
    if all(v == out[0][1] for _, v in out):
        return [(p, out[0][1])]
    return out
