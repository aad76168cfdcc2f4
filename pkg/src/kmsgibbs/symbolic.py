"""Windows, words and cylinders on the lattice Z minus {0}.

Configurations are indexed internally by contiguous integers: slot
``j <= -1`` is internal index ``j`` and slot ``j >= 1`` is internal
index ``j - 1``.  The bar sits between internal ``-1`` and ``0``.  All
user-facing notation uses slots::

    "112|2"   slots -3, -2, -1 | 1      word (1, 1, 2, 2)
    "|"       the full space
    "|..12"   slots 3, 4                 ('.' pads free slots next to the bar)

Symbols are 1-based, ``1..d``.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import GapError, NotationError

Word = tuple[int, ...]


def to_internal(slot: int) -> int:
    if slot == 0:
        raise ValueError("slot 0 does not exist")
    return slot if slot < 0 else slot - 1


def to_slot(index: int) -> int:
    return index if index < 0 else index + 1


@dataclass(frozen=True, order=True)
class Window:
    """Contiguous run of internal indices ``lo..hi`` (inclusive); empty if ``hi < lo``."""

    lo: int = 0
    hi: int = -1

    def __post_init__(self):
        if self.hi < self.lo and (self.lo, self.hi) != (0, -1):
            object.__setattr__(self, "lo", 0)
            object.__setattr__(self, "hi", -1)

    @classmethod
    def around_bar(cls, n_left: int, n_right: int) -> "Window":
        """Window of slots ``-n_left..-1, 1..n_right``."""
        return cls(-n_left, n_right - 1)

    @classmethod
    def from_slots(cls, first: int, last: int) -> "Window":
        return cls(to_internal(first), to_internal(last))

    def __len__(self) -> int:
        return max(0, self.hi - self.lo + 1)

    @property
    def empty(self) -> bool:
        return self.hi < self.lo

    def indices(self) -> range:
        return range(self.lo, self.hi + 1)

    def slots(self) -> list[int]:
        return [to_slot(i) for i in self.indices()]

    def contains(self, other: "Window") -> bool:
        if other.empty:
            return True
        return not self.empty and self.lo <= other.lo and other.hi <= self.hi

    def hull(self, other: "Window") -> "Window":
        if self.empty:
            return other
        if other.empty:
            return self
        return Window(min(self.lo, other.lo), max(self.hi, other.hi))

    def shifted(self, k: int) -> "Window":
        return self if self.empty else Window(self.lo + k, self.hi + k)

    def widened(self, left: int, right: int) -> "Window":
        if self.empty:
            raise ValueError("cannot widen an empty window")
        return Window(self.lo - left, self.hi + right)

    def to_json(self) -> list[int] | None:
        """``[first_slot, last_slot]`` in slots, ``None`` when empty."""
        return None if self.empty else [to_slot(self.lo), to_slot(self.hi)]


EMPTY = Window()


@dataclass(frozen=True)
class Cylinder:
    """Configurations equal to ``word`` on ``window``."""

    window: Window
    word: Word

    def __post_init__(self):
        object.__setattr__(self, "word", tuple(int(s) for s in self.word))
        if len(self.word) != len(self.window):
            raise ValueError(
                f"word length {len(self.word)} != window length {len(self.window)}")

    @property
    def is_full(self) -> bool:
        return self.window.empty

    @property
    def is_symmetric(self) -> bool:
        w = self.window
        return w.empty or (w.lo < 0 <= w.hi and -w.lo == w.hi + 1)

    def symbol_at(self, index: int) -> int:
        return self.word[index - self.window.lo]

    def __str__(self) -> str:
        return format_cylinder(self)


FULL = Cylinder(EMPTY, ())

_CYL_RE = re.compile(r"^([0-9]*)(\.*)\|(\.*)([0-9]*)$")


def parse_word(text: str, d: int) -> Word:
    if not text.isdigit():
        raise NotationError(f"word {text!r} must be digits")
    word = tuple(int(ch) for ch in text)
    bad = [s for s in word if not 1 <= s <= d]
    if bad:
        raise NotationError(f"symbol {bad[0]} outside alphabet 1..{d}")
    return word


def parse_cylinder(text: str, d: int) -> Cylinder:
    """Parse slot notation such as ``"112|2"`` into a :class:`Cylinder`."""
    if not text:
        raise NotationError("empty cylinder notation")
    if text.count("|") != 1:
        raise NotationError(f"{text!r}: expected exactly one '|'")
    if not 1 <= d <= 9:
        raise NotationError("cylinder notation supports alphabets of size 1..9")
    match = _CYL_RE.match(text)
    if match is None:
        raise NotationError(f"{text!r}: malformed cylinder")
    left, lpad, rpad, right = match.groups()
    if (lpad and not left) or (rpad and not right) or (lpad and right) or (rpad and left):
        raise NotationError(f"{text!r}: '.' may only pad a one-sided word against the bar")
    lw = parse_word(left, d) if left else ()
    rw = parse_word(right, d) if right else ()
    if lw and rw:
        return Cylinder(Window(-len(lw), len(rw) - 1), lw + rw)
    if lw:
        hi = -1 - len(lpad)
        return Cylinder(Window(hi - len(lw) + 1, hi), lw)
    if rw:
        lo = len(rpad)
        return Cylinder(Window(lo, lo + len(rw) - 1), rw)
    return FULL


def format_cylinder(c: Cylinder) -> str:
    w = c.window
    if w.empty:
        return "|"
    digits = "".join(str(s) for s in c.word)
    if w.hi < 0:
        return digits + "." * (-1 - w.hi) + "|"
    if w.lo >= 0:
        return "|" + "." * w.lo + digits
    cut = -w.lo
    return digits[:cut] + "|" + digits[cut:]


def intersect(a: Cylinder, b: Cylinder) -> Cylinder | None:
    """Cylinder satisfying both constraint sets, or ``None`` on a clash."""
    if a.is_full:
        return b
    if b.is_full:
        return a
    if a.window.hi + 1 < b.window.lo or b.window.hi + 1 < a.window.lo:
        raise GapError(f"{a} and {b} leave a gap; refine first")
    hull = a.window.hull(b.window)
    symbols: dict[int, int] = dict(zip(a.window.indices(), a.word))
    for i, s in zip(b.window.indices(), b.word):
        if symbols.setdefault(i, s) != s:
            return None
    return Cylinder(hull, tuple(symbols[i] for i in hull.indices()))


def all_words(d: int, n: int) -> Iterator[Word]:
    """All words of length ``n`` over ``1..d`` in lexicographic order."""
    return itertools.product(range(1, d + 1), repeat=n)


def refine(c: Cylinder, target: Window, d: int) -> list[Cylinder]:
    """Split ``c`` into the ``d**free`` disjoint sub-cylinders living on ``target``."""
    if not target.contains(c.window):
        raise ValueError(f"target window {target} does not contain {c.window}")
    if c.is_full:
        left, right = len(target), 0
    else:
        left = c.window.lo - target.lo
        right = target.hi - c.window.hi
    return [Cylinder(target, fill[:left] + c.word + fill[left:])
            for fill in all_words(d, left + right)]


def shift_cylinder(c: Cylinder, k: int) -> Cylinder:
    """Image of ``c`` under the k-th inverse shift: the bar moves ``k`` slots left."""
    return Cylinder(c.window.shifted(k), c.word)


def word_index(word: Word, d: int) -> int:
    """Position of ``word`` in :func:`all_words` order."""
    idx = 0
    for s in word:
        idx = idx * d + (s - 1)
    return idx


def words_array(d: int, n: int) -> np.ndarray:
    """``(d**n, n)`` array of all words (symbols ``1..d``), rows in lexicographic order."""
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grid = np.indices((d,) * n).reshape(n, -1).T
    return grid.astype(np.int64) + 1
