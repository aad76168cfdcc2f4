"""Finite-range potentials ``U(x) = f(x_1, ..., x_r)`` and their JSON file format."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import NotationError
from .symbolic import Word, all_words, word_index


@dataclass(frozen=True, eq=False)
class FiniteRangePotential:
    """Potential on the alphabet ``1..d`` depending on ``r`` consecutive future symbols.

    ``values[word_index(w, d)]`` is ``f(w)`` for each word ``w`` of length ``r``.
    """

    d: int
    r: int
    values: np.ndarray

    def __post_init__(self):
        if self.d < 1 or self.r < 1:
            raise ValueError("alphabet size and range must be positive")
        vals = np.array(self.values, dtype=float).reshape(-1)
        if vals.shape != (self.d ** self.r,):
            raise ValueError(f"expected {self.d ** self.r} values, got {vals.size}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("potential values must be finite")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @classmethod
    def zero(cls, d: int, r: int = 1) -> "FiniteRangePotential":
        return cls(d, r, np.zeros(d ** r))

    @classmethod
    def constant(cls, d: int, c: float, r: int = 1) -> "FiniteRangePotential":
        return cls(d, r, np.full(d ** r, float(c)))

    @classmethod
    def random(cls, d: int, r: int, rng: np.random.Generator,
               scale: float = 1.0) -> "FiniteRangePotential":
        return cls(d, r, rng.uniform(-scale, scale, d ** r))

    @classmethod
    def from_function(cls, d: int, r: int, fn) -> "FiniteRangePotential":
        return cls(d, r, [fn(w) for w in all_words(d, r)])

    def f(self, word: Word) -> float:
        if len(word) != self.r:
            raise ValueError(f"expected a word of length {self.r}")
        return float(self.values[word_index(word, self.d)])

    @property
    def osc(self) -> float:
        """``sup U - inf U``."""
        return float(self.values.max() - self.values.min())

    def scaled(self, beta: float) -> "FiniteRangePotential":
        return FiniteRangePotential(self.d, self.r, beta * self.values)

    def lifted(self, r: int) -> "FiniteRangePotential":
        """Same function viewed as depending on ``r >= self.r`` coordinates."""
        if r < self.r:
            raise ValueError("cannot lower the range")
        reps = self.d ** (r - self.r)
        return FiniteRangePotential(self.d, r, np.repeat(self.values, reps))

    def plus_coboundary(self, g: "FiniteRangePotential", lam: float = 0.0) -> "FiniteRangePotential":
        """``U + g - g o tau + lam`` as a finite-range potential."""
        if g.d != self.d:
            raise ValueError("alphabet mismatch")
        r = max(self.r, g.r + 1)
        return FiniteRangePotential.from_function(
            self.d, r,
            lambda w: self.f(w[:self.r]) + g.f(w[:g.r]) - g.f(w[1:g.r + 1]) + lam)

    def window_values(self, words: np.ndarray, start: int) -> np.ndarray:
        """``f`` evaluated on columns ``start..start+r-1`` of a word array."""
        idx = np.zeros(words.shape[0], dtype=np.int64)
        for j in range(self.r):
            idx = idx * self.d + (words[:, start + j] - 1)
        return self.values[idx]

    def birkhoff_sums(self, words: np.ndarray, steps: int | None = None) -> np.ndarray:
        """Row-wise ``sum_{k < steps} f(w_k .. w_{k+r-1})``; all full windows by default."""
        n = words.shape[1]
        if steps is None:
            steps = max(0, n - self.r + 1)
        if steps + self.r - 1 > n:
            raise ValueError("words too short for the requested number of steps")
        total = np.zeros(words.shape[0])
        for k in range(steps):
            total += self.window_values(words, k)
        return total

    def to_dict(self) -> dict:
        if self.d > 9:
            raise NotationError("the JSON word keys support alphabets up to 9 symbols")
        return {
            "alphabet": self.d,
            "range": self.r,
            "values": {"".join(map(str, w)): float(v)
                       for w, v in zip(all_words(self.d, self.r), self.values)},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FiniteRangePotential":
        if not isinstance(data, dict):
            raise NotationError("potential must be a JSON object")
        keys = set(data)
        if keys != {"alphabet", "range", "values"}:
            missing = {"alphabet", "range", "values"} - keys
            extra = keys - {"alphabet", "range", "values"}
            raise NotationError(f"potential keys: missing {sorted(missing)}, extra {sorted(extra)}")
        d, r, table = data["alphabet"], data["range"], data["values"]
        if not (isinstance(d, int) and isinstance(r, int)) or not 1 <= d <= 9 or r < 1:
            raise NotationError("alphabet must be an integer in 1..9 and range a positive integer")
        if not isinstance(table, dict):
            raise NotationError("values must be an object keyed by words")
        expected = ["".join(map(str, w)) for w in all_words(d, r)]
        missing = sorted(set(expected) - set(table))
        extra = sorted(set(table) - set(expected))
        if missing or extra:
            raise NotationError(f"value keys: missing {missing[:5]}, extra {extra[:5]}")
        vals = []
        for key in expected:
            v = table[key]
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise NotationError(f"value for {key!r} must be a finite number")
            vals.append(float(v))
        return cls(d, r, vals)

    @classmethod
    def load(cls, path: str | Path) -> "FiniteRangePotential":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise NotationError(f"{path}: invalid JSON ({exc})") from exc
        return cls.from_dict(data)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")
