"""Composite-symbol algebra.

A composite symbol over a base alphabet of size q with resolution M is a
q-tuple of nonnegative integer counts summing to M: the mixture ratio of
bases synthesized at one strand position. A composite matrix is a sequence
of n such columns and is the codeword object everything else works on.

Counts stay exact integers; probabilities are derived on demand as
counts / M. All combinatorial sizes use arbitrary-precision integers.

Base indices are 1-based throughout the public API (base 1 = "A" for DNA),
matching the column conventions of the marker construction.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterator, Sequence


@dataclass(frozen=True)
class AlphabetParams:
    """Base-alphabet size q (>= 2) and resolution parameter M (>= 1)."""

    q: int
    M: int

    def __post_init__(self) -> None:
        if self.q < 2:
            raise ValueError(f"base alphabet size q must be >= 2, got {self.q}")
        if self.M < 1:
            raise ValueError(f"resolution parameter M must be >= 1, got {self.M}")


@dataclass(frozen=True)
class CompositeSymbol:
    """One column of a composite matrix: q nonnegative counts summing to M."""

    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.counts:
            raise ValueError("composite symbol must have at least one count")
        for c in self.counts:
            if not isinstance(c, int) or c < 0:
                raise ValueError(f"counts must be nonnegative integers, got {self.counts}")

    @property
    def q(self) -> int:
        return len(self.counts)

    @property
    def resolution(self) -> int:
        return sum(self.counts)

    def validate(self, params: AlphabetParams) -> None:
        if self.q != params.q:
            raise ValueError(f"symbol has {self.q} counts, alphabet has q={params.q}")
        if self.resolution != params.M:
            raise ValueError(f"counts sum to {self.resolution}, expected M={params.M}")

    def probabilities(self) -> tuple[float, ...]:
        m = self.resolution
        return tuple(c / m for c in self.counts)


@dataclass(frozen=True)
class CompositeMatrix:
    """A q x n composite matrix: n columns, each a valid composite symbol."""

    columns: tuple[CompositeSymbol, ...]
    params: AlphabetParams

    def __post_init__(self) -> None:
        if not self.columns:
            raise ValueError("composite matrix needs at least one column")
        for j, col in enumerate(self.columns, start=1):
            try:
                col.validate(self.params)
            except ValueError as exc:
                raise ValueError(f"column {j}: {exc}") from exc

    @property
    def n(self) -> int:
        return len(self.columns)

    def count_array(self):
        """Counts as a (q, n) numpy int array (row i-1 = base i)."""
        import numpy as np

        return np.array([c.counts for c in self.columns], dtype=np.int64).T

    def probability_array(self):
        """Per-position base distributions as a (q, n) float array."""
        return self.count_array() / float(self.params.M)

    def to_json(self) -> str:
        return json.dumps(
            {"q": self.params.q, "M": self.params.M, "columns": [list(c.counts) for c in self.columns]}
        )

    @classmethod
    def from_json(cls, text: str) -> "CompositeMatrix":
        obj = json.loads(text)
        params = AlphabetParams(q=int(obj["q"]), M=int(obj["M"]))
        cols = tuple(CompositeSymbol(tuple(int(x) for x in col)) for col in obj["columns"])
        return cls(columns=cols, params=params)

    def to_csv(self) -> str:
        """One column per line, comma-separated counts."""
        return "\n".join(",".join(str(x) for x in c.counts) for c in self.columns) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "CompositeMatrix":
        cols = []
        for line in text.strip().splitlines():
            cols.append(CompositeSymbol(tuple(int(x) for x in line.split(","))))
        if not cols:
            raise ValueError("empty CSV matrix")
        q = cols[0].q
        m = cols[0].resolution
        return cls(columns=tuple(cols), params=AlphabetParams(q=q, M=m))

    @classmethod
    def from_count_array(cls, arr, params: AlphabetParams) -> "CompositeMatrix":
        cols = tuple(CompositeSymbol(tuple(int(x) for x in arr[:, j])) for j in range(arr.shape[1]))
        return cls(columns=cols, params=params)


def alphabet_size(params: AlphabetParams) -> int:
    """Number of composite symbols: C(M+q-1, q-1), exactly."""
    return math.comb(params.M + params.q - 1, params.q - 1)


def restricted_symbol_count(params: AlphabetParams, excluded_base: int) -> int:
    """Number of composite symbols whose count at `excluded_base` is nonzero.

    Equals C(M+q-1, q-1) - C(M+q-2, q-2): total symbols minus those that
    place zero weight on the excluded base.
    """
    q, m = params.q, params.M
    if not 1 <= excluded_base <= q:
        raise ValueError(f"base index {excluded_base} outside [1, {q}]")
    return math.comb(m + q - 1, q - 1) - math.comb(m + q - 2, q - 2)


def _compositions(parts: int, total: int) -> Iterator[tuple[int, ...]]:
    # Last coordinate descending, prefix recursively: yields the colex order
    # matching _rank_composition below.
    if parts == 1:
        yield (total,)
        return
    for last in range(total, -1, -1):
        for rest in _compositions(parts - 1, total - last):
            yield rest + (last,)


def _rank_composition(counts: Sequence[int]) -> int:
    # Combinadic rank via the partial-sum subset {x_1, x_1+x_2+1, ...}.
    rank = 0
    acc = 0
    for j, x in enumerate(counts[:-1], start=1):
        acc += x
        rank += math.comb(acc + j - 1, j)
    return rank


def _unrank_composition(index: int, parts: int, total: int) -> tuple[int, ...]:
    if parts == 1:
        return (total,)
    r = index
    subset = [0] * (parts - 1)
    for j in range(parts - 1, 0, -1):
        s = j - 1
        while math.comb(s + 1, j) <= r:
            s += 1
        subset[j - 1] = s
        r -= math.comb(s, j)
    counts = [subset[0]]
    for j in range(1, parts - 1):
        counts.append(subset[j] - subset[j - 1] - 1)
    counts.append(total + parts - 2 - subset[-1])
    return tuple(counts)


def enumerate_symbols(params: AlphabetParams) -> list[CompositeSymbol]:
    """All Q symbols exactly once, in colexicographic order of counts."""
    return [CompositeSymbol(c) for c in _compositions(params.q, params.M)]


def rank_symbol(symbol: CompositeSymbol, params: AlphabetParams) -> int:
    """Index of `symbol` within enumerate_symbols(params), in [0, Q)."""
    symbol.validate(params)
    return _rank_composition(symbol.counts)


def unrank_symbol(index: int, params: AlphabetParams) -> CompositeSymbol:
    """Inverse of rank_symbol."""
    size = alphabet_size(params)
    if not 0 <= index < size:
        raise ValueError(f"symbol index {index} outside [0, {size})")
    return CompositeSymbol(_unrank_composition(index, params.q, params.M))


def largest_remainder_apportion(values: Sequence[float], total: int) -> list[int]:
    """Round nonnegative reals to integers summing to `total`.

    Scales to the target sum, takes floors, then hands the leftover units to
    the largest fractional parts; ties go to the lowest index. Minimizes the
    L1 distance to the scaled input among integer vectors with that sum.
    """
    weight = float(sum(values))
    if weight <= 0.0:
        raise ValueError("values must have positive sum")
    scaled = [v / weight * total for v in values]
    floors = [math.floor(s) for s in scaled]
    leftover = total - sum(floors)
    order = sorted(range(len(values)), key=lambda i: (floors[i] - scaled[i], i))
    out = list(floors)
    for i in order[:leftover]:
        out[i] += 1
    return out


def quantize_to_symbol(frequencies: Sequence[float], params: AlphabetParams) -> CompositeSymbol:
    """Nearest composite symbol (L1 on base fractions) to an empirical frequency vector.

    Uses largest-remainder apportionment of M units across the q bases;
    fractional-part ties break toward the lowest base index.
    """
    if len(frequencies) != params.q:
        raise ValueError(f"expected {params.q} frequencies, got {len(frequencies)}")
    for f in frequencies:
        if not math.isfinite(f) or f < 0:
            raise ValueError(f"frequencies must be finite and nonnegative, got {frequencies}")
    return CompositeSymbol(tuple(largest_remainder_apportion(frequencies, params.M)))
