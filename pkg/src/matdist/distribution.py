"""Exact and sampled access to the distribution of the random value matrix.

Sampling the arguments of a finite function i.i.d. from its two spaces turns
the function into an infinite random matrix (cell (i, j) holds the value at
the i-th row draw and j-th column draw). That matrix law is determined by its
finite top-left k x k marginals, which are computed here exactly by
enumerating atom tuples; sampling produces finite realizations with a
counter-based generator so fixtures are reproducible bit-for-bit.
"""

from __future__ import annotations

import itertools
from array import array
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Dict, Tuple

from . import _kernels as kernels
from .errors import BudgetExceeded, SizeMismatch
from .functions import FiniteFunction, TensorFunction, label_key
from .measure import FiniteMeasureSpace, Label

DEFAULT_BUDGET = 100_000_000

# Stream ids for the counter-based generator: axis a of a tensor (rows = 0,
# columns = 1 for matrices) draws from stream a.
STREAM_ROWS = 0
STREAM_COLS = 1

_ONE = Fraction(1)


def _check_seed(seed: int) -> None:
    if not isinstance(seed, int) or not 0 <= seed < (1 << 64):
        raise ValueError("seed must be an unsigned 64-bit integer")


def thresholds(space: FiniteMeasureSpace) -> array:
    """floor(cum_weight * 2**64) for all but the last atom (see _kernels_py)."""
    out = array("Q")
    cum = Fraction(0)
    for w in space.weights[:-1]:
        cum += w
        out.append((cum.numerator << 64) // cum.denominator)
    return out


def _encode_labels(flat_values):
    """Label alphabet in first-occurrence order plus the coded sequence."""
    labels = []
    code_of: Dict[Label, int] = {}
    codes = array("i")
    for v in flat_values:
        c = code_of.get(v)
        if c is None:
            c = len(labels)
            code_of[v] = c
            labels.append(v)
        codes.append(c)
    return tuple(labels), codes


@dataclass
class SampledMatrix:
    """A finite realization of the random value matrix.

    ``row_atoms``/``col_atoms`` record the sampled atom indices; they exist
    for test oracles only and take no part in invariant computations.
    Values are stored coded (``codes`` flat row-major into ``labels``).
    """

    n_rows: int
    n_cols: int
    seed: int
    row_atoms: Tuple[int, ...]
    col_atoms: Tuple[int, ...]
    labels: Tuple[Label, ...]
    codes: array

    def label_at(self, i: int, j: int) -> Label:
        return self.labels[self.codes[i * self.n_cols + j]]

    @property
    def values(self) -> Tuple[Tuple[Label, ...], ...]:
        labels, codes, C = self.labels, self.codes, self.n_cols
        return tuple(
            tuple(labels[codes[i * C + j]] for j in range(C))
            for i in range(self.n_rows)
        )

    @classmethod
    def from_values(cls, values, seed=0, row_atoms=(), col_atoms=()):
        """Build directly from a label matrix (synthetic test inputs)."""
        rows = tuple(tuple(r) for r in values)
        labels, codes = _encode_labels(v for row in rows for v in row)
        return cls(
            n_rows=len(rows),
            n_cols=len(rows[0]) if rows else 0,
            seed=seed,
            row_atoms=tuple(row_atoms),
            col_atoms=tuple(col_atoms),
            labels=labels,
            codes=codes,
        )


def sample_matrix(f: FiniteFunction, n: int, seed: int) -> SampledMatrix:
    """An n x n realization; rows draw from stream 0, columns from stream 1."""
    if n < 1:
        raise ValueError("matrix size must be at least 1")
    _check_seed(seed)
    rows = kernels.sample_indices(seed, STREAM_ROWS, n, thresholds(f.x_space))
    cols = kernels.sample_indices(seed, STREAM_COLS, n, thresholds(f.y_space))
    labels, code_matrix = _encode_labels(v for row in f.values for v in row)
    codes = kernels.fill_codes(rows, cols, code_matrix, f.n_cols)
    return SampledMatrix(
        n_rows=n,
        n_cols=n,
        seed=seed,
        row_atoms=tuple(rows),
        col_atoms=tuple(cols),
        labels=labels,
        codes=codes,
    )


@dataclass
class CornerDistribution:
    """Exact law of the top-left k x k corner: value matrix -> probability."""

    k: int
    entries: Dict[Tuple[Tuple[Label, ...], ...], Fraction]

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("corner size must be at least 1")
        for matrix, p in self.entries.items():
            if p <= 0:
                raise ValueError(f"corner {matrix!r} has non-positive mass")
        if sum(self.entries.values()) != _ONE:
            raise ValueError("corner probabilities must sum to exactly 1")


def _integer_weights(space: FiniteMeasureSpace):
    """Numerators over the common denominator, for overflow-free exact sums."""
    den = lcm(*(w.denominator for w in space.weights))
    return [int(w * den) for w in space.weights], den


class _CornerAccumulator:
    """Packed exact corner masses: an integer-keyed map plus its denominator.

    A corner matrix is packed as k column patterns in base n_labels**k, each
    pattern being the k label codes of one column in base n_labels (first
    tuple position = highest digit). Label codes follow the canonical label
    order, so two functions over the same label set pack any given matrix
    identically and their corner laws can be compared without decoding.
    """

    __slots__ = ("k", "labels", "masses", "denominator")

    def __init__(self, k, labels, masses, denominator):
        self.k = k
        self.labels = labels
        self.masses = masses
        self.denominator = denominator

    def equals(self, other: "_CornerAccumulator") -> bool:
        # distinct label sets always differ: every label of a function shows
        # up in some positive-probability corner
        if self.k != other.k or self.labels != other.labels:
            return False
        if len(self.masses) != len(other.masses):
            return False
        da, db = self.denominator, other.denominator
        for key, mass in self.masses.items():
            theirs = other.masses.get(key)
            if theirs is None or mass * db != theirs * da:
                return False
        return True


def _corner_accumulator(
    f: FiniteFunction, k: int, budget: int = DEFAULT_BUDGET
) -> _CornerAccumulator:
    """Enumerate all atom k-tuples on both axes and accumulate exact masses.

    Cost is |X|^k * |Y|^k tuple pairs; a BudgetExceeded is raised instead of
    attempting an enumeration beyond ``budget``. Masses are integers over
    the common weight denominators (x_den**k * y_den**k).
    """
    if k < 1:
        raise ValueError("corner size must be at least 1")
    n_x, n_y = f.n_rows, f.n_cols
    required = (n_x**k) * (n_y**k)
    if required > budget:
        raise BudgetExceeded(
            f"{required} tuple pairs exceed the enumeration budget {budget}",
            required=required,
            budget=budget,
        )

    x_num, x_den = _integer_weights(f.x_space)
    y_num, y_den = _integer_weights(f.y_space)

    labels = tuple(sorted({v for row in f.values for v in row}, key=label_key))
    code_of = {v: c for c, v in enumerate(labels)}
    n_labels = max(len(labels), 2)
    code_rows = [[code_of[v] for v in row] for row in f.values]
    pattern_base = n_labels**k

    y_mass = list(y_num)
    for _ in range(k - 1):
        y_mass = [m * w for m in y_mass for w in y_num]

    acc: Dict[int, int] = {}
    get = acc.get
    for xt in itertools.product(range(n_x), repeat=k):
        xm = 1
        for i in xt:
            xm *= x_num[i]
        chosen = [code_rows[i] for i in xt]
        packed = [0] * n_y
        for y in range(n_y):
            pid = 0
            for row in reversed(chosen):
                pid = pid * n_labels + row[y]
            packed[y] = pid
        # Keys for all y-tuples, built one position at a time; the expansion
        # order matches y_mass (last position fastest, first = high digit).
        keys = packed
        for _ in range(k - 1):
            keys = [key * pattern_base + pid for key in keys for pid in packed]
        for key, ym in zip(keys, y_mass):
            prev = get(key)
            acc[key] = xm * ym if prev is None else prev + xm * ym

    return _CornerAccumulator(k, labels, acc, (x_den**k) * (y_den**k))


def exact_corner_distribution(
    f: FiniteFunction, k: int, budget: int = DEFAULT_BUDGET
) -> CornerDistribution:
    """The exact k-corner law as a map from value matrices to probabilities.

    See _corner_accumulator for the enumeration and its budget guard; this
    decodes the packed masses into label matrices and Fractions.
    """
    packed = _corner_accumulator(f, k, budget)
    labels = packed.labels
    n_labels = max(len(labels), 2)
    pattern_base = n_labels**k
    den = packed.denominator
    entries: Dict[Tuple[Tuple[Label, ...], ...], Fraction] = {}
    for key, mass in packed.masses.items():
        cols = []
        for _ in range(k):
            key, pid = divmod(key, pattern_base)
            col = []
            for _ in range(k):
                pid, code = divmod(pid, n_labels)
                col.append(labels[code])
            cols.append(col)
        cols.reverse()  # the first y position is the highest key digit
        matrix = tuple(tuple(cols[j][i] for j in range(k)) for i in range(k))
        entries[matrix] = Fraction(mass, den)
    return CornerDistribution(k, entries)


def corner_distributions_equal(
    f: FiniteFunction, g: FiniteFunction, k: int, budget: int = DEFAULT_BUDGET
) -> bool:
    """Exact equality of the two k-corner laws.

    Compared in packed form (label codes are canonical), so large supports
    are never materialized as label matrices.
    """
    return _corner_accumulator(f, k, budget).equals(
        _corner_accumulator(g, k, budget)
    )


def _tv(a: Dict, b: Dict) -> Fraction:
    total = Fraction(0)
    for key in a.keys() | b.keys():
        total += abs(a.get(key, Fraction(0)) - b.get(key, Fraction(0)))
    return total / 2


def total_variation(d1: CornerDistribution, d2: CornerDistribution) -> Fraction:
    if d1.k != d2.k:
        raise SizeMismatch(f"corner sizes differ: {d1.k} vs {d2.k}")
    return _tv(d1.entries, d2.entries)


@dataclass
class TensorCornerDistribution:
    """Exact law of the k^n top-left tensor corner (flat row-major keys)."""

    arity: int
    k: int
    entries: Dict[Tuple[Label, ...], Fraction]

    def __post_init__(self):
        if sum(self.entries.values()) != _ONE:
            raise ValueError("corner probabilities must sum to exactly 1")


def exact_tensor_corner(
    f: TensorFunction, k: int, budget: int = DEFAULT_BUDGET
) -> TensorCornerDistribution:
    """n-axis analogue of exact_corner_distribution."""
    if k < 1:
        raise ValueError("corner size must be at least 1")
    required = 1
    for axis in f.axes:
        required *= axis.size**k
    if required > budget:
        raise BudgetExceeded(
            f"{required} tuple combinations exceed the enumeration budget {budget}",
            required=required,
            budget=budget,
        )

    axis_choices = []
    dens = []
    for axis in f.axes:
        nums, den = _integer_weights(axis)
        tuples = []
        for t in itertools.product(range(axis.size), repeat=k):
            m = 1
            for i in t:
                m *= nums[i]
            tuples.append((t, m))
        axis_choices.append(tuples)
        dens.append(den)

    positions = list(itertools.product(range(k), repeat=f.arity))
    strides = f.strides
    values = f.values
    acc: Dict[Tuple[Label, ...], int] = {}
    for picks in itertools.product(*axis_choices):
        mass = 1
        for _, m in picks:
            mass *= m
        key = tuple(
            values[sum(picks[a][0][pos[a]] * strides[a] for a in range(f.arity))]
            for pos in positions
        )
        if key in acc:
            acc[key] += mass
        else:
            acc[key] = mass

    den = 1
    for d in dens:
        den *= d**k
    entries = {key: Fraction(mass, den) for key, mass in acc.items()}
    return TensorCornerDistribution(f.arity, k, entries)


@dataclass
class SampledTensor:
    """A finite N^n realization of the random value tensor."""

    arity: int
    side: int
    seed: int
    axis_atoms: Tuple[Tuple[int, ...], ...]
    labels: Tuple[Label, ...]
    codes: array

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.side,) * self.arity

    def label_at(self, indices: Tuple[int, ...]) -> Label:
        flat = 0
        for idx in indices:
            flat = flat * self.side + idx
        return self.labels[self.codes[flat]]


def sample_tensor(f: TensorFunction, n: int, seed: int) -> SampledTensor:
    """An N^n realization; axis a draws from stream a (matrices: 0 and 1)."""
    if n < 1:
        raise ValueError("tensor side must be at least 1")
    _check_seed(seed)
    axis_atoms = [
        kernels.sample_indices(seed, a, n, thresholds(axis))
        for a, axis in enumerate(f.axes)
    ]
    labels, code_values = _encode_labels(f.values)
    if f.arity == 2:
        codes = kernels.fill_codes(
            axis_atoms[0], axis_atoms[1], code_values, f.axes[1].size
        )
    else:
        strides = f.strides
        codes = array("i", bytes(4 * n**f.arity))
        pos = 0
        for combo in itertools.product(*(tuple(a) for a in axis_atoms)):
            flat = 0
            for idx, stride in zip(combo, strides):
                flat += idx * stride
            codes[pos] = code_values[flat]
            pos += 1
    return SampledTensor(
        arity=f.arity,
        side=n,
        seed=seed,
        axis_atoms=tuple(tuple(a) for a in axis_atoms),
        labels=labels,
        codes=codes,
    )
