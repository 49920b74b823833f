"""Two-variable finite functions: purity, purification, canonical forms.

A ``FiniteFunction`` is a value matrix over the atoms of two finite
probability spaces. It is *pure* when no two rows and no two columns of the
matrix coincide; every function has a unique pure factor obtained by merging
identical rows (then identical columns) and summing their weights.

Isomorphism (weight-preserving bijections of both atom sets carrying the
value matrix onto the other, values fixed pointwise) is decided through a
canonical form of the *extended* pure factor, in which every cell also
carries the metric types of the merged row/column fibers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Dict, Optional, Tuple

from .errors import BudgetExceeded
from .measure import FiniteMeasureSpace, Label, MetricType, metric_type

# Ceiling on the number of row arrangements explored while canonicalizing
# (product of factorials of the equal-weight classes). 10! keeps worst cases
# around a second; desk-scale inputs stay far below it.
CANONICAL_SEARCH_LIMIT = 3_628_800


@dataclass(frozen=True)
class FiniteFunction:
    """A value matrix: row i belongs to atom i of x_space, column j to y_space."""

    x_space: FiniteMeasureSpace
    y_space: FiniteMeasureSpace
    values: Tuple[Tuple[Label, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(tuple(row) for row in self.values))
        if len(self.values) != self.x_space.size:
            raise ValueError("one value row per x atom required")
        for row in self.values:
            if len(row) != self.y_space.size:
                raise ValueError("one value column per y atom required")

    @property
    def n_rows(self) -> int:
        return self.x_space.size

    @property
    def n_cols(self) -> int:
        return self.y_space.size

    def column(self, j: int) -> Tuple[Label, ...]:
        return tuple(row[j] for row in self.values)


@dataclass(frozen=True)
class FactorMaps:
    """Projections of original atoms onto purified atoms, both axes."""

    row_projection: Dict[Label, Label]
    col_projection: Dict[Label, Label]


@dataclass(frozen=True)
class ExtendedValueLabel:
    """A base value decorated with the metric types of its row and column."""

    base: Label
    row_type: MetricType
    col_type: MetricType


def label_key(label: Label):
    """A fixed total order on value labels.

    Plain labels sort by (type name, repr); extended labels sort by
    (base, row type weights, column type weights) with the weight sequences
    compared as rational tuples. Any fixed total order yields the same
    classification; this one is stable across processes.
    """
    if isinstance(label, ExtendedValueLabel):
        return (1, label_key(label.base), label.row_type.weights, label.col_type.weights)
    return (0, type(label).__name__, repr(label), ())


def is_pure(f: FiniteFunction) -> bool:
    """True iff no two rows and no two columns are identical label tuples."""
    rows = f.values
    if len(set(rows)) != len(rows):
        return False
    cols = tuple(f.column(j) for j in range(f.n_cols))
    return len(set(cols)) == len(cols)


def _first_occurrence_classes(items):
    """Group indices by equal items, classes ordered by first occurrence."""
    classes: Dict[object, list] = {}
    for i, item in enumerate(items):
        classes.setdefault(item, []).append(i)
    return list(classes.values())


def purify(f: FiniteFunction) -> Tuple[FiniteFunction, FactorMaps]:
    """Merge identical rows, then identical columns, summing weights.

    Merged atoms inherit the id of their first member, so purifying an
    already-pure function returns it unchanged with identity projections.
    The merge order is fixed (rows first); the result does not depend on it
    because merging rows removes duplicate coordinates of the columns and
    therefore never changes which columns are equal.
    """
    row_classes = _first_occurrence_classes(f.values)
    x_ids = tuple(f.x_space.atom_ids[c[0]] for c in row_classes)
    x_weights = tuple(sum(f.x_space.weights[i] for i in c) for c in row_classes)
    row_projection = {
        f.x_space.atom_ids[i]: f.x_space.atom_ids[c[0]]
        for c in row_classes
        for i in c
    }
    reduced_rows = tuple(f.values[c[0]] for c in row_classes)

    columns = tuple(
        tuple(row[j] for row in reduced_rows) for j in range(f.n_cols)
    )
    col_classes = _first_occurrence_classes(columns)
    y_ids = tuple(f.y_space.atom_ids[c[0]] for c in col_classes)
    y_weights = tuple(sum(f.y_space.weights[j] for j in c) for c in col_classes)
    col_projection = {
        f.y_space.atom_ids[j]: f.y_space.atom_ids[c[0]]
        for c in col_classes
        for j in c
    }

    values = tuple(
        tuple(row[c[0]] for c in col_classes) for row in reduced_rows
    )
    pure = FiniteFunction(
        FiniteMeasureSpace(x_ids, x_weights),
        FiniteMeasureSpace(y_ids, y_weights),
        values,
    )
    return pure, FactorMaps(row_projection, col_projection)


def _fiber_types(space: FiniteMeasureSpace, projection: Dict[Label, Label],
                 purified_ids: Tuple[Label, ...]) -> Dict[Label, MetricType]:
    """Metric type of the conditional measure over each projection fiber."""
    types = {}
    for pid in purified_ids:
        indices = [
            i for i, aid in enumerate(space.atom_ids) if projection[aid] == pid
        ]
        types[pid] = metric_type(space.restrict(indices))
    return types


def extended_pure_factor(f: FiniteFunction) -> FiniteFunction:
    """The pure factor with every cell decorated by its fiber metric types."""
    pure, maps = purify(f)
    row_types = _fiber_types(f.x_space, maps.row_projection, pure.x_space.atom_ids)
    col_types = _fiber_types(f.y_space, maps.col_projection, pure.y_space.atom_ids)
    values = tuple(
        tuple(
            ExtendedValueLabel(
                pure.values[i][j],
                row_types[pure.x_space.atom_ids[i]],
                col_types[pure.y_space.atom_ids[j]],
            )
            for j in range(pure.n_cols)
        )
        for i in range(pure.n_rows)
    )
    return FiniteFunction(pure.x_space, pure.y_space, values)


@dataclass(frozen=True)
class CanonicalForm:
    """A complete isomorphism invariant: weights and extended values in a
    canonical arrangement. Two functions are isomorphic iff their canonical
    forms are equal."""

    x_weights: Tuple[Fraction, ...]
    y_weights: Tuple[Fraction, ...]
    values: Tuple[Tuple[ExtendedValueLabel, ...], ...]


def _weight_classes(weights):
    """Indices grouped by equal weight, groups ordered by ascending weight."""
    groups: Dict[Fraction, list] = {}
    for i, w in enumerate(weights):
        groups.setdefault(w, []).append(i)
    return [groups[w] for w in sorted(groups)]


def _row_orders(classes):
    """All row arrangements compatible with the ascending weight order."""
    for pieces in itertools.product(
        *(itertools.permutations(c) for c in classes)
    ):
        yield tuple(itertools.chain.from_iterable(pieces))


def _canonical_arrangement(epf: FiniteFunction):
    """Pick the weight-compatible arrangement minimizing the row-major word.

    Rows are constrained to ascending weight order; within equal weights all
    row permutations are tried. For each row order the columns are sorted by
    (weight, column label sequence), which minimizes the row-major word over
    column arrangements; the overall minimum over row orders is therefore the
    exact minimum over all weight-compatible arrangements and a complete
    invariant.
    """
    classes = _weight_classes(epf.x_space.weights)
    candidates = 1
    for c in classes:
        candidates *= factorial(len(c))
    if candidates > CANONICAL_SEARCH_LIMIT:
        raise BudgetExceeded(
            f"canonical search over {candidates} row arrangements exceeds "
            f"the limit {CANONICAL_SEARCH_LIMIT}",
            required=candidates,
            budget=CANONICAL_SEARCH_LIMIT,
        )

    values = epf.values
    y_weights = epf.y_space.weights
    n_cols = epf.n_cols
    key_matrix = tuple(tuple(label_key(v) for v in row) for row in values)

    best = None
    for row_order in _row_orders(classes):
        col_order = sorted(
            range(n_cols),
            key=lambda j: (y_weights[j], tuple(key_matrix[i][j] for i in row_order)),
        )
        word = tuple(
            key_matrix[i][j] for i in row_order for j in col_order
        )
        if best is None or word < best[0]:
            best = (word, row_order, tuple(col_order))

    _, row_order, col_order = best
    form = CanonicalForm(
        tuple(epf.x_space.weights[i] for i in row_order),
        tuple(epf.y_space.weights[j] for j in col_order),
        tuple(tuple(values[i][j] for j in col_order) for i in row_order),
    )
    return form, row_order, col_order


def canonical_form(f: FiniteFunction) -> CanonicalForm:
    """Canonical form of the extended pure factor of ``f``."""
    form, _, _ = _canonical_arrangement(extended_pure_factor(f))
    return form


@dataclass(frozen=True)
class IsomorphismWitness:
    """Weight-preserving bijections between purified atom sets carrying the
    extended pure factor of one function onto the other's."""

    row_map: Dict[Label, Label]
    col_map: Dict[Label, Label]


def isomorphic(f: FiniteFunction, g: FiniteFunction) -> Optional[IsomorphismWitness]:
    """A witness pair of bijections when the canonical forms match, else None.

    The witness is recovered by aligning canonical positions and verified by
    direct substitution over all atom pairs before returning.
    """
    ef = extended_pure_factor(f)
    eg = extended_pure_factor(g)
    form_f, rows_f, cols_f = _canonical_arrangement(ef)
    form_g, rows_g, cols_g = _canonical_arrangement(eg)
    if form_f != form_g:
        return None

    row_map = {
        ef.x_space.atom_ids[rows_f[p]]: eg.x_space.atom_ids[rows_g[p]]
        for p in range(len(rows_f))
    }
    col_map = {
        ef.y_space.atom_ids[cols_f[q]]: eg.y_space.atom_ids[cols_g[q]]
        for q in range(len(cols_f))
    }

    g_row_index = {aid: i for i, aid in enumerate(eg.x_space.atom_ids)}
    g_col_index = {aid: j for j, aid in enumerate(eg.y_space.atom_ids)}
    for i, x_id in enumerate(ef.x_space.atom_ids):
        gi = g_row_index[row_map[x_id]]
        if eg.x_space.weights[gi] != ef.x_space.weights[i]:
            raise AssertionError("canonical alignment lost a row weight")
        for j, y_id in enumerate(ef.y_space.atom_ids):
            gj = g_col_index[col_map[y_id]]
            if eg.values[gi][gj] != ef.values[i][j]:
                raise AssertionError("canonical alignment lost a cell value")
    return IsomorphismWitness(row_map, col_map)


@dataclass(frozen=True)
class TensorFunction:
    """A function of n variables: a flat row-major value tensor over the
    product of the axis atom sets."""

    axes: Tuple[FiniteMeasureSpace, ...]
    values: Tuple[Label, ...]

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))
        object.__setattr__(self, "values", tuple(self.values))
        if not self.axes:
            raise ValueError("a tensor function needs at least one axis")
        expected = 1
        for axis in self.axes:
            expected *= axis.size
        if len(self.values) != expected:
            raise ValueError(
                f"value tensor has {len(self.values)} entries, expected {expected}"
            )

    @property
    def arity(self) -> int:
        return len(self.axes)

    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(axis.size for axis in self.axes)

    @property
    def strides(self) -> Tuple[int, ...]:
        strides = [1] * self.arity
        for a in range(self.arity - 2, -1, -1):
            strides[a] = strides[a + 1] * self.axes[a + 1].size
        return tuple(strides)

    def value_at(self, indices: Tuple[int, ...]) -> Label:
        flat = 0
        for idx, stride in zip(indices, self.strides):
            flat += idx * stride
        return self.values[flat]

    @classmethod
    def from_matrix(cls, f: FiniteFunction) -> "TensorFunction":
        flat = tuple(v for row in f.values for v in row)
        return cls((f.x_space, f.y_space), flat)
