"""Rebuilding a finite function from one sampled matrix.

Length-n row prefixes of a sampled matrix partition its rows into classes
whose empirical frequencies estimate the purified row measure; likewise for
columns. The class-pair cell statistics estimate the joint mass, and the
within-cell value distribution recovers the function itself: for numeric
values the density (within-cell mean) form, for arbitrary labels the
conditional frequency / majority form. With enough depth and samples the
result is isomorphic to the pure factor of the generating function, which is
checked end-to-end by ``reconstruction_check``.
"""

from __future__ import annotations

import itertools
from array import array
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple

from . import _kernels as kernels
from .distribution import SampledMatrix, _tv, sample_matrix
from .errors import AmbiguousCell, DepthExceedsMatrix, EmptyCell
from .functions import FiniteFunction, label_key, purify
from .measure import FiniteMeasureSpace, Label

Prefix = Tuple[Label, ...]

DEFAULT_MIN_CLASS_MASS = Fraction(1, 100)


def _check_depth(r: SampledMatrix, depth: int, limit: int) -> None:
    if depth < 1:
        raise ValueError("prefix depth must be at least 1")
    if depth > limit:
        raise DepthExceedsMatrix(
            f"depth {depth} exceeds the sampled matrix extent {limit}"
        )


def _row_prefix_codes(r: SampledMatrix, depth: int):
    C = r.n_cols
    codes = r.codes
    return [tuple(codes[i * C : i * C + depth]) for i in range(r.n_rows)]


def _col_prefix_codes(r: SampledMatrix, depth: int):
    C = r.n_cols
    codes = r.codes
    return [
        tuple(codes[l * C + j] for l in range(depth)) for j in range(r.n_cols)
    ]


def _decode(prefix_codes, labels) -> Prefix:
    return tuple(labels[c] for c in prefix_codes)


def _frequency_map(prefix_codes, labels) -> Dict[Prefix, Fraction]:
    counts: Dict[Tuple[int, ...], int] = {}
    for p in prefix_codes:
        counts[p] = counts.get(p, 0) + 1
    n = len(prefix_codes)
    return {_decode(p, labels): Fraction(c, n) for p, c in counts.items()}


def empirical_row_measure(r: SampledMatrix, depth: int) -> Dict[Prefix, Fraction]:
    """Empirical distribution of the length-``depth`` row prefixes."""
    _check_depth(r, depth, r.n_cols)
    return _frequency_map(_row_prefix_codes(r, depth), r.labels)


def empirical_col_measure(r: SampledMatrix, depth: int) -> Dict[Prefix, Fraction]:
    """Empirical distribution of the length-``depth`` column prefixes."""
    _check_depth(r, depth, r.n_rows)
    return _frequency_map(_col_prefix_codes(r, depth), r.labels)


@dataclass
class JointCell:
    """Statistics of one (row class, column class) pair.

    ``mass`` is the fraction of matrix cells incident to the pair;
    ``frequencies`` the conditional value distribution over those cells;
    ``density`` the within-cell mean, present only for numeric (int or
    Fraction) labels. On {0,1}-valued matrices density equals the frequency
    of label 1 exactly.
    """

    mass: Fraction
    frequencies: Dict[Label, Fraction]
    density: Optional[Fraction]


@dataclass
class EmpiricalModel:
    """Row/column class frequencies plus the joint cell statistics."""

    depth: int
    row_classes: Dict[Prefix, Fraction]
    col_classes: Dict[Prefix, Fraction]
    joint: Dict[Tuple[Prefix, Prefix], JointCell]


def _classify(prefix_codes):
    """First-occurrence class index per position plus the class list."""
    class_of: Dict[Tuple[int, ...], int] = {}
    order = []
    assignment = array("I", bytes(4 * len(prefix_codes)))
    for pos, p in enumerate(prefix_codes):
        c = class_of.get(p)
        if c is None:
            c = len(order)
            class_of[p] = c
            order.append(p)
        assignment[pos] = c
    return assignment, order


def _joint_cells(r: SampledMatrix, depth: int):
    row_codes = _row_prefix_codes(r, depth)
    col_codes = _col_prefix_codes(r, depth)
    row_assign, row_order = _classify(row_codes)
    col_assign, col_order = _classify(col_codes)
    n_codes = len(r.labels)
    counts = kernels.joint_counts(
        row_assign, col_assign, r.codes, len(row_order), len(col_order), n_codes
    )
    return row_assign, row_order, col_assign, col_order, counts


def empirical_joint(
    r: SampledMatrix, depth: int
) -> Dict[Tuple[Prefix, Prefix], JointCell]:
    """Joint statistics for every (row class, column class) pair."""
    _check_depth(r, depth, min(r.n_rows, r.n_cols))
    _, row_order, _, col_order, counts = _joint_cells(r, depth)

    labels = r.labels
    n_codes = len(labels)
    numeric = all(isinstance(v, (int, Fraction)) for v in labels)
    total_cells = r.n_rows * r.n_cols
    joint: Dict[Tuple[Prefix, Prefix], JointCell] = {}
    for a, pa in enumerate(row_order):
        for b, pb in enumerate(col_order):
            base = (a * len(col_order) + b) * n_codes
            cell_counts = counts[base : base + n_codes]
            incident = sum(cell_counts)
            if incident == 0:
                raise EmptyCell(
                    f"class pair ({_decode(pa, labels)!r}, {_decode(pb, labels)!r}) "
                    "has no incident cells"
                )
            freqs = {
                labels[code]: Fraction(c, incident)
                for code, c in enumerate(cell_counts)
                if c
            }
            density = None
            if numeric:
                weighted = sum(
                    Fraction(labels[code]) * c for code, c in enumerate(cell_counts)
                )
                density = Fraction(weighted, incident)
            joint[(_decode(pa, labels), _decode(pb, labels))] = JointCell(
                mass=Fraction(incident, total_cells),
                frequencies=freqs,
                density=density,
            )
    return joint


def empirical_model(r: SampledMatrix, depth: int) -> EmpiricalModel:
    return EmpiricalModel(
        depth=depth,
        row_classes=empirical_row_measure(r, depth),
        col_classes=empirical_col_measure(r, depth),
        joint=empirical_joint(r, depth),
    )


def reconstruct(
    r: SampledMatrix,
    depth: int,
    min_class_mass: Fraction = DEFAULT_MIN_CLASS_MASS,
) -> FiniteFunction:
    """The finite function with prefix classes as atoms and majority values.

    Cells between classes that both carry mass >= ``min_class_mass`` must be
    value-homogeneous at rate >= 1 - ``min_class_mass``; otherwise the depth
    failed to separate classes and AmbiguousCell is raised (increase depth).
    """
    _check_depth(r, depth, min(r.n_rows, r.n_cols))
    min_class_mass = Fraction(min_class_mass)
    row_assign, row_order, col_assign, col_order, counts = _joint_cells(r, depth)
    row_sizes = [0] * len(row_order)
    for c in row_assign:
        row_sizes[c] += 1
    col_sizes = [0] * len(col_order)
    for c in col_assign:
        col_sizes[c] += 1

    labels = r.labels
    n_codes = len(labels)
    x_space = FiniteMeasureSpace(
        tuple(_decode(p, labels) for p in row_order),
        tuple(Fraction(s, r.n_rows) for s in row_sizes),
    )
    y_space = FiniteMeasureSpace(
        tuple(_decode(p, labels) for p in col_order),
        tuple(Fraction(s, r.n_cols) for s in col_sizes),
    )

    threshold = 1 - min_class_mass
    rows = []
    for a in range(len(row_order)):
        row = []
        for b in range(len(col_order)):
            base = (a * len(col_order) + b) * n_codes
            cell_counts = counts[base : base + n_codes]
            incident = sum(cell_counts)
            if incident == 0:
                raise EmptyCell(
                    f"class pair ({x_space.atom_ids[a]!r}, {y_space.atom_ids[b]!r}) "
                    "has no incident cells"
                )
            best_code = max(
                range(n_codes),
                key=lambda c: (cell_counts[c], label_key(labels[c])),
            )
            if (
                x_space.weights[a] >= min_class_mass
                and y_space.weights[b] >= min_class_mass
                and Fraction(cell_counts[best_code], incident) < threshold
            ):
                raise AmbiguousCell(
                    f"majority rate {Fraction(cell_counts[best_code], incident)} "
                    f"below {threshold} for class pair "
                    f"({x_space.atom_ids[a]!r}, {y_space.atom_ids[b]!r}); "
                    "increase the prefix depth"
                )
            row.append(labels[best_code])
        rows.append(tuple(row))
    return FiniteFunction(x_space, y_space, tuple(rows))


@dataclass
class ReconstructionReport:
    reconstructed: FiniteFunction
    isomorphic_to_source: bool
    weight_tv: Fraction
    depth_used: int


def _match_to_target(rec: FiniteFunction, target: FiniteFunction):
    """Best bijection of atoms carrying rec's values onto target's.

    Returns the smallest achieved weight total-variation (max over the two
    axes) across all value-exact bijection pairs, or None when none exists.
    """
    if rec.n_rows != target.n_rows or rec.n_cols != target.n_cols:
        return None
    best = None
    for sigma in itertools.permutations(range(target.n_rows)):
        for tau in itertools.permutations(range(target.n_cols)):
            ok = all(
                rec.values[i][j] == target.values[sigma[i]][tau[j]]
                for i in range(rec.n_rows)
                for j in range(rec.n_cols)
            )
            if not ok:
                continue
            tv_rows = (
                sum(
                    abs(rec.x_space.weights[i] - target.x_space.weights[sigma[i]])
                    for i in range(rec.n_rows)
                )
                / 2
            )
            tv_cols = (
                sum(
                    abs(rec.y_space.weights[j] - target.y_space.weights[tau[j]])
                    for j in range(rec.n_cols)
                )
                / 2
            )
            tv = max(tv_rows, tv_cols)
            if best is None or tv < best:
                best = tv
    return best


def reconstruction_check(
    f: FiniteFunction,
    n_samples: int,
    depth: int,
    seed: int,
    tol: Fraction = Fraction(1, 20),
    min_class_mass: Fraction = DEFAULT_MIN_CLASS_MASS,
) -> ReconstructionReport:
    """Sample, reconstruct, and match against the pure factor of ``f``.

    Values must match exactly under some bijection of classes to purified
    atoms; weights must agree within total variation ``tol``.
    """
    r = sample_matrix(f, n_samples, seed)
    rec = reconstruct(r, depth, min_class_mass)
    target, _ = purify(f)
    tv = _match_to_target(rec, target)
    if tv is None:
        return ReconstructionReport(rec, False, Fraction(1), depth)
    return ReconstructionReport(rec, tv <= Fraction(tol), tv, depth)


def definetti_diagnostic(r: SampledMatrix, depth: int) -> Fraction:
    """Independence check of consecutive row pairs.

    Total variation between the empirical joint of (row 2i, row 2i+1) prefix
    pairs and the product of the all-rows prefix marginal with itself. Rows
    produced by i.i.d. sampling give a small statistic; duplicated or
    otherwise dependent rows push it away from zero.
    """
    _check_depth(r, depth, r.n_cols)
    if r.n_rows % 2 != 0:
        raise ValueError("the pair diagnostic needs an even number of rows")
    prefixes = _row_prefix_codes(r, depth)
    n = len(prefixes)
    marginal: Dict[Tuple[int, ...], Fraction] = {}
    for p in prefixes:
        marginal[p] = marginal.get(p, 0) + Fraction(1, n)
    pairs: Dict[Tuple, Fraction] = {}
    for i in range(0, n, 2):
        key = (prefixes[i], prefixes[i + 1])
        pairs[key] = pairs.get(key, 0) + Fraction(2, n)
    product = {
        (p, q): marginal[p] * marginal[q]
        for p in marginal
        for q in marginal
    }
    return _tv(pairs, product)
