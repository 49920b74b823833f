"""Congruence groups, injectivity collisions, and the simplicity decision.

The congruence group of a finite function is the group of weight-preserving
(row permutation, column permutation) pairs fixing every value cell. It is
always computed on the pure factor: permutations of merged duplicate atoms
act trivially on values and would only inflate the group. Triviality of the
group decides simplicity of the matrix law, and a non-identity element turns
directly into a pair of distinct sampled sequence pairs with identical value
matrices (a witness against injectivity of the sampling map).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import factorial
from typing import Dict, List, Optional, Tuple

from . import _kernels as kernels
from .distribution import (
    DEFAULT_BUDGET,
    STREAM_COLS,
    STREAM_ROWS,
    _check_seed,
    exact_corner_distribution,
    thresholds,
)
from .errors import BudgetExceeded
from .functions import FiniteFunction, is_pure, label_key, purify
from .measure import Label

# Cap on row-permutation candidates per congruence search (10!), matching the
# canonical-form search limit.
SEARCH_LIMIT = 3_628_800

# Stream ids 16..19 feed the collision search (two x/y sequence pairs per
# trial, indexed trial * length + position). Streams 0/1 stay reserved for
# matrix sampling.
_STREAM_X1, _STREAM_Y1, _STREAM_X2, _STREAM_Y2 = 16, 17, 18, 19

Perm = Tuple[int, ...]


@dataclass
class CongruenceGroup:
    """All symmetry pairs over purified atom indices, identity first."""

    elements: Tuple[Tuple[Perm, Perm], ...]
    order: int
    x_atom_ids: Tuple[Label, ...]
    y_atom_ids: Tuple[Label, ...]

    def __post_init__(self):
        if self.order != len(self.elements):
            raise ValueError("group order must match the element count")


def _weight_classes(weights) -> List[List[int]]:
    groups: Dict = {}
    for i, w in enumerate(weights):
        groups.setdefault(w, []).append(i)
    return [groups[w] for w in sorted(groups)]


def _candidate_row_perms(weights):
    """Permutations preserving every weight class, lexicographic within class."""
    classes = _weight_classes(weights)
    count = 1
    for c in classes:
        count *= factorial(len(c))
    if count > SEARCH_LIMIT:
        raise BudgetExceeded(
            f"{count} row permutation candidates exceed the search limit "
            f"{SEARCH_LIMIT}",
            required=count,
            budget=SEARCH_LIMIT,
        )
    n = sum(len(c) for c in classes)
    for pieces in itertools.product(*(itertools.permutations(c) for c in classes)):
        sigma = [0] * n
        for c, piece in zip(classes, pieces):
            for src, dst in zip(c, piece):
                sigma[src] = dst
        yield tuple(sigma)


def congruence_group(f: FiniteFunction) -> CongruenceGroup:
    """Enumerate the symmetry pairs of the pure factor of ``f``.

    Row permutations run over equal-weight classes only; each candidate
    forces a unique column permutation (columns of a pure function are
    pairwise distinct), which is then checked for weight preservation and
    verified cell by cell.
    """
    pure, _ = purify(f)
    values = pure.values
    n_rows, n_cols = pure.n_rows, pure.n_cols
    columns = {pure.column(j): j for j in range(n_cols)}
    y_weights = pure.y_space.weights

    elements = []
    for sigma in _candidate_row_perms(pure.x_space.weights):
        sigma_inv = [0] * n_rows
        for i, img in enumerate(sigma):
            sigma_inv[img] = i
        tau = [0] * n_cols
        ok = True
        for j in range(n_cols):
            moved = tuple(values[sigma_inv[l]][j] for l in range(n_rows))
            target = columns.get(moved)
            if target is None or y_weights[target] != y_weights[j]:
                ok = False
                break
            tau[j] = target
        if not ok:
            continue
        if all(
            values[sigma[i]][tau[j]] == values[i][j]
            for i in range(n_rows)
            for j in range(n_cols)
        ):
            elements.append((sigma, tuple(tau)))

    elements.sort()
    return CongruenceGroup(
        elements=tuple(elements),
        order=len(elements),
        x_atom_ids=pure.x_space.atom_ids,
        y_atom_ids=pure.y_space.atom_ids,
    )


def is_completely_pure(f: FiniteFunction) -> bool:
    """Pure with trivial congruence group."""
    return is_pure(f) and congruence_group(f).order == 1


@dataclass
class CollisionWitness:
    """Two distinct sequence pairs over purified atoms with one value matrix."""

    x_first: Tuple[Label, ...]
    y_first: Tuple[Label, ...]
    x_second: Tuple[Label, ...]
    y_second: Tuple[Label, ...]
    matrix: Tuple[Tuple[Label, ...], ...]

    def __post_init__(self):
        if (self.x_first, self.y_first) == (self.x_second, self.y_second):
            raise ValueError("witness sequence pairs must differ")


def _matrix_of(pure: FiniteFunction, xs, ys):
    return tuple(tuple(pure.values[i][j] for j in ys) for i in xs)


def _separator_table(values, n_rows, n_cols):
    """For each unordered pair of rows, the column atoms telling them apart."""
    table = {}
    for a in range(n_rows):
        for b in range(a + 1, n_rows):
            table[(a, b)] = frozenset(
                j for j in range(n_cols) if values[a][j] != values[b][j]
            )
    return table


def _is_typical(xs, ys, row_separators, col_separators):
    """Both slice maps injective: the sampled columns tell every pair of row
    atoms apart and vice versa (the finite form of a typical sequence pair).
    """
    y_set = set(ys)
    for seps in row_separators.values():
        if y_set.isdisjoint(seps):
            return False
    x_set = set(xs)
    for seps in col_separators.values():
        if x_set.isdisjoint(seps):
            return False
    return True


def collision_witness(
    f: FiniteFunction, length: int, trials: int, seed: int
) -> Optional[CollisionWitness]:
    """A verified collision of the finite sampling map, when one is found.

    With a non-trivial congruence group the witness is constructed by
    applying a non-identity symmetry pair to a sampled sequence pair (the
    first position is pinned to a moved atom so the images differ). With a
    trivial group, ``trials`` independent pairs of sequence pairs are
    searched; returning None is evidence of injectivity, not proof.

    Injectivity of the infinite sampling map is a mod-0 statement, so the
    search only considers typical sequence pairs, i.e. pairs whose slice
    maps are injective (the sampled columns separate all row atoms and vice
    versa). Without that restriction any function with a constant row would
    yield spurious collisions: two all-one-atom row sequences produce the
    same constant matrix while saying nothing about the congruence group.
    All sequences live on the pure factor's atoms.
    """
    if length < 1:
        raise ValueError("sequence length must be at least 1")
    _check_seed(seed)
    pure, _ = purify(f)
    group = congruence_group(pure)
    thr_x = thresholds(pure.x_space)
    thr_y = thresholds(pure.y_space)
    x_ids = pure.x_space.atom_ids
    y_ids = pure.y_space.atom_ids

    if group.order > 1:
        sigma, tau = group.elements[1]
        xs = list(kernels.sample_indices(seed, STREAM_ROWS, length, thr_x))
        ys = list(kernels.sample_indices(seed, STREAM_COLS, length, thr_y))
        moved_rows = [i for i in range(len(sigma)) if sigma[i] != i]
        if moved_rows:
            xs[0] = moved_rows[0]
        else:
            ys[0] = next(j for j in range(len(tau)) if tau[j] != j)
        xs2 = [sigma[i] for i in xs]
        ys2 = [tau[j] for j in ys]
        matrix = _matrix_of(pure, xs, ys)
        if matrix != _matrix_of(pure, xs2, ys2):
            raise AssertionError("symmetry pair failed to preserve the matrix")
        return CollisionWitness(
            tuple(x_ids[i] for i in xs),
            tuple(y_ids[j] for j in ys),
            tuple(x_ids[i] for i in xs2),
            tuple(y_ids[j] for j in ys2),
            matrix,
        )

    if trials < 1:
        return None
    total = trials * length
    xs1 = kernels.sample_indices(seed, _STREAM_X1, total, thr_x)
    ys1 = kernels.sample_indices(seed, _STREAM_Y1, total, thr_y)
    xs2 = kernels.sample_indices(seed, _STREAM_X2, total, thr_x)
    ys2 = kernels.sample_indices(seed, _STREAM_Y2, total, thr_y)
    values = pure.values
    row_separators = _separator_table(values, pure.n_rows, pure.n_cols)
    col_separators = _separator_table(
        tuple(pure.column(j) for j in range(pure.n_cols)),
        pure.n_cols,
        pure.n_rows,
    )
    for t in range(trials):
        lo, hi = t * length, (t + 1) * length
        a_x, a_y = xs1[lo:hi], ys1[lo:hi]
        b_x, b_y = xs2[lo:hi], ys2[lo:hi]
        if a_x == b_x and a_y == b_y:
            continue
        if not _is_typical(a_x, a_y, row_separators, col_separators):
            continue
        if not _is_typical(b_x, b_y, row_separators, col_separators):
            continue
        if all(
            values[a_x[i]][a_y[j]] == values[b_x[i]][b_y[j]]
            for i in range(length)
            for j in range(length)
        ):
            return CollisionWitness(
                tuple(x_ids[i] for i in a_x),
                tuple(y_ids[j] for j in a_y),
                tuple(x_ids[i] for i in b_x),
                tuple(y_ids[j] for j in b_y),
                _matrix_of(pure, a_x, a_y),
            )
    return None


def simplicity_decision(f: FiniteFunction) -> bool:
    """The matrix law of ``f`` is simple iff the pure factor has no symmetries.

    The law is unchanged by purification, so the decision is taken on the
    pure factor's congruence group.
    """
    return congruence_group(f).order == 1


INCONCLUSIVE_NOTE = (
    "no violation at finite corner size is inconclusive: a violation "
    "certifies non-simplicity, but symmetric functions can have every "
    "corner multiset class equal to a single permutation orbit"
)


@dataclass
class SimplicityViolation:
    """Two positive-probability corners sharing row and column multisets
    without being permutation-equivalent."""

    first: Tuple[Tuple[Label, ...], ...]
    second: Tuple[Tuple[Label, ...], ...]
    first_probability: object
    second_probability: object


@dataclass
class SimplicityDiagnostic:
    k: int
    groups_checked: int
    violations: Tuple[SimplicityViolation, ...]
    note: str = INCONCLUSIVE_NOTE

    @property
    def certifies_non_simplicity(self) -> bool:
        return bool(self.violations)


def _matrix_multisets(matrix):
    rows = tuple(
        sorted(matrix, key=lambda row: tuple(label_key(v) for v in row))
    )
    cols_list = list(zip(*matrix))
    cols = tuple(
        sorted(cols_list, key=lambda col: tuple(label_key(v) for v in col))
    )
    return rows, cols


def _orbit(matrix, k):
    out = set()
    for sigma in itertools.permutations(range(k)):
        rows = [matrix[i] for i in sigma]
        for tau in itertools.permutations(range(k)):
            out.add(tuple(tuple(row[j] for j in tau) for row in rows))
    return out


def empirical_simplicity_diagnostic(
    f: FiniteFunction, k: int, budget: int = DEFAULT_BUDGET
) -> SimplicityDiagnostic:
    """Group positive-probability corners by row/column multisets and check
    each group is a single permutation orbit. Violations certify
    non-simplicity; their absence proves nothing (see the note field)."""
    dist = exact_corner_distribution(f, k, budget)
    groups: Dict = {}
    for matrix in dist.entries:
        groups.setdefault(_matrix_multisets(matrix), []).append(matrix)

    violations = []
    for members in groups.values():
        orbit = _orbit(members[0], k)
        for other in members[1:]:
            if other not in orbit:
                violations.append(
                    SimplicityViolation(
                        first=members[0],
                        second=other,
                        first_probability=dist.entries[members[0]],
                        second_probability=dist.entries[other],
                    )
                )
    return SimplicityDiagnostic(
        k=k,
        groups_checked=len(groups),
        violations=tuple(violations),
    )
