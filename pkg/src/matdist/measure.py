"""Finite probability spaces, conditional measures, and metric types.

All weights are exact ``fractions.Fraction`` values. Every equality decided
here (and in the modules built on top) is exact rational equality; floats are
rejected at construction time because they would make distribution equality
undecidable.

A one-variable function on a finite space is classified, up to
measure-preserving relabeling of its domain, by the masses of its values
together with the *metric type* of each conditional measure (the sorted
weight sequence of the fiber). That joint datum is the ``RokhlinInvariant``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Hashable, Iterable, Sequence, Tuple

from .errors import ZeroMassValue

Label = Hashable

_ONE = Fraction(1)


def _as_fraction(value) -> Fraction:
    if isinstance(value, float):
        raise TypeError(f"weights must be exact rationals, got float {value!r}")
    return Fraction(value)


@dataclass(frozen=True)
class FiniteMeasureSpace:
    """Ordered atoms with strictly positive rational weights summing to 1."""

    atom_ids: Tuple[Label, ...]
    weights: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "atom_ids", tuple(self.atom_ids))
        object.__setattr__(
            self, "weights", tuple(_as_fraction(w) for w in self.weights)
        )
        if not self.atom_ids:
            raise ValueError("a probability space needs at least one atom")
        if len(self.atom_ids) != len(self.weights):
            raise ValueError("one weight per atom required")
        if len(set(self.atom_ids)) != len(self.atom_ids):
            raise ValueError("atom ids must be pairwise distinct")
        for w in self.weights:
            if w <= 0:
                raise ValueError(f"atom weight {w} is not strictly positive")
        total = sum(self.weights)
        if total != _ONE:
            raise ValueError(f"weights sum to {total}, expected exactly 1")

    @classmethod
    def uniform(cls, atom_ids: Iterable[Label]) -> "FiniteMeasureSpace":
        ids = tuple(atom_ids)
        return cls(ids, tuple(Fraction(1, len(ids)) for _ in ids))

    @property
    def size(self) -> int:
        return len(self.atom_ids)

    def restrict(self, indices: Sequence[int]) -> "FiniteMeasureSpace":
        """The renormalized measure on a subset of atoms, order preserved."""
        total = sum(self.weights[i] for i in indices)
        return FiniteMeasureSpace(
            tuple(self.atom_ids[i] for i in indices),
            tuple(self.weights[i] / total for i in indices),
        )


@dataclass(frozen=True)
class MetricType:
    """Atom weights of a finite measure sorted non-increasingly.

    Labels are forgotten: two measures have the same metric type exactly when
    a weight-preserving bijection of atoms carries one to the other. The
    weights of a (here: always atomic, fully normalized) measure sum to 1.
    """

    weights: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "weights", tuple(_as_fraction(w) for w in self.weights)
        )
        for w in self.weights:
            if not 0 < w <= 1:
                raise ValueError(f"metric type weight {w} outside (0, 1]")
        if any(a < b for a, b in zip(self.weights, self.weights[1:])):
            raise ValueError("metric type weights must be non-increasing")
        if sum(self.weights) != _ONE:
            raise ValueError("metric type weights must sum to exactly 1")


def metric_type(space: FiniteMeasureSpace) -> MetricType:
    """Forget atom labels; keep the sorted weight sequence."""
    return MetricType(tuple(sorted(space.weights, reverse=True)))


@dataclass(frozen=True)
class OneVarFunction:
    """A function on a finite space, one value label per atom."""

    domain: FiniteMeasureSpace
    values: Tuple[Label, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.values) != self.domain.size:
            raise ValueError("one value per atom required")


def conditional_measure(f: OneVarFunction, z: Label) -> FiniteMeasureSpace:
    """The fiber {x : f(x) = z} with weights renormalized by its total mass."""
    indices = [i for i, v in enumerate(f.values) if v == z]
    if not indices:
        raise ZeroMassValue(f"value {z!r} has zero mass")
    return f.domain.restrict(indices)


@dataclass
class RokhlinInvariant:
    """Masses of the extended values (value label, metric type of its fiber).

    This is a complete invariant for one-variable functions on finite
    spaces: two functions are isomorphic (a weight-preserving bijection of
    atoms carrying one to the other) iff their invariants are equal as maps.
    """

    entries: Dict[Tuple[Label, MetricType], Fraction]

    def __post_init__(self):
        for key, mass in self.entries.items():
            if mass <= 0:
                raise ValueError(f"entry {key!r} has non-positive mass {mass}")
        if sum(self.entries.values()) != _ONE:
            raise ValueError("invariant masses must sum to exactly 1")


def rokhlin_invariant(f: OneVarFunction) -> RokhlinInvariant:
    entries: Dict[Tuple[Label, MetricType], Fraction] = {}
    seen = []
    for v in f.values:
        if v not in seen:
            seen.append(v)
    for z in seen:
        fiber_indices = [i for i, v in enumerate(f.values) if v == z]
        mass = sum(f.domain.weights[i] for i in fiber_indices)
        key = (z, metric_type(f.domain.restrict(fiber_indices)))
        entries[key] = entries.get(key, Fraction(0)) + mass
    return RokhlinInvariant(entries)


def rokhlin_isomorphic(f: OneVarFunction, g: OneVarFunction) -> bool:
    """Exact equality of the invariants decides isomorphism."""
    return rokhlin_invariant(f).entries == rokhlin_invariant(g).entries
