"""Deterministic corpus of small pure functions shared across the suite.

Everything is driven by explicit `random.Random` instances so the corpus is
identical on every run. Weights are compositions p/d of a denominator
d <= 12, so every reduced weight denominator divides 12 or less.
"""

import random
from fractions import Fraction

from matdist import FiniteFunction, FiniteMeasureSpace, is_pure

CORPUS_SEED = 20250810

# (n_rows, n_cols) multiset of the corpus; neighbors are size-sorted so the
# cross pairs used by the acceptance suite compare like with like.
BASE_SIZES = (
    [(1, 1), (1, 2), (2, 1)]
    + [(2, 2)] * 8
    + [(2, 3)] * 6
    + [(3, 2)] * 6
    + [(3, 3)] * 15
    + [(3, 4)] * 7
    + [(4, 3)] * 7
    + [(4, 4)] * 8
)

ALPHABET = ("0", "1", "2", "3")


def random_weights(rng, n):
    d = rng.randint(max(2, n), 12)
    cuts = sorted(rng.sample(range(1, d), n - 1))
    return [Fraction(b - a, d) for a, b in zip([0] + cuts, cuts + [d])]


def random_space(rng, n, prefix):
    if n == 1:
        return FiniteMeasureSpace((f"{prefix}0",), (Fraction(1),))
    return FiniteMeasureSpace(
        tuple(f"{prefix}{i}" for i in range(n)), tuple(random_weights(rng, n))
    )


def random_pure_function(rng, nx, ny):
    """A pure function; labels start binary and widen if purity needs it."""
    x_space = random_space(rng, nx, "x")
    y_space = random_space(rng, ny, "y")
    if nx == 1 or ny == 1:
        # one axis degenerate: the other axis needs pairwise distinct labels
        letters = list(ALPHABET[: max(nx, ny)])
        rng.shuffle(letters)
        if nx == 1:
            values = (tuple(letters),)
        else:
            values = tuple((letter,) for letter in letters)
        return FiniteFunction(x_space, y_space, values)
    letters = 2
    for attempt in range(400):
        if attempt == 200:
            letters = 3
        alpha = ALPHABET[:letters]
        values = tuple(
            tuple(rng.choice(alpha) for _ in range(ny)) for _ in range(nx)
        )
        f = FiniteFunction(x_space, y_space, values)
        if is_pure(f):
            return f
    raise AssertionError(f"no pure {nx}x{ny} function found")


def base_corpus():
    rng = random.Random(CORPUS_SEED)
    return [random_pure_function(rng, nx, ny) for nx, ny in BASE_SIZES]


def permuted_copy(f, rng):
    """An isomorphic copy: atoms permuted and renamed on both axes."""
    sigma = list(range(f.n_rows))
    tau = list(range(f.n_cols))
    rng.shuffle(sigma)
    rng.shuffle(tau)
    x_space = FiniteMeasureSpace(
        tuple(f"p{f.x_space.atom_ids[i]}" for i in sigma),
        tuple(f.x_space.weights[i] for i in sigma),
    )
    y_space = FiniteMeasureSpace(
        tuple(f"p{f.y_space.atom_ids[j]}" for j in tau),
        tuple(f.y_space.weights[j] for j in tau),
    )
    values = tuple(tuple(f.values[i][j] for j in tau) for i in sigma)
    return FiniteFunction(x_space, y_space, values)


def perturbed_copy(f, rng):
    """A single-cell change that keeps the function pure (never isomorphic:
    the changed cell shifts a label mass, so already the 1-corners differ)."""
    cells = [(i, j) for i in range(f.n_rows) for j in range(f.n_cols)]
    rng.shuffle(cells)
    for i, j in cells:
        for new in ALPHABET:
            if new == f.values[i][j]:
                continue
            values = [list(row) for row in f.values]
            values[i][j] = new
            g = FiniteFunction(
                f.x_space, f.y_space, tuple(tuple(row) for row in values)
            )
            if is_pure(g):
                return g
    raise AssertionError("no pure single-cell perturbation found")


def inflated_copy(f, rng):
    """A non-pure function whose pure factor is isomorphic to ``f``: one atom
    split into two equal halves on each axis, duplicating its row/column."""
    i = rng.randrange(f.n_rows)
    j = rng.randrange(f.n_cols)
    x_ids = list(f.x_space.atom_ids) + [f"{f.x_space.atom_ids[i]}_dup"]
    x_weights = list(f.x_space.weights)
    x_weights[i] = f.x_space.weights[i] / 2
    x_weights.append(f.x_space.weights[i] / 2)
    y_ids = list(f.y_space.atom_ids) + [f"{f.y_space.atom_ids[j]}_dup"]
    y_weights = list(f.y_space.weights)
    y_weights[j] = f.y_space.weights[j] / 2
    y_weights.append(f.y_space.weights[j] / 2)
    rows = [list(row) + [row[j]] for row in f.values]
    rows.append(list(rows[i]))
    return FiniteFunction(
        FiniteMeasureSpace(tuple(x_ids), tuple(x_weights)),
        FiniteMeasureSpace(tuple(y_ids), tuple(y_weights)),
        tuple(tuple(row) for row in rows),
    )


# Named fixtures used throughout: the uniform XOR square (congruence group of
# order two) and a completely pure 2x2 with unbalanced weights.
def xor_uniform():
    return FiniteFunction(
        FiniteMeasureSpace.uniform(("a", "b")),
        FiniteMeasureSpace.uniform(("c", "d")),
        (("0", "1"), ("1", "0")),
    )


def completely_pure_fixture():
    return FiniteFunction(
        FiniteMeasureSpace(("a", "b"), (Fraction(2, 3), Fraction(1, 3))),
        FiniteMeasureSpace(("c", "d"), (Fraction(3, 4), Fraction(1, 4))),
        (("0", "1"), ("1", "0")),
    )


def constant_uniform():
    return FiniteFunction(
        FiniteMeasureSpace.uniform(("a", "b")),
        FiniteMeasureSpace.uniform(("c", "d")),
        (("0", "0"), ("0", "0")),
    )
