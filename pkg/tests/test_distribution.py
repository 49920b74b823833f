"""Exact corner distributions, sampling, and the tensor generalization."""

import itertools
import random
from fractions import Fraction as F

import pytest

from matdist import (
    BudgetExceeded,
    FiniteFunction,
    FiniteMeasureSpace,
    SizeMismatch,
    TensorFunction,
    corner_distributions_equal,
    exact_corner_distribution,
    exact_tensor_corner,
    purify,
    sample_matrix,
    sample_tensor,
    total_variation,
)

import corpus


def brute_force_corner(f, k):
    """Independent oracle: enumerate atom tuples with Fraction products."""
    out = {}
    for xt in itertools.product(range(f.n_rows), repeat=k):
        for yt in itertools.product(range(f.n_cols), repeat=k):
            matrix = tuple(tuple(f.values[i][j] for j in yt) for i in xt)
            p = F(1)
            for i in xt:
                p *= f.x_space.weights[i]
            for j in yt:
                p *= f.y_space.weights[j]
            out[matrix] = out.get(matrix, F(0)) + p
    return out


# ---------------------------------------------------------------------------
# exact_corner_distribution


def test_xor_one_corner(xor):
    d = exact_corner_distribution(xor, 1)
    assert d.entries == {(("0",),): F(1, 2), (("1",),): F(1, 2)}


def test_xor_two_corner_matches_oracle(xor):
    d = exact_corner_distribution(xor, 2)
    # 16 atom 4-tuples; exactly (a,b,c,d) and (b,a,d,c) give [[0,1],[1,0]]
    assert d.entries[(("0", "1"), ("1", "0"))] == F(1, 8)
    assert d.entries == brute_force_corner(xor, 2)


def test_constant_corner(constant):
    for k in (1, 2, 3):
        d = exact_corner_distribution(constant, k)
        assert d.entries == {tuple((("0",) * k) for _ in range(k)): F(1)}


def test_random_functions_match_oracle():
    rng = random.Random(31)
    for _ in range(10):
        nx, ny = rng.randint(1, 3), rng.randint(1, 3)
        f = corpus.random_pure_function(rng, nx, ny)
        for k in (1, 2):
            assert exact_corner_distribution(f, k).entries == brute_force_corner(f, k)


def test_marginal_consistency():
    # restricting the k-corner to its top-left (k-1) block reproduces the
    # (k-1)-corner distribution exactly
    rng = random.Random(37)
    for _ in range(6):
        f = corpus.random_pure_function(rng, rng.randint(2, 3), rng.randint(2, 3))
        for k in (2, 3):
            dk = exact_corner_distribution(f, k)
            restricted = {}
            for m, p in dk.entries.items():
                sub = tuple(row[: k - 1] for row in m[: k - 1])
                restricted[sub] = restricted.get(sub, F(0)) + p
            assert restricted == exact_corner_distribution(f, k - 1).entries


def test_exchangeability_small():
    rng = random.Random(41)
    for _ in range(4):
        f = corpus.random_pure_function(rng, rng.randint(2, 3), rng.randint(2, 3))
        for k in (2, 3):
            d = exact_corner_distribution(f, k).entries
            for m, p in d.items():
                for sigma in itertools.permutations(range(k)):
                    for tau in itertools.permutations(range(k)):
                        permuted = tuple(
                            tuple(m[i][j] for j in tau) for i in sigma
                        )
                        assert d[permuted] == p


def test_budget_guard():
    f = corpus.xor_uniform()
    with pytest.raises(BudgetExceeded) as err:
        exact_corner_distribution(f, 20, budget=1000)
    assert err.value.required == 2**20 * 2**20


def test_purification_invariance_example():
    # D is unchanged by collapsing the duplicated columns of [[0,0],[1,1]]
    f = FiniteFunction(
        FiniteMeasureSpace.uniform(("a", "b")),
        FiniteMeasureSpace.uniform(("c", "d")),
        (("0", "0"), ("1", "1")),
    )
    pure, _ = purify(f)
    assert pure.n_cols == 1
    for k in (1, 2):
        assert corner_distributions_equal(f, pure, k)
        assert exact_corner_distribution(f, k).entries == brute_force_corner(f, k)


def test_equal_under_atom_permutation():
    rng = random.Random(43)
    f = corpus.random_pure_function(rng, 3, 2)
    g = corpus.permuted_copy(f, rng)
    for k in (1, 2, 3):
        assert corner_distributions_equal(f, g, k)


def test_distinct_marginals_detected(xor, constant):
    assert not corner_distributions_equal(xor, constant, 1)


# ---------------------------------------------------------------------------
# total_variation


def test_tv_identical_and_disjoint(xor, constant):
    d = exact_corner_distribution(xor, 1)
    assert total_variation(d, d) == 0
    e = exact_corner_distribution(constant, 1)
    # supports {0,1} vs {0}: tv = (1/2)(|1/2-1| + |1/2-0|) = 1/2
    assert total_variation(d, e) == F(1, 2)
    disjoint = exact_corner_distribution(
        FiniteFunction(
            FiniteMeasureSpace.uniform(("a",)),
            FiniteMeasureSpace.uniform(("c",)),
            (("9",),),
        ),
        1,
    )
    assert total_variation(d, disjoint) == 1


def test_tv_size_mismatch(xor):
    with pytest.raises(SizeMismatch):
        total_variation(
            exact_corner_distribution(xor, 1), exact_corner_distribution(xor, 2)
        )


# ---------------------------------------------------------------------------
# sample_matrix


def test_sample_constant_all_zero(constant):
    r = sample_matrix(constant, 5, 12345)
    assert all(v == "0" for row in r.values for v in row)


def test_sample_singleton_spaces():
    f = FiniteFunction(
        FiniteMeasureSpace.uniform(("a",)),
        FiniteMeasureSpace.uniform(("c",)),
        (("7",),),
    )
    r = sample_matrix(f, 3, 0)
    assert r.values == ((("7",) * 3),) * 3


def test_sample_cells_match_atoms(fstar):
    r = sample_matrix(fstar, 50, 777)
    for i in range(50):
        for j in range(50):
            assert r.label_at(i, j) == fstar.values[r.row_atoms[i]][r.col_atoms[j]]


def test_sample_deterministic_and_seed_sensitive(xor):
    a = sample_matrix(xor, 64, 5)
    b = sample_matrix(xor, 64, 5)
    assert a.codes == b.codes and a.row_atoms == b.row_atoms
    c = sample_matrix(xor, 64, 6)
    assert a.codes != c.codes


def test_sample_frequency_concentrates(xor):
    # exact 1-corner gives each label mass 1/2
    r = sample_matrix(xor, 1000, 2024)
    zeros = sum(1 for row in r.values for v in row if v == "0")
    assert 0.45 <= zeros / 1000**2 <= 0.55


def test_sample_seed_validation(xor):
    with pytest.raises(ValueError):
        sample_matrix(xor, 4, -1)
    with pytest.raises(ValueError):
        sample_matrix(xor, 4, 1 << 64)
    with pytest.raises(ValueError):
        sample_matrix(xor, 0, 1)


def test_block_frequencies_approach_exact_corner(fstar):
    # 10000 disjoint 2x2 blocks vs the exact 2-corner. Blocks must not share
    # rows or columns (blocks tiled from one matrix are correlated through
    # the shared atom draws), so each block is its own sampled matrix.
    k, blocks = 2, 10_000
    counts = {}
    for b in range(blocks):
        r = sample_matrix(fstar, k, 1_000_000 + b)
        m = tuple(tuple(r.label_at(i, j) for j in range(k)) for i in range(k))
        counts[m] = counts.get(m, 0) + 1
    empirical = {m: F(c, blocks) for m, c in counts.items()}
    exact = exact_corner_distribution(fstar, k).entries
    tv = sum(
        abs(empirical.get(m, F(0)) - exact.get(m, F(0)))
        for m in empirical.keys() | exact.keys()
    ) / 2
    assert tv <= F(1, 20)


# ---------------------------------------------------------------------------
# tensors


def parity3():
    axes = tuple(
        FiniteMeasureSpace.uniform((f"{a}0", f"{a}1")) for a in "pqr"
    )
    values = tuple(
        str((i + j + l) % 2)
        for i in range(2)
        for j in range(2)
        for l in range(2)
    )
    return TensorFunction(axes, values)


def test_tensor_matches_matrix_distribution(fstar):
    t = TensorFunction.from_matrix(fstar)
    for k in (1, 2):
        dt = exact_tensor_corner(t, k)
        dm = exact_corner_distribution(fstar, k)
        flattened = {
            tuple(v for row in m for v in row): p for m, p in dm.entries.items()
        }
        assert dt.entries == flattened


def test_tensor_parity_one_corner():
    d = exact_tensor_corner(parity3(), 1)
    assert d.entries == {("0",): F(1, 2), ("1",): F(1, 2)}


def test_tensor_constant():
    axes = tuple(FiniteMeasureSpace.uniform((f"{a}0", f"{a}1")) for a in "pqr")
    t = TensorFunction(axes, ("5",) * 8)
    d = exact_tensor_corner(t, 2)
    assert d.entries == {("5",) * 8: F(1)}


def test_tensor_budget():
    with pytest.raises(BudgetExceeded):
        exact_tensor_corner(parity3(), 10, budget=100)


def test_sample_tensor_matches_sample_matrix(fstar):
    t = TensorFunction.from_matrix(fstar)
    st = sample_tensor(t, 17, 99)
    sm = sample_matrix(fstar, 17, 99)
    for i in range(17):
        for j in range(17):
            assert st.label_at((i, j)) == sm.label_at(i, j)


def test_sample_tensor_constant():
    axes = tuple(FiniteMeasureSpace.uniform((f"{a}0", f"{a}1")) for a in "pqr")
    t = TensorFunction(axes, ("5",) * 8)
    s = sample_tensor(t, 4, 1)
    assert all(t.values[0] == s.labels[c] for c in s.codes)


def test_sample_tensor_parity_frequency():
    s = sample_tensor(parity3(), 120, 2025)
    ones = sum(1 for c in s.codes if s.labels[c] == "1")
    assert 0.45 <= ones / 120**3 <= 0.55
