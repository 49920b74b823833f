"""Pure-Python kernels: the fallback backend.

These functions are the reference semantics for the compiled backend in
``_ckernels.pyx``; both must produce bit-identical outputs. The generator is
counter-based: draw i of stream s under seed k is

    base(k, s) = mix64(k + GAMMA * (s + 1))        (mod 2**64)
    draw(k, s, i) = mix64(base(k, s) + GAMMA * (i + 1))

where mix64 is the 64-bit finalizer

    z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9
    z ^= z >> 27;  z *= 0x94D049BB133111EB
    z ^= z >> 31

and GAMMA = 0x9E3779B97F4A7C15. Atom selection compares a draw against the
precomputed integer thresholds floor(cum_weight * 2**64); see
docs/formats.md. The algorithm is part of the on-disk fixture format and
must never change silently.
"""

from array import array

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def draw_u64(seed: int, stream: int, index: int) -> int:
    base = mix64((seed + GAMMA * (stream + 1)) & MASK64)
    return mix64((base + GAMMA * (index + 1)) & MASK64)


def sample_indices(seed: int, stream: int, count: int, thresholds) -> array:
    """Counter-based i.i.d. atom indices.

    ``thresholds`` holds floor(cum_k * 2**64) for all but the last atom;
    draw u selects the first atom index whose threshold exceeds u.
    """
    out = array("I", bytes(4 * count))
    base = mix64((seed + GAMMA * (stream + 1)) & MASK64)
    thr = list(thresholds)
    m = len(thr)
    gamma, mask, m1, m2 = GAMMA, MASK64, _M1, _M2
    for i in range(count):
        z = (base + gamma * (i + 1)) & mask
        z = ((z ^ (z >> 30)) * m1) & mask
        z = ((z ^ (z >> 27)) * m2) & mask
        u = z ^ (z >> 31)
        j = 0
        while j < m and u >= thr[j]:
            j += 1
        out[i] = j
    return out


def fill_codes(row_atoms, col_atoms, code_matrix, n_cols_f: int) -> array:
    """Dense value-code matrix: out[i*C + j] = code_matrix[row_atoms[i]*n_cols_f + col_atoms[j]].

    Rows repeat per atom, so each source atom's row is restricted to the
    sampled columns once and then block-copied.
    """
    n_r = len(row_atoms)
    n_c = len(col_atoms)
    template = {}
    for a in set(row_atoms):
        base = a * n_cols_f
        template[a] = array("i", [code_matrix[base + c] for c in col_atoms])
    out = array("i", bytes(4 * n_r * n_c))
    for i in range(n_r):
        out[i * n_c : (i + 1) * n_c] = template[row_atoms[i]]
    return out


def joint_counts(row_classes, col_classes, codes, n_row_classes: int,
                 n_col_classes: int, n_codes: int) -> array:
    """Count value codes per (row class, column class) over all cells.

    Returns a flat int64 tensor indexed [row_class][col_class][code].
    """
    counts = [0] * (n_row_classes * n_col_classes * n_codes)
    stride_r = n_col_classes * n_codes
    n_c = len(col_classes)
    col_off = [c * n_codes for c in col_classes]
    pos = 0
    for i in range(len(row_classes)):
        r_off = row_classes[i] * stride_r
        row = codes[pos : pos + n_c]
        pos += n_c
        for off, code in zip(col_off, row):
            counts[r_off + off + code] += 1
    return array("q", counts)
