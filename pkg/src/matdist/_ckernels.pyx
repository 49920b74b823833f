# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: counter-based sampling and dense counting loops.

Must stay bit-identical to the pure-Python reference in _kernels_py.py;
the generator and threshold rule are documented there and in
docs/formats.md.
"""

from array import array

ctypedef unsigned long long u64

cdef u64 _GAMMA = 0x9E3779B97F4A7C15ULL


cdef inline u64 _mix64(u64 z) nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


def mix64(z):
    return _mix64(<u64> z)


def draw_u64(seed, stream, index):
    cdef u64 base = _mix64(<u64> seed + _GAMMA * (<u64> stream + 1))
    return _mix64(base + _GAMMA * (<u64> index + 1))


def sample_indices(seed, stream, count, thresholds):
    cdef u64 base = _mix64(<u64> seed + _GAMMA * (<u64> stream + 1))
    cdef Py_ssize_t n = count
    out_arr = array("I", bytes(4 * n))
    thr_arr = thresholds if isinstance(thresholds, array) else array("Q", thresholds)
    cdef unsigned int[::1] out = out_arr
    cdef u64[::1] thr = thr_arr
    cdef Py_ssize_t m = thr.shape[0]
    cdef Py_ssize_t i, j
    cdef u64 u
    with nogil:
        for i in range(n):
            u = _mix64(base + _GAMMA * (<u64> i + 1))
            j = 0
            while j < m and u >= thr[j]:
                j += 1
            out[i] = <unsigned int> j
    return out_arr


def fill_codes(row_atoms, col_atoms, code_matrix, n_cols_f):
    cdef unsigned int[::1] rows = row_atoms
    cdef unsigned int[::1] cols = col_atoms
    cdef int[::1] source = code_matrix
    cdef Py_ssize_t n_r = rows.shape[0]
    cdef Py_ssize_t n_c = cols.shape[0]
    cdef Py_ssize_t stride = n_cols_f
    out_arr = array("i", bytes(4 * n_r * n_c))
    cdef int[::1] out = out_arr
    cdef Py_ssize_t i, j, base, pos
    with nogil:
        pos = 0
        for i in range(n_r):
            base = <Py_ssize_t> rows[i] * stride
            for j in range(n_c):
                out[pos] = source[base + <Py_ssize_t> cols[j]]
                pos += 1
    return out_arr


def joint_counts(row_classes, col_classes, codes, n_row_classes, n_col_classes,
                 n_codes):
    cdef unsigned int[::1] rcls = row_classes
    cdef unsigned int[::1] ccls = col_classes
    cdef int[::1] vals = codes
    cdef Py_ssize_t n_r = rcls.shape[0]
    cdef Py_ssize_t n_c = ccls.shape[0]
    cdef Py_ssize_t stride_r = <Py_ssize_t> n_col_classes * <Py_ssize_t> n_codes
    cdef Py_ssize_t ncode = n_codes
    out_arr = array("q", bytes(8 * n_row_classes * n_col_classes * n_codes))
    cdef long long[::1] counts = out_arr
    cdef Py_ssize_t i, j, r_off, pos
    with nogil:
        pos = 0
        for i in range(n_r):
            r_off = <Py_ssize_t> rcls[i] * stride_r
            for j in range(n_c):
                counts[r_off + <Py_ssize_t> ccls[j] * ncode + <Py_ssize_t> vals[pos]] += 1
                pos += 1
    return out_arr
