"""Longest-common-subsequence length kernels over integer-coded token arrays.

Two interchangeable implementations:

* ``lcs_length_jit``: scalar two-row dynamic program compiled with numba.
* ``lcs_length_numpy``: row-vectorised form. Within one row the recurrence
  ``cur[j] = max(prev[j], cur[j-1], prev[j-1] + match[j])`` is a running
  maximum of ``max(prev[j], prev[j-1] + match[j])`` because LCS rows are
  non-decreasing, so each row is one ``np.maximum.accumulate``.

``lcs_length`` picks the JIT kernel unless JIT is disabled.
"""

from __future__ import annotations

import numpy as np

from .._jit import JIT_ENABLED, njit


@njit(cache=True)
def _lcs_rows(a, b):
    # b is the shorter sequence; two rows of len(b)+1
    m = b.shape[0]
    prev = np.zeros(m + 1, dtype=np.int64)
    cur = np.zeros(m + 1, dtype=np.int64)
    for i in range(a.shape[0]):
        ai = a[i]
        for j in range(m):
            if ai == b[j]:
                cur[j + 1] = prev[j] + 1
            elif prev[j + 1] >= cur[j]:
                cur[j + 1] = prev[j + 1]
            else:
                cur[j + 1] = cur[j]
        tmp = prev
        prev = cur
        cur = tmp
    return prev[m]


def lcs_length_jit(a: np.ndarray, b: np.ndarray) -> int:
    a = np.ascontiguousarray(a, dtype=np.int64)
    b = np.ascontiguousarray(b, dtype=np.int64)
    if a.shape[0] == 0 or b.shape[0] == 0:
        return 0
    if a.shape[0] < b.shape[0]:
        a, b = b, a
    return int(_lcs_rows(a, b))


def lcs_length_numpy(a: np.ndarray, b: np.ndarray) -> int:
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape[0] == 0 or b.shape[0] == 0:
        return 0
    if a.shape[0] < b.shape[0]:
        a, b = b, a
    m = b.shape[0]
    prev = np.zeros(m + 1, dtype=np.int64)
    cur = np.zeros(m + 1, dtype=np.int64)
    cand = np.empty(m, dtype=np.int64)
    for ai in a:
        np.add(prev[:-1], b == ai, out=cand)
        np.maximum(cand, prev[1:], out=cand)
        np.maximum.accumulate(cand, out=cur[1:])
        prev, cur = cur, prev
    return int(prev[m])


lcs_length = lcs_length_jit if JIT_ENABLED else lcs_length_numpy
BACKEND = "numba" if JIT_ENABLED else "numpy"
