"""Hot inner loops on letter arrays.

Words in a free group are stored as contiguous ``int32`` arrays of nonzero
signed letters: generator ``i`` (0-based) is ``i + 1``, its inverse is
``-(i + 1)``.  Everything here is branchy element-at-a-time work that numba
compiles well; the same function bodies also run as plain Python over numpy
arrays, which is the fallback path.

Selection: by default the kernels are compiled with ``numba.njit``.  Set the
environment variable ``TWISTGROWTH_NO_NUMBA=1`` (or run without numba
installed) to use the pure-Python/numpy fallback.  Both variants are kept
importable (``free_reduce`` / ``free_reduce_py`` etc.) so the benchmark can
compare them directly.
"""

import os

import numpy as np

_EMPTY = np.empty(0, dtype=np.int32)


def _want_numba():
    flag = os.environ.get("TWISTGROWTH_NO_NUMBA", "").strip().lower()
    return flag not in ("1", "true", "yes")


def free_reduce_py(letters):
    """Freely reduce a letter sequence (stack cancellation of x x^-1)."""
    n = letters.shape[0]
    out = np.empty(n, dtype=np.int32)
    top = 0
    for i in range(n):
        v = letters[i]
        if top > 0 and out[top - 1] == -v:
            top -= 1
        else:
            out[top] = v
            top += 1
    return out[:top].copy()


def cancel_len_py(a, b):
    """Number of letters cancelling at the junction of reduced words a, b."""
    na = a.shape[0]
    nb = b.shape[0]
    k = 0
    m = na if na < nb else nb
    while k < m and a[na - 1 - k] == -b[k]:
        k += 1
    return k


def concat_cancel_py(a, b):
    """Reduced product of two already-reduced words."""
    na = a.shape[0]
    nb = b.shape[0]
    k = 0
    m = na if na < nb else nb
    while k < m and a[na - 1 - k] == -b[k]:
        k += 1
    out = np.empty(na + nb - 2 * k, dtype=np.int32)
    out[: na - k] = a[: na - k]
    out[na - k :] = b[k:]
    return out


def substitute_py(word, flat, starts, lens):
    """Apply a letter substitution and reduce.

    ``flat``/``starts``/``lens`` hold the image of generator value ``v``
    (1-based) at row ``v``; the image of ``-v`` is the reversed negation.
    """
    cap = 0
    for i in range(word.shape[0]):
        r = word[i]
        if r < 0:
            r = -r
        cap += lens[r]
    out = np.empty(cap, dtype=np.int32)
    top = 0
    for i in range(word.shape[0]):
        v = word[i]
        if v > 0:
            s = starts[v]
            for j in range(lens[v]):
                x = flat[s + j]
                if top > 0 and out[top - 1] == -x:
                    top -= 1
                else:
                    out[top] = x
                    top += 1
        else:
            s = starts[-v]
            for j in range(lens[-v] - 1, -1, -1):
                x = -flat[s + j]
                if top > 0 and out[top - 1] == -x:
                    top -= 1
                else:
                    out[top] = x
                    top += 1
    return out[:top].copy()


def min_rotation_py(keys):
    """Booth's algorithm: start index of the least rotation of ``keys``."""
    n = keys.shape[0]
    if n == 0:
        return 0
    f = np.full(2 * n, -1, dtype=np.int64)
    k = 0
    for j in range(1, 2 * n):
        sj = keys[j % n]
        i = f[j - k - 1]
        while i != -1 and sj != keys[(k + i + 1) % n]:
            if sj < keys[(k + i + 1) % n]:
                k = j - i - 1
            i = f[i]
        if sj != keys[(k + i + 1) % n]:
            if sj < keys[(k + i + 1) % n]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return k


def append_cancel_py(buf, blen, w):
    """Append reduced word ``w`` to the reduced prefix ``buf[:blen]``.

    Cancels at the junction in place; returns the new logical length.
    ``buf`` must have room for ``blen + len(w)`` letters.
    """
    nw = w.shape[0]
    j = 0
    while j < nw and blen > 0 and buf[blen - 1] == -w[j]:
        blen -= 1
        j += 1
    for i in range(j, nw):
        buf[blen] = w[i]
        blen += 1
    return blen


HAS_NUMBA = False
USING_NUMBA = False

if _want_numba():
    try:
        from numba import njit

        HAS_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        njit = None
    if HAS_NUMBA:
        _jit = njit(cache=True, nogil=True)
        free_reduce = _jit(free_reduce_py)
        cancel_len = _jit(cancel_len_py)
        concat_cancel = _jit(concat_cancel_py)
        substitute = _jit(substitute_py)
        min_rotation = _jit(min_rotation_py)
        append_cancel = _jit(append_cancel_py)
        USING_NUMBA = True

if not USING_NUMBA:
    free_reduce = free_reduce_py
    cancel_len = cancel_len_py
    concat_cancel = concat_cancel_py
    substitute = substitute_py
    min_rotation = min_rotation_py
    append_cancel = append_cancel_py


def warmup():
    """Force-compile every kernel (keeps JIT pauses out of timed paths)."""
    a = np.array([1, 2, -2, 3], dtype=np.int32)
    b = np.array([-3, 1], dtype=np.int32)
    free_reduce(a)
    cancel_len(a, b)
    concat_cancel(a, b)
    flat = np.array([1, 2], dtype=np.int32)
    starts = np.array([0, 0, 1, 1], dtype=np.int64)
    lens = np.array([0, 1, 1, 0], dtype=np.int64)
    substitute(a[:2], flat, starts, lens)
    min_rotation(a)
    buf = np.empty(8, dtype=np.int32)
    buf[:2] = a[:2]
    append_cancel(buf, 2, b)
