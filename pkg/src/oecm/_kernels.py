"""Hot inner loops, each with a numba and a pure-numpy implementation.

The public names at the bottom of this module are bound to the numba
versions unless numba is missing or ``OECM_DISABLE_NUMBA`` is set to a
truthy value before import. Both implementations stay importable as
``<name>_numpy`` / ``<name>_numba`` so tests and the benchmark can compare
them directly.
"""

import os
import warnings

import numpy as np

try:
    import numba
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda func: func


def _env_disabled() -> bool:
    return os.environ.get("OECM_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}


USE_NUMBA = HAVE_NUMBA and not _env_disabled()
if not HAVE_NUMBA and not _env_disabled():  # pragma: no cover
    warnings.warn("numba not importable; using the pure-numpy kernels")


# --- positive pair differences of a sorted vector --------------------------

def pair_gaps_numpy(levels):
    n = levels.shape[0]
    if n < 2:
        return np.empty(0)
    lo, hi = np.triu_indices(n, 1)
    return levels[hi] - levels[lo]


@njit(cache=True)
def pair_gaps_numba(levels):
    n = levels.shape[0]
    out = np.empty(n * (n - 1) // 2)
    pos = 0
    for a in range(n):
        for b in range(a + 1, n):
            out[pos] = levels[b] - levels[a]
            pos += 1
    return out


# --- merge runs of sorted values closer than tol ----------------------------

def merge_sorted_numpy(values, tol):
    """Return (cluster means, cluster start offsets) for sorted ``values``."""
    if values.shape[0] == 0:
        return np.empty(0), np.empty(0, dtype=np.int64)
    starts = np.concatenate(([True], np.diff(values) >= tol))
    offsets = np.flatnonzero(starts).astype(np.int64)
    sums = np.add.reduceat(values, offsets)
    counts = np.diff(np.append(offsets, values.shape[0]))
    return sums / counts, offsets


@njit(cache=True)
def merge_sorted_numba(values, tol):
    n = values.shape[0]
    means = np.empty(n)
    offsets = np.empty(n, dtype=np.int64)
    if n == 0:
        return means, offsets
    k = 0
    offsets[0] = 0
    acc = values[0]
    cnt = 1
    for i in range(1, n):
        if values[i] - values[i - 1] >= tol:
            means[k] = acc / cnt
            k += 1
            offsets[k] = i
            acc = 0.0
            cnt = 0
        acc += values[i]
        cnt += 1
    means[k] = acc / cnt
    return means[: k + 1].copy(), offsets[: k + 1].copy()


# --- largest number of sorted values inside a closed window of width eps ---

def max_window_count_numpy(sorted_values, eps):
    if sorted_values.shape[0] == 0:
        return 0
    ends = np.searchsorted(sorted_values, sorted_values + eps, side="right")
    return int(np.max(ends - np.arange(sorted_values.shape[0])))


@njit(cache=True)
def max_window_count_numba(sorted_values, eps):
    n = sorted_values.shape[0]
    best = 0
    j = 0
    for i in range(n):
        if j < i:
            j = i
        while j < n and sorted_values[j] <= sorted_values[i] + eps:
            j += 1
        if j - i > best:
            best = j - i
    return best


# --- per-label sums of the columns of a weight matrix ----------------------

def label_sums_numpy(weights, labels, n_labels):
    indicator = np.zeros((weights.shape[1], n_labels))
    indicator[np.arange(weights.shape[1]), labels] = 1.0
    return weights @ indicator


@njit(cache=True)
def label_sums_numba(weights, labels, n_labels):
    rows, cols = weights.shape
    out = np.zeros((rows, n_labels))
    for t in range(rows):
        for k in range(cols):
            out[t, labels[k]] += weights[t, k]
    return out


# --- cumulative trapezoid along axis 0, starting at 0 ----------------------

def cumulative_trapezoid_numpy(values, times):
    out = np.zeros(values.shape)
    steps = np.diff(times).reshape((-1,) + (1,) * (values.ndim - 1))
    out[1:] = np.cumsum(0.5 * steps * (values[1:] + values[:-1]), axis=0)
    return out


@njit(cache=True)
def _cumtrapz_2d(values, times):
    n, m = values.shape
    out = np.zeros((n, m))
    for i in range(1, n):
        h = 0.5 * (times[i] - times[i - 1])
        for j in range(m):
            out[i, j] = out[i - 1, j] + h * (values[i, j] + values[i - 1, j])
    return out


def cumulative_trapezoid_numba(values, times):
    values = np.ascontiguousarray(values, dtype=np.float64)
    flat = values.reshape(values.shape[0], -1)
    return _cumtrapz_2d(flat, np.ascontiguousarray(times, dtype=np.float64)).reshape(values.shape)


# --- row-wise Shannon entropy in nats, 0 log 0 = 0 --------------------------

def entropy_rows_numpy(probs):
    safe = np.where(probs > 0.0, probs, 1.0)
    return -np.sum(np.where(probs > 0.0, probs * np.log(safe), 0.0), axis=-1)


@njit(cache=True)
def entropy_rows_numba(probs):
    rows, cols = probs.shape
    out = np.zeros(rows)
    for t in range(rows):
        acc = 0.0
        for k in range(cols):
            p = probs[t, k]
            if p > 0.0:
                acc -= p * np.log(p)
        out[t] = acc
    return out


_NAMES = (
    "pair_gaps",
    "merge_sorted",
    "max_window_count",
    "label_sums",
    "cumulative_trapezoid",
    "entropy_rows",
)


def implementations(name):
    """Return the ``(numpy, numba)`` pair for kernel ``name``."""
    g = globals()
    return g[f"{name}_numpy"], g[f"{name}_numba"]


def _bind():
    g = globals()
    suffix = "numba" if USE_NUMBA else "numpy"
    for name in _NAMES:
        g[name] = g[f"{name}_{suffix}"]


_bind()
BACKEND = "numba" if USE_NUMBA else "numpy"
