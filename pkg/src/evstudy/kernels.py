"""Hot numeric kernels: per-panel coefficient evaluation and bootstrap loops.

Two interchangeable backends compute identical quantities:

  * ``numba`` -- ``@njit``-compiled loops, used by default when numba imports;
  * ``numpy`` -- vectorized fallback, always available.

Selection is via the ``EVSTUDY_BACKEND`` environment variable (``auto``,
``numba`` or ``numpy``; default ``auto``). ``benchmarks/bench_kernels.py``
times the two against each other.

Coefficient layout: for a panel over periods [t_min, t_max] with
T = t_max - t_min + 1 periods, kernels return length-T vectors indexed by
j = r - (t_min - 1), i.e. column j holds the coefficient at relative time
r = t_min - 1 + j (period t = r + 1 = t_min + j). Omitted categories are NaN.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba present in the test env
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        return wrap if not (args and callable(args[0])) else args[0]


# Estimator codes shared with the estimators module.
TWFE = 0
CS_DEFAULT = 1
CS_UNIVERSAL = 2
BJS = 3

_ENV = "EVSTUDY_BACKEND"


def active_backend() -> str:
    """Resolve the backend in effect: 'numba' or 'numpy'."""
    choice = os.environ.get(_ENV, "auto").lower()
    if choice not in ("auto", "numba", "numpy"):
        raise ValueError(f"{_ENV} must be auto, numba or numpy, got {choice!r}")
    if choice == "numpy":
        return "numpy"
    if choice == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("EVSTUDY_BACKEND=numba but numba is not importable")
        return "numba"
    return "numba" if HAVE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# numpy backend


def _group_gap_np(y: np.ndarray, treated: np.ndarray) -> np.ndarray:
    return y[treated].mean(axis=0) - y[~treated].mean(axis=0)


def _coefs_from_gap_np(g: np.ndarray, j0: int, code: int) -> np.ndarray:
    out = np.empty_like(g)
    if code == TWFE or code == CS_UNIVERSAL:
        out[:] = g - g[j0]
        out[j0] = np.nan
    elif code == CS_DEFAULT:
        out[0] = np.nan
        out[1 : j0 + 1] = g[1 : j0 + 1] - g[0:j0]
        out[j0 + 1 :] = g[j0 + 1 :] - g[j0]
    elif code == BJS:
        out[0] = np.nan
        out[1 : j0 + 1] = g[1 : j0 + 1] - g[0]
        out[j0 + 1 :] = g[j0 + 1 :] - g[: j0 + 1].mean()
    else:
        raise ValueError(f"unknown estimator code {code}")
    return out


def _coef_matrix_np(y, treated, j0):
    g = _group_gap_np(y, treated)
    return np.stack([_coefs_from_gap_np(g, j0, c) for c in (TWFE, CS_DEFAULT, CS_UNIVERSAL, BJS)])


def _bootstrap_np(y1, y0, idx1, idx0, j0, code):
    m1 = y1[idx1].mean(axis=1)  # (B, T)
    m0 = y0[idx0].mean(axis=1)
    g = m1 - m0
    out = np.empty_like(g)
    if code == TWFE or code == CS_UNIVERSAL:
        out[:] = g - g[:, j0 : j0 + 1]
        out[:, j0] = np.nan
    elif code == CS_DEFAULT:
        out[:, 0] = np.nan
        out[:, 1 : j0 + 1] = g[:, 1 : j0 + 1] - g[:, 0:j0]
        out[:, j0 + 1 :] = g[:, j0 + 1 :] - g[:, j0 : j0 + 1]
    elif code == BJS:
        out[:, 0] = np.nan
        out[:, 1 : j0 + 1] = g[:, 1 : j0 + 1] - g[:, 0:1]
        out[:, j0 + 1 :] = g[:, j0 + 1 :] - g[:, : j0 + 1].mean(axis=1, keepdims=True)
    else:
        raise ValueError(f"unknown estimator code {code}")
    return out


# ---------------------------------------------------------------------------
# numba backend


@njit(cache=True)
def _group_gap_nb(y, treated):
    n, T = y.shape
    s1 = np.zeros(T)
    s0 = np.zeros(T)
    n1 = 0
    for i in range(n):
        if treated[i]:
            n1 += 1
            for j in range(T):
                s1[j] += y[i, j]
        else:
            for j in range(T):
                s0[j] += y[i, j]
    n0 = n - n1
    return s1 / n1 - s0 / n0


@njit(cache=True)
def _coefs_from_gap_nb(g, j0, code, out):
    T = g.shape[0]
    if code == 0 or code == 2:  # TWFE / CS universal
        for j in range(T):
            out[j] = g[j] - g[j0]
        out[j0] = np.nan
    elif code == 1:  # CS default
        out[0] = np.nan
        for j in range(1, j0 + 1):
            out[j] = g[j] - g[j - 1]
        for j in range(j0 + 1, T):
            out[j] = g[j] - g[j0]
    else:  # BJS
        out[0] = np.nan
        for j in range(1, j0 + 1):
            out[j] = g[j] - g[0]
        pre = 0.0
        for j in range(j0 + 1):
            pre += g[j]
        pre /= j0 + 1
        for j in range(j0 + 1, T):
            out[j] = g[j] - pre


@njit(cache=True)
def _coef_matrix_nb(y, treated, j0):
    T = y.shape[1]
    g = _group_gap_nb(y, treated)
    out = np.empty((4, T))
    for code in range(4):
        _coefs_from_gap_nb(g, j0, code, out[code])
    return out


@njit(cache=True)
def _bootstrap_nb(y1, y0, idx1, idx0, j0, code):
    B = idx1.shape[0]
    n1 = idx1.shape[1]
    n0 = idx0.shape[1]
    T = y1.shape[1]
    out = np.empty((B, T))
    g = np.empty(T)
    for b in range(B):
        for j in range(T):
            g[j] = 0.0
        for k in range(n1):
            row = idx1[b, k]
            for j in range(T):
                g[j] += y1[row, j]
        for j in range(T):
            g[j] /= n1
        for k in range(n0):
            row = idx0[b, k]
            for j in range(T):
                g[j] -= y0[row, j] / n0
        _coefs_from_gap_nb(g, j0, code, out[b])
    return out


# ---------------------------------------------------------------------------
# dispatchers


def _prep(y, treated):
    y = np.ascontiguousarray(y, dtype=np.float64)
    treated = np.ascontiguousarray(treated, dtype=np.bool_)
    return y, treated


def coef_matrix(y: np.ndarray, treated: np.ndarray, t_min: int) -> np.ndarray:
    """All four estimators' coefficient vectors for one panel, shape (4, T).

    Rows are ordered (TWFE, CS_DEFAULT, CS_UNIVERSAL, BJS).
    """
    y, treated = _prep(y, treated)
    j0 = -t_min
    if active_backend() == "numba":
        return _coef_matrix_nb(y, treated, j0)
    return _coef_matrix_np(y, treated, j0)


def estimator_coefs(y: np.ndarray, treated: np.ndarray, t_min: int, code: int) -> np.ndarray:
    """One estimator's coefficient vector for one panel, shape (T,)."""
    return coef_matrix(y, treated, t_min)[code]


def bootstrap_coefs(y1, y0, idx1, idx0, t_min: int, code: int) -> np.ndarray:
    """Coefficient vectors for B stratified resamples, shape (B, T).

    ``idx1``/``idx0`` hold per-replicate row indices into the treated and
    control outcome blocks ``y1``/``y0``.
    """
    y1 = np.ascontiguousarray(y1, dtype=np.float64)
    y0 = np.ascontiguousarray(y0, dtype=np.float64)
    idx1 = np.ascontiguousarray(idx1, dtype=np.int64)
    idx0 = np.ascontiguousarray(idx0, dtype=np.int64)
    j0 = -t_min
    if active_backend() == "numba":
        return _bootstrap_nb(y1, y0, idx1, idx0, j0, code)
    return _bootstrap_np(y1, y0, idx1, idx0, j0, code)
