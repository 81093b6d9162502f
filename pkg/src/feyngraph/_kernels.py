"""Hot loops for simplex integration.

Each kernel has a vectorized numpy version and, when numba imports, a
compiled loop version.  Setting ``FEYNGRAPH_NO_NUMBA=1`` forces the numpy
path; both are kept importable so the benchmark can compare them.
"""

from __future__ import annotations

import math
import os

import numpy as np

try:
    import numba as nb
except ImportError:  # pragma: no cover - numba is a declared dependency
    nb = None

NUMBA_AVAILABLE = nb is not None
DISABLED_BY_ENV = os.environ.get("FEYNGRAPH_NO_NUMBA", "") not in ("", "0")


# -- numpy path ---------------------------------------------------------------


def np_dirichlet_rows(u: np.ndarray) -> np.ndarray:
    """Uniform points on the simplex: gaps between sorted uniforms (one row per sample)."""
    n_samples = u.shape[0]
    s = np.sort(u, axis=1)
    padded = np.concatenate([np.zeros((n_samples, 1)), s, np.ones((n_samples, 1))], axis=1)
    return np.diff(padded, axis=1)


def np_poly_eval(exps: np.ndarray, coefs: np.ndarray, a: np.ndarray) -> np.ndarray:
    out = np.zeros(a.shape[0])
    for t in range(exps.shape[0]):
        term = np.full(a.shape[0], coefs[t])
        for j in np.flatnonzero(exps[t]):
            term *= a[:, j] ** int(exps[t, j])
        out += term
    return out


def np_ratio_values(psi_exps, psi_coefs, phi_exps, phi_coefs, a, psi_pow, phi_pow):
    """psi(a)**psi_pow / phi(a)**phi_pow, rowwise."""
    psi = np_poly_eval(psi_exps, psi_coefs, a)
    vals = psi**psi_pow
    if phi_pow != 0.0:
        vals = vals / np_poly_eval(phi_exps, phi_coefs, a) ** phi_pow
    return vals


def np_moments(vals: np.ndarray) -> tuple[float, float]:
    return math.fsum(vals), math.fsum(vals * vals)


# -- numba path ---------------------------------------------------------------

def sparse_terms(exps: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """CSR-style factor lists: term t multiplies a[:, idx[k]] for k in ptr[t]:ptr[t+1] (repeats encode powers)."""
    ptr = np.zeros(exps.shape[0] + 1, dtype=np.int64)
    idx = []
    for t in range(exps.shape[0]):
        for j in np.flatnonzero(exps[t]):
            idx.extend([j] * int(exps[t, j]))
        ptr[t + 1] = len(idx)
    return ptr, np.asarray(idx, dtype=np.int64)


if NUMBA_AVAILABLE:
    _jit = dict(nogil=True, cache=False)

    @nb.njit(**_jit)
    def nb_dirichlet_rows(u):
        n_samples, k = u.shape
        out = np.empty((n_samples, k + 1))
        row = np.empty(k)
        for i in range(n_samples):
            # insertion sort: rows are short
            for j in range(k):
                x = u[i, j]
                m = j
                while m > 0 and row[m - 1] > x:
                    row[m] = row[m - 1]
                    m -= 1
                row[m] = x
            prev = 0.0
            for j in range(k):
                out[i, j] = row[j] - prev
                prev = row[j]
            out[i, k] = 1.0 - prev
        return out

    @nb.njit(**_jit)
    def _nb_poly_row(ptr, idx, coefs, a, i):
        acc = 0.0
        for t in range(coefs.shape[0]):
            term = coefs[t]
            for k in range(ptr[t], ptr[t + 1]):
                term *= a[i, idx[k]]
            acc += term
        return acc

    @nb.njit(**_jit)
    def _nb_poly_eval(ptr, idx, coefs, a):
        out = np.empty(a.shape[0])
        for i in range(a.shape[0]):
            out[i] = _nb_poly_row(ptr, idx, coefs, a, i)
        return out

    @nb.njit(**_jit)
    def _nb_ratio_values(pp, pi, pc, qp, qi, qc, a, psi_pow, phi_pow):
        out = np.empty(a.shape[0])
        for i in range(a.shape[0]):
            v = _nb_poly_row(pp, pi, pc, a, i) ** psi_pow
            if phi_pow != 0.0:
                v /= _nb_poly_row(qp, qi, qc, a, i) ** phi_pow
            out[i] = v
        return out

    def nb_poly_eval(exps, coefs, a):
        ptr, idx = sparse_terms(exps)
        return _nb_poly_eval(ptr, idx, coefs, a)

    def nb_ratio_values(psi_exps, psi_coefs, phi_exps, phi_coefs, a, psi_pow, phi_pow):
        pp, pi = sparse_terms(psi_exps)
        qp, qi = sparse_terms(phi_exps)
        return _nb_ratio_values(pp, pi, psi_coefs, qp, qi, phi_coefs, a, psi_pow, phi_pow)

    @nb.njit(**_jit)
    def nb_moments(vals):
        # Neumaier summation for the sum and the sum of squares
        s = 0.0
        cs = 0.0
        q = 0.0
        cq = 0.0
        for x in vals:
            t = s + x
            if abs(s) >= abs(x):
                cs += (s - t) + x
            else:
                cs += (x - t) + s
            s = t
            x2 = x * x
            t = q + x2
            if abs(q) >= abs(x2):
                cq += (q - t) + x2
            else:
                cq += (x2 - t) + q
            q = t
        return s + cs, q + cq


BACKENDS = {
    "numpy": {
        "dirichlet_rows": np_dirichlet_rows,
        "poly_eval": np_poly_eval,
        "ratio_values": np_ratio_values,
        "moments": np_moments,
    }
}
if NUMBA_AVAILABLE:
    BACKENDS["numba"] = {
        "dirichlet_rows": nb_dirichlet_rows,
        "poly_eval": nb_poly_eval,
        "ratio_values": nb_ratio_values,
        "moments": nb_moments,
    }

_active = "numba" if NUMBA_AVAILABLE and not DISABLED_BY_ENV else "numpy"


def backend() -> str:
    return _active


def set_backend(name: str) -> None:
    global _active
    if name not in BACKENDS:
        raise ValueError(f"unknown or unavailable backend {name!r}; have {sorted(BACKENDS)}")
    _active = name


def kernel(name: str):
    return BACKENDS[_active][name]
