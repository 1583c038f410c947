"""Hot numeric kernels, numba-compiled with a pure-numpy fallback.

Everything here reduces to one primitive: walking the diagonals of the
displacement operator D(beta) in the truncated Fock basis.  With
x = |beta|^2 and offset k = m - n >= 0, the closed form is

    <n+k| D(beta) |n> = sqrt(n!/(n+k)!) beta^k exp(-x/2) L_n^(k)(x)

and the scaled magnitudes S_n = sqrt(n!/(n+k)!) |beta|^k exp(-x/2) L_n^(k)(x)
obey the three-term recurrence (the associated-Laguerre recurrence in the
polynomial order, prefactors folded in)

    S_0 = |beta|^k exp(-x/2) / sqrt(k!)
    S_{n+1} = [(2n+k+1-x) S_n - sqrt(n(n+k)) S_{n-1}]
              * sqrt((n+1)/(n+k+1)) / (n+1).

Every S_n is the magnitude of a matrix element of a unitary, so the walk
is bounded by 1 throughout: stable at any truncation and any |beta|,
including |beta|^2 far above the truncation (where a column-by-column
recurrence is explosively unstable).  The lower diagonal carries the
phase (beta/|beta|)^k, the upper one (-conj(beta)/|beta|)^k, from
D(beta)' = D(-beta).

Backend selection: numba is used when importable unless the environment
variable GAUSSFOCK_NO_NUMBA is set to a non-empty value.  `set_backend`
switches at runtime (tests and benchmarks use it).
"""

from __future__ import annotations

import os
import warnings

import numpy as np

warnings.filterwarnings("ignore", message=".*TBB.*")

try:
    from numba import njit, prange

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):  # type: ignore[misc]
        def wrap(f):
            return f

        return wrap

    prange = range


# ---------------------------------------------------------------------------
# pure numpy implementations (points vectorized, diagonals walked in python)
# ---------------------------------------------------------------------------


def _disp_matrix_np(alpha: complex, dim: int) -> np.ndarray:
    out = np.empty((dim, dim), dtype=np.complex128)
    x = alpha.real**2 + alpha.imag**2
    if x == 0.0:
        return np.eye(dim, dtype=np.complex128)
    r = np.sqrt(x)
    p = alpha / r
    mp = -np.conj(p)
    sq = np.sqrt(np.arange(2 * dim + 2, dtype=np.float64))
    c = np.exp(-0.5 * x)
    pk = 1.0 + 0.0j
    mpk = 1.0 + 0.0j
    for k in range(dim):
        if k > 0:
            c *= r / sq[k]
            pk *= p
            mpk *= mp
        s_prev = 0.0
        s = c
        for n in range(dim - k):
            out[n + k, n] = s * pk
            if k > 0:
                out[n, n + k] = s * mpk
            s_next = ((2 * n + k + 1 - x) * s - sq[n] * sq[n + k] * s_prev) * (
                sq[n + 1] / sq[n + k + 1] / (n + 1)
            )
            s_prev, s = s, s_next
    return out


def _char_values_np(rho: np.ndarray, alphas: np.ndarray) -> np.ndarray:
    dim = rho.shape[0]
    x = np.abs(alphas) ** 2
    safe = np.where(x > 0, alphas, 1.0)
    p = safe / np.abs(safe)
    mp = -np.conj(p)
    sq = np.sqrt(np.arange(2 * dim + 2, dtype=np.float64))
    acc = np.zeros(alphas.shape[0], dtype=np.complex128)
    c = np.exp(-0.5 * x)
    pk = np.ones_like(alphas)
    mpk = np.ones_like(alphas)
    for k in range(dim):
        if k > 0:
            c = c * (np.sqrt(x) / sq[k])
            pk = pk * p
            mpk = mpk * mp
        s_prev = np.zeros_like(x)
        s = c
        for n in range(dim - k):
            if k == 0:
                acc += rho[n, n].real * s
            else:
                acc += s * (rho[n, n + k] * pk + rho[n + k, n] * mpk)
            s_next = ((2 * n + k + 1 - x) * s - (sq[n] * sq[n + k]) * s_prev) * (
                sq[n + 1] / sq[n + k + 1] / (n + 1)
            )
            s_prev, s = s, s_next
    return acc


def _displace_vectors_np(vecs: np.ndarray, alphas: np.ndarray) -> np.ndarray:
    dim, nr = vecs.shape
    npts = alphas.shape[0]
    x = np.abs(alphas) ** 2
    safe = np.where(x > 0, alphas, 1.0)
    p = safe / np.abs(safe)
    mp = -np.conj(p)
    sq = np.sqrt(np.arange(2 * dim + 2, dtype=np.float64))
    out = np.zeros((npts, dim, nr), dtype=np.complex128)
    c = np.exp(-0.5 * x)
    pk = np.ones_like(alphas)
    mpk = np.ones_like(alphas)
    for k in range(dim):
        if k > 0:
            c = c * (np.sqrt(x) / sq[k])
            pk = pk * p
            mpk = mpk * mp
        s_prev = np.zeros_like(x)
        s = c
        for n in range(dim - k):
            out[:, n + k, :] += (s * pk)[:, None] * vecs[n, :]
            if k > 0:
                out[:, n, :] += (s * mpk)[:, None] * vecs[n + k, :]
            s_next = ((2 * n + k + 1 - x) * s - (sq[n] * sq[n + k]) * s_prev) * (
                sq[n + 1] / sq[n + k + 1] / (n + 1)
            )
            s_prev, s = s, s_next
    return out


# ---------------------------------------------------------------------------
# numba implementations (parallel over points, diagonals walked per point)
# ---------------------------------------------------------------------------


@njit(cache=True)
def _disp_matrix_nb(alpha, dim):  # pragma: no cover - compiled
    out = np.empty((dim, dim), dtype=np.complex128)
    x = alpha.real**2 + alpha.imag**2
    if x == 0.0:
        for i in range(dim):
            for j in range(dim):
                out[i, j] = 1.0 + 0.0j if i == j else 0.0 + 0.0j
        return out
    r = np.sqrt(x)
    p = alpha / r
    mp = -np.conj(p)
    sq = np.sqrt(np.arange(2 * dim + 2).astype(np.float64))
    c = np.exp(-0.5 * x)
    pk = 1.0 + 0.0j
    mpk = 1.0 + 0.0j
    for k in range(dim):
        if k > 0:
            c *= r / sq[k]
            pk *= p
            mpk *= mp
        s_prev = 0.0
        s = c
        for n in range(dim - k):
            out[n + k, n] = s * pk
            if k > 0:
                out[n, n + k] = s * mpk
            s_next = ((2 * n + k + 1 - x) * s - sq[n] * sq[n + k] * s_prev) * (
                sq[n + 1] / sq[n + k + 1] / (n + 1)
            )
            s_prev = s
            s = s_next
    return out


@njit(cache=True, parallel=True)
def _char_values_nb(rho, alphas):  # pragma: no cover - compiled
    dim = rho.shape[0]
    npts = alphas.shape[0]
    out = np.empty(npts, dtype=np.complex128)
    sq = np.sqrt(np.arange(2 * dim + 2).astype(np.float64))
    for ip in prange(npts):
        a = alphas[ip]
        x = a.real**2 + a.imag**2
        if x == 0.0:
            tr = 0.0 + 0.0j
            for n in range(dim):
                tr += rho[n, n]
            out[ip] = tr
            continue
        r = np.sqrt(x)
        p = a / r
        mp = -np.conj(p)
        c = np.exp(-0.5 * x)
        pk = 1.0 + 0.0j
        mpk = 1.0 + 0.0j
        acc = 0.0 + 0.0j
        for k in range(dim):
            if k > 0:
                c *= r / sq[k]
                pk *= p
                mpk *= mp
            s_prev = 0.0
            s = c
            for n in range(dim - k):
                if k == 0:
                    acc += rho[n, n] * s
                else:
                    acc += s * (rho[n, n + k] * pk + rho[n + k, n] * mpk)
                s_next = ((2 * n + k + 1 - x) * s - sq[n] * sq[n + k] * s_prev) * (
                    sq[n + 1] / sq[n + k + 1] / (n + 1)
                )
                s_prev = s
                s = s_next
        out[ip] = acc
    return out


@njit(cache=True, parallel=True)
def _displace_vectors_nb(vecs, alphas):  # pragma: no cover - compiled
    dim, nr = vecs.shape
    npts = alphas.shape[0]
    out = np.zeros((npts, dim, nr), dtype=np.complex128)
    sq = np.sqrt(np.arange(2 * dim + 2).astype(np.float64))
    for ip in prange(npts):
        a = alphas[ip]
        x = a.real**2 + a.imag**2
        if x == 0.0:
            for n in range(dim):
                for j in range(nr):
                    out[ip, n, j] = vecs[n, j]
            continue
        r = np.sqrt(x)
        p = a / r
        mp = -np.conj(p)
        c = np.exp(-0.5 * x)
        pk = 1.0 + 0.0j
        mpk = 1.0 + 0.0j
        for k in range(dim):
            if k > 0:
                c *= r / sq[k]
                pk *= p
                mpk *= mp
            s_prev = 0.0
            s = c
            for n in range(dim - k):
                lo = s * pk
                for j in range(nr):
                    out[ip, n + k, j] += lo * vecs[n, j]
                if k > 0:
                    up = s * mpk
                    for j in range(nr):
                        out[ip, n, j] += up * vecs[n + k, j]
                s_next = ((2 * n + k + 1 - x) * s - sq[n] * sq[n + k] * s_prev) * (
                    sq[n + 1] / sq[n + k + 1] / (n + 1)
                )
                s_prev = s
                s = s_next
    return out


# ---------------------------------------------------------------------------
# backend dispatch
# ---------------------------------------------------------------------------

_IMPL = {
    "numpy": (_disp_matrix_np, _char_values_np, _displace_vectors_np),
    "numba": (_disp_matrix_nb, _char_values_nb, _displace_vectors_nb),
}


def _default_backend() -> str:
    if os.environ.get("GAUSSFOCK_NO_NUMBA", ""):
        return "numpy"
    return "numba" if HAVE_NUMBA else "numpy"


_backend = _default_backend()


def set_backend(name: str) -> None:
    """Select the kernel backend: 'numba' or 'numpy'."""
    global _backend
    if name not in _IMPL:
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise ValueError("numba backend requested but numba is not importable")
    _backend = name


def get_backend() -> str:
    return _backend


def disp_matrix(alpha: complex, dim: int) -> np.ndarray:
    """Dense dim x dim matrix of D(alpha) in the truncated Fock basis."""
    return _IMPL[_backend][0](complex(alpha), dim)


def char_values(rho: np.ndarray, alphas: np.ndarray) -> np.ndarray:
    """Tr[rho D(alpha_p)] for a flat complex array of points."""
    rho = np.ascontiguousarray(rho, dtype=np.complex128)
    alphas = np.ascontiguousarray(alphas, dtype=np.complex128)
    if alphas.size == 0:
        return np.empty(0, dtype=np.complex128)
    return _IMPL[_backend][1](rho, alphas)


def displace_vectors(vecs: np.ndarray, alphas: np.ndarray) -> np.ndarray:
    """Stack D(alpha_p) @ vecs for each point p; shape (npts, dim, r)."""
    vecs = np.ascontiguousarray(vecs, dtype=np.complex128)
    alphas = np.ascontiguousarray(alphas, dtype=np.complex128)
    return _IMPL[_backend][2](vecs, alphas)
