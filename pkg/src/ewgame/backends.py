"""Hot numeric kernels with a numba build and a pure-numpy twin.

Two kernels dominate the runtime of this package: the cyclic Jacobi
eigensolver for small complex Hermitian matrices (run once per density-matrix
validation, so easily millions of times in a sampling campaign) and the
game-round sampler (run once per Monte Carlo round).

The active backend is resolved once at import from the ``EWGAME_BACKEND``
environment variable ("numba" or "numpy"); the default is numba when it is
importable, numpy otherwise.  Both builds of a kernel consume the same inputs
and perform the same floating-point operations in the same order, so results
are bit-identical across backends; only speed differs.  See
``benchmarks/bench_backends.py`` for a timing comparison.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None

ENV_BACKEND = "EWGAME_BACKEND"

JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 60


def resolve_backend(requested: str | None = None) -> str:
    """Return "numba" or "numpy" from an explicit request or the environment."""
    if requested is None:
        requested = os.environ.get(ENV_BACKEND, "").strip().lower() or None
    if requested not in (None, "numba", "numpy"):
        raise ValueError(f"unknown backend {requested!r}; use 'numba' or 'numpy'")
    if requested == "numba" and numba is None:
        raise RuntimeError("EWGAME_BACKEND=numba but numba is not installed")
    if requested is None:
        return "numba" if numba is not None else "numpy"
    return requested


ACTIVE_BACKEND = resolve_backend()


# ---------------------------------------------------------------------------
# Jacobi eigensolver for complex Hermitian matrices (d <= 8)
# ---------------------------------------------------------------------------

def _jacobi_sweeps(a, v, tol, max_sweeps):
    # Cyclic Jacobi with complex rotations.  `a` is overwritten toward a
    # diagonal matrix, `v` (identity on entry) accumulates the eigenvectors.
    # Returns the number of sweeps used, or -1 if convergence failed.
    # Magnitudes and the pivot phase are formed from explicit real/imag parts
    # and plain products (never ``**``): numba and numpy round abs(), complex
    # division and scalar pow() differently, while spelled out this way both
    # builds produce bit-identical results.
    d = a.shape[0]
    for sweep in range(max_sweeps):
        off = 0.0
        for p in range(d - 1):
            for q in range(p + 1, d):
                off += a[p, q].real * a[p, q].real + a[p, q].imag * a[p, q].imag
        if np.sqrt(off) <= tol:
            return sweep
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[p, q]
                mag = np.sqrt(apq.real * apq.real + apq.imag * apq.imag)
                if mag == 0.0:
                    continue
                u = complex(apq.real / mag, apq.imag / mag)
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                su = complex(s * u.real, s * u.imag)
                suc = complex(s * u.real, -(s * u.imag))
                for i in range(d):
                    aip = a[i, p]
                    aiq = a[i, q]
                    a[i, p] = c * aip - suc * aiq
                    a[i, q] = su * aip + c * aiq
                for i in range(d):
                    api = a[p, i]
                    aqi = a[q, i]
                    a[p, i] = c * api - su * aqi
                    a[q, i] = suc * api + c * aqi
                for i in range(d):
                    vip = v[i, p]
                    viq = v[i, q]
                    v[i, p] = c * vip - suc * viq
                    v[i, q] = su * vip + c * viq
    return -1


if numba is not None:
    _jacobi_sweeps_numba = numba.njit(cache=True)(_jacobi_sweeps)
else:  # pragma: no cover
    _jacobi_sweeps_numba = None


def jacobi_eigh(matrix: np.ndarray, backend: str | None = None):
    """Eigendecompose a complex Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues ascending and
    eigenvectors as orthonormal columns.  The input is not modified and is
    assumed Hermitian; callers are responsible for that precondition.
    """
    a = np.array(matrix, dtype=np.complex128, order="C")
    d = a.shape[0]
    v = np.eye(d, dtype=np.complex128)
    scale = np.sqrt((np.abs(a) ** 2).sum())
    tol = JACOBI_TOL * max(1.0, scale)
    kernel = _jacobi_sweeps_numba if (backend or ACTIVE_BACKEND) == "numba" else _jacobi_sweeps
    sweeps = kernel(a, v, tol, JACOBI_MAX_SWEEPS)
    if sweeps < 0:
        raise ArithmeticError("Jacobi eigensolver did not converge")
    vals = np.real(np.diag(a)).copy()
    order = np.argsort(vals)
    return vals[order], np.ascontiguousarray(v[:, order])


# ---------------------------------------------------------------------------
# Game-round sampler
# ---------------------------------------------------------------------------
#
# One round consumes two uniforms: u0 selects the label cell by inverse CDF
# over the label distribution, u1 selects the joint answer outcome by inverse
# CDF over that cell's outcome distribution.  The kernel also accumulates the
# per-cell moments needed for payoff statistics and tomography.  Both CDFs
# must end in exactly 1.0 so every u < 1 lands inside the table.

def _sample_rounds_loop(u, label_cdf, outcome_cdf, payoff_table, parity,
                        cells, outcomes, counts, parity_sums,
                        payoff_sums, payoff_sq_sums):
    rounds = u.shape[0]
    n_cells = label_cdf.shape[0]
    n_out = outcome_cdf.shape[1]
    for r in range(rounds):
        u0 = u[r, 0]
        c = 0
        while c < n_cells - 1 and u0 >= label_cdf[c]:
            c += 1
        u1 = u[r, 1]
        k = 0
        while k < n_out - 1 and u1 >= outcome_cdf[c, k]:
            k += 1
        pay = payoff_table[c, k]
        cells[r] = c
        outcomes[r] = k
        counts[c] += 1
        parity_sums[c] += parity[k]
        payoff_sums[c] += pay
        payoff_sq_sums[c] += pay * pay


if numba is not None:
    _sample_rounds_loop_numba = numba.njit(cache=True)(_sample_rounds_loop)
else:  # pragma: no cover
    _sample_rounds_loop_numba = None


def _sample_rounds_numpy(u, label_cdf, outcome_cdf, payoff_table, parity):
    # Vectorized twin of the loop kernel.  np.bincount adds weights in input
    # order, so the per-cell float sums match the loop bit for bit.
    n_cells = label_cdf.shape[0]
    n_out = outcome_cdf.shape[1]
    cells = np.minimum(np.searchsorted(label_cdf, u[:, 0], side="right"), n_cells - 1)
    rows = outcome_cdf[cells]
    outcomes = np.minimum((u[:, 1:2] >= rows).sum(axis=1), n_out - 1)
    pays = payoff_table[cells, outcomes]
    counts = np.bincount(cells, minlength=n_cells).astype(np.int64)
    parity_sums = np.bincount(
        cells, weights=parity[outcomes].astype(np.float64), minlength=n_cells
    ).astype(np.int64)
    payoff_sums = np.bincount(cells, weights=pays, minlength=n_cells)
    payoff_sq_sums = np.bincount(cells, weights=pays * pays, minlength=n_cells)
    return cells, outcomes, counts, parity_sums, payoff_sums, payoff_sq_sums


def sample_rounds(u, label_cdf, outcome_cdf, payoff_table, parity,
                  backend: str | None = None):
    """Run all game rounds for pre-drawn uniforms ``u`` of shape (rounds, 2).

    Returns ``(cells, outcomes, counts, parity_sums, payoff_sums,
    payoff_sq_sums)``; the first two are per-round, the rest per label cell.
    """
    use = backend or ACTIVE_BACKEND
    if use == "numpy":
        return _sample_rounds_numpy(u, label_cdf, outcome_cdf, payoff_table, parity)
    rounds = u.shape[0]
    n_cells = label_cdf.shape[0]
    cells = np.empty(rounds, dtype=np.int64)
    outcomes = np.empty(rounds, dtype=np.int64)
    counts = np.zeros(n_cells, dtype=np.int64)
    parity_sums = np.zeros(n_cells, dtype=np.int64)
    payoff_sums = np.zeros(n_cells, dtype=np.float64)
    payoff_sq_sums = np.zeros(n_cells, dtype=np.float64)
    _sample_rounds_loop_numba(u, label_cdf, outcome_cdf, payoff_table, parity,
                              cells, outcomes, counts, parity_sums,
                              payoff_sums, payoff_sq_sums)
    return cells, outcomes, counts, parity_sums, payoff_sums, payoff_sq_sums
