"""Symmetric tridiagonal eigensolver and spectrally built spin rotations.

The solver is a self-contained implicit-shift QL iteration with Wilkinson
shifts, accumulating the Givens rotations into the eigenvector matrix.  A
cyclic Jacobi diagonalization of the dense matrix is kept alongside as a
brute-force cross-check, and a Sturm sign-count gives an independent way to
count eigenvalues below a threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .states import State

_EPS = float(np.finfo(float).eps)

# iteration cap per eigenvalue for both iterative solvers
MAX_SWEEPS = 50


class ConvergenceError(RuntimeError):
    """An iterative eigensolver exceeded its sweep cap."""

    def __init__(self, index: int, message: str):
        super().__init__(message)
        self.index = index


@dataclass(frozen=True)
class Tridiag:
    """Real symmetric tridiagonal matrix stored as diagonal and off-diagonal."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        diag = np.asarray(self.diag, dtype=float)
        offdiag = np.asarray(self.offdiag, dtype=float)
        if diag.ndim != 1 or diag.size < 1:
            raise ValueError("diag must be a 1d array with at least one entry")
        if offdiag.shape != (diag.size - 1,):
            raise ValueError(
                f"offdiag must have length {diag.size - 1}, got shape {offdiag.shape}"
            )
        if not (np.isfinite(diag).all() and np.isfinite(offdiag).all()):
            raise ValueError("matrix entries must be finite")
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "offdiag", offdiag)

    @property
    def dim(self) -> int:
        return self.diag.size

    def to_dense(self) -> np.ndarray:
        a = np.diag(self.diag)
        if self.dim > 1:
            a += np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)
        return a

    def matvec(self, x: np.ndarray) -> np.ndarray:
        y = self.diag * x
        if self.dim > 1:
            y[:-1] += self.offdiag * x[1:]
            y[1:] += self.offdiag * x[:-1]
        return y


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues in ascending order with orthonormal eigenvectors in columns."""

    values: np.ndarray
    vectors: np.ndarray


def _fix_signs(vectors: np.ndarray) -> None:
    # sign convention: the largest-magnitude component of each vector is
    # positive, first such index on ties.  Broadcast multiply rather than
    # negating column views in place: aliased-out unary ufuncs on strided
    # views hit a broken SIMD path on some numpy builds.
    lead = np.argmax(np.abs(vectors), axis=0)
    cols = np.arange(vectors.shape[1])
    vectors *= np.where(vectors[lead, cols] < 0.0, -1.0, 1.0)


def tridiag_eigen(t: Tridiag, max_sweeps: int = MAX_SWEEPS) -> EigenDecomposition:
    """Full eigendecomposition of a symmetric tridiagonal matrix.

    Implicit-shift QL with Wilkinson shifts.  An off-diagonal entry e[m] is
    treated as zero once |e[m]| <= eps * (|d[m]| + |d[m+1]|); each eigenvalue
    gets at most ``max_sweeps`` implicit QL steps before ConvergenceError.
    """
    n = t.dim
    d = t.diag.copy()
    e = np.zeros(n)
    e[: n - 1] = t.offdiag
    # exponent-only prescaling: subnormal matrices stall the deflation test
    # because eps * (|d_i| + |d_{i+1}|) underflows to zero.  A power of two
    # commutes exactly with every operation below, so results for
    # normal-range input are bit-identical with or without it.
    largest = max(float(np.abs(d).max()), float(np.abs(e).max()))
    exponent = math.frexp(largest)[1] if largest > 0.0 else 0
    d = np.ldexp(d, -exponent)
    e = np.ldexp(e, -exponent)
    # Fortran order keeps the column rotations below contiguous
    vec = np.eye(n, order="F")

    for low in range(n):
        sweeps = 0
        while True:
            # find the first negligible off-diagonal entry at or above `low`
            m = low
            while m < n - 1:
                if abs(e[m]) <= _EPS * (abs(d[m]) + abs(d[m + 1])):
                    break
                m += 1
            if m == low:
                break
            sweeps += 1
            if sweeps > max_sweeps:
                raise ConvergenceError(
                    low, f"eigenvalue {low} not converged after {max_sweeps} sweeps"
                )
            # Wilkinson shift from the leading 2x2 block
            g = (d[low + 1] - d[low]) / (2.0 * e[low])
            r = math.hypot(g, 1.0)
            g = d[m] - d[low] + e[low] / (g + math.copysign(r, g))
            s = 1.0
            c = 1.0
            p = 0.0
            for i in range(m - 1, low - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    # negligible rotation: drop the transform and restart
                    d[i + 1] -= p
                    e[m] = 0.0
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                # accumulate the Givens rotation into the eigenvector columns
                f_col = vec[:, i + 1].copy()
                old = vec[:, i]
                vec[:, i + 1] = s * old + c * f_col
                vec[:, i] = c * old - s * f_col
            else:
                d[low] -= p
                e[low] = g
                e[m] = 0.0

    order = np.argsort(d, kind="stable")
    values = np.ldexp(d[order], exponent)
    vectors = np.ascontiguousarray(vec[:, order])
    _fix_signs(vectors)
    return EigenDecomposition(values, vectors)


def sturm_count_below(t: Tridiag, x: float) -> int:
    """Number of eigenvalues strictly below x, by Sturm sequence sign count."""
    d = t.diag
    e = t.offdiag
    q = d[0] - x
    count = int(q < 0.0)
    for i in range(1, t.dim):
        if q == 0.0:
            q = _EPS * (abs(e[i - 1]) + abs(d[i - 1]) + 1.0)
        q = d[i] - x - e[i - 1] ** 2 / q
        count += q < 0.0
    return count


def jacobi_eigen(matrix: np.ndarray, max_sweeps: int = MAX_SWEEPS):
    """Dense symmetric eigendecomposition by cyclic Jacobi rotations.

    Brute-force reference used to cross-check tridiag_eigen; returns
    (values ascending, vectors in columns) with the same sign convention.
    """
    a = np.array(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if not np.allclose(a, a.T, atol=1e-12 * max(1.0, float(np.abs(a).max(initial=0.0)))):
        raise ValueError("matrix must be symmetric")
    n = a.shape[0]
    v = np.eye(n)
    if n == 1:
        return a.diagonal().copy(), v

    scale = max(1.0, float(np.linalg.norm(a)))
    for _ in range(max_sweeps):
        off = math.sqrt(float(np.sum(np.triu(a, 1) ** 2)))
        if off <= 1e-14 * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                diff = a[q, q] - a[p, p]
                if abs(diff) > 1e150 * abs(apq):
                    # tan(2 phi) underflows; small-angle limit avoids the
                    # overflow in diff / apq
                    tpar = apq / diff
                else:
                    theta = diff / (2.0 * apq)
                    tpar = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.hypot(tpar, 1.0)
                s = tpar * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    else:
        raise ConvergenceError(-1, f"Jacobi sweep cap {max_sweeps} exceeded")

    d = a.diagonal().copy()
    order = np.argsort(d, kind="stable")
    values = d[order]
    vectors = np.ascontiguousarray(v[:, order])
    _fix_signs(vectors)
    return values, vectors


def spin_x_tridiag(n_atoms: int) -> Tridiag:
    """S_x for N atoms: zero diagonal, <i+1|S_x|i> = sqrt((i+1)(N-i))/2."""
    if n_atoms < 2:
        raise ValueError(f"n_atoms must be >= 2, got {n_atoms}")
    i = np.arange(n_atoms, dtype=float)
    return Tridiag(np.zeros(n_atoms + 1), 0.5 * np.sqrt((i + 1.0) * (n_atoms - i)))


def rotation_about_x(n_atoms: int, angle: float) -> np.ndarray:
    """The unitary exp(-i * angle * S_x) as a dense complex matrix.

    Built from the spectral form V exp(-i angle L) V^T of the tridiagonal S_x,
    so a pi/2 angle gives the balanced beam-splitter pulse.
    """
    if not math.isfinite(angle):
        raise ValueError(f"angle must be finite, got {angle}")
    dec = tridiag_eigen(spin_x_tridiag(n_atoms))
    phases = np.exp(-1j * angle * dec.values)
    return (dec.vectors * phases) @ dec.vectors.T


def apply_unitary(u: np.ndarray, psi: State) -> State:
    """Apply a unitary matrix to a state, renormalizing defensively."""
    u = np.asarray(u)
    if u.shape != (psi.basis.dim, psi.basis.dim):
        raise ValueError(f"unitary shape {u.shape} does not match dimension {psi.basis.dim}")
    amps = u @ psi.amps
    nrm = np.linalg.norm(amps)
    if nrm == 0.0:
        raise ValueError("unitary application produced the zero vector")
    return State(psi.basis, amps / nrm)
