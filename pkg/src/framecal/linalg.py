"""Dense complex linear algebra on small Hilbert spaces.

Vectors are 1-d ``complex128`` arrays and operators are square 2-d
``complex128`` arrays. The inner product ``inner(f, g)`` is linear in ``f``
and conjugate-linear in ``g``.

Eigen- and singular-value computations use Jacobi rotations: the two-sided
cyclic method for Hermitian matrices and the one-sided (Hestenes) method for
singular values of rectangular matrices. The one-sided variant resolves
exactly rank-deficient inputs to singular values at rounding level, which the
rank decisions in ``framecal.frame`` depend on.
"""

from __future__ import annotations

import math

import numpy as np

from framecal.errors import (
    DimensionMismatch,
    InternalConsistencyError,
    NotHermitian,
    NotPSD,
    Singular,
)

HERMITIAN_TOL = 1e-12
JACOBI_TOL = 1e-13
PSD_TOL = 1e-10
SINGULAR_TOL = 1e-12
MAX_SWEEPS = 64


def as_vector(v, dim: int | None = None) -> np.ndarray:
    out = np.asarray(v, dtype=np.complex128)
    if out.ndim != 1 or out.size == 0:
        raise DimensionMismatch(f"expected a non-empty 1-d vector, got shape {out.shape}")
    if dim is not None and out.size != dim:
        raise DimensionMismatch(f"vector has dimension {out.size}, expected {dim}")
    return out


def as_operator(a, dim: int | None = None) -> np.ndarray:
    out = np.asarray(a, dtype=np.complex128)
    if out.ndim != 2 or out.shape[0] != out.shape[1] or out.shape[0] == 0:
        raise DimensionMismatch(f"expected a non-empty square matrix, got shape {out.shape}")
    if dim is not None and out.shape[0] != dim:
        raise DimensionMismatch(f"operator acts on dimension {out.shape[0]}, expected {dim}")
    return out


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.complex128)


def adjoint(a: np.ndarray) -> np.ndarray:
    return np.conj(np.asarray(a, dtype=np.complex128)).T


def inner(f, g) -> complex:
    """<f, g> = sum_k f_k conj(g_k)."""
    return complex(np.vdot(g, f))


def norm(v) -> float:
    return float(np.linalg.norm(np.asarray(v, dtype=np.complex128)))


def _rotation_tangent(zeta: float) -> float:
    # smaller root of t^2 + 2 zeta t - 1 = 0
    if abs(zeta) > 1e150:
        return 0.5 / zeta
    sign = 1.0 if zeta >= 0 else -1.0
    return sign / (abs(zeta) + math.sqrt(zeta * zeta + 1.0))


def hermitian_eig(a, tol: float = JACOBI_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition ``A = Q diag(w) Q*`` of a Hermitian matrix.

    Cyclic Jacobi sweeps run until the off-diagonal Frobenius norm drops to
    ``tol * ||A||_F``. Eigenvalues are returned in ascending order with the
    matching eigenvectors as the columns of the unitary ``Q``.
    """
    a = as_operator(a)
    n = a.shape[0]
    scale = float(np.max(np.abs(a)))
    asym = float(np.max(np.abs(a - adjoint(a))))
    if asym > HERMITIAN_TOL * (1.0 + scale):
        raise NotHermitian(f"max |A - A*| = {asym:.3e}")

    if scale == 0.0:
        return np.zeros(n), identity(n)
    # unit max-entry scale keeps the Frobenius norms below clear of underflow
    h = 0.5 * (a + adjoint(a)) / scale
    v = identity(n)
    total = float(np.linalg.norm(h))
    off_mask = ~np.eye(n, dtype=bool)
    # entries this small are far below the stopping threshold; rotating on
    # them would divide by subnormal magnitudes
    floor = np.finfo(float).eps ** 2 * total

    for _ in range(MAX_SWEEPS):
        off = float(np.linalg.norm(h[off_mask]))
        if off <= tol * total:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = h[p, q]
                mag = abs(apq)
                if mag == 0.0 or mag <= floor:
                    continue
                zeta = (h[q, q].real - h[p, p].real) / (2.0 * mag)
                t = _rotation_tangent(zeta)
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                phase = np.conj(apq / mag)
                rot = np.array([[c, s], [-s * phase, c * phase]])
                idx = [p, q]
                h[:, idx] = h[:, idx] @ rot
                h[idx, :] = adjoint(rot) @ h[idx, :]
                h[p, q] = h[q, p] = 0.0
                h[p, p] = h[p, p].real
                h[q, q] = h[q, q].real
                v[:, idx] = v[:, idx] @ rot
    else:
        raise InternalConsistencyError(f"Jacobi eigensolver did not converge for n={n}")

    w = scale * np.real(np.diag(h))
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def singular_values(a) -> np.ndarray:
    """Singular values of a (possibly rectangular) matrix, descending.

    One-sided Jacobi on the orientation with fewer columns, so the result
    has ``min(rows, cols)`` entries.
    """
    x = np.array(a, dtype=np.complex128, copy=True)
    if x.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got shape {x.shape}")
    if x.shape[1] > x.shape[0]:
        x = np.conj(x).T.copy()
    k = x.shape[1]
    eps = np.finfo(float).eps
    # work at unit max-entry scale; couplings below eps^2 ||X||_F^2 cannot
    # move a singular value by more than roundoff, and skipping them avoids
    # dividing by subnormal magnitudes
    scale = float(np.max(np.abs(x))) if x.size else 0.0
    if scale == 0.0:
        return np.zeros(k)
    x /= scale
    floor = eps * eps * float(np.linalg.norm(x)) ** 2

    for _ in range(MAX_SWEEPS):
        rotated = False
        for i in range(k - 1):
            for j in range(i + 1, k):
                xi = x[:, i]
                xj = x[:, j]
                alpha = float(np.vdot(xi, xi).real)
                beta = float(np.vdot(xj, xj).real)
                gamma = np.vdot(xi, xj)
                mag = abs(gamma)
                if mag <= floor or mag <= eps * math.sqrt(alpha * beta):
                    continue
                rotated = True
                t = _rotation_tangent((beta - alpha) / (2.0 * mag))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                yj = xj * np.conj(gamma / mag)
                x[:, i], x[:, j] = c * xi - s * yj, s * xi + c * yj
        if not rotated:
            break
    else:
        raise InternalConsistencyError("one-sided Jacobi did not converge")

    sv = scale * np.linalg.norm(x, axis=0)
    return np.sort(sv)[::-1]


def operator_norm(a) -> float:
    """Spectral norm: the largest singular value, i.e. sqrt(max eig(A*A))."""
    sv = singular_values(np.atleast_2d(a))
    return float(sv[0]) if sv.size else 0.0


def condition(a) -> float:
    sv = singular_values(as_operator(a))
    if sv[-1] == 0.0:
        return math.inf
    return float(sv[0] / sv[-1])


def psd_sqrt(a) -> np.ndarray:
    """The unique positive square root of a positive semidefinite matrix."""
    w, q = hermitian_eig(a)
    floor = -PSD_TOL * (1.0 + abs(w[-1]))
    if w[0] < floor:
        raise NotPSD(f"min eigenvalue {w[0]:.3e} below {floor:.3e}")
    r = (q * np.sqrt(np.clip(w, 0.0, None))) @ adjoint(q)
    return 0.5 * (r + adjoint(r))


def psd_inv_sqrt(a) -> np.ndarray:
    """``A^{-1/2}`` for a positive definite matrix."""
    w, q = hermitian_eig(a)
    if w[0] <= SINGULAR_TOL * abs(w[-1]) or w[-1] <= 0.0:
        raise Singular(f"matrix is not positive definite (eigenvalues {w[0]:.3e}..{w[-1]:.3e})")
    r = (q / np.sqrt(w)) @ adjoint(q)
    return 0.5 * (r + adjoint(r))


def inverse(a) -> np.ndarray:
    a = as_operator(a)
    sv = singular_values(a)
    if sv[0] == 0.0 or sv[-1] <= SINGULAR_TOL * sv[0]:
        raise Singular(f"singular values span {sv[-1]:.3e}..{sv[0]:.3e}")
    return np.linalg.solve(a, identity(a.shape[0]))
