"""Random and hand-built families used by tests, scripts and the CLI fixtures."""

from __future__ import annotations

import numpy as np

from framecal.frame import SampledFrame, make_frame, standard_dual
from framecal.measure import uniform_space


def _complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_weights(rng: np.random.Generator, m: int, lo: float = 0.2, hi: float = 2.0) -> np.ndarray:
    return rng.uniform(lo, hi, size=m)


def random_frame(
    rng: np.random.Generator, n: int, m: int, weighted: bool = True, real: bool = False
) -> SampledFrame:
    """``m`` Gaussian vectors in ``C^n`` (a frame almost surely when ``m >= n``)."""
    vectors = rng.standard_normal((m, n)) if real else _complex_normal(rng, (m, n))
    weights = random_weights(rng, m) if weighted else np.ones(m)
    return make_frame(vectors, weights)


def random_parseval(rng: np.random.Generator, n: int, m: int, weighted: bool = True) -> SampledFrame:
    """Parseval frame: rows of an isometry, rescaled by ``1/sqrt(w_i)``."""
    if m < n:
        raise ValueError("a Parseval frame needs m >= n")
    q, _ = np.linalg.qr(_complex_normal(rng, (m, n)))
    weights = random_weights(rng, m) if weighted else np.ones(m)
    return make_frame(q / np.sqrt(weights)[:, None], weights)


def random_kernel(rng: np.random.Generator, f: SampledFrame, scale: float = 1.0) -> SampledFrame:
    """Random ``H`` on the atoms of ``F`` with ``T_H T_F* = 0``.

    Columns of ``H`` are drawn from the null space of ``F* W``.
    """
    m = len(f)
    weighted = f.vectors.conj().T * f.space.w
    _, sv, vh = np.linalg.svd(weighted)
    rank = int(np.sum(sv > 1e-12 * max(sv[0], 1e-300)))
    null = vh[rank:].conj().T
    if null.shape[1] == 0:
        return f.with_vectors(np.zeros((m, f.dim), dtype=np.complex128))
    coeffs = _complex_normal(rng, (null.shape[1], f.dim))
    return f.with_vectors(scale * null @ coeffs)


def random_dual_pair(
    rng: np.random.Generator, n: int, m: int, kernel_scale: float = 0.5
) -> tuple[SampledFrame, SampledFrame]:
    """A random frame and a random (generally non-canonical) dual."""
    f = random_frame(rng, n, m)
    return f, standard_dual(f) + random_kernel(rng, f, kernel_scale)


def random_riesz_basis(rng: np.random.Generator, n: int) -> SampledFrame:
    """``n`` atoms in ``C^n`` with a well-conditioned random basis."""
    while True:
        vectors = _complex_normal(rng, (n, n))
        if np.linalg.cond(vectors) < 1e3:
            return make_frame(vectors, random_weights(rng, n))


def orthonormal_basis(n: int, scale: float = 1.0) -> SampledFrame:
    return make_frame(scale * np.eye(n))


# hand-built fixtures


def partition_dual_pair() -> tuple[SampledFrame, SampledFrame]:
    """``F = {e1, e2, 0}`` and ``G = {e1, e2, 2 e2}`` on three unit cells."""
    space = uniform_space(3, prefix="B")
    f = SampledFrame(space, [[1, 0], [0, 1], [0, 0]])
    g = SampledFrame(space, [[1, 0], [0, 1], [0, 2]])
    return f, g


def scaled_partition_pair(eps: float) -> tuple[SampledFrame, SampledFrame]:
    """``F = {e1, e2, 0}`` and ``G = {eps e1, 0, e2}``: ``I - T_G T_F* = diag(1 - eps, 1)``."""
    space = uniform_space(3, prefix="B")
    f = SampledFrame(space, [[1, 0], [0, 1], [0, 0]])
    g = SampledFrame(space, [[eps, 0], [0, 0], [0, 1]])
    return f, g


def repeated_basis_frame() -> SampledFrame:
    """``{e1, e2, e1}`` with unit weights: bounds 1 and 2, not a Riesz basis."""
    return make_frame([[1, 0], [0, 1], [1, 0]])
