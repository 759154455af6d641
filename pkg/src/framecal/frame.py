"""Sampled continuous frames: one Hilbert-space vector per atom of a measure space.

For a frame ``F`` on atoms with weights ``w_i``:

* analysis    ``(T_F* f)_i = <f, F_i>``
* synthesis   ``T_F phi = sum_i w_i phi_i F_i``
* frame operator ``S_F = T_F T_F* = sum_i w_i F_i F_i*``

Rank decisions go through the weighted synthesis matrix whose columns are
``sqrt(w_i) F_i``; a singular value counts as nonzero when it exceeds
``tol * sigma_max``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from framecal import linalg
from framecal.errors import (
    DimensionMismatch,
    InternalConsistencyError,
    NotAFrame,
    NotARepresentation,
    SpaceMismatch,
)
from framecal.measure import CoefficientVector, MeasureSpace, build_space, remove_atom

CLASSIFY_TOL = 1e-8
RANK_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class SampledFrame:
    """A mapping ``omega -> F(omega)`` sampled on the atoms of ``space``.

    ``vectors`` has shape ``(m, n)``: row ``i`` is ``F(omega_i)``.
    """

    space: MeasureSpace
    vectors: np.ndarray

    def __post_init__(self):
        vectors = np.array(self.vectors, dtype=np.complex128)
        if vectors.ndim != 2 or vectors.shape[1] == 0:
            raise DimensionMismatch(f"frame vectors must be an (m, n) array, got {vectors.shape}")
        if vectors.shape[0] != len(self.space):
            raise DimensionMismatch(
                f"{vectors.shape[0]} vectors for a space of {len(self.space)} atoms"
            )
        vectors.flags.writeable = False
        object.__setattr__(self, "vectors", vectors)

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return self.vectors.shape[0]

    @property
    def synthesis_matrix(self) -> np.ndarray:
        """n x m matrix with columns sqrt(w_i) F_i (isometric picture of T_F)."""
        return (self.vectors * np.sqrt(self.space.w)[:, None]).T

    def with_vectors(self, vectors) -> "SampledFrame":
        return SampledFrame(self.space, vectors)

    def transform(self, op) -> "SampledFrame":
        """Atomwise image ``omega -> U F(omega)``."""
        op = linalg.as_operator(op, self.dim)
        return self.with_vectors(self.vectors @ op.T)

    def __mul__(self, c: complex) -> "SampledFrame":
        return self.with_vectors(self.vectors * c)

    __rmul__ = __mul__

    def __add__(self, other: "SampledFrame") -> "SampledFrame":
        check_compatible(self, other)
        return self.with_vectors(self.vectors + other.vectors)

    def __sub__(self, other: "SampledFrame") -> "SampledFrame":
        check_compatible(self, other)
        return self.with_vectors(self.vectors - other.vectors)


def make_frame(
    vectors,
    weights: Sequence[float] | None = None,
    labels: Sequence[str] | None = None,
) -> SampledFrame:
    """Convenience constructor; unit weights and labels ``w0, w1, ...`` by default."""
    vectors = np.atleast_2d(np.asarray(vectors, dtype=np.complex128))
    m = vectors.shape[0]
    weights = [1.0] * m if weights is None else list(weights)
    labels = [f"w{i}" for i in range(m)] if labels is None else list(labels)
    return SampledFrame(build_space(zip(labels, weights)), vectors)


def check_compatible(f: SampledFrame, g: SampledFrame) -> None:
    if f.space != g.space:
        raise SpaceMismatch("frames are sampled on different measure spaces")
    if f.dim != g.dim:
        raise DimensionMismatch(f"frames live in dimensions {f.dim} and {g.dim}")


def subframe(f: SampledFrame, indices: Sequence[int]) -> SampledFrame:
    """Restriction of ``F`` to the listed atoms, in the given order."""
    indices = list(indices)
    space = MeasureSpace(
        tuple(f.space.labels[i] for i in indices), tuple(f.space.weights[i] for i in indices)
    )
    return SampledFrame(space, f.vectors[indices])


def frame_remove_atom(f: SampledFrame, index: int) -> SampledFrame:
    space = remove_atom(f.space, index)
    return SampledFrame(space, np.delete(f.vectors, index, axis=0))


class Classification(str, enum.Enum):
    BESSEL_ONLY = "bessel-only"
    FRAME = "frame"
    TIGHT = "tight"
    PARSEVAL = "parseval"


@dataclass(frozen=True)
class FrameBounds:
    lower: float
    upper: float
    classification: Classification
    tol: float

    @property
    def is_frame(self) -> bool:
        return self.classification is not Classification.BESSEL_ONLY


def analysis(f: SampledFrame, x) -> CoefficientVector:
    x = linalg.as_vector(x, f.dim)
    return CoefficientVector(f.space, np.conj(f.vectors) @ x)


def synthesis(f: SampledFrame, phi: CoefficientVector) -> np.ndarray:
    if phi.space != f.space:
        raise SpaceMismatch("coefficients are bound to a different measure space")
    return f.vectors.T @ (f.space.w * phi.values)


def frame_operator(f: SampledFrame) -> np.ndarray:
    s = (f.vectors.T * f.space.w) @ np.conj(f.vectors)
    return 0.5 * (s + linalg.adjoint(s))


def frame_bounds(f: SampledFrame, tol: float = CLASSIFY_TOL) -> FrameBounds:
    eig, _ = linalg.hermitian_eig(frame_operator(f))
    lower = max(float(eig[0]), 0.0)
    upper = max(float(eig[-1]), 0.0)
    if lower <= tol * upper or upper == 0.0:
        kind = Classification.BESSEL_ONLY
    elif upper - lower <= tol * (1.0 + upper):
        kind = Classification.PARSEVAL if abs(lower - 1.0) <= tol else Classification.TIGHT
    else:
        kind = Classification.FRAME
    return FrameBounds(lower, upper, kind, tol)


def bessel_bound(f: SampledFrame) -> float:
    """Tight Bessel constant: the largest eigenvalue of the frame operator."""
    return max(float(linalg.hermitian_eig(frame_operator(f))[0][-1]), 0.0)


def frame_operator_inverse(f: SampledFrame, tol: float = CLASSIFY_TOL) -> np.ndarray:
    bounds = frame_bounds(f, tol)
    if not bounds.is_frame:
        raise NotAFrame(f"lower bound {bounds.lower:.3e} vs upper {bounds.upper:.3e}")
    return linalg.inverse(frame_operator(f))


def standard_dual(f: SampledFrame, tol: float = CLASSIFY_TOL) -> SampledFrame:
    bounds = frame_bounds(f, tol)
    if not bounds.is_frame:
        raise NotAFrame(f"lower bound {bounds.lower:.3e} vs upper {bounds.upper:.3e}")
    s_inv = linalg.inverse(frame_operator(f))
    dual = f.with_vectors(f.vectors @ s_inv.T)

    # reconstruction on the standard basis: T_dual T_F* = I
    recon = (dual.vectors.T * f.space.w) @ np.conj(f.vectors)
    err = float(np.max(np.linalg.norm(recon - np.eye(f.dim), axis=0)))
    cond = bounds.upper / bounds.lower
    if err > 1e-10 * max(1.0, cond):
        raise InternalConsistencyError(f"standard dual reconstruction error {err:.3e}")
    return dual


class MinimalNormCheck(NamedTuple):
    lhs: float
    rhs: float
    residual: float


def minimal_norm_check(f: SampledFrame, x, phi: CoefficientVector) -> MinimalNormCheck:
    """Pythagorean split of ``||phi||^2`` around the canonical coefficients.

    For any ``phi`` with ``T_F phi = x`` the canonical coefficients
    ``c = T_F* S^{-1} x`` satisfy ``||phi||^2 = ||c||^2 + ||phi - c||^2``.
    """
    x = linalg.as_vector(x, f.dim)
    rep_err = linalg.norm(synthesis(f, phi) - x)
    slack = 1e-12 * np.sqrt(bessel_bound(f)) * phi.weighted_norm
    if rep_err > 1e-8 * linalg.norm(x) + slack:
        raise NotARepresentation(f"||T_F phi - f|| = {rep_err:.3e}")
    canonical = analysis(standard_dual(f), x)
    lhs = phi.weighted_norm**2
    rhs = canonical.weighted_norm**2 + (phi - canonical).weighted_norm**2
    return MinimalNormCheck(lhs, rhs, abs(lhs - rhs))


def _rank(matrix: np.ndarray, tol: float) -> int:
    sv = linalg.singular_values(matrix)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv > tol * sv[0]))


def is_mu_complete(f: SampledFrame, tol: float = RANK_TOL) -> bool:
    # with strictly positive atoms, mu-completeness is plain spanning
    return _rank(f.synthesis_matrix, tol) == f.dim


def is_l2_independent(f: SampledFrame, tol: float = RANK_TOL) -> bool:
    return _rank(f.synthesis_matrix, tol) == len(f)


def is_riesz_basis(f: SampledFrame, tol: float = RANK_TOL) -> bool:
    by_span = is_mu_complete(f, tol) and is_l2_independent(f, tol)
    # analysis operator onto L^2 and injective on H
    analysis_rank = _rank(np.conj(f.synthesis_matrix).T, tol)
    by_analysis = analysis_rank == len(f) and analysis_rank == f.dim
    if by_span != by_analysis:
        raise InternalConsistencyError("Riesz judgments disagree between synthesis and analysis")
    return by_span


def is_orthonormal_basis(f: SampledFrame, tol: float = RANK_TOL) -> bool:
    m = f.synthesis_matrix
    gram = linalg.adjoint(m) @ m
    if float(np.max(np.abs(gram - np.eye(len(f))))) > tol:
        return False
    return frame_bounds(f, tol).classification is Classification.PARSEVAL
