"""Exact dual pairs: verification, constructions and atom removal.

``(F, G)`` is a dual pair when the cross operator ``T_G T_F* = sum_i w_i G_i F_i*``
is the identity. All verdicts are judged on the operator norm of
``I - T_G T_F*``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from framecal import linalg
from framecal.errors import (
    DegenerateAtom,
    IndexOutOfRange,
    InternalConsistencyError,
    KernelConditionViolated,
    NotAFrame,
    NotDegenerate,
    NotDualPair,
    NotRieszBasis,
    TransportConditionViolated,
)
from framecal.frame import (
    RANK_TOL,
    SampledFrame,
    bessel_bound,
    check_compatible,
    frame_bounds,
    frame_operator,
    frame_remove_atom,
    is_mu_complete,
    is_riesz_basis,
    standard_dual,
    subframe,
)

DUAL_TOL = 1e-8
KERNEL_TOL = 1e-10
TRANSPORT_TOL = 1e-10


def cross_operator(f: SampledFrame, g: SampledFrame) -> np.ndarray:
    """``T_G T_F*``: the map ``x -> sum_i w_i <x, F_i> G_i``."""
    check_compatible(f, g)
    return (g.vectors.T * f.space.w) @ np.conj(f.vectors)


def synthesis_norm(f: SampledFrame) -> float:
    """``||T_F||``, the square root of the tight Bessel bound."""
    return linalg.operator_norm(f.synthesis_matrix)


@dataclass(frozen=True, eq=False)
class DualPairReport:
    cross: np.ndarray
    residual: float
    is_dual: bool
    tol: float


def is_dual_pair(f: SampledFrame, g: SampledFrame, tol: float = DUAL_TOL) -> DualPairReport:
    cross = cross_operator(f, g)
    eye = linalg.identity(f.dim)
    residual = linalg.operator_norm(eye - cross)
    mirrored = linalg.operator_norm(eye - cross_operator(g, f))
    if abs(residual - mirrored) > 1e-10 * (1.0 + residual):
        raise InternalConsistencyError(
            f"||I - T_G T_F*|| = {residual:.3e} but ||I - T_F T_G*|| = {mirrored:.3e}"
        )
    return DualPairReport(cross, residual, residual <= tol, tol)


def _require_dual(f: SampledFrame, g: SampledFrame, tol: float, what: str = "(F, G)") -> DualPairReport:
    report = is_dual_pair(f, g, tol)
    if not report.is_dual:
        raise NotDualPair(f"{what} is not a dual pair: ||I - T_G T_F*|| = {report.residual:.3e}")
    return report


def dual_from_kernel(f: SampledFrame, h: SampledFrame, tol: float = DUAL_TOL) -> SampledFrame:
    """``G = S_F^{-1} F + H`` for ``H`` with ``T_H T_F* = 0``."""
    check_compatible(f, h)
    base = standard_dual(f)
    leak = linalg.operator_norm(cross_operator(f, h))
    if leak > KERNEL_TOL * (1.0 + synthesis_norm(f) * synthesis_norm(h)):
        raise KernelConditionViolated(f"||T_H T_F*|| = {leak:.3e}")
    g = base + h
    _require_dual(f, g, tol, "(F, S^-1 F + H)")
    return g


def affine_dual(
    f: SampledFrame, g: SampledFrame, k: SampledFrame, alpha: complex, tol: float = DUAL_TOL
) -> SampledFrame:
    """``alpha G + (1 - alpha) K`` for two duals ``G`` and ``K`` of ``F``."""
    _require_dual(f, g, tol, "(F, G)")
    _require_dual(f, k, tol, "(F, K)")
    out = g.with_vectors(alpha * g.vectors + (1.0 - alpha) * k.vectors)
    # residual grows at most like |alpha| r_G + |1 - alpha| r_K
    bound = (abs(alpha) + abs(1.0 - alpha)) * tol
    report = is_dual_pair(f, out, max(tol, bound))
    if not report.is_dual:
        raise InternalConsistencyError(f"affine combination lost duality ({report.residual:.3e})")
    return out


def transport_dual(
    f: SampledFrame, g: SampledFrame, u, v, tol: float = DUAL_TOL
) -> tuple[SampledFrame, SampledFrame]:
    """``(UF, VG)`` for a dual pair ``(F, G)`` and operators with ``V U* = I``."""
    u = linalg.as_operator(u, f.dim)
    v = linalg.as_operator(v, f.dim)
    base = _require_dual(f, g, tol)
    gap = linalg.operator_norm(v @ linalg.adjoint(u) - linalg.identity(f.dim))
    if gap > TRANSPORT_TOL:
        raise TransportConditionViolated(f"||V U* - I|| = {gap:.3e}")
    uf, vg = f.transform(u), g.transform(v)
    scale = linalg.operator_norm(u) * linalg.operator_norm(v)
    report = is_dual_pair(uf, vg, scale * (base.residual + 1e-12) + gap + 1e-12)
    if not report.is_dual:
        raise InternalConsistencyError(f"transported pair has residual {report.residual:.3e}")
    return uf, vg


def dual_modifier_identity_check(
    f: SampledFrame, g: SampledFrame, u, tol: float = DUAL_TOL
) -> bool:
    """Whether ``(F, UG)`` is again a dual pair.

    Duality of ``(F, UG)`` forces ``U = I``; with ``(F, G)`` dual up to
    ``r`` the forced bound is ``||U - I|| <= (tol + r) / (1 - r)``, and a
    breach is reported as an internal inconsistency.
    """
    u = linalg.as_operator(u, f.dim)
    base = _require_dual(f, g, tol)
    modified = is_dual_pair(f, g.transform(u), tol)
    if modified.is_dual:
        forced = (tol + base.residual) / (1.0 - base.residual)
        drift = linalg.operator_norm(u - linalg.identity(f.dim))
        if drift > forced + 1e-12:
            raise InternalConsistencyError(f"(F, UG) dual but ||U - I|| = {drift:.3e}")
    return modified.is_dual


@dataclass(frozen=True)
class RemovalReport:
    index: int
    weight: float
    product: complex
    removable: bool
    constant: float
    guaranteed_lower: float
    sharpened_lower: float
    actual_lower: float
    tol: float


def _atom_index(f: SampledFrame, index: int) -> int:
    if not isinstance(index, (int, np.integer)) or not 0 <= index < len(f):
        raise IndexOutOfRange(f"atom index {index!r} outside 0..{len(f) - 1}")
    return int(index)


def removal_product(f: SampledFrame, g: SampledFrame, index: int) -> complex:
    """``mu({omega_0}) <F(omega_0), G(omega_0)>``."""
    index = _atom_index(f, index)
    return complex(f.space.weights[index] * linalg.inner(f.vectors[index], g.vectors[index]))


def remove_atom_check(
    f: SampledFrame, g: SampledFrame, index: int, tol: float = DUAL_TOL
) -> RemovalReport:
    """Lower frame bound of ``F`` with one atom deleted, guaranteed vs computed.

    With ``p = mu_0 <F_0, G_0>`` and ``C = B_G ||F_0||^2 / |1 - p|^2`` the
    reduced family keeps the lower bound ``B_G^{-1} / (1 + C mu_0)``. Since
    ``B_G^{-1} <= A_F`` the same argument also gives ``A_F / (1 + C mu_0)``,
    reported as ``sharpened_lower``.
    """
    index = _atom_index(f, index)
    _require_dual(f, g, tol)
    weight = f.space.weights[index]
    product = removal_product(f, g, index)
    if abs(product - 1.0) <= tol:
        raise DegenerateAtom(f"mu_0 <F_0, G_0> = {product:.6g} equals 1")

    b_g = bessel_bound(g)
    f0_sq = float(np.vdot(f.vectors[index], f.vectors[index]).real)
    constant = b_g * f0_sq / abs(1.0 - product) ** 2
    guaranteed = (1.0 / b_g) / (1.0 + constant * weight)
    a_f = frame_bounds(f).lower
    sharpened = a_f / (1.0 + constant * weight)

    reduced = frame_remove_atom(f, index)
    actual = frame_bounds(reduced).lower
    slack = 1e-9 * (1.0 + a_f)
    if actual <= 0.0 or actual < max(guaranteed, sharpened) - slack:
        raise InternalConsistencyError(
            f"reduced lower bound {actual:.6g} below guarantee {max(guaranteed, sharpened):.6g}"
        )
    return RemovalReport(
        index=index,
        weight=weight,
        product=product,
        removable=True,
        constant=constant,
        guaranteed_lower=guaranteed,
        sharpened_lower=sharpened,
        actual_lower=actual,
        tol=tol,
    )


class DegenerateRemoval(NamedTuple):
    omega0: list[int]
    incomplete: bool
    product: float


def degenerate_removal(f: SampledFrame, index: int, tol: float = RANK_TOL) -> DegenerateRemoval:
    """The atoms that must go together with ``omega_0`` when ``mu_0 <F_0, S^-1 F_0> = 1``.

    ``Omega_0`` collects the atoms with ``|<S^-1 F_0, F_i>|`` above ``tol``
    relative to its value ``1 / mu_0`` at ``omega_0``; the family without
    ``Omega_0`` is checked for (in)completeness. Every atom carries positive
    mass here, so no measure statement about ``Omega_0`` is made.
    """
    index = _atom_index(f, index)
    if not frame_bounds(f).is_frame:
        raise NotAFrame("degenerate removal needs a frame")
    dual = standard_dual(f)
    weight = f.space.weights[index]
    product = weight * linalg.inner(f.vectors[index], dual.vectors[index]).real
    if abs(product - 1.0) > tol:
        raise NotDegenerate(f"mu_0 <F_0, S^-1 F_0> = {product:.6g}")

    overlaps = np.abs(np.conj(f.vectors) @ dual.vectors[index])
    omega0 = [int(i) for i in np.flatnonzero(overlaps > tol / weight)]
    if index not in omega0:
        omega0 = sorted(omega0 + [index])
    rest = [i for i in range(len(f)) if i not in omega0]
    if rest:
        incomplete = not is_mu_complete(subframe(f, rest))
    else:
        incomplete = True
    if not incomplete:
        raise InternalConsistencyError("family without Omega_0 still spans H")
    return DegenerateRemoval(omega0, incomplete, float(product))


class RieszTransport(NamedTuple):
    theta: np.ndarray
    residual: float


def riesz_transport(f: SampledFrame, g: SampledFrame) -> RieszTransport:
    """``Theta = (T_G T_F*)^{-1}`` together with the residual of ``G = S_G Theta* F``."""
    check_compatible(f, g)
    if not is_riesz_basis(f):
        raise NotRieszBasis("F is not a Riesz basis")
    if not is_riesz_basis(g):
        raise NotRieszBasis("G is not a Riesz basis")
    theta = linalg.inverse(cross_operator(f, g))
    carry = frame_operator(g) @ linalg.adjoint(theta)
    predicted = f.vectors @ carry.T
    errs = np.linalg.norm(g.vectors - predicted, axis=1) / (1.0 + np.linalg.norm(g.vectors, axis=1))
    return RieszTransport(theta, float(np.max(errs)))

