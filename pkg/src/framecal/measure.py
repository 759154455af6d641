"""Finitely-atomic measure spaces and square-integrable coefficient vectors."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from framecal.errors import (
    DimensionMismatch,
    DuplicateLabel,
    IndexOutOfRange,
    NonPositiveWeight,
    SpaceMismatch,
    WouldBeEmpty,
)


@dataclass(frozen=True)
class MeasureSpace:
    """An ordered list of labelled atoms with strictly positive weights."""

    labels: tuple[str, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        if len(self.labels) != len(self.weights):
            raise DimensionMismatch("labels and weights differ in length")
        if not self.labels:
            raise WouldBeEmpty("a measure space needs at least one atom")
        for label, w in zip(self.labels, self.weights):
            if not (math.isfinite(w) and w > 0.0):
                raise NonPositiveWeight(f"atom {label!r} has weight {w!r}")
        seen: set[str] = set()
        for label in self.labels:
            if label in seen:
                raise DuplicateLabel(f"label {label!r} occurs more than once")
            seen.add(label)

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def w(self) -> np.ndarray:
        return np.asarray(self.weights, dtype=float)

    @property
    def total_mass(self) -> float:
        # correctly rounded, so removal and re-insertion conserve it exactly
        return math.fsum(self.weights)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise IndexOutOfRange(f"no atom labelled {label!r}") from None


def build_space(atoms: Iterable[tuple[str, float]]) -> MeasureSpace:
    atoms = list(atoms)
    return MeasureSpace(
        labels=tuple(str(label) for label, _ in atoms),
        weights=tuple(float(w) for _, w in atoms),
    )


def uniform_space(m: int, weight: float = 1.0, prefix: str = "w") -> MeasureSpace:
    return build_space((f"{prefix}{i}", weight) for i in range(m))


def _check_index(space: MeasureSpace, index: int) -> int:
    if not isinstance(index, (int, np.integer)) or not 0 <= index < len(space):
        raise IndexOutOfRange(f"atom index {index!r} outside 0..{len(space) - 1}")
    return int(index)


def remove_atom(space: MeasureSpace, index: int) -> MeasureSpace:
    index = _check_index(space, index)
    if len(space) == 1:
        raise WouldBeEmpty("cannot remove the only atom")
    keep = [i for i in range(len(space)) if i != index]
    return MeasureSpace(
        labels=tuple(space.labels[i] for i in keep),
        weights=tuple(space.weights[i] for i in keep),
    )


def insert_atom(space: MeasureSpace, index: int, label: str, weight: float) -> MeasureSpace:
    if not 0 <= index <= len(space):
        raise IndexOutOfRange(f"insertion index {index} outside 0..{len(space)}")
    labels = list(space.labels)
    weights = list(space.weights)
    labels.insert(index, label)
    weights.insert(index, float(weight))
    return MeasureSpace(tuple(labels), tuple(weights))


@dataclass(frozen=True, eq=False)
class CoefficientVector:
    """An element of L^2(space): one complex value per atom."""

    space: MeasureSpace
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.complex128)
        if values.shape != (len(self.space),):
            raise DimensionMismatch(
                f"{values.shape} coefficients for a space of {len(self.space)} atoms"
            )
        object.__setattr__(self, "values", values)

    def inner(self, other: "CoefficientVector") -> complex:
        """Weighted inner product sum_i w_i phi_i conj(psi_i)."""
        if other.space != self.space:
            raise SpaceMismatch("coefficient vectors live on different spaces")
        return complex(np.sum(self.space.w * self.values * np.conj(other.values)))

    @property
    def weighted_norm(self) -> float:
        return math.sqrt(float(np.sum(self.space.w * np.abs(self.values) ** 2)))

    def __mul__(self, c: complex) -> "CoefficientVector":
        return CoefficientVector(self.space, self.values * c)

    __rmul__ = __mul__

    def __add__(self, other: "CoefficientVector") -> "CoefficientVector":
        if other.space != self.space:
            raise SpaceMismatch("coefficient vectors live on different spaces")
        return CoefficientVector(self.space, self.values + other.values)

    def __sub__(self, other: "CoefficientVector") -> "CoefficientVector":
        return self + (-1.0) * other


def coefficients(space: MeasureSpace, values: Sequence[complex]) -> CoefficientVector:
    return CoefficientVector(space, np.asarray(values, dtype=np.complex128))
