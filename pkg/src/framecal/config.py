"""Tolerance set shared by the library defaults and the CLI."""

from __future__ import annotations

import math
import os
from dataclasses import asdict, dataclass, replace

from framecal.errors import InputError

ENV_TOL = "FRAMECAL_TOL"


@dataclass(frozen=True)
class Tolerances:
    classify: float = 1e-8  # frame / tight / Parseval classification
    dual: float = 1e-8  # ||I - T_G T_F*|| accepted as an exact dual pair
    rank: float = 1e-10  # relative singular-value cutoff
    bound: float = 1e-9  # slack on guaranteed frame bounds

    def as_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_env(cls, environ=None) -> "Tolerances":
        """Defaults, with ``FRAMECAL_TOL`` overriding the classification and dual tolerances."""
        environ = os.environ if environ is None else environ
        raw = environ.get(ENV_TOL)
        base = cls()
        if raw is None or raw == "":
            return base
        try:
            tol = float(raw)
        except ValueError:
            raise InputError(f"{ENV_TOL}={raw!r} is not a number") from None
        if not (math.isfinite(tol) and tol > 0.0):
            raise InputError(f"{ENV_TOL} must be positive and finite, got {raw!r}")
        return replace(base, classify=tol, dual=tol)
