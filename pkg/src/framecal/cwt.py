"""Discretized affine-group (wavelet) frames.

Convention
----------
Grid nodes are pairs ``(a, b)`` with ``a > 0`` the **scale** and ``b`` the
**translation**. The atom at ``(a, b)`` is

    psi_{a,b}(t) = a^{-1/2} psi((t - b) / a)

and carries the measure ``da db / a^2``, so the ``1/a^2`` density always sits
on the scale coordinate (the first grid coordinate). With the Fourier
transform ``psi_hat(xi) = int psi(t) exp(-i xi t) dt`` and a real wavelet,

    int int |<f, psi_{a,b}>|^2 da db / a^2 = C_psi ||f||^2,
    C_psi = int_0^inf |psi_hat(xi)|^2 / xi dxi.

Signals live on a periodic grid ``t_n = n dt`` of ``dim`` samples; atoms are
periodized and scaled by ``sqrt(dt)`` so that the Euclidean inner product is
the Riemann sum of the L^2 inner product. Only scales in ``[amin, amax]``
are sampled, so tightness holds on the frequency band whose admissibility
mass those scales cover.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from framecal.errors import DimensionMismatch, GridTooCoarse, InputError, NonPositiveGrid
from framecal.frame import SampledFrame
from framecal.measure import MeasureSpace

MIN_SAMPLES_PER_SCALE = 4


@dataclass(frozen=True)
class WaveletSpec:
    """A mother wavelet on a periodic time grid.

    ``psi`` evaluates the wavelet at arbitrary times; ``profile`` evaluates
    ``|psi_hat(xi)|^2``. ``support`` is a radius beyond which ``psi`` is
    negligible, used to truncate periodization.
    """

    name: str
    psi: Callable[[np.ndarray], np.ndarray]
    profile: Callable[[np.ndarray], np.ndarray]
    dim: int = 256
    dt: float = 1.0
    support: float = 10.0

    @property
    def times(self) -> np.ndarray:
        return (np.arange(self.dim) - self.dim // 2) * self.dt

    @property
    def time_samples(self) -> np.ndarray:
        return self.psi(self.times)

    def l2_norm(self, n: int = 200001) -> float:
        t = np.linspace(-self.support, self.support, n)
        vals = np.abs(self.psi(t)) ** 2
        return math.sqrt(float(np.sum(vals) * (t[1] - t[0])))

    def mean(self, n: int = 200001) -> complex:
        t = np.linspace(-self.support, self.support, n)
        return complex(np.sum(self.psi(t)) * (t[1] - t[0]))

    def validate(self) -> None:
        if abs(self.l2_norm() - 1.0) > 1e-6:
            raise InputError(f"{self.name}: ||psi||_2 = {self.l2_norm():.8f}, expected 1")
        if abs(self.profile(np.array([0.0]))[0]) > 1e-12 or abs(self.mean()) > 1e-8:
            raise InputError(f"{self.name}: psi does not have zero mean")


_MEXICAN_HAT_AMP = 2.0 / (math.sqrt(3.0) * math.pi**0.25)


def _mexican_hat(t: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    return _MEXICAN_HAT_AMP * (1.0 - t * t) * np.exp(-0.5 * t * t)


def _mexican_hat_profile(xi: np.ndarray) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    return 2.0 * math.pi * _MEXICAN_HAT_AMP**2 * xi**4 * np.exp(-xi * xi)


def mexican_hat(dim: int = 256, dt: float = 1.0) -> WaveletSpec:
    """Unit-norm negative second derivative of a Gaussian.

    ``psi_hat(xi) = A sqrt(2 pi) xi^2 exp(-xi^2 / 2)``, hence
    ``C_psi = pi A^2 = 4 sqrt(pi) / 3``.
    """
    return WaveletSpec("mexican-hat", _mexican_hat, _mexican_hat_profile, dim=dim, dt=dt)


WAVELETS: dict[str, Callable[..., WaveletSpec]] = {"mexican-hat": mexican_hat}


def default_xi_grid(n: int = 2**16, lo: float = 1e-8, hi: float = 1e4) -> np.ndarray:
    return np.geomspace(lo, hi, n + 1)


def admissibility_constant(spec, xi_grid: np.ndarray | None = None) -> float:
    """Midpoint-rule value of ``int |psi_hat(xi)|^2 / xi dxi`` over the cells of ``xi_grid``.

    ``spec`` is a ``WaveletSpec`` or a bare profile callable. ``xi_grid``
    holds the cell edges (strictly positive, increasing).
    """
    profile = spec.profile if isinstance(spec, WaveletSpec) else spec
    edges = default_xi_grid() if xi_grid is None else np.asarray(xi_grid, dtype=float)
    if edges.ndim != 1 or edges.size < 2:
        raise NonPositiveGrid("need at least two grid edges")
    if edges[0] <= 0.0 or np.any(np.diff(edges) <= 0.0):
        raise NonPositiveGrid("xi grid must be strictly positive and increasing")
    mid = 0.5 * (edges[1:] + edges[:-1])
    return float(np.sum(profile(mid) / mid * np.diff(edges)))


@dataclass(frozen=True, eq=False)
class AffineGrid:
    """Log-spaced scales times uniform translations, midpoint weights.

    Scale cells have geometric edges and the node is their geometric mean,
    so ``da / a_j^2`` integrates each cell exactly:
    ``(e_{j+1} - e_j) / (e_j e_{j+1}) = 1/e_j - 1/e_{j+1}``.
    """

    a_edges: np.ndarray
    b_values: np.ndarray
    period: float
    a_values: np.ndarray = field(init=False)

    def __post_init__(self):
        edges = np.asarray(self.a_edges, dtype=float)
        if edges.size < 2 or edges[0] <= 0.0 or np.any(np.diff(edges) <= 0.0):
            raise NonPositiveGrid("scale edges must be positive and increasing")
        if len(self.b_values) < 1 or self.period <= 0.0:
            raise NonPositiveGrid("translation grid must be non-empty with positive period")
        object.__setattr__(self, "a_edges", edges)
        object.__setattr__(self, "b_values", np.asarray(self.b_values, dtype=float))
        object.__setattr__(self, "a_values", np.sqrt(edges[1:] * edges[:-1]))

    @property
    def delta_a(self) -> np.ndarray:
        return np.diff(self.a_edges)

    @property
    def delta_b(self) -> float:
        return self.period / len(self.b_values)

    @property
    def weights(self) -> np.ndarray:
        """Row-major in ``(a, b)``: ``delta_a_j * delta_b / a_j^2``."""
        per_scale = self.delta_a * self.delta_b / self.a_values**2
        return np.repeat(per_scale, len(self.b_values))

    @property
    def covered_measure(self) -> float:
        """``int int da db / a^2`` over the covered rectangle."""
        return self.period * (1.0 / self.a_edges[0] - 1.0 / self.a_edges[-1])


def log_affine_grid(amin: float, amax: float, na: int, nb: int, period: float) -> AffineGrid:
    if not (amin > 0.0 and amax > amin):
        raise NonPositiveGrid(f"need 0 < amin < amax, got {amin}, {amax}")
    if na < 1 or nb < 1:
        raise NonPositiveGrid(f"need na, nb >= 1, got {na}, {nb}")
    edges = np.geomspace(amin, amax, na + 1)
    b = np.arange(nb) * (period / nb)
    return AffineGrid(edges, b, period)


def build_cwt_frame(spec: WaveletSpec, grid: AffineGrid, signal_dim: int) -> SampledFrame:
    """One atom per grid node, in row-major ``(a, b)`` order."""
    if signal_dim != spec.dim:
        raise DimensionMismatch(f"signal_dim {signal_dim} does not match wavelet grid {spec.dim}")
    period = spec.dim * spec.dt
    if not math.isclose(grid.period, period, rel_tol=1e-12):
        raise DimensionMismatch(f"grid period {grid.period} differs from signal period {period}")
    if grid.a_edges[0] < MIN_SAMPLES_PER_SCALE * spec.dt:
        raise GridTooCoarse(
            f"smallest scale {grid.a_edges[0]:.4g} spans fewer than "
            f"{MIN_SAMPLES_PER_SCALE} samples of width {spec.dt}"
        )

    t = np.arange(spec.dim) * spec.dt
    reach = int(math.ceil(spec.support * grid.a_values[-1] / period)) + 1
    images = np.arange(-reach, reach + 1) * period
    rows = []
    labels = []
    for a in grid.a_values:
        # (b, t, image)
        arg = (t[None, :, None] - grid.b_values[:, None, None] - images[None, None, :]) / a
        atoms = spec.psi(arg).sum(axis=2) * math.sqrt(spec.dt / a)
        rows.append(atoms)
        labels.extend(f"a={a:.12g},b={b:.12g}" for b in grid.b_values)
    vectors = np.concatenate(rows, axis=0).astype(np.complex128)
    space = MeasureSpace(tuple(labels), tuple(float(w) for w in grid.weights))
    return SampledFrame(space, vectors)


def signed_frequencies(dim: int, dt: float = 1.0) -> np.ndarray:
    """Angular frequency of each DFT bin."""
    return 2.0 * math.pi * np.fft.fftfreq(dim, d=dt)


def covered_fraction(spec: WaveletSpec, omega: float, amin: float, amax: float, n: int = 4096) -> float:
    """Share of ``C_psi`` captured at frequency ``omega`` by scales in ``[amin, amax]``.

    Uses ``|psi_hat(-xi)| = |psi_hat(xi)|`` (real wavelets).
    """
    w = abs(omega)
    if w == 0.0:
        return 0.0
    part = admissibility_constant(spec, np.geomspace(amin * w, amax * w, n + 1))
    return part / admissibility_constant(spec)


def resolved_band(spec: WaveletSpec, amin: float, amax: float, threshold: float = 0.95) -> np.ndarray:
    """DFT bins whose covered admissibility fraction reaches ``threshold``."""
    omegas = signed_frequencies(spec.dim, spec.dt)
    total = admissibility_constant(spec)
    bins = []
    for k, w in enumerate(omegas):
        if w == 0.0:
            continue
        part = admissibility_constant(spec, np.geomspace(amin * abs(w), amax * abs(w), 4097))
        if part / total >= threshold:
            bins.append(k)
    return np.asarray(bins, dtype=int)


def band_limited_probes(dim: int, bins, count: int, seed: int = 42) -> np.ndarray:
    """``count`` unit vectors with random complex spectrum supported on ``bins``."""
    bins = np.asarray(bins, dtype=int)
    if bins.size == 0:
        raise InputError("empty frequency band")
    rng = np.random.default_rng(seed)
    spectra = np.zeros((count, dim), dtype=np.complex128)
    spectra[:, bins] = rng.standard_normal((count, bins.size)) + 1j * rng.standard_normal(
        (count, bins.size)
    )
    probes = np.fft.ifft(spectra, axis=1)
    return probes / np.linalg.norm(probes, axis=1)[:, None]


class TightnessReport(NamedTuple):
    min_ratio: float
    max_ratio: float
    ratios: np.ndarray


def tightness_report(
    f: SampledFrame,
    c_psi: float,
    probes: int,
    band=None,
    seed: int = 42,
) -> TightnessReport:
    """Rayleigh quotients ``<S_F x, x> / c_psi`` over random unit probes.

    With ``band`` (DFT bins) the probes are band-limited to it; otherwise
    they are Gaussian on the whole space.
    """
    if probes < 1:
        raise InputError("need at least one probe")
    if band is None:
        rng = np.random.default_rng(seed)
        xs = rng.standard_normal((probes, f.dim)) + 1j * rng.standard_normal((probes, f.dim))
        xs /= np.linalg.norm(xs, axis=1)[:, None]
    else:
        xs = band_limited_probes(f.dim, band, probes, seed)
    coeffs = xs @ np.conj(f.vectors).T
    energy = np.sum(f.space.w * np.abs(coeffs) ** 2, axis=1)
    ratios = energy / c_psi
    return TightnessReport(float(ratios.min()), float(ratios.max()), ratios)


@dataclass
class CwtConfig:
    wavelet: str = "mexican-hat"
    amin: float = 4.0
    amax: float = 32.0
    na: int = 32
    nb: int = 64
    dim: int = 256
    dt: float = 1.0
    probes: int = 20
    seed: int = 42
    band_threshold: float = 0.95
    ratio_low: float = 0.9
    ratio_high: float = 1.1


def run_cwt_experiment(cfg: CwtConfig) -> dict:
    if cfg.wavelet not in WAVELETS:
        raise InputError(f"unknown wavelet {cfg.wavelet!r}; choose from {sorted(WAVELETS)}")
    spec = WAVELETS[cfg.wavelet](dim=cfg.dim, dt=cfg.dt)
    grid = log_affine_grid(cfg.amin, cfg.amax, cfg.na, cfg.nb, cfg.dim * cfg.dt)
    frame = build_cwt_frame(spec, grid, cfg.dim)
    c_psi = admissibility_constant(spec)
    band = resolved_band(spec, cfg.amin, cfg.amax, cfg.band_threshold)
    report = tightness_report(frame, c_psi, cfg.probes, band=band, seed=cfg.seed)
    return {
        "c_psi": c_psi,
        "min_ratio": report.min_ratio,
        "max_ratio": report.max_ratio,
        "within_band": cfg.ratio_low <= report.min_ratio and report.max_ratio <= cfg.ratio_high,
        "band_bins": [int(k) for k in band],
        "atoms": len(frame),
    }
