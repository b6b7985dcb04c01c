"""Sphere bounds on the symbol-error probability over an SNR grid.

All bounds are chi-square tail expressions: a k-dimensional Gaussian with
per-coordinate variance ``1/rho`` leaves a sphere of squared radius ``R2``
with probability ``Q(k/2, R2 * rho / 2)``.  The single-sphere bounds apply
one full-dimensional sphere to every point; the multiple-sphere bounds
weight one sphere per facet dimension k by the exact fraction of
constellation points on k-facets, ``C(N,k) (K-1)^k / K^N``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .constellation import FiniteConstellation
from .lattices import Lattice
from .special import (
    RadiusKind,
    SphereRadiusSpec,
    clamp_probability,
    regularized_gamma_upper,
    sphere_radius_sq,
)


@dataclass(frozen=True, eq=False)
class SnrGrid:
    """A strictly increasing grid of SNR points.

    ``rho`` is the linear SNR (per-coordinate noise variance ``1/rho``);
    ``db`` holds the same points as ``10 log10(rho)``.
    """

    db: np.ndarray
    rho: np.ndarray

    def __post_init__(self):
        self.db.setflags(write=False)
        self.rho.setflags(write=False)
        if self.db.ndim != 1 or self.db.shape != self.rho.shape or self.db.size < 1:
            raise ValueError("SNR grid must be a non-empty 1-d sequence")
        if not (np.all(np.isfinite(self.db)) and np.all(np.isfinite(self.rho))):
            raise ValueError("SNR grid has non-finite entries")
        if np.any(self.rho <= 0.0):
            raise ValueError("linear SNR must be positive")
        if np.any(np.diff(self.db) <= 0.0):
            raise ValueError("SNR grid must be strictly increasing")

    def __len__(self) -> int:
        return int(self.db.size)

    @classmethod
    def from_db(cls, start: float, stop: float, step: float = 0.25) -> "SnrGrid":
        """Inclusive dB range, e.g. ``from_db(0, 30, 0.25)``."""
        if step <= 0.0:
            raise ValueError(f"step must be positive, got {step}")
        if stop < start:
            raise ValueError(f"empty range: start={start}, stop={stop}")
        db = np.arange(start, stop + step / 2.0, step, dtype=float)
        return cls.from_db_values(db)

    @classmethod
    def from_db_values(cls, values) -> "SnrGrid":
        db = np.asarray(values, dtype=float).copy()
        return cls(db=db, rho=10.0 ** (db / 10.0))

    @classmethod
    def default(cls) -> "SnrGrid":
        return cls.from_db(0.0, 30.0, 0.25)


class CurveKind(enum.Enum):
    SLB = "slb"
    SUB = "sub"
    MSLB = "mslb"
    MSUB = "msub"


@dataclass(frozen=True, eq=False)
class BoundCurve:
    """A bound evaluated on a grid, with the labels the CSV format carries."""

    kind: CurveKind
    lattice: str
    K: int | None
    snr_db: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.snr_db.setflags(write=False)
        self.values.setflags(write=False)


def _chi_square_tail(k: int, radius_sq: float, rho: float) -> float:
    return regularized_gamma_upper(0.5 * k, 0.5 * radius_sq * rho)


def slb(lattice: Lattice, grid: SnrGrid) -> BoundCurve:
    """Single-sphere lower bound: every point's cell replaced by the
    volume-matched N-sphere, ``Q(N/2, R_N**2 rho / 2)``.

    Depends only on the dimension.  A valid lower bound only where the
    sphere approximation dominates boundary effects (high SNR); the
    multiple-sphere version repairs exactly that.
    """
    n = lattice.dimension
    r_sq = sphere_radius_sq(SphereRadiusSpec(k=n, n=n, kind=RadiusKind.MSLB_RADIUS))
    values = np.array([clamp_probability(_chi_square_tail(n, r_sq, r)) for r in grid.rho])
    return BoundCurve(kind=CurveKind.SLB, lattice=lattice.name, K=None,
                      snr_db=grid.db.copy(), values=values)


def sub(lattice: Lattice, grid: SnrGrid) -> BoundCurve:
    """Single-sphere upper bound from the inscribed (packing) sphere:
    ``Q(N/2, d_min**2 rho / 8)``."""
    n = lattice.dimension
    r_sq = sphere_radius_sq(
        SphereRadiusSpec(k=n, n=n, kind=RadiusKind.MSUB_RADIUS, min_dist=lattice.d_min)
    )
    values = np.array([clamp_probability(_chi_square_tail(n, r_sq, r)) for r in grid.rho])
    return BoundCurve(kind=CurveKind.SUB, lattice=lattice.name, K=None,
                      snr_db=grid.db.copy(), values=values)


def facet_weights(n: int, big_k: int) -> np.ndarray:
    """Fraction of constellation points on k-facets, k = 0..N.

    ``C(N,k) (K-1)^k / K^N`` computed as an exact binomial probability,
    ``C(N,k) p^k (1-p)^(N-k)`` with ``p = (K-1)/K``: no overflow for any K
    and relative error well below 1e-12.  The weights sum to 1.
    """
    p = (big_k - 1.0) / big_k
    q = 1.0 / big_k
    return np.array([math.comb(n, k) * p**k * q ** (n - k) for k in range(n + 1)])


def _multi_sphere(constellation: FiniteConstellation, grid: SnrGrid, kind: RadiusKind,
                  curve_kind: CurveKind) -> BoundCurve:
    lat = constellation.lattice
    n = lat.dimension
    big_k = constellation.K
    weights = facet_weights(n, big_k)
    radii = [None] + [
        sphere_radius_sq(
            SphereRadiusSpec(k=k, n=n, kind=kind, mean_norm=lat.mean_norm,
                             min_dist=lat.d_min)
        )
        for k in range(1, n + 1)
    ]
    values = np.empty(len(grid))
    for i, rho in enumerate(grid.rho):
        # k = 0 facets (vertices' inner cones) never err in this model: I_0 = 1.
        acc = weights[0]
        for k in range(1, n + 1):
            inside = 1.0 - _chi_square_tail(k, radii[k], rho)
            acc += weights[k] * inside
        values[i] = clamp_probability(1.0 - acc)
    return BoundCurve(kind=curve_kind, lattice=lat.name, K=big_k,
                      snr_db=grid.db.copy(), values=values)


def mslb(constellation: FiniteConstellation, grid: SnrGrid) -> BoundCurve:
    """Multiple-sphere lower bound.

    Each k-facet point keeps a k-dimensional decision cell, replaced by the
    volume-matched k-sphere (radius from ``W`` for k < N, from the unit cell
    for k = N):
    ``P = 1 - sum_k C(N,k)(K-1)^k/K^N * (1 - Q(k/2, R_k**2 rho/2))``.
    A true lower bound at every SNR, converging to the single-sphere bound
    as K grows.
    """
    return _multi_sphere(constellation, grid, RadiusKind.MSLB_RADIUS, CurveKind.MSLB)


def msub(constellation: FiniteConstellation, grid: SnrGrid) -> BoundCurve:
    """Multiple-sphere upper bound: same decomposition with every sphere
    shrunk to the inscribed one, ``Q(k/2, d_min**2 rho / 8)`` per facet
    dimension."""
    return _multi_sphere(constellation, grid, RadiusKind.MSUB_RADIUS, CurveKind.MSUB)


def format_sig(x: float) -> str:
    """Format with 12 significant digits (CSV convention)."""
    return format(float(x), ".12g")


def curve_csv_rows(curve: BoundCurve) -> list[str]:
    """CSV lines for a bound curve: header ``snr_db,value,kind,lattice,K``.

    ``K`` stays empty for the single-sphere bounds, which do not depend on it.
    """
    rows = ["snr_db,value,kind,lattice,K"]
    k_field = "" if curve.K is None else str(curve.K)
    for db, value in zip(curve.snr_db, curve.values):
        rows.append(
            f"{format_sig(db)},{format_sig(value)},{curve.kind.value},{curve.lattice},{k_field}"
        )
    return rows


def write_curve_csv(curve: BoundCurve, path) -> None:
    Path(path).write_text("\n".join(curve_csv_rows(curve)) + "\n")
