"""Maps S^2 -> CP^2 and tangent fields sampled on a ChartGrid.

A map is stored through unit representatives u in C^3 at every node of
both charts, together with finite-difference coordinate derivatives.
A tangent vector at [u] is the C^3 vector X = T(u) of the homomorphism
T: [u] -> [u]^perp, so X is orthogonal to u and rotates with the phase
of u.  In this model the Fubini-Study metric of holomorphic sectional
curvature 1 is g(X, Y) = 4 Re <X, Y> and the complex structure is
multiplication by i.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .algebra import UniPoly, Vec3, cross, remove_content
from .curves import CurveError, HoloCurve, evaluate_triple, make_curve
from .grid import CHARTS, ChartGrid

__all__ = [
    "SampledMap",
    "SampledField",
    "SamplingError",
    "herm",
    "project",
    "fs_norm",
    "sample_map",
    "curve_rep",
    "map_from_curve",
    "TRANSFORMS",
]

TRANSFORMS = ("none", "gauss-prime")


class SamplingError(ValueError):
    pass


def herm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Node-wise <a, b> = sum a_i conj(b_i) over the last axis."""
    return np.einsum("...i,...i->...", a, np.conj(b))


def project(X: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Orthogonal projection onto the complement of the unit vector u."""
    return X - herm(X, u)[..., None] * u


def fs_norm(X: np.ndarray) -> np.ndarray:
    """Fubini-Study length of tangent vectors in the homomorphism model."""
    return 2.0 * np.sqrt(np.sum(np.abs(X) ** 2, axis=-1))


def _normalize(v: np.ndarray) -> np.ndarray:
    n = np.sqrt(np.sum(np.abs(v) ** 2, axis=-1))
    if not np.all(np.isfinite(v)) or np.any(n < 1e-300):
        raise SamplingError("representative vanishes or is singular at a grid node (node lies on the exceptional set)")
    return v / n[..., None]


@dataclass(frozen=True, eq=False)
class SampledMap:
    grid: ChartGrid
    u: np.ndarray
    ux: np.ndarray
    uy: np.ndarray
    uxx: np.ndarray
    uxy: np.ndarray
    uyy: np.ndarray

    @property
    def uz(self) -> np.ndarray:
        return 0.5 * (self.ux - 1j * self.uy)

    @property
    def uzbar(self) -> np.ndarray:
        return 0.5 * (self.ux + 1j * self.uy)

    @property
    def uzz(self) -> np.ndarray:
        return 0.25 * (self.uxx - self.uyy - 2j * self.uxy)

    @property
    def uzbarzbar(self) -> np.ndarray:
        return 0.25 * (self.uxx - self.uyy + 2j * self.uxy)

    @property
    def uzzbar(self) -> np.ndarray:
        return 0.25 * (self.uxx + self.uyy)

    def perp(self, X: np.ndarray) -> np.ndarray:
        return project(X, self.u)

    @property
    def a1(self) -> np.ndarray:
        """A'(u) = pi_perp du/dz."""
        return self.perp(self.uz)

    @property
    def a2(self) -> np.ndarray:
        """A''(u) = pi_perp du/dzbar."""
        return self.perp(self.uzbar)

    def field(self, values: np.ndarray) -> "SampledField":
        return SampledField(self.grid, values, self.u)


def sample_map(rep: Callable[[np.ndarray, str], np.ndarray], grid: ChartGrid) -> SampledMap:
    """Sample a map given by a (possibly unnormalised) representative.

    ``rep(points, chart)`` returns C^3 vectors of shape points.shape + (3,);
    it must be smooth and nonvanishing on the chart box.
    """
    u = _normalize(np.stack([rep(grid.nodes[c], ch) for c, ch in enumerate(CHARTS)]))
    ux, uy = grid.dx(u), grid.dy(u)
    return SampledMap(grid, u, ux, uy, grid.dxx(u), grid.dy(ux), grid.dyy(u))


@dataclass(frozen=True, eq=False)
class SampledField:
    """Tangent field along a sampled map, relative to the base representatives."""

    grid: ChartGrid
    values: np.ndarray
    base: np.ndarray

    def rebase(self, target: np.ndarray) -> "SampledField":
        """Express the same tangent field relative to other unit representatives."""
        phase = herm(target, self.base)
        return SampledField(self.grid, phase[..., None] * self.values, target)

    def on(self, m: SampledMap) -> "SampledField":
        return self if self.base is m.u else self.rebase(m.u)

    def norm(self) -> np.ndarray:
        return fs_norm(self.values)

    def sup_norm(self) -> float:
        return self.grid.sup(self.norm())

    def __add__(self, other: "SampledField") -> "SampledField":
        return SampledField(self.grid, self.values + other.rebase(self.base).values, self.base)

    def __sub__(self, other: "SampledField") -> "SampledField":
        return SampledField(self.grid, self.values - other.rebase(self.base).values, self.base)

    def scale(self, c: float) -> "SampledField":
        return SampledField(self.grid, c * self.values, self.base)

    def orthogonality_defect(self) -> float:
        return float(np.max(np.abs(herm(self.values, self.base))))


# --- representatives of holomorphic curves and their Gauss transforms ---

def _chart_triple(F: Vec3, chart: str) -> Vec3:
    if chart == "z":
        return F
    K = F.degree
    return Vec3([c.reversed(K) for c in F])


def _content(F: Vec3) -> UniPoly:
    W = cross(F, F.dz())
    if W.is_zero():
        raise CurveError("Gauss transform needs a full holomorphic curve")
    _, c = remove_content(W)
    return c


def curve_rep(F: Vec3, transform: str = "none") -> Callable[[np.ndarray, str], np.ndarray]:
    """Node-wise representative of [F] or of its Gauss transform G'([F]).

    The Gauss representative pi_F(F') is divided by the content of F x F'
    in each chart, which removes its zeros at ramification points.
    """
    if transform not in TRANSFORMS:
        raise SamplingError(f"unknown transform {transform!r}")
    charts = {ch: _chart_triple(F, ch) for ch in CHARTS}
    contents = {}
    if transform == "gauss-prime":
        contents = {ch: _content(Fc) for ch, Fc in charts.items()}

    def rep(points: np.ndarray, chart: str) -> np.ndarray:
        Fc = charts[chart]
        val, der = evaluate_triple(Fc, points, "z", Fc.degree)
        if transform == "none":
            return val
        nF = np.sum(np.abs(val) ** 2, axis=-1)
        phi = nF[..., None] * der - herm(der, val)[..., None] * val
        c = contents[chart]
        cv = np.asarray(c(points)) if c.degree > 0 else complex(c.coeffs[0])
        return phi / (nF * cv)[..., None]

    return rep


def map_from_curve(curve: HoloCurve | Vec3, grid: ChartGrid, transform: str = "none") -> SampledMap:
    F = curve.F if isinstance(curve, HoloCurve) else curve
    if transform == "gauss-prime":
        c = curve if isinstance(curve, HoloCurve) else make_curve(F)
        if not c.full:
            raise CurveError("Gauss transform needs a full holomorphic curve")
    return sample_map(curve_rep(F, transform), grid)
