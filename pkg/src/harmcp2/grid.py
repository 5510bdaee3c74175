"""Two-chart quadrature grid on the Riemann sphere.

Each chart (z, and w = 1/z) carries a cell-centred N x N lattice on the
square [-L, L]^2.  A smooth partition of unity in log|z| splits the sphere
between the charts, so every quadrature weight is h^2 * chi * lambda^2 with
lambda^2 = 4 / (1 + |z|^2)^2 the round metric of the unit sphere.  Compactly
supported smooth integrands make the midpoint rule spectrally accurate.

Derivatives are fourth-order finite differences along each lattice axis,
applied as dense N x N matrices (one-sided near the box edges).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

__all__ = ["ChartGrid", "GridError", "build_grid", "fd_matrix", "CHARTS", "BOX_HALF_WIDTH"]

CHARTS = ("z", "w")
BOX_HALF_WIDTH = 1.8
# chi_z = 1 for |z| < 1/BLEND and 0 for |z| > BLEND
BLEND = 1.5
FD_ORDER = 4


class GridError(ValueError):
    pass


def _psi(t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t)
    pos = t > 0
    out[pos] = np.exp(-1.0 / t[pos])
    return out


def smooth_step(t: np.ndarray) -> np.ndarray:
    """C-infinity step: 0 for t <= 0, 1 for t >= 1."""
    t = np.asarray(t, dtype=float)
    a, b = _psi(t), _psi(1.0 - t)
    return a / (a + b)


def chart_weight(z: np.ndarray) -> np.ndarray:
    """Partition-of-unity weight of a chart point; chi(z) + chi(1/z) = 1."""
    r = np.abs(z)
    t = (np.log(r) / np.log(BLEND) + 1.0) / 2.0
    return 1.0 - smooth_step(t)


def _stencil_weights(offsets: np.ndarray, deriv: int) -> np.ndarray:
    # Taylor matching: sum_j w_j o_j^m / m! = delta(m, deriv)
    n = len(offsets)
    V = np.array([[o**m / np.prod(np.arange(1, m + 1)) for o in offsets] for m in range(n)])
    rhs = np.zeros(n)
    rhs[deriv] = 1.0
    return np.linalg.solve(V, rhs)


@lru_cache(maxsize=None)
def fd_matrix(n: int, h: float, deriv: int) -> np.ndarray:
    """Dense differentiation matrix of order FD_ORDER on n uniform nodes."""
    width = FD_ORDER + deriv
    if deriv == 2 and width % 2 == 0:
        width -= 1  # central 5-point second derivative is already fourth order
    D = np.zeros((n, n))
    for i in range(n):
        lo = i - width // 2
        lo = min(max(lo, 0), n - width)
        idx = np.arange(lo, lo + width)
        if deriv == 2 and (lo != i - width // 2):
            # one-sided second derivative needs one more point for fourth order
            lo2 = min(max(i - (width + 1) // 2, 0), n - width - 1)
            idx = np.arange(lo2, lo2 + width + 1)
        D[i, idx] = _stencil_weights((idx - i).astype(float), deriv) / h**deriv
    D.setflags(write=False)
    return D


@dataclass(frozen=True, eq=False)
class ChartGrid:
    """Nodes, weights and derivative operators of the two-chart grid.

    Arrays are indexed [chart, i, j] with chart 0 = z, chart 1 = w and
    coordinate x_i + i y_j (meshgrid 'ij').
    """

    N: int
    half_width: float
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    active: np.ndarray = field(repr=False)
    lam2: np.ndarray = field(repr=False)

    @property
    def h(self) -> float:
        return 2.0 * self.half_width / self.N

    @property
    def shape(self) -> tuple[int, int, int]:
        return (2, self.N, self.N)

    def integrate(self, values: np.ndarray) -> float:
        """Quadrature of a real scalar field given at every node."""
        return float(np.sum((self.weights * values).ravel()))

    def sup(self, values: np.ndarray) -> float:
        """Maximum of a non-negative node field over active nodes."""
        return float(np.max(values[self.active])) if self.active.any() else 0.0

    def dx(self, a: np.ndarray) -> np.ndarray:
        return np.einsum("ij,cjk...->cik...", fd_matrix(self.N, self.h, 1), a)

    def dy(self, a: np.ndarray) -> np.ndarray:
        return np.einsum("ij,ckj...->cki...", fd_matrix(self.N, self.h, 1), a)

    def dxx(self, a: np.ndarray) -> np.ndarray:
        return np.einsum("ij,cjk...->cik...", fd_matrix(self.N, self.h, 2), a)

    def dyy(self, a: np.ndarray) -> np.ndarray:
        return np.einsum("ij,ckj...->cki...", fd_matrix(self.N, self.h, 2), a)

    def dz(self, a: np.ndarray) -> np.ndarray:
        return 0.5 * (self.dx(a) - 1j * self.dy(a))

    def dzbar(self, a: np.ndarray) -> np.ndarray:
        return 0.5 * (self.dx(a) + 1j * self.dy(a))

    def sphere_points(self) -> np.ndarray:
        """Unit-sphere coordinates (x1, x2, x3) of every node, shape (2, N, N, 3).

        The z-chart is stereographic projection from the north pole; the
        w-chart uses w = 1/z.
        """
        z = self.nodes.copy()
        z[1] = 1.0 / z[1]
        r2 = np.abs(z) ** 2
        return np.stack([2 * z.real / (1 + r2), 2 * z.imag / (1 + r2), (r2 - 1) / (1 + r2)], axis=-1)


def build_grid(N: int, half_width: float = BOX_HALF_WIDTH) -> ChartGrid:
    """Deterministic two-chart grid with N x N cells per chart.

    For odd N the lattice is shifted by half a cell so that the chart
    origins (the poles) are never nodes.
    """
    if not isinstance(N, (int, np.integer)) or N < 8:
        raise GridError(f"grid resolution must be an integer >= 8, got {N!r}")
    N = int(N)
    h = 2.0 * half_width / N
    x = -half_width + (np.arange(N) + 0.5) * h
    if N % 2:
        x = x + 0.5 * h
    X, Y = np.meshgrid(x, x, indexing="ij")
    z = X + 1j * Y
    nodes = np.stack([z, z])
    chi = chart_weight(nodes)
    lam2 = 4.0 / (1.0 + np.abs(nodes) ** 2) ** 2
    active = chi > 0
    w = h * h * chi * lam2
    w *= 4.0 * np.pi / np.sum(w.ravel())
    for a in (nodes, w, active, lam2):
        a.setflags(write=False)
    return ChartGrid(N=N, half_width=half_width, nodes=nodes, weights=w, active=active, lam2=lam2)
