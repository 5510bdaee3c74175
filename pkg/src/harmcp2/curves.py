"""Full holomorphic maps S^2 -> CP^2 given by coprime polynomial triples."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .algebra import (
    GaussianRational,
    UniPoly,
    Vec3,
    cross,
    det3,
    poly_gcd,
    remove_content,
)

__all__ = [
    "CurveError",
    "HoloCurve",
    "make_curve",
    "fullness",
    "ramification_total",
    "plucker_invariants",
    "eval_chart",
    "reparametrize",
    "linear_transform",
    "affine_form",
    "evaluate_triple",
]


class CurveError(ValueError):
    pass


@dataclass(frozen=True)
class HoloCurve:
    """Holomorphic map z -> [F(z)] with coprime components.

    ``ramification_r`` is None for non-full curves.
    """

    F: Vec3
    degree_k: int
    ramification_r: Optional[int]
    full: bool

    @property
    def k(self) -> int:
        return self.degree_k

    @property
    def r(self) -> Optional[int]:
        return self.ramification_r

    def wronskian(self):
        F = self.F
        return det3(F, F.dz(), F.dz().dz())

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.F) + ")"


def _wronskian_nonzero(F: Vec3) -> bool:
    return not det3(F, F.dz(), F.dz().dz()).is_zero()


def _ramification(F: Vec3, k: int) -> int:
    W = cross(F, F.dz())
    reduced, _ = remove_content(W)
    return (2 * k - 2) - reduced.degree


def make_curve(raw: Vec3) -> HoloCurve:
    if raw.kind != "uni":
        raise CurveError("curve components must be polynomials in z")
    if raw.is_zero():
        raise CurveError("zero vector does not define a curve")
    F, _ = remove_content(raw)
    k = F.degree
    full = _wronskian_nonzero(F)
    r = _ramification(F, k) if full else None
    return HoloCurve(F=F, degree_k=k, ramification_r=r, full=full)


def fullness(c: HoloCurve) -> bool:
    return _wronskian_nonzero(c.F)


def ramification_total(c: HoloCurve) -> int:
    """Total ramification index, finite points plus the point at infinity.

    With W = F x F', the finite part is the degree of the content of W and
    the part at infinity is the degree deficiency (2k - 2) - deg W.
    """
    if not fullness(c):
        raise CurveError("ramification undefined (W identically degenerate)")
    return _ramification(c.F, c.degree_k)


def plucker_invariants(c: HoloCurve) -> tuple[int, int, int, int]:
    """(d, E, k', r') of the harmonic map G'(f) and the antiholomorphic g."""
    if not c.full:
        raise CurveError("invariants need a full curve")
    k, r = c.degree_k, ramification_total(c)
    return (k - r - 2, 3 * k - r - 2, 2 * k - r - 2, 3 * k - 2 * r - 6)


def reparametrize(c: HoloCurve, a, b, cc, d) -> HoloCurve:
    """Precompose with the Moebius map z -> (a z + b) / (cc z + d)."""
    num = UniPoly([b, a])
    den = UniPoly([d, cc])
    G = GaussianRational.coerce
    if not (G(a) * G(d) - G(b) * G(cc)):
        raise CurveError("degenerate Moebius transformation")
    k = c.degree_k
    comps = []
    for comp in c.F:
        acc = UniPoly()
        for n, coef in enumerate(comp.coeffs):
            acc = acc + (num**n * den ** (k - n)).scale(coef)
        comps.append(acc)
    return make_curve(Vec3(comps))


def linear_transform(c: HoloCurve, M: Sequence[Sequence]) -> HoloCurve:
    """Apply an invertible 3x3 matrix over Q[i] to the homogeneous triple."""
    comps = []
    for row in M:
        acc = UniPoly()
        for m, comp in zip(row, c.F):
            acc = acc + comp.scale(GaussianRational.coerce(m))
        comps.append(acc)
    return make_curve(Vec3(comps))


def affine_form(c: HoloCurve) -> list[tuple[UniPoly, UniPoly]]:
    """[(P^1, Q^1), (P^2, Q^2)] with f^j = F_j / F_0 in lowest terms."""
    F0 = c.F[0]
    if F0.is_zero():
        raise CurveError("curve lies in the hyperplane F_0 = 0; no affine form")
    out = []
    for j in (1, 2):
        Fj = c.F[j]
        if Fj.is_zero():
            out.append((UniPoly(), UniPoly([1])))
            continue
        g = poly_gcd(Fj, F0)
        out.append((Fj // g, F0 // g))
    return out


def _horner(coeffs: np.ndarray, x: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(x, dtype=complex)
    for c in coeffs[::-1]:
        acc = acc * x + c
    return acc


def evaluate_triple(F: Vec3, points: np.ndarray, chart: str = "z", degree: Optional[int] = None):
    """Evaluate a polynomial triple and its derivative at complex points.

    In the w-chart the triple is the degree-reversed one, w**K F(1/w), and
    the derivative is taken with respect to w.  Returns arrays of shape
    points.shape + (3,).
    """
    K = F.degree if degree is None else degree
    vals, ders = [], []
    for comp in F:
        p = comp if chart == "z" else comp.reversed(K)
        cs = np.array(p.complex_coeffs() or [0j])
        dcs = np.array(p.derivative().complex_coeffs() or [0j])
        vals.append(_horner(cs, points))
        ders.append(_horner(dcs, points))
    return np.stack(vals, axis=-1), np.stack(ders, axis=-1)


def eval_chart(c: HoloCurve, point: complex, chart: str = "z") -> np.ndarray:
    """Unit homogeneous representative at one chart point."""
    if chart not in ("z", "w"):
        raise CurveError(f"unknown chart {chart!r}")
    vals, _ = evaluate_triple(c.F, np.asarray([complex(point)]), chart, c.degree_k)
    v = vals[0]
    return v / np.linalg.norm(v)
