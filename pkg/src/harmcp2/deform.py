"""Integration of holomorphic vector fields along rational curves.

A holomorphic field along f = [1, f^1, f^2] with f^j = P^j / Q^j has
affine components v^j = R^j / (Q^j)^2.  Solving the Bezout equation
A^j Q^j - B^j P^j = R^j produces the family f^j_t = (P^j + t A^j)/(Q^j + t B^j)
whose t-derivative at 0 is exactly v.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .algebra import GaussianRational, UniPoly, Vec3, bezout_solve, remove_content
from .curves import CurveError, HoloCurve, affine_form

__all__ = [
    "RationalField",
    "DeformationFamily",
    "LinearFamily",
    "IntegrationError",
    "integrate_holo_field",
    "integrate_holo_field_joint",
    "solve_linear_exact",
    "divide_content",
]


class IntegrationError(ValueError):
    pass


@dataclass(frozen=True)
class RationalField:
    """Affine components v^j = numerators[j] / denominators[j]**2, j = 1, 2."""

    numerators: tuple[UniPoly, UniPoly]
    denominators: tuple[UniPoly, UniPoly]

    @classmethod
    def along(cls, f: HoloCurve, numerators: Sequence[UniPoly]) -> "RationalField":
        """Field with the reduced affine denominators of f."""
        dens = tuple(Q for _, Q in affine_form(f))
        return cls(tuple(numerators), dens)

    def is_zero(self) -> bool:
        return all(R.is_zero() for R in self.numerators)


@dataclass(frozen=True)
class DeformationFamily:
    """Per-component data (P^j, A^j, Q^j, B^j) of f^j_t = (P + tA)/(Q + tB)."""

    components: tuple[tuple[UniPoly, UniPoly, UniPoly, UniPoly], ...]

    def derivative_numerators(self) -> tuple[UniPoly, ...]:
        """Numerators of d/dt f^j_t at t = 0 over (Q^j)^2: A Q - B P."""
        return tuple(A * Q - B * P for P, A, Q, B in self.components)

    def matches(self, v: RationalField) -> bool:
        """Exact check that the t-derivative at 0 equals v (cross-multiplied)."""
        for (P, A, Q, B), R, Qv in zip(self.components, v.numerators, v.denominators):
            if not (((A * Q - B * P) * Qv * Qv) - R * Q * Q).is_zero():
                return False
        return True

    def is_joint(self) -> bool:
        (_, _, Q1, B1), (_, _, Q2, B2) = self.components
        return Q1 == Q2 and B1 == B2

    def at(self, t) -> Vec3:
        """Homogeneous triple of f_t with common factors divided out."""
        t = GaussianRational.coerce(t)
        (P1, A1, Q1, B1), (P2, A2, Q2, B2) = self.components
        n1, d1 = P1 + A1.scale(t), Q1 + B1.scale(t)
        n2, d2 = P2 + A2.scale(t), Q2 + B2.scale(t)
        if self.is_joint():
            raw = Vec3([d1, n1, n2])
        else:
            raw = Vec3([d1 * d2, n1 * d2, n2 * d1])
        return divide_content(raw)


def divide_content(raw: Vec3) -> Vec3:
    """Divide out the monic gcd of the components without rescaling.

    Unlike remove_content this keeps families smooth in t: normalising a
    leading coefficient that depends on t would rescale by a t-dependent
    (possibly sign-changing) constant.
    """
    _, content = remove_content(raw)
    return Vec3([c // content for c in raw])


@dataclass(frozen=True)
class LinearFamily:
    """Homogeneous coefficient family F + t dF."""

    F: Vec3
    dF: Vec3

    def at(self, t) -> Vec3:
        return self.F + self.dF.scale(GaussianRational.coerce(t))


def integrate_holo_field(f: HoloCurve, v: RationalField) -> DeformationFamily:
    """Component-wise Bezout integration of a rational holomorphic field."""
    comps = []
    for (P, Q), R in zip(affine_form(f), v.numerators):
        A, B = bezout_solve(P, Q, R)
        comps.append((P, A, Q, B))
    return DeformationFamily(tuple(comps))


def solve_linear_exact(rows: list[list[GaussianRational]], rhs: list[GaussianRational]) -> list[GaussianRational]:
    """Unique solution of an overdetermined exact linear system.

    Raises IntegrationError when the system is inconsistent or singular.
    """
    n = len(rows[0])
    M = [list(r) + [b] for r, b in zip(rows, rhs)]
    piv_row = 0
    for col in range(n):
        p = next((i for i in range(piv_row, len(M)) if M[i][col]), None)
        if p is None:
            raise IntegrationError("linear system is singular")
        M[piv_row], M[p] = M[p], M[piv_row]
        inv = M[piv_row][col].inverse()
        M[piv_row] = [x * inv for x in M[piv_row]]
        for i in range(len(M)):
            if i != piv_row and M[i][col]:
                c = M[i][col]
                M[i] = [a - c * b for a, b in zip(M[i], M[piv_row])]
        piv_row += 1
    if any(M[i][n] for i in range(piv_row, len(M))):
        raise IntegrationError("linear system is inconsistent")
    return [M[i][n] for i in range(n)]


def integrate_holo_field_joint(F: Vec3, numerators: Sequence[UniPoly], degree: int | None = None) -> DeformationFamily:
    """Integrate v^j = R^j / F_0^2 with one common denominator variation.

    Finds (B, A^1, A^2) of degree <= k with A^j F_0 - B F_j = R^j, so the
    family [F_0 + tB, F_1 + tA^1, F_2 + tA^2] stays a curve of degree k.
    The one-dimensional ambiguity (B, A) + c F is fixed by requiring the
    coefficient of B in degree deg F_0 to vanish.
    """
    F0 = F[0]
    if F0.is_zero():
        raise CurveError("curve lies in the hyperplane F_0 = 0; no affine form")
    k = F.degree if degree is None else degree
    R = [UniPoly(r) if not isinstance(r, UniPoly) else r for r in numerators]
    top = 2 * k
    if any(r.degree > top for r in R):
        raise IntegrationError("field numerator degree exceeds 2k; not tangent to degree-k curves")
    nb = k + 1
    # unknown layout: B[0..k], A1[0..k], A2[0..k]
    zero = GaussianRational(0)
    rows, rhs = [], []
    for j in (1, 2):
        Fj = F[j]
        for d in range(top + 1):
            row = [zero] * (3 * nb)
            for n in range(nb):
                # coefficient of z^d in A^j F_0: A^j[n] * F0[d - n]
                if 0 <= d - n <= F0.degree:
                    row[j * nb + n] = F0[d - n]
                if 0 <= d - n <= Fj.degree:
                    row[n] = row[n] - Fj[d - n]
            rows.append(row)
            rhs.append(R[j - 1][d] if d <= R[j - 1].degree else zero)
    gauge = [zero] * (3 * nb)
    gauge[F0.degree] = GaussianRational(1)
    rows.append(gauge)
    rhs.append(zero)
    sol = solve_linear_exact(rows, rhs)
    B = UniPoly(sol[:nb])
    A1 = UniPoly(sol[nb : 2 * nb])
    A2 = UniPoly(sol[2 * nb :])
    return DeformationFamily(((F[1], A1, F0, B), (F[2], A2, F0, B)))
