"""Symbolic Gauss transforms and the identities of the triple (f, phi, g).

Line subbundles of the trivial C^3 bundle are carried by polynomial
representatives (sections that may vanish on a finite set).  Every
quantity that involves a projection or a normalisation is multiplied
through by the relevant Hermitian norms, so each identity becomes the
statement that some BiPoly is literally zero.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

from .algebra import BiPoly, Vec3, conj_swap, cross, herm_pair, remove_content
from .curves import CurveError, HoloCurve, plucker_invariants

__all__ = [
    "HarmonicRep",
    "SffNumerator",
    "gauss_prime_rep",
    "gauss_second_rep",
    "g_curve",
    "harmonic_rep",
    "sff_numerator",
    "line_harmonicity_numerator",
    "harmonicity_numerator",
    "line_isotropy_numerator",
    "isotropy_numerator",
    "adjoint_identity",
    "adjoint_check",
    "is_proportional",
    "inversion_check",
    "verify_identities",
]


def _require_full(f: HoloCurve) -> None:
    if not f.full:
        raise CurveError("Gauss transform needs a full holomorphic curve")


def gauss_prime_rep(f: HoloCurve) -> Vec3:
    """Phi = <F,F> F' - <F',F> F, spanning G'(f) off the ramification points."""
    _require_full(f)
    F = f.F.as_bi()
    dF = F.dz()
    return dF.scale(herm_pair(F, F)) - F.scale(herm_pair(dF, F))


def gauss_second_rep(Psi: Vec3) -> Vec3:
    """N dzbar(Psi) - <dzbar Psi, Psi> Psi, the cleared image of A''."""
    Psi = Psi.as_bi()
    dPsi = Psi.dzbar()
    return dPsi.scale(herm_pair(Psi, Psi)) - Psi.scale(herm_pair(dPsi, Psi))


def g_curve(f: HoloCurve) -> Vec3:
    """Antiholomorphic completion: conj of F x F' with its content removed."""
    _require_full(f)
    W = cross(f.F, f.F.dz())
    reduced, _ = remove_content(W)
    return reduced.conj_swap()


@dataclass(frozen=True)
class HarmonicRep:
    source: HoloCurve
    phi_rep: Vec3
    g_rep: Vec3
    invariants: tuple[int, int, int, int]

    @property
    def g_degree(self) -> int:
        return max(c.bidegree[1] for c in self.g_rep)


def harmonic_rep(f: HoloCurve) -> HarmonicRep:
    return HarmonicRep(
        source=f,
        phi_rep=gauss_prime_rep(f),
        g_rep=g_curve(f),
        invariants=plucker_invariants(f),
    )


@dataclass(frozen=True)
class SffNumerator:
    """Second fundamental form value as numerator / denominator."""

    numerator: Vec3
    denominator: BiPoly

    def is_zero(self) -> bool:
        return self.numerator.is_zero()


def _d(v: Vec3, direction: str) -> Vec3:
    if direction in ("dz", "'"):
        return v.dz()
    if direction in ("dzbar", "''"):
        return v.dzbar()
    raise ValueError(f"direction must be 'dz' or 'dzbar', got {direction!r}")


def sff_numerator(section: Vec3, target: Optional[Vec3] = None, direction: str = "dz") -> SffNumerator:
    """Projection of the derivative of ``section`` onto a target line.

    ``target=None`` means the orthogonal complement of the section's own
    line, i.e. A'_psi or A''_psi.  Otherwise the target line is spanned by
    the given representative and the result is pi_target(d section).
    """
    S = section.as_bi()
    dS = _d(S, direction)
    if target is None:
        N = herm_pair(S, S)
        return SffNumerator(dS.scale(N) - S.scale(herm_pair(dS, S)), N)
    T = target.as_bi()
    return SffNumerator(T.scale(herm_pair(dS, T)), herm_pair(T, T))


def _cov_step(X: Vec3, m: int, Psi: Vec3, N: BiPoly, direction: str) -> Vec3:
    """One covariant derivative on L(psi, psi^perp).

    X is N**m times T(Psi) for a section T; the result is N**(m+1) times
    (nabla T)(Psi).  Requires <X, Psi> = 0.
    """
    dX = _d(X, direction)
    dN = N.dz() if direction == "dz" else N.dzbar()
    a = herm_pair(_d(Psi, direction), Psi)
    return dX.scale(N) - Psi.scale(herm_pair(dX, Psi)) - X.scale(dN.scale(m) + a)


def line_harmonicity_numerator(Psi: Vec3) -> Vec3:
    """Cleared numerator of (nabla'' A'_psi)(Psi); zero iff the line is harmonic."""
    Psi = Psi.as_bi()
    A = sff_numerator(Psi, None, "dz")
    return _cov_step(A.numerator, 1, Psi, A.denominator, "dzbar")


def harmonicity_numerator(f: HoloCurve) -> Vec3:
    return line_harmonicity_numerator(gauss_prime_rep(f))


def line_isotropy_numerator(Psi: Vec3, alpha: int, beta: int) -> BiPoly:
    """Cleared numerator of <nabla'^alpha dphi/dz, nabla''^beta dphi/dzbar>."""
    if alpha not in (0, 1) or beta not in (0, 1):
        raise ValueError("only alpha, beta in {0, 1} are supported")
    Psi = Psi.as_bi()
    if alpha not in (0, 1) or beta not in (0, 1):
        raise ValueError("isotropy orders alpha, beta must be 0 or 1")
    A = sff_numerator(Psi, None, "dz")
    B = sff_numerator(Psi, None, "dzbar")
    N = A.denominator
    X, Y = A.numerator, B.numerator
    if alpha:
        X = _cov_step(X, 1, Psi, N, "dz")
    if beta:
        Y = _cov_step(Y, 1, Psi, N, "dzbar")
    return herm_pair(X, Y)


def isotropy_numerator(f: HoloCurve, alpha: int, beta: int) -> BiPoly:
    return line_isotropy_numerator(gauss_prime_rep(f), alpha, beta)


def adjoint_identity(S: Vec3, T: Vec3) -> BiPoly:
    """Cleared form of <A'_{s,t} S, T> + conj <A''_{t,s} T, S>.

    Vanishes identically when the lines spanned by S and T are orthogonal.
    """
    a = sff_numerator(S, T, "dz")
    b = sff_numerator(T, S, "dzbar")
    return herm_pair(a.numerator, T) * b.denominator + conj_swap(herm_pair(b.numerator, S)) * a.denominator


def adjoint_check(f: HoloCurve) -> bool:
    return adjoint_identity(f.F, gauss_prime_rep(f)).is_zero()


def is_proportional(u: Vec3, v: Vec3) -> bool:
    """All 2x2 minors of the pair vanish."""
    u, v = u.as_bi(), v.as_bi()
    for i, j in ((0, 1), (0, 2), (1, 2)):
        if not (u[i] * v[j] - u[j] * v[i]).is_zero():
            return False
    return True


def inversion_check(f: HoloCurve) -> bool:
    """G''(G'(f)) = f: the image of A''_phi is the line of F."""
    return is_proportional(gauss_second_rep(gauss_prime_rep(f)), f.F)


def _checks(f: HoloCurve) -> dict:
    F = f.F.as_bi()
    Phi = gauss_prime_rep(f)
    G = g_curve(f)
    return {
        "orthogonal_phi_f": lambda: herm_pair(Phi, F).is_zero(),
        "orthogonal_g_f": lambda: herm_pair(G, F).is_zero(),
        "orthogonal_g_phi": lambda: herm_pair(G, Phi).is_zero(),
        "image_A1_f_is_phi": lambda: is_proportional(sff_numerator(F, None, "dz").numerator, Phi),
        "A1_f_to_g_zero": lambda: sff_numerator(F, G, "dz").is_zero(),
        "A1_phi_to_f_zero": lambda: sff_numerator(Phi, F, "dz").is_zero(),
        "A1_g_zero": lambda: sff_numerator(G, None, "dz").is_zero(),
        "A1_g_to_phi_zero": lambda: sff_numerator(G, Phi, "dz").is_zero(),
        "A1_g_to_f_zero": lambda: sff_numerator(G, F, "dz").is_zero(),
        "harmonicity": lambda: line_harmonicity_numerator(Phi).is_zero(),
        "isotropy_00": lambda: line_isotropy_numerator(Phi, 0, 0).is_zero(),
        "isotropy_10": lambda: line_isotropy_numerator(Phi, 1, 0).is_zero(),
        "isotropy_01": lambda: line_isotropy_numerator(Phi, 0, 1).is_zero(),
        "isotropy_11": lambda: line_isotropy_numerator(Phi, 1, 1).is_zero(),
        "adjoint": lambda: adjoint_identity(F, Phi).is_zero(),
        "inversion": lambda: is_proportional(gauss_second_rep(Phi), F),
        "g_degree_equals_k_prime": lambda: max(c.bidegree[1] for c in G) == plucker_invariants(f)[2],
    }


def verify_identities(f: HoloCurve, workers: int = 1) -> dict[str, bool]:
    """Run every exact identity of the triple; results keyed by check name.

    The checks are independent, so they may run on a thread pool; the
    result is the same for any worker count.
    """
    _require_full(f)
    checks = _checks(f)
    names = sorted(checks)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            values = list(ex.map(lambda n: checks[n](), names))
    else:
        values = [checks[n]() for n in names]
    return dict(zip(names, (bool(v) for v in values)))
