"""JSON codecs for polynomials, curves, fields and families.

A polynomial is an array of coefficients in ascending degree, each a
4-tuple of integers [re_num, re_den, im_num, im_den]; a curve is an array
of three polynomials.
"""
from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

from .algebra import BiPoly, GaussianRational, UniPoly, Vec3
from .deform import DeformationFamily, RationalField

__all__ = [
    "ParseError",
    "coeff_to_json",
    "coeff_from_json",
    "poly_to_json",
    "poly_from_json",
    "curve_to_json",
    "curve_from_json",
    "bipoly_to_json",
    "field_from_json",
    "family_to_json",
    "load_json",
    "resolve_data_file",
    "builtin_curves",
]


class ParseError(ValueError):
    pass


def coeff_to_json(c: GaussianRational) -> list[int]:
    return [c.re.numerator, c.re.denominator, c.im.numerator, c.im.denominator]


def coeff_from_json(x: Any) -> GaussianRational:
    if not (isinstance(x, list) and len(x) == 4 and all(isinstance(v, int) and not isinstance(v, bool) for v in x)):
        raise ParseError(f"coefficient must be [re_num, re_den, im_num, im_den] integers, got {x!r}")
    if x[1] == 0 or x[3] == 0:
        raise ParseError(f"zero denominator in coefficient {x!r}")
    return GaussianRational(Fraction(x[0], x[1]), Fraction(x[2], x[3]))


def poly_to_json(p: UniPoly) -> list[list[int]]:
    return [coeff_to_json(c) for c in p.coeffs]


def poly_from_json(x: Any) -> UniPoly:
    if not isinstance(x, list):
        raise ParseError(f"polynomial must be an array of coefficients, got {type(x).__name__}")
    return UniPoly([coeff_from_json(c) for c in x])


def curve_to_json(F: Vec3) -> list:
    return [poly_to_json(c) for c in F]


def curve_from_json(x: Any) -> Vec3:
    if not (isinstance(x, list) and len(x) == 3):
        raise ParseError("curve must be an array of three polynomials")
    return Vec3([poly_from_json(p) for p in x])


def bipoly_to_json(p: BiPoly) -> dict:
    """Bidegree table: sorted (z-power, zbar-power, coefficient) entries."""
    terms = [
        {"z": a, "zbar": b, "coeff": coeff_to_json(c)}
        for (a, b), c in sorted(p.terms.items())
    ]
    return {"bidegree": list(p.bidegree), "terms": terms}


def field_from_json(x: Any, default_denominators=None) -> RationalField:
    """{"numerators": [R1, R2], "denominators": [Q1, Q2]} (denominators optional)."""
    if not isinstance(x, dict) or "numerators" not in x:
        raise ParseError('field must be an object with a "numerators" array of two polynomials')
    nums = x["numerators"]
    if not (isinstance(nums, list) and len(nums) == 2):
        raise ParseError("field needs exactly two numerator polynomials")
    R = tuple(poly_from_json(p) for p in nums)
    if "denominators" in x:
        dens = x["denominators"]
        if not (isinstance(dens, list) and len(dens) == 2):
            raise ParseError("field needs exactly two denominator polynomials")
        Q = tuple(poly_from_json(p) for p in dens)
    elif default_denominators is not None:
        Q = tuple(default_denominators)
    else:
        raise ParseError("field has no denominators and none can be inferred")
    return RationalField(R, Q)


def family_to_json(fam: DeformationFamily) -> dict:
    comps = []
    for P, A, Q, B in fam.components:
        comps.append({"P": poly_to_json(P), "A": poly_to_json(A), "Q": poly_to_json(Q), "B": poly_to_json(B)})
    return {"components": comps, "joint": fam.is_joint()}


def load_json(path: Path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def _data_dir() -> Path:
    return Path(str(resources.files("harmcp2") / "data"))


def builtin_curves() -> list[str]:
    return sorted(p.name for p in _data_dir().glob("*.json") if not p.name.endswith(".expected.json"))


def resolve_data_file(name: str | Path) -> Path:
    """A path as given if it exists, else a built-in data file of that name."""
    p = Path(name)
    if p.exists():
        return p
    candidate = _data_dir() / p.name
    if candidate.exists():
        return candidate
    raise ParseError(f"no such file: {name} (built-in curves: {', '.join(builtin_curves())})")
