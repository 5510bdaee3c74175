"""Exact arithmetic over the Gaussian rationals Q[i].

Three value types live here:

``GaussianRational``
    a + b i with a, b arbitrary-precision rationals.
``UniPoly``
    polynomial in one variable z, ascending coefficient tuple.
``BiPoly``
    polynomial in z and zbar treated as independent variables, stored as a
    sparse ``{(deg_z, deg_zbar): coeff}`` table with no explicit zeros.

``Vec3`` is a triple of either kind.  Everything is immutable; every
operation returns a new value and never rounds.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

__all__ = [
    "AlgebraError",
    "GaussianRational",
    "UniPoly",
    "BiPoly",
    "Vec3",
    "poly_gcd",
    "poly_xgcd",
    "bezout_solve",
    "conj_swap",
    "herm_pair",
    "dot",
    "cross",
    "remove_content",
    "as_bipoly",
    "det3",
    "ZERO",
    "ONE",
    "I",
]


class AlgebraError(ValueError):
    """Raised when an exact-algebra precondition fails."""


Number = Union[int, Fraction, "GaussianRational"]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        # exact binary value of the float, no rounding
        return Fraction(x)
    return Fraction(x)


class GaussianRational:
    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _frac(re))
        object.__setattr__(self, "im", _frac(im))

    def __setattr__(self, key, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            return cls(Fraction(x.real), Fraction(x.imag))
        return cls(x, 0)

    @classmethod
    def from_complex(cls, z: complex) -> "GaussianRational":
        """Exact binary value of a complex double."""
        return cls(Fraction(float(z.real)), Fraction(float(z.imag)))

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other) -> bool:
        try:
            o = GaussianRational.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        if not self.im:
            return f"GR({self.re})"
        return f"GR({self.re}, {self.im})"

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}i)"

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __add__(self, other) -> "GaussianRational":
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other) -> "GaussianRational":
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other) -> "GaussianRational":
        return GaussianRational.coerce(other) - self

    def __mul__(self, other) -> "GaussianRational":
        o = GaussianRational.coerce(other)
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "GaussianRational":
        n = self.norm2()
        if not n:
            raise ZeroDivisionError("inverse of zero Gaussian rational")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other) -> "GaussianRational":
        return self * GaussianRational.coerce(other).inverse()

    def __rtruediv__(self, other) -> "GaussianRational":
        return GaussianRational.coerce(other) * self.inverse()

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def is_real(self) -> bool:
        return not self.im


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


# ---------------------------------------------------------------------------
# univariate


class UniPoly:
    """Polynomial in z over Q[i]; ``coeffs[n]`` multiplies z**n."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [GaussianRational.coerce(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, key, value):
        raise AttributeError("UniPoly is immutable")

    @classmethod
    def monomial(cls, n: int, c=1) -> "UniPoly":
        return cls([0] * n + [c])

    @classmethod
    def const(cls, c) -> "UniPoly":
        return cls([c])

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __getitem__(self, n: int) -> GaussianRational:
        if 0 <= n < len(self.coeffs):
            return self.coeffs[n]
        return ZERO

    def lead(self) -> GaussianRational:
        if not self.coeffs:
            raise AlgebraError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __eq__(self, other) -> bool:
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self == UniPoly([other])
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"UniPoly({self})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for n, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if n == 0 else ("z" if n == 1 else f"z^{n}")
            if mono and c == ONE:
                terms.append(mono)
            elif mono and c == -ONE:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}{'*' + mono if mono else ''}")
        return " + ".join(terms)

    def __neg__(self) -> "UniPoly":
        return UniPoly([-c for c in self.coeffs])

    def __add__(self, other) -> "UniPoly":
        o = _as_unipoly(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return UniPoly([self[i] + o[i] for i in range(n)])

    __radd__ = __add__

    def __sub__(self, other) -> "UniPoly":
        return self + (-_as_unipoly(other))

    def __rsub__(self, other) -> "UniPoly":
        return _as_unipoly(other) - self

    def __mul__(self, other) -> "UniPoly":
        if isinstance(other, BiPoly):
            return NotImplemented
        o = _as_unipoly(other)
        if not self.coeffs or not o.coeffs:
            return UniPoly()
        out = [ZERO] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] = out[i + j] + a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def scale(self, c) -> "UniPoly":
        c = GaussianRational.coerce(c)
        return UniPoly([c * a for a in self.coeffs])

    def __pow__(self, n: int) -> "UniPoly":
        out = UniPoly([1])
        for _ in range(n):
            out = out * self
        return out

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        inv_lead = other.lead().inverse()
        quot = [ZERO] * max(len(rem) - dq, 0)
        for n in range(len(rem) - 1, dq - 1, -1):
            c = rem[n]
            if not c:
                continue
            q = c * inv_lead
            quot[n - dq] = q
            for j, b in enumerate(other.coeffs):
                rem[n - dq + j] = rem[n - dq + j] - q * b
        return UniPoly(quot), UniPoly(rem[:dq] if dq > 0 else [])

    def __floordiv__(self, other) -> "UniPoly":
        return self.divmod(_as_unipoly(other))[0]

    def __mod__(self, other) -> "UniPoly":
        return self.divmod(_as_unipoly(other))[1]

    def monic(self) -> "UniPoly":
        return self.scale(self.lead().inverse())

    def derivative(self) -> "UniPoly":
        return UniPoly([c * n for n, c in enumerate(self.coeffs)][1:])

    def compose(self, other: "UniPoly") -> "UniPoly":
        out = UniPoly()
        for c in reversed(self.coeffs):
            out = out * other + UniPoly([c])
        return out

    def reversed(self, degree: int) -> "UniPoly":
        """``z**degree * p(1/z)``; requires ``degree >= self.degree``."""
        if degree < self.degree:
            raise AlgebraError("reversal degree below polynomial degree")
        padded = list(self.coeffs) + [ZERO] * (degree + 1 - len(self.coeffs))
        return UniPoly(reversed(padded))

    def conjugate_coeffs(self) -> "UniPoly":
        return UniPoly([c.conjugate() for c in self.coeffs])

    def __call__(self, z):
        """Evaluate exactly (Gaussian rational argument) or numerically."""
        if isinstance(z, (GaussianRational, int, Fraction)):
            acc = ZERO
            for c in reversed(self.coeffs):
                acc = acc * z + c
            return acc
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + complex(c)
        return acc

    def complex_coeffs(self):
        return [complex(c) for c in self.coeffs]


def _as_unipoly(x) -> UniPoly:
    if isinstance(x, UniPoly):
        return x
    if isinstance(x, (int, Fraction, GaussianRational, complex)):
        return UniPoly([x])
    raise TypeError(f"cannot treat {type(x).__name__} as UniPoly")


# ---------------------------------------------------------------------------
# bivariate


class BiPoly:
    """Polynomial in (z, zbar) with formally independent variables."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for key, c in dict(terms).items():
                c = GaussianRational.coerce(c)
                if c:
                    clean[(int(key[0]), int(key[1]))] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, key, value):
        raise AttributeError("BiPoly is immutable")

    @classmethod
    def _raw(cls, terms: dict) -> "BiPoly":
        # trusted constructor: terms already nonzero GaussianRationals
        obj = object.__new__(cls)
        object.__setattr__(obj, "terms", terms)
        return obj

    @classmethod
    def from_z(cls, p: UniPoly) -> "BiPoly":
        return cls._raw({(n, 0): c for n, c in enumerate(p.coeffs) if c})

    @classmethod
    def from_zbar(cls, p: UniPoly) -> "BiPoly":
        """p(zbar) with p's coefficients unchanged."""
        return cls._raw({(0, n): c for n, c in enumerate(p.coeffs) if c})

    @classmethod
    def const(cls, c) -> "BiPoly":
        return cls({(0, 0): c})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, BiPoly):
            return self.terms == other.terms
        if isinstance(other, UniPoly):
            return self == BiPoly.from_z(other)
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self == BiPoly.const(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        if not self.terms:
            return "BiPoly(0)"
        parts = []
        for (a, b), c in sorted(self.terms.items()):
            parts.append(f"{c}*z^{a}*zb^{b}")
        return "BiPoly(" + " + ".join(parts) + ")"

    @property
    def bidegree(self) -> tuple[int, int]:
        if not self.terms:
            return (-1, -1)
        return (max(a for a, _ in self.terms), max(b for _, b in self.terms))

    def __neg__(self) -> "BiPoly":
        return BiPoly._raw({k: -c for k, c in self.terms.items()})

    def __add__(self, other) -> "BiPoly":
        o = as_bipoly(other)
        out = dict(self.terms)
        for k, c in o.terms.items():
            s = out.get(k)
            if s is None:
                out[k] = c
            else:
                s = s + c
                if s:
                    out[k] = s
                else:
                    del out[k]
        return BiPoly._raw(out)

    __radd__ = __add__

    def __sub__(self, other) -> "BiPoly":
        return self + (-as_bipoly(other))

    def __rsub__(self, other) -> "BiPoly":
        return as_bipoly(other) - self

    def __mul__(self, other) -> "BiPoly":
        o = as_bipoly(other)
        if not self.terms or not o.terms:
            return BiPoly._raw({})
        acc: dict = {}
        # raw Fraction arithmetic in the inner loop keeps object churn low
        left = [(a, b, c.re, c.im) for (a, b), c in self.terms.items()]
        right = [(a, b, c.re, c.im) for (a, b), c in o.terms.items()]
        for a1, b1, x1, y1 in left:
            for a2, b2, x2, y2 in right:
                key = (a1 + a2, b1 + b2)
                re = x1 * x2 - y1 * y2
                im = x1 * y2 + y1 * x2
                prev = acc.get(key)
                if prev is None:
                    acc[key] = [re, im]
                else:
                    prev[0] += re
                    prev[1] += im
        return BiPoly._raw(
            {k: GaussianRational(v[0], v[1]) for k, v in acc.items() if v[0] or v[1]}
        )

    __rmul__ = __mul__

    def scale(self, c) -> "BiPoly":
        c = GaussianRational.coerce(c)
        if not c:
            return BiPoly._raw({})
        return BiPoly._raw({k: v * c for k, v in self.terms.items()})

    def dz(self) -> "BiPoly":
        return BiPoly._raw(
            {(a - 1, b): c * a for (a, b), c in self.terms.items() if a > 0}
        )

    def dzbar(self) -> "BiPoly":
        return BiPoly._raw(
            {(a, b - 1): c * b for (a, b), c in self.terms.items() if b > 0}
        )

    def conj_swap(self) -> "BiPoly":
        return BiPoly._raw({(b, a): c.conjugate() for (a, b), c in self.terms.items()})

    def is_holomorphic(self) -> bool:
        return all(b == 0 for _, b in self.terms)

    def is_antiholomorphic(self) -> bool:
        return all(a == 0 for a, _ in self.terms)

    def to_unipoly(self) -> UniPoly:
        """Coefficients of a z-only polynomial."""
        if not self.is_holomorphic():
            raise AlgebraError("BiPoly depends on zbar")
        deg = self.bidegree[0]
        return UniPoly([self.terms.get((n, 0), ZERO) for n in range(deg + 1)])

    def zbar_part(self) -> UniPoly:
        """Coefficients of a zbar-only polynomial, as a polynomial in zbar."""
        if not self.is_antiholomorphic():
            raise AlgebraError("BiPoly depends on z")
        deg = self.bidegree[1]
        return UniPoly([self.terms.get((0, n), ZERO) for n in range(deg + 1)])

    def __call__(self, z: complex) -> complex:
        zb = complex(z).conjugate()
        return sum(complex(c) * z**a * zb**b for (a, b), c in self.terms.items())


def as_bipoly(x) -> BiPoly:
    if isinstance(x, BiPoly):
        return x
    if isinstance(x, UniPoly):
        return BiPoly.from_z(x)
    if isinstance(x, (int, Fraction, GaussianRational)):
        return BiPoly.const(x)
    raise TypeError(f"cannot treat {type(x).__name__} as BiPoly")


def conj_swap(p: Union[BiPoly, UniPoly]) -> BiPoly:
    """Complex conjugation of a section: conjugate coefficients, swap z and zbar."""
    return as_bipoly(p).conj_swap()


# ---------------------------------------------------------------------------
# vectors


class Vec3:
    """Triple of polynomials, all UniPoly or all BiPoly."""

    __slots__ = ("comps",)

    def __init__(self, comps: Sequence):
        comps = tuple(comps)
        if len(comps) != 3:
            raise AlgebraError("Vec3 needs exactly three components")
        scalars = (int, Fraction, GaussianRational)
        if all(isinstance(c, UniPoly) for c in comps):
            pass
        elif all(isinstance(c, BiPoly) for c in comps):
            pass
        elif all(isinstance(c, (UniPoly,) + scalars) for c in comps):
            comps = tuple(_as_unipoly(c) for c in comps)
        elif all(isinstance(c, (UniPoly, BiPoly) + scalars) for c in comps):
            comps = tuple(as_bipoly(c) for c in comps)
        else:
            raise AlgebraError("Vec3 components must be polynomials")
        object.__setattr__(self, "comps", comps)

    def __setattr__(self, key, value):
        raise AttributeError("Vec3 is immutable")

    @classmethod
    def uni(cls, *comps) -> "Vec3":
        return cls([c if isinstance(c, UniPoly) else UniPoly(c) for c in comps])

    @property
    def kind(self) -> str:
        return "uni" if isinstance(self.comps[0], UniPoly) else "bi"

    def __iter__(self) -> Iterator:
        return iter(self.comps)

    def __getitem__(self, i: int):
        return self.comps[i]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Vec3):
            return NotImplemented
        return all(as_bipoly(a) == as_bipoly(b) for a, b in zip(self, other))

    def __hash__(self) -> int:
        return hash(tuple(as_bipoly(c) for c in self.comps))

    def __repr__(self) -> str:
        return "Vec3(" + ", ".join(str(c) if isinstance(c, UniPoly) else repr(c) for c in self) + ")"

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def as_bi(self) -> "Vec3":
        return Vec3([as_bipoly(c) for c in self.comps])

    def __add__(self, other: "Vec3") -> "Vec3":
        if self.kind == other.kind:
            return Vec3([a + b for a, b in zip(self, other)])
        return Vec3([as_bipoly(a) + as_bipoly(b) for a, b in zip(self, other)])

    def __sub__(self, other: "Vec3") -> "Vec3":
        if self.kind == other.kind:
            return Vec3([a - b for a, b in zip(self, other)])
        return Vec3([as_bipoly(a) - as_bipoly(b) for a, b in zip(self, other)])

    def __neg__(self) -> "Vec3":
        return Vec3([-a for a in self])

    def scale(self, s) -> "Vec3":
        """Multiply by a scalar or a polynomial."""
        if isinstance(s, BiPoly) or self.kind == "bi":
            s = as_bipoly(s)
            return Vec3([s * as_bipoly(a) for a in self])
        if isinstance(s, UniPoly):
            return Vec3([s * a for a in self])
        return Vec3([a.scale(s) for a in self])

    def dz(self) -> "Vec3":
        if self.kind == "uni":
            return Vec3([c.derivative() for c in self])
        return Vec3([c.dz() for c in self])

    def dzbar(self) -> "Vec3":
        if self.kind == "uni":
            return Vec3([UniPoly() for _ in self])
        return Vec3([c.dzbar() for c in self])

    def conj_swap(self) -> "Vec3":
        return Vec3([conj_swap(c) for c in self])

    @property
    def degree(self) -> int:
        if self.kind != "uni":
            raise AlgebraError("degree is defined for z-only vectors")
        return max(c.degree for c in self)


def dot(u: Vec3, v: Vec3):
    """Bilinear (no conjugation) dot product."""
    if u.kind == "uni" and v.kind == "uni":
        return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
    a, b = u.as_bi(), v.as_bi()
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def herm_pair(u: Vec3, v: Vec3) -> BiPoly:
    """Hermitian pairing sum_i u_i * conj(v_i) as an exact BiPoly."""
    a = u.as_bi()
    b = v.conj_swap()
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def cross(u: Vec3, v: Vec3) -> Vec3:
    """Bilinear cross product."""
    if u.kind != v.kind:
        u, v = u.as_bi(), v.as_bi()
    return Vec3(
        [
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        ]
    )


def det3(a: Vec3, b: Vec3, c: Vec3):
    return dot(a, cross(b, c))


# ---------------------------------------------------------------------------
# gcd and Bezout


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic greatest common divisor."""
    if a.is_zero() and b.is_zero():
        raise AlgebraError("gcd undefined for two zero polynomials")
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: UniPoly, b: UniPoly) -> tuple[UniPoly, UniPoly, UniPoly]:
    """Return (g, s, t) with s*a + t*b = g, g monic."""
    if a.is_zero() and b.is_zero():
        raise AlgebraError("gcd undefined for two zero polynomials")
    r0, r1 = a, b
    s0, s1 = UniPoly([1]), UniPoly()
    t0, t1 = UniPoly(), UniPoly([1])
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    inv = r0.lead().inverse()
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)


def bezout_solve(P: UniPoly, Q: UniPoly, R: UniPoly) -> tuple[UniPoly, UniPoly]:
    """Solve A*Q - B*P = R for coprime (P, Q).

    The solution set is (A + L*P, B + L*Q) for polynomial L; the returned
    representative has deg A < deg P.  When P is zero, Q is a nonzero
    constant and (R/Q, 0) is returned.
    """
    if P.is_zero() and Q.is_zero():
        raise AlgebraError("no Bézout solution guaranteed: P and Q both zero")
    g, s, t = poly_xgcd(P, Q)
    if g.degree > 0:
        raise AlgebraError("no Bézout solution guaranteed: P and Q not coprime")
    # s*P + t*Q = 1  =>  (R*t)*Q - (-R*s)*P = R
    A = R * t
    B = -(R * s)
    if P.is_zero():
        return R.scale(Q.lead().inverse()), UniPoly()
    L, A = A.divmod(P)
    B = B - L * Q
    return A, B


def remove_content(v: Vec3) -> tuple[Vec3, UniPoly]:
    """Divide out the monic gcd of a z-only vector and normalise.

    Returns (reduced, content): reduced has coprime components and its
    first nonzero component is monic; content * reduced is a constant
    multiple of v.
    """
    if v.kind != "uni":
        raise AlgebraError("remove_content expects z-only components")
    if v.is_zero():
        raise AlgebraError("remove_content of the zero vector")
    g = None
    for c in v:
        if c.is_zero():
            continue
        g = c.monic() if g is None else poly_gcd(g, c)
    reduced = [c // g for c in v]
    first = next(c for c in reduced if not c.is_zero())
    inv = first.lead().inverse()
    return Vec3([c.scale(inv) for c in reduced]), g
