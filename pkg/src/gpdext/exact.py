"""Exact arithmetic for circle-group values and sums of roots of unity.

Angles live in Q/Z as reduced fractions, with e(a) = exp(2*pi*i*a).  A
CircleScalar is a single point on the unit circle, exact when its angle is
rational and a unit-modulus complex float otherwise.  A Cyclo is a finite
Q-linear combination of roots of unity; zero testing reduces the coefficient
polynomial modulo a cyclotomic polynomial, so equality of exact values is
decided exactly, never by tolerance.

The module also holds the integer linear algebra used to decide solvability
of angle equations modulo 1 (diagonalization by unimodular row/column
operations).
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache

APPROX_TOL = 1e-12

TWO_PI = 2.0 * math.pi


def frac_mod1(a) -> Fraction:
    """Reduce a rational to its representative in [0, 1)."""
    if type(a) is Fraction:
        return _frac_mod1_cached(a)
    return Fraction(a) % 1


@lru_cache(maxsize=1 << 16)
def _frac_mod1_cached(a: Fraction) -> Fraction:
    return a % 1


@lru_cache(maxsize=1 << 16)
def _angle_add(a: Fraction, b: Fraction) -> Fraction:
    return (a + b) % 1


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients (ascending) of the n-th cyclotomic polynomial."""
    if n < 1:
        raise ValueError("n must be positive")
    # x^n - 1 divided by the cyclotomic polynomials of the proper divisors.
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _polydiv_exact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


def _polydiv_exact(num: list, den: list) -> list:
    """Divide polynomials with exact coefficients; divisor must be monic."""
    assert den[-1] == 1
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = num[i + len(den) - 1]
        q[i] = c
        if c:
            for j, dj in enumerate(den):
                num[i + j] -= c * dj
    assert all(c == 0 for c in num[: len(den) - 1])
    return q


def _polyrem_int(num: list[int], den: tuple[int, ...]) -> list[int]:
    """Remainder of an integer polynomial modulo a monic integer polynomial."""
    num = list(num)
    dn = len(den)
    for i in range(len(num) - 1, dn - 2, -1):
        c = num[i]
        if c:
            for j in range(dn):
                num[i - dn + 1 + j] -= c * den[j]
    return num[: dn - 1]


class Cyclo:
    """Exact cyclotomic rational: a finite sum  sum_j c_j * e(a_j)  with
    rational coefficients c_j and rational angles a_j in Q/Z."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Fraction, Fraction] | None = None):
        self.terms = {} if terms is None else terms

    @staticmethod
    def from_rational(c) -> "Cyclo":
        c = Fraction(c)
        return Cyclo({Fraction(0): c} if c else {})

    @staticmethod
    def from_root(angle, coeff=1) -> "Cyclo":
        c = Fraction(coeff)
        return Cyclo({frac_mod1(angle): c} if c else {})

    @staticmethod
    def zero() -> "Cyclo":
        return Cyclo({})

    @staticmethod
    def one() -> "Cyclo":
        return Cyclo.from_rational(1)

    @staticmethod
    def coerce(x) -> "Cyclo":
        if isinstance(x, Cyclo):
            return x
        if isinstance(x, (int, Fraction)):
            return Cyclo.from_rational(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to Cyclo")

    def __add__(self, other):
        other = Cyclo.coerce(other)
        terms = dict(self.terms)
        for a, c in other.terms.items():
            s = terms.get(a, 0) + c
            if s:
                terms[a] = s
            else:
                terms.pop(a, None)
        return Cyclo(terms)

    __radd__ = __add__

    def __neg__(self):
        return Cyclo({a: -c for a, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-Cyclo.coerce(other))

    def __rsub__(self, other):
        return (-self) + Cyclo.coerce(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Cyclo({})
            return Cyclo({a: c * other for a, c in self.terms.items()})
        other = Cyclo.coerce(other)
        # Fast path: multiplying by a single monomial is a rotation.
        if len(other.terms) == 1:
            (b, d), = other.terms.items()
            return Cyclo({_angle_add(a, b): c * d for a, c in self.terms.items()})
        terms: dict[Fraction, Fraction] = {}
        for a, c in self.terms.items():
            for b, d in other.terms.items():
                k = _angle_add(a, b)
                s = terms.get(k, 0) + c * d
                if s:
                    terms[k] = s
                else:
                    terms.pop(k, None)
        return Cyclo(terms)

    __rmul__ = __mul__

    def rotated(self, angle) -> "Cyclo":
        angle = frac_mod1(angle)
        return Cyclo({_angle_add(a, angle): c for a, c in self.terms.items()})

    def conj(self) -> "Cyclo":
        return Cyclo({frac_mod1(-a): c for a, c in self.terms.items()})

    def is_zero(self) -> bool:
        terms = self.terms
        if not terms:
            return True
        if len(terms) == 1:
            return False  # a single nonzero multiple of a root of unity
        if len(terms) == 2:
            # c1 e(a1) + c2 e(a2) = 0 only when the roots are equal or opposite
            (a1, c1), (a2, c2) = terms.items()
            d = a1 - a2
            if d == Fraction(1, 2) or d == Fraction(-1, 2):
                return c1 == c2
            return False  # equal angles cannot occur (dict keys), so nonzero
        n = math.lcm(*(a.denominator for a in terms))
        # clear denominators: integer polynomial in the primitive n-th root
        den = math.lcm(*(c.denominator for c in terms.values()))
        coeffs = [0] * n
        for a, c in terms.items():
            coeffs[a.numerator * (n // a.denominator)] += c.numerator * (den // c.denominator)
        if all(c == 0 for c in coeffs):
            return True
        if n == 1:
            return False
        rem = _polyrem_int(coeffs, cyclotomic_polynomial(n))
        return all(c == 0 for c in rem)

    def __eq__(self, other):
        try:
            other = Cyclo.coerce(other)
        except TypeError:
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        raise TypeError("Cyclo is not hashable")

    def to_complex(self) -> complex:
        return sum(
            (float(c) * cmath.exp(1j * TWO_PI * float(a)) for a, c in self.terms.items()),
            0j,
        )

    def __repr__(self):
        if not self.terms:
            return "Cyclo(0)"
        parts = [f"{c}*e({a})" for a, c in sorted(self.terms.items())]
        return "Cyclo(" + " + ".join(parts) + ")"


class CircleScalar:
    """A point on the unit circle.

    Exact values carry a rational angle p/q in Q/Z and denote e(p/q);
    approximate values carry a complex number within 1e-12 of the circle.
    Products, powers and conjugates of exact values stay exact.
    """

    __slots__ = ("angle", "z")

    def __init__(self, angle: Fraction | None = None, z: complex | None = None):
        if (angle is None) == (z is None):
            raise ValueError("exactly one of angle, z required")
        if angle is not None:
            self.angle = frac_mod1(angle)
            self.z = None
        else:
            z = complex(z)
            if abs(abs(z) - 1.0) > APPROX_TOL:
                raise ValueError(f"not on the unit circle: {z!r}")
            self.angle = None
            self.z = z / abs(z)

    @staticmethod
    def one() -> "CircleScalar":
        return CircleScalar(angle=Fraction(0))

    @staticmethod
    def from_angle(a) -> "CircleScalar":
        return CircleScalar(angle=Fraction(a))

    @staticmethod
    def root_of_unity(q: int, p: int = 1) -> "CircleScalar":
        return CircleScalar(angle=Fraction(p, q))

    @staticmethod
    def from_complex(z) -> "CircleScalar":
        return CircleScalar(z=z)

    @staticmethod
    def coerce(x) -> "CircleScalar":
        """CircleScalar passes through; Fraction/str mean an angle; int,
        float and complex mean the value itself."""
        if isinstance(x, CircleScalar):
            return x
        if isinstance(x, Fraction):
            return CircleScalar(angle=x)
        if isinstance(x, str):
            return CircleScalar(angle=Fraction(x))
        if isinstance(x, int):
            if x == 1:
                return CircleScalar.one()
            if x == -1:
                return CircleScalar(angle=Fraction(1, 2))
            raise ValueError(f"{x} is not on the unit circle")
        if isinstance(x, (float, complex)):
            return CircleScalar(z=x)
        raise TypeError(f"cannot coerce {type(x).__name__} to CircleScalar")

    @property
    def is_exact(self) -> bool:
        return self.angle is not None

    def __mul__(self, other):
        if not isinstance(other, CircleScalar):
            return NotImplemented
        if self.is_exact and other.is_exact:
            return CircleScalar(angle=self.angle + other.angle)
        return CircleScalar(z=self.to_complex() * other.to_complex())

    def conj(self) -> "CircleScalar":
        if self.is_exact:
            return CircleScalar(angle=-self.angle)
        return CircleScalar(z=self.z.conjugate())

    inverse = conj

    def __pow__(self, n: int):
        if self.is_exact:
            return CircleScalar(angle=self.angle * n)
        return CircleScalar(z=self.z ** n)

    def to_complex(self) -> complex:
        if self.is_exact:
            quarter = _QUARTER_TURNS.get(self.angle)
            if quarter is not None:
                return quarter
            return cmath.exp(1j * TWO_PI * float(self.angle))
        return self.z

    def as_cyclo(self) -> Cyclo:
        if not self.is_exact:
            raise ValueError("approximate circle value has no exact form")
        return Cyclo.from_root(self.angle)

    def times(self, coeff):
        """Multiply an algebra coefficient by this circle value, staying
        exact when both sides are exact."""
        if self.is_exact and is_exact_scalar(coeff):
            if isinstance(coeff, Cyclo):
                return coeff.rotated(self.angle)
            return Cyclo.from_root(self.angle, coeff)
        return self.to_complex() * scalar_to_complex(coeff)

    def is_one(self, tol: float = APPROX_TOL) -> bool:
        if self.is_exact:
            return self.angle == 0
        return abs(self.z - 1.0) <= tol

    def isclose(self, other, tol: float = 1e-10) -> bool:
        other = CircleScalar.coerce(other)
        if self.is_exact and other.is_exact:
            return self.angle == other.angle
        return abs(self.to_complex() - other.to_complex()) <= tol

    def __eq__(self, other):
        if not isinstance(other, CircleScalar):
            try:
                other = CircleScalar.coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        if self.is_exact and other.is_exact:
            return self.angle == other.angle
        return self.to_complex() == other.to_complex()

    def __hash__(self):
        if self.is_exact:
            return hash(("circle", self.angle))
        return hash(("circle", self.z))

    def __repr__(self):
        if self.is_exact:
            return f"e({self.angle})"
        return f"circle({self.z:.6f})"


_QUARTER_TURNS = {
    Fraction(0): 1 + 0j,
    Fraction(1, 2): -1 + 0j,
    Fraction(1, 4): 1j,
    Fraction(3, 4): -1j,
}

ONE = CircleScalar.one()


# ---------------------------------------------------------------------------
# scalar helpers: algebra coefficients are int/Fraction/Cyclo (exact mode)
# or float/complex (numeric mode); mixing demotes to complex.

def is_exact_scalar(c) -> bool:
    return isinstance(c, (int, Fraction, Cyclo))


def scalar_to_complex(c) -> complex:
    if isinstance(c, Cyclo):
        return c.to_complex()
    if isinstance(c, Fraction):
        return complex(float(c))
    return complex(c)


def smul(a, b):
    ta, tb = type(a), type(b)
    if ta is Cyclo or tb is Cyclo:
        return (a if ta is Cyclo else Cyclo.coerce(a)) * b
    if (ta is Fraction or ta is int) and (tb is Fraction or tb is int):
        return a * b
    if is_exact_scalar(a) and is_exact_scalar(b):
        return Cyclo.coerce(a) * b
    return scalar_to_complex(a) * scalar_to_complex(b)


def sadd(a, b):
    ta, tb = type(a), type(b)
    if ta is Cyclo or tb is Cyclo:
        return (a if ta is Cyclo else Cyclo.coerce(a)) + b
    if (ta is Fraction or ta is int) and (tb is Fraction or tb is int):
        return a + b
    if is_exact_scalar(a) and is_exact_scalar(b):
        return Cyclo.coerce(a) + b
    return scalar_to_complex(a) + scalar_to_complex(b)


def sconj(a):
    if isinstance(a, Cyclo):
        return a.conj()
    if isinstance(a, (int, Fraction)):
        return a
    return scalar_to_complex(a).conjugate()


def scalar_is_zero(a) -> bool:
    if isinstance(a, Cyclo):
        return a.is_zero()
    return a == 0


def scalars_equal(a, b, tol: float = 0.0) -> bool:
    if is_exact_scalar(a) and is_exact_scalar(b):
        return (Cyclo.coerce(a) - Cyclo.coerce(b)).is_zero()
    return abs(scalar_to_complex(a) - scalar_to_complex(b)) <= tol


# ---------------------------------------------------------------------------
# integer linear algebra: solve A x = w (mod 1) over the rationals.

def solve_mod1(rows: list[list[int]], rhs) -> list[Fraction] | None:
    """Solve an integer linear system modulo 1.

    Diagonalizes A by unimodular row and column operations (mirrored on the
    right-hand side and on a column-transform accumulator), then reads off
    solvability per diagonal entry.  Returns angles in [0, 1) or ``None``
    when no rational solution exists; the criterion is exact, so ``None``
    certifies unsolvability over the reals as well (the right-hand side is
    rational).
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    S = [list(map(int, r)) for r in rows]
    w = [Fraction(x) for x in rhs]
    # columns transform: x = C @ y
    C = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def row_addmul(i, j, q):  # row_i -= q * row_j
        Si, Sj = S[i], S[j]
        for t in range(n):
            Si[t] -= q * Sj[t]
        w[i] -= q * w[j]

    def col_addmul(i, j, q):  # col_i -= q * col_j
        for r in S:
            r[i] -= q * r[j]
        for r in C:
            r[i] -= q * r[j]

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        w[i], w[j] = w[j], w[i]

    def swap_cols(i, j):
        for r in S:
            r[i], r[j] = r[j], r[i]
        for r in C:
            r[i], r[j] = r[j], r[i]

    t = 0
    while t < min(m, n):
        # locate a nonzero pivot of smallest magnitude
        pivot = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = abs(S[i][j])
                if v and (best is None or v < best):
                    best, pivot = v, (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            p = S[t][t]
            dirty = False
            for i in range(t + 1, m):
                if S[i][t]:
                    q = S[i][t] // p
                    row_addmul(i, t, q)
                    if S[i][t]:
                        swap_rows(t, i)
                        dirty = True
                        p = S[t][t]
            for j in range(t + 1, n):
                if S[t][j]:
                    q = S[t][j] // p
                    col_addmul(j, t, q)
                    if S[t][j]:
                        swap_cols(t, j)
                        dirty = True
                        p = S[t][t]
            if not dirty:
                break
        t += 1
    rank = t

    y = [Fraction(0)] * n
    for i in range(rank):
        y[i] = frac_mod1(w[i] / S[i][i])
    for i in range(rank, m):
        if w[i].denominator != 1:
            return None
    x = []
    for i in range(n):
        acc = Fraction(0)
        Ci = C[i]
        for j in range(rank):
            if Ci[j]:
                acc += Ci[j] * y[j]
        x.append(frac_mod1(acc))
    return x
