"""Exact Moebius geometry of S^4 = R^4 + {oo} in inversive coordinates.

Spheres and points of S^4 are vectors in R^{5,1} with the Lorentz form

    <x, y> = x1 y1 + ... + x5 y5 - x6 y6,

spheres being space-like and points null.  Inversion in a sphere is the
Lorentz reflection in its vector, so Mob(S^4) is represented by 6x6
rational matrices preserving the form.  Everything here is exact: no
decision is ever taken on a float.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import reduce
from typing import Optional, Sequence

N = 6
SIGNATURE = (1, 1, 1, 1, 1, -1)


class _Infinity:
    """The point at infinity of S^4."""
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()


def as_point(p) -> tuple[Fraction, ...]:
    if p is INFINITY:
        return p
    p = tuple(Fraction(c) for c in p)
    if len(p) != 4:
        raise ValueError(f"points of R^4 have 4 coordinates, got {len(p)}")
    return p


def norm_sq(v) -> Fraction:
    return sum(c * c for c in v)


def dist_sq(p, q) -> Fraction:
    return sum((a - b) ** 2 for a, b in zip(p, q))


@dataclass(frozen=True)
class Sphere:
    """Round sphere in R^4; also stands for the closed ball it bounds."""
    center: tuple[Fraction, ...]
    radius_sq: Fraction

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        object.__setattr__(self, "radius_sq", Fraction(self.radius_sq))
        if self.radius_sq <= 0:
            raise ValueError("radius_sq must be positive")

    def power(self, p) -> Fraction:
        """|p - c|^2 - r^2; negative strictly inside, zero on the sphere."""
        return dist_sq(p, self.center) - self.radius_sq

    def contains(self, p, strict=True) -> bool:
        if p is INFINITY:
            return False
        pw = self.power(p)
        return pw < 0 if strict else pw <= 0


# -- inversive coordinates ------------------------------------------------

def lorentz_product(x: Sequence, y: Sequence) -> Fraction:
    return sum(s * a * b for s, a, b in zip(SIGNATURE, x, y))


def sphere_to_inversive(s: Sphere) -> tuple[Fraction, ...]:
    """sigma = (c, (|c|^2 - r^2 - 1)/2, (|c|^2 - r^2 + 1)/2), with <sigma, sigma> = r^2."""
    b = norm_sq(s.center) - s.radius_sq
    return s.center + ((b - 1) / 2, (b + 1) / 2)


def point_to_inversive(p) -> tuple[Fraction, ...]:
    """Null vector of a point; oo maps to (0, 0, 0, 0, 1, 1).

    For a sphere vector sigma, 2 <p^, sigma> = r^2 - |p - c|^2, so the
    pairing is positive exactly at points strictly inside the ball.
    """
    if p is INFINITY:
        return (Fraction(0),) * 4 + (Fraction(1), Fraction(1))
    p = as_point(p)
    a = norm_sq(p)
    return p + ((a - 1) / 2, (a + 1) / 2)


def inversive_to_point(x: Sequence):
    """Dehomogenize a null vector."""
    x = [Fraction(c) for c in x]
    w = x[5] - x[4]
    if w == 0:
        if any(x[:4]) or x[5] == 0:
            raise ValueError("not the class of a point of S^4")
        return INFINITY
    return tuple(c / w for c in x[:4])


def inside_by_pairing(p, s: Sphere) -> bool:
    return lorentz_product(point_to_inversive(p), sphere_to_inversive(s)) > 0


def invert_point(s: Sphere, p):
    """Classical inversion x -> c + r^2 (x - c)/|x - c|^2."""
    if p is INFINITY:
        return s.center
    p = as_point(p)
    d = dist_sq(p, s.center)
    if d == 0:
        return INFINITY
    k = s.radius_sq / d
    return tuple(c + k * (a - c) for a, c in zip(p, s.center))


# -- matrices ---------------------------------------------------------------

def _lcm(a, b):
    return a * b // math.gcd(a, b)


class MoebiusMatrix:
    """6x6 rational matrix stored as integer numerators over one denominator.

    The representation is normalized (den > 0, gcd of everything 1), so
    ``key`` is a canonical serialization usable for hashing.
    """
    __slots__ = ("num", "den")

    def __init__(self, num: Sequence[int], den: int = 1, _normalized=False):
        if not _normalized:
            num = tuple(int(a) for a in num)
            den = int(den)
            if len(num) != N * N:
                raise ValueError("expected 36 entries")
            if den == 0:
                raise ZeroDivisionError("zero denominator")
            if den < 0:
                num = tuple(-a for a in num)
                den = -den
            g = math.gcd(den, *num)
            if g != 1:
                num = tuple(a // g for a in num)
                den //= g
        self.num = num
        self.den = den

    @classmethod
    def from_rows(cls, rows) -> MoebiusMatrix:
        entries = [Fraction(a) for row in rows for a in row]
        den = reduce(_lcm, (e.denominator for e in entries), 1)
        return cls([e.numerator * (den // e.denominator) for e in entries], den)

    @classmethod
    def identity(cls) -> MoebiusMatrix:
        return cls(tuple(1 if i == j else 0 for i in range(N) for j in range(N)), 1, True)

    @property
    def key(self) -> tuple:
        return (self.den,) + self.num

    def __eq__(self, other):
        return isinstance(other, MoebiusMatrix) and self.den == other.den and self.num == other.num

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"MoebiusMatrix({self.rows()!r})"

    def __getstate__(self):
        return (self.num, self.den)

    def __setstate__(self, state):
        self.num, self.den = state

    def entry(self, i, j) -> Fraction:
        return Fraction(self.num[N * i + j], self.den)

    def rows(self) -> list[list[Fraction]]:
        return [[self.entry(i, j) for j in range(N)] for i in range(N)]

    def is_identity(self) -> bool:
        return self == _IDENTITY

    def __matmul__(self, other: MoebiusMatrix) -> MoebiusMatrix:
        a, b = self.num, other.num
        out = [0] * (N * N)
        for i in range(N):
            row = a[N * i:N * i + N]
            for j in range(N):
                out[N * i + j] = (row[0] * b[j] + row[1] * b[N + j] + row[2] * b[2 * N + j]
                                  + row[3] * b[3 * N + j] + row[4] * b[4 * N + j] + row[5] * b[5 * N + j])
        return MoebiusMatrix(out, self.den * other.den)

    def __pow__(self, k: int) -> MoebiusMatrix:
        if k < 0:
            return self.inverse() ** (-k)
        out, base = _IDENTITY, self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def transpose(self) -> MoebiusMatrix:
        return MoebiusMatrix(tuple(self.num[N * j + i] for i in range(N) for j in range(N)), self.den, True)

    def inverse(self) -> MoebiusMatrix:
        # Lorentz matrices satisfy M^{-1} = J M^T J
        t = self.transpose().num
        return MoebiusMatrix(tuple(SIGNATURE[i] * t[N * i + j] * SIGNATURE[j] for i in range(N) for j in range(N)),
                             self.den, True)

    def apply(self, x: Sequence) -> tuple[Fraction, ...]:
        x = [Fraction(c) for c in x]
        return tuple(sum(self.num[N * i + j] * x[j] for j in range(N)) / self.den for i in range(N))

    def det(self) -> Fraction:
        return determinant(self.rows())

    def is_lorentz(self) -> bool:
        """Exact check of M^T J M = J."""
        a, d2 = self.num, self.den * self.den
        for i in range(N):
            for j in range(i, N):
                s = sum(SIGNATURE[k] * a[N * k + i] * a[N * k + j] for k in range(N))
                if s != (SIGNATURE[i] * d2 if i == j else 0):
                    return False
        return True

    def right_reflect(self, refl: Reflection) -> MoebiusMatrix:
        """self @ R for the reflection R = I - 2 a (J a)^T / <a, a>, as a rank-one update."""
        a, b, n = refl.vec, refl.jvec, refl.norm
        m = self.num
        out = []
        for i in range(N):
            row = m[N * i:N * i + N]
            ma2 = 2 * (row[0] * a[0] + row[1] * a[1] + row[2] * a[2] + row[3] * a[3] + row[4] * a[4] + row[5] * a[5])
            out.extend([n * row[j] - ma2 * b[j] for j in range(N)])
        return MoebiusMatrix(out, self.den * n)

    def reduce_mod(self, p: int) -> tuple[int, ...]:
        """Entries mod p (row-major); p must not divide the denominator."""
        if self.den % p == 0:
            raise ValueError(f"p = {p} divides a denominator ({self.den})")
        inv = pow(self.den, -1, p)
        return tuple((a * inv) % p for a in self.num)


_IDENTITY = MoebiusMatrix.identity()


@dataclass(frozen=True)
class Reflection:
    """Integer data of the Lorentz reflection in a sphere vector.

    ``vec`` is a primitive integer multiple of sigma, ``jvec`` its image
    under J and ``norm`` = <vec, vec>.
    """
    vec: tuple[int, ...]
    jvec: tuple[int, ...]
    norm: int

    @classmethod
    def of_sphere(cls, s: Sphere) -> Reflection:
        sigma = sphere_to_inversive(s)
        q = reduce(_lcm, (c.denominator for c in sigma), 1)
        vec = [int(c * q) for c in sigma]
        g = math.gcd(*vec)
        vec = tuple(v // g for v in vec)
        jvec = tuple(sg * v for sg, v in zip(SIGNATURE, vec))
        return cls(vec, jvec, sum(v * w for v, w in zip(vec, jvec)))

    def matrix(self) -> MoebiusMatrix:
        return _IDENTITY.right_reflect(self)


def reflection_matrix(s: Sphere) -> MoebiusMatrix:
    """Matrix of x -> x - 2 <x, sigma>/<sigma, sigma> sigma (inversion in s)."""
    return Reflection.of_sphere(s).matrix()


def apply_to_point(m: MoebiusMatrix, p):
    return inversive_to_point(m.apply(point_to_inversive(p)))


def determinant(rows) -> Fraction:
    a = [[Fraction(x) for x in row] for row in rows]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] / a[col][col]
            if f:
                for c in range(col, n):
                    a[r][c] -= f * a[col][c]
    return det


def solve(a, b) -> Optional[list[Fraction]]:
    """Solve a x = b exactly; None when a is singular."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col] / m[col][col]
                for c in range(col, n + 1):
                    m[r][c] -= f * m[col][c]
    return [m[i][n] / m[i][i] for i in range(n)]


# -- pair classification ----------------------------------------------------

class PairTag(str, Enum):
    DISJOINT = "Disjoint"
    EXTERNALLY_TANGENT = "ExternallyTangent"
    INTERNALLY_TANGENT = "InternallyTangent"
    NESTED = "Nested"
    INTERSECTING = "Intersecting"


# cos^2(pi/m) is rational only for m in {1, 2, 3, 4, 6} (Niven); no other
# order up to the search bound can match a rational value.
_RATIONAL_COS_SQ = {2: Fraction(0), 3: Fraction(1, 4), 4: Fraction(1, 2), 6: Fraction(3, 4)}
MAX_COXETER_ORDER = 12


@dataclass(frozen=True)
class PairClass:
    tag: PairTag
    dist_sq: Fraction
    cos_ext_num: Optional[Fraction] = None    # d^2 - r1^2 - r2^2
    cos_ext_sq: Optional[Fraction] = None
    coxeter_order: Optional[int] = None

    @property
    def intersecting(self) -> bool:
        return self.tag is PairTag.INTERSECTING

    @property
    def tangent(self) -> bool:
        return self.tag in (PairTag.EXTERNALLY_TANGENT, PairTag.INTERNALLY_TANGENT)

    @property
    def angle(self) -> Optional[str]:
        """Exterior angle as 'pi/m', or None when not a Coxeter angle."""
        if self.coxeter_order is None:
            return None
        return f"pi/{self.coxeter_order}"

    def exterior_angle(self) -> Optional[float]:
        """Decimal shadow of the exterior angle (radians)."""
        if self.cos_ext_sq is None:
            return None
        c = math.sqrt(self.cos_ext_sq)
        return math.acos(math.copysign(c, self.cos_ext_num) if self.cos_ext_num else 0.0)


def coxeter_order_of(cos_num: Fraction, cos_sq: Fraction) -> Optional[int]:
    if cos_num < 0:
        return None
    for m, v in _RATIONAL_COS_SQ.items():
        if m <= MAX_COXETER_ORDER and cos_sq == v:
            return m
    return None


def classify_pair(s1: Sphere, s2: Sphere) -> PairClass:
    """Exact position of two spheres from d^2, r1^2, r2^2.

    The exterior angle is theta with cos theta = (d^2 - r1^2 - r2^2)/(2 r1 r2),
    i.e. the dihedral angle of the region outside both balls.
    """
    if s1 == s2:
        raise ValueError("coincident spheres")
    d = dist_sq(s1.center, s2.center)
    a, b = s1.radius_sq, s2.radius_sq
    num = d - a - b
    lhs, rhs = num * num, 4 * a * b
    if lhs < rhs:
        cos_sq = lhs / rhs
        return PairClass(PairTag.INTERSECTING, d, num, cos_sq, coxeter_order_of(num, cos_sq))
    if lhs == rhs:
        tag = PairTag.EXTERNALLY_TANGENT if num > 0 else PairTag.INTERNALLY_TANGENT
    else:
        tag = PairTag.DISJOINT if num > 0 else PairTag.NESTED
    return PairClass(tag, d)


# -- common points of balls -------------------------------------------------

@dataclass(frozen=True)
class CommonPointCertificate:
    """Minimizer of the largest power over the balls.

    ``value`` = min_x max_i (|x - c_i|^2 - r_i^2), attained at ``point``,
    with ``active`` the indices carrying the convex weights ``weights``.
    The closed balls meet iff value <= 0, in which case ``point`` is a
    common point.
    """
    point: tuple[Fraction, ...]
    value: Fraction
    active: tuple[int, ...]
    weights: tuple[Fraction, ...]

    @property
    def nonempty(self) -> bool:
        return self.value <= 0


def min_max_power(balls: Sequence[Sphere]) -> CommonPointCertificate:
    """Exact minimizer of max_i power_i(x).

    All power functions share the Hessian 2I, so at the optimum x is a
    convex combination of the active centers having equal power there
    (KKT).  By Caratheodory the active centers can be taken affinely
    independent; each such subset is tried and the optimum recognised by
    nonnegative weights and no inactive ball having larger power.
    """
    if not balls:
        raise ValueError("need at least one ball")
    k = len(balls)
    for size in range(1, k + 1):
        for subset in itertools.combinations(range(k), size):
            c0 = balls[subset[0]].center
            a0 = balls[subset[0]].radius_sq
            es = [tuple(x - y for x, y in zip(balls[i].center, c0)) for i in subset[1:]]
            gram = [[sum(x * y for x, y in zip(e, f)) for f in es] for e in es]
            rhs = [(norm_sq(e) - balls[i].radius_sq + a0) / 2 for e, i in zip(es, subset[1:])]
            mu = solve(gram, rhs) if es else []
            if mu is None:
                continue
            weights = (1 - sum(mu, Fraction(0)),) + tuple(mu)
            if any(w < 0 for w in weights):
                continue
            x = tuple(c + sum((m * e[j] for m, e in zip(mu, es)), Fraction(0)) for j, c in enumerate(c0))
            t = balls[subset[0]].power(x)
            if all(balls[j].power(x) <= t for j in range(k) if j not in subset):
                return CommonPointCertificate(x, t, subset, weights)
    raise AssertionError("no KKT point found")  # unreachable for finitely many balls


def balls_common_point(balls: Sequence[Sphere]) -> bool:
    """Whether the closed balls have a common point (exact)."""
    if not 1 <= len(balls) <= 4:
        raise ValueError("between 1 and 4 balls")
    return min_max_power(balls).nonempty
