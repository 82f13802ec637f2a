"""The reflection group generated by the inversions of a ball configuration.

Elements are enumerated exactly as 6x6 Lorentz matrices, compared with
an independent word-rewriting enumeration of the abstract Coxeter group,
and reduced modulo primes to obtain finite quotients.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .construction import AuditReport, BallConfiguration
from .inversive import (
    INFINITY,
    MoebiusMatrix,
    Reflection,
    apply_to_point,
    as_point,
)
from .serial import decimal_shadow, frac_str

log = logging.getLogger(__name__)

DEFAULT_ELEMENT_CAP = 10 ** 6
FINITE_ORDER_BOUND = 60

INF = None  # infinite Coxeter exponent


class PresentationError(ValueError):
    pass


@dataclass(frozen=True)
class GroupPresentation:
    generator_count: int
    coxeter_matrix: tuple[tuple[Optional[int], ...], ...]

    def __post_init__(self):
        m = tuple(tuple(row) for row in self.coxeter_matrix)
        n = self.generator_count
        if len(m) != n or any(len(row) != n for row in m):
            raise PresentationError("coxeter matrix must be n x n")
        for i in range(n):
            if m[i][i] != 1:
                raise PresentationError(f"m[{i}][{i}] must be 1")
            for j in range(i + 1, n):
                if m[i][j] != m[j][i]:
                    raise PresentationError(f"coxeter matrix not symmetric at ({i}, {j})")
                if m[i][j] is not INF and m[i][j] < 2:
                    raise PresentationError(f"m[{i}][{j}] = {m[i][j]} < 2")
        object.__setattr__(self, "coxeter_matrix", m)

    def m(self, i: int, j: int) -> Optional[int]:
        return self.coxeter_matrix[i][j]

    def finite_pairs(self) -> list[tuple[int, int, int]]:
        n = self.generator_count
        return [(i, j, self.m(i, j)) for i in range(n) for j in range(i + 1, n) if self.m(i, j) is not INF]

    @classmethod
    def from_json(cls, data) -> GroupPresentation:
        rows = [[None if x in ("inf", None) else int(x) for x in row] for row in data]
        return cls(len(rows), rows)

    def to_json(self) -> list[list]:
        return [["inf" if x is INF else x for x in row] for row in self.coxeter_matrix]


def presentation_from_audit(report: AuditReport) -> GroupPresentation:
    if report.violations:
        listed = ", ".join(f"({v.i}, {v.j}): {v.reason}" for v in report.violations[:10])
        raise PresentationError(f"{len(report.violations)} non-Coxeter pairs: {listed}")
    return GroupPresentation(report.n, report.coxeter_matrix)


def generators(conf: BallConfiguration) -> list[Reflection]:
    return [Reflection.of_sphere(s) for s in conf.spheres]


# -- relations ------------------------------------------------------------------

@dataclass(frozen=True)
class RelationFailure:
    i: int
    j: int
    expected_order: int
    found_order: Optional[int]


@dataclass(frozen=True)
class RelationCheck:
    pairs_checked: int
    involutions_checked: int
    failures: tuple[RelationFailure, ...]

    @property
    def ok(self) -> bool:
        return not self.failures


_SCREEN_PRIMES = (7, 11, 13)


def element_order(m: MoebiusMatrix, bound: int = FINITE_ORDER_BOUND) -> Optional[int]:
    """Smallest k <= bound with m^k = I exactly, or None.

    The exact order is a multiple of the order of every reduction mod q,
    so only multiples of their lcm are tested exactly.
    """
    step = 1
    for q in _SCREEN_PRIMES:
        k = image_order(np.array(m.reduce_mod(q), dtype=np.int64).reshape(6, 6), q, bound)
        if k is None:
            return None
        step = math.lcm(step, k)
        if step > bound:
            return None
    for k in range(step, bound + 1, step):
        if (m ** k).is_identity():
            return k
    return None


def verify_relations(conf: BallConfiguration, pres: GroupPresentation) -> RelationCheck:
    """R_i^2 = I and (R_i R_j)^m = I with no smaller power trivial, exactly."""
    mats = [g.matrix() for g in generators(conf)]
    failures = []
    for i, r in enumerate(mats):
        if element_order(r, 2) != 2:
            failures.append(RelationFailure(i, i, 2, element_order(r, 2)))
    pairs = pres.finite_pairs()
    for i, j, m in pairs:
        k = element_order(mats[i] @ mats[j], m)
        if k != m:
            failures.append(RelationFailure(i, j, m, k))
    return RelationCheck(len(pairs), len(mats), tuple(failures))


# -- enumeration by matrices ------------------------------------------------------

@dataclass(frozen=True)
class GroupElement:
    matrix: MoebiusMatrix
    word: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.word)

    @property
    def orientation(self) -> int:
        return -1 if len(self.word) % 2 else 1


@dataclass
class Enumeration:
    growth: list[int]
    elements: list[GroupElement] = field(default_factory=list)
    truncated: bool = False

    @property
    def total(self) -> int:
        return sum(self.growth)


def enumerate_group(conf: BallConfiguration, max_length: int, element_cap: int = DEFAULT_ELEMENT_CAP,
                    keep_elements: bool = True) -> Enumeration:
    """Breadth-first enumeration of G up to word length ``max_length``.

    Matrices are deduplicated by their canonical integer form.  The
    frontier is expanded in shortlex order with generators in increasing
    order, so the word stored with each element is its shortlex-least
    representative.
    """
    if max_length < 0:
        raise ValueError("max_length must be >= 0")
    gens = generators(conf)
    ident = MoebiusMatrix.identity()
    seen = {ident}
    frontier = [GroupElement(ident, ())]
    out = Enumeration([1], list(frontier) if keep_elements else [])
    for _ in range(max_length):
        nxt = []
        for g in frontier:
            for s, refl in enumerate(gens):
                m = g.matrix.right_reflect(refl)
                if m in seen:
                    continue
                if len(seen) >= element_cap:
                    out.truncated = True
                    break
                seen.add(m)
                nxt.append(GroupElement(m, g.word + (s,)))
            if out.truncated:
                break
        if not nxt and not out.truncated:
            break
        out.growth.append(len(nxt))
        if keep_elements:
            out.elements.extend(nxt)
        frontier = nxt
        if out.truncated:
            log.warning("element cap %d reached; growth is partial", element_cap)
            break
    return out


def word_matrix(conf: BallConfiguration, word: Sequence[int]) -> MoebiusMatrix:
    gens = generators(conf)
    m = MoebiusMatrix.identity()
    for s in word:
        m = m.right_reflect(gens[s])
    return m


def lorentz_audit(enum: Enumeration, seed: int = 0, fraction: float = 0.05, full_upto: int = 3) -> list:
    """M^T J M = J on all short elements and on a random sample of the rest.

    Returns the words of failing elements (empty when all pass).
    """
    rng = random.Random(seed)
    bad = []
    for g in enum.elements:
        if g.length <= full_upto or rng.random() < fraction:
            if not g.matrix.is_lorentz():
                bad.append(g.word)
    return bad


# -- abstract enumeration by rewriting ----------------------------------------------

def _braid_moves(word: tuple[int, ...], cox) -> list[tuple[int, ...]]:
    out = []
    n = len(word)
    for i in range(n - 1):
        s, t = word[i], word[i + 1]
        if s == t:
            continue
        m = cox[s][t]
        if m is INF or i + m > n:
            continue
        if all(word[i + k] == (s if k % 2 == 0 else t) for k in range(m)):
            swapped = tuple(t if k % 2 == 0 else s for k in range(m))
            out.append(word[:i] + swapped + word[i + m:])
    return out


def braid_class(words, cox) -> frozenset:
    seen = set(words)
    stack = list(seen)
    while stack:
        w = stack.pop()
        for v in _braid_moves(w, cox):
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return frozenset(seen)


def abstract_growth(pres: GroupPresentation, max_length: int,
                    element_cap: int = DEFAULT_ELEMENT_CAP) -> Enumeration:
    """Growth series of the abstract Coxeter group, from words alone.

    Each element is held as the full set of its reduced words, which are
    connected by braid moves (Matsumoto).  A generator s lengthens w
    unless some reduced word of w ends in s (exchange condition), and then
    the reduced words of ws are the braid class of {u s}.
    """
    cox = pres.coxeter_matrix
    n = pres.generator_count
    level = [frozenset({()})]
    out = Enumeration([1])
    total = 1
    for length in range(max_length):
        last = length == max_length - 1
        owner = {}
        nxt = []
        for words in level:
            ends = {w[-1] for w in words if w}
            u = min(words)
            for s in range(n):
                if s in ends or u + (s,) in owner:
                    continue
                if total >= element_cap:
                    out.truncated = True
                    break
                cls = braid_class([w + (s,) for w in words], cox)
                for w in cls:
                    owner[w] = True
                total += 1
                if not last:
                    nxt.append(cls)
                else:
                    nxt.append(None)
            if out.truncated:
                break
        if not nxt and not out.truncated:
            break
        out.growth.append(len(nxt))
        level = nxt
        if out.truncated or not nxt:
            break
    return out


def shortlex_normal_form(word: Sequence[int], pres: GroupPresentation) -> tuple[int, ...]:
    """Shortlex-least reduced word of the element represented by ``word``."""
    cls = frozenset({()})
    for s in word:
        if any(w and w[-1] == s for w in cls):
            # ws is shorter: drop the trailing s from every word ending in it
            cls = braid_class([w[:-1] for w in cls if w and w[-1] == s], pres.coxeter_matrix)
        else:
            cls = braid_class([w + (s,) for w in cls], pres.coxeter_matrix)
    return min(cls, key=lambda w: (len(w), w))


# -- orbits ------------------------------------------------------------------------

class ProbeError(ValueError):
    pass


@dataclass(frozen=True)
class Tiling:
    probe: object
    orbit: tuple[tuple[GroupElement, object], ...]
    collisions: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    stayed_outside: tuple[tuple[int, ...], ...]

    @property
    def injective(self) -> bool:
        return not self.collisions

    @property
    def ok(self) -> bool:
        return not self.collisions and not self.stayed_outside

    def to_json(self) -> dict:
        pts = []
        for g, p in self.orbit:
            item = {"word": list(g.word)}
            if p is INFINITY:
                item["point"] = "inf"
            else:
                item["point"] = [frac_str(x) for x in p]
                item["decimal"] = [decimal_shadow(x) for x in p]
            pts.append(item)
        return {
            "probe": "inf" if self.probe is INFINITY else [frac_str(x) for x in self.probe],
            "orbit_size": len(self.orbit),
            "injective": self.injective,
            "collisions": [[list(a), list(b)] for a, b in self.collisions],
            "non_identity_images_outside_all_balls": [list(w) for w in self.stayed_outside],
            "points": pts,
        }


def orbit_tiling(conf: BallConfiguration, max_length: int, probe=INFINITY, enum: Optional[Enumeration] = None,
                 element_cap: int = DEFAULT_ELEMENT_CAP) -> Tiling:
    """Orbit of a probe point of the fundamental domain's interior."""
    probe = as_point(probe)
    if probe is not INFINITY:
        for i, s in enumerate(conf.spheres):
            if s.contains(probe, strict=False):
                raise ProbeError(f"probe lies in closed ball {i}")
    if enum is None:
        enum = enumerate_group(conf, max_length, element_cap)
    orbit, where, collisions, outside = [], {}, [], []
    for g in enum.elements:
        if g.length > max_length:
            continue
        img = apply_to_point(g.matrix, probe)
        orbit.append((g, img))
        if img in where:
            collisions.append((where[img], g.word))
        else:
            where[img] = g.word
        if g.word and (img is INFINITY or not any(s.contains(img) for s in conf.spheres)):
            outside.append(g.word)
    return Tiling(probe, tuple(orbit), tuple(collisions), tuple(outside))


# -- finite quotients ---------------------------------------------------------------

class QuotientError(ValueError):
    pass


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, math.isqrt(p) + 1))


def _mat_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return (a @ b) % p


@dataclass(frozen=True)
class FiniteQuotient:
    prime: int
    images: tuple[np.ndarray, ...]           # 6x6 integer arrays mod p
    det_signs: tuple[int, ...]               # determinant of each generator over Q
    relations_checked: int
    relation_failures: tuple[tuple[int, int], ...]
    order_bound: int
    order_capped: bool

    @property
    def homomorphism_ok(self) -> bool:
        return not self.relation_failures

    def image_of(self, m: MoebiusMatrix) -> np.ndarray:
        return np.array(m.reduce_mod(self.prime), dtype=np.int64).reshape(6, 6)

    def image_of_word(self, word: Sequence[int]) -> np.ndarray:
        out = np.eye(6, dtype=np.int64)
        for s in word:
            out = _mat_mod(out, self.images[s], self.prime)
        return out

    def to_json(self) -> dict:
        return {
            "prime": self.prime,
            "generator_images": [img.tolist() for img in self.images],
            "determinant_signs": list(self.det_signs),
            "relations_checked": self.relations_checked,
            "relation_failures": [list(f) for f in self.relation_failures],
            "homomorphism_ok": self.homomorphism_ok,
            "order_bound": self.order_bound,
            "order_capped": self.order_capped,
        }


def matrix_group_order(images: Sequence[np.ndarray], p: int, cap: int) -> tuple[int, bool]:
    """Size of the group generated mod p, by closure; (cap, True) when it is reached."""
    dtype = np.uint8 if p < 256 else np.int64
    eye = np.eye(6, dtype=np.int64)
    seen = {eye.astype(dtype).tobytes()}
    frontier = eye[None]
    gens = [g.astype(np.int64) for g in images]
    while len(frontier):
        new = []
        for g in gens:
            prod = np.einsum("kij,jl->kil", frontier, g) % p
            for m in prod:
                key = m.astype(dtype).tobytes()
                if key not in seen:
                    seen.add(key)
                    new.append(m)
                    if len(seen) >= cap:
                        return cap, True
        frontier = np.array(new, dtype=np.int64) if new else np.empty((0, 6, 6), dtype=np.int64)
    return len(seen), False


def congruence_quotient(conf: BallConfiguration, p: int, pres: Optional[GroupPresentation] = None,
                        order_cap: int = 20000) -> FiniteQuotient:
    """Reduce the generators mod p and check every defining relation there."""
    if p in (2, 3):
        raise QuotientError("p must not be 2 or 3: generator denominators involve 2 and 3")
    if not is_prime(p):
        raise QuotientError(f"{p} is not prime")
    mats = [g.matrix() for g in generators(conf)]
    for m in mats:
        if m.den % p == 0:
            raise QuotientError(f"p = {p} divides a generator denominator ({m.den})")
    images = tuple(np.array(m.reduce_mod(p), dtype=np.int64).reshape(6, 6) for m in mats)
    signs = tuple(1 if m.det() > 0 else -1 for m in mats)
    eye = np.eye(6, dtype=np.int64)
    failures = []
    checked = 0
    for i, a in enumerate(images):
        checked += 1
        if not np.array_equal(_mat_mod(a, a, p), eye):
            failures.append((i, i))
    if pres is not None:
        for i, j, m in pres.finite_pairs():
            checked += 1
            prod = _mat_mod(images[i], images[j], p)
            acc = eye
            for _ in range(m):
                acc = _mat_mod(acc, prod, p)
            if not np.array_equal(acc, eye):
                failures.append((i, j))
    order, capped = matrix_group_order(images, p, order_cap)
    return FiniteQuotient(p, images, signs, checked, tuple(failures), order, capped)


def det_mod(a: np.ndarray, p: int) -> int:
    m = [[int(x) % p for x in row] for row in a]
    n = len(m)
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det = det * m[c][c] % p
        inv = pow(m[c][c], -1, p)
        for r in range(c + 1, n):
            f = m[r][c] * inv % p
            if f:
                m[r] = [(x - f * y) % p for x, y in zip(m[r], m[c])]
    return det % p


def image_order(a: np.ndarray, p: int, bound: int) -> Optional[int]:
    eye = np.eye(6, dtype=np.int64)
    acc = a % p
    for k in range(1, bound + 1):
        if np.array_equal(acc, eye):
            return k
        acc = _mat_mod(acc, a, p)
    return None


@dataclass(frozen=True)
class TorsionWitness:
    word: tuple[int, ...]
    order: int
    image_order: Optional[int]


@dataclass(frozen=True)
class TorsionCheck:
    elements_checked: int
    finite_order_elements: int
    order_counts: dict
    witnesses: tuple[TorsionWitness, ...]
    kernel_orientation_failures: tuple[tuple[int, ...], ...]
    truncated: bool = False

    @property
    def ok(self) -> bool:
        return not self.witnesses and not self.kernel_orientation_failures

    def to_json(self) -> dict:
        return {
            "elements_checked": self.elements_checked,
            "finite_order_elements": self.finite_order_elements,
            "order_counts": {str(k): v for k, v in sorted(self.order_counts.items())},
            "witnesses": [{"word": list(w.word), "order": w.order, "image_order": w.image_order}
                          for w in self.witnesses],
            "kernel_orientation_failures": [list(w) for w in self.kernel_orientation_failures],
            "truncated": self.truncated,
            "ok": self.ok,
        }


def torsion_survival_check(conf: BallConfiguration, quotient: FiniteQuotient, max_length: int,
                           enum: Optional[Enumeration] = None, order_bound: int = FINITE_ORDER_BOUND,
                           element_cap: int = DEFAULT_ELEMENT_CAP) -> TorsionCheck:
    """No element of finite order may lose order in the quotient.

    An element of exact order k whose image has order < k puts a
    nontrivial power of itself into the kernel; such elements are
    returned as witnesses.  Elements killed by the quotient must also
    preserve orientation.
    """
    p = quotient.prime
    if enum is None:
        enum = enumerate_group(conf, max_length, element_cap)
    witnesses, orient_bad = [], []
    counts = {}
    checked = finite = 0
    eye = np.eye(6, dtype=np.int64)
    for g in enum.elements:
        if g.length > max_length:
            continue
        checked += 1
        img = quotient.image_of(g.matrix)
        if g.word and np.array_equal(img, eye) and g.orientation != 1:
            orient_bad.append(g.word)
        k = element_order(g.matrix, order_bound)
        if k is None:
            continue
        counts[k] = counts.get(k, 0) + 1
        if k == 1:
            continue
        finite += 1
        ik = image_order(img, p, k)
        if ik != k:
            witnesses.append(TorsionWitness(g.word, k, ik))
    return TorsionCheck(checked, finite, counts, tuple(witnesses), tuple(orient_bad), enum.truncated)
