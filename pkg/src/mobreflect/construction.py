"""Ball configurations over a cubical 2-complex and their audit.

Every cell of K gets a round ball centred at its barycenter: radius^2
1/6 at vertices and square centers, 1/12 at edge midpoints.  The audit
classifies every pair of balls exactly, extracts the Coxeter matrix,
evaluates the per-square angle claims, builds the nerve and compares it
with the barycentric subdivision of K.
"""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .cubical import (
    CubicalCell,
    CubicalComplex2,
    SimplicialComplex,
    barycentric_subdivision,
    closure,
    offending_vertices,
)
from .inversive import (
    CommonPointCertificate,
    PairClass,
    PairTag,
    Sphere,
    classify_pair,
    min_max_power,
)
from .serial import decimal_shadow, frac_str

log = logging.getLogger(__name__)

VERTEX_RADIUS_SQ = Fraction(1, 6)
MIDPOINT_RADIUS_SQ = Fraction(1, 12)
CENTER_RADIUS_SQ = Fraction(1, 6)

RADIUS_SQ = {0: VERTEX_RADIUS_SQ, 1: MIDPOINT_RADIUS_SQ, 2: CENTER_RADIUS_SQ}
ROLE = {0: "vertex", 1: "midpoint", 2: "center"}


class VertexConditionError(ValueError):
    def __init__(self, vertex: CubicalCell):
        self.vertex = vertex
        super().__init__(f"vertex {list(vertex.anchor)} does not belong to any square of K")


def _pmap(func, items, workers=1, chunksize=256):
    """Order-preserving map, optionally over a process pool."""
    if workers <= 1 or len(items) < 2 * chunksize:
        return [func(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(func, items, chunksize=chunksize))


@dataclass(frozen=True)
class BallConfiguration:
    spheres: tuple[Sphere, ...]
    cells: tuple[CubicalCell, ...]

    def __post_init__(self):
        object.__setattr__(self, "_index", {c: i for i, c in enumerate(self.cells)})

    def __len__(self):
        return len(self.spheres)

    @property
    def balls(self) -> list[tuple[Sphere, CubicalCell]]:
        return list(zip(self.spheres, self.cells))

    def index(self, cell: CubicalCell) -> int:
        return self._index[cell]

    def role(self, i: int) -> str:
        return ROLE[self.cells[i].dim]

    def complex(self) -> CubicalComplex2:
        return closure(self.cells)

    @classmethod
    def from_spheres(cls, spheres: Sequence[Sphere]) -> BallConfiguration:
        """A bare configuration not tied to a cubical complex (cells are placeholders)."""
        cells = tuple(CubicalCell((i, 0, 0, 0)) for i in range(len(spheres)))
        return cls(tuple(spheres), cells)

    def to_json(self, decimals=False) -> list[dict]:
        out = []
        for i, (s, c) in enumerate(self.balls):
            item = {"index": i, "cell": c.to_json(), "role": self.role(i),
                    "center": [frac_str(x) for x in s.center], "radius_sq": frac_str(s.radius_sq)}
            if decimals:
                item["decimal"] = {"center": [decimal_shadow(x) for x in s.center],
                                   "radius": decimal_shadow(float(s.radius_sq) ** 0.5)}
            out.append(item)
        return out


def generate_configuration(K: CubicalComplex2) -> BallConfiguration:
    bad = offending_vertices(K)
    if bad:
        raise VertexConditionError(bad[0])
    cells = tuple(K.sorted_cells())
    spheres = tuple(Sphere(c.barycenter(), RADIUS_SQ[c.dim]) for c in cells)
    return BallConfiguration(spheres, cells)


# -- audit --------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    i: int
    j: int
    reason: str


@dataclass(frozen=True)
class ClaimCheck:
    """One per-square claim: the stated outcome against what exact arithmetic gives."""
    name: str
    description: str
    stated: str
    computed: tuple[str, ...]
    agrees: bool
    pairs_checked: int
    evidence: dict


@dataclass(frozen=True)
class AuditReport:
    n: int
    pair_table: dict  # (i, j) with i < j -> PairClass
    coxeter_matrix: tuple[tuple[Optional[int], ...], ...]  # None stands for infinity
    violations: tuple[Violation, ...]
    claims: tuple[ClaimCheck, ...] = ()
    uncovered_intersections: tuple[tuple[int, int], ...] = ()
    nerve_check: Optional[MapCheck] = None

    def pair(self, i: int, j: int) -> Optional[PairClass]:
        if i == j:
            return None
        return self.pair_table[(i, j) if i < j else (j, i)]

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def nerve_iso(self) -> Optional[bool]:
        return None if self.nerve_check is None else self.nerve_check.isomorphism

    def coxeter_entries(self) -> set:
        return {m for row in self.coxeter_matrix for m in row}


def _pair_key(conf: BallConfiguration, i: int, j: int):
    return conf.role(i), conf.role(j)


def _classify_task(args):
    s1, s2 = args
    return classify_pair(s1, s2)


def classify_all(conf: BallConfiguration, workers=1) -> dict:
    pairs = list(itertools.combinations(range(len(conf)), 2))
    results = _pmap(_classify_task, [(conf.spheres[i], conf.spheres[j]) for i, j in pairs], workers)
    return dict(zip(pairs, results))


def _evidence(conf, i, j, pc: PairClass) -> dict:
    s1, s2 = conf.spheres[i], conf.spheres[j]
    ev = {
        "balls": [i, j],
        "cells": [conf.cells[i].to_json(), conf.cells[j].to_json()],
        "dist_sq": frac_str(pc.dist_sq),
        "radius_sq": [frac_str(s1.radius_sq), frac_str(s2.radius_sq)],
        "tag": pc.tag.value,
    }
    if pc.intersecting:
        ev["cos_numerator"] = frac_str(pc.cos_ext_num)
        ev["cos_sq"] = frac_str(pc.cos_ext_sq)
        ev["angle"] = pc.angle or "non-Coxeter"
    return ev


def _outcome(pc: PairClass) -> str:
    if pc.intersecting:
        return pc.angle or f"non-Coxeter (cos^2 = {frac_str(pc.cos_ext_sq)})"
    return pc.tag.value


def evaluate_claims(conf: BallConfiguration, table: dict) -> tuple[ClaimCheck, ...]:
    """Check the per-square statements about the nine balls of each square."""
    groups = {k: [] for k in ("vv", "mm", "mc", "vc", "mv_adj", "mv_far")}
    seen = set()
    for sq in sorted(c for c in conf.cells if c.dim == 2):
        faces = [f for f in sq.faces()]
        idx = [conf.index(f) for f in faces]
        for a, b in itertools.combinations(sorted(idx), 2):
            if (a, b) in seen:
                continue
            seen.add((a, b))
            ca, cb = conf.cells[a], conf.cells[b]
            dims = tuple(sorted((ca.dim, cb.dim)))
            if dims == (0, 0):
                groups["vv"].append((a, b))
            elif dims == (1, 1):
                groups["mm"].append((a, b))
            elif dims == (1, 2):
                groups["mc"].append((a, b))
            elif dims == (0, 2):
                groups["vc"].append((a, b))
            else:
                v, e = (ca, cb) if ca.dim == 0 else (cb, ca)
                groups["mv_adj" if v.is_face_of(e) else "mv_far"].append((a, b))

    specs = [
        ("vertex_vertex_disjoint", "vv", "vertex-vertex pairs of a square are disjoint", "Disjoint"),
        ("midpoint_midpoint_disjoint", "mm", "midpoint-midpoint pairs of a square are disjoint", "Disjoint"),
        ("midpoint_center_angle", "mc", "midpoint and center spheres meet at a right angle", "pi/2"),
        ("vertex_center_angle", "vc", "vertex and center spheres meet at exterior angle pi/3", "pi/3"),
        ("midpoint_adjacent_vertex_angle", "mv_adj",
         "midpoint sphere and the sphere of an endpoint of its edge meet at exterior angle pi/3", "pi/3"),
        ("midpoint_far_vertex_angle", "mv_far",
         "midpoint sphere and the spheres of the other two vertices are disjoint", "Disjoint"),
    ]
    out = []
    for name, g, desc, stated in specs:
        pairs = groups[g]
        outcomes = {}
        for a, b in pairs:
            outcomes.setdefault(_outcome(table[(a, b)]), (a, b))
        computed = tuple(sorted(outcomes))
        evidence = {k: _evidence(conf, a, b, table[(a, b)]) for k, (a, b) in sorted(outcomes.items())}
        out.append(ClaimCheck(name, desc, stated, computed, computed in ((), (stated,)), len(pairs), evidence))
    return tuple(out)


def _in_common_square(a: CubicalCell, b: CubicalCell, squares) -> bool:
    return any(a.is_face_of(s) and b.is_face_of(s) for s in squares)


def audit(conf: BallConfiguration, workers=1, with_nerve=True, max_dim=3) -> AuditReport:
    """Classify all pairs, build the Coxeter matrix and list violations.

    Pairs from different squares are included; intersecting pairs whose
    cells share no square are reported in ``uncovered_intersections``.
    """
    n = len(conf)
    table = classify_all(conf, workers)
    cox = [[1 if i == j else None for j in range(n)] for i in range(n)]
    violations = []
    for (i, j), pc in sorted(table.items()):
        if pc.intersecting:
            if pc.coxeter_order is None:
                violations.append(Violation(i, j, f"non-Coxeter angle, cos^2 = {frac_str(pc.cos_ext_sq)}"
                                                  f" (cos sign {'+' if pc.cos_ext_num > 0 else '-'})"))
            else:
                cox[i][j] = cox[j][i] = pc.coxeter_order
        elif pc.tangent:
            violations.append(Violation(i, j, pc.tag.value))
        elif pc.tag is PairTag.NESTED:
            violations.append(Violation(i, j, "nested balls"))

    squares = [c for c in conf.cells if c.dim == 2]
    claims = evaluate_claims(conf, table) if squares else ()
    extra = tuple((i, j) for (i, j), pc in sorted(table.items())
                  if pc.intersecting and not _in_common_square(conf.cells[i], conf.cells[j], squares))
    check = None
    if with_nerve:
        N = nerve(conf, max_dim=max_dim, workers=workers, table=table)
        check = canonical_map_check(conf, conf.complex(), nerve_complex=N)
    return AuditReport(n, table, tuple(tuple(r) for r in cox), tuple(violations), claims, extra, check)


# -- nerve ----------------------------------------------------------------------

def _meet_task(balls):
    return min_max_power(balls)


def nerve_certificates(conf: BallConfiguration, max_dim=3, workers=1, table=None) -> dict:
    """Exact common-point certificates for every clique up to ``max_dim``.

    Returns {simplex: CommonPointCertificate} for candidate simplices of
    dimension >= 2 (edges are decided by the pair table).
    """
    n = len(conf)
    if table is None:
        table = classify_all(conf, workers)
    adj = {i: set() for i in range(n)}
    for (i, j), pc in table.items():
        if pc.tag is not PairTag.DISJOINT:
            adj[i].add(j)
            adj[j].add(i)
    present = {(i,) for i in range(n)}
    present |= {(i, j) for (i, j), pc in table.items() if pc.tag is not PairTag.DISJOINT}
    certs = {}
    layer = sorted(s for s in present if len(s) == 2)
    for d in range(2, max_dim + 1):
        candidates = []
        for s in layer:
            for v in sorted(adj[s[-1]]):
                if v > s[-1] and all(v in adj[u] for u in s[:-1]):
                    t = s + (v,)
                    if all(f in present for f in itertools.combinations(t, d)):
                        candidates.append(t)
        results = _pmap(_meet_task, [[conf.spheres[i] for i in t] for t in candidates], workers, chunksize=64)
        layer = []
        for t, cert in zip(candidates, results):
            certs[t] = cert
            if cert.nonempty:
                present.add(t)
                layer.append(t)
    return certs


def nerve(conf: BallConfiguration, max_dim=3, workers=1, table=None) -> SimplicialComplex:
    """Nerve of the closed balls, with vertices placed at the ball centers."""
    n = len(conf)
    if table is None:
        table = classify_all(conf, workers)
    simplices = {(i,) for i in range(n)}
    simplices |= {(i, j) for (i, j), pc in table.items() if pc.tag is not PairTag.DISJOINT}
    if max_dim >= 2:
        certs = nerve_certificates(conf, max_dim, workers, table)
        simplices |= {t for t, c in certs.items() if c.nonempty}
    return SimplicialComplex(tuple(s.center for s in conf.spheres), frozenset(simplices))


@dataclass(frozen=True)
class MapCheck:
    """Outcome of comparing the nerve with the barycentric subdivision.

    On failure ``counterexample`` is a lowest-dimensional simplex present
    on one side only, given as ball indices (``side`` says which complex
    has it) with an exact certificate.
    """
    isomorphism: bool
    nerve_f_vector: tuple[int, ...]
    subdivision_f_vector: tuple[int, ...]
    vertex_map: tuple[int, ...] = ()
    counterexample: Optional[tuple[int, ...]] = None
    side: Optional[str] = None
    certificate: dict = field(default_factory=dict)
    only_in_nerve: tuple[tuple[int, ...], ...] = ()
    only_in_subdivision: tuple[tuple[int, ...], ...] = ()

    def to_json(self) -> dict:
        return {
            "isomorphism": self.isomorphism,
            "nerve_f_vector": list(self.nerve_f_vector),
            "subdivision_f_vector": list(self.subdivision_f_vector),
            "counterexample": None if self.counterexample is None else list(self.counterexample),
            "side": self.side,
            "certificate": self.certificate,
            "only_in_nerve_count": len(self.only_in_nerve),
            "only_in_subdivision_count": len(self.only_in_subdivision),
            "only_in_nerve_by_dim": _count_by_dim(self.only_in_nerve),
            "only_in_subdivision_by_dim": _count_by_dim(self.only_in_subdivision),
        }


def _count_by_dim(simplices) -> dict:
    out = {}
    for s in simplices:
        out[str(len(s) - 1)] = out.get(str(len(s) - 1), 0) + 1
    return out


def _cert_json(cert: CommonPointCertificate) -> dict:
    return {
        "min_max_power": frac_str(cert.value),
        "point": [frac_str(x) for x in cert.point],
        "active": list(cert.active),
        "weights": [frac_str(w) for w in cert.weights],
    }


def canonical_map_check(conf: BallConfiguration, K: CubicalComplex2, nerve_complex=None,
                        max_dim=3, workers=1) -> MapCheck:
    """Is ball -> barycenter a simplicial isomorphism from the nerve onto beta(K)?"""
    N = nerve_complex if nerve_complex is not None else nerve(conf, max_dim, workers)
    sub = barycentric_subdivision(K)
    B = sub.complex
    by_position = {p: i for i, p in enumerate(B.positions)}
    vmap = []
    for i, p in enumerate(N.positions):
        if p not in by_position:
            return MapCheck(False, N.f_vector, B.f_vector, (), (i,), "nerve",
                            {"reason": "ball center is not a barycenter of K",
                             "center": [frac_str(x) for x in p]})
        vmap.append(by_position[p])
    if len(set(vmap)) != len(vmap) or len(vmap) != len(B.positions):
        inv = {v: i for i, v in enumerate(vmap)}
        missing = next(v for v in B.vertex_ids if v not in inv) if len(inv) < len(B.positions) else None
        return MapCheck(False, N.f_vector, B.f_vector, tuple(vmap), None if missing is None else (missing,),
                        "subdivision", {"reason": "vertex map is not a bijection"})
    inv = {v: i for i, v in enumerate(vmap)}
    pulled = frozenset(tuple(sorted(inv[v] for v in s)) for s in B.simplices)
    only_n = tuple(sorted(N.simplices - pulled, key=lambda s: (len(s), s)))
    only_b = tuple(sorted(pulled - N.simplices, key=lambda s: (len(s), s)))
    if not only_n and not only_b:
        return MapCheck(True, N.f_vector, B.f_vector, tuple(vmap),
                        certificate={"reason": "vertex bijection matches all simplices"})
    cands = [(len(s), 0, s) for s in only_n[:1]] + [(len(s), 1, s) for s in only_b[:1]]
    _, which, simplex = min(cands)
    side = ("nerve", "subdivision")[which]
    balls = [conf.spheres[i] for i in simplex]
    cert = {"cells": [conf.cells[i].to_json() for i in simplex]}
    if len(simplex) >= 2:
        cert.update(_cert_json(min_max_power(balls)))
    if len(simplex) == 2:
        pc = classify_pair(*balls)
        cert["pair"] = _evidence(conf, simplex[0], simplex[1], pc)
    cert["reason"] = ("balls meet but the cells do not form a flag" if which == 0
                      else "cells form a flag but the closed balls have no common point")
    return MapCheck(False, N.f_vector, B.f_vector, tuple(vmap), simplex, side, cert, only_n, only_b)


# -- coverage -------------------------------------------------------------------

@dataclass(frozen=True)
class CoverageResult:
    grid_step: Fraction
    samples: int
    uncovered: tuple[tuple[Fraction, ...], ...]

    @property
    def covered(self) -> bool:
        return not self.uncovered


def _cell_samples(cell: CubicalCell, step: Fraction):
    ticks = []
    t = Fraction(0)
    while t <= 1:
        ticks.append(t)
        t += step
    for coords in itertools.product(ticks, repeat=cell.dim):
        p = [Fraction(a) for a in cell.anchor]
        for axis, c in zip(cell.axes, coords):
            p[axis] += c
        yield tuple(p)


def coverage_check(conf: BallConfiguration, K: CubicalComplex2, grid_step=Fraction(1, 16)) -> CoverageResult:
    """Sample K on a grid and test each sample for strict containment in some ball."""
    step = Fraction(grid_step)
    if step <= 0:
        raise ValueError("grid_step must be positive")
    tops = [c for c in K.sorted_cells() if c.dim == 2]
    in_square = set()
    for s in tops:
        in_square.update(s.faces())
    tops += [c for c in K.sorted_cells() if c.dim < 2 and c not in in_square]
    seen, uncovered = set(), []
    for cell in tops:
        local = [conf.spheres[conf.index(f)] for f in cell.faces() if f in conf._index]
        for p in _cell_samples(cell, step):
            if p in seen:
                continue
            seen.add(p)
            if any(s.contains(p) for s in local) or any(s.contains(p) for s in conf.spheres):
                continue
            uncovered.append(p)
    return CoverageResult(step, len(seen), tuple(sorted(uncovered)))
