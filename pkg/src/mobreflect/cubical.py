"""Finite subcomplexes of the 2-skeleton of the unit cubulation of R^4.

Cells are stored in canonical form (anchor, axes): the anchor is the
lexicographically smallest vertex and ``axes`` the sorted coordinate
directions spanned by the cell.  Barycenters are computed in doubled
coordinates so that every position is an integer 4-vector.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

DIM = 4


@dataclass(frozen=True, order=True)
class CubicalCell:
    anchor: tuple[int, int, int, int]
    axes: tuple[int, ...] = ()

    def __post_init__(self):
        anchor = tuple(int(a) for a in self.anchor)
        if len(anchor) != DIM:
            raise ValueError(f"anchor must have {DIM} coordinates, got {self.anchor!r}")
        axes = tuple(sorted(int(i) for i in self.axes))
        if len(set(axes)) != len(axes) or any(not 0 <= i < DIM for i in axes):
            raise ValueError(f"axes must be distinct indices in 0..3, got {self.axes!r}")
        if len(axes) > 2:
            raise ValueError("only cells of dimension 0, 1, 2 are supported")
        object.__setattr__(self, "anchor", anchor)
        object.__setattr__(self, "axes", axes)

    @property
    def dim(self) -> int:
        return len(self.axes)

    @property
    def kind(self) -> str:
        return ("vertex", "edge", "square")[self.dim]

    def vertices(self) -> list[CubicalCell]:
        out = []
        for bits in itertools.product((0, 1), repeat=self.dim):
            p = list(self.anchor)
            for axis, b in zip(self.axes, bits):
                p[axis] += b
            out.append(CubicalCell(tuple(p)))
        return sorted(out)

    def faces(self) -> list[CubicalCell]:
        """All faces of the cell, including the cell itself."""
        out = set()
        for sub in range(self.dim + 1):
            for kept in itertools.combinations(self.axes, sub):
                dropped = [a for a in self.axes if a not in kept]
                for bits in itertools.product((0, 1), repeat=len(dropped)):
                    p = list(self.anchor)
                    for axis, b in zip(dropped, bits):
                        p[axis] += b
                    out.add(CubicalCell(tuple(p), kept))
        return sorted(out)

    def is_face_of(self, other: CubicalCell) -> bool:
        if not set(self.axes) <= set(other.axes):
            return False
        for i in range(DIM):
            d = self.anchor[i] - other.anchor[i]
            if i in other.axes and i not in self.axes:
                if d not in (0, 1):
                    return False
            elif d != 0:
                return False
        return True

    def doubled_barycenter(self) -> tuple[int, int, int, int]:
        p = [2 * a for a in self.anchor]
        for axis in self.axes:
            p[axis] += 1
        return tuple(p)

    def barycenter(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, 2) for c in self.doubled_barycenter())

    def to_json(self) -> dict:
        return {"anchor": list(self.anchor), "axes": list(self.axes)}


def cell_from_doubled(point: Sequence[int]) -> CubicalCell:
    """Recover the cell whose doubled barycenter is ``point``."""
    axes = tuple(i for i, c in enumerate(point) if c % 2)
    anchor = tuple((c - (c % 2)) // 2 for c in point)
    return CubicalCell(anchor, axes)


@dataclass(frozen=True)
class CubicalComplex2:
    cells: frozenset[CubicalCell] = field(default_factory=frozenset)

    def __post_init__(self):
        cells = frozenset(self.cells)
        for c in cells:
            for f in c.faces():
                if f not in cells:
                    raise ValueError(f"complex is not face-closed: {f} missing (face of {c})")
        object.__setattr__(self, "cells", cells)

    def of_dim(self, d: int) -> list[CubicalCell]:
        return sorted(c for c in self.cells if c.dim == d)

    @property
    def squares(self) -> list[CubicalCell]:
        return self.of_dim(2)

    @property
    def edges(self) -> list[CubicalCell]:
        return self.of_dim(1)

    @property
    def vertices(self) -> list[CubicalCell]:
        return self.of_dim(0)

    @property
    def f_vector(self) -> tuple[int, int, int]:
        return (len(self.vertices), len(self.edges), len(self.squares))

    @property
    def vertex_condition(self) -> bool:
        return check_vertex_condition(self)

    def sorted_cells(self) -> list[CubicalCell]:
        return sorted(self.cells, key=lambda c: (c.dim, c.anchor, c.axes))

    def __contains__(self, cell) -> bool:
        return cell in self.cells

    def __len__(self) -> int:
        return len(self.cells)

    def to_json(self) -> dict:
        return {
            "squares": [c.to_json() for c in self.squares],
            "edges": [c.to_json() for c in self.edges],
            "vertices": [c.to_json() for c in self.vertices],
            "f_vector": list(self.f_vector),
            "vertex_condition": self.vertex_condition,
        }


def closure(cells: Iterable[CubicalCell]) -> CubicalComplex2:
    out = set()
    for c in cells:
        out.update(c.faces())
    return CubicalComplex2(frozenset(out))


def build_complex(squares: Iterable[CubicalCell]) -> CubicalComplex2:
    """Face closure of a list of squares.  Duplicates are dropped silently."""
    squares = list(squares)
    for s in squares:
        if s.dim != 2:
            raise ValueError(f"expected a square (two axes), got {s.kind} {s}")
    return closure(squares)


def check_vertex_condition(K: CubicalComplex2) -> bool:
    return not offending_vertices(K)


def offending_vertices(K: CubicalComplex2) -> list[CubicalCell]:
    """Vertices of K that are not a face of any square of K."""
    covered = set()
    for sq in K.squares:
        covered.update(sq.vertices())
    return [v for v in K.vertices if v not in covered]


def unit_cube_skeleton(anchor=(0, 0, 0, 0)) -> CubicalComplex2:
    """All 24 squares of the unit 4-cube at ``anchor`` and their faces."""
    squares = []
    for axes in itertools.combinations(range(DIM), 2):
        free = [i for i in range(DIM) if i not in axes]
        for bits in itertools.product((0, 1), repeat=2):
            p = list(anchor)
            for axis, b in zip(free, bits):
                p[axis] += b
            squares.append(CubicalCell(tuple(p), axes))
    return build_complex(squares)


# -- JSON schema ----------------------------------------------------------

class ComplexFormatError(ValueError):
    pass


def parse_cell(obj, where="") -> CubicalCell:
    if not isinstance(obj, dict):
        raise ComplexFormatError(f"{where}: expected an object with 'anchor' and 'axes'")
    for key in ("anchor", "axes"):
        if key not in obj:
            raise ComplexFormatError(f"{where}: missing field '{key}'")
    anchor, axes = obj["anchor"], obj["axes"]
    if not isinstance(anchor, list) or len(anchor) != DIM or not all(
            isinstance(a, int) and not isinstance(a, bool) for a in anchor):
        raise ComplexFormatError(f"{where}.anchor: expected a list of {DIM} integers")
    if not isinstance(axes, list) or not all(isinstance(a, int) and not isinstance(a, bool) for a in axes):
        raise ComplexFormatError(f"{where}.axes: expected a list of integers")
    try:
        return CubicalCell(tuple(anchor), tuple(axes))
    except ValueError as exc:
        raise ComplexFormatError(f"{where}: {exc}") from None


def complex_from_json(data) -> CubicalComplex2:
    """Accepts either ``{"squares": [...]}`` or a bare list of squares.

    Optional ``edges``/``vertices`` lists (as emitted by :meth:`CubicalComplex2.to_json`)
    are added to the closure, so complexes that fail the vertex condition
    can be described too.
    """
    if isinstance(data, list):
        data = {"squares": data}
    if not isinstance(data, dict) or "squares" not in data:
        raise ComplexFormatError("top level: expected a list of squares or an object with 'squares'")
    cells = []
    for key in ("squares", "edges", "vertices"):
        items = data.get(key, [])
        if not isinstance(items, list):
            raise ComplexFormatError(f"{key}: expected a list")
        for i, obj in enumerate(items):
            cell = parse_cell(obj, f"{key}[{i}]")
            if key == "squares" and cell.dim != 2:
                raise ComplexFormatError(f"{key}[{i}]: expected two axes, got {len(cell.axes)}")
            cells.append(cell)
    return closure(cells)


def load_complex(path) -> CubicalComplex2:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ComplexFormatError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return complex_from_json(data)


# -- simplicial complexes and the barycentric subdivision -------------------

@dataclass(frozen=True)
class SimplicialComplex:
    """Abstract simplicial complex with vertex positions in R^4.

    ``positions[i]`` is the position of vertex ``i``; simplices are sorted
    tuples of vertex ids and the set is closed under taking faces.
    """
    positions: tuple[tuple[Fraction, ...], ...]
    simplices: frozenset[tuple[int, ...]]

    def __post_init__(self):
        simplices = frozenset(tuple(sorted(s)) for s in self.simplices)
        object.__setattr__(self, "simplices", simplices)
        object.__setattr__(self, "positions", tuple(tuple(Fraction(c) for c in p) for p in self.positions))

    @property
    def vertex_ids(self) -> range:
        return range(len(self.positions))

    @property
    def dimension(self) -> int:
        return max((len(s) - 1 for s in self.simplices), default=-1)

    def of_dim(self, d: int) -> list[tuple[int, ...]]:
        return sorted(s for s in self.simplices if len(s) == d + 1)

    @property
    def f_vector(self) -> tuple[int, ...]:
        dim = max(self.dimension, 2)
        return tuple(len(self.of_dim(d)) for d in range(dim + 1))

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** d * n for d, n in enumerate(self.f_vector))

    def maximal_simplices(self) -> list[tuple[int, ...]]:
        out = []
        for s in self.simplices:
            ss = set(s)
            if not any(len(t) > len(s) and ss <= set(t) for t in self.simplices):
                out.append(s)
        return sorted(out, key=lambda s: (len(s), s))

    def is_downward_closed(self) -> bool:
        for s in self.simplices:
            for k in range(1, len(s)):
                for t in itertools.combinations(s, k):
                    if t not in self.simplices:
                        return False
        return all((i,) in self.simplices for i in self.vertex_ids)

    def induced(self, vertex_ids: Iterable[int]) -> frozenset[tuple[int, ...]]:
        keep = set(vertex_ids)
        return frozenset(s for s in self.simplices if set(s) <= keep)

    def to_json(self) -> dict:
        from .serial import frac_str
        return {
            "positions": [[frac_str(c) for c in p] for p in self.positions],
            "simplices": [list(s) for s in sorted(self.simplices, key=lambda s: (len(s), s))],
            "f_vector": list(self.f_vector),
        }


@dataclass(frozen=True)
class Subdivision:
    """The barycentric subdivision together with its vertex-to-cell labelling."""
    complex: SimplicialComplex
    cells: tuple[CubicalCell, ...]

    def vertex_of(self, cell: CubicalCell) -> int:
        return self.cells.index(cell)


def barycentric_subdivision(K: CubicalComplex2) -> Subdivision:
    """Flag complex of the cells of K, with vertices at cell barycenters.

    For a square this is the midpoint subdivision of its boundary coned
    off from the square's center; for an edge it is the midpoint split.
    """
    cells = tuple(K.sorted_cells())
    index = {c: i for i, c in enumerate(cells)}
    simplices = set()
    for c in cells:
        simplices.add((index[c],))
    # chains are built top-down from each cell through its proper faces
    for c in cells:
        faces = [f for f in c.faces() if f != c]
        for f in faces:
            simplices.add(tuple(sorted((index[f], index[c]))))
            for g in f.faces():
                if g != f:
                    simplices.add(tuple(sorted((index[g], index[f], index[c]))))
    positions = tuple(c.barycenter() for c in cells)
    return Subdivision(SimplicialComplex(positions, frozenset(simplices)), cells)
