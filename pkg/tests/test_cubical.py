import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mobreflect.cubical import (
    ComplexFormatError,
    CubicalCell,
    barycentric_subdivision,
    build_complex,
    cell_from_doubled,
    check_vertex_condition,
    closure,
    complex_from_json,
    offending_vertices,
    unit_cube_skeleton,
)


def lattice_faces_oracle(squares):
    """All lattice cells near the squares whose vertex set lies inside some square's vertex set."""
    verts = {tuple(v.anchor) for s in squares for v in s.vertices()}
    lo = [min(v[i] for v in verts) for i in range(4)]
    hi = [max(v[i] for v in verts) for i in range(4)]
    sq_sets = [{tuple(v.anchor) for v in s.vertices()} for s in squares]
    found = set()
    for anchor in itertools.product(*[range(a, b + 1) for a, b in zip(lo, hi)]):
        for k in range(3):
            for axes in itertools.combinations(range(4), k):
                pts = set()
                for bits in itertools.product((0, 1), repeat=k):
                    p = list(anchor)
                    for a, b in zip(axes, bits):
                        p[a] += b
                    pts.add(tuple(p))
                if any(pts <= s for s in sq_sets):
                    found.add((anchor, axes))
    return found


def square(anchor, axes):
    return CubicalCell(anchor, axes)


def test_closure_of_one_square():
    K = build_complex([square((0, 0, 0, 0), (0, 1))])
    assert K.f_vector == (4, 4, 1)


def test_empty_complex():
    K = build_complex([])
    assert len(K) == 0
    assert check_vertex_condition(K)
    assert barycentric_subdivision(K).complex.f_vector == (0, 0, 0)


def test_two_squares_sharing_an_edge():
    sqs = [square((0, 0, 0, 0), (0, 1)), square((0, 0, 0, 0), (0, 2))]
    K = build_complex(sqs)
    oracle = lattice_faces_oracle(sqs)
    assert {(c.anchor, c.axes) for c in K.cells} == oracle
    assert K.f_vector == (6, 7, 2)


def test_rejects_non_squares_and_dedupes():
    with pytest.raises(ValueError):
        build_complex([CubicalCell((0, 0, 0, 0), (0,))])
    s = square((1, 2, 3, 4), (2, 3))
    assert build_complex([s, s]).f_vector == (4, 4, 1)


def test_cell_validation():
    with pytest.raises(ValueError):
        CubicalCell((0, 0, 0), ())
    with pytest.raises(ValueError):
        CubicalCell((0, 0, 0, 0), (1, 1))
    with pytest.raises(ValueError):
        CubicalCell((0, 0, 0, 0), (4,))
    assert CubicalCell((0, 0, 0, 0), (1, 0)) == CubicalCell((0, 0, 0, 0), (0, 1))


def test_vertex_condition():
    one = build_complex([square((0, 0, 0, 0), (0, 1))])
    assert check_vertex_condition(one)
    with_edge = closure(list(one.cells) + [CubicalCell((5, 0, 0, 0), (0,))])
    assert not check_vertex_condition(with_edge)
    assert offending_vertices(with_edge)[0] == CubicalCell((5, 0, 0, 0))


def test_unit_cube_skeleton_census():
    K = unit_cube_skeleton()
    assert K.f_vector == (16, 32, 24)


def chains_oracle(K):
    """Count flags of cells ordered by vertex-set inclusion."""
    cells = list(K.cells)
    vs = {c: {v.anchor for v in c.vertices()} for c in cells}
    counts = [0, 0, 0]
    for k in range(1, 4):
        for combo in itertools.combinations(cells, k):
            combo = sorted(combo, key=lambda c: c.dim)
            if len({c.dim for c in combo}) == k and all(vs[a] < vs[b] for a, b in zip(combo, combo[1:])):
                counts[k - 1] += 1
    return tuple(counts)


def test_subdivision_of_square():
    K = build_complex([square((0, 0, 0, 0), (0, 1))])
    B = barycentric_subdivision(K).complex
    assert B.f_vector == chains_oracle(K) == (9, 16, 8)
    assert B.euler_characteristic == 1
    assert B.is_downward_closed()


def test_subdivision_of_edge():
    K = closure([CubicalCell((0, 0, 0, 0), (3,))])
    assert barycentric_subdivision(K).complex.f_vector == (3, 2, 0)


def test_barycenters_are_half_integral_and_injective():
    K = unit_cube_skeleton()
    sub = barycentric_subdivision(K)
    assert len(set(sub.complex.positions)) == len(sub.cells)
    for c, p in zip(sub.cells, sub.complex.positions):
        assert all((2 * x).denominator == 1 for x in p)
        assert cell_from_doubled(c.doubled_barycenter()) == c


def test_json_roundtrip_and_errors():
    K = unit_cube_skeleton()
    assert complex_from_json(K.to_json()) == K
    assert complex_from_json([{"anchor": [0, 0, 0, 0], "axes": [0, 1]}]).f_vector == (4, 4, 1)
    with pytest.raises(ComplexFormatError, match=r"squares\[0\].anchor"):
        complex_from_json({"squares": [{"anchor": [0, 0], "axes": [0, 1]}]})
    with pytest.raises(ComplexFormatError, match="missing field 'axes'"):
        complex_from_json({"squares": [{"anchor": [0, 0, 0, 0]}]})
    with pytest.raises(ComplexFormatError, match="two axes"):
        complex_from_json({"squares": [{"anchor": [0, 0, 0, 0], "axes": [0]}]})


squares_st = st.lists(
    st.builds(lambda a, axes: CubicalCell(a, axes),
              st.tuples(*[st.integers(-1, 1)] * 4),
              st.sampled_from(list(itertools.combinations(range(4), 2)))),
    max_size=6)


@settings(max_examples=60, deadline=None)
@given(squares_st, st.data())
def test_subdivision_properties(squares, data):
    K = build_complex(squares)
    sub = barycentric_subdivision(K)
    B = sub.complex
    assert B.is_downward_closed()
    free_edges = [e for e in K.edges if not any(e.is_face_of(s) for s in K.squares)]
    assert len(B.maximal_simplices()) == 8 * len(K.squares) + 2 * len(free_edges)
    # every simplex is a flag, recovered from barycenter positions
    for s in B.simplices:
        cells = sorted((cell_from_doubled([int(2 * x) for x in B.positions[i]]) for i in s), key=lambda c: c.dim)
        assert len({c.dim for c in cells}) == len(cells)
        assert all(a.is_face_of(b) for a, b in zip(cells, cells[1:]))
    # functoriality on sub-complexes
    sub_squares = data.draw(st.lists(st.sampled_from(squares), unique=True)) if squares else []
    K2 = build_complex(sub_squares)
    B2 = barycentric_subdivision(K2)
    ids = [sub.vertex_of(c) for c in B2.cells]
    relabel = {i: sub.vertex_of(c) for i, c in enumerate(B2.cells)}
    mapped = {tuple(sorted(relabel[v] for v in s)) for s in B2.complex.simplices}
    assert mapped == set(B.induced(ids))
