import numpy as np
import pytest

from pivotfw.geometry import (
    KSparsePolytope,
    L1Ball,
    Simplex,
    Vertex,
    dn_columns,
    extend,
    parse_region,
)

from .oracles import brute_lmo


def random_regions():
    return [
        Simplex(5),
        Simplex(8),
        L1Ball(4, 1.0),
        L1Ball(7, 2.5),
        KSparsePolytope(5, 2, 1.0),
        KSparsePolytope(6, 3, 0.7),
    ]


def test_lmo_matches_enumeration_500_directions():
    rng = np.random.default_rng(17)
    for region in random_regions():
        n = region.ambient_dim
        for _ in range(500 // 6 + 1):
            c = rng.standard_normal(n)
            v = region.lmo(c)
            _, best_val = brute_lmo(region, c)
            assert v.dot(c) == pytest.approx(best_val, abs=1e-12)
            assert region.contains(v.dense())


def test_lmo_dominates_random_feasible_points():
    rng = np.random.default_rng(23)
    for region in random_regions():
        n = region.ambient_dim
        for _ in range(20):
            c = rng.standard_normal(n)
            # random convex combination of a few vertices is feasible
            verts = [region.lmo(rng.standard_normal(n)).dense() for _ in range(4)]
            w = rng.dirichlet(np.ones(4))
            x = sum(wi * vi for wi, vi in zip(w, verts))
            assert region.lmo(c).dot(c) <= float(c @ x) + 1e-12


def test_lmo_tie_breaks_at_lowest_index():
    assert Simplex(4).lmo(np.array([1.0, 0.0, 0.0, 2.0])).support() == (1,)
    v = L1Ball(3, 1.0).lmo(np.array([2.0, -2.0, 1.0]))
    assert v.support() == (0,) and v.values[0] == -1.0


def test_l1_lmo_frozen_example():
    v = L1Ball(3, 1.0).lmo(np.array([3.0, -1.0, 2.0]))
    assert v.support() == (0,)
    assert v.values[0] == -1.0
    assert v.dot(np.array([3.0, -1.0, 2.0])) == -3.0


def test_ksparse_lmo_frozen_example():
    v = KSparsePolytope(3, 2, 1.0).lmo(np.array([3.0, -1.0, 2.0]))
    assert np.allclose(v.dense(), [-1.0, 0.0, -1.0])
    assert v.dot(np.array([3.0, -1.0, 2.0])) == -5.0


def test_extend_and_structural_columns():
    x = np.array([0.3, 0.7])
    e = extend(x)
    assert np.array_equal(e, [0.3, 0.7, 0.0, 1.0])
    assert e[3] == 1.0 and e[2] == 0.0
    cols = dn_columns(2)
    assert len(cols) == 3
    assert np.array_equal(cols[0], [1.0, 0.0, 1.0, 1.0])
    assert np.array_equal(cols[1], [0.0, 1.0, 1.0, 1.0])
    assert np.array_equal(cols[2], [0.0, 0.0, 1.0, 1.0])
    # row n (the n+1-st) separates embedded vertices from structural columns
    for c in cols:
        assert c[2] == 1.0
    assert Vertex(2, [0], [1.0]).extended()[2] == 0.0


def test_vertex_identity_is_canonical():
    a = Vertex(5, [3, 1], [0.5, 0.25])
    b = Vertex(5, [1, 3], [0.25, 0.5])
    assert a == b and hash(a) == hash(b)
    c = Vertex(5, [1, 3], [0.25, 0.5 + 1e-12])
    assert a != c
    # explicit zeros do not change identity
    d = Vertex(5, [1, 3, 4], [0.25, 0.5, 0.0])
    assert a == d
    assert Vertex.from_dense(a.dense()) == a


def test_vertex_dense_dot_support():
    v = Vertex(4, [2, 0], [1.5, -0.5])
    assert np.array_equal(v.dense(), [-0.5, 0.0, 1.5, 0.0])
    assert v.dot(np.array([2.0, 9.0, 1.0, 9.0])) == pytest.approx(0.5)
    assert v.support() == (0, 2)


def test_region_metadata():
    s = Simplex(6)
    assert (s.ambient_dim, s.dim) == (6, 5)
    assert s.diameter == pytest.approx(np.sqrt(2.0))
    b = L1Ball(6, 2.0)
    assert (b.dim, b.diameter) == (6, 4.0)
    k = KSparsePolytope(6, 4, 0.5)
    assert k.diameter == pytest.approx(2.0 * 0.5 * np.sqrt(4))


def test_ksparse_vertices_have_exact_sparsity():
    region = KSparsePolytope(4, 2, 1.5)
    for v in region.vertices():
        assert len(v.indices) == 2
        assert np.all(np.abs(v.values) == 1.5)


def test_parse_region():
    s = parse_region("simplex:n=50")
    assert s.kind == "simplex" and s.ambient_dim == 50
    b = parse_region("l1:n=140,tau=2.5")
    assert b.kind == "l1" and b.tau == 2.5
    k = parse_region("ksparse:n=100,k=10,tau=1.0")
    assert (k.k, k.tau) == (10, 1.0)
    for bad in ("simplex", "disco:n=3", "l1:n=3", "simplex:n=0", "l1:n=3,tau=-1"):
        with pytest.raises(ValueError):
            parse_region(bad)
