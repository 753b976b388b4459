import numpy as np
import pytest

from pivotfw.fw_core import ActiveSet
from pivotfw.geometry import L1Ball, Simplex, Vertex, dn_columns
from pivotfw.linalg import solve
from pivotfw.objectives import Quadratic, StepRule
from pivotfw.pivot import asc, init_pivot, project_simplex, run_pm
from pivotfw import fw_core

from .oracles import enumerate_bfs, project_simplex_kkt


def test_init_pivot_frozen_n2():
    x0 = Vertex(2, [0], [1.0])
    state = init_pivot(x0, 2)
    expected = np.array(
        [
            [1.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 1.0, 1.0, 1.0],
            [1.0, 1.0, 1.0, 1.0],
        ]
    )
    assert np.array_equal(state.M, expected)
    assert np.array_equal(state.lam, [1.0, 0.0, 0.0, 0.0])
    assert state.tags == [x0.key, None, None, None]


def test_asc_walkthrough_n2():
    """One cleanup after mixing e2 into the start vertex with weight 1/2.

    All intermediates are pinned: the pivot direction r = -M^{-1} v_ext
    is (-1, 1, -1, 0), candidates are columns 0 and 2 with ratios 0.5 and
    0, so column 2 enters at theta* = 0 and ends up carrying the new
    vertex's full half weight.
    """
    e1 = Vertex(2, [0], [1.0])
    e2 = Vertex(2, [1], [1.0])
    state = init_pivot(e1, 2)
    r = -solve(state.factorization, e2.extended())
    assert np.allclose(r, [-1.0, 1.0, -1.0, 0.0], atol=1e-12)
    beta = {e1.key: 0.5, e2.key: 0.5}
    state, dec = asc(state, beta, {e1.key: e1, e2.key: e2}, [e2], debug=True)
    assert state.tags[2] == e2.key  # ratio-test winner at theta* = 0
    assert np.allclose(state.lam, [0.5, 0.0, 0.5, 0.0], atol=1e-12)
    assert dec.size == 2
    assert dec.alpha[e1.key] == pytest.approx(0.5, abs=1e-12)
    assert dec.alpha[e2.key] == pytest.approx(0.5, abs=1e-12)


def _bfs_vertex_weights(A, b, vertex_cols):
    """Vertex-column weight maps of every basic feasible solution."""
    out = []
    for gamma in enumerate_bfs(A, b):
        out.append({key: gamma[i] for i, key in vertex_cols.items() if gamma[i] > 1e-9})
    return out


def _random_ccu(rng, region, alpha, support):
    """A random convex mixing step entering one new vertex (or none)."""
    candidates = [v for v in region.vertices() if v.key not in alpha]
    eta = float(rng.uniform(0.1, 0.9))
    beta = {k: (1.0 - eta) * w for k, w in alpha.items()}
    T = dict(support)
    if candidates and rng.random() < 0.9:
        v = candidates[int(rng.integers(len(candidates)))]
        beta[v.key] = eta
        T[v.key] = v
        D = [v]
    else:
        # reuse an existing support vertex: no entering column
        key = list(alpha)[int(rng.integers(len(alpha)))]
        beta[key] += eta
        D = []
    return beta, T, D


def test_asc_matches_basis_enumeration_oracle():
    rng = np.random.default_rng(77)
    trials = 0
    while trials < 200:
        if rng.random() < 0.5:
            region = Simplex(int(rng.integers(2, 5)))
        else:
            region = L1Ball(int(rng.integers(2, 4)), 1.0)
        x0 = region.initial_vertex()
        state = init_pivot(x0, region.ambient_dim)
        alpha = {x0.key: 1.0}
        support = {x0.key: x0}
        for _ in range(int(rng.integers(1, 3))):
            beta, T, D = _random_ccu(rng, region, alpha, support)
            A = np.column_stack(
                [state.M] + [v.extended() for v in D]
            )
            vertex_cols = {
                i: tag for i, tag in enumerate(state.tags) if tag is not None
            }
            for j, v in enumerate(D):
                vertex_cols[state.order + j] = v.key
            b = np.zeros(state.order)
            for key, w in beta.items():
                b += w * T[key].extended()
            state, dec = asc(state, beta, T, D, debug=True)
            oracle = _bfs_vertex_weights(A, b, vertex_cols)
            assert oracle, "oracle found no basic feasible solution"
            matched = any(
                set(dec.alpha) == set(sol)
                and all(abs(dec.alpha[k] - sol[k]) <= 1e-8 for k in sol)
                for sol in oracle
            )
            assert matched, f"asc output {dec.alpha} not among {oracle}"
            alpha = dec.alpha
            support = dec.S
            trials += 1


def test_asc_relabel_branch_keeps_weights():
    # no entering vertex: cleanup is a pure relabeling of the weights
    e1 = Vertex(3, [0], [1.0])
    state = init_pivot(e1, 3)
    state, dec = asc(state, {e1.key: 1.0}, {e1.key: e1}, [], debug=True)
    assert dec.alpha == {e1.key: pytest.approx(1.0)}
    assert dec.size == 1


def test_asc_rejects_multiple_entering_vertices():
    e1 = Vertex(2, [0], [1.0])
    e2 = Vertex(2, [1], [1.0])
    state = init_pivot(e1, 2)
    with pytest.raises(ValueError):
        asc(state, {}, {}, [e1, e2])


def test_pivot_caps_active_set_on_long_runs():
    rng = np.random.default_rng(88)
    for region in (Simplex(6), L1Ball(4, 1.0)):
        p = rng.standard_normal(region.ambient_dim) * 0.2
        traj = run_pm("afw", region, Quadratic(p), StepRule("line-search"), 120,
                      debug=True)
        bound = region.dim + 1
        for r in traj.records:
            assert r.active_set_size <= bound
            assert r.reconstruction_residual <= 1e-7


def test_pm_fw_matches_plain_fw_iterates():
    # pure FW never consults the active set, so cleanup cannot change
    # the iterate sequence
    rng = np.random.default_rng(99)
    p = rng.dirichlet(np.ones(5))
    region = Simplex(5)
    rule = StepRule("line-search")
    plain = fw_core.run_plain("fw", region, Quadratic(p), rule, 50)
    pm = run_pm("fw", region, Quadratic(p), StepRule("line-search"), 50, debug=True)
    assert len(plain.records) == len(pm.records)
    for a, b in zip(plain.records, pm.records):
        assert a.primal == pytest.approx(b.primal, abs=1e-12)
        assert a.fw_gap == pytest.approx(b.fw_gap, abs=1e-12)


def test_pm_run_bookkeeping():
    region = Simplex(3)
    obj = Quadratic(np.array([0.5, 0.5, 0.0]))
    traj = run_pm("afw", region, obj, StepRule("line-search"), 10, debug=True)
    assert traj.records[-1].fw_gap <= 1e-12
    for r in traj.records:
        assert r.pre_cleanup_size is not None
        assert r.active_set_size <= r.pre_cleanup_size
    with pytest.raises(ValueError):
        run_pm("afw", region, obj, StepRule("line-search"), -1)


def test_project_simplex_symmetric_pair():
    got = project_simplex(np.array([0.6, 0.6, 0.0, 0.0]))
    assert np.allclose(got, [0.5, 0.5, 0.0, 0.0], atol=1e-15)


def test_project_simplex_frozen_example():
    v = np.array([1.2, -0.1, 0.3])
    got = project_simplex(v)
    want = project_simplex_kkt(v)
    assert np.allclose(got, want, atol=1e-12)
    assert got.sum() == pytest.approx(1.0)
    assert np.all(got >= 0.0)


def test_project_simplex_random_against_kkt_oracle():
    rng = np.random.default_rng(123)
    for _ in range(40):
        n = int(rng.integers(1, 7))
        v = rng.standard_normal(n) * rng.uniform(0.5, 3.0)
        got = project_simplex(v)
        want = project_simplex_kkt(v)
        assert np.allclose(got, want, atol=1e-10)


def test_project_simplex_fixed_point_on_feasible_input():
    rng = np.random.default_rng(321)
    for _ in range(10):
        w = rng.dirichlet(np.ones(5))
        assert np.allclose(project_simplex(w), w, atol=1e-12)


def test_active_set_state_matches_decomposition():
    rng = np.random.default_rng(7)
    region = Simplex(4)
    obj = Quadratic(rng.dirichlet(np.ones(4)))
    traj = run_pm("bpfw", region, obj, StepRule("line-search"), 60, debug=True)
    final = traj.final_state
    final.check()
    assert isinstance(final, ActiveSet)
