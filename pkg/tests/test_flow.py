import math

import numpy as np
import pytest

from conftest import random_connected_edges
from weightflow.analytic import analytic_oracle, shape_graph
from weightflow.errors import InvariantViolation
from weightflow.flow import (
    DriftBatch,
    FlowConfig,
    FlowState,
    FlowVariant,
    check_step_bounds,
    compute_drifts,
    edge_drift,
    run_flow,
    step_plain,
    step_quasi_normalized,
)
from weightflow.graph import build_graph, shortest_distances

BRIDGE = [("A", "B", 1.0), ("B", "C", 1.0), ("A", "C", 1.0), ("C", "D", 1.0),
          ("D", "E", 1.0), ("E", "F", 1.0), ("D", "F", 1.0)]


def test_segment_drift():
    g = shape_graph("segment", 2.0)
    dr = edge_drift(g, shortest_distances(g), (0, 1), FlowConfig(alpha=0.5))
    assert dr.drift == pytest.approx(-2.0)
    assert dr.curvature == pytest.approx(1.0)


def test_k4_drift():
    g = shape_graph("k4")
    dr = edge_drift(g, shortest_distances(g), (0, 3), FlowConfig(alpha=0.5))
    assert dr.drift == pytest.approx(-2 / 3)


def test_equal_measures_drift():
    # two-step walks on a segment put half the mass on each end from both sides
    g = shape_graph("segment", 3.0)
    dr = edge_drift(g, shortest_distances(g), (0, 1), FlowConfig(alpha=0.5, variant="two_evol"))
    assert dr.wasserstein == 0.0
    assert dr.drift == -3.0


def test_batch_matches_single_edge(rng):
    g = build_graph(random_connected_edges(rng, 15))
    d = shortest_distances(g)
    for variant in FlowVariant:
        cfg = FlowConfig(alpha=0.3, variant=variant)
        batch = compute_drifts(g, cfg, d)
        single = DriftBatch.of([edge_drift(g, d, e, cfg) for e in range(g.m)])
        np.testing.assert_allclose(batch.wasserstein, single.wasserstein, atol=1e-12)
        np.testing.assert_array_equal(batch.distance, single.distance)


def test_step_plain_single_edge():
    g = shape_graph("segment")
    cfg = FlowConfig(alpha=0.5, iterations=1)
    st = run_flow(g, cfg)
    assert st.weights[0] == pytest.approx(0.99, abs=1e-15)
    assert abs(st.weights[0] - math.exp(-0.01)) < 0.01 ** 2


def test_zero_drift_is_identity():
    st = FlowState(np.array([1.0, 2.0, 3.0]), floor=1e-8)
    batch = DriftBatch(np.array([1.0, 2.0, 3.0]), np.array([1.0, 2.0, 3.0]))
    np.testing.assert_array_equal(step_plain(st, batch, 0.01).weights, st.weights)


def test_hundred_steps_segment():
    st = run_flow(shape_graph("segment", 2.0), FlowConfig(alpha=0.5, iterations=100))
    assert st.weights[0] == pytest.approx(2.0 * math.exp(-1), rel=0.01)


def test_quasi_normalized_symmetric_is_still():
    for shape in ("triangle", "segment", "k4"):
        st = run_flow(shape_graph(shape), FlowConfig(alpha=0.5, iterations=5, variant="qn1_evol"))
        assert np.max(np.abs(st.weights - 1.0)) <= 1e-12


def test_quasi_normalized_formula():
    st = FlowState(np.array([1.0, 2.0, 1.5]), floor=1e-8)
    batch = DriftBatch(np.array([0.5, 1.0, 2.0]), np.array([1.0, 1.8, 1.5]))
    drift = batch.wasserstein - batch.distance
    corr = drift.sum() / st.weights.sum()
    expect = st.weights + 0.1 * (drift - corr * batch.distance)
    np.testing.assert_allclose(step_quasi_normalized(st, batch, 0.1).weights, expect, rtol=1e-15)


def test_bridge_grows_heaviest():
    g = build_graph(BRIDGE)
    st = run_flow(g, FlowConfig(alpha=0.5, iterations=30, variant="qn1_evol"))
    k = g.edge_index((g.labels.index("C"), g.labels.index("D")))
    others = np.delete(st.weights, k)
    assert st.weights[k] > others.max()


def test_zero_iterations():
    g = build_graph([(0, 1, 1.3), (1, 2, 0.4)])
    st = run_flow(g, FlowConfig(iterations=0))
    np.testing.assert_array_equal(st.weights, g.weights)


def test_star_and_square_runs():
    st = run_flow(shape_graph("star", n=3), FlowConfig(alpha=0.5, iterations=100))
    np.testing.assert_allclose(st.weights, math.exp(-1 / 3), rtol=0.01)
    st = run_flow(shape_graph("square"), FlowConfig(alpha=0.2, iterations=100))
    np.testing.assert_allclose(st.weights, math.exp(-0.4), rtol=0.01)


def test_input_graph_untouched():
    g = shape_graph("k4")
    run_flow(g, FlowConfig(iterations=3))
    assert np.all(g.weights == 1.0) and g.version == 0


def test_permuting_edges_changes_nothing(rng):
    edges = random_connected_edges(rng, 12)
    perm = rng.permutation(len(edges))
    g = build_graph(edges)
    h = build_graph([edges[k] for k in perm])
    for variant in ("one_evol", "qn2_evol"):
        cfg = FlowConfig(alpha=0.4, iterations=10, variant=variant)
        wg = run_flow(g, cfg).weights
        wh = run_flow(h, cfg).weights
        # map h's edges back to g's order
        back = [h.edge_index((g.eu[k], g.ev[k])) for k in range(g.m)]
        np.testing.assert_allclose(wh[back], wg, rtol=1e-12, atol=1e-12)


def test_positivity_floor_and_clamps():
    st = FlowState(np.array([1.0, 1.0]), floor=0.25)
    batch = DriftBatch(np.array([0.0, 0.0]), np.array([1.0, 0.1]))
    out = step_plain(st, batch, 0.9)
    np.testing.assert_allclose(out.weights, [0.25, 0.91])
    assert out.clamp_events == 1
    assert FlowConfig().floor_for(np.array([0.5, 2.0])) == pytest.approx(5e-9)


def test_history_and_trace():
    cfg = FlowConfig(iterations=3, record_history=True)
    st = run_flow(shape_graph("triangle"), cfg)
    assert [h[0] for h in st.history] == [0, 1, 2, 3]
    np.testing.assert_array_equal(st.history[-1][1], st.weights)
    assert run_flow(shape_graph("triangle"), FlowConfig(iterations=3)).history is None


def test_bound_checker_raises():
    with pytest.raises(InvariantViolation):
        check_step_bounds(np.array([1.0]), np.array([0.5]), 0.01, normalized=False)
    with pytest.raises(InvariantViolation):
        check_step_bounds(np.array([1.0, 1.0]), np.array([1.1, 1.1]), 0.01, normalized=False)
    check_step_bounds(np.array([1.0, 1.0]), np.array([0.98, 1.0]), 0.01, normalized=True)


def test_scale_equivariance():
    for shape in ("triangle", "square", "k4", "star6"):
        a = run_flow(shape_graph(shape, 1.0), FlowConfig(alpha=0.3, iterations=50)).weights
        b = run_flow(shape_graph(shape, 4.0), FlowConfig(alpha=0.3, iterations=50)).weights
        np.testing.assert_allclose(b, 4.0 * a, rtol=1e-12)


def test_config_validation():
    with pytest.raises(ValueError):
        FlowConfig(step=0.0)
    with pytest.raises(ValueError):
        FlowConfig(alpha=1.0)
    FlowConfig(alpha=1.0, allow_alpha_one=True)
    with pytest.raises(ValueError):
        FlowConfig(variant="bogus")


def test_alpha_one_keeps_weights():
    # every measure is a point mass, so W = rho and the plain drift is zero
    g = build_graph([(0, 1, 1.0), (1, 2, 2.0), (0, 2, 2.5)])
    st = run_flow(g, FlowConfig(alpha=1.0, allow_alpha_one=True, iterations=5))
    np.testing.assert_allclose(st.weights, [1.0, 2.0, 2.5])


def test_euler_matches_oracle_at_small_step():
    st = run_flow(shape_graph("k4"), FlowConfig(alpha=0.1, step=0.001, iterations=1000))
    exact = analytic_oracle("k4", 0.1, 1.0, 1.0)
    assert np.max(np.abs(st.weights - exact)) / exact < 5e-4
