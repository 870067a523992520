"""Discrete weight evolution driven by transport distances.

Each iteration recomputes the metric from the current weights, evaluates
every edge's drift against that frozen snapshot and then applies one
explicit Euler step to all edges at once.
"""
import enum
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

from . import kernels
from .errors import InvariantViolation, ZeroTotalWeight
from .graph import Edge, shortest_distances
from .measures import ONE_STEP, TWO_STEP, all_measures, check_alpha, measure_for_variant
from .transport import wasserstein

BOUND_TOL = 1e-12


class FlowVariant(enum.Enum):
    ONE_EVOL = "one_evol"
    QN1_EVOL = "qn1_evol"
    TWO_EVOL = "two_evol"
    QN2_EVOL = "qn2_evol"

    @property
    def measure(self):
        return ONE_STEP if self in (FlowVariant.ONE_EVOL, FlowVariant.QN1_EVOL) else TWO_STEP

    @property
    def normalized(self):
        return self in (FlowVariant.QN1_EVOL, FlowVariant.QN2_EVOL)

    @classmethod
    def parse(cls, v):
        return v if isinstance(v, cls) else cls(str(v))


@dataclass(frozen=True)
class FlowConfig:
    alpha: float = 0.5
    step: float = 0.01
    iterations: int = 20
    variant: FlowVariant = FlowVariant.ONE_EVOL
    # None means 1e-8 times the smallest initial weight
    positivity_floor: float | None = None
    allow_alpha_one: bool = False
    record_history: bool = False
    check_bounds: bool = True

    def __post_init__(self):
        object.__setattr__(self, "variant", FlowVariant.parse(self.variant))
        check_alpha(self.alpha, self.allow_alpha_one)
        if not self.step > 0:
            raise ValueError(f"step must be positive, got {self.step}")
        if int(self.iterations) != self.iterations or self.iterations < 0:
            raise ValueError(f"iterations must be a non-negative integer, got {self.iterations}")
        if self.positivity_floor is not None and not self.positivity_floor > 0:
            raise ValueError("positivity_floor must be positive")

    def floor_for(self, w0):
        if self.positivity_floor is not None:
            return float(self.positivity_floor)
        return 1e-8 * float(np.min(w0))


@dataclass
class FlowState:
    weights: np.ndarray
    iteration: int = 0
    variant: FlowVariant = FlowVariant.ONE_EVOL
    step: float = 0.01
    alpha: float = 0.5
    floor: float = 0.0
    clamp_events: int = 0
    # (iteration, weights, curvatures) with curvatures of the weights shown
    history: list | None = None

    def copy_with(self, weights, clamps):
        return replace(
            self,
            weights=weights,
            iteration=self.iteration + 1,
            clamp_events=self.clamp_events + clamps,
        )


class EdgeDrift(NamedTuple):
    edge: Edge
    wasserstein: float
    distance: float

    @property
    def curvature(self):
        return 1.0 - self.wasserstein / self.distance if self.distance > 0 else float("nan")

    @property
    def drift(self):
        return self.wasserstein - self.distance


@dataclass
class DriftBatch:
    """Transport costs and endpoint distances for every edge, in edge order."""

    wasserstein: np.ndarray
    distance: np.ndarray

    @property
    def drift(self):
        return self.wasserstein - self.distance

    @property
    def curvature(self):
        with np.errstate(divide="ignore", invalid="ignore"):
            return 1.0 - self.wasserstein / self.distance

    @classmethod
    def of(cls, drifts):
        if isinstance(drifts, cls):
            return drifts
        drifts = list(drifts)
        return cls(
            np.array([x.wasserstein for x in drifts], dtype=float),
            np.array([x.distance for x in drifts], dtype=float),
        )


def edge_drift(g, d, e, cfg):
    k = g.edge_index(e)
    x, y = int(g.eu[k]), int(g.ev[k])
    mx = measure_for_variant(g, x, cfg.alpha, cfg.variant.measure, cfg.allow_alpha_one)
    my = measure_for_variant(g, y, cfg.alpha, cfg.variant.measure, cfg.allow_alpha_one)
    res = wasserstein(d, mx, my)
    return EdgeDrift(Edge(x, y, float(g.weights[k])), res.cost, float(d[x, y]))


def compute_drifts(g, cfg, d=None):
    """Drifts of all edges from one snapshot of ``g``'s weights."""
    if d is None:
        d = shortest_distances(g)
    D = d.require_fresh()
    mptr, midx, mmass = all_measures(g, cfg.alpha, cfg.variant.measure)
    W = kernels.edge_costs(D, mptr, midx, mmass, g.eu, g.ev)
    return DriftBatch(np.asarray(W, dtype=float), D[g.eu, g.ev].copy())


def _apply(state, delta, s, floor):
    proposed = state.weights + s * delta
    clamped = proposed < floor
    new = np.where(clamped, floor, proposed)
    return state.copy_with(new, int(clamped.sum()))


def step_plain(state, drifts, s, floor=None):
    b = DriftBatch.of(drifts)
    return _apply(state, b.drift, s, state.floor if floor is None else floor)


def step_quasi_normalized(state, drifts, s, d=None, floor=None):
    """Euler step of the flow with its total drift removed in proportion to distance.

    ``d`` optionally overrides the per-edge endpoint distances in ``drifts``.
    """
    b = DriftBatch.of(drifts)
    total_w = float(np.sum(state.weights))
    if not total_w > 0:
        raise ZeroTotalWeight("sum of weights is not positive")
    dist = b.distance if d is None else np.asarray(d, dtype=float)
    drift = b.drift
    delta = drift - (float(np.sum(drift)) / total_w) * dist
    return _apply(state, delta, s, state.floor if floor is None else floor)


def check_step_bounds(old, new, s, normalized, tol=BOUND_TOL):
    """Raise if a single step breaks the per-edge lower or total upper bound."""
    m = len(old)
    factor = 1.0 - (m + 1) * s if normalized else 1.0 - s
    lower = factor * old
    if np.any(new < lower - tol * np.maximum(old, 1.0)):
        k = int(np.argmin(new - lower))
        raise InvariantViolation(f"edge {k}: weight fell from {old[k]:.6g} to {new[k]:.6g}")
    if not normalized:
        grow = (1.0 + m * s) * float(np.sum(old))
        if float(np.sum(new)) > grow * (1.0 + tol):
            raise InvariantViolation("total weight grew faster than (1 + m s)")


def initial_state(g, cfg):
    w0 = np.asarray(g.weights, dtype=float).copy()
    return FlowState(
        weights=w0,
        variant=cfg.variant,
        step=cfg.step,
        alpha=cfg.alpha,
        floor=cfg.floor_for(w0),
        history=[] if cfg.record_history else None,
    )


def run_flow(g, cfg, callback=None):
    """Run ``cfg.iterations`` synchronous Euler steps starting from ``g``'s weights.

    ``g`` is not modified. With ``record_history`` each entry of
    ``state.history`` is ``(iteration, weights, curvatures)``, the curvatures
    being those of the weights in that entry.
    """
    work = g.copy()
    state = initial_state(g, cfg)
    step = step_quasi_normalized if cfg.variant.normalized else step_plain
    for _ in range(int(cfg.iterations)):
        work.set_weights(state.weights)
        batch = compute_drifts(work, cfg)
        if state.history is not None:
            state.history.append((state.iteration, state.weights.copy(), batch.curvature))
        new = step(state, batch, cfg.step)
        if cfg.check_bounds:
            check_step_bounds(state.weights, new.weights, cfg.step, cfg.variant.normalized)
        state = new
        if callback is not None:
            callback(state, batch)
    if state.history is not None:
        work.set_weights(state.weights)
        state.history.append((state.iteration, state.weights.copy(), compute_drifts(work, cfg).curvature))
    return state
