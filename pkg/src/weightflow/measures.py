"""Lazy random-walk probability measures attached to each vertex."""
import numpy as np

from . import kernels
from .kernels.numpy_impl import MASS_TOL, two_step_single

ONE_STEP = "one-step"
TWO_STEP = "two-step"


class ProbabilityMeasure:
    """Finitely supported probability measure on graph vertices."""

    __slots__ = ("vertices", "masses")

    def __init__(self, vertices, masses):
        self.vertices = np.asarray(vertices, dtype=np.int64)
        self.masses = np.asarray(masses, dtype=float)

    @property
    def support(self):
        return [(int(v), float(m)) for v, m in zip(self.vertices, self.masses)]

    def as_dict(self):
        return dict(self.support)

    def total(self):
        return float(self.masses.sum())

    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        body = ", ".join(f"{v}: {m:.6g}" for v, m in self.support)
        return f"ProbabilityMeasure({{{body}}})"


def check_alpha(alpha, allow_one=False):
    a = float(alpha)
    hi_ok = a <= 1.0 if allow_one else a < 1.0
    if not (0.0 <= a and hi_ok):
        bound = "[0, 1]" if allow_one else "[0, 1)"
        raise ValueError(f"alpha must lie in {bound}, got {alpha}")
    return a


def _trim(idx, mass):
    keep = mass >= MASS_TOL
    return ProbabilityMeasure(idx[keep], mass[keep])


def one_step_measure(g, x, a, allow_one=False):
    a = check_alpha(a, allow_one)
    lo, hi = g.indptr[x], g.indptr[x + 1]
    w = g.csr_weights()[lo:hi]
    idx = np.concatenate(([x], g.indices[lo:hi]))
    mass = np.concatenate(([a], (1.0 - a) * w / w.sum()))
    return _trim(idx, mass)


def two_step_measure(g, x, a, allow_one=False):
    """Two-step lazy walk from ``x``.

    When a neighbour ``y`` has no edge leading outside ``{x} + N(x)``, the
    second-step mass routed through ``y`` stays at ``y``.
    """
    a = check_alpha(a, allow_one)
    scratch = np.zeros(g.n, dtype=bool)
    idx, mass = two_step_single(g.indptr, g.indices, g.csr_weights(), a, x, scratch)
    return _trim(idx, mass)


def measure_for_variant(g, x, a, variant, allow_one=False):
    kind = getattr(variant, "measure", variant)
    if kind == ONE_STEP:
        return one_step_measure(g, x, a, allow_one)
    if kind == TWO_STEP:
        return two_step_measure(g, x, a, allow_one)
    raise ValueError(f"unknown measure kind {variant!r}")


def all_measures(g, a, kind, weights=None):
    """Measures at every vertex in CSR layout ``(ptr, vertices, masses)``."""
    w = g.csr_weights(weights)
    if kind == ONE_STEP:
        return kernels.one_step_measures(g.indptr, g.indices, w, float(a))
    if kind == TWO_STEP:
        return kernels.two_step_measures(g.indptr, g.indices, w, float(a))
    raise ValueError(f"unknown measure kind {kind!r}")
