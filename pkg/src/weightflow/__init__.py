"""Community detection by evolving edge weights with transport-distance flows."""
from .community import Partition, SweepResult, ari, contingency, modularity, nmi, surgery, sweep
from .flow import EdgeDrift, FlowConfig, FlowState, FlowVariant, edge_drift, run_flow, step_plain, step_quasi_normalized
from .graph import DistanceMatrix, Edge, WeightedGraph, build_graph, connected_components, rho, shortest_distances
from .measures import ProbabilityMeasure, measure_for_variant, one_step_measure, two_step_measure
from .transport import TransportResult, verify_duality, wasserstein

__all__ = [
    "DistanceMatrix", "Edge", "EdgeDrift", "FlowConfig", "FlowState", "FlowVariant", "Partition",
    "ProbabilityMeasure", "SweepResult", "TransportResult", "WeightedGraph", "ari", "build_graph",
    "connected_components", "contingency", "edge_drift", "measure_for_variant", "modularity", "nmi",
    "one_step_measure", "rho", "run_flow", "shortest_distances", "step_plain", "step_quasi_normalized",
    "surgery", "sweep", "two_step_measure", "verify_duality", "wasserstein",
]
