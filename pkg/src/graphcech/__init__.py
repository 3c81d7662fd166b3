"""Dimension-1 intrinsic Čech persistence of finite metric graphs."""
from .cech_complex import FilteredComplex, Simplex, build_filtration, triangle_value, validate_scale
from .generators import GeneratorSpec, generate
from .loops import Loop, LoopSystem, Z2Basis, candidate_cycles, shortest_system
from .metric_graph import (
    Discretization,
    DistanceOracle,
    GraphFormatError,
    GraphPoint,
    MetricGraph,
    all_pairs_distances,
    delta_discretize,
    genus,
    load,
    normalize,
    point_distance,
)
from .persistence import PersistenceDiagram, bottleneck, diagram_points, reduce
from .theorem import PipelineConfig, VerificationReport, computed_diagram, d_ic, predicted_diagram, verify

__version__ = "0.1.0"
