"""Closed-form dimension-1 diagrams, brute-force cross-checks, and the intrinsic Čech distance.

The closed form puts one point (0, l_i / 4) on the death axis for every
loop of a shortest system with lengths l_1 <= ... <= l_g. For Rips only the
single-loop value (0, l / 6) is available.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, field

from .cech_complex import FilteredComplex, ScaleCheck, build_filtration, validate_scale
from .loops import LoopSystem, shortest_system
from .metric_graph import MetricGraph, all_pairs_distances, delta_discretize, normalize
from .persistence import Point, PersistenceDiagram, bottleneck_matching, diagram_to_json, reduce

AUTO_EPS_FACTOR = 0.35


@dataclass(frozen=True)
class PipelineConfig:
    delta: float
    model: str = "cech"
    eps_max: float | None = None  # None: AUTO_EPS_FACTOR * longest loop
    threads: int = 1


@dataclass(frozen=True)
class PipelineResult:
    config: PipelineConfig
    eps_max: float
    complex: FilteredComplex
    diagram: PersistenceDiagram
    scale: ScaleCheck


def predicted_diagram(g: MetricGraph, model: str = "cech", system: LoopSystem | None = None) -> PersistenceDiagram:
    system = system if system is not None else shortest_system(g)
    if model == "cech":
        pts = tuple((0.0, L / 4) for L in system.lengths)
    elif model == "rips":
        if system.genus > 1:
            raise ValueError("the Rips closed form is only known for a single loop")
        pts = tuple((0.0, L / 6) for L in system.lengths)
    else:
        raise ValueError(f"unknown model {model!r}")
    return PersistenceDiagram({1: pts} if pts else {})


def auto_eps_max(g: MetricGraph, system: LoopSystem) -> float:
    if system.loops:
        return AUTO_EPS_FACTOR * system.lengths[-1]
    # no loops: take the whole complex, half the largest finite distance
    h = normalize(g)
    D = all_pairs_distances(h).dist
    finite = D[D < math.inf]
    return max(float(finite.max()) / 2, min(e.length for e in h.edges) / 2) if h.edges else 1.0


def run_pipeline(g: MetricGraph, config: PipelineConfig, system: LoopSystem | None = None) -> PipelineResult:
    """normalize -> discretize -> filtration -> reduction."""
    system = system if system is not None else shortest_system(g)
    scale = validate_scale(g, config.delta, system)
    if not scale.valid:
        warnings.warn(f"scale check failed: {scale.message}", stacklevel=2)
    eps_max = config.eps_max if config.eps_max is not None else auto_eps_max(g, system)
    disc = delta_discretize(normalize(g), config.delta)
    fc = build_filtration(disc, config.model, eps_max, threads=config.threads)
    return PipelineResult(config, eps_max, fc, reduce(fc), scale)


def computed_diagram(g: MetricGraph, delta: float, model: str = "cech", eps_max: float | None = None,
                     threads: int = 1) -> PersistenceDiagram:
    return run_pipeline(g, PipelineConfig(delta, model, eps_max, threads)).diagram


def default_tolerance(delta: float, system: LoopSystem) -> float:
    longest = system.lengths[-1] if system.loops else 0.0
    return max(2 * delta, 0.02 * longest / 4)


@dataclass(frozen=True)
class VerificationReport:
    model: str
    delta: float
    eps_max: float
    tol: float
    predicted: list[Point]
    computed: list[Point]
    significant: int  # computed points with persistence > 2 delta
    matching: list[dict] = field(default_factory=list)
    bottleneck: float = math.inf
    scale_valid: bool = False
    scale_message: str = ""
    passed: bool = False
    status: str = ""

    def to_json(self) -> dict:
        out = asdict(self)
        out["predicted"] = diagram_to_json(self.predicted, 1)["points"]
        out["computed"] = diagram_to_json(self.computed, 1)["points"]
        return out


def _matching_rows(pairs) -> list[dict]:
    rows = []
    for p, q in pairs:
        if p is not None and q is not None:
            err = max(abs(p[0] - q[0]), abs(p[1] - q[1]))
        else:
            pt = p if p is not None else q
            err = (pt[1] - pt[0]) / 2
        rows.append({"predicted": list(p) if p else None, "computed": list(q) if q else None, "error": err})
    return rows


def verify(g: MetricGraph, delta: float, tol: float | None = None, model: str = "cech",
           eps_max: float | None = None, threads: int = 1) -> VerificationReport:
    """Compare the closed form with the brute-force pipeline; failure is a report outcome."""
    system = shortest_system(g)
    tol = tol if tol is not None else default_tolerance(delta, system)
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    scale = validate_scale(g, delta, system)
    eps = eps_max if eps_max is not None else auto_eps_max(g, system)
    base = dict(model=model, delta=delta, eps_max=eps, tol=tol,
                scale_valid=scale.valid, scale_message=scale.message)
    if model == "rips" and system.genus > 1:
        return VerificationReport(predicted=[], computed=[], significant=0, **base,
                                  status="rips verification needs genus <= 1")
    predicted = predicted_diagram(g, model, system)[1]
    if not scale.valid:
        return VerificationReport(predicted=predicted, computed=[], significant=0, **base,
                                  status=f"invalid scale: {scale.message}")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        result = run_pipeline(g, PipelineConfig(delta, model, eps, threads), system)
    computed = result.diagram[1]
    significant = sum(1 for b, d in computed if d - b > 2 * delta)
    dist, pairs = bottleneck_matching(predicted, computed)
    counts_ok = significant == len(predicted)
    passed = counts_ok and dist <= tol
    if passed:
        status = "pass"
    elif not counts_ok:
        status = f"point count mismatch: predicted {len(predicted)}, computed {significant} with persistence > 2*delta"
    else:
        status = f"bottleneck {dist} exceeds tol {tol}"
    return VerificationReport(predicted=predicted, computed=computed, significant=significant,
                              matching=_matching_rows(pairs), bottleneck=dist, passed=passed,
                              status=status, **base)


def d_ic(g1: MetricGraph, g2: MetricGraph) -> float:
    """Bottleneck distance between the two closed-form dimension-1 diagrams."""
    return bottleneck_matching(predicted_diagram(g1)[1], predicted_diagram(g2)[1])[0]
