"""Command-line front end.

Exit codes: 0 success, 1 verification failed, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import warnings

from . import generators, metric_graph, theorem
from .loops import shortest_system
from .persistence import diagram_to_json


class UsageError(Exception):
    pass


def _positive(kind=float):
    def parse(text: str):
        try:
            value = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}")
        if not value > 0 or (kind is float and not math.isfinite(value)):
            raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
        return value
    return parse


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graphcech", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, model_choices=None):
        p.add_argument("--output", choices=("json", "text"), default="json")
        p.add_argument("--threads", type=_positive(int), default=1)
        if model_choices:
            p.add_argument("--model", choices=model_choices, default=model_choices[0])
            p.add_argument("--delta", type=_positive(), default=None,
                           help="discretization step (default: l1/8, or 0.1 for trees)")
            p.add_argument("--eps-max", dest="eps_max", type=_positive(), default=None,
                           help=f"filtration cutoff (default: {theorem.AUTO_EPS_FACTOR} * longest loop)")

    p = sub.add_parser("info", help="genus, components, total length")
    p.add_argument("graph")
    common(p)

    p = sub.add_parser("loops", help="shortest system of loops")
    p.add_argument("graph")
    common(p)

    p = sub.add_parser("diagram", help="dimension-1 persistence diagram")
    p.add_argument("graph")
    common(p, ("cech", "rips", "theorem"))

    p = sub.add_parser("verify", help="closed form vs brute force")
    p.add_argument("graph")
    p.add_argument("--tol", type=_positive(), default=None)
    common(p, ("cech", "rips"))

    p = sub.add_parser("distance", help="intrinsic Čech distance between two graphs")
    p.add_argument("graph1")
    p.add_argument("graph2")
    common(p)

    p = sub.add_parser("generate", help="synthetic graph as JSON")
    p.add_argument("family", choices=generators.FAMILIES)
    p.add_argument("params", nargs="*", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--vertices", type=_positive(int), default=None, help="cycle only")
    p.add_argument("--out", default=None, help="write to file instead of stdout")
    common(p)
    return parser


def _emit(obj: dict, output: str, text: str) -> None:
    print(json.dumps(obj) if output == "json" else text)


def _default_delta(g) -> float:
    system = shortest_system(g)
    return system.lengths[0] / 8 if system.loops else 0.1


def _points_text(points) -> str:
    return "\n".join(f"{b} {d}" for b, d in points) or "(empty)"


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits 2 on usage errors
    try:
        return _dispatch(args)
    except (metric_graph.GraphFormatError, OSError, ValueError) as exc:
        print(f"graphcech: error: {exc}", file=sys.stderr)
        return 2


def _dispatch(args) -> int:
    cmd = args.command
    if cmd == "generate":
        spec = generators.GeneratorSpec(args.family, tuple(args.params), args.seed, args.vertices)
        g = generators.generate(spec)
        if args.out:
            metric_graph.save(g, args.out)
        else:
            print(metric_graph.dumps(g))
        return 0

    if cmd == "distance":
        g1, g2 = metric_graph.load(args.graph1), metric_graph.load(args.graph2)
        value = theorem.d_ic(g1, g2)
        _emit({"d_ic": value}, args.output, str(value))
        return 0

    g = metric_graph.load(args.graph)
    if cmd == "info":
        info = {
            "vertices": len(g.vertices),
            "edges": len(g.edges),
            "genus": metric_graph.genus(g),
            "components": len(metric_graph.components(g)),
            "total_length": g.total_length,
        }
        _emit(info, args.output, "\n".join(f"{k}: {v}" for k, v in info.items()))
        return 0

    if cmd == "loops":
        system = shortest_system(g)
        text = "\n".join(f"{c.length} {' '.join(c.edges)}" for c in system.loops)
        _emit(system.to_json(), args.output, f"genus {system.genus}\n{text}".rstrip())
        return 0

    delta = args.delta if args.delta is not None else _default_delta(g)
    if cmd == "diagram":
        if args.model == "theorem":
            points = theorem.predicted_diagram(g)[1]
            out = diagram_to_json(points, 1)
        else:
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always")
                result = theorem.run_pipeline(
                    g, theorem.PipelineConfig(delta, args.model, args.eps_max, args.threads))
            for w in caught:
                print(f"graphcech: warning: {w.message}", file=sys.stderr)
            points = result.diagram[1]
            out = diagram_to_json(points, 1)
            out.update(model=args.model, delta=delta, eps_max=result.eps_max)
        _emit(out, args.output, _points_text(points))
        return 0

    if cmd == "verify":
        report = theorem.verify(g, delta, args.tol, args.model, args.eps_max, args.threads)
        text = (f"{'PASS' if report.passed else 'FAIL'}: {report.status}\n"
                f"delta={report.delta} eps_max={report.eps_max} tol={report.tol} "
                f"bottleneck={report.bottleneck}\npredicted:\n{_points_text(report.predicted)}\n"
                f"computed:\n{_points_text(report.computed)}")
        _emit(report.to_json(), args.output, text)
        return 0 if report.passed else 1

    raise UsageError(cmd)  # pragma: no cover


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
