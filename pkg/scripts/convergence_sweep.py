"""Death of the single loop class as the sampling step shrinks.

    python3 scripts/convergence_sweep.py --length 12 --vertices 3 4 --deltas 0.6 0.3 0.15

Prints one row per (vertices, delta): number of samples, computed point,
the closed-form death length/4, and the error. Sample parity shows up
directly: an even number of equally spaced samples hits length/4 exactly.
"""
import argparse
import time

from graphcech.generators import cycle
from graphcech.theorem import PipelineConfig, run_pipeline


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--length", type=float, default=12.0)
    parser.add_argument("--vertices", type=int, nargs="+", default=[3, 4])
    parser.add_argument("--deltas", type=float, nargs="+", default=[0.6, 0.3, 0.15])
    parser.add_argument("--model", choices=("cech", "rips"), default="cech")
    args = parser.parse_args()

    target = args.length / (4 if args.model == "cech" else 6)
    print(f"{'verts':>5} {'delta':>7} {'samples':>7} {'birth':>9} {'death':>10} {'error':>10} {'secs':>6}")
    for n in args.vertices:
        g = cycle(args.length, n)
        for delta in args.deltas:
            start = time.perf_counter()
            result = run_pipeline(g, PipelineConfig(delta, args.model))
            secs = time.perf_counter() - start
            samples = len(result.complex.discretization.graph.vertices)
            for b, d in result.diagram[1]:
                print(f"{n:>5} {delta:>7.3f} {samples:>7} {b:>9.4f} {d:>10.6f} {d - target:>10.2e} {secs:>6.1f}")


if __name__ == "__main__":
    main()
