"""Compiled vs pure-Python kernel timings.

    python3 benchmarks/bench_kernels.py [--reps N] [--json out.json]

Each case simulates the same replications with both backends and checks
that the spectral-function counts agree before reporting a speedup.
"""
import argparse
import json
import time

from maxfield import _backend
from maxfield.geometry import RectDomain
from maxfield.rng import derive_stream
from maxfield.shapes import GaussianShape, IndicatorShape, SpectralModel
from maxfield.simulators import simulate_normalized, simulate_schlather

CASES = {
    "normalized d=1 R=1": (GaussianShape(1.0, 1), RectDomain(1, 1.0, 0.1), None),
    "normalized d=1 R=10": (GaussianShape(1.0, 1), RectDomain(1, 10.0, 0.1), None),
    "schlather k=3 d=1 R=10": (GaussianShape(1.0, 1), RectDomain(1, 10.0, 0.1), 3),
    "normalized d=2 R=2": (GaussianShape(1.0, 2), RectDomain(2, 2.0, 0.25), None),
    "schlather k=2 d=2 R=2": (GaussianShape(1.0, 2), RectDomain(2, 2.0, 0.25), 2),
    "indicator d=2 R=2": (IndicatorShape(1.0, 2), RectDomain(2, 2.0, 0.25), None),
}


def _time(model, k, backend, reps):
    t0 = time.perf_counter()
    counts = []
    for i in range(reps):
        s = derive_stream(2024, i)
        r = (simulate_normalized(model, s, backend=backend) if k is None
             else simulate_schlather(model, k, s, backend=backend))
        counts.append(r.n_spectral)
    return time.perf_counter() - t0, counts


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--reps", type=int, default=1000)
    ap.add_argument("--json", default=None)
    args = ap.parse_args()
    if "compiled" not in _backend.available():
        raise SystemExit("compiled kernels are not built; run pip install -e .")

    rows = []
    print(f"{'case':<26}{'python [s]':>12}{'compiled [s]':>14}{'speedup':>10}")
    for name, (shape, dom, k) in CASES.items():
        model = SpectralModel(shape, dom)
        tp, cp = _time(model, k, "python", args.reps)
        tc, cc = _time(model, k, "compiled", args.reps)
        if cp != cc:
            raise SystemExit(f"{name}: backends disagree on counts")
        rows.append({"case": name, "reps": args.reps, "python_s": tp, "compiled_s": tc,
                     "speedup": tp / tc, "mean_count": sum(cc) / len(cc)})
        print(f"{name:<26}{tp:>12.3f}{tc:>14.3f}{tp / tc:>9.1f}x")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"schema": "maxfield.bench/1", "rows": rows}, fh, indent=2)


if __name__ == "__main__":
    main()
