"""Compare the compiled and pure-Python group kernels.

    python benchmarks/bench_backends.py [--quick]

Prints a table of median seconds per kernel call and the speedup.
"""
import argparse
import statistics
import time

from fas import group as g


def _median(fn, reps):
    out = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        out.append(time.perf_counter() - t0)
    return statistics.median(out)


def cases(quick):
    rng = g.make_rng(7)
    k = g.random_scalar(rng)
    P = g.base_mul(g.random_scalar(rng))
    n = 100 if quick else 1000
    pts = g.batch_base_mul([g.random_scalar(rng) for _ in range(n)])
    ks = [g.random_scalar(rng) for _ in range(n)]
    B = 10**6 if quick else 10**8
    v = B - 12345
    T = g.base_mul(v)
    return [
        ("mul_base", lambda: g.base_mul(k)),
        ("mul", lambda: P * k),
        (f"multiexp n={n}", lambda: g.multiexp(pts, ks)),
        (f"bsgs B={B:.0e}", lambda: g.bsgs_dlog(g.GENERATOR, T, B, method="bsgs")),
        ("linear B=4096", lambda: g.bsgs_dlog(g.GENERATOR, g.base_mul(4000), 4096, method="linear")),
    ]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true")
    ap.add_argument("--reps", type=int, default=5)
    args = ap.parse_args()
    backends = g.available_backends()
    results = {}
    for be in backends:
        g.set_backend(be)
        for name, fn in cases(args.quick):
            results[(name, be)] = _median(fn, args.reps if be == "compiled" else max(1, args.reps // 2))
    names = [name for name, _ in cases(args.quick)]
    print(f"{'kernel':<18}" + "".join(f"{be:>12}" for be in backends) + ("     speedup" if len(backends) > 1 else ""))
    for name in names:
        row = f"{name:<18}" + "".join(f"{results[(name, be)]:>12.6f}" for be in backends)
        if "compiled" in backends:
            row += f"{results[(name, 'pure')] / results[(name, 'compiled')]:>11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
