"""Per-operation timing over a grid of (ell, B)."""
from __future__ import annotations

import csv
import math
import statistics
import time
import warnings
from dataclasses import astuple, dataclass, fields

from . import adaptor
from . import protocol as P
from .group import make_rng

CSV_HEADER = ["ell", "B", "auxgen_s", "auxverify_s", "fpresign_s", "fpreverify_s", "adapt_s", "fext_s"]
DEFAULT_GRID = [(1, 10**6), (10**2, 10**6), (10**2, 10**8), (10**4, 10**8)]

# past these a single cell takes minutes (setup is linear in ell, dlog in sqrt B)
MAX_ELL = 10**5
MAX_BOUND = 10**12


@dataclass(frozen=True)
class BenchRow:
    ell: int
    B: int
    auxgen_s: float
    auxverify_s: float
    fpresign_s: float
    fpreverify_s: float
    adapt_s: float
    fext_s: float

    def timings(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)[2:]}


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return time.perf_counter() - t0, out


def bench_cell(ell: int, bound: int, reps: int = 3, mode: P.Mode = P.Mode.STRONG, seed=None) -> BenchRow:
    """Median seconds per operation.

    Entries of x and y are drawn from ``[0, floor(sqrt(B / ell))]`` so every
    inner product stays within the bound. In weak mode the aux columns time
    the trivial algorithms.
    """
    if ell > MAX_ELL or bound > MAX_BOUND:
        warnings.warn(f"grid cell ell={ell}, B={bound} is very large; expect long runtimes", stacklevel=2)
    rng = make_rng(seed)
    pp = P.setup(ell=ell, bound=bound, mode=mode, rng=rng)
    hi = math.isqrt(bound // ell)
    x = [rng.randint(0, hi) for _ in range(ell)]
    X = pp.relation.statement(x)
    advt, st = P.ad_gen(pp, X, x, rng)
    sk, vk = adaptor.keygen(rng)

    cols = {name: [] for name in CSV_HEADER[2:]}
    for i in range(reps):
        y = [rng.randint(0, hi) for _ in range(ell)]
        m = b"bench payment %d" % i
        dt, aux = _timed(lambda: P.aux_gen(pp, advt, st, y))
        cols["auxgen_s"].append(dt)
        dt, ok = _timed(lambda: P.aux_verify(pp, advt, y, aux))
        cols["auxverify_s"].append(dt)
        # the aux check is its own column
        dt, pre = _timed(lambda: P.f_pre_sign(pp, advt, sk, m, X, y, aux, rng, check_aux=False))
        cols["fpresign_s"].append(dt)
        dt, ok2 = _timed(lambda: P.f_pre_verify(pp, advt, vk, m, X, y, aux, pre))
        cols["fpreverify_s"].append(dt)
        dt, sig = _timed(lambda: P.adapt(pp, advt, st, vk, m, X, x, y, aux, pre))
        cols["adapt_s"].append(dt)
        dt, v = _timed(lambda: P.f_ext(pp, advt, pre, sig, X, y, aux))
        cols["fext_s"].append(dt)
        if not (ok and ok2) or v != sum(a * b for a, b in zip(x, y)):
            raise RuntimeError("benchmark run produced an incorrect result")
    return BenchRow(ell, bound, **{k: statistics.median(v) for k, v in cols.items()})


def run_grid(grid=DEFAULT_GRID, reps: int = 3, mode: P.Mode = P.Mode.STRONG, seed=None, progress=None):
    rows = []
    for ell, bound in grid:  # sequential on purpose: keeps timings clean
        row = bench_cell(ell, bound, reps, mode, seed)
        rows.append(row)
        if progress:
            progress(row)
    return rows


def write_csv(rows, fh):
    w = csv.writer(fh)
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([r.ell, r.B, *(f"{t:.6f}" for t in astuple(r)[2:])])
