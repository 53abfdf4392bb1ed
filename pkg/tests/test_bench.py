import dataclasses
import io
import warnings

import pytest

from fas import bench
from fas import protocol as P


def test_header_matches_row_fields():
    assert [f.name for f in dataclasses.fields(bench.BenchRow)] == bench.CSV_HEADER
    assert bench.CSV_HEADER == ["ell", "B", "auxgen_s", "auxverify_s", "fpresign_s",
                                "fpreverify_s", "adapt_s", "fext_s"]


@pytest.mark.parametrize("mode", list(P.Mode))
def test_small_grid(mode):
    rows = bench.run_grid([(1, 100), (4, 1000)], reps=2, mode=mode, seed=1)
    assert [(r.ell, r.B) for r in rows] == [(1, 100), (4, 1000)]
    assert all(t >= 0 for r in rows for t in r.timings().values())
    buf = io.StringIO()
    bench.write_csv(rows, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == ",".join(bench.CSV_HEADER)
    assert lines[1].startswith("1,100,")


def test_oversize_warns(monkeypatch):
    monkeypatch.setattr(bench, "MAX_ELL", 1)
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        bench.bench_cell(2, 10, reps=1, seed=1)
    assert any("very large" in str(x.message) for x in w)


def test_single_slot_row_is_fast():
    row = bench.bench_cell(1, 10**6, reps=3, seed=2)
    assert max(row.timings().values()) < 1.0
