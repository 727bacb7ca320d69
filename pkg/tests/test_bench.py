import io

import pandas as pd
import pytest

from sgprelax.bench import (
    BENCH_COLUMNS,
    LB_DEVIATION_RTOL,
    SEQ_SUMMARY_COLUMNS,
    bench_rows,
    published_table,
    relax_row,
    render,
    rgap,
    sequential_summary,
)
from sgprelax.corpus import get_entry
from sgprelax.schemas import OutputFormat, RelaxLevel, SolveStatus

LEVELS = [RelaxLevel.ECPR, RelaxLevel.SECPR]


@pytest.mark.parametrize("name", sorted(published_table()))
@pytest.mark.parametrize("level", LEVELS)
def test_rgap_reproduces_published_gaps(name, level):
    entry = published_table()[name]
    published = entry.row(level)
    assert rgap(entry.z_star, published.lb) == pytest.approx(published.rgap_pct, abs=0.05)


def test_rgap_sign_and_zero():
    assert rgap(10.0, 8.0) == pytest.approx(20.0)
    assert rgap(-10.0, -12.0) == pytest.approx(-20.0)
    assert rgap(-10.0, -8.0) == pytest.approx(20.0)
    with pytest.raises(ValueError):
        rgap(0.0, -1.0)


def test_p1_rows():
    entry = get_entry("P1")
    ecpr = relax_row(entry.problem, RelaxLevel.ECPR, entry)
    assert ecpr.status == SolveStatus.OPTIMAL.value
    assert (ecpr.n_vars, ecpr.n_linear_constraints, ecpr.n_exp_cones) == (14, 5, 8)
    assert ecpr.lb == pytest.approx(7.4998, rel=1e-2)
    assert ecpr.rgap_pct == pytest.approx(rgap(58.38488, ecpr.lb))
    secpr = relax_row(entry.problem, RelaxLevel.SECPR, entry)
    assert secpr.lb == pytest.approx(56.7598, rel=1e-2)
    assert "deviation" not in secpr.note


def test_relax_row_dump(tmp_path):
    entry = get_entry("P8")
    path = tmp_path / "p8.conic"
    row = relax_row(entry.problem, RelaxLevel.ECPR, entry, dump_path=str(path))
    assert path.read_text().startswith(f"conic {row.n_vars} ")


def test_empty_selection():
    rows = bench_rows(only=["NOPE"])
    assert rows == []
    assert render(rows) == "(no rows)\n"
    assert render(rows, OutputFormat.CSV).strip() == ",".join(BENCH_COLUMNS)


def test_csv_render_of_single_instance():
    rows = bench_rows(include_all=True, only=["p8"])
    frame = pd.read_csv(io.StringIO(render(rows, OutputFormat.CSV)))
    assert list(frame.columns) == BENCH_COLUMNS
    assert frame["level"].tolist() == ["ecpr", "secpr"]
    assert frame["lb"].iloc[1] >= frame["lb"].iloc[0] - 1e-6


def test_sequential_summary_columns():
    frame = sequential_summary(only=["P8"])
    assert list(frame.columns) == SEQ_SUMMARY_COLUMNS
    assert frame["status"].tolist() == ["Converged"]
    assert frame["objective"].iloc[0] == pytest.approx(2.0, abs=1e-4)


@pytest.mark.slow
def test_full_bench_is_sound_and_close_to_published():
    table = published_table()
    for row in bench_rows():
        assert row.status == SolveStatus.OPTIMAL.value, row.instance
        if row.z_star is not None and row.instance != "P7":
            assert row.lb <= row.z_star + 1e-6 * abs(row.z_star)
        if row.instance in ("P1", "P2", "P3", "P5", "P6"):
            published = table[row.instance].row(row.level).lb
            assert abs(row.lb - published) <= LB_DEVIATION_RTOL * abs(published)
