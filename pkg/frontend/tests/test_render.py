"""Tests for the figure renderer.

Fixture files below are literal copies of the simulator's documented
output formats (header lines, comment lines, value spellings), so these
tests double as a contract check against those formats.
"""
from __future__ import annotations

import json
import re
import subprocess
import sys
from pathlib import Path

import pytest

import qturbo_figures
from qturbo_figures import csvio
from qturbo_figures.cli import main
from qturbo_figures.csvio import InputError, read_input
from qturbo_figures.render import FigureSpec, build_figure, render

SWEEP_CSV = """\
# qturbo 0.1.0 config=0123456789ab seed=0
rate,k,p,frames,qubit_errors,qubit_total,qber,ci_low,ci_high,mean_iterations
1/2,500,0.0,20,0,10000,0.0,0.0,0.00037,1.0
1/2,500,0.03,40,12,20000,0.0006,0.00034,0.001,5.2
1/2,500,0.048,40,190,20000,0.0095,0.008,0.011,9.1
3/4,498,0.009,30,36,14940,0.0024096385542168676,0.0017,0.0033,6.0
3/4,498,0.02,30,598,14940,0.04002677376171353,0.037,0.043,12.0
"""

EXIT_CSV = """\
# qturbo 0.1.0 config=0123456789ab seed=0
curve,p_or_rate,I_A,I_E,I_A_norm,I_E_norm,samples
inner,0.05,0.0,0.93,0.0,0.465,100352
inner,0.05,1.0,1.62,0.5,0.81,100352
inner,0.05,2.0,1.97,1.0,0.985,100352
inner,0.06,0.0,0.89,0.0,0.445,100352
inner,0.06,1.0,1.6,0.5,0.8,100352
inner,0.06,2.0,1.94,1.0,0.97,100352
outer,1/2,0.0,0.0,0.0,0.0,106496
outer,1/2,1.0,0.32,0.5,0.16,106496
outer,1/2,2.0,1.9999999999,1.0,0.99999999995,106496
"""

TRAJECTORY_CSV = """\
# qturbo 0.1.0 config=0123456789ab seed=0
iteration,stage,I,I_norm
1,inner,0.9,0.45
1,outer,0.3,0.15
2,inner,1.3,0.65
2,outer,0.9,0.45
"""

GOODPUT_CSV = """\
# qturbo 0.1.0 config=0123456789ab seed=0
rate,p,qber,goodput
1/2,0.03,0.0006,0.4997
1/2,0.048,0.0095,0.49525
3/4,0.009,0.0024096385542168676,0.7481927710843373
3/4,0.02,0.04002677376171353,0.7199549196787148
"""

BOUND_CSV = """\
# qturbo 0.1.0 config=0123456789ab seed=0
p,capacity
0.0,1.0
0.02,0.84
0.031,0.7501
0.032,0.7493
0.074,0.5002
0.075,0.4994
0.12,0.25
"""

SWITCH_JSON = json.dumps(
    {
        "requirements": [
            {
                "requirement": "qber<uncoded",
                "thresholds": {"1/2": 0.0462, "3/4": 0.0331},
                "intervals": [
                    {"p_low": 0.0, "p_high": 0.0331, "rate": "3/4"},
                    {"p_low": 0.0331, "p_high": 0.0462, "rate": "1/2"},
                ],
            },
            {
                "requirement": "qber<=0.003",
                "thresholds": {"1/2": 0.0405, "3/4": 0.0125},
                "intervals": [
                    {"p_low": 0.0, "p_high": 0.0125, "rate": "3/4"},
                    {"p_low": 0.0125, "p_high": 0.0405, "rate": "1/2"},
                ],
            },
        ]
    }
)


def _write(tmp_path: Path, name: str, body: str) -> Path:
    path = tmp_path / name
    path.write_text(body)
    return path


def _spec(kind, inputs, out, normalized=False):
    return FigureSpec(kind, tuple(inputs), Path(out), normalized)


# ---------------------------------------------------------------------------
# input parsing
# ---------------------------------------------------------------------------

def test_header_sniffing(tmp_path):
    cases = [
        ("s.csv", SWEEP_CSV, csvio.SWEEP, 5),
        ("e.csv", EXIT_CSV, csvio.EXIT, 9),
        ("t.csv", TRAJECTORY_CSV, csvio.TRAJECTORY, 4),
        ("g.csv", GOODPUT_CSV, csvio.GOODPUT, 4),
        ("b.csv", BOUND_CSV, csvio.BOUND, 7),
    ]
    for name, body, kind, rows in cases:
        table = read_input(_write(tmp_path, name, body))
        assert table.kind == kind
        assert len(table.rows) == rows
    table = read_input(_write(tmp_path, "sw.json", SWITCH_JSON))
    assert table.kind == csvio.SWITCH


def test_unknown_header_is_descriptive(tmp_path):
    path = _write(tmp_path, "odd.csv", "foo,bar\n1,2\n")
    with pytest.raises(InputError) as err:
        read_input(path)
    message = str(err.value)
    assert "odd.csv" in message and "foo,bar" in message
    assert "rate,k,p" in message  # lists the recognized headers


def test_malformed_row_names_file_and_line(tmp_path):
    body = SWEEP_CSV + "1/2,500\n"
    path = _write(tmp_path, "bad.csv", body)
    with pytest.raises(InputError, match=r"bad\.csv:8.*2 fields"):
        read_input(path)


def test_non_numeric_value_is_descriptive(tmp_path):
    body = BOUND_CSV.replace("0.84", "oops")
    path = _write(tmp_path, "bound.csv", body)
    with pytest.raises(InputError, match=r"bound\.csv:4.*'capacity'.*'oops'"):
        read_input(path)
    # label columns are exempt: the sweep's rate field is not a number
    read_input(_write(tmp_path, "sweep.csv", SWEEP_CSV))


def test_unreadable_rate_label_is_descriptive(tmp_path):
    sweep = _write(tmp_path, "sweep.csv", SWEEP_CSV.replace("3/4", "three"))
    bound = _write(tmp_path, "hashing_bound.csv", BOUND_CSV)
    with pytest.raises(InputError, match="cannot read 'three' as a rate"):
        build_figure(_spec("qber", [sweep, bound], tmp_path / "f.svg"))


def test_missing_file_and_headerless_file(tmp_path):
    with pytest.raises(InputError, match="not found"):
        read_input(tmp_path / "ghost.csv")
    empty = _write(tmp_path, "empty.csv", "# only a comment\n")
    with pytest.raises(InputError, match="no header"):
        read_input(empty)


def test_switch_json_must_have_requirements(tmp_path):
    path = _write(tmp_path, "sw.json", '{"nope": []}')
    with pytest.raises(InputError, match="requirements"):
        read_input(path)
    broken = _write(tmp_path, "broken.json", "{not json")
    with pytest.raises(InputError, match="not valid JSON"):
        read_input(broken)


# ---------------------------------------------------------------------------
# exit figure
# ---------------------------------------------------------------------------

def test_exit_curves_and_trajectory_staircase(tmp_path):
    exit_path = _write(tmp_path, "exit_curves.csv", EXIT_CSV)
    traj_path = _write(tmp_path, "trajectory.csv", TRAJECTORY_CSV)
    result = build_figure(
        _spec("exit", [exit_path, traj_path], tmp_path / "f.svg")
    )
    ax = result.figure.axes[0]
    labels = [line.get_label() for line in ax.lines]
    assert "inner, p=0.05" in labels and "inner, p=0.06" in labels
    assert "outer, rate 1/2" in labels
    assert "decoding trajectory" in labels

    # the outer curve is drawn on swapped axes: x is its I_E column
    outer = ax.lines[labels.index("outer, rate 1/2")]
    assert list(outer.get_xdata()) == [0.0, 0.32, 1.9999999999]
    assert list(outer.get_ydata()) == [0.0, 1.0, 2.0]

    # staircase: starts at the origin, inner moves y, outer moves x
    stairs = ax.lines[labels.index("decoding trajectory")]
    assert list(stairs.get_xdata()) == [0.0, 0.0, 0.3, 0.3, 0.9]
    assert list(stairs.get_ydata()) == [0.0, 0.9, 0.9, 1.3, 1.3]
    assert ax.get_xlim() == (0.0, 2.0)


def test_exit_normalized_switches_columns_and_limits(tmp_path):
    exit_path = _write(tmp_path, "exit_curves.csv", EXIT_CSV)
    traj_path = _write(tmp_path, "trajectory.csv", TRAJECTORY_CSV)
    result = build_figure(
        _spec("exit", [exit_path, traj_path], tmp_path / "f.svg", normalized=True)
    )
    ax = result.figure.axes[0]
    assert ax.get_xlim() == (0.0, 1.0)
    assert "normalized" in ax.get_xlabel()
    labels = [line.get_label() for line in ax.lines]
    inner = ax.lines[labels.index("inner, p=0.05")]
    assert max(inner.get_ydata()) <= 1.0
    stairs = ax.lines[labels.index("decoding trajectory")]
    assert list(stairs.get_ydata()) == [0.0, 0.45, 0.45, 0.65, 0.65]


def test_exit_requires_exit_table(tmp_path):
    sweep = _write(tmp_path, "sweep.csv", SWEEP_CSV)
    with pytest.raises(InputError, match="exit figure needs at least one exit"):
        build_figure(_spec("exit", [sweep], tmp_path / "f.svg"))


# ---------------------------------------------------------------------------
# qber figure
# ---------------------------------------------------------------------------

def test_qber_drops_zero_rows_with_notice(tmp_path):
    sweep = _write(tmp_path, "sweep.csv", SWEEP_CSV)
    out = tmp_path / "qber.svg"
    result = render(_spec("qber", [sweep], out))
    assert out.exists()
    assert any(
        "dropped 1 zero-QBER row(s)" in n and "sweep.csv" in n
        for n in result.notices
    )
    ax = result.figure.axes[0]
    assert ax.get_yscale() == "log"
    labels = [line.get_label() for line in ax.lines]
    assert "rate 1/2, k=500" in labels and "rate 3/4, k=498" in labels
    assert "uncoded (QBER = p)" in labels
    # the zero-QBER point is gone: the 1/2 curve keeps only two points
    half = ax.lines[labels.index("rate 1/2, k=500")]
    assert list(half.get_xdata()) == [0.03, 0.048]


def test_qber_threshold_verticals_come_from_bound_table(tmp_path):
    sweep = _write(tmp_path, "sweep.csv", SWEEP_CSV)
    bound = _write(tmp_path, "hashing_bound.csv", BOUND_CSV)
    result = build_figure(_spec("qber", [sweep, bound], tmp_path / "f.svg"))
    ax = result.figure.axes[0]
    verticals = sorted(
        line.get_xdata()[0]
        for line in ax.lines
        if len(set(line.get_xdata())) == 1 and len(set(line.get_ydata())) > 1
    )
    # largest tabulated p with capacity still >= 3/4 resp. 1/2
    assert verticals == [0.031, 0.074]


def test_qber_without_bound_notes_omission(tmp_path):
    sweep = _write(tmp_path, "sweep.csv", SWEEP_CSV)
    result = build_figure(_spec("qber", [sweep], tmp_path / "f.svg"))
    assert any("threshold markers omitted" in n for n in result.notices)


def test_normalized_flag_noted_as_inert_outside_exit(tmp_path):
    sweep = _write(tmp_path, "sweep.csv", SWEEP_CSV)
    result = build_figure(_spec("qber", [sweep], tmp_path / "f.svg", normalized=True))
    assert any("no effect on the qber figure" in n for n in result.notices)


def test_qber_all_zero_rows_is_an_error_and_no_file(tmp_path):
    body = SWEEP_CSV.splitlines()[:3]  # header lines + the single zero row
    sweep = _write(tmp_path, "sweep.csv", "\n".join(body) + "\n")
    out = tmp_path / "qber.svg"
    with pytest.raises(InputError, match="no plottable rows"):
        render(_spec("qber", [sweep], out))
    assert not out.exists()


# ---------------------------------------------------------------------------
# goodput figure
# ---------------------------------------------------------------------------

def test_goodput_with_bound_and_staircase(tmp_path):
    gp = _write(tmp_path, "goodput.csv", GOODPUT_CSV)
    bound = _write(tmp_path, "hashing_bound.csv", BOUND_CSV)
    switch = _write(tmp_path, "switch_table.json", SWITCH_JSON)
    result = build_figure(_spec("goodput", [gp, bound, switch], tmp_path / "f.svg"))
    ax = result.figure.axes[0]
    labels = [line.get_label() for line in ax.lines]
    assert "rate 1/2" in labels and "rate 3/4" in labels
    assert "hashing bound" in labels
    # staircase prefers the explicit QBER target over beat-uncoded
    legend_texts = [t.get_text() for t in ax.get_legend().get_texts()]
    assert "selected rate (qber<=0.003)" in legend_texts


def test_goodput_staircase_omitted_when_no_intervals(tmp_path):
    gp = _write(tmp_path, "goodput.csv", GOODPUT_CSV)
    empty = {
        "requirements": [
            {"requirement": "qber<=0.003", "thresholds": {}, "intervals": []}
        ]
    }
    switch = _write(tmp_path, "switch_table.json", json.dumps(empty))
    result = build_figure(_spec("goodput", [gp, switch], tmp_path / "f.svg"))
    assert any("staircase omitted" in n for n in result.notices)


def test_goodput_staircase_falls_back_to_populated_requirement(tmp_path):
    gp = _write(tmp_path, "goodput.csv", GOODPUT_CSV)
    payload = {
        "requirements": [
            {
                "requirement": "qber<uncoded",
                "thresholds": {"1/2": 0.037},
                "intervals": [{"p_low": 0.0, "p_high": 0.037, "rate": "1/2"}],
            },
            {"requirement": "qber<=0.003", "thresholds": {"1/2": None},
             "intervals": []},
        ]
    }
    switch = _write(tmp_path, "switch_table.json", json.dumps(payload))
    result = build_figure(_spec("goodput", [gp, switch], tmp_path / "f.svg"))
    assert not result.notices
    legend_texts = [t.get_text() for t in result.figure.axes[0].get_legend().get_texts()]
    assert "selected rate (qber<uncoded)" in legend_texts


def test_goodput_requires_goodput_table(tmp_path):
    bound = _write(tmp_path, "hashing_bound.csv", BOUND_CSV)
    with pytest.raises(InputError, match="goodput figure needs"):
        build_figure(_spec("goodput", [bound], tmp_path / "f.svg"))


# ---------------------------------------------------------------------------
# determinism
# ---------------------------------------------------------------------------

def test_svg_byte_stable_in_process(tmp_path):
    exit_path = _write(tmp_path, "exit_curves.csv", EXIT_CSV)
    sweep = _write(tmp_path, "sweep.csv", SWEEP_CSV)
    bound = _write(tmp_path, "hashing_bound.csv", BOUND_CSV)
    gp = _write(tmp_path, "goodput.csv", GOODPUT_CSV)
    switch = _write(tmp_path, "switch_table.json", SWITCH_JSON)
    specs = [
        _spec("exit", [exit_path], tmp_path / "a.svg"),
        _spec("qber", [sweep, bound], tmp_path / "b.svg"),
        _spec("goodput", [gp, bound, switch], tmp_path / "c.svg"),
    ]
    for spec in specs:
        render(spec)
        first = spec.out.read_bytes()
        assert first.startswith(b"<?xml")
        render(spec)
        assert spec.out.read_bytes() == first


def test_svg_byte_stable_across_processes(tmp_path):
    exit_path = _write(tmp_path, "exit_curves.csv", EXIT_CSV)
    outs = [tmp_path / "run1.svg", tmp_path / "run2.svg"]
    for out in outs:
        proc = subprocess.run(
            [
                sys.executable, "-m", "qturbo_figures.cli",
                "--kind", "exit", "--in", str(exit_path), "--out", str(out),
            ],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, proc.stderr
    assert outs[0].read_bytes() == outs[1].read_bytes()


# ---------------------------------------------------------------------------
# command line
# ---------------------------------------------------------------------------

def test_cli_prints_notices_and_writes(tmp_path, capsys):
    sweep = _write(tmp_path, "sweep.csv", SWEEP_CSV)
    out = tmp_path / "qber.svg"
    code = main(["--kind", "qber", "--in", str(sweep), "--out", str(out)])
    captured = capsys.readouterr()
    assert code == 0 and out.exists()
    assert "dropped 1 zero-QBER row(s)" in captured.out
    assert f"wrote {out}" in captured.out


def test_cli_schema_error_exits_nonzero(tmp_path, capsys):
    odd = _write(tmp_path, "odd.csv", "foo,bar\n1,2\n")
    out = tmp_path / "f.svg"
    code = main(["--kind", "qber", "--in", str(odd), "--out", str(out)])
    captured = capsys.readouterr()
    assert code == 1
    assert not out.exists()
    assert "unrecognized header" in captured.err


def test_cli_rejects_unknown_kind(tmp_path):
    with pytest.raises(SystemExit):
        main(["--kind", "pie", "--in", "x.csv", "--out", "y.svg"])


def test_cli_normalized_flag(tmp_path, capsys):
    exit_path = _write(tmp_path, "exit_curves.csv", EXIT_CSV)
    out = tmp_path / "norm.svg"
    code = main(
        ["--kind", "exit", "--in", str(exit_path), "--out", str(out), "--normalized"]
    )
    assert code == 0
    text = out.read_text()
    # svg.fonttype "none" keeps labels as text nodes, so this is searchable
    assert "normalized" in text


def test_png_output_also_works(tmp_path):
    gp = _write(tmp_path, "goodput.csv", GOODPUT_CSV)
    out = tmp_path / "goodput.png"
    code = main(["--kind", "goodput", "--in", str(gp), "--out", str(out)])
    assert code == 0
    assert out.read_bytes().startswith(b"\x89PNG")


# ---------------------------------------------------------------------------
# separation from the simulator
# ---------------------------------------------------------------------------

def test_renderer_never_imports_the_simulator():
    package_dir = Path(qturbo_figures.__file__).parent
    pattern = re.compile(r"^\s*(?:from|import)\s+qturbo(?:[.\s]|$)", re.MULTILINE)
    for source in sorted(package_dir.rglob("*.py")):
        assert not pattern.search(source.read_text()), (
            f"{source} imports the simulator package; the renderer must "
            "consume only its files"
        )
