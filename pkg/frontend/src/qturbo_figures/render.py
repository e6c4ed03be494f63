"""Figure builders.

Every coordinate drawn here is taken verbatim from an input file (or is
the constant origin of a trajectory staircase); this module never
recomputes capacities, error rates, or transfer curves.  Rendering is
deterministic: a fixed SVG hash salt, text kept as text, and no date
metadata make repeated runs byte-identical.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams.update(
    {
        "svg.hashsalt": "qturbo-figures",
        "svg.fonttype": "none",
        "figure.figsize": (7.0, 5.0),
        "figure.dpi": 100,
        "savefig.dpi": 100,
    }
)

from matplotlib.figure import Figure  # noqa: E402  (backend must be set first)

from . import csvio
from .csvio import InputError, Table

KINDS = ("exit", "qber", "goodput")


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    inputs: tuple[Path, ...]
    out: Path
    normalized: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; choose from {KINDS}")
        if not self.inputs:
            raise ValueError("at least one input file is required")


@dataclass
class RenderResult:
    figure: Figure
    notices: list[str] = field(default_factory=list)


def _floats(rows, *columns):
    return [tuple(float(row[c]) for c in columns) for row in rows]


def _rate_sort_key(label: str):
    try:
        return (0, Fraction(label))
    except (ValueError, ZeroDivisionError):
        return (1, label)


def _rate_value(label: str, context: str) -> float:
    try:
        return float(Fraction(label))
    except (ValueError, ZeroDivisionError):
        raise InputError(f"{context}: cannot read {label!r} as a rate") from None


def _new_axes(title: str, xlabel: str, ylabel: str):
    fig = Figure()
    ax = fig.add_subplot()
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    return fig, ax


# ---------------------------------------------------------------------------
# exit
# ---------------------------------------------------------------------------

def _render_exit(grouped: dict[str, list[Table]], normalized: bool) -> RenderResult:
    tables = csvio.require(grouped, csvio.EXIT, "exit")
    xcol, ycol = ("I_A_norm", "I_E_norm") if normalized else ("I_A", "I_E")
    full = 1.0 if normalized else 2.0
    unit = "normalized" if normalized else "bits"

    fig, ax = _new_axes(
        "Extrinsic information transfer",
        f"a priori information into inner decoder ({unit})",
        f"extrinsic information out of inner decoder ({unit})",
    )

    curves: dict[tuple[str, str], list[dict[str, str]]] = {}
    for table in tables:
        for row in table.rows:
            curves.setdefault((row["curve"], row["p_or_rate"]), []).append(row)
    if not curves:
        raise InputError("the exit inputs contain no curve rows")

    inner_keys = sorted(
        (k for k in curves if k[0] == "inner"), key=lambda k: _rate_sort_key(k[1])
    )
    outer_keys = sorted(
        (k for k in curves if k[0] == "outer"), key=lambda k: _rate_sort_key(k[1])
    )
    for key in inner_keys:
        pts = sorted(_floats(curves[key], xcol, ycol))
        ax.plot(*zip(*pts), marker="o", markersize=3, label=f"inner, p={key[1]}")
    for key in outer_keys:
        pts = sorted(_floats(curves[key], xcol, ycol))
        # The outer curve lives on swapped axes: its input information is
        # read off the y axis and its output off the x axis.
        ax.plot(
            [e for _, e in pts],
            [a for a, _ in pts],
            marker="s",
            markersize=3,
            linestyle="--",
            label=f"outer, rate {key[1]}",
        )

    for table in grouped.get(csvio.TRAJECTORY, []):
        icol = "I_norm" if normalized else "I"
        x, y = 0.0, 0.0
        xs, ys = [x], [y]
        for row in sorted(
            table.rows, key=lambda r: (float(r["iteration"]), r["stage"] != "inner")
        ):
            value = float(row[icol])
            if row["stage"] == "inner":
                y = value
            else:
                x = value
            xs.append(x)
            ys.append(y)
        ax.plot(xs, ys, color="0.4", linewidth=1.0, label="decoding trajectory")

    ax.set_xlim(0.0, full)
    ax.set_ylim(0.0, full)
    ax.legend(fontsize=8)
    return RenderResult(fig)


# ---------------------------------------------------------------------------
# qber
# ---------------------------------------------------------------------------

def _capacity_cutoff(bound: Table, rate_label: str) -> float | None:
    """Largest tabulated p whose tabulated capacity still reaches the rate.

    A pure lookup in the capacity table; nothing is recomputed.
    """
    rate_value = _rate_value(rate_label, "threshold marker")
    best = None
    for p, capacity in _floats(bound.rows, "p", "capacity"):
        if capacity >= rate_value and (best is None or p > best):
            best = p
    return best


def _render_qber(grouped: dict[str, list[Table]], normalized: bool) -> RenderResult:
    tables = csvio.require(grouped, csvio.SWEEP, "qber")
    notices = []

    curves: dict[tuple[str, str], list[tuple[float, float]]] = {}
    all_p: list[float] = []
    for table in tables:
        dropped = 0
        for row in table.rows:
            p, qber = float(row["p"]), float(row["qber"])
            all_p.append(p)
            if qber == 0.0:
                dropped += 1
                continue
            curves.setdefault((row["rate"], row["k"]), []).append((p, qber))
        if dropped:
            notices.append(
                f"note: dropped {dropped} zero-QBER row(s) from {table.path} "
                "(a log axis cannot show zero)"
            )
    if not curves:
        raise InputError(
            "no plottable rows remain for the qber figure "
            "(every row had QBER zero or the sweeps were empty)"
        )

    fig, ax = _new_axes(
        "Residual qubit error rate", "depolarizing probability p", "QBER"
    )
    ax.set_yscale("log")
    for key in sorted(curves, key=lambda k: (_rate_sort_key(k[0]), float(k[1]))):
        pts = sorted(curves[key])
        ax.plot(*zip(*pts), marker="o", label=f"rate {key[0]}, k={key[1]}")

    uncoded = sorted(set(all_p) - {0.0})
    if uncoded:
        ax.plot(uncoded, uncoded, color="0.3", linestyle=":", label="uncoded (QBER = p)")

    bounds = grouped.get(csvio.BOUND, [])
    if bounds:
        for rate_label in sorted({k[0] for k in curves}, key=_rate_sort_key):
            cutoff = _capacity_cutoff(bounds[0], rate_label)
            if cutoff is not None:
                ax.axvline(cutoff, linestyle="--", linewidth=0.8, color="0.5")
                ax.annotate(
                    f"p* ({rate_label})",
                    (cutoff, 1.0),
                    xycoords=("data", "axes fraction"),
                    textcoords="offset points",
                    xytext=(2, -10),
                    fontsize=7,
                )
    else:
        notices.append(
            "note: no capacity table among the inputs; threshold markers omitted"
        )

    ax.legend(fontsize=8)
    return RenderResult(fig, notices)


# ---------------------------------------------------------------------------
# goodput
# ---------------------------------------------------------------------------

def _render_goodput(grouped: dict[str, list[Table]], normalized: bool) -> RenderResult:
    tables = csvio.require(grouped, csvio.GOODPUT, "goodput")
    notices = []

    curves: dict[str, list[tuple[float, float]]] = {}
    for table in tables:
        for row in table.rows:
            curves.setdefault(row["rate"], []).append(
                (float(row["p"]), float(row["goodput"]))
            )
    if not any(curves.values()):
        raise InputError("the goodput inputs contain no data rows")

    fig, ax = _new_axes(
        "Goodput and rate switching",
        "depolarizing probability p",
        "goodput (information qubits per channel use)",
    )
    for rate_label in sorted(curves, key=_rate_sort_key):
        pts = sorted(curves[rate_label])
        ax.plot(*zip(*pts), marker="o", label=f"rate {rate_label}")

    bounds = grouped.get(csvio.BOUND, [])
    if bounds:
        pts = sorted(_floats(bounds[0].rows, "p", "capacity"))
        ax.plot(*zip(*pts), color="0.3", linestyle="--", label="hashing bound")

    for table in grouped.get(csvio.SWITCH, []):
        payload = csvio.switch_payload(table)
        # prefer the explicit QBER-target requirement, but fall back to any
        # requirement that actually produced intervals (the legend names it)
        ranked = sorted(
            payload["requirements"],
            key=lambda r: not str(r.get("requirement", "")).startswith("qber<="),
        )
        chosen = next((r for r in ranked if r.get("intervals")), None)
        if chosen is None:
            notices.append(
                f"note: {table.path} has no switching intervals; staircase omitted"
            )
            continue
        intervals = chosen["intervals"]
        label = f"selected rate ({chosen['requirement']})"
        for interval in intervals:
            ax.hlines(
                _rate_value(str(interval["rate"]), f"switch table {table.path}"),
                float(interval["p_low"]),
                float(interval["p_high"]),
                color="tab:red",
                linewidth=2.0,
                label=label,
            )
            label = None

    ax.set_ylim(bottom=0.0)
    ax.legend(fontsize=8)
    return RenderResult(fig, notices)


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

_RENDERERS = {
    "exit": _render_exit,
    "qber": _render_qber,
    "goodput": _render_goodput,
}


def build_figure(spec: FigureSpec) -> RenderResult:
    """Read the inputs and build the requested figure (not yet saved)."""
    grouped = csvio.read_inputs(list(spec.inputs))
    result = _RENDERERS[spec.kind](grouped, spec.normalized)
    if spec.normalized and spec.kind != "exit":
        result.notices.append(
            f"note: --normalized has no effect on the {spec.kind} figure"
        )
    return result


def save_figure(figure: Figure, out: str | Path) -> Path:
    """Write the figure; the format follows the file extension."""
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    fmt = out.suffix.lstrip(".").lower() or "svg"
    kwargs = {"metadata": {"Date": None}} if fmt == "svg" else {}
    figure.savefig(out, format=fmt, **kwargs)
    return out


def render(spec: FigureSpec) -> RenderResult:
    """Build and save in one step; returns the result with its notices."""
    result = build_figure(spec)
    save_figure(result.figure, spec.out)
    return result
