"""CSV, JSON and SVG writers shared by the command-line tools.

Floats are written with 17 significant digits so values round-trip exactly,
and every artifact is produced deterministically from its config.
"""

from __future__ import annotations

import json
import math
import os

import numpy as np

from .tracker import Trajectory


def format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def write_csv(path, header, rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_value(v) for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def trajectory_rows(traj: Trajectory):
    for t in range(traj.iterates.shape[0]):
        yield [t, *traj.iterates[t], *traj.optima[t], traj.errors[t]]


def write_trajectory_csv(path, traj: Trajectory, method_label: str | None = None) -> None:
    n = traj.iterates.shape[1]
    header = (
        ["t"]
        + [f"x_{i + 1}" for i in range(n)]
        + [f"xstar_{i + 1}" for i in range(n)]
        + ["err"]
    )
    rows = trajectory_rows(traj)
    if method_label is not None:
        header = header + ["method"]
        rows = ([*row, method_label] for row in rows)
    write_csv(path, header, rows)


def write_errors_csv(path, trajectories: dict) -> None:
    methods = list(trajectories)
    length = max(tr.errors.size for tr in trajectories.values())
    header = ["t"] + [f"err_{m}" for m in methods]

    def rows():
        for t in range(length):
            row = [t]
            for m in methods:
                errs = trajectories[m].errors
                row.append(errs[t] if t < errs.size else "")
            yield row

    write_csv(path, header, rows())


def sanitize_json(obj):
    """Replace non-finite floats with None so the JSON stays strict."""
    if isinstance(obj, dict):
        return {k: sanitize_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [sanitize_json(v) for v in obj]
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else None
    if isinstance(obj, np.ndarray):
        return sanitize_json(obj.tolist())
    return obj


def write_json(path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(sanitize_json(payload), fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_config_echo(outdir, command: str, options: dict) -> str:
    """Drop the resolved options beside the outputs for exact reruns."""
    path = os.path.join(outdir, "config_echo.json")
    write_json(path, {"command": command, "options": options})
    return path


def load_config(path) -> tuple[str, dict]:
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    if "command" not in payload or "options" not in payload:
        raise ValueError("config must carry 'command' and 'options'")
    return payload["command"], payload["options"]


def svg_line_chart(
    path,
    xs,
    series: dict,
    ylabel: str,
    xlabel: str = "t",
    title: str | None = None,
    ylog: bool = False,
) -> None:
    """Single self-contained SVG line chart with no external assets."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    with plt.rc_context({"svg.hashsalt": "ramptrack", "svg.fonttype": "path"}):
        fig, ax = plt.subplots(figsize=(7.0, 4.2))
        for name, ys in series.items():
            ys = np.asarray(ys, dtype=float)
            if ylog:
                ys = np.maximum(ys, 1e-18)  # keep zeros plottable on a log axis
            ax.plot(np.asarray(xs)[: ys.size], ys, label=name, linewidth=1.2)
        if ylog:
            ax.set_yscale("log")
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        ax.legend(loc="best", fontsize=9)
        ax.grid(True, alpha=0.3)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
