"""Figures: the command/mode timeline of one run and the landing-error spread of a batch."""
from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .controller import Mode  # noqa: E402
from .runner import TelemetryRow  # noqa: E402

MODE_ORDER = [m.value for m in Mode]
_COLORS = plt.get_cmap("tab20").colors


def _mode_spans(rows: Sequence[TelemetryRow]):
    start = 0
    for i in range(1, len(rows) + 1):
        if i == len(rows) or rows[i].state != rows[start].state:
            end_t = rows[i].t if i < len(rows) else rows[-1].t
            yield rows[start].state, rows[start].t, end_t
            start = i


def plot_timeline(rows: Sequence[TelemetryRow], out: str | Path, title: str = "") -> Path:
    """Control signals over time with the active mode shaded behind each panel."""
    if not rows:
        raise ValueError("no telemetry rows to plot")
    t = [r.t for r in rows]
    panels = [
        ("velocity (m/s)", [("forward", [r.forward_mps for r in rows]),
                            ("right", [r.right_mps for r in rows]),
                            ("up", [r.up_mps for r in rows])]),
        ("yaw rate (deg/s)", [("yaw rate", [r.yaw_rate_dps for r in rows])]),
        ("gimbal (deg)", [("pan", [r.gimbal_pan_deg for r in rows]),
                          ("tilt", [r.gimbal_tilt_deg for r in rows])]),
        ("zoom / S_p", [("zoom", [r.zoom for r in rows]),
                        ("S_p %", [r.s_p_percent for r in rows])]),
        ("altitude (m)", [("z", [r.z_m for r in rows])]),
    ]
    fig, axes = plt.subplots(len(panels), 1, figsize=(12, 9), sharex=True)
    handles = {}
    for ax, (label, series) in zip(axes, panels):
        for mode, t0, t1 in _mode_spans(rows):
            color = _COLORS[MODE_ORDER.index(mode) % len(_COLORS)] if mode in MODE_ORDER else "0.9"
            handles[mode] = ax.axvspan(t0, t1, color=color, alpha=0.25, lw=0)
        for name, ys in series:
            ax.plot(t, ys, lw=1.0, label=name)
        ax.set_ylabel(label, fontsize=8)
        ax.grid(True, lw=0.3)
        ax.legend(loc="upper right", fontsize=7)
    ordered = [m for m in MODE_ORDER if m in handles]
    fig.legend([handles[m] for m in ordered], ordered, loc="center right", fontsize=8, title="mode")
    axes[-1].set_xlabel("t (s)")
    if title:
        axes[0].set_title(title)
    fig.subplots_adjust(left=0.07, right=0.82, top=0.95, bottom=0.06, hspace=0.15)
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=110)
    plt.close(fig)
    return out


def plot_errors(errors_by_pad: dict[str, list[float]], out: str | Path) -> Path:
    fig, ax = plt.subplots(figsize=(6, 4))
    names = sorted(errors_by_pad)
    ax.boxplot([errors_by_pad[n] for n in names], tick_labels=names)
    ax.set_ylabel("touchdown error (m)")
    ax.grid(True, axis="y", lw=0.3)
    fig.tight_layout()
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=110)
    plt.close(fig)
    return out
