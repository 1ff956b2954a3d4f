"""Result export: CSV tables, plot series assembly, and static images.

Series assembly is pure data; the image renderer at the bottom is the only
part that touches matplotlib, so a different backend can consume the same
``PlotSeries`` records.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from .engine import SNAPSHOT_FIELDS, SimulationResult
from .models import get_model

CSV_HEADER = (
    "group",
    "phase",
    "series",
    "index",
    "V",
    "V_E",
    "V_I",
    "alpha",
    "alpha_mack",
    "alpha_hall",
)

_SNAPSHOT_INDEX = {name: i for i, name in enumerate(SNAPSHOT_FIELDS)}


@dataclass
class ExportTable:
    header: tuple[str, ...]
    rows: list[tuple[str, ...]]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header)
        writer.writerows(self.rows)
        return buf.getvalue()


def _fmt(value: float) -> str:
    # repr() is shortest-round-trip for doubles; parsing the cell recovers
    # the exact value.
    return repr(value)


def export_csv(result: SimulationResult) -> ExportTable:
    """One row per (group, phase, series, appearance index).

    Quantities the model does not maintain are left empty, never zero.
    """
    tracked = get_model(result.model_name).tracked_fields
    rows: list[tuple[str, ...]] = []
    for group in result.groups:
        for phase_no, phase in enumerate(group.phases, start=1):
            for name in sorted(phase.cs_series):
                for index, snap in enumerate(phase.cs_series[name], start=1):
                    cells = [
                        _fmt(snap[_SNAPSHOT_INDEX[f]]) if f in tracked else ""
                        for f in SNAPSHOT_FIELDS
                    ]
                    rows.append((group.name, str(phase_no), name, str(index), *cells))
            for name in sorted(phase.compound_series):
                for index, value in enumerate(phase.compound_series[name], start=1):
                    rows.append(
                        (group.name, str(phase_no), name, str(index), _fmt(value), "", "", "", "", "")
                    )
            for name in sorted(phase.trial_type_series):
                for index, value in enumerate(phase.trial_type_series[name], start=1):
                    rows.append(
                        (group.name, str(phase_no), name, str(index), _fmt(value), "", "", "", "", "")
                    )
    return ExportTable(header=CSV_HEADER, rows=rows)


@dataclass
class PlotSeries:
    label: str
    kind: str  # "cs" | "configural" | "compound" | "trial-type"
    quantity: str  # "V" | "alpha" | "alpha_mack" | "alpha_hall"
    values: list[float]


@dataclass
class PlotOptions:
    plot_alpha: bool = False
    plot_macknhall: bool = False
    plot_trial_type_data: bool = False
    separate_legend: bool = False
    show_title: bool = False
    hidden: frozenset[str] = frozenset()
    width: float = 8.0
    height: float = 5.0
    dpi: int = 100
    groups: tuple[str, ...] | None = None  # None = all
    stimuli: tuple[str, ...] | None = None  # None = all


def assemble_phase_series(
    result: SimulationResult, phase_index: int, options: PlotOptions
) -> list[PlotSeries]:
    """Series for one phase (0-based), across the selected groups."""
    multi_group = len(result.groups) > 1
    out: list[PlotSeries] = []

    def label_for(group: str, name: str) -> str:
        return f"{group}: {name}" if multi_group else name

    for group in result.groups:
        if options.groups is not None and group.name not in options.groups:
            continue
        if phase_index >= len(group.phases):
            continue
        phase = group.phases[phase_index]
        for name in sorted(phase.cs_series):
            if options.stimuli is not None and name not in options.stimuli:
                continue
            kind = "configural" if name.startswith("q(") else "cs"
            series = phase.cs_series[name]
            if options.plot_alpha:
                out.append(
                    PlotSeries(label_for(group.name, name), kind, "alpha",
                               [s[_SNAPSHOT_INDEX["alpha"]] for s in series])
                )
            elif options.plot_macknhall:
                for quantity in ("alpha_mack", "alpha_hall"):
                    out.append(
                        PlotSeries(f"{label_for(group.name, name)} ({quantity})", kind,
                                   quantity, [s[_SNAPSHOT_INDEX[quantity]] for s in series])
                    )
            else:
                out.append(
                    PlotSeries(label_for(group.name, name), kind, "V",
                               [s[0] for s in series])
                )
        if not options.plot_alpha and not options.plot_macknhall:
            for name in sorted(phase.compound_series):
                if options.stimuli is not None and name not in options.stimuli:
                    continue
                out.append(
                    PlotSeries(label_for(group.name, name), "compound", "V",
                               list(phase.compound_series[name]))
                )
            if options.plot_trial_type_data:
                for name in sorted(phase.trial_type_series):
                    out.append(
                        PlotSeries(label_for(group.name, name), "trial-type", "V",
                                   list(phase.trial_type_series[name]))
                    )
    return out


def render_phase_plots(
    result: SimulationResult,
    base_path: str,
    options: PlotOptions | None = None,
    image_format: str = "png",
) -> list[str]:
    """Write one image per phase named ``base_1.png`` ... ``base_n.png``;
    with a separate legend, also ``base_legend.png``.  Returns the paths."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    options = options or PlotOptions()
    if options.width <= 0 or options.height <= 0 or options.dpi <= 0:
        raise ValueError("plot dimensions and dpi must be positive")
    phase_count = max((len(g.phases) for g in result.groups), default=0)
    paths: list[str] = []
    legend_entries: dict[str, object] = {}

    for phase_index in range(phase_count):
        series = assemble_phase_series(result, phase_index, options)
        fig, ax = plt.subplots(figsize=(options.width, options.height), dpi=options.dpi)
        for s in series:
            if s.label in options.hidden:
                continue
            x = range(1, len(s.values) + 1)
            (line,) = ax.plot(x, s.values, marker="o", markersize=3, label=s.label)
            legend_entries.setdefault(s.label, line)
        ax.set_xlabel("Trial")
        ax.set_ylabel("alpha" if options.plot_alpha or options.plot_macknhall
                      else "Associative strength")
        if options.show_title:
            ax.set_title(f"Phase {phase_index + 1}")
        if not options.separate_legend and legend_entries:
            ax.legend(fontsize="small")
        path = f"{base_path}_{phase_index + 1}.{image_format}"
        fig.savefig(path)
        plt.close(fig)
        paths.append(path)

    if options.separate_legend:
        fig = plt.figure(figsize=(options.width, options.height), dpi=options.dpi)
        fig.legend(
            legend_entries.values(), legend_entries.keys(), loc="center", fontsize="small"
        )
        path = f"{base_path}_legend.{image_format}"
        fig.savefig(path)
        plt.close(fig)
        paths.append(path)
    return paths
