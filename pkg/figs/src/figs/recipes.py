"""Figure recipes: declared CSV schemas, filtering, and deterministic output.

Every recipe reads one CSV artifact produced by the qthermo CLI, refuses
files whose header does not match its declared schema, and emits a PNG plus
a sidecar JSON holding exactly the plotted arrays.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "figure.figsize": (6.4, 4.2),
    "figure.dpi": 110,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 10,
}


class RecipeError(ValueError):
    pass


@dataclass(frozen=True)
class Series:
    label: str
    x: list[float]
    y: list[float]


@dataclass(frozen=True)
class FigureData:
    figure_id: str
    title: str
    xlabel: str
    ylabel: str
    series: list[Series]
    log_x: bool = False
    log_y: bool = False

    def sidecar(self) -> dict:
        return {
            "figure": self.figure_id,
            "title": self.title,
            "series": [{"label": s.label, "x": s.x, "y": s.y}
                       for s in self.series],
        }


def read_table(path: str | Path, expected_header: list[str]) -> list[dict]:
    path = Path(path)
    if not path.exists():
        raise RecipeError(f"input CSV {path} does not exist")
    rows = []
    with path.open() as fh:
        reader = csv.reader(line for line in fh if not line.startswith("#"))
        try:
            header = next(reader)
        except StopIteration:
            raise RecipeError(f"{path} is empty") from None
        if header != expected_header:
            raise RecipeError(
                f"{path} header {header} does not match the declared schema "
                f"{expected_header}")
        for raw in reader:
            if not raw:
                continue
            rows.append(dict(zip(header, raw)))
    if not rows:
        raise RecipeError(f"{path} contains a header but no data rows")
    return rows


def _f(value: str) -> float:
    return float(value)


def _group_series(rows, key_fn, x_col, y_col, label_fn) -> list[Series]:
    groups: dict = {}
    for row in rows:
        groups.setdefault(key_fn(row), []).append(row)
    out = []
    for key in sorted(groups):
        pts = sorted(((_f(r[x_col]), _f(r[y_col])) for r in groups[key]))
        out.append(Series(label=label_fn(key),
                          x=[p[0] for p in pts], y=[p[1] for p in pts]))
    return out


# ---------------------------------------------------------------------------
# recipe builders
# ---------------------------------------------------------------------------

THERMO_HEADER = ["kind", "Delta", "d", "T", "F"]
ENGINE_HEADER = ["medium", "Tc_over_Th", "kappa", "tau_h", "tau_c", "P",
                 "eta", "eta_CA", "eta_Carnot"]
DARWIN_HEADER = ["N", "f", "MI", "S_system"]
KZ_HEADER = ["tauQ", "D_exact", "D_ai", "Wex_quad", "Wex_closed"]
ANNEAL_HEADER = ["tau", "omega", "prob", "kinks", "efficacy_lhs"]


def therm1a(path) -> FigureData:
    rows = [r for r in read_table(path, THERMO_HEADER)
            if r["kind"] in ("qubit", "oscillator")]
    if not rows:
        raise RecipeError("no qubit/oscillator rows in the input")
    series = _group_series(
        rows, key_fn=lambda r: (r["kind"], _f(r["Delta"])),
        x_col="T", y_col="F",
        label_fn=lambda key: f"{key[0]}, gap {key[1]:g}")
    return FigureData("therm1a", "Thermal-probe sensitivity vs temperature",
                      "k_B T", "F", series, log_x=True)


def therm1b(path) -> FigureData:
    rows = [r for r in read_table(path, THERMO_HEADER) if r["kind"] == "ladder"]
    if not rows:
        raise RecipeError("no ladder rows in the input")
    series = _group_series(rows, key_fn=lambda r: int(r["d"]),
                           x_col="T", y_col="F",
                           label_fn=lambda d: f"d = {d}")
    return FigureData("therm1b", "Ladder-probe sensitivity by dimension",
                      "k_B T", "F", series, log_x=True)


def _efficiency_panel(path, figure_id, title) -> FigureData:
    rows = [r for r in read_table(path, ENGINE_HEADER)
            if r["medium"] == "quantum-ho"]
    if not rows:
        raise RecipeError("no quantum-ho rows in the input")
    pts = sorted((_f(r["Tc_over_Th"]), _f(r["eta"]), _f(r["eta_CA"]),
                  _f(r["eta_Carnot"])) for r in rows)
    xs = [p[0] for p in pts]
    series = [
        Series("eta at max power", xs, [p[1] for p in pts]),
        Series("Curzon-Ahlborn", xs, [p[2] for p in pts]),
        Series("Carnot", xs, [p[3] for p in pts]),
    ]
    return FigureData(figure_id, title, "T_c / T_h", "efficiency", series)


def eff_high(path) -> FigureData:
    return _efficiency_panel(path, "eff-high",
                             "Efficiency at maximal power, high-temperature medium")


def eff_deep(path) -> FigureData:
    return _efficiency_panel(path, "eff-deep",
                             "Efficiency at maximal power, deep quantum medium")


def darwin_plateau(path) -> FigureData:
    rows = read_table(path, DARWIN_HEADER)
    pts = sorted((_f(r["f"]), _f(r["MI"])) for r in rows)
    s_sys = _f(rows[0]["S_system"])
    series = [
        Series("mutual information", [p[0] for p in pts], [p[1] for p in pts]),
        Series("system entropy", [pts[0][0], pts[-1][0]], [s_sys, s_sys]),
    ]
    return FigureData("darwin-plateau", "Redundancy plateau",
                      "environment fraction", "I(S : E_f)", series)


def kz_lz(path) -> FigureData:
    rows = read_table(path, KZ_HEADER)
    pts = sorted((_f(r["tauQ"]), _f(r["D_exact"]), _f(r["D_ai"])) for r in rows)
    pts = [p for p in pts if not (math.isnan(p[1]) or math.isnan(p[2]))]
    if not pts:
        raise RecipeError("no defect-density rows in the input")
    xs = [p[0] for p in pts]
    series = [
        Series("exact (freeze-out window)", xs, [p[1] for p in pts]),
        Series("adiabatic-impulse", xs, [p[2] for p in pts]),
    ]
    return FigureData("kz-lz", "Defect density vs quench time", "tau_Q", "D",
                      series, log_x=True, log_y=True)


def anneal_dist(path) -> FigureData:
    rows = read_table(path, ANNEAL_HEADER)
    series = _group_series(rows, key_fn=lambda r: _f(r["tau"]),
                           x_col="omega", y_col="prob",
                           label_fn=lambda tau: f"tau = {tau:g}")
    return FigureData("anneal-dist", "Final-observable distributions",
                      "omega", "probability", series)


RECIPES: dict[str, Callable] = {
    "therm1a": therm1a,
    "therm1b": therm1b,
    "eff-high": eff_high,
    "eff-deep": eff_deep,
    "darwin-plateau": darwin_plateau,
    "kz-lz": kz_lz,
    "anneal-dist": anneal_dist,
}


def render(figure_id: str, csv_path: str | Path, out_path: str | Path) -> dict:
    """Render one figure and its sidecar; returns the sidecar payload."""
    if figure_id not in RECIPES:
        known = ", ".join(sorted(RECIPES))
        raise RecipeError(f"unknown figure id {figure_id!r} (known: {known})")
    data = RECIPES[figure_id](csv_path)
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)

    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        for s in data.series:
            ax.plot(s.x, s.y, marker="o", markersize=3, label=s.label)
        if data.log_x:
            ax.set_xscale("log")
        if data.log_y:
            ax.set_yscale("log")
        ax.set_title(data.title)
        ax.set_xlabel(data.xlabel)
        ax.set_ylabel(data.ylabel)
        ax.legend(fontsize=8)
        fig.tight_layout()
        fig.savefig(out_path, metadata={"Software": "figs"})
        plt.close(fig)

    sidecar = data.sidecar()
    sidecar_path = Path(str(out_path) + ".json")
    sidecar_path.write_text(json.dumps(sidecar, indent=2, sort_keys=True)
                            + "\n")
    return sidecar
