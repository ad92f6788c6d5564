"""
Static SVG figures of a scene and its verdict: one panel per relevant chart,
A and B hatched, walls stroked, the obstruction highlighted.
"""
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt
import numpy as np
import seaborn as sns
from sympy import lambdify

from semisep.algebra.cad2 import SAset
from semisep.core.observability import logger
from semisep.core.records import Report
from semisep.engine.scene import Scene
from semisep.geometry.resolve import Chart, ModelAtlas, projective_atlas, pullback_set, replay, total_name

sns.set_style("whitegrid")
plt.rcParams['svg.hashsalt'] = 'semisep'
plt.rcParams['figure.facecolor'] = 'white'

_A_COLOR, _B_COLOR = sns.color_palette("deep")[0], sns.color_palette("deep")[1]
_OBSTRUCTION = '#d62728'
_MAX_PANELS = 6
_GRID = 241


class SceneRenderer:
    """Draws chart panels for a scene and its report."""

    def __init__(self, scene: Scene, report: Optional[Report] = None):
        self.scene = scene
        self.report = report
        verdict = report.verdict if report is not None else None
        atlas = projective_atlas(scene)
        if verdict is not None and verdict.blowup_log:
            atlas = replay(atlas, verdict.blowup_log)
        self.atlas: ModelAtlas = atlas
        self.obstruction = verdict.obstruction if verdict is not None else None
        self.walls = {w.wall: w for w in verdict.wall_reports} if verdict is not None else {}

    # --- layout ----------------------------------------------------------

    def panels(self) -> List[str]:
        ids = ["P0"]
        if self.obstruction:
            ids += [c for c in self.obstruction.get("charts", []) if c not in ids]
        for record in self.atlas.blowups:
            ids += [c for c in record.children if c not in ids and self.atlas.chart(c).is_leaf]
        return ids[:_MAX_PANELS]

    def window(self, chart_id: str) -> Tuple[float, float, float, float]:
        if chart_id != "P0":
            return (-2.0, 2.0, -2.0, 2.0)
        cx = self.scene.complex()
        xs = [c.sample[0].approx(6) for c in cx.cells if c.dim == 0]
        ys = [c.sample[1].approx(6) for c in cx.cells if c.dim == 0]
        if not xs:
            return (-2.0, 2.0, -2.0, 2.0)
        pad = max(1.0, 0.25 * max(max(xs) - min(xs), max(ys) - min(ys)))
        return (min(xs) - pad, max(xs) + pad, min(ys) - pad, max(ys) + pad)

    # --- grids -----------------------------------------------------------

    @staticmethod
    def _values(chart: Chart, name: str, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        f = lambdify(chart.coords, chart.curves[name].as_expr(), "numpy")
        return np.asarray(f(X, Y), dtype=float) * np.ones_like(X)

    def _signs(self, chart: Chart, X: np.ndarray, Y: np.ndarray) -> Dict[str, np.ndarray]:
        signs = {name: np.sign(self._values(chart, name, X, Y)) for name in chart.curves}
        for name, prod in chart.totals.items():
            s = np.full_like(X, float(np.sign(float(prod.coefficient))))
            for factor, exponent in prod.factors:
                if exponent <= 0:
                    continue
                s = s * (signs[factor] ** exponent)
            signs[total_name(name)] = s
        return signs

    @staticmethod
    def _mask(S: SAset, signs: Dict[str, np.ndarray], shape) -> np.ndarray:
        tests = {
            ">": np.greater, ">=": np.greater_equal, "=": np.equal,
            "<=": np.less_equal, "<": np.less, "!=": np.not_equal,
        }
        out = np.zeros(shape, dtype=bool)
        for clause in S.clauses:
            part = np.ones(shape, dtype=bool)
            for cond in clause:
                part &= tests[cond.relation](signs[cond.poly_id], 0)
            out |= part
        return out

    # --- drawing ---------------------------------------------------------

    def draw_panel(self, ax, chart_id: str) -> None:
        chart = self.atlas.chart(chart_id)
        x0, x1, y0, y1 = self.window(chart_id)
        X, Y = np.meshgrid(np.linspace(x0, x1, _GRID), np.linspace(y0, y1, _GRID))
        signs = self._signs(chart, X, Y)
        for S, color, hatch, label in ((self.scene.A, _A_COLOR, '//', 'A'), (self.scene.B, _B_COLOR, '\\\\', 'B')):
            pulled = pullback_set(S, self.atlas, [chart_id])[chart_id]
            mask = self._mask(pulled, signs, X.shape)
            if mask.any():
                ax.contourf(X, Y, mask.astype(float), levels=[0.5, 1.5], colors=[color], alpha=0.3, hatches=[hatch])
                ax.plot([], [], color=color, linewidth=6, alpha=0.3, label=label)

        blocking = self.obstruction.get("wall") if self.obstruction else None
        for name in chart.curves:
            values = self._values(chart, name, X, Y)
            if not (values.min() < 0 < values.max()) and not (values == 0).any():
                continue
            highlighted = name == blocking and self.obstruction.get("kind") != "point"
            is_wall = name in self.walls
            ax.contour(
                X, Y, values, levels=[0],
                colors=[_OBSTRUCTION if highlighted else ('#333333' if is_wall else '#aaaaaa')],
                linewidths=2.5 if highlighted else (1.4 if is_wall else 0.7),
                linestyles='solid' if is_wall or highlighted else 'dashed',
            )
        if self.obstruction and self.obstruction.get("kind") == "point" and chart_id == "P0":
            entry = next((e for e in self.report.verdict.obstruction_list if e.name == blocking), None)
            if entry is not None and entry.location:
                px, py = (float(_approx(c)) for c in entry.location)
                ax.plot([px], [py], 'o', color=_OBSTRUCTION, markersize=7)

        a, b = (str(c) for c in chart.coords)
        ax.set_title(f"{chart_id} ({a}, {b})", fontsize=10)
        ax.set_xlim(x0, x1)
        ax.set_ylim(y0, y1)
        ax.set_aspect('equal', adjustable='box')
        if ax.get_legend_handles_labels()[0]:
            ax.legend(loc='upper right', fontsize=8)

    def render(self, out: Union[str, Path]) -> Path:
        ids = self.panels()
        fig, axes = plt.subplots(1, len(ids), figsize=(4.5 * len(ids), 4.5), squeeze=False)
        for ax, chart_id in zip(axes[0], ids):
            self.draw_panel(ax, chart_id)
        title = self.scene.name
        if self.report is not None and self.report.verdict is not None:
            v = self.report.verdict
            strict = "-" if v.strict is None else ("yes" if v.strict else "no")
            title += f"  generic: {'yes' if v.generic else 'no'}  strict: {strict}"
        fig.suptitle(title, fontsize=11)
        plt.tight_layout()
        out = Path(out)
        fig.savefig(out, format='svg', metadata={'Date': None})
        plt.close(fig)
        logger.info("Render", f"wrote {out}", {"panels": ids})
        return out


def _approx(text: str) -> float:
    head = text.split("~")[0]
    if "/" in head:
        num, den = head.split("/")
        return float(num) / float(den)
    return float(head)


def render_svg(scene: Scene, report: Optional[Report], out: Union[str, Path]) -> Path:
    return SceneRenderer(scene, report).render(out)
