"""
SVG line charts for scaling studies, drawn with reportlab graphics.
"""
import logging
import math
import os

from reportlab.graphics import renderSVG
from reportlab.graphics.charts.legends import Legend
from reportlab.graphics.charts.lineplots import LinePlot
from reportlab.graphics.shapes import Drawing, String
from reportlab.graphics.widgets.markers import makeMarker
from reportlab.lib import colors

logger = logging.getLogger(__name__)

WIDTH, HEIGHT = 480, 320
PALETTE = [colors.HexColor(c) for c in ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")]


class ChartService:
    """Line charts with log10 axes; every series is a list of (x, y) with positive entries."""

    @staticmethod
    def _log_series(points):
        return [(math.log10(x), math.log10(y)) for x, y in points if x > 0 and y > 0]

    @staticmethod
    def line_chart(series, title, x_label, y_label, out_dir, filename):
        """
        Draw a log-log line chart.

        Args:
            series: Mapping of label -> list of (x, y) pairs
            title: Chart title
            x_label: Horizontal axis label, shown as log10(x_label)
            y_label: Vertical axis label, shown as log10(y_label)
            out_dir: Output directory, created if missing
            filename: SVG file name

        Returns:
            str: Path of the written file, or None when nothing is plottable
        """
        labels = sorted(series)
        data = [ChartService._log_series(series[label]) for label in labels]
        kept = [(label, points) for label, points in zip(labels, data) if len(points) >= 2]
        if not kept:
            logger.warning(f"Chart '{title}' skipped: no series with two positive points")
            return None

        drawing = Drawing(WIDTH, HEIGHT)
        plot = LinePlot()
        plot.x, plot.y = 60, 50
        plot.width, plot.height = WIDTH - 180, HEIGHT - 100
        plot.data = [points for _, points in kept]
        for i in range(len(kept)):
            plot.lines[i].strokeColor = PALETTE[i % len(PALETTE)]
            plot.lines[i].symbol = makeMarker("Circle", size=3)
        xs = [x for _, points in kept for x, _ in points]
        ys = [y for _, points in kept for _, y in points]
        pad_x = max(0.05, 0.05 * (max(xs) - min(xs)))
        pad_y = max(0.05, 0.05 * (max(ys) - min(ys)))
        plot.xValueAxis.valueMin, plot.xValueAxis.valueMax = min(xs) - pad_x, max(xs) + pad_x
        plot.yValueAxis.valueMin, plot.yValueAxis.valueMax = min(ys) - pad_y, max(ys) + pad_y
        plot.xValueAxis.labelTextFormat = "%.2f"
        plot.yValueAxis.labelTextFormat = "%.2f"
        drawing.add(plot)

        drawing.add(String(WIDTH / 2.0, HEIGHT - 25, title, textAnchor="middle", fontSize=12))
        drawing.add(String(plot.x + plot.width / 2.0, 15, f"log10({x_label})", textAnchor="middle", fontSize=9))
        drawing.add(String(15, plot.y + plot.height / 2.0, f"log10({y_label})", textAnchor="middle", fontSize=9))

        legend = Legend()
        legend.x, legend.y = plot.x + plot.width + 15, plot.y + plot.height
        legend.fontSize = 8
        legend.colorNamePairs = [(PALETTE[i % len(PALETTE)], label) for i, (label, _) in enumerate(kept)]
        drawing.add(legend)

        os.makedirs(out_dir, exist_ok=True)
        path = os.path.join(out_dir, filename)
        renderSVG.drawToFile(drawing, path)
        logger.info(f"Wrote chart {path}")
        return path
