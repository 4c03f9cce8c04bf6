"""The SVG writers produce well-formed documents."""

import math
import xml.etree.ElementTree as ET

from anmsort.experiments import SweepCell, WindowPoint
from anmsort.plots import heatmap_svg, line_plot_svg


def test_line_plot_well_formed():
    curves = {
        "r2sr": [WindowPoint(0.3, 20.0, 18.0, 22.0, 5), WindowPoint(0.4, 15.0, 14.0, 16.0, 3)],
        "random": [WindowPoint(0.3, 30.0, 30.0, 30.0, 1)],
    }
    root = ET.fromstring(line_plot_svg(curves, "a <title> & more"))
    assert root.tag.endswith("svg")
    assert len(root.findall("{http://www.w3.org/2000/svg}polyline")) == 2


def test_empty_line_plot():
    ET.fromstring(line_plot_svg({"x": []}))


def test_heatmap_well_formed():
    cells = [
        SweepCell("er", g, t, 1.0, 3, v)
        for g, t, v in [(1.0, 0.0, 0.6), (1.0, 1.0, 0.8), (2.0, 0.0, math.nan), (2.0, 1.0, 0.9)]
    ]
    root = ET.fromstring(heatmap_svg(cells, "v_r2", "grid"))
    rects = root.findall("{http://www.w3.org/2000/svg}rect")
    assert len(rects) == 2 + 4  # background, frame, four cells
    assert "n/a" in heatmap_svg(cells)
