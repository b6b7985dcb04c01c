"""Tests for the built-in SVG curve renderer."""

import numpy as np
import pytest

from latticesep.svgplot import CurveSeries, _nice_step, render_svg, write_svg


def decade_series(label="sep", points=5):
    x = np.arange(points, dtype=float)
    y = 10.0 ** (-x - 1)
    return CurveSeries(label=label, x=x, y=y)


class TestRenderSvg:
    def test_basic_document_structure(self):
        svg = render_svg([decade_series()], title="demo plot")
        assert svg.startswith("<svg")
        assert svg.rstrip().endswith("</svg>")
        assert "demo plot" in svg
        assert "<polyline" in svg
        assert "SNR (dB)" in svg
        assert "symbol error probability" in svg

    def test_legend_lists_every_series(self):
        series = [decade_series("first"), decade_series("second")]
        svg = render_svg(series)
        assert "first" in svg
        assert "second" in svg

    def test_decade_gridline_labels(self):
        svg = render_svg([decade_series(points=4)])
        for exponent in (-1, -4):
            assert f"1e{exponent}" in svg

    def test_nonpositive_points_are_dropped(self):
        x = np.array([0.0, 1.0, 2.0, 3.0, 4.0])
        y = np.array([1e-2, 0.0, 1e-3, -1.0, 1e-4])
        svg = render_svg([CurveSeries(label="gappy", x=x, y=y)])
        # zeros/negatives split the curve into segments; nothing crashes
        assert svg.count("<polyline") + svg.count("<circle") >= 2

    def test_isolated_point_becomes_circle(self):
        x = np.array([0.0, 1.0, 2.0])
        y = np.array([0.0, 1e-3, 0.0])
        svg = render_svg([CurveSeries(label="dot", x=x, y=y)])
        assert '<circle cx=' in svg

    def test_all_nonpositive_raises(self):
        x = np.array([0.0, 1.0])
        y = np.array([0.0, -2.0])
        with pytest.raises(ValueError, match="no positive values"):
            render_svg([CurveSeries(label="empty", x=x, y=y)])

    def test_mismatched_lengths_rejected(self):
        with pytest.raises(ValueError, match="matching"):
            render_svg([CurveSeries(label="bad", x=np.arange(3.0), y=np.arange(4.0))])

    def test_labels_are_xml_escaped(self):
        svg = render_svg([decade_series("a<b&c")], title="x<y")
        assert "a&lt;b&amp;c" in svg
        assert "x&lt;y" in svg
        assert "a<b" not in svg

    def test_flat_series_still_renders(self):
        x = np.arange(4.0)
        y = np.full(4, 0.25)
        svg = render_svg([CurveSeries(label="flat", x=x, y=y)])
        assert "<polyline" in svg


class TestNiceStep:
    def test_steps_are_from_125_family(self):
        for span in (0.7, 3.0, 24.0, 47.0, 300.0):
            step = _nice_step(span)
            mantissa = step / 10.0 ** np.floor(np.log10(step))
            assert pytest.approx(mantissa) in (1.0, 2.0, 5.0, 10.0)

    def test_tick_count_is_reasonable(self):
        for span in (1.0, 10.0, 24.0, 100.0):
            step = _nice_step(span, target=6)
            assert 2 <= span / step <= 12


class TestWriteSvg:
    def test_write_round_trip(self, tmp_path):
        path = tmp_path / "plot.svg"
        write_svg(path, [decade_series()], title="saved")
        text = path.read_text()
        assert text.startswith("<svg")
        assert "saved" in text
