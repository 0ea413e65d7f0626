"""Tests for the render module"""
# pylint: disable=missing-function-docstring
import json

import numpy as np

from tomocast import rational, render, snapshot
from tomocast.errors import KrausError

from . import TestCase, load_data


class ToJsonTestCase(TestCase):
    """to_json() tests"""

    def test_numpy_values(self):
        data = {
            "b": np.float64(0.5),
            "a": np.array([1, 2]),
            "m": np.array([[1j]]),
            "z": 1 + 2j,
        }

        self.assertEqual(
            render.to_json(data),
            '{"a": [1, 2], "b": 0.5, "m": [[[0.0, 1.0]]], "z": [1.0, 2.0]}',
        )

    def test_unsupported(self):
        with self.assertRaises(TypeError):
            render.to_json({"x": object()})

    def test_matrix_json(self):
        self.assertEqual(
            json.loads(render.matrix_json(np.eye(1) + 0j)), [[[1.0, 0.0]]]
        )


class ToCsvTestCase(TestCase):
    """to_csv() tests"""

    def test(self):
        text = render.to_csv(["t", "x"], [(0, 0.1), (1, 1 / 3)])

        self.assertEqual(text, "t,x\n0.0,0.1\n1.0,0.3333333333333333\n")


class EmitTestCase(TestCase):
    """emit() tests"""

    def test_console(self):
        render.emit(self.console, "[not markup]\n")

        self.assertEqual(self.console.out.getvalue(), "[not markup]\n")

    def test_file(self):
        path = self.tmpdir() / "out.txt"

        render.emit(self.console, "data", path)

        self.assertEqual(path.read_text(encoding="utf-8"), "data\n")
        self.assertEqual(self.console.out.getvalue(), "")


class FormatTestCase(TestCase):
    """format_number(), format_status() and print_warnings() tests"""

    def test_format_number(self):
        self.assertEqual(render.format_number(np.pi), "[number]3.14159[/number]")

    def test_format_status(self):
        self.assertEqual(render.format_status(True), "[ok]ok[/ok]")
        self.assertEqual(render.format_status(False), "[fail]FAIL[/fail]")
        self.assertEqual(render.format_status(False, no="none"), "[fail]none[/fail]")

    def test_print_diagnostic(self):
        render.print_diagnostic(self.console, KrausError(0.5), operators=3)

        self.assertEqual(
            json.loads(self.console.err.getvalue()),
            {
                "error": "KrausError",
                "message": "Kraus operators are not complete (residual 5.000e-01)",
                "operators": 3,
                "residual": 0.5,
            },
        )

    def test_print_warnings(self):
        render.print_warnings(self.console, ["first", "second"])

        self.assertEqual(
            self.console.err.getvalue(), "warning: first\nwarning: second\n"
        )


class BlockTableTestCase(TestCase):
    """block_table() tests"""

    def test(self):
        tomography = snapshot.load_tomography(load_data("inconsistent.json"))
        decomp = snapshot.shared_eigenspaces(tomography)
        report = snapshot.validate_consistency(
            tomography, decomp, rational.rationalize(tomography.times)
        )

        self.console.out.print(render.block_table(decomp, report))

        output = self.console.out.getvalue()
        self.assertIn("2 Blocks", output)
        self.assertIn("none", output)
        self.assertIn("+3.141593", output)
