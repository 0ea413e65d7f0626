"""Tests for the dilate subcommand"""
# pylint: disable=missing-function-docstring
import json

import numpy as np

from tomocast.errors import KrausError
from tomocast.numkernel import unitarity_residual
from tomocast.subcommands import dilate
from tomocast.utils import decode_matrix

from . import DATA_DIR, TestCase, parse_args


class DilateTestCase(TestCase):
    """dilate handler tests"""

    def test(self):
        args = parse_args(
            dilate, ["-k", str(DATA_DIR / "amplitude_damping.json"), "--seed", "1"]
        )

        status = dilate.handler(args, self.console)

        self.assertEqual(status, 0)
        unitary = decode_matrix(json.loads(self.console.out.getvalue()))
        self.assertEqual(unitary.shape, (4, 4))
        self.assertLess(unitarity_residual(unitary), 1e-10)
        self.assert_matrix_equal(unitary[:, 0], [1, 0, 0, 0])
        self.assert_matrix_equal(unitary[:, 2], [0, np.sqrt(0.5), np.sqrt(0.5), 0])

    def test_incomplete(self):
        args = parse_args(dilate, ["-k", str(DATA_DIR / "incomplete_kraus.json")])

        with self.assertRaises(KrausError):
            dilate.handler(args, self.console)

    def test_same_seed_same_output(self):
        argv = ["-k", str(DATA_DIR / "amplitude_damping.json"), "--seed", "7"]
        dilate.handler(parse_args(dilate, argv), self.console)
        first = self.console.out.getvalue()
        self.setUp()

        dilate.handler(parse_args(dilate, argv), self.console)

        self.assertEqual(self.console.out.getvalue(), first)
