"""Tests for the trajectory subcommand"""
# pylint: disable=missing-function-docstring
import csv
import io

import numpy as np

from tomocast.errors import StateError
from tomocast.subcommands import trajectory

from . import DATA_DIR, TestCase, parse_args


class TrajectoryTestCase(TestCase):
    """trajectory handler tests"""

    def run_handler(self, *argv: str) -> int:
        return trajectory.handler(parse_args(trajectory, argv), self.console)

    def test(self):
        status = self.run_handler(
            "-i", str(DATA_DIR / "identity.json"), "-f", "binomial", "--m", "1",
            "-t", "0:0.5:1", "--state", str(DATA_DIR / "rho0.json"),
        )  # fmt: skip

        self.assertEqual(status, 0)
        rows = list(csv.reader(io.StringIO(self.console.out.getvalue())))
        self.assertEqual(rows[0], trajectory.header(2))
        self.assertEqual(rows[0][:3], ["t", "re_0_0", "im_0_0"])
        values = np.array(rows[1:], dtype=float)
        np.testing.assert_allclose(values[:, 0], [0, 0.5, 1])
        np.testing.assert_allclose(values[:, 1], [1, 2 / 3, 1], atol=1e-12)
        np.testing.assert_allclose(values[:, 7], [0, 1 / 3, 0], atol=1e-12)
        np.testing.assert_allclose(values[:, -1], [1, 5 / 9, 1], atol=1e-12)

    def test_not_a_state(self):
        path = self.tmpdir() / "state.json"
        path.write_text("[[[1, 0], [0, 0]], [[0, 0], [1, 0]]]", encoding="utf-8")

        with self.assertRaises(StateError):
            self.run_handler(
                "-i", str(DATA_DIR / "identity.json"), "-f", "delta", "-t", "1",
                "--state", str(path),
            )  # fmt: skip

    def test_header(self):
        self.assertEqual(
            trajectory.header(1), ["t", "re_0_0", "im_0_0", "purity"]
        )
