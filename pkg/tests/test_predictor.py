"""Tests for the predictor module"""
# pylint: disable=missing-function-docstring
import numpy as np

from tomocast import predictor, snapshot
from tomocast.distributions import Family, PriorDistribution
from tomocast.errors import DimensionError, StateError
from tomocast.numkernel import expm_i_herm, hs_norm

from . import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    TestCase,
    consistent_set,
    qubit_channel,
    random_consistent_set,
    random_density,
    random_hermitian,
    random_matrix,
)

BINOMIAL_1 = PriorDistribution(Family.BINOMIAL, m=1)
CLOSED_FORM_PRIORS = (
    PriorDistribution(Family.EXPONENTIAL, a=0.7),
    PriorDistribution(Family.CAUCHY, a=0.5),
    PriorDistribution(Family.BINOMIAL, m=2),
)
CLOSED_FORM_GRID = np.linspace(0, 2 * np.pi, 200)
RANDOM_PRIORS = (
    PriorDistribution(Family.EXPONENTIAL, a=0.5),
    PriorDistribution(Family.TRUNCATED_UNIFORM, m=2),
    PriorDistribution(Family.SEMICIRCULAR, m=3),
    PriorDistribution(Family.CAUCHY, a=0.5),
    PriorDistribution(Family.BINOMIAL, m=2),
    PriorDistribution(Family.NORMAL, a=0.3),
)


def scalar_channel(dist: PriorDistribution) -> predictor.PredictedChannel:
    """Qubit channel whose propagators are all proportional to 𝟙"""
    tomography = snapshot.synthesize_tomography(0.3 * np.eye(2) + 0j, [1.0, 2.0])

    return predictor.build_channel(tomography, dist)


class BuildChannelTestCase(TestCase):
    """build_channel() tests"""

    def test_qubit(self):
        channel = qubit_channel(0.4, BINOMIAL_1)

        self.assertEqual(channel.dim, 2)
        self.assertEqual(channel.gamma, 1.0)
        self.assertEqual(channel.warnings, ())

    def test_irrational_times(self):
        channel = qubit_channel(0.4, BINOMIAL_1, times=(1.0, np.sqrt(2)))

        self.assertIsNone(channel.gamma)
        self.assertIn(predictor.IRRATIONAL_WARNING, channel.warnings)
        self.assertEqual(predictor.weight(channel, 0.37), 1.0)

        unitary = expm_i_herm(0.4 * SIGMA_Z, 0.37)
        self.assert_matrix_equal(
            predictor.apply(channel, 0.37, SIGMA_X),
            unitary @ SIGMA_X @ unitary.conj().T,
        )


class ApplyTestCase(TestCase):
    """apply() tests"""

    def test_qubit_quarter_time(self):
        channel = qubit_channel(np.pi / 2, BINOMIAL_1)

        result = predictor.apply(channel, 0.25, SIGMA_X)

        self.assertAlmostEqual(predictor.weight(channel, 0.25), 0.25)
        self.assert_matrix_equal(result, np.sqrt(2) / 8 * (SIGMA_X + SIGMA_Y))

    def test_scalar_propagators_depolarize(self):
        rho = random_density(2, np.random.default_rng(1))

        for dist in CLOSED_FORM_PRIORS:
            channel = scalar_channel(dist)
            self.assertEqual(channel.decomp.kappa, 1)

            for t in CLOSED_FORM_GRID:
                with self.subTest(dist=dist.label(), t=t):
                    w = predictor.weight(channel, t)
                    self.assert_matrix_equal(
                        predictor.apply(channel, t, rho),
                        predictor.qubit_depolarizing_form(w, rho),
                    )

    def test_dephasing_closed_form(self):
        a = 0.4
        matrix = random_matrix(2, np.random.default_rng(2))

        for dist in CLOSED_FORM_PRIORS:
            channel = qubit_channel(a, dist)

            for t in CLOSED_FORM_GRID:
                with self.subTest(dist=dist.label(), t=t):
                    w = predictor.weight(channel, t)
                    self.assert_matrix_equal(
                        predictor.apply(channel, t, matrix),
                        predictor.qubit_dephasing_form(SIGMA_Z, a, w, t, matrix),
                    )

    def test_identity_at_zero(self):
        rng = np.random.default_rng(3)
        channel = predictor.build_channel(
            consistent_set([2, 1, 2], [1.0, 1.5], rng, 2.0),
            PriorDistribution(Family.CAUCHY, a=0.5),
        )
        matrix = random_hermitian(5, rng)

        self.assert_matrix_equal(predictor.apply(channel, 0.0, matrix), matrix)

    def test_anchored_at_snapshot_times(self):
        rng = np.random.default_rng(4)
        tomography = consistent_set([3, 1, 2], [0.5, 1.0, 1.25], rng, 4.0)
        matrix = random_hermitian(6, rng)

        for dist in (
            PriorDistribution(Family.NORMAL, a=0.3),
            PriorDistribution(Family.SEMICIRCULAR, m=3),
        ):
            channel = predictor.build_channel(tomography, dist)
            for time, unitary in zip(tomography.times, tomography.unitaries):
                with self.subTest(dist=dist.label(), time=time):
                    self.assert_matrix_equal(
                        predictor.apply(channel, time, matrix),
                        unitary @ matrix @ unitary.conj().T,
                        atol=1e-8,
                    )

    def test_random_sets_are_anchored(self):
        rng = np.random.default_rng(10)

        for n in range(50):
            tomography = random_consistent_set(rng)
            channel = predictor.build_channel(
                tomography, RANDOM_PRIORS[n % len(RANDOM_PRIORS)]
            )

            for _ in range(10):
                matrix = random_matrix(tomography.dim, rng)
                for time, unitary in zip(tomography.times, tomography.unitaries):
                    with self.subTest(set=n, time=time):
                        self.assert_matrix_equal(
                            predictor.apply(channel, time, matrix),
                            unitary @ matrix @ unitary.conj().T,
                            atol=1e-9 * hs_norm(matrix),
                        )

    def test_delta_prior_is_unitary(self):
        rng = np.random.default_rng(5)
        tomography = consistent_set([2, 2], [1.0, 2.0], rng, 1.0)
        channel = predictor.build_channel(tomography, PriorDistribution(Family.DELTA))
        matrix = random_hermitian(4, rng)
        unitary = expm_i_herm(channel.hhat.matrix, 0.3)

        self.assert_matrix_equal(
            predictor.apply(channel, 0.3, matrix),
            unitary @ matrix @ unitary.conj().T,
            atol=1e-9,
        )

    def test_trace_preserving_and_hermitian(self):
        rng = np.random.default_rng(6)
        channel = predictor.build_channel(
            consistent_set([2, 1], [1.0, 3.0], rng, 1.0), BINOMIAL_1
        )
        matrix = random_hermitian(3, rng)

        result = predictor.apply(channel, 0.41, matrix)

        self.assertAlmostEqual(np.trace(result), np.trace(matrix))
        self.assert_matrix_equal(result, result.conj().T)

    def test_wrong_dimension(self):
        channel = qubit_channel(0.4, BINOMIAL_1)

        with self.assertRaises(DimensionError):
            predictor.apply(channel, 0.1, np.eye(3))


class ProjectorTestCase(TestCase):
    """pinch_commutant(), project_bicommutant() and upsilon() tests"""

    def setUp(self):
        super().setUp()

        rng = np.random.default_rng(7)
        tomography = consistent_set([2, 1, 3], [1.0, 2.0], rng, 1.0)
        self.decomp = snapshot.shared_eigenspaces(tomography)
        self.matrix = random_hermitian(6, rng) + 1j * random_hermitian(6, rng)

    def test_idempotent(self):
        for project in (predictor.pinch_commutant, predictor.project_bicommutant):
            with self.subTest(project=project.__name__):
                once = project(self.matrix, self.decomp)

                self.assert_matrix_equal(project(once, self.decomp), once)

    def test_bicommutant_inside_commutant(self):
        bicommutant = predictor.project_bicommutant(self.matrix, self.decomp)

        self.assert_matrix_equal(
            predictor.pinch_commutant(bicommutant, self.decomp), bicommutant
        )
        self.assert_matrix_equal(
            predictor.project_bicommutant(
                predictor.pinch_commutant(self.matrix, self.decomp), self.decomp
            ),
            bicommutant,
        )

    def test_trace_preserving(self):
        for project in (predictor.pinch_commutant, predictor.project_bicommutant):
            with self.subTest(project=project.__name__):
                self.assertAlmostEqual(
                    np.trace(project(self.matrix, self.decomp)), np.trace(self.matrix)
                )

    def test_upsilon(self):
        upsilon = predictor.upsilon(self.decomp)

        self.assertAlmostEqual(np.trace(upsilon).real, 2 / 3 + 1 / 2 + 3 / 4)
        self.assert_matrix_equal(
            predictor.project_bicommutant(upsilon, self.decomp), upsilon
        )

    def test_blockwise_matches_projector_form(self):
        tomography = snapshot.TomographySet(
            times=(1.0,), unitaries=(np.diag([1, 1, -1]) + 0j,)
        )
        channel = predictor.build_channel(
            tomography, PriorDistribution(Family.TRUNCATED_UNIFORM, m=1)
        )
        decomp = channel.decomp
        matrix = np.diag([0.2, 0.5, 0.3]) + 0j
        matrix[0, 1] = matrix[1, 0] = 0.1
        t = 0.3
        w = predictor.weight(channel, t)
        unitary = expm_i_herm(channel.hhat.matrix, t)
        upsilon = predictor.upsilon(decomp)
        pinched = predictor.pinch_commutant(matrix, decomp)
        bicommutant = predictor.project_bicommutant(matrix, decomp)
        identity = np.eye(3)
        expected = w * unitary @ matrix @ unitary.conj().T + (1 - w) * (
            upsilon @ pinched + (identity - upsilon) @ bicommutant
        )

        self.assert_matrix_equal(predictor.apply(channel, t, matrix), expected)


class ChoiTestCase(TestCase):
    """choi() tests"""

    def test_cptp(self):
        rng = np.random.default_rng(8)
        channel = predictor.build_channel(
            consistent_set([2, 1, 1], [1.0, 1.5], rng, 2.0),
            PriorDistribution(Family.EXPONENTIAL, a=0.2),
        )

        for t in (0.0, 0.13, 0.77, 2.9):
            with self.subTest(t=t):
                choi = predictor.choi(channel, t)

                self.assertEqual(choi.matrix.shape, (16, 16))
                self.assertTrue(choi.is_cptp())
                self.assertLessEqual(choi.trace_residual, 1e-9)

    def test_random_channels_are_cptp(self):
        rng = np.random.default_rng(11)

        for n in range(25):
            tomography = random_consistent_set(rng)
            channel = predictor.build_channel(
                tomography, RANDOM_PRIORS[n % len(RANDOM_PRIORS)]
            )

            for t in rng.uniform(0, 2 * tomography.times[-1], size=4):
                with self.subTest(set=n, t=t):
                    choi = predictor.choi(channel, t)

                    self.assertGreaterEqual(choi.min_eigenvalue, -1e-9)
                    self.assertLessEqual(choi.trace_residual, 1e-9)

    def test_identity_channel(self):
        choi = predictor.choi(qubit_channel(0.4, BINOMIAL_1), 0.0)

        self.assertAlmostEqual(choi.min_eigenvalue, 0)
        self.assertAlmostEqual(np.linalg.eigvalsh(choi.matrix)[-1], 2)

    def test_not_cptp(self):
        choi = predictor.ChoiMatrix(matrix=-np.eye(4) + 0j, dim=2)

        self.assertFalse(choi.is_cptp())


class TrajectoryTestCase(TestCase):
    """trajectory() tests"""

    def test_depolarized_state(self):
        channel = scalar_channel(BINOMIAL_1)
        rho0 = np.diag([1, 0]) + 0j

        states = predictor.trajectory(channel, rho0, [0.0, 0.5])

        self.assert_matrix_equal(states[0], rho0)
        self.assert_matrix_equal(states[1], rho0 / 3 + np.eye(2) / 3)

    def test_states_stay_density_matrices(self):
        rng = np.random.default_rng(9)
        channel = predictor.build_channel(
            consistent_set([1, 2], [1.0, 2.0], rng, 1.0),
            PriorDistribution(Family.NORMAL, a=1.0),
        )

        for state in predictor.trajectory(
            channel, random_density(3, rng), np.linspace(0, 3, 7)
        ):
            self.assertAlmostEqual(np.trace(state).real, 1)
            self.assertGreaterEqual(np.linalg.eigvalsh(state)[0], -1e-12)

    def test_not_a_state(self):
        channel = qubit_channel(0.4, BINOMIAL_1)

        with self.assertRaises(StateError):
            predictor.trajectory(channel, np.diag([2.0, -1.0]), [0.1])
