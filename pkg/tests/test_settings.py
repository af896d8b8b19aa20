import math
import os
import unittest
from unittest import mock

import numpy as np
import numpy.testing as npt

import settings
import utils
from errors import ConfigurationError, DegenerateInputError, InputError
from models import S2Config, TorusKnotSpec, UnitVec3


class TestSettings(unittest.TestCase):
    def test_defaults(self):
        with mock.patch.dict(os.environ, {}, clear=True):
            self.assertEqual(settings.get_setting('run', 'seed'), 42)
            self.assertEqual(settings.get_setting('tolerance', 'mc_sigmas'), 4.0)
            self.assertEqual(settings.get_setting('run', 'missing', 7), 7)

    def test_unknown_setting_without_default(self):
        with self.assertRaises(ConfigurationError) as raised:
            settings.get_setting('run', 'missing')
        self.assertIn('run.missing', str(raised.exception))
        self.assertEqual(raised.exception.exit_code, 3)

    def test_environment_override(self):
        with mock.patch.dict(os.environ, {'THICKLINKS_RUN_SAMPLES': '5000'}):
            self.assertEqual(settings.get_setting('run', 'samples'), 5000)
            self.assertEqual(settings.current_settings()['run.samples'], 5000)

    def test_malformed_value_falls_back(self):
        with mock.patch.dict(os.environ, {'THICKLINKS_TOLERANCE_CONTACT': 'tight'}):
            with self.assertLogs(level='WARNING'):
                self.assertEqual(settings.get_setting('tolerance', 'contact'), 1e-6)

    def test_env_name(self):
        self.assertEqual(settings.env_name('run', 'chunk_size'), 'THICKLINKS_RUN_CHUNK_SIZE')


class TestUtils(unittest.TestCase):
    def test_antipodal_distance(self):
        distances = utils.calculate_distances(np.array([[0.0, 0.0, 1.0], [0.0, 0.0, -1.0], [1.0, 0.0, 0.0]]))
        npt.assert_allclose(distances[0, 1], math.pi, atol=1e-12)
        npt.assert_allclose(distances[0, 2], math.pi / 2, atol=1e-12)
        npt.assert_array_equal(distances, distances.T)

    def test_binomial_half_width(self):
        npt.assert_allclose(utils.binomial_half_width(0.5, 10_000), 0.012879, atol=1e-6)
        self.assertEqual(utils.binomial_std_error(0.5, 0), math.inf)

    def test_rng_streams(self):
        first = utils.rng_for(42, 3).random(5)
        npt.assert_array_equal(first, utils.rng_for(42, 3).random(5))
        self.assertFalse(np.array_equal(first, utils.rng_for(42, 4).random(5)))

    def test_chunk_counts(self):
        self.assertEqual(utils.chunk_counts(250, 100), [100, 100, 50])
        self.assertEqual(utils.chunk_counts(200, 100), [100, 100])

    def test_parallel_map_keeps_order(self):
        self.assertEqual(utils.parallel_map(lambda k: k * k, range(10), workers=4), [k * k for k in range(10)])


class TestModels(unittest.TestCase):
    def test_torus_knot_spec(self):
        with self.assertRaises(InputError):
            TorusKnotSpec(2, 0.5)
        with self.assertRaises(InputError):
            TorusKnotSpec(5, 0.5, samples=4)

    def test_unit_vectors(self):
        with self.assertRaises(DegenerateInputError):
            UnitVec3((1.0, 1.0, 0.0))
        with self.assertRaises(DegenerateInputError):
            UnitVec3.normalized((0.0, 0.0, 0.0))
        self.assertEqual(UnitVec3.normalized((0.0, 3.0, 0.0)).coords, (0.0, 1.0, 0.0))

    def test_configuration_points(self):
        with self.assertRaises(DegenerateInputError):
            S2Config([[1.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
        with self.assertRaises(DegenerateInputError):
            S2Config([[2.0, 0.0, 0.0]])


if __name__ == '__main__':
    unittest.main()
