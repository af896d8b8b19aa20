import math
import unittest

import numpy as np
import numpy.testing as npt
from scipy.spatial.distance import cdist

import utils
from errors import InputError, UncertifiedPackingError
from geom_core import RHO_INF, make_circle, random_rotation
from lattice_packing import (BIALY_VOLUME, SHEAR_B, SHIFTED_C, analytic_density, ball_density, bialy_volume_report,
                             circle_circle_distance, hexagonal_cylinder_density, monte_carlo_density, named_lattice,
                             shifted_intercore_distance, verify_nonoverlap)
from models import PackingSpec

Z = (0.0, 0.0, 1.0)


def certified(name):
    return verify_nonoverlap(named_lattice(name)).spec


class TestCircleCircleDistance(unittest.TestCase):
    def test_concentric(self):
        a = make_circle((0, 0, 0), Z, 1.0)
        b = make_circle((0, 0, 0), Z, 3.0)
        npt.assert_allclose(circle_circle_distance(a, b), 2.0, atol=1e-10)

    def test_coaxial(self):
        a = make_circle((0, 0, 0), Z, 1.0)
        b = make_circle((0, 0, 0.75), Z, 1.0)
        npt.assert_allclose(circle_circle_distance(a, b), 0.75, atol=1e-10)

    def test_shifted_cores_touch(self):
        a = make_circle((0, 0, 0), Z, 1.0)
        b = make_circle((SHIFTED_C, 0, 1), Z, 1.0)
        npt.assert_allclose(circle_circle_distance(a, b), 2.0, atol=1e-8)

    def test_symmetric_and_rigid(self):
        rng = utils.rng_for(8)
        a = make_circle(rng.standard_normal(3), rng.standard_normal(3), 1.0)
        b = make_circle(rng.standard_normal(3) + 3.0, rng.standard_normal(3), 1.5)
        forward = circle_circle_distance(a, b)
        npt.assert_allclose(circle_circle_distance(b, a), forward, atol=1e-9)

        rotation = random_rotation(3, utils.rng_for(9))
        offset = np.array([0.3, -1.0, 2.0])

        def moved(circle):
            return make_circle(rotation @ circle.center_array + offset, rotation @ circle.normal.array,
                               circle.radius)

        npt.assert_allclose(circle_circle_distance(moved(a), moved(b)), forward, atol=1e-9)

    def test_never_above_dense_sampling(self):
        rng = utils.rng_for(10)
        for _ in range(5):
            a = make_circle(rng.standard_normal(3), rng.standard_normal(3), 1.0)
            b = make_circle(rng.standard_normal(3) * 2.0, rng.standard_normal(3), 1.0)
            sampled = float(np.min(cdist(a.sample(720), b.sample(720))))
            self.assertLessEqual(circle_circle_distance(a, b), sampled + 1e-12)


class TestLatticeConstants(unittest.TestCase):
    def test_shifted_intercore_distance(self):
        npt.assert_allclose(shifted_intercore_distance(), 2.0 + math.sqrt(3.0), atol=1e-9)
        core = make_circle((0, 0, 0), Z, 1.0)
        closer = make_circle((SHIFTED_C - 0.01, 0, 1), Z, 1.0)
        farther = make_circle((SHIFTED_C + 0.01, 0, 1), Z, 1.0)
        self.assertLess(circle_circle_distance(core, closer), 2.0)
        self.assertGreater(circle_circle_distance(core, farther), 2.0)

    def test_volumes(self):
        npt.assert_allclose(BIALY_VOLUME, 19.739, atol=5e-4)
        npt.assert_allclose(named_lattice("stacked").volume, 16 * math.sqrt(3), atol=1e-12)
        npt.assert_allclose(named_lattice("checkerboard").volume, 2 * SHIFTED_C ** 2, atol=1e-12)
        npt.assert_allclose(named_lattice("sheared").volume, 8 * SHEAR_B, atol=1e-12)
        npt.assert_allclose(SHEAR_B ** 2, SHIFTED_C ** 2 - 4.0, atol=1e-12)

    def test_unknown_lattice(self):
        with self.assertRaises(InputError):
            named_lattice("cubic")


class TestCertification(unittest.TestCase):
    def test_named_lattices_touch_without_overlap(self):
        expected = {
            "stacked": [(1, 0, 0), (0, 1, 0), (0, 0, 1)],
            "checkerboard": [(0, 1, 0), (0, 0, 1)],
            "sheared": [(1, 0, 0), (0, 1, 0), (0, 0, 1)],
        }
        for name, translates in expected.items():
            with self.subTest(lattice=name):
                report = verify_nonoverlap(named_lattice(name))
                self.assertTrue(report.certified)
                self.assertTrue(report.spec.certified)
                self.assertLess(abs(report.min_gap), 1e-8)
                found = {c.translate for c in report.contacts}
                for translate in translates:
                    self.assertIn(translate, found)

    def test_overlap_detected(self):
        core = make_circle((0, 0, 0), Z, 1.0)
        spec = PackingSpec(3.0 * np.eye(3), (core,), name="tight")
        report = verify_nonoverlap(spec)
        self.assertFalse(report.certified)
        self.assertLess(report.min_gap, 0.0)
        self.assertIn((1, 0, 0), {v.translate for v in report.violations})
        with self.assertRaises(UncertifiedPackingError):
            analytic_density(report.spec)

    def test_uncertified_density_refused(self):
        with self.assertRaises(UncertifiedPackingError):
            analytic_density(named_lattice("stacked"))
        with self.assertRaises(UncertifiedPackingError):
            monte_carlo_density(named_lattice("stacked"), samples=10)

    def test_cutoff_too_small(self):
        with self.assertRaises(InputError):
            verify_nonoverlap(named_lattice("stacked"), cutoff=1.0)

    def test_empty_motif(self):
        spec = PackingSpec(np.eye(3), (), tube_radius=0.0, name="empty")
        report = verify_nonoverlap(spec)
        self.assertTrue(report.certified)
        self.assertEqual(report.pairs_checked, 0)
        self.assertEqual(analytic_density(report.spec), 0.0)


class TestDensity(unittest.TestCase):
    def test_analytic_densities(self):
        stacked = analytic_density(certified("stacked"))
        checkerboard = analytic_density(certified("checkerboard"))
        sheared = analytic_density(certified("sheared"))
        npt.assert_allclose(stacked, 0.7122, atol=5e-4)
        npt.assert_allclose(sheared, 0.7830, atol=5e-4)
        self.assertLess(checkerboard, stacked)
        self.assertLess(stacked, sheared)
        self.assertLess(sheared, hexagonal_cylinder_density())
        self.assertEqual(hexagonal_cylinder_density(), RHO_INF)

    def test_monte_carlo_agrees(self):
        for name in ("stacked", "sheared", "checkerboard"):
            with self.subTest(lattice=name):
                report = monte_carlo_density(certified(name), samples=300_000, seed=42)
                self.assertTrue(report.agrees(4.0))
                self.assertEqual(report.samples, 300_000)

    def test_monte_carlo_deterministic(self):
        spec = certified("checkerboard")
        first = monte_carlo_density(spec, samples=20_000, seed=3)
        second = monte_carlo_density(spec, samples=20_000, seed=3)
        self.assertEqual(first.monte_carlo, second.monte_carlo)

    def test_ball_density(self):
        spec = certified("stacked")
        self.assertEqual(ball_density(spec, (1.0, 0.0, 0.0), 1e-3, samples=2_000, seed=1), 1.0)
        self.assertEqual(ball_density(spec, (0.0, 0.0, 1.0), 1e-3, samples=2_000, seed=1), 0.0)
        npt.assert_allclose(ball_density(spec, (0.0, 0.0, 0.0), 50.0, samples=200_000, seed=1),
                            analytic_density(spec), atol=0.01)


class TestBialyVolume(unittest.TestCase):
    def test_monte_carlo_volume(self):
        report = bialy_volume_report(samples=200_000, seed=42)
        npt.assert_allclose(report.analytic, 2 * math.pi ** 2, atol=1e-12)
        self.assertTrue(report.agrees(4.0))

    def test_zero_tube(self):
        report = bialy_volume_report(samples=1_000, seed=1, tube_radius=0.0)
        self.assertEqual(report.monte_carlo, 0.0)
        self.assertEqual(report.analytic, 0.0)

    def test_scaling(self):
        report = bialy_volume_report(samples=200_000, seed=42, scale=2.0)
        npt.assert_allclose(report.analytic, 8 * BIALY_VOLUME, atol=1e-9)
        self.assertTrue(report.agrees(4.0))


if __name__ == '__main__':
    unittest.main()
