import math
import unittest

import numpy as np
import numpy.testing as npt

import utils
from curves import (circle_curve, component_min_distance, curve_from_function, curve_length,
                    euclidean_thickness, great_circle_curve, link_length, ropelength, small_circle_curve,
                    spherical_thickness, thickness_witness)
from errors import DegenerateInputError, InputError
from geom_core import random_rotation
from models import Ambient, DiscreteCurve, DiscreteLink


def random_link(rng, ambient):
    components = []
    for _ in range(int(rng.integers(1, 4))):
        count = int(rng.integers(8, 21))
        points = rng.standard_normal((count, ambient.dimension))
        if ambient is Ambient.SPHERICAL:
            points /= np.linalg.norm(points, axis=1)[:, None]
        components.append(DiscreteCurve(points, ambient))
    return DiscreteLink(tuple(components))


class TestEuclideanThickness(unittest.TestCase):
    def test_unit_circle(self):
        link = DiscreteLink.of(circle_curve(1.0, 64))
        npt.assert_allclose(euclidean_thickness(link), 1.0, rtol=1e-12)
        self.assertAlmostEqual(ropelength(link), 2 * math.pi, delta=3e-3)
        self.assertLess(link_length(link), 2 * math.pi)

    def test_two_circles_far_apart(self):
        link = DiscreteLink.of(circle_curve(1.0, 64), circle_curve(1.0, 64, center=(10.0, 0.0, 0.0)))
        npt.assert_allclose(euclidean_thickness(link), 1.0, rtol=1e-12)

    def test_ropelength_is_scale_invariant(self):
        link = DiscreteLink.of(curve_from_function(
            lambda t: (np.cos(t) + 2 * np.cos(2 * t), np.sin(t) - 2 * np.sin(2 * t), np.sin(3 * t)), 48))
        npt.assert_allclose(ropelength(link.scaled(3.0)), ropelength(link), rtol=1e-9)

    def test_rigid_motion_invariance(self):
        link = random_link(utils.rng_for(5), Ambient.EUCLIDEAN)
        rotation = random_rotation(3, utils.rng_for(6))
        moved = link.transformed(rotation, offset=[1.0, -2.0, 0.5])
        npt.assert_allclose(euclidean_thickness(moved), euclidean_thickness(link), rtol=1e-9)

    def test_scale_equivariance(self):
        link = random_link(utils.rng_for(8), Ambient.EUCLIDEAN)
        for factor in (0.25, 3.0):
            npt.assert_allclose(euclidean_thickness(link.scaled(factor)), factor * euclidean_thickness(link),
                                rtol=1e-12)

    def test_coaxial_circles_two_apart(self):
        link = DiscreteLink.of(circle_curve(1.0, 256), circle_curve(1.0, 256, center=(0.0, 0.0, 2.0)))
        npt.assert_allclose(euclidean_thickness(link), 1.0, rtol=1e-12)
        self.assertAlmostEqual(ropelength(link), 4 * math.pi, delta=1e-3)

    def test_wrong_ambient(self):
        with self.assertRaises(InputError):
            euclidean_thickness(DiscreteLink.of(great_circle_curve(16)))
        with self.assertRaises(InputError):
            spherical_thickness(DiscreteLink.of(circle_curve()))


class TestSphericalThickness(unittest.TestCase):
    def test_great_circle(self):
        link = DiscreteLink.of(great_circle_curve(256))
        npt.assert_allclose(spherical_thickness(link), math.pi / 2, rtol=0, atol=1e-12)

    def test_small_circle(self):
        link = DiscreteLink.of(small_circle_curve(0.5, 128))
        npt.assert_allclose(spherical_thickness(link), math.pi / 6, rtol=0, atol=1e-12)

    def test_four_dimensional_rotation_invariance(self):
        for seed in range(5):
            link = random_link(utils.rng_for(30 + seed), Ambient.SPHERICAL)
            rotation = random_rotation(4, utils.rng_for(40 + seed))
            npt.assert_allclose(spherical_thickness(link.transformed(rotation)), spherical_thickness(link),
                                rtol=1e-9)

    def test_spherical_length(self):
        npt.assert_allclose(curve_length(great_circle_curve(512)), 2 * math.pi, rtol=1e-4)


class TestPrunedScan(unittest.TestCase):
    def test_pruned_matches_brute_force(self):
        rng = utils.rng_for(2024)
        for index in range(20):
            ambient = Ambient.EUCLIDEAN if index % 2 == 0 else Ambient.SPHERICAL
            link = random_link(rng, ambient)
            pruned = thickness_witness(link, "pruned")
            brute = thickness_witness(link, "brute")
            npt.assert_allclose(pruned.value, brute.value, rtol=1e-12, atol=1e-12)

    def test_witness_triple(self):
        link = DiscreteLink.of(circle_curve(2.0, 32))
        result = thickness_witness(link)
        i, j, k = result.triple
        self.assertTrue(i < j < k)
        self.assertEqual(result.method, "pruned")
        npt.assert_allclose(result.value, 2.0, rtol=1e-12)

    def test_unknown_method(self):
        with self.assertRaises(InputError):
            thickness_witness(DiscreteLink.of(circle_curve()), "fast")


class TestRefinement(unittest.TestCase):
    def test_adding_samples_never_thickens(self):
        rng = utils.rng_for(77)
        for index in range(10):
            ambient = Ambient.EUCLIDEAN if index % 2 == 0 else Ambient.SPHERICAL
            link = random_link(rng, ambient)
            refined = DiscreteLink(tuple(c.refined() for c in link.components))
            self.assertEqual(refined.total_samples, 2 * link.total_samples)
            self.assertLessEqual(thickness_witness(refined).value, thickness_witness(link).value)

    def test_refined_spherical_samples_stay_on_sphere(self):
        refined = great_circle_curve(16).refined()
        npt.assert_allclose(np.linalg.norm(refined.samples, axis=1), 1.0, rtol=1e-14)
        npt.assert_allclose(spherical_thickness(DiscreteLink.of(refined)), math.pi / 2, rtol=0, atol=1e-12)


class TestValidation(unittest.TestCase):
    def test_too_few_samples(self):
        with self.assertRaises(DegenerateInputError):
            circle_curve(1.0, 7)

    def test_shared_sample_between_components(self):
        curve = circle_curve(1.0, 16)
        with self.assertRaises(DegenerateInputError):
            DiscreteLink.of(curve, curve)

    def test_spherical_samples_must_be_unit(self):
        with self.assertRaises(DegenerateInputError):
            DiscreteCurve(np.tile([1.0, 0.0, 0.0, 0.0], (8, 1)) * np.arange(1, 9)[:, None], Ambient.SPHERICAL)


class TestComponentDistance(unittest.TestCase):
    def test_coaxial_circles(self):
        a = circle_curve(1.0, 64)
        b = circle_curve(1.0, 64, center=(0.0, 0.0, 0.7))
        npt.assert_allclose(component_min_distance(a, b), 0.7, atol=1e-9)

    def test_refines_between_samples(self):
        a = circle_curve(1.0, 16)
        b = a.scaled(3.0).transformed(
            np.array([[math.cos(0.2), -math.sin(0.2), 0], [math.sin(0.2), math.cos(0.2), 0], [0, 0, 1]]))
        distance = component_min_distance(a, b)
        self.assertLessEqual(distance, float(np.min(np.linalg.norm(a.samples[:, None] - b.samples[None], axis=2))))
        self.assertGreater(distance, 1.5)


if __name__ == '__main__':
    unittest.main()
