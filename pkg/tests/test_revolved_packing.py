import math
import unittest

import numpy.testing as npt

from errors import InputError
from geom_core import RHO_INF
from revolved_packing import (cell_area_and_moment, cell_density, cell_volume_mc, disk_center,
                              pappus_cell_volume, revolved_cell, revolved_density_profile, revolved_mc_report,
                              row1_closed_form, row1_quadrature)


class TestCells(unittest.TestCase):
    def test_row1_area(self):
        area, _ = cell_area_and_moment(1)
        npt.assert_allclose(area, 2 + math.sqrt(3), atol=1e-12)

    def test_row1_area_and_moment_three_ways(self):
        closed = row1_closed_form()
        npt.assert_allclose(cell_area_and_moment(1), closed, atol=1e-12)
        npt.assert_allclose(row1_quadrature(), closed, atol=1e-10)

    def test_hexagonal_cells(self):
        for row in (2, 3, 7):
            with self.subTest(row=row):
                area, moment = cell_area_and_moment(row)
                npt.assert_allclose(area, 2 * math.sqrt(3), atol=1e-12)
                npt.assert_allclose(moment, area * disk_center(row)[1], atol=1e-9)

    def test_cell_is_counter_clockwise(self):
        self.assertGreater(cell_area_and_moment(4)[0], 0.0)
        self.assertEqual(revolved_cell(4).disk_center_height, disk_center(4)[1])

    def test_rows_start_at_one(self):
        with self.assertRaises(InputError):
            disk_center(0)
        with self.assertRaises(InputError):
            cell_density(0)


class TestDensities(unittest.TestCase):
    def test_near_axis_row(self):
        density = cell_density(1)
        self.assertTrue(0.8945 <= density <= 0.8955)

    def test_far_rows_are_hexagonal(self):
        for row in (2, 3, 10):
            self.assertEqual(cell_density(row), RHO_INF)

    def test_profile(self):
        profile = revolved_density_profile(50)
        self.assertEqual(len(profile), 50)
        cumulative = [row['cumulative'] for row in profile]
        npt.assert_allclose(cumulative[0], cell_density(1), atol=1e-12)
        for earlier, later in zip(cumulative, cumulative[1:]):
            self.assertLess(earlier, later)
        self.assertLess(cumulative[-1], RHO_INF)
        self.assertLess(RHO_INF - cumulative[-1], 1e-3)

    def test_pappus_volume(self):
        npt.assert_allclose(pappus_cell_volume(2), 2 * math.pi * 2 * math.sqrt(3) * (1 + math.sqrt(3)), atol=1e-9)


class TestMonteCarlo(unittest.TestCase):
    def test_revolved_density(self):
        for rows in (1, 3):
            with self.subTest(rows=rows):
                report = revolved_mc_report(rows, samples=200_000, seed=42)
                self.assertTrue(report.agrees(4.0))
                self.assertLessEqual(report.samples, 200_000)

    def test_no_samples(self):
        with self.assertRaises(InputError):
            revolved_mc_report(1, samples=0)

    def test_cell_volume(self):
        for row in (1, 2):
            with self.subTest(row=row):
                volume, std_error = cell_volume_mc(row, samples=200_000, seed=7)
                self.assertLess(abs(volume - pappus_cell_volume(row)), 4.0 * std_error)


if __name__ == '__main__':
    unittest.main()
