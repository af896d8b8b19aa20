import json
import math
import os
import tempfile
import unittest

import numpy as np
import numpy.testing as npt

import formats
from curves import circle_curve
from errors import CurveFormatError
from lattice_packing import named_lattice
from models import Ambient, DiscreteLink


class FormatTestCase(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def write(self, name, text):
        path = os.path.join(self.tmp.name, name)
        with open(path, 'w', encoding='utf-8') as handle:
            handle.write(text)
        return path


class TestCurveFiles(FormatTestCase):
    def test_csv_error_reports_line(self):
        rows = ["component,x,y,z"] + [f"0,{math.cos(k)},{math.sin(k)},0" for k in range(8)]
        rows[3] = "0,1.0,abc,0"
        path = self.write("bad.csv", "\n".join(rows) + "\n")
        with self.assertRaises(CurveFormatError) as caught:
            formats.read_curve(path)
        self.assertEqual(caught.exception.line, 4)
        self.assertIn("line 4", str(caught.exception))

    def test_csv_four_coordinates_is_spherical(self):
        t = 2 * np.pi * np.arange(16) / 16
        rows = [f"1,{math.cos(a)!r},{math.sin(a)!r},0,0" for a in t]
        link = formats.read_curve(self.write("great.csv", "\n".join(rows)))
        self.assertIs(link.ambient, Ambient.SPHERICAL)
        self.assertEqual(link.total_samples, 16)

    def test_csv_too_few_samples(self):
        rows = [f"0,{math.cos(k)},{math.sin(k)},0" for k in range(7)]
        with self.assertRaises(CurveFormatError):
            formats.read_curve(self.write("short.csv", "\n".join(rows)))

    def test_json_error_names_field(self):
        document = {'ambient': 'r3', 'components': [[[1, 0, 0], [0, 1, 0], [0, 1], [-1, 0, 0]]]}
        with self.assertRaises(CurveFormatError) as caught:
            formats.read_curve(self.write("bad.json", json.dumps(document)))
        self.assertEqual(caught.exception.field, "components[0][2]")

    def test_json_unknown_ambient(self):
        with self.assertRaises(CurveFormatError):
            formats.link_from_dict({'ambient': 'h3', 'components': []})

    def test_invalid_json(self):
        with self.assertRaises(CurveFormatError) as caught:
            formats.read_curve(self.write("broken.json", "{\n  \"ambient\": \n"))
        self.assertIsNotNone(caught.exception.line)

    def test_written_curve_reads_back(self):
        link = DiscreteLink.of(circle_curve(1.0, 12), circle_curve(1.0, 12, center=(0.0, 0.0, 3.0)))
        from_json = formats.read_curve(self.write("link.json", formats.curve_json(link, {'seed': 1})))
        from_csv = formats.read_curve(self.write("link.csv", formats.curve_csv(link)))
        for loaded in (from_json, from_csv):
            npt.assert_array_equal(loaded.points, link.points)


class TestPackingFiles(FormatTestCase):
    def test_packing_json(self):
        spec = named_lattice("sheared")
        loaded = formats.read_packing_json(self.write("sheared.json", formats.packing_json(spec)))
        npt.assert_allclose(loaded.basis, spec.basis)
        self.assertEqual(len(loaded.motif), 1)
        self.assertEqual(loaded.name, "sheared")
        self.assertFalse(loaded.certified)

    def test_packing_missing_basis(self):
        with self.assertRaises(CurveFormatError):
            formats.packing_from_dict({'motif': []})

    def test_config_points_are_normalized(self):
        path = self.write("config.json", json.dumps({'points': [[2, 0, 0], [0, 0, -3]]}))
        config = formats.read_config_json(path)
        npt.assert_allclose(config.points, [[1, 0, 0], [0, 0, -1]])


class TestRender(unittest.TestCase):
    rows = [{'n': 3, 'rho_hat': 0.75, 'ok': True}, {'n': 4, 'rho_hat': np.float64(0.8453), 'ok': False}]

    def test_json(self):
        document = json.loads(formats.render(self.rows, "json", {'seed': np.int64(7)}))
        self.assertEqual(document['metadata'], {'seed': 7})
        self.assertEqual(document['rows'][1]['rho_hat'], 0.8453)

    def test_csv_metadata_lines(self):
        lines = formats.render(self.rows, "csv", {'seed': 7, 'command': 'tammes'}).splitlines()
        self.assertEqual(lines[:2], ['# seed: 7', '# command: "tammes"'])
        self.assertEqual(lines[2], 'n,rho_hat,ok')
        self.assertEqual(len(lines), 5)

    def test_table(self):
        text = formats.render(self.rows, "table")
        header = text.splitlines()[0]
        self.assertEqual(header.split(), ['n', 'rho_hat', 'ok'])
        self.assertIn("yes", text)

    def test_unknown_format(self):
        with self.assertRaises(CurveFormatError):
            formats.render(self.rows, "xml")

    def test_plain_values(self):
        self.assertEqual(formats.plain([math.inf, math.nan, np.int32(2)]), ["inf", "nan", 2])


if __name__ == '__main__':
    unittest.main()
