import unittest
import math
import numpy as np
from parameterized import parameterized
from hyperwedge.quadrature import (
    Box,
    QuadratureRule,
    DEFAULT_RULE,
    integrate,
    integrate_piecewise,
    integrate_sector,
)
from hyperwedge.settings import Settings

BUMP_MASS = 32.0 / 35.0
"""Integral of `(1 - s^2)^3` over `[-1, 1]`."""


def _ones(x, y):
    return np.ones_like(x)


class TestQuadratureRule(unittest.TestCase):

    def test_defaults(self):
        self.assertEqual(DEFAULT_RULE, QuadratureRule(16, 2, 8))

    @parameterized.expand([[0, 2, 8], [16, 0, 8], [16, 2, 0]])
    def test_invalid(self, nodes, panels, strip_panels):
        with self.assertRaises(ValueError):
            QuadratureRule(nodes, panels, strip_panels)

    def test_from_settings(self):
        rule = QuadratureRule.from_settings(
            Settings(quadrature_nodes=8, quadrature_panels=3, strip_panels=5)
        )
        self.assertEqual(rule, QuadratureRule(8, 3, 5))

    def test_refined(self):
        self.assertEqual(QuadratureRule(8, 2, 4).refined(3), QuadratureRule(8, 6, 12))

    def test_composite(self):
        nodes, weights = QuadratureRule(4, 3).composite(-1.0, 2.0)

        self.assertEqual(nodes.shape, (12,))
        self.assertAlmostEqual(weights.sum(), 3.0, places=14)
        self.assertTrue(np.all((nodes > -1.0) & (nodes < 2.0)))


class TestIntegrate(unittest.TestCase):

    @parameterized.expand([[0], [1], [5], [31]])
    def test_monomials_exact(self, degree):
        value = integrate(lambda x: x**degree, 0.0, 1.0)
        self.assertAlmostEqual(value, 1.0 / (degree + 1), places=14)

    def test_empty_interval(self):
        self.assertEqual(integrate(np.cos, 1.0, 1.0), 0.0)
        self.assertEqual(integrate(np.cos, 2.0, 1.0), 0.0)

    def test_piecewise_kink(self):
        value = integrate_piecewise(lambda x: np.abs(x - 0.3), [0.0, 0.3, 1.0])
        self.assertAlmostEqual(value, 0.5 * 0.09 + 0.5 * 0.49, places=15)


class TestIntegrateSector(unittest.TestCase):

    def setUp(self):
        self.box = Box(0.0, 1.0, 0.0, 1.0)

    def test_box_order(self):
        with self.assertRaises(ValueError):
            Box(1.0, 0.0, 0.0, 1.0)

    @parameterized.expand(
        [
            [0.0, math.inf, 1.0],
            [0.5, math.inf, 0.75],
            [0.5, 2.0, 0.5],
            [2.0, 0.5, 0.0],
        ]
    )
    def test_areas(self, lower, upper, expected):
        value = integrate_sector(_ones, self.box, lower, upper)
        self.assertAlmostEqual(value, expected, places=14)

    def test_box_left_of_axis(self):
        self.assertEqual(integrate_sector(_ones, Box(-2.0, -1.0, 0.0, 1.0), 0.0), 0.0)

    def test_bump_mass(self):
        center, radii = (2.0, 1.0), (0.5, 0.25)

        def bump(x, y):
            sx = (x - center[0]) / radii[0]
            sy = (y - center[1]) / radii[1]
            return (1 - sx**2) ** 3 * (1 - sy**2) ** 3

        box = Box(1.5, 2.5, 0.75, 1.25)
        value = integrate_sector(bump, box, 0.0)
        self.assertAlmostEqual(value, BUMP_MASS**2 * radii[0] * radii[1], places=14)

    def test_split_sector_adds_up(self):
        def poly(x, y):
            return x * x * y + 3 * y**3

        box = Box(0.2, 1.7, 0.1, 2.3)
        whole = integrate_sector(poly, box, 0.3)
        parts = integrate_sector(poly, box, 0.3, 1.1) + integrate_sector(poly, box, 1.1)

        self.assertAlmostEqual(whole, parts, places=12)

    def test_thin_strip(self):
        width = 1e-7
        value = integrate_sector(_ones, Box(0.0, 1.0, 0.0, 2.0), 1.0, 1.0 + width)
        self.assertAlmostEqual(value / width, 0.5, places=8)


if __name__ == "__main__":
    unittest.main()
