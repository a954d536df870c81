import unittest
import math
import numpy as np
from numpy.polynomial import Polynomial
from parameterized import parameterized
from hyperwedge.euler import FlowParams, flux
from hyperwedge.measures import (
    DiracPart,
    JumpEvaluationError,
    RadonMeasure,
    Ray,
    ScalarField,
    SectorDensity,
    TestFunction,
    bump_battery,
    eps_measure_family,
    jump_concentration,
    limit_measure_solution,
    pair,
    shock_ray,
    wedge_bumps,
    wedge_surface,
)
from hyperwedge.polar import evaluate_solution, solve_downstream
from hyperwedge.quadrature import Box

BUMP_MASS = 32.0 / 35.0

MODERATE = FlowParams(math.radians(20.0), 0.4, 0.04)


def _ones(x, y):
    return np.ones_like(x)


def _flux_fields(sol):
    def f(x, y):
        return flux(evaluate_solution(sol, x, y), sol.params).f

    def g(x, y):
        return flux(evaluate_solution(sol, x, y), sol.params).g

    return f, g


class TestTestFunction(unittest.TestCase):

    def setUp(self):
        self.phi = TestFunction((1.0, 2.0), (0.5, 0.25))

    def test_support(self):
        self.assertEqual(self.phi.support, Box(0.5, 1.5, 1.75, 2.25))

    def test_values(self):
        self.assertEqual(float(self.phi(1.0, 2.0)), 1.0)
        self.assertEqual(float(self.phi(1.5, 2.0)), 0.0)
        self.assertEqual(float(self.phi(3.0, 2.0)), 0.0)

    def test_gradient(self):
        h = 1e-6
        x, y = 1.1, 2.05
        dx = (self.phi(x + h, y) - self.phi(x - h, y)) / (2 * h)
        dy = (self.phi(x, y + h) - self.phi(x, y - h)) / (2 * h)

        self.assertAlmostEqual(float(self.phi.dx(x, y)), float(dx), places=6)
        self.assertAlmostEqual(float(self.phi.dy(x, y)), float(dy), places=6)

    @parameterized.expand([[(0.0, 1.0)], [(1.0, -1.0)]])
    def test_invalid_radii(self, radii):
        with self.assertRaises(ValueError):
            TestFunction((1.0, 1.0), radii)

    def test_equality(self):
        self.assertEqual(self.phi, TestFunction((1.0, 2.0), (0.5, 0.25)))
        self.assertNotEqual(self.phi, TestFunction((1.0, 2.0), (0.5, 0.3)))

    def test__repr__(self):
        self.assertEqual(
            repr(self.phi), "TestFunction(center=(1.0, 2.0), radii=(0.5, 0.25))"
        )


class TestRay(unittest.TestCase):

    def test_window(self):
        ray = Ray((0.0, 0.0), (1.0, 1.0))

        self.assertEqual(ray.window(Box(0.5, 2.0, 1.0, 3.0)), (1.0, 2.0))
        self.assertIsNone(ray.window(Box(0.5, 1.0, 2.0, 3.0)))

    def test_normal_is_clockwise(self):
        nx, ny = Ray((0.0, 0.0), (1.0, 1.0)).normal(0.5)

        self.assertAlmostEqual(float(nx), 1 / math.sqrt(2))
        self.assertAlmostEqual(float(ny), -1 / math.sqrt(2))

    def test_invalid(self):
        with self.assertRaises(ValueError):
            Ray((0.0, 0.0), (0.0, 0.0))

    def test_wedge_and_shock(self):
        sol = solve_downstream(MODERATE)

        self.assertEqual(wedge_surface(MODERATE), Ray((0.0, 0.0), (1.0, MODERATE.a)))
        self.assertEqual(shock_ray(sol), Ray((0.0, 0.0), (1.0, sol.sigma)))


class TestPairing(unittest.TestCase):

    def setUp(self):
        self.field = ScalarField(_ones, Box(0.0, 1.0, 0.0, 10.0), "one")
        self.ray = Ray((0.0, 0.0), (1.0, 1.0))

    def test_dirac_arc_length(self):
        value = DiracPart(self.ray, 1.0).pair(self.field)
        self.assertAlmostEqual(value, math.sqrt(2), places=14)

    def test_linear_weight(self):
        value = DiracPart(self.ray, Polynomial([0.0, 1.0])).pair(self.field)
        self.assertAlmostEqual(value, math.sqrt(2) / 2, places=14)

    def test_sector(self):
        value = SectorDensity(1.0, math.inf, 2.0).pair(self.field)
        self.assertAlmostEqual(value, 2.0 * (10.0 - 0.5), places=12)

    def test_empty_sector(self):
        with self.assertRaises(ValueError):
            SectorDensity(1.0, 1.0, 2.0)

    def test_linearity(self):
        mu = RadonMeasure((SectorDensity(1.0, math.inf, 2.0),))
        nu = RadonMeasure(diracs=(DiracPart(self.ray, 3.0),))

        combined = 2.0 * mu + nu * 0.5
        self.assertAlmostEqual(
            pair(combined, self.field),
            2.0 * pair(mu, self.field) + 0.5 * pair(nu, self.field),
            places=12,
        )

    def test_density_and_dirac_weight(self):
        mu = RadonMeasure(
            (SectorDensity(1.0, 2.0, 3.0),), (DiracPart(self.ray, Polynomial([0.0, 2.0])),)
        )

        self.assertEqual(mu.density_at(1.0, 1.5), 3.0)
        self.assertEqual(mu.density_at(1.0, 2.5), 0.0)
        self.assertAlmostEqual(mu.dirac_weight(self.ray, 1.5), 3.0)
        self.assertEqual(mu.dirac_weight(Ray((0.0, 0.0), (1.0, 2.0)), 1.5), 0.0)


class TestJumpConcentration(unittest.TestCase):

    def test_step_field(self):
        ray = Ray((0.0, 0.0), (1.0, 1.0))
        step = jump_concentration(
            lambda x, y: 1.0 if y > x else 0.0, lambda x, y: 0.0, ray
        )

        self.assertIsInstance(step.weight(1.0), float)
        self.assertAlmostEqual(step.weight(1.0), 1 / math.sqrt(2), places=12)

    @parameterized.expand([[0.4, 0.04], [1e-2, 1.0], [1e-4, 1.0]])
    def test_no_concentration_on_shock(self, eps, e0prime):
        sol = solve_downstream(FlowParams(math.radians(20.0), eps, e0prime))
        f, g = _flux_fields(sol)
        part = jump_concentration(f, g, shock_ray(sol))

        for t in np.linspace(0.1, 3.0, 32):
            self.assertLess(np.max(np.abs(part.weight(t))), 1e-10)

    def test_wedge_is_outside(self):
        sol = solve_downstream(MODERATE)
        f, g = _flux_fields(sol)
        part = jump_concentration(f, g, wedge_surface(MODERATE))

        with self.assertRaises(JumpEvaluationError):
            part.weight(1.0)


class TestLimitMeasureSolution(unittest.TestCase):

    def setUp(self):
        self.theta = math.radians(30.0)
        self.params = FlowParams(self.theta, 0.0, 1.0)
        self.family = limit_measure_solution(self.params)

    def test_boundary_force_normal_to_wedge(self):
        self.assertLess(abs(self.family.parallel_residual()), 1e-15)

    def test_surface_pressure(self):
        self.assertAlmostEqual(self.family.surface_pressure, math.sin(self.theta) ** 2)
        self.assertEqual(self.family.pressure, RadonMeasure())

    def test_components(self):
        self.assertEqual(
            list(self.family.components()),
            ["m0", "m1", "m2", "m3", "n0", "n1", "n2", "n3", "p"],
        )

    @parameterized.expand([[0.5], [1.0], [2.0]])
    def test_wedge_derivatives(self, x):
        s, c = math.sin(self.theta), math.cos(self.theta)
        ratios = self.family.wedge_derivatives(x)

        self.assertAlmostEqual(ratios["u"], c * c, places=14)
        self.assertAlmostEqual(ratios["v"], s * c, places=14)
        for key in ("u_from_m1", "u_from_n1"):
            self.assertAlmostEqual(ratios[key], c * c, places=14)
        for key in ("v_from_m2", "v_from_n2"):
            self.assertAlmostEqual(ratios[key], s * c, places=14)
        for key in ("E_from_m3", "E_from_n3"):
            self.assertAlmostEqual(ratios[key], self.params.e0, places=14)

    def test_mass_weight_grows_linearly(self):
        rho = self.family.density
        wedge = self.family.wedge
        s, c = math.sin(self.theta), math.cos(self.theta)

        self.assertAlmostEqual(rho.dirac_weight(wedge, 2.0), 2.0 * s / (c * c), places=14)

    def test_constitutive(self):
        self.assertEqual(self.family.constitutive_residual(), 0.0)


class TestEpsMeasureFamily(unittest.TestCase):

    def setUp(self):
        self.sol = solve_downstream(MODERATE)
        self.family = eps_measure_family(self.sol)

    def test_no_wedge_concentration(self):
        with self.assertRaises(ValueError):
            self.family.wedge_derivatives(1.0)

    def test_boundary_force_normal_to_wedge(self):
        self.assertLess(abs(self.family.parallel_residual()), 1e-15)

    def test_constitutive(self):
        self.assertLess(self.family.constitutive_residual(), 1e-12)

    def test_densities(self):
        sol, a = self.sol, MODERATE.a
        eta = 0.5 * (1 / sol.sigma + 1 / a)

        self.assertAlmostEqual(self.family.density.density_at(eta, 1.0), sol.rho1)
        self.assertAlmostEqual(self.family.density.density_at(1.0, 2 * sol.sigma), 1.0)
        self.assertAlmostEqual(self.family.pressure.density_at(eta, 1.0), sol.p1)


class TestBatteries(unittest.TestCase):

    def test_battery_is_deterministic(self):
        first = bump_battery(MODERATE, count=50, seed=1234)

        self.assertEqual(first, bump_battery(MODERATE, count=50, seed=1234))
        self.assertNotEqual(first, bump_battery(MODERATE, count=50, seed=99))

    @parameterized.expand([[50, 17, 17], [3, 1, 1], [1, 1, 0]])
    def test_battery_strata(self, count, n_wedge, n_inflow):
        a = MODERATE.a
        battery = bump_battery(MODERATE, count=count)

        self.assertEqual(len(battery), count)
        for phi in battery[:n_wedge]:
            box = phi.support
            self.assertTrue(box.y0 < a * phi.center[0] < box.y1)
        for phi in battery[n_wedge : n_wedge + n_inflow]:
            self.assertTrue(phi.support.x0 < 0 < phi.support.x1)
        for phi in battery[n_wedge + n_inflow :]:
            box = phi.support
            self.assertGreater(box.x0, 0)
            self.assertGreater(box.y0, a * box.x1)

    def test_invalid_count(self):
        with self.assertRaises(ValueError):
            bump_battery(MODERATE, count=0)

    def test_wedge_bumps(self):
        bumps = wedge_bumps(MODERATE)
        a = MODERATE.a

        self.assertEqual(len(bumps), 10)
        self.assertEqual(bumps, wedge_bumps(MODERATE))
        for phi in bumps:
            (x, y), (r1, r2) = phi.center, phi.radii
            self.assertTrue(0.08 <= r1 <= 0.1)
            self.assertTrue(1.4 * r1 <= x <= 1.8 * r1)
            self.assertTrue(0.4 * r2 <= y - a * x <= 0.6 * r2)
            self.assertGreater(phi.support.x0, 0)
            self.assertLess(phi.support.y0, a * x)

    @parameterized.expand(
        [
            [{"count": 0}],
            [{"tip_range": (0.5, 1.5)}],
            [{"offset_range": (0.5, 1.2)}],
            [{"offset_range": (0.6, 0.4)}],
        ]
    )
    def test_wedge_bumps_invalid(self, kwargs):
        with self.assertRaises(ValueError):
            wedge_bumps(MODERATE, **kwargs)


if __name__ == "__main__":
    unittest.main()
