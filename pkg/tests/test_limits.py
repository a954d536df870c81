import unittest
import math
import numpy as np
from parameterized import parameterized
from hyperwedge.euler import FlowParams
from hyperwedge.limits import (
    NoIntersection,
    limit_state,
    limiting_polar_circle,
    low_energy_limit,
    asymptotic_prediction,
)
from hyperwedge.polar import solve_downstream
from hyperwedge.utils import fit_order, geometric_ladder, richardson_extrapolate


class TestLimitState(unittest.TestCase):

    def test_quarter_pi(self):
        state = limit_state(FlowParams(math.pi / 4, 0.0, 1.0))

        self.assertAlmostEqual(state.u_lim, 0.5, places=15)
        self.assertAlmostEqual(state.v_lim, 0.5, places=15)
        self.assertAlmostEqual(state.p_lim, 0.5, places=15)
        self.assertAlmostEqual(state.eps_rho_lim, 0.4, places=15)
        self.assertAlmostEqual(state.mass_weight_rate, 2.0, places=12)
        self.assertAlmostEqual(state.sigma_slope, 5.0, places=12)
        self.assertAlmostEqual(state.u_slope, -1.25, places=15)

    def test_sixty_degrees(self):
        state = limit_state(FlowParams(math.radians(60.0), 0.0, 1.0))
        self.assertAlmostEqual(state.u_lim, 0.25, places=15)

    def test_eps_is_ignored(self):
        self.assertEqual(
            limit_state(FlowParams(0.3, 0.0, 1.0)).as_dict(),
            limit_state(FlowParams(0.3, 0.2, 1.0)).as_dict(),
        )

    def test_as_dict_keys(self):
        record = limit_state(FlowParams(0.3, 0.0, 1.0)).as_dict()

        self.assertEqual(
            list(record),
            [
                "theta_deg",
                "e0prime",
                "u_lim",
                "v_lim",
                "p_lim",
                "eps_rho_lim",
                "sigma_slope",
                "mass_weight_rate",
                "u_slope",
            ],
        )

    def test_richardson_cross_check(self):
        params = FlowParams(math.radians(30.0), 0.0, 0.5)
        ladder = geometric_ladder(1e-3, 1e-5, 5)
        solutions = [solve_downstream(params.with_eps(eps)) for eps in ladder]
        state = limit_state(params)

        self.assertAlmostEqual(
            richardson_extrapolate([s.eps_rho1 for s in solutions], ladder),
            state.eps_rho_lim,
            places=8,
        )
        self.assertAlmostEqual(
            richardson_extrapolate([s.u1 for s in solutions], ladder), state.u_lim, places=8
        )
        self.assertAlmostEqual(
            richardson_extrapolate([s.p1 for s in solutions], ladder), state.p_lim, places=8
        )


class TestConvergenceToLimit(unittest.TestCase):

    @parameterized.expand([[15.0], [30.0], [45.0], [60.0]])
    def test_concentration_orders(self, theta_deg):
        params = FlowParams(math.radians(theta_deg), 0.0, 1.0)
        ladder = geometric_ladder(1e-2, 1e-6, 9)
        solutions = [solve_downstream(params.with_eps(eps)) for eps in ladder]
        state = limit_state(params)

        rho_errors = [s.eps_rho1 - state.eps_rho_lim for s in solutions]
        weight_errors = [s.mass_weight - state.mass_weight_rate for s in solutions]

        self.assertGreaterEqual(fit_order(ladder, rho_errors), 0.9)
        self.assertGreaterEqual(fit_order(ladder, weight_errors), 0.9)

    @parameterized.expand(
        [
            [theta_deg, eps]
            for theta_deg in (5.0, 15.0, 30.0, 45.0, 60.0)
            for eps in (1e-3, 1e-4, 1e-5, 1e-6)
        ]
    )
    def test_velocity_within_twice_first_order(self, theta_deg, eps):
        params = FlowParams(math.radians(theta_deg), eps, 1.0)
        state = limit_state(params)
        sol = solve_downstream(params)

        self.assertLessEqual(abs(sol.u1 - state.u_lim), 2 * abs(state.u_slope) * eps)
        self.assertLessEqual(
            abs(sol.v1 - state.v_lim), 2 * params.a * abs(state.u_slope) * eps
        )


class TestLowEnergyLimit(unittest.TestCase):

    def test_circle(self):
        center, radius = limiting_polar_circle(0.4)

        self.assertAlmostEqual(center, 1.4 / 2.4)
        self.assertAlmostEqual(radius, 1 / 2.4)

    @parameterized.expand([[0.0], [-0.1]])
    def test_circle_invalid(self, eps):
        with self.assertRaises(ValueError):
            limiting_polar_circle(eps)

    def test_intersections_on_circle(self):
        limit = low_energy_limit(0.4, math.radians(10.0))
        t = math.tan(math.radians(10.0))

        self.assertAlmostEqual(limit.rho_lim, 6.0)
        self.assertGreater(limit.intersections[0][0], limit.intersections[1][0])
        for u, v in limit.intersections:
            self.assertAlmostEqual(v, t * u, places=15)
            self.assertAlmostEqual(
                math.hypot(u - limit.circle_center, v), limit.circle_radius, places=14
            )

    def test_matches_solver(self):
        eps, theta = 0.4, math.radians(10.0)
        limit = low_energy_limit(eps, theta)
        sol = solve_downstream(FlowParams(theta, eps, 1e-8))

        np.testing.assert_allclose(limit.intersections[0], (sol.u1, sol.v1), atol=1e-6)
        self.assertAlmostEqual(limit.shock_angles[0], sol.alpha, places=6)
        self.assertAlmostEqual(limit.pressures[0], sol.p1, places=6)

    def test_zero_angle(self):
        limit = low_energy_limit(0.4, 0.0)

        self.assertAlmostEqual(limit.intersections[0][0], 1.0, places=14)
        self.assertAlmostEqual(limit.intersections[1][0], 0.4 / 2.4, places=14)

    def test_too_steep(self):
        with self.assertRaises(NoIntersection):
            low_energy_limit(0.4, math.asin(1 / 1.4))

    def test_negative_angle(self):
        with self.assertRaises(ValueError):
            low_energy_limit(0.4, -0.1)


class TestAsymptoticPrediction(unittest.TestCase):

    def test_zero_eps_is_the_limit(self):
        params = FlowParams(math.pi / 4, 0.0, 1.0)
        prediction = asymptotic_prediction(params, 0.0)

        self.assertAlmostEqual(prediction.u1, 0.5)
        self.assertAlmostEqual(prediction.sigma, 1.0)
        self.assertEqual(prediction.rho1, math.inf)

    @parameterized.expand([[1e-5], [1e-4]])
    def test_matches_solver(self, eps):
        params = FlowParams(math.pi / 4, eps, 1.0)
        prediction = asymptotic_prediction(params, eps)
        sol = solve_downstream(params)

        self.assertLess(abs(prediction.u1 - sol.u1), 1e3 * eps**2)
        self.assertLess(abs(prediction.sigma - sol.sigma), 1e4 * eps**2)
        self.assertLess(abs(prediction.rho1 - sol.rho1) / sol.rho1, 1e3 * eps)

    def test_remainder_is_second_order(self):
        params = FlowParams(math.radians(15.0), 0.0, 1.0)
        eps = 1e-4
        u_lim = limit_state(params).u_lim
        u_full = solve_downstream(params.with_eps(eps)).u1
        u_half = solve_downstream(params.with_eps(eps / 2)).u1

        curvature = 2.0 * (u_full - 2.0 * u_half + u_lim) / eps**2
        remainder = abs(u_full - asymptotic_prediction(params, eps).u1)

        self.assertLess(remainder, 10.0 * eps**2 * abs(curvature))
        self.assertLess(remainder, 1e-2 * eps)

    def test_negative(self):
        with self.assertRaises(ValueError):
            asymptotic_prediction(FlowParams(0.3, 0.0, 1.0), -1.0)


if __name__ == "__main__":
    unittest.main()
