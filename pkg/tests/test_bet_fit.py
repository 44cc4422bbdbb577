import os
import sys
import unittest

import numpy as np

# Add project root to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.calibration.bet_fit import detect_type_iv, fit_bet
from src.sorption.bet import bet_coverage
from src.utils.error_handler import DataError, NonPhysicalFitError

WINDOW = np.linspace(0.05, 0.35, 7)


def bet_isotherm(v_m, c, xs=WINDOW):
    return [(float(x), v_m * bet_coverage(float(x), c)) for x in xs]


class TestFitBet(unittest.TestCase):

    def test_exact_recovery(self):
        for c in (2.0, 50.0, 1e4):
            for v_m in (1e-3, 1.0, 1e3):
                with self.subTest(c=c, v_m=v_m):
                    fit = fit_bet(bet_isotherm(v_m, c))
                    self.assertAlmostEqual(fit.v_m / v_m, 1.0, delta=1e-8)
                    self.assertAlmostEqual(fit.c / c, 1.0, delta=1e-8)
                    self.assertAlmostEqual(fit.r2, 1.0, delta=1e-10)
                    self.assertEqual(fit.n_points, 7)

    def test_flat_transform(self):
        fit = fit_bet(bet_isotherm(2.0, 1.0))
        self.assertAlmostEqual(fit.slope, 0.0, delta=1e-12)
        self.assertAlmostEqual(fit.c, 1.0, delta=1e-9)
        self.assertAlmostEqual(fit.v_m, 1.0 / fit.intercept, delta=1e-9)
        self.assertAlmostEqual(fit.v_m, 2.0, delta=1e-9)

    def test_window_selection(self):
        isotherm = bet_isotherm(1.0, 50.0, np.linspace(0.02, 0.95, 32))
        fit = fit_bet(isotherm, (0.05, 0.35))
        self.assertEqual(fit.n_points, sum(1 for x, _ in isotherm if 0.05 <= x <= 0.35))
        self.assertAlmostEqual(fit.c, 50.0, delta=1e-6)

    def test_monolayer_point(self):
        fit = fit_bet(bet_isotherm(1.0, 100.0))
        self.assertAlmostEqual(fit.monolayer_point, 1.0 / 11.0, delta=1e-9)

    def test_too_few_points(self):
        with self.assertRaises(DataError):
            fit_bet(bet_isotherm(1.0, 50.0, [0.1, 0.2, 0.6, 0.8]))

    def test_negative_intercept(self):
        xs = np.array([0.1, 0.2, 0.3])
        ys = 2.0 * xs - 0.1
        isotherm = [(float(x), float(x / (y * (1.0 - x)))) for x, y in zip(xs, ys)]
        with self.assertRaises(NonPhysicalFitError):
            fit_bet(isotherm)


class TestTypeIV(unittest.TestCase):

    def test_capillary_upturn(self):
        isotherm = bet_isotherm(1.0, 50.0, np.linspace(0.05, 0.95, 19))
        self.assertTrue(detect_type_iv(isotherm))

    def test_straight_isotherm(self):
        isotherm = [(float(x), 1.0 + 2.0 * x) for x in np.linspace(0.05, 0.95, 19)]
        self.assertFalse(detect_type_iv(isotherm))

    def test_short_isotherm_is_skipped(self):
        isotherm = bet_isotherm(1.0, 50.0, np.linspace(0.05, 0.5, 10))
        with self.assertLogs("rh_twin.calibration.bet_fit", level="WARNING") as logs:
            self.assertFalse(detect_type_iv(isotherm))
        self.assertIn("type-IV check skipped", logs.output[0])


if __name__ == "__main__":
    unittest.main()
