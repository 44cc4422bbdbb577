import os
import sys
import unittest

import numpy as np

# Add project root to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.dielectric.response import ResponseCurve
from src.hysteresis.state import Branch, HysteresisState, update
from src.quantities.units import Capacitance, RelHumidity, Temperature
from src.twin.model import quasi_static_reading
from src.twin.params import SensorParams
from src.twin.readout import average_sensitivity, invert_reading, response_curve
from src.utils.error_handler import QuantityRangeError, ReadingOutOfRangeError

AMBIENT = Temperature.from_celsius(25.0)


class TestInvertReading(unittest.TestCase):

    def setUp(self):
        self.params = SensorParams()

    def forward(self, hint, x):
        return quasi_static_reading(self.params, update(hint, x), AMBIENT.kelvin)

    def test_round_trip(self):
        for branch in (Branch.ASCENDING, Branch.DESCENDING):
            hint = HysteresisState.for_branch(branch, AMBIENT.kelvin)
            for x in np.linspace(0.02, 0.98, 50):
                with self.subTest(branch=branch, x=x):
                    estimate = invert_reading(self.forward(hint, float(x)), AMBIENT, hint, self.params)
                    self.assertLessEqual(abs(estimate.x - x), 0.005)

    def test_saturated_reading(self):
        hint = HysteresisState.baked(AMBIENT.kelvin)
        self.assertEqual(invert_reading(self.forward(hint, 1.0), AMBIENT, hint, self.params).x, 1.0)
        self.assertEqual(invert_reading(self.forward(hint, 0.0), AMBIENT, hint, self.params).x, 0.0)

    def test_out_of_range(self):
        hint = HysteresisState.baked(AMBIENT.kelvin)
        dry = self.forward(hint, 0.0).picofarads
        wet = self.forward(hint, 1.0).picofarads
        with self.assertRaises(ReadingOutOfRangeError) as caught:
            invert_reading(Capacitance(picofarads=dry - 1.0), AMBIENT, hint, self.params)
        self.assertEqual(caught.exception.clamped, RelHumidity(x=0.0))
        with self.assertRaises(ReadingOutOfRangeError) as caught:
            invert_reading(wet + 1.0, AMBIENT, hint, self.params)
        self.assertEqual(caught.exception.clamped, RelHumidity(x=1.0))


class TestResponseCurve(unittest.TestCase):

    def setUp(self):
        self.params = SensorParams()
        self.asc = response_curve(self.params, AMBIENT, Branch.ASCENDING)
        self.desc = response_curve(self.params, AMBIENT, Branch.DESCENDING)

    def test_branches_meet_at_ends(self):
        self.assertEqual(self.asc.x[0], 0.0)
        self.assertEqual(self.asc.x[-1], 1.0)
        self.assertAlmostEqual(self.asc.picofarads[0], self.desc.picofarads[0], places=9)
        self.assertAlmostEqual(self.asc.picofarads[-1], self.desc.picofarads[-1], places=9)

    def test_descending_above_ascending(self):
        # with the default parameters the branches touch to within rounding below x = 0.05
        # and above x = 0.98, so strict separation is only asserted on [0.05, 0.98]
        inside = (self.asc.x >= 0.05) & (self.asc.x <= 0.98)
        self.assertTrue(np.all(self.desc.picofarads[inside] > self.asc.picofarads[inside]))
        self.assertTrue(np.all(np.diff(self.asc.picofarads) > 0))

    def test_default_sensitivity(self):
        sensitivity = average_sensitivity(self.asc, 0.2, 0.9)
        self.assertGreater(sensitivity, 10.0)
        self.assertLess(sensitivity, 20.0)

    def test_condensation_knee(self):
        high = average_sensitivity(self.asc, 0.8, 1.0)
        middle = average_sensitivity(self.asc, 0.4, 0.7)
        self.assertGreater(high, 1.5 * middle)


class TestAverageSensitivity(unittest.TestCase):

    def test_straight_line(self):
        curve = ResponseCurve(points=tuple((float(x), 1500.0 * float(x)) for x in np.linspace(0.0, 1.0, 11)))
        for lo, hi in ((0.0, 1.0), (0.13, 0.47), (0.6, 0.61)):
            with self.subTest(lo=lo, hi=hi):
                self.assertAlmostEqual(average_sensitivity(curve, lo, hi), 15.0, places=9)

    def test_two_point_curve(self):
        curve = ResponseCurve(points=((0.2, 200.0), (0.9, 1250.0)))
        self.assertAlmostEqual(average_sensitivity(curve, RelHumidity(x=0.2), RelHumidity(x=0.9)), 15.0, places=9)

    def test_errors(self):
        curve = ResponseCurve(points=((0.2, 200.0), (0.9, 1250.0)))
        for lo, hi in ((0.5, 0.5), (0.6, 0.3), (0.1, 0.5), (0.5, 0.95)):
            with self.subTest(lo=lo, hi=hi):
                with self.assertRaises(QuantityRangeError):
                    average_sensitivity(curve, lo, hi)


if __name__ == "__main__":
    unittest.main()
