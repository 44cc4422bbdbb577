import math
import os
import sys
import unittest

import numpy as np

# Add project root to path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.calibration.dataset import CalibrationDataset, CalibrationPoint
from src.calibration.sensor_fit import (
    FIXED_POINT_MASK,
    ParameterVector,
    calibrate_sensor,
    model_reading,
    parameter_bounds,
)
from src.hysteresis.state import Branch
from src.quantities.units import Capacitance, RelHumidity, Temperature
from src.twin.params import SensorParams, apply_overrides, get_path
from src.twin.readout import average_sensitivity, response_curve
from src.utils.error_handler import ConfigError, DataError
from tests.helpers import synthetic_dataset

RECOVERY_MASK = (
    "diel.geometry_factor",
    "diel.porosity",
    "bet.e1_minus_el",
    "angles.advancing",
    "angles.receding",
)
SALT_RH = (0.082, 0.113, 0.225, 0.328, 0.432)


def unlabelled_point(params, x):
    point = CalibrationPoint(rh=RelHumidity(x=x), capacitance=Capacitance(picofarads=0.0))
    return point.model_copy(update={"capacitance": Capacitance(picofarads=model_reading(params, point))})


class TestCalibrateSensor(unittest.TestCase):

    def setUp(self):
        self.truth = SensorParams()
        self.data = synthetic_dataset(self.truth)

    def test_recovers_perturbed_parameters(self):
        init = apply_overrides(
            self.truth,
            {
                "diel.geometry_factor": 130.0 * 1.2,
                "diel.porosity": 0.30 * 0.8,
                "bet.e1_minus_el": 11400.0 * 1.15,
                "angles.advancing": 70.0 * 0.9,
                "angles.receding": 38.0 * 1.15,
            },
        )
        fitted, report = calibrate_sensor(self.data, init, RECOVERY_MASK)

        self.assertTrue(report.converged)
        self.assertLess(report.residual_norm, 1e-6)
        for name in RECOVERY_MASK:
            with self.subTest(name=name):
                expected = get_path(self.truth, name)
                self.assertAlmostEqual(get_path(fitted, name) / expected, 1.0, delta=0.01)
        self.assertEqual(report.names, RECOVERY_MASK)
        self.assertAlmostEqual(report.as_dict()["angles.receding"], fitted.angles.receding, places=9)
        self.assertAlmostEqual(fitted.dist.porosity, fitted.diel.porosity, places=12)

        temperature = Temperature.from_celsius(25.0)
        target = average_sensitivity(response_curve(self.truth, temperature, Branch.ASCENDING), 0.2, 0.9)
        achieved = average_sensitivity(response_curve(fitted, temperature, Branch.ASCENDING), 0.2, 0.9)
        self.assertAlmostEqual(achieved / target, 1.0, delta=0.01)

    def test_hits_fifteen_pf_per_percent(self):
        temperature = Temperature.from_celsius(25.0)
        base = average_sensitivity(response_curve(self.truth, temperature, Branch.ASCENDING), 0.2, 0.9)
        # the reading is C0 times the mixture permittivity, so sensitivity scales with C0
        truth = apply_overrides(self.truth, {"diel.geometry_factor": 130.0 * 15.0 / base})
        self.assertAlmostEqual(
            average_sensitivity(response_curve(truth, temperature, Branch.ASCENDING), 0.2, 0.9), 15.0, places=9
        )
        init = apply_overrides(
            truth,
            {
                "diel.geometry_factor": truth.diel.geometry_factor * 1.2,
                "diel.porosity": 0.30 * 0.8,
                "bet.e1_minus_el": 11400.0 * 1.15,
                "angles.advancing": 70.0 * 0.9,
                "angles.receding": 38.0 * 1.15,
            },
        )
        fitted, report = calibrate_sensor(synthetic_dataset(truth), init, RECOVERY_MASK)

        self.assertTrue(report.converged)
        achieved = average_sensitivity(response_curve(fitted, temperature, Branch.ASCENDING), 0.2, 0.9)
        self.assertLessEqual(abs(achieved - 15.0), 0.15)

    def test_scaled_dataset_doubles_geometry_factor(self):
        mask = ("diel.geometry_factor", "diel.porosity", "bet.e1_minus_el")
        fitted, report = calibrate_sensor(self.data.scaled(2.0), self.truth, mask)
        self.assertTrue(report.converged)
        self.assertAlmostEqual(fitted.diel.geometry_factor / 260.0, 1.0, delta=1e-6)
        self.assertAlmostEqual(fitted.diel.porosity / 0.30, 1.0, delta=1e-6)
        self.assertAlmostEqual(fitted.bet.e1_minus_el / 11400.0, 1.0, delta=1e-6)

    def test_reordering_does_not_change_fit(self):
        init = apply_overrides(self.truth, {"diel.geometry_factor": 140.0, "diel.porosity": 0.27})
        mask = ("diel.geometry_factor", "diel.porosity")
        reversed_data = CalibrationDataset(points=self.data.points[::-1])
        forward, _ = calibrate_sensor(self.data, init, mask)
        backward, _ = calibrate_sensor(reversed_data, init, mask)
        for name in mask:
            with self.subTest(name=name):
                self.assertAlmostEqual(get_path(forward, name) / get_path(backward, name), 1.0, delta=1e-8)

    def test_salt_points_reduce_mask(self):
        data = CalibrationDataset(points=tuple(unlabelled_point(self.truth, x) for x in SALT_RH))
        init = apply_overrides(self.truth, {"diel.geometry_factor": 150.0})
        with self.assertLogs("rh_twin.calibration.sensor_fit", level="WARNING") as logs:
            fitted, report = calibrate_sensor(data, init)
        self.assertEqual(report.names, FIXED_POINT_MASK)
        self.assertTrue(any("unidentifiable" in w for w in report.warnings))
        self.assertTrue(any("unidentifiable" in line for line in logs.output))
        self.assertEqual(fitted.angles, init.angles)
        self.assertAlmostEqual(fitted.diel.geometry_factor / 130.0, 1.0, delta=1e-4)

    def test_unlabelled_high_rh(self):
        points = list(self.data.points[:4]) + [unlabelled_point(self.truth, 0.3), unlabelled_point(self.truth, 0.6)]
        with self.assertRaises(DataError) as caught:
            calibrate_sensor(CalibrationDataset(points=tuple(points)), self.truth)
        self.assertIn("[6]", str(caught.exception))

    def test_too_few_points(self):
        data = CalibrationDataset(points=self.data.points[:2])
        with self.assertRaises(DataError):
            calibrate_sensor(data, self.truth, ("diel.geometry_factor", "diel.porosity", "bet.e1_minus_el"))

    def test_bad_masks(self):
        for mask in ((), ("thermal.lag_in",), ("diel.no_such_field",)):
            with self.subTest(mask=mask):
                with self.assertRaises(ConfigError):
                    calibrate_sensor(self.data, self.truth, mask)


class TestParameterVector(unittest.TestCase):

    def test_receding_travels_as_log_gap(self):
        params = SensorParams()
        vector = ParameterVector(params, ("angles.advancing", "angles.receding"))
        self.assertAlmostEqual(vector.x0[1], math.log(32.0), places=12)
        decoded = vector.decode(vector.x0)
        self.assertAlmostEqual(decoded.angles.receding, 38.0, places=9)
        np.testing.assert_allclose(vector.public_values(vector.x0), [70.0, 38.0], atol=1e-9)

    def test_receding_stays_below_advancing(self):
        vector = ParameterVector(SensorParams(), ("angles.advancing", "angles.receding"))
        for delta in (-20.0, 0.0, 3.0, math.log(89.0)):
            with self.subTest(delta=delta):
                decoded = vector.decode(np.array([60.0, delta]))
                self.assertLessEqual(decoded.angles.receding, decoded.angles.advancing)

    def test_advancing_alone_is_bounded_by_receding(self):
        vector = ParameterVector(SensorParams(), ("angles.advancing",))
        self.assertEqual(vector.lower[0], 38.0)

    def test_duplicates_collapse(self):
        vector = ParameterVector(SensorParams(), ("diel.porosity", "diel.porosity"))
        self.assertEqual(vector.names, ("diel.porosity",))

    def test_bounds_lookup(self):
        self.assertEqual(parameter_bounds("dist.modes.1.median_radius"), (1e-3, 1e3))
        with self.assertRaises(ConfigError):
            parameter_bounds("drift.rate")


if __name__ == "__main__":
    unittest.main()
