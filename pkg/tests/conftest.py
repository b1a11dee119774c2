import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from thetaforge import calibrate, new_curve, periods

FIXED_CURVES = {
    1: [-1.5, -0.4, 0.8, 1.7],
    2: [-1.8, -1.0, -0.2, 0.5, 1.1, 1.9],
    3: [-2.0, -1.3, -0.6, 0.05, 0.7, 1.3, 1.9, 2.5],
}


@pytest.fixture(scope="session")
def curve_data():
    """Calibrated period data for one fixed curve per genus 1..3."""
    data = {}
    for g, pts in FIXED_CURVES.items():
        curve = new_curve(pts)
        pd = periods(curve, 1e-12)
        calibrate(curve, pd)
        data[g] = (curve, pd)
    return data
