from pathlib import Path

import numpy as np
import pytest

from nsoutflow.config import load_config, parse_config
from nsoutflow.verify import SUITES, Check, observed_orders

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def _assert_all(checks):
    failed = [c.line() for c in checks if not c.passed]
    assert not failed, "\n".join(failed)


def test_check_line_format():
    assert Check("x", 0.5, "<= 1", True).line() == "[PASS] x: 0.5 (<= 1)"
    assert Check("x", 2.0, "<= 1", False).line().startswith("[FAIL]")


def test_observed_orders():
    hs = np.array([0.4, 0.2, 0.1])
    assert observed_orders(hs, 3 * hs**2) == pytest.approx([2.0, 2.0])


@pytest.mark.parametrize("suite", ["burgers", "srw"])
def test_default_suites(suite):
    _assert_all(SUITES[suite](parse_config("")))


def test_entropy_suite_small_sample():
    checks = SUITES["entropy"](parse_config("[verify]\nentropy_samples = 5000\n"))
    _assert_all(checks)
    assert len(checks) == 7


def test_decay_suite():
    _assert_all(SUITES["decay"](load_config(CONFIGS / "decay.ini")))


@pytest.mark.parametrize("name", ["stationary_supersonic.ini", "stationary_subsonic.ini",
                                  "superposition.ini"])
def test_stationary_suite(name):
    checks = SUITES["stationary"](load_config(CONFIGS / name))
    _assert_all(checks)


def test_subsonic_suite_contains_negative_test():
    checks = SUITES["stationary"](load_config(CONFIGS / "stationary_subsonic.ini"))
    assert any("negative test" in c.name for c in checks)


def test_tightened_tolerance_fails():
    checks = SUITES["srw"](parse_config("[verify]\norder_min = 2.5\n"))
    assert not all(c.passed for c in checks)
