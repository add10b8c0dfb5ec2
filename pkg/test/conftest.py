"""
Fixture dùng chung: ba pulse tham chiếu và đường bắn tương ứng (tính một lần)
"""

import os
import sys

import numpy as np
import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, os.path.join(ROOT, "src"))
sys.path.insert(0, ROOT)

from simulation.fourier_pulse import newton_solve, seed_from_normal_form  # noqa: E402
from simulation.frame_shooter import integrate_frame  # noqa: E402
from simulation.swift_hohenberg import Params  # noqa: E402


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: giai pulse day du va tich phan khung")


# ==================== Pulse ====================

@pytest.fixture(scope="session")
def pulse_phi0():
    """φ = 0, ν = 1.6, μ = 0.05: một giá trị riêng bất ổn định"""
    return newton_solve(seed_from_normal_form(Params(nu=1.6, mu=0.05), 0.0))


@pytest.fixture(scope="session")
def pulse_phipi():
    """φ = π, ν = 1.6, μ = 0.05: hai giá trị riêng bất ổn định"""
    return newton_solve(seed_from_normal_form(Params(nu=1.6, mu=0.05), np.pi))


@pytest.fixture(scope="session")
def pulse_stable():
    """φ = 0, ν = 1.6, μ = 0.2, mầm gấp 3 lần dạng chuẩn: ổn định"""
    return newton_solve(seed_from_normal_form(Params(nu=1.6, mu=0.2), 0.0, scale=3.0))


# ==================== Đường bắn ====================

@pytest.fixture(scope="session")
def path_phi0(pulse_phi0):
    return integrate_frame(pulse_phi0)


@pytest.fixture(scope="session")
def path_phipi(pulse_phipi):
    return integrate_frame(pulse_phipi)


@pytest.fixture(scope="session")
def path_stable(pulse_stable):
    return integrate_frame(pulse_stable)
