# Bộ kiểm tra chấp nhận: các đường mẫu giải tích và ba pulse tham chiếu
"""
Mỗi tiêu chí có tên cố định, giá trị đo, giá trị kỳ vọng và dung sai; đạt khi
|đo - kỳ vọng| < dung sai.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from analysis.conjugate_points import StabilityReport, stability_report
from analysis.lagrangian import (
    crossing_form, crossing_form_value, eigenvalue_motion, maslov_index, path_one,
    path_one_complement, path_two, sandwich_frame,
)
from simulation.fourier_pulse import FourierPulse, newton_solve, seed_from_normal_form
from simulation.frame_shooter import ShootParams
from simulation.swift_hohenberg import Params
from utils.helpers import get_logger

logger = get_logger("verify")


@dataclass(frozen=True)
class ReferencePulse:
    """Pulse tham chiếu: tham số, hệ số nhân của mầm và kết quả kỳ vọng"""
    phi: float
    nu: float
    mu: float
    scale: float
    eigenvalues: Tuple[float, ...]
    locations: Tuple[float, ...]

    @property
    def tag(self) -> str:
        return f"pulse[{'pi' if self.phi else '0'},{self.nu:g},{self.mu:g}]"

    def solve(self) -> FourierPulse:
        seed = seed_from_normal_form(Params(nu=self.nu, mu=self.mu), self.phi, scale=self.scale)
        return newton_solve(seed)


# μ = 0.2 giải từ mầm gấp 3 lần dạng chuẩn
REFERENCE_PULSES: Tuple[ReferencePulse, ...] = (
    ReferencePulse(0.0, 1.6, 0.05, 1.0, (0.1209,), (1.2400,)),
    ReferencePulse(float(np.pi), 1.6, 0.05, 1.0, (0.1179, 0.0058), (-0.6310, 17.5887)),
    ReferencePulse(0.0, 1.6, 0.20, 3.0, (), ()),
)
EIGENVALUE_TOL = 5e-3
LOCATION_TOL = 5e-2
FIXTURE_TOL = 1e-8


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    expected: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(abs(self.value - self.expected) < self.tol)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: {self.value:.10g} (expected {self.expected:.10g} +/- {self.tol:g})"


def fixture_checks(tolerances: Dict[str, float]) -> List[Check]:
    tol = lambda name: tolerances.get(name, FIXTURE_TOL)  # noqa: E731
    ref = sandwich_frame()
    one, two = path_one(), path_two()
    W1 = path_one_complement()

    checks = [
        Check("path1.Q1_on_v1", crossing_form_value(one, 0.0, [0.0, 1.0, 2.0, 0.0], 1, W=W1),
              -4.0, tol("path1.Q1_on_v1")),
        Check("path1.lambda_prime", crossing_form(one, 0.0, ref, W=W1).value, -0.8,
              tol("path1.lambda_prime")),
    ]
    s = 0.3
    motion = eigenvalue_motion(one, 0.0, ref, [s], W=W1)[0, 0]
    checks.append(Check("path1.lambda_at_0.3", motion, -(s / 60.0) * (4 * s ** 2 + 23 * s + 48),
                        tol("path1.lambda_at_0.3")))

    result = crossing_form(two, 0.0, ref)
    checks.append(Check("path2.order", result.order, 3, tol("path2.order")))
    checks.append(Check("path2.Q3", result.value, -2.0, tol("path2.Q3")))
    checks.append(Check("path2.Q1", crossing_form_value(two, 0.0, [0.0, 1.0, 0.0, 0.0], 1),
                        0.0, tol("path2.Q1")))
    checks.append(Check("path1.maslov", maslov_index(one, ref).index, -1.0, tol("path1.maslov")))
    checks.append(Check("path2.maslov", maslov_index(two, ref).index, -1.0, tol("path2.maslov")))
    return checks


def _pulse_report(case: ReferencePulse, shoot: ShootParams) -> StabilityReport:
    return stability_report(case.solve(), shoot)


def _pulse_checks(case: ReferencePulse, report: StabilityReport,
                  tolerances: Dict[str, float]) -> List[Check]:
    tag, eigenvalues, locations = case.tag, case.eigenvalues, case.locations
    checks = [Check(f"{tag}.unstable_count", len(report.unstable), len(eigenvalues),
                    tolerances.get(f"{tag}.unstable_count", 0.5)),
              Check(f"{tag}.conjugate_count", len(report.conjugate_points), len(locations),
                    tolerances.get(f"{tag}.conjugate_count", 0.5))]
    for i, (got, want) in enumerate(zip(sorted(report.unstable), sorted(eigenvalues))):
        name = f"{tag}.eigenvalue_{i}"
        checks.append(Check(name, got, want, tolerances.get(name, EIGENVALUE_TOL)))
    xs = sorted(r.x_star for r in report.conjugate_points)
    for i, (got, want) in enumerate(zip(xs, sorted(locations))):
        name = f"{tag}.x_star_{i}"
        checks.append(Check(name, got, want, tolerances.get(name, LOCATION_TOL)))
    return checks


def run_verification(quick: bool = False,
                     tolerances: Optional[Dict[str, float]] = None) -> List[Check]:
    """
    Chạy toàn bộ tiêu chí

    Args:
        quick: chỉ chạy các đường mẫu giải tích (không giải pulse)
        tolerances: ghi đè dung sai theo tên tiêu chí
    """
    tolerances = tolerances or {}
    checks = fixture_checks(tolerances)
    if quick:
        return checks

    shoot = ShootParams()
    with ThreadPoolExecutor(max_workers=len(REFERENCE_PULSES)) as pool:
        reports = list(pool.map(lambda case: _pulse_report(case, shoot), REFERENCE_PULSES))
    for case, report in zip(REFERENCE_PULSES, reports):
        checks.extend(_pulse_checks(case, report, tolerances))
    logger.info("Da chay %d tieu chi, %d dat", len(checks), sum(c.passed for c in checks))
    return checks
