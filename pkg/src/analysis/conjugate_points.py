# Điểm liên hợp: tìm, phân loại, đếm và so với phổ
"""
Điểm liên hợp x* là nơi khung bất ổn định giao mặt phẳng sandwich span(e2, e3),
tức detA(x*) = 0. Mỗi điểm được phân loại:

    Case I   : Q1 = p₂² > 0 (crossing chính quy)
    Case II  : p₂ = 0, dạng bậc ba Q3 = 2·p₃² > 0
    Case III : khung nằm trọn trong mặt phẳng sandwich (ngoài giả thiết)

Số điểm liên hợp (Case I/II) phải bằng số giá trị riêng bất ổn định.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd
from scipy import linalg
from scipy.optimize import brentq, minimize_scalar

from analysis.lagrangian import (
    CrossingFormResult, Frame, count_train_entries, crossing_form, distance_to_nonsimple,
    sandwich_frame,
)
from analysis.spectrum import UNSTABLE_THRESHOLD, SpectrumReport, count_unstable
from simulation.fourier_pulse import FourierPulse
from simulation.frame_shooter import ShootingPath, ShootParams, det_a, init_frame, integrate_frame
from simulation.swift_hohenberg import Params, lambda_infinity_bound
from utils.errors import InvalidParameterError
from utils.helpers import get_logger, log_ok

logger = get_logger("conjugate")

DEGENERACY_TOL = 1e-6
SIMPLICITY_THRESHOLD = 1e-3
NONSIMPLE_TOL = 1e-6
ROOT_XTOL = 1e-8
DIP_TOL = 1e-6
ASYMPTOTIC_GRID = 101
POTENTIAL_GRID = 4001


class CrossingCase(Enum):
    """Loại điểm liên hợp"""
    I = "I"
    II = "II"
    III = "III"


@dataclass(frozen=True)
class ScanResult:
    roots: List[float]
    suspected_even: List[float]
    tail_roots: List[float] = field(default_factory=list)


@dataclass(frozen=True)
class ConjugatePointRecord:
    x_star: float
    p: np.ndarray
    case: CrossingCase
    Q1: float
    Q3: Optional[float]
    simplicity_norm: float

    @property
    def crossing_value(self) -> float:
        """Dạng crossing bậc thấp nhất không suy biến (dương theo tính đơn điệu)"""
        if self.case is CrossingCase.II and self.Q3 is not None:
            return self.Q3
        return self.Q1

    @property
    def is_simple(self) -> bool:
        return self.simplicity_norm > SIMPLICITY_THRESHOLD


@dataclass
class StabilityReport:
    pulse_label: str
    spectrum: SpectrumReport
    conjugate_points: List[ConjugatePointRecord]
    suspected_even: List[float]
    lambda_inf: float
    asymptotic_ok: bool
    train_entries: int
    min_nonsimple_distance: float
    warnings: List[str] = field(default_factory=list)

    @property
    def unstable(self) -> Sequence[float]:
        return self.spectrum.unstable

    @property
    def hypothesis_ok(self) -> bool:
        return all(r.case is not CrossingCase.III for r in self.conjugate_points)

    @property
    def counts_match(self) -> bool:
        return len(self.spectrum.unstable) == len(self.conjugate_points)


# ==================== Tìm và phân loại ====================

def _sandwich_block(frame: Frame) -> np.ndarray:
    return frame.matrix[[0, 3], :]


def scan_and_refine(path: ShootingPath, xtol: float = ROOT_XTOL,
                    dip_tol: float = DIP_TOL) -> ScanResult:
    """
    Nghiệm của detA trên các mẫu: đổi dấu được tinh chỉnh bằng brentq (tích phân
    lại cục bộ), mẫu bằng 0 giữ nguyên; cực tiểu |detA| < dip_tol không đổi dấu
    được ghi riêng là nghi ngờ crossing bậc chẵn. Nghiệm sau path.reliable_until
    (sai số hướng tắt dần đã bị khuếch đại) tách ra tail_roots, không đếm.
    """
    xs, d = path.xs, path.dets
    f = lambda x: det_a(path.reintegrate(x))  # noqa: E731

    roots: List[float] = [float(x) for x, v in zip(xs, d) if v == 0.0]
    for i in range(len(xs) - 1):
        if d[i] == 0.0 or d[i + 1] == 0.0 or d[i] * d[i + 1] > 0:
            continue
        roots.append(float(brentq(f, xs[i], xs[i + 1], xtol=xtol)))

    suspected: List[float] = []
    for i in range(1, len(xs) - 1):
        a, b, c = abs(d[i - 1]), abs(d[i]), abs(d[i + 1])
        if 0.0 < b < dip_tol and b <= a and b <= c and d[i - 1] * d[i + 1] > 0:
            res = minimize_scalar(lambda x: abs(f(x)), bounds=(xs[i - 1], xs[i + 1]),
                                  method="bounded", options={"xatol": xtol})
            suspected.append(float(res.x))
            logger.warning("Nghi ngo crossing bac chan tai x=%.6f (|detA|=%.2e)", res.x, res.fun)
    limit = path.reliable_until
    tail = sorted(r for r in roots if r > limit)
    roots = sorted(r for r in roots if r <= limit)
    if tail:
        logger.warning("Bo %d diem doi dau sau x=%.2f (ngoai vung tin cay): %s", len(tail), limit,
                       ["%.4f" % r for r in tail])
    logger.info("Tim thay %d diem doi dau detA: %s", len(roots), ["%.4f" % r for r in roots])
    return ScanResult(roots=roots, suspected_even=suspected, tail_roots=tail)


def classify_frame(x_star: float, frame: Frame, degeneracy_tol: float = DEGENERACY_TOL,
                   nonsimple_tol: float = NONSIMPLE_TOL) -> ConjugatePointRecord:
    """
    Phân loại điểm liên hợp từ khung tại x*

    p = khung·u với u là vector kernel của khối hàng (1, 4); Q1 = p₂²,
    nếu Q1 ≤ degeneracy_tol thì Q3 = 2·p₃².
    """
    Q = frame.orthonormal().matrix
    M = _sandwich_block(Frame(Q))
    _, s, Vt = linalg.svd(M)
    u = Vt[-1]
    p = Q @ u
    p = p / np.linalg.norm(p)
    Q1 = float(p[1] ** 2)
    simplicity = float(s[0])

    if simplicity < nonsimple_tol:
        logger.warning("Case III tai x*=%.6f: khung nam trong mat phang sandwich", x_star)
        return ConjugatePointRecord(x_star=x_star, p=p, case=CrossingCase.III, Q1=Q1, Q3=None,
                                    simplicity_norm=simplicity)
    if Q1 <= degeneracy_tol:
        return ConjugatePointRecord(x_star=x_star, p=p, case=CrossingCase.II, Q1=Q1,
                                    Q3=float(2.0 * p[2] ** 2), simplicity_norm=simplicity)
    return ConjugatePointRecord(x_star=x_star, p=p, case=CrossingCase.I, Q1=Q1, Q3=None,
                                simplicity_norm=simplicity)


def classify(x_star: float, path: ShootingPath, degeneracy_tol: float = DEGENERACY_TOL,
             nonsimple_tol: float = NONSIMPLE_TOL) -> ConjugatePointRecord:
    """Phân loại x* trên đường bắn (khung dựng lại chính xác tại x*)"""
    record = classify_frame(x_star, path.reintegrate(x_star), degeneracy_tol, nonsimple_tol)
    if not record.is_simple:
        logger.warning("Diem lien hop x*=%.6f gan diem khong don: ||M||=%.2e",
                       x_star, record.simplicity_norm)
    return record


def cross_check(record: ConjugatePointRecord, path: ShootingPath,
                half_width: float = 0.5) -> CrossingFormResult:
    """Dạng crossing tổng quát tại x* trên đường dựng lại cục bộ"""
    local = path.to_lagrangian_path(record.x_star - half_width, record.x_star + half_width)
    return crossing_form(local, record.x_star, sandwich_frame())


def sandwich_obstruction(theta: float) -> float:
    """cosθ·sin(θ/2) - sinθ·cos(θ/2) = -sin(θ/2), khác 0 với θ ∈ (π/2, π)"""
    return float(np.cos(theta) * np.sin(theta / 2.0) - np.sin(theta) * np.cos(theta / 2.0))


def check_no_asymptotic_crossings(p: Params, lambda_grid: Sequence[float],
                                  tol: float = 1e-6) -> bool:
    """Không có λ nào trong lưới mà khung tiệm cận giao mặt phẳng sandwich"""
    for lam in lambda_grid:
        frame = init_frame(float(lam), p).orthonormal()
        if abs(det_a(frame)) <= tol:
            logger.warning("Khung tiem can giao sandwich tai lambda=%.4f", lam)
            return False
    return True


# ==================== Báo cáo ====================

def stability_report(pulse: FourierPulse, shoot: Optional[ShootParams] = None,
                     threshold: float = UNSTABLE_THRESHOLD,
                     degeneracy_tol: float = DEGENERACY_TOL) -> StabilityReport:
    """
    Chạy toàn bộ chuỗi: phổ, kiểm tra tiệm cận, tích phân khung, điểm liên hợp

    Phổ và tích phân khung độc lập nên chạy song song trên hai luồng.
    """
    if np.isnan(pulse.residual_norm):
        raise InvalidParameterError("pulse chua hoi tu (residual_norm = NaN)")

    with ThreadPoolExecutor(max_workers=2) as pool:
        spectrum_job = pool.submit(count_unstable, pulse, threshold)
        path_job = pool.submit(integrate_frame, pulse, shoot)
        spectrum = spectrum_job.result()
        path = path_job.result()

    x_grid = np.linspace(-pulse.L_f, pulse.L_f, POTENTIAL_GRID)
    lambda_inf = lambda_infinity_bound(pulse.potential(x_grid))
    asymptotic_ok = check_no_asymptotic_crossings(
        pulse.params, np.linspace(0.0, lambda_inf, ASYMPTOTIC_GRID))

    scan = scan_and_refine(path)
    records = [classify(x, path, degeneracy_tol) for x in scan.roots]
    rows = path.plucker()
    report = StabilityReport(
        pulse_label=pulse.label, spectrum=spectrum, conjugate_points=records,
        suspected_even=scan.suspected_even, lambda_inf=lambda_inf, asymptotic_ok=asymptotic_ok,
        train_entries=count_train_entries(rows),
        min_nonsimple_distance=float(min(distance_to_nonsimple(r) for r in rows)),
    )
    if not report.hypothesis_ok:
        report.warnings.append("co diem Case III: ngoai gia thiet, khong dem vao chi so")
    if not asymptotic_ok:
        report.warnings.append("khung tiem can giao mat phang sandwich")
    if scan.tail_roots:
        report.warnings.append(
            f"bo qua {len(scan.tail_roots)} doi dau detA sau x={path.reliable_until:.2f}: "
            "tang sai so tich phan hoac thu nho cua so")
    if not report.counts_match:
        report.warnings.append("so gia tri rieng bat on dinh khac so diem lien hop")
        logger.warning("%s: %d gia tri rieng vs %d diem lien hop", pulse.label,
                       len(spectrum.unstable), len(records))
    else:
        log_ok(logger, "%s: khop %d = %d", pulse.label, len(spectrum.unstable), len(records))
    return report


def _fmt(value: float) -> str:
    return f"{value:.6f}"


def format_report(report: StabilityReport) -> str:
    """Văn bản báo cáo cố định (cùng đầu vào cho cùng chuỗi ký tự)"""
    lines = [f"Pulse: {report.pulse_label}", ""]
    eig = pd.DataFrame({"lambda": list(report.unstable)})
    lines.append("Unstable eigenvalues:")
    lines.append(eig.to_string(index=False, float_format=_fmt) if len(eig) else "  none")
    lines.append("")

    lines.append("Conjugate points:")
    if report.conjugate_points:
        table = pd.DataFrame([{
            "x*": r.x_star,
            "case": r.case.value,
            "Q1": r.Q1,
            "Q3": np.nan if r.Q3 is None else r.Q3,
            "||M||": r.simplicity_norm,
        } for r in report.conjugate_points])
        lines.append(table.to_string(index=False, float_format=_fmt, na_rep="-"))
    else:
        lines.append("  none")
    lines.append("")
    lines.append(f"lambda_inf = {report.lambda_inf:.6f}, asymptotic crossings: "
                 f"{'none' if report.asymptotic_ok else 'FOUND'}")
    lines.append(f"train entries = {report.train_entries}, "
                 f"min distance to non-simple point = {report.min_nonsimple_distance:.6f}")
    for message in report.warnings:
        lines.append(f"[WARNING] {message}")
    verdict = "MATCH" if report.counts_match and report.hypothesis_ok else "MISMATCH"
    lines.append(f"Verdict: {verdict} ({len(report.unstable)} unstable, "
                 f"{len(report.conjugate_points)} conjugate)")
    return "\n".join(lines)
