# Tích phân khung bất ổn định E^u_-(x) dọc theo pulse
"""
Khung 4×2 được khởi tạo tại L_minus từ không gian bất ổn định của B∞(λ) và tích
phân M' = B(x, λ)·M bằng RK45 (solve_ivp). Sau mỗi renorm_every đơn vị, khung được
trực chuẩn hoá bằng QR có đường chéo R dương: mặt phẳng và hướng không đổi,
nên dấu của detA cũng không đổi.

Sau pulse, khung chứa một hướng tắt dần (mode tịnh tiến tại λ = 0) và một hướng
tăng; sai số tích phân theo hướng tăng còn lại bị khuếch đại như e^{2·Re γ₁·x}.
Sai số RK45 mặc định được chọn theo L_plus sao cho tol·e^{2·Re γ₁·L_plus} không
vượt TAIL_BUDGET; ngoài reliable_until các đổi dấu của detA không còn tin được.
"""

from dataclasses import dataclass, field, replace
from typing import List, Optional

import numpy as np
import pandas as pd
from scipy.integrate import solve_ivp

from analysis.lagrangian import (
    PLUCKER_LABELS, Frame, LagrangianPath, omega, orthonormalize, plucker, plucker_trajectory,
)
from simulation.fourier_pulse import FourierPulse
from simulation.swift_hohenberg import Params, asymptotic_eigenvalues, asymptotic_frames
from utils.errors import IntegrationError, InvalidParameterError
from utils.helpers import get_logger, log_ok

logger = get_logger("shooting")

L_CP = 60.0
RENORM_EVERY = 5.0
SAMPLE_DX = 0.05
ODE_TOL = 1e-10
TOL_FLOOR = 1e-13
TAIL_BUDGET = 1e2
# số bước RK45 tối thiểu giữa hai mẫu lưới quanh một đổi dấu detA
REFINE_STEPS = 4

# Hàng 1 và 4 của khung: giao với mặt phẳng sandwich span(e2, e3)
SANDWICH_ROWS = [0, 3]


@dataclass(frozen=True)
class ShootParams:
    """atol/rtol = None: chọn theo cửa sổ bằng tail_tolerance"""
    lam: float = 0.0
    L_minus: float = -L_CP
    L_plus: float = L_CP
    renorm_every: float = RENORM_EVERY
    atol: Optional[float] = None
    rtol: Optional[float] = None
    sample_dx: float = SAMPLE_DX

    def __post_init__(self):
        if not self.L_minus < self.L_plus:
            raise InvalidParameterError(f"can L_minus < L_plus, [{self.L_minus}, {self.L_plus}]")
        for name in ("renorm_every", "atol", "rtol", "sample_dx"):
            value = getattr(self, name)
            if value is not None and value <= 0.0:
                raise InvalidParameterError(f"{name} phai duong")

    def resolved(self, p: Params) -> "ShootParams":
        """Bản sao với atol/rtol cụ thể"""
        if self.atol is not None and self.rtol is not None:
            return self
        tol = tail_tolerance(p, self.L_plus, self.lam)
        return replace(self, atol=tol if self.atol is None else self.atol,
                       rtol=tol if self.rtol is None else self.rtol)


def tail_growth_rate(p: Params, lam: float = 0.0) -> float:
    """2·Re γ₁: tốc độ khuếch đại sai số hướng tắt dần sau pulse"""
    return float(2.0 * asymptotic_eigenvalues(lam, p)[-1].real)


def tail_tolerance(p: Params, L_plus: float, lam: float = 0.0) -> float:
    """TAIL_BUDGET·e^{-2·Re γ₁·L_plus}, kẹp vào [TOL_FLOOR, ODE_TOL]"""
    tol = TAIL_BUDGET * np.exp(-tail_growth_rate(p, lam) * max(L_plus, 0.0))
    return float(np.clip(tol, TOL_FLOOR, ODE_TOL))


@dataclass(frozen=True)
class PathSample:
    x: float
    frame: Frame
    detA: float
    omega_drift: float
    plucker: np.ndarray
    on_grid: bool = True


@dataclass
class ShootingPath:
    """Các mẫu khung (đã trực chuẩn) trên [L_minus, L_plus] và cách dựng lại khung tại x bất kỳ"""
    pulse: FourierPulse
    params: ShootParams
    samples: List[PathSample] = field(default_factory=list)
    tail_gap: float = float("nan")
    renormalizations: int = 0

    @property
    def xs(self) -> np.ndarray:
        return np.array([s.x for s in self.samples])

    @property
    def dets(self) -> np.ndarray:
        return np.array([s.detA for s in self.samples])

    @property
    def grid_samples(self) -> List[PathSample]:
        """Chỉ các mẫu trên lưới đều sample_dx"""
        return [s for s in self.samples if s.on_grid]

    @property
    def reliable_until(self) -> float:
        """x lớn nhất mà sai số hướng tắt dần còn dưới TAIL_BUDGET"""
        tol = max(self.params.atol, self.params.rtol)
        return float(np.log(TAIL_BUDGET / tol) / tail_growth_rate(self.pulse.params, self.params.lam))

    def plucker(self) -> np.ndarray:
        return plucker_trajectory([s.frame for s in self.samples])

    def reintegrate(self, x: float) -> Frame:
        """Khung trực chuẩn tại x, tích phân cục bộ từ mẫu gần nhất"""
        xs = self.xs
        if x < xs[0] - 1e-12 or x > xs[-1] + 1e-12:
            raise InvalidParameterError(f"x={x} ngoai cua so [{xs[0]}, {xs[-1]}]")
        i = int(np.argmin(np.abs(xs - x)))
        if xs[i] == x:
            return self.samples[i].frame
        M = _integrate_segment(self.pulse, self.params, xs[i], x, self.samples[i].frame.matrix)
        return Frame(orthonormalize(M))

    def to_lagrangian_path(self, x_start: Optional[float] = None,
                           x_end: Optional[float] = None) -> LagrangianPath:
        xs = self.xs
        return LagrangianPath(frame_at=self.reintegrate,
                              t_start=xs[0] if x_start is None else x_start,
                              t_end=xs[-1] if x_end is None else x_end)

    def to_dataframe(self) -> pd.DataFrame:
        """Bảng x, detA, P12..P34, omega_drift, on_grid"""
        table = pd.DataFrame(self.plucker(), columns=list(PLUCKER_LABELS))
        table.insert(0, "detA", self.dets)
        table.insert(0, "x", self.xs)
        table["omega_drift"] = [s.omega_drift for s in self.samples]
        table["on_grid"] = [s.on_grid for s in self.samples]
        return table


def init_frame(lam: float, p: Params) -> Frame:
    """Khung [Ru1 Ru2] của E^u(B∞(λ))"""
    return Frame(asymptotic_frames(lam, p).unstable)


def det_a(frame: Frame) -> float:
    """det của hàng (1, 4): bằng 0 đúng khi khung giao mặt phẳng sandwich"""
    return float(np.linalg.det(frame.matrix[SANDWICH_ROWS, :]))


def _rhs_factory(pulse: FourierPulse, lam: float):
    base = np.array([
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 1.0, -2.0],
        [0.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
    ])

    def rhs(x: float, y: np.ndarray) -> np.ndarray:
        B = base.copy()
        B[2, 0] = -(lam + 1.0 - pulse.potential(x))
        return (B @ y.reshape(4, 2)).ravel()

    return rhs


def _integrate_segment(pulse: FourierPulse, sp: ShootParams, x0: float, x1: float,
                       M0: np.ndarray, t_eval: Optional[np.ndarray] = None,
                       keep_steps: bool = False, max_step: float = np.inf):
    """
    Tích phân M từ x0 đến x1 (tiến hoặc lùi). Có t_eval hoặc keep_steps thì trả về
    cả nghiệm (keep_steps: sol.t là các bước trong của RK45), ngược lại chỉ M(x1).
    """
    sol = solve_ivp(_rhs_factory(pulse, sp.lam), (x0, x1), np.asarray(M0).ravel(),
                    method="RK45", rtol=sp.rtol, atol=sp.atol, t_eval=t_eval,
                    max_step=max_step)
    if sol.status < 0 or not np.all(np.isfinite(sol.y)):
        where = float(sol.t[-1]) if sol.t.size else x0
        raise IntegrationError(f"RK45 that bai: {sol.message}", where)
    if t_eval is not None or keep_steps:
        return sol
    return sol.y[:, -1].reshape(4, 2)


class FrameShooter:
    """
    Tích phân khung bất ổn định cho một pulse

    Args:
        pulse: pulse Fourier đã hội tụ
        params: tham số cửa sổ, sai số và lấy mẫu
    """

    def __init__(self, pulse: FourierPulse, params: Optional[ShootParams] = None):
        self.pulse = pulse
        self.params = (params or ShootParams()).resolved(pulse.params)
        if max(abs(self.params.L_minus), abs(self.params.L_plus)) > pulse.L_f:
            raise InvalidParameterError(
                f"cua so [{self.params.L_minus}, {self.params.L_plus}] vuot mien L_f={pulse.L_f}")

    def sample_grid(self) -> np.ndarray:
        sp = self.params
        count = int(round((sp.L_plus - sp.L_minus) / sp.sample_dx))
        grid = sp.L_minus + sp.sample_dx * np.arange(count + 1)
        grid = grid[grid < sp.L_plus - 1e-12]
        return np.append(grid, sp.L_plus)

    def run(self) -> ShootingPath:
        sp = self.params
        mu = self.pulse.params.mu
        path = ShootingPath(pulse=self.pulse, params=sp)
        path.tail_gap = float(abs(self.pulse.potential(sp.L_minus) + mu))
        logger.info("Bat dau tich phan %s tren [%.1f, %.1f], tol=%.1e, |f'(phi)+mu| tai dau = %.3e",
                    self.pulse.label, sp.L_minus, sp.L_plus, sp.rtol, path.tail_gap)

        grid = self.sample_grid()
        edges = np.arange(sp.L_minus, sp.L_plus, sp.renorm_every)
        edges = np.append(edges[edges < sp.L_plus - 1e-12], sp.L_plus)

        M = orthonormalize(init_frame(sp.lam, self.pulse.params).matrix)
        for a, b in zip(edges[:-1], edges[1:]):
            last = b == edges[-1]
            inside = grid[(grid >= a - 1e-12) & ((grid <= b + 1e-12) if last else (grid < b - 1e-12))]
            t_eval = np.unique(np.clip(np.append(inside, b), a, b))
            sol = _integrate_segment(self.pulse, sp, a, b, M, t_eval=t_eval)
            for x, y in zip(sol.t, sol.y.T):
                if x == b and not last:
                    continue
                path.samples.append(_make_sample(float(x), y.reshape(4, 2)))
            M = orthonormalize(sol.y[:, -1].reshape(4, 2))
            path.renormalizations += 1
            logger.debug("Truc chuan hoa tai x=%.2f", b)

        self._add_steps_at_sign_changes(path)
        if sp.L_plus > path.reliable_until:
            logger.warning("L_plus=%.1f vuot reliable_until=%.1f: doi dau detA o duoi co the sai",
                           sp.L_plus, path.reliable_until)
        worst = max(abs(s.omega_drift) for s in path.samples)
        log_ok(logger, "Tich phan xong: %d mau, %d lan truc chuan, drift omega max=%.2e",
               len(path.samples), path.renormalizations, worst)
        return path

    def _add_steps_at_sign_changes(self, path: ShootingPath) -> None:
        """Thêm các bước trong của RK45 giữa hai mẫu lưới mà detA đổi dấu"""
        extra: List[PathSample] = []
        grid = path.samples
        for left, right in zip(grid[:-1], grid[1:]):
            if left.detA * right.detA >= 0:
                continue
            sol = _integrate_segment(self.pulse, self.params, left.x, right.x,
                                     left.frame.matrix, keep_steps=True,
                                     max_step=(right.x - left.x) / REFINE_STEPS)
            for x, y in zip(sol.t[1:-1], sol.y.T[1:-1]):
                extra.append(_make_sample(float(x), y.reshape(4, 2), on_grid=False))
        if extra:
            path.samples = sorted(path.samples + extra, key=lambda s: s.x)
            logger.debug("Them %d buoc RK45 quanh cac lan doi dau detA", len(extra))


def _make_sample(x: float, M: np.ndarray, on_grid: bool = True) -> PathSample:
    Q = orthonormalize(M)
    frame = Frame(Q)
    return PathSample(x=x, frame=frame, detA=det_a(frame), omega_drift=omega(Q[:, 0], Q[:, 1]),
                      plucker=plucker(frame), on_grid=on_grid)


def integrate_frame(pulse: FourierPulse, sp: Optional[ShootParams] = None) -> ShootingPath:
    return FrameShooter(pulse, sp).run()


def estimate_period(x: np.ndarray, values: np.ndarray) -> float:
    """
    Chu kỳ của tín hiệu lấy mẫu đều qua tự tương quan: cực đại địa phương đầu tiên
    sau lần đổi dấu đầu tiên của hàm tự tương quan
    """
    x = np.asarray(x, dtype=float)
    centered = np.asarray(values, dtype=float) - np.mean(values)
    if x.size < 4 or np.allclose(centered, 0.0):
        raise InvalidParameterError("tin hieu qua ngan hoac hang")
    dx = x[1] - x[0]
    corr = np.correlate(centered, centered, mode="full")[centered.size - 1:]
    corr = corr / np.arange(centered.size, 0, -1)
    negative = np.nonzero(corr < 0)[0]
    if negative.size == 0:
        raise InvalidParameterError("khong tim thay chu ky")
    start = negative[0]
    limit = centered.size // 2
    if start >= limit:
        raise InvalidParameterError("cua so qua ngan so voi chu ky")
    window = corr[start:limit]
    # cực đại địa phương đầu tiên, bỏ qua đỉnh cao hơn ở bội của chu kỳ
    rising = np.nonzero((window[1:-1] >= window[:-2]) & (window[1:-1] > window[2:]))[0]
    peak = start + (int(rising[0]) + 1 if rising.size else int(np.argmax(window)))
    # nội suy parabol quanh đỉnh
    if 0 < peak < corr.size - 1:
        y0, y1, y2 = corr[peak - 1], corr[peak], corr[peak + 1]
        denom = y0 - 2.0 * y1 + y2
        offset = 0.5 * (y0 - y2) / denom if denom != 0 else 0.0
    else:
        offset = 0.0
    return float((peak + offset) * dx)
