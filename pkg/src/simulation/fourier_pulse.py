# Tính pulse đối xứng bằng Galerkin Fourier + Newton
"""
Pulse đối xứng φ(x) = a₀ + 2·Σ a_k·cos(πkx/L_f) của phương trình dừng trên
miền tuần hoàn [-L_f, L_f].

Hệ Galerkin với các mode k = -N..N:
    F_k(a) = [-μ - (1 - k²π²/L_f²)²]·a_k - (a∗a∗a)_k + ν·(a∗a)_k = 0
Chỉ giải nửa hệ (a₀..a_N), phần còn lại suy ra từ a_{-k} = a_k.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np
from scipy import linalg
from scipy.integrate import trapezoid

from simulation.swift_hohenberg import Params, nonlinearity, nonlinearity_deriv, normal_form
from utils.errors import ConvergenceError, InvalidParameterError, PulseFileError
from utils.helpers import get_logger, log_ok, write_json

logger = get_logger("pulse")

DEFAULT_L_F = 100.0
DEFAULT_N = 256
NEWTON_TOL = 1e-12
NEWTON_MAX_ITER = 50
DOMAIN_SLACK = 1e-12

PULSE_FIELDS = ("nu", "mu", "phi", "L_f", "N", "coefficients", "residual_norm")


@dataclass
class FourierPulse:
    """
    Pulse Fourier đã (hoặc chưa) hội tụ.

    Attributes:
        params: tham số (ν, μ)
        phi: pha 0 hoặc π
        L_f: nửa chiều dài miền tuần hoàn
        N: số mode dương
        a: hệ số a₀..a_N (N+1 phần tử)
        residual_norm: max|F_k| tại nghiệm
        history: max|F_k| qua từng vòng Newton
    """
    params: Params
    phi: float
    L_f: float
    N: int
    a: np.ndarray
    residual_norm: float = float("nan")
    history: List[float] = field(default_factory=list)

    def __post_init__(self):
        self.a = np.asarray(self.a, dtype=float)
        if self.N < 1 or self.a.shape != (self.N + 1,):
            raise InvalidParameterError(f"can N >= 1 va N+1 he so, N={self.N}, len={self.a.size}")
        if self.L_f <= 0.0:
            raise InvalidParameterError(f"can L_f > 0, L_f={self.L_f}")
        self.phi = validate_phase(self.phi)

    @property
    def label(self) -> str:
        phase = "pi" if self.phi > 1.0 else "0"
        return f"phi={phase} nu={self.params.nu:g} mu={self.params.mu:g}"

    @property
    def wavenumbers(self) -> np.ndarray:
        return np.pi * np.arange(self.N + 1) / self.L_f

    def full_coefficients(self) -> np.ndarray:
        return expand_symmetric(self.a)

    def _check_domain(self, x: np.ndarray) -> None:
        if np.any(np.abs(x) > self.L_f + DOMAIN_SLACK):
            raise InvalidParameterError(f"x ngoai mien [-{self.L_f}, {self.L_f}]")

    def derivative(self, x: Union[float, np.ndarray], order: int = 0) -> Union[float, np.ndarray]:
        """
        Đạo hàm bậc `order` của chuỗi cosine tại x (x trong [-L_f, L_f])

        d^m/dx^m cos(wx) = w^m·cos(wx + mπ/2)
        """
        x_arr = np.asarray(x, dtype=float)
        self._check_domain(x_arr)
        w = self.wavenumbers[1:]
        phase = np.multiply.outer(x_arr, w) + order * np.pi / 2.0
        values = 2.0 * np.cos(phase) @ (self.a[1:] * w ** order)
        if order == 0:
            values = values + self.a[0]
        return float(values) if np.ndim(values) == 0 else values

    def evaluate(self, x: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        """φ(x) = a₀ + 2·Σ_{k≥1} a_k·cos(πkx/L_f)"""
        return self.derivative(x, 0)

    def potential(self, x: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        """f'(φ(x))"""
        return nonlinearity_deriv(self.evaluate(x), self.params)

    def stationary_residual(self, x: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        """-φ'''' - 2φ'' - φ + f(φ) tại từng điểm"""
        u = self.evaluate(x)
        return (-self.derivative(x, 4) - 2.0 * self.derivative(x, 2) - u
                + nonlinearity(u, self.params))

    def tail_decay(self, count: int = 8) -> float:
        """max |a_k| trên `count` mode cuối"""
        return float(np.max(np.abs(self.a[-count:])))


def validate_phase(phi: float) -> float:
    if abs(phi) < 1e-12:
        return 0.0
    if abs(phi - np.pi) < 1e-12:
        return float(np.pi)
    raise InvalidParameterError(f"pha phai la 0 hoac pi, nhan duoc phi={phi}")


def expand_symmetric(half: np.ndarray) -> np.ndarray:
    """(a₀..a_N) -> (a_{-N}..a_N)"""
    return np.concatenate([half[:0:-1], half])


def linear_symbol(N: int, L_f: float, mu: float) -> np.ndarray:
    """Ký hiệu tuyến tính -μ - (1 - (πk/L_f)²)² cho k = -N..N"""
    w2 = (np.pi * np.arange(-N, N + 1) / L_f) ** 2
    return -mu - (1.0 - w2) ** 2


def convolve2(a: np.ndarray) -> np.ndarray:
    """(a∗a)_k = Σ_{k1+k2=k} a_{k1}a_{k2}, cắt về |k| ≤ N"""
    N = (a.size - 1) // 2
    return np.convolve(a, a)[N:3 * N + 1]


def convolve3(a: np.ndarray) -> np.ndarray:
    """(a∗a∗a)_k, cắt về |k| ≤ N; tổng chỉ lấy trên |k_i| ≤ N"""
    N = (a.size - 1) // 2
    return np.convolve(np.convolve(a, a), a)[2 * N:4 * N + 1]


def residual(a: np.ndarray, p: Params, L_f: float) -> np.ndarray:
    """F(a) cho vector đầy đủ a_{-N..N}"""
    N = (a.size - 1) // 2
    return linear_symbol(N, L_f, p.mu) * a - convolve3(a) + p.nu * convolve2(a)


def jacobian(a: np.ndarray, p: Params, L_f: float) -> np.ndarray:
    """
    DF(a) đầy đủ (2N+1)×(2N+1):
        DF[k, j] = lin_k·δ_kj + 2ν·a_{k-j} - 3·(a∗a)_{k-j}
    trong đó a∗a là tích chập đầy đủ (|k-j| ≤ 2N, không cắt).
    """
    N = (a.size - 1) // 2
    k = np.arange(-N, N + 1)
    diff = np.subtract.outer(k, k) + 2 * N
    a_pad = np.zeros(4 * N + 1)
    a_pad[N:3 * N + 1] = a
    aa_full = np.convolve(a, a)
    return np.diag(linear_symbol(N, L_f, p.mu)) + 2.0 * p.nu * a_pad[diff] - 3.0 * aa_full[diff]


def _half_system(a_half: np.ndarray, p: Params, L_f: float) -> Tuple[np.ndarray, np.ndarray]:
    """Residual và Jacobian của nửa hệ k = 0..N"""
    N = a_half.size - 1
    a = expand_symmetric(a_half)
    F = residual(a, p, L_f)[N:]
    J_full = jacobian(a, p, L_f)[N:, :]
    J_half = J_full[:, N:].copy()
    J_half[:, 1:] += J_full[:, N - 1::-1]
    return F, J_half


def seed_from_normal_form(p: Params, phi: float, L_f: float = DEFAULT_L_F, N: int = DEFAULT_N,
                          scale: float = 1.0) -> FourierPulse:
    """
    Chiếu scale·u_φ lên cơ sở cosine bằng quy tắc hình thang với 4N+1 điểm

    a_k = (1/2L_f)·∫ u(x)·cos(πkx/L_f) dx
    """
    phi = validate_phase(phi)
    x = np.linspace(-L_f, L_f, 4 * N + 1)
    u = scale * normal_form(x, phi, p)
    modes = np.cos(np.multiply.outer(np.pi * np.arange(N + 1) / L_f, x))
    a = trapezoid(modes * u, x, axis=1) / (2.0 * L_f)
    seed = FourierPulse(params=p, phi=phi, L_f=L_f, N=N, a=a)
    logger.info("Seed %s: a0=%.6e, duoi |a_N|=%.3e", seed.label, a[0], abs(a[-1]))
    return seed


def newton_solve(seed: FourierPulse, tol: float = NEWTON_TOL,
                 max_iter: int = NEWTON_MAX_ITER) -> FourierPulse:
    """
    Newton trên nửa hệ đối xứng, dừng khi max|F_k| ≤ tol

    Raises:
        ConvergenceError: Jacobian suy biến hoặc quá max_iter vòng
    """
    p, L_f = seed.params, seed.L_f
    a_half = seed.a.copy()
    history: List[float] = []

    for iteration in range(max_iter + 1):
        F, J_half = _half_system(a_half, p, L_f)
        norm = float(np.max(np.abs(F)))
        history.append(norm)
        logger.debug("Newton %s vong %d: max|F|=%.3e", seed.label, iteration, norm)
        if not np.isfinite(norm):
            raise ConvergenceError("residual khong huu han", norm, iteration)
        if norm <= tol:
            pulse = FourierPulse(params=p, phi=seed.phi, L_f=L_f, N=seed.N, a=a_half,
                                 residual_norm=norm, history=history)
            log_ok(logger, "Pulse %s hoi tu sau %d vong, residual=%.3e, duoi=%.3e",
                   pulse.label, iteration, norm, pulse.tail_decay())
            return pulse
        if iteration == max_iter:
            break
        try:
            step = linalg.solve(J_half, -F)
        except linalg.LinAlgError as e:
            raise ConvergenceError(f"Jacobian suy bien: {e}", norm, iteration) from e
        a_half = a_half + step

    raise ConvergenceError("Newton khong hoi tu", history[-1], max_iter)


def save(pulse: FourierPulse, path: Union[str, Path]) -> Path:
    """Ghi pulse ra JSON với các khoá nu, mu, phi, L_f, N, coefficients, residual_norm"""
    payload = {
        "nu": pulse.params.nu,
        "mu": pulse.params.mu,
        "phi": pulse.phi,
        "L_f": pulse.L_f,
        "N": pulse.N,
        "coefficients": [float(c) for c in pulse.a],
        "residual_norm": pulse.residual_norm,
    }
    return write_json(path, payload)


def load(path: Union[str, Path]) -> FourierPulse:
    """
    Đọc pulse từ JSON

    Raises:
        PulseFileError: file hỏng, thiếu trường, sai kiểu, sai số hệ số
        InvalidParameterError: tham số vi phạm miền (ví dụ μ ≤ 0)
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise PulseFileError(f"khong doc duoc file: {e}", str(path)) from e
    except json.JSONDecodeError as e:
        raise PulseFileError(f"JSON hong: {e.msg}", str(path), line=e.lineno) from e

    if not isinstance(data, dict):
        raise PulseFileError("can mot doi tuong JSON", str(path))
    for name in PULSE_FIELDS:
        if name not in data:
            raise PulseFileError("thieu truong", str(path), field=name)
    try:
        N = int(data["N"])
        coefficients = np.asarray(data["coefficients"], dtype=float)
        nu, mu = float(data["nu"]), float(data["mu"])
        phi, L_f = float(data["phi"]), float(data["L_f"])
        residual_norm = float(data["residual_norm"])
    except (TypeError, ValueError) as e:
        raise PulseFileError(f"sai kieu du lieu: {e}", str(path)) from e
    if coefficients.shape != (N + 1,):
        raise PulseFileError(f"can {N + 1} he so, co {coefficients.size}", str(path),
                             field="coefficients")

    return FourierPulse(params=Params(nu=nu, mu=mu), phi=phi, L_f=L_f, N=N, a=coefficients,
                        residual_norm=residual_norm)
