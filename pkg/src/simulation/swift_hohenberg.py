# Mô hình Swift-Hohenberg: phi tuyến, ma trận tuyến tính hoá, khung tiệm cận
"""
Phương trình Swift-Hohenberg dừng -u'''' - 2u'' - u + f(u) = 0 với
f(u) = νu² - u³ - μu, viết lại thành hệ bậc nhất 4 chiều Y' = B(x, λ) Y.

B(x, λ) = J·C(x, λ) với J là ma trận symplectic chuẩn và C đối xứng, nên hệ là
Hamilton và bảo toàn các mặt phẳng Lagrangian.
"""

from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from utils.errors import InvalidParameterError

ArrayLike = Union[float, np.ndarray]

# J = [[0, I], [-I, 0]]
SYMPLECTIC_J = np.array([
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
    [-1.0, 0.0, 0.0, 0.0],
    [0.0, -1.0, 0.0, 0.0],
])

LAMBDA_INF_MARGIN = 1.0


@dataclass(frozen=True)
class Params:
    """Tham số (ν, μ) của mô hình, yêu cầu μ > 0"""
    nu: float
    mu: float

    def __post_init__(self):
        if not np.isfinite(self.nu) or not np.isfinite(self.mu):
            raise InvalidParameterError(f"tham so khong huu han: nu={self.nu}, mu={self.mu}")
        if self.mu <= 0.0:
            raise InvalidParameterError(f"can mu > 0, nhan duoc mu={self.mu}")

    @property
    def gamma(self) -> float:
        """Hệ số dạng chuẩn γ = 38ν²/9 - 3"""
        return 38.0 * self.nu ** 2 / 9.0 - 3.0

    @property
    def f_prime_zero(self) -> float:
        return -self.mu


@dataclass(frozen=True)
class CoefficientMatrices:
    B: np.ndarray
    J: np.ndarray
    C: np.ndarray


@dataclass(frozen=True)
class AsymptoticFrames:
    """
    Cơ sở thực của các không gian con bất ổn định (Ru1, Ru2) và ổn định
    (Rs1, Rs2) của B∞(λ), cùng góc θ và mô-đun r dùng để dựng chúng
    """
    Ru1: np.ndarray
    Ru2: np.ndarray
    Rs1: np.ndarray
    Rs2: np.ndarray
    theta: float
    r: float

    @property
    def unstable(self) -> np.ndarray:
        return np.column_stack([self.Ru1, self.Ru2])

    @property
    def stable(self) -> np.ndarray:
        return np.column_stack([self.Rs1, self.Rs2])


def nonlinearity(u: ArrayLike, p: Params) -> ArrayLike:
    """f(u) = νu² - u³ - μu"""
    return p.nu * u ** 2 - u ** 3 - p.mu * u


def nonlinearity_deriv(u: ArrayLike, p: Params) -> ArrayLike:
    """f'(u) = 2νu - 3u² - μ"""
    return 2.0 * p.nu * u - 3.0 * u ** 2 - p.mu


def normal_form(x: ArrayLike, phi: float, p: Params) -> ArrayLike:
    """
    Xấp xỉ dạng chuẩn u_φ(x) = 2·sqrt(2μ/γ)·sech(x·sqrt(μ)/2)·cos(x + φ)

    Raises:
        InvalidParameterError: khi γ ≤ 0 (không có pulse trong vùng này)
    """
    gamma = p.gamma
    if gamma <= 0.0:
        raise InvalidParameterError(f"dang chuan can gamma > 0, gamma={gamma:.6g} (nu={p.nu})")
    amplitude = 2.0 * np.sqrt(2.0 * p.mu / gamma)
    return amplitude / np.cosh(np.asarray(x) * np.sqrt(p.mu) / 2.0) * np.cos(np.asarray(x) + phi)


def coefficient_matrix(potential: float, lam: float) -> CoefficientMatrices:
    """
    Dựng B, J, C tại một điểm với potential = f'(φ(x))

    Args:
        potential: giá trị f'(φ(x)) tại x
        lam: tham số phổ λ (thực)
    """
    a = lam + 1.0 - potential
    C = np.array([
        [a, 0.0, 0.0, 0.0],
        [0.0, -1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 1.0, -2.0],
    ])
    B = np.array([
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 1.0, -2.0],
        [-a, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
    ])
    return CoefficientMatrices(B=B, J=SYMPLECTIC_J.copy(), C=C)


def asymptotic_matrix(lam: float, p: Params) -> np.ndarray:
    """B∞(λ) = B(x, λ) với f'(0) = -μ"""
    return coefficient_matrix(p.f_prime_zero, lam).B


def _check_lambda(lam: float, p: Params) -> None:
    if lam + p.mu <= 0.0:
        raise InvalidParameterError(f"can lambda + mu > 0, lambda={lam}, mu={p.mu}")


def asymptotic_frames(lam: float, p: Params) -> AsymptoticFrames:
    """
    Khung tiệm cận dạng đóng từ θ = π - arctan(sqrt(λ+μ)), r = sqrt(1+λ+μ).

    Ru1 = (cosθ/r, 1, (2/√r + √r)cos(θ/2), cos(θ/2)/√r)
    Ru2 = (-sinθ/r, 0, (√r - 2/√r)sin(θ/2), -sin(θ/2)/√r)
    Rs1, Rs2: như trên nhưng đổi dấu thành phần 3 và 4.

    Raises:
        InvalidParameterError: khi λ + μ ≤ 0
    """
    _check_lambda(lam, p)
    theta = np.pi - np.arctan(np.sqrt(lam + p.mu))
    r = np.sqrt(1.0 + lam + p.mu)
    sr = np.sqrt(r)
    c2, s2 = np.cos(theta / 2.0), np.sin(theta / 2.0)

    Ru1 = np.array([np.cos(theta) / r, 1.0, (2.0 / sr + sr) * c2, c2 / sr])
    Ru2 = np.array([-np.sin(theta) / r, 0.0, (sr - 2.0 / sr) * s2, -s2 / sr])
    flip = np.array([1.0, 1.0, -1.0, -1.0])
    return AsymptoticFrames(Ru1=Ru1, Ru2=Ru2, Rs1=flip * Ru1, Rs2=flip * Ru2,
                            theta=float(theta), r=float(r))


def asymptotic_eigenvalues(lam: float, p: Params) -> np.ndarray:
    """
    Bốn giá trị riêng ±γ₁, ±γ̄₁ của B∞(λ), γ₁ = sqrt(r)·e^{iθ/2},
    sắp xếp theo phần thực tăng dần
    """
    _check_lambda(lam, p)
    theta = np.pi - np.arctan(np.sqrt(lam + p.mu))
    r = np.sqrt(1.0 + lam + p.mu)
    g1 = np.sqrt(r) * np.exp(0.5j * theta)
    values = np.array([-g1, -np.conj(g1), np.conj(g1), g1])
    return values[np.lexsort((values.imag, values.real))]


def is_hyperbolic(lam: float, p: Params, tol: float = 1e-12) -> bool:
    """B∞(λ) không có giá trị riêng trên trục ảo"""
    if lam + p.mu <= 0.0:
        return False
    return bool(np.min(np.abs(asymptotic_eigenvalues(lam, p).real)) > tol)


def asymptotic_period(lam: float, p: Params) -> float:
    """Chu kỳ π / Im γ₁ của quỹ đạo Plücker giới hạn khi x → +∞"""
    g1 = asymptotic_eigenvalues(lam, p)[-1]
    return float(np.pi / abs(g1.imag))


def lambda_infinity_bound(potential_samples: Iterable[float],
                          margin: float = LAMBDA_INF_MARGIN) -> float:
    """
    Cận trên phổ: λ∞ = max f'(φ(x)) + margin. Với mọi λ > max f'(φ)
    toán tử không có giá trị riêng, margin giữ khoảng cách an toàn.

    Args:
        potential_samples: các giá trị f'(φ(x)) trên lưới đủ mịn
    """
    values = np.asarray(list(potential_samples), dtype=float)
    if values.size == 0 or not np.all(np.isfinite(values)):
        raise InvalidParameterError("can mau potential huu han, khong rong")
    return float(values.max() + margin)
