# Đếm giá trị riêng bất ổn định của toán tử tuyến tính hoá
"""
Phổ của DF(a) (Jacobian Galerkin đầy đủ, đối xứng) xấp xỉ phổ của
L = -∂⁴ - 2∂² - 1 + f'(φ) trên miền tuần hoàn.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import linalg

from simulation.fourier_pulse import FourierPulse, jacobian
from utils.errors import InvalidParameterError, SwiftHohenbergError
from utils.helpers import get_logger

logger = get_logger("spectrum")

UNSTABLE_THRESHOLD = 1e-4


@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues: np.ndarray
    unstable: Tuple[float, ...]
    zero_mode: complex
    threshold: float

    @property
    def count(self) -> int:
        return len(self.unstable)


def eigenvalues_dense(M: np.ndarray) -> np.ndarray:
    """
    Toàn bộ giá trị riêng của ma trận vuông M

    Raises:
        InvalidParameterError: M rỗng hoặc không vuông
        SwiftHohenbergError: M chứa giá trị không hữu hạn
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise InvalidParameterError(f"can ma tran vuong khong rong, shape={M.shape}")
    if not np.all(np.isfinite(M)):
        raise SwiftHohenbergError("ma tran chua gia tri khong huu han")
    return linalg.eigvals(M)


def linearized_operator(pulse: FourierPulse) -> np.ndarray:
    return jacobian(pulse.full_coefficients(), pulse.params, pulse.L_f)


def count_unstable(pulse: FourierPulse, threshold: float = UNSTABLE_THRESHOLD) -> SpectrumReport:
    """
    Các giá trị riêng có Re λ > threshold, bỏ giá trị riêng gần 0 nhất
    (mode tịnh tiến), sắp xếp giảm dần

    Args:
        pulse: pulse đã hội tụ
        threshold: ngưỡng phần thực (mặc định 1e-4)
    """
    if threshold <= 0.0:
        raise InvalidParameterError(f"nguong phai duong, threshold={threshold}")
    values = eigenvalues_dense(linearized_operator(pulse))
    zero_index = int(np.argmin(np.abs(values)))
    zero_mode = complex(values[zero_index])
    if abs(zero_mode) > 1e-6:
        logger.warning("Mode tinh tien cua %s lech khoi 0: %.3e", pulse.label, abs(zero_mode))

    rest = np.delete(values, zero_index)
    unstable = tuple(sorted((float(v.real) for v in rest if v.real > threshold), reverse=True))
    logger.info("Pho %s: %d gia tri rieng bat on dinh %s", pulse.label, len(unstable),
                ["%.4f" % v for v in unstable])
    return SpectrumReport(eigenvalues=values, unstable=unstable, zero_mode=zero_mode,
                          threshold=threshold)


def translation_mode(pulse: FourierPulse) -> Tuple[float, float]:
    """
    Giá trị riêng gần 0 nhất và cosine giữa vector riêng của nó với
    vector sinh tịnh tiến (k·a_k)

    Returns:
        (eigenvalue, |cos góc|)
    """
    values, vectors = linalg.eig(linearized_operator(pulse))
    index = int(np.argmin(np.abs(values)))
    generator = np.arange(-pulse.N, pulse.N + 1) * pulse.full_coefficients()
    vector = vectors[:, index]
    cosine = abs(np.vdot(vector, generator)) / (np.linalg.norm(vector) * np.linalg.norm(generator))
    return float(values[index].real), float(cosine)
