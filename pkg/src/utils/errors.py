"""
Các lớp lỗi dùng chung cho toàn bộ dự án
Mọi lỗi do thư viện phát sinh đều kế thừa SwiftHohenbergError để CLI bắt một chỗ
"""

from typing import Optional


class SwiftHohenbergError(Exception):
    """Lỗi gốc của dự án"""


class InvalidParameterError(SwiftHohenbergError, ValueError):
    """Tham số vi phạm miền hợp lệ (μ ≤ 0, x ngoài miền, kích thước sai...)"""


class ConfigError(InvalidParameterError):
    """Cấu hình chạy không hợp lệ (lỗi người dùng, CLI trả mã 2)"""


class ConvergenceError(SwiftHohenbergError):
    """Newton không hội tụ hoặc Jacobian suy biến"""

    def __init__(self, message: str, last_residual: float = float("nan"), iterations: int = 0):
        super().__init__(f"{message} (residual={last_residual:.3e}, iterations={iterations})")
        self.last_residual = last_residual
        self.iterations = iterations


class IntegrationError(SwiftHohenbergError):
    """Bộ tích phân ODE thất bại (bước quá nhỏ, giá trị không hữu hạn)"""

    def __init__(self, message: str, x: float = float("nan")):
        super().__init__(f"{message} tai x={x:.6f}")
        self.x = x


class TransversalityError(SwiftHohenbergError):
    """ℓ(t) không hoành với mặt phẳng W: hệ graph suy biến"""

    def __init__(self, message: str, condition: float = float("inf")):
        super().__init__(f"{message} (cond={condition:.3e})")
        self.condition = condition


class CrossingError(SwiftHohenbergError):
    """Điểm t0 không phải crossing hợp lệ, hoặc crossing suy biến quá bậc cho phép"""


class PulseFileError(SwiftHohenbergError):
    """File pulse sai định dạng"""

    def __init__(self, message: str, path: str = "", line: Optional[int] = None,
                 field: Optional[str] = None):
        where = path
        if line is not None:
            where += f":{line}"
        if field is not None:
            where += f" [{field}]"
        super().__init__(f"{message} ({where})" if where else message)
        self.path = path
        self.line = line
        self.field = field
