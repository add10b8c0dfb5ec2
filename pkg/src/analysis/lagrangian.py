# Hình học Lagrangian: khung, toạ độ Plücker, dạng crossing bậc cao, chỉ số Maslov
"""
Đường Lagrangian ℓ(t) được cho bởi một khung 2n×n phụ thuộc t. Tại t0, với mặt
phẳng W hoành với ℓ(t0), ℓ(t) là đồ thị của A(t): ℓ(t0) → W. Dạng crossing bậc j

    Q⁽ʲ⁾(v) = dʲ/dtʲ ⟨v, J·A(t)·v⟩ tại t0,  v ∈ ℓ(t0) ∩ ℓ*

được tính bằng sai phân trung tâm cộng một bước Richardson. Bậc thấp nhất
không suy biến quyết định đóng góp của crossing vào chỉ số Maslov.
"""

from dataclasses import dataclass, field
from math import ceil, factorial
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg
from scipy.optimize import brentq, minimize_scalar

from utils.errors import CrossingError, InvalidParameterError, TransversalityError
from utils.helpers import get_logger

logger = get_logger("lagrangian")

BASE_STEP = 1e-2
MAX_ORDER = 5
DEGENERACY_TOL = 1e-6
KERNEL_TOL = 1e-6
LAGRANGIAN_TOL = 1e-9
MAX_GRAPH_CONDITION = 1e12
DIP_TOL = 1e-6

# Thứ tự toạ độ Plücker
PLUCKER_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
PLUCKER_LABELS = ("P12", "P13", "P14", "P23", "P24", "P34")
NONSIMPLE_POINT = np.array([0.0, 0.0, 0.0, 1.0, 0.0, 0.0])


@dataclass(frozen=True)
class Frame:
    """Khung 2n×n, các cột sinh một mặt phẳng n chiều trong R^{2n}"""
    matrix: np.ndarray

    def __post_init__(self):
        M = np.array(self.matrix, dtype=float)
        if M.ndim != 2 or M.shape[0] != 2 * M.shape[1] or M.shape[1] == 0:
            raise InvalidParameterError(f"khung phai co dang 2n x n, shape={M.shape}")
        object.__setattr__(self, "matrix", M)

    @classmethod
    def from_columns(cls, *columns: Sequence[float]) -> "Frame":
        return cls(np.column_stack(columns))

    @property
    def n(self) -> int:
        return self.matrix.shape[1]

    @property
    def X(self) -> np.ndarray:
        return self.matrix[: self.n]

    @property
    def Y(self) -> np.ndarray:
        return self.matrix[self.n:]

    def orthonormal(self) -> "Frame":
        return Frame(orthonormalize(self.matrix))

    def transform(self, psi: np.ndarray) -> "Frame":
        return Frame(np.asarray(psi) @ self.matrix)


@dataclass
class LagrangianPath:
    """
    Đường ℓ(t), t ∈ [t_start, t_end]. frame_at phải xác định trên một lân cận
    của đoạn này (dạng crossing lấy sai phân hai phía, kể cả tại đầu mút).
    """
    frame_at: Callable[[float], Frame]
    t_start: float
    t_end: float

    def __post_init__(self):
        if not self.t_start < self.t_end:
            raise InvalidParameterError(f"can t_start < t_end, [{self.t_start}, {self.t_end}]")

    def sample(self, num: int = 201) -> List[Tuple[float, Frame]]:
        return [(float(t), self.frame_at(float(t)))
                for t in np.linspace(self.t_start, self.t_end, num)]


@dataclass(frozen=True)
class CrossingFormResult:
    """
    Kết quả dạng crossing tại t0.

    Attributes:
        order: bậc j thấp nhất không suy biến
        value: Q⁽ʲ⁾ trên vector kernel chuẩn hoá (kernel nhiều chiều: trị riêng lớn nhất theo |.|)
        signature: (p, q) số trị riêng dương/âm của Q⁽ʲ⁾ trên kernel
        kernel: cơ sở trực chuẩn của ℓ(t0) ∩ ℓ*
        lower_forms: các ma trận Q⁽ⁱ⁾, i < j (đều suy biến)
    """
    t0: float
    order: int
    value: float
    signature: Tuple[int, int]
    form: np.ndarray
    kernel: np.ndarray
    lower_forms: Tuple[np.ndarray, ...] = ()

    @property
    def contribution(self) -> int:
        """Đóng góp tại điểm trong: p - q nếu j lẻ, 0 nếu j chẵn"""
        if self.order % 2 == 0:
            return 0
        return self.signature[0] - self.signature[1]


@dataclass(frozen=True)
class CrossingContribution:
    t: float
    order: int
    signature: Tuple[int, int]
    contribution: float
    endpoint: bool


@dataclass
class MaslovResult:
    index: float
    crossings: List[CrossingContribution] = field(default_factory=list)


# ==================== Đại số tuyến tính symplectic ====================

def symplectic_matrix(n: int = 2) -> np.ndarray:
    """J₂ₙ = [[0, I], [-I, 0]]"""
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


def omega(u: np.ndarray, v: np.ndarray) -> float:
    """ω(u, v) = ⟨u, J v⟩"""
    u = np.asarray(u, dtype=float)
    return float(u @ symplectic_matrix(u.size // 2) @ np.asarray(v, dtype=float))


def orthonormalize(M: np.ndarray) -> np.ndarray:
    """QR với đường chéo R dương: giữ hướng của khung và liên tục theo M"""
    Q, R = np.linalg.qr(np.asarray(M, dtype=float))
    signs = np.sign(np.diag(R))
    signs[signs == 0] = 1.0
    return Q * signs


def is_lagrangian(frame: Frame, tol: float = LAGRANGIAN_TOL) -> Tuple[bool, float]:
    """
    Kiểm tra hạng đủ và XᵀY = YᵀX

    Returns:
        (đúng/sai, residual ‖XᵀY - YᵀX‖ tương đối)
    """
    M = frame.matrix
    scale = max(np.linalg.norm(M) ** 2, 1e-300)
    if np.linalg.matrix_rank(M) < frame.n:
        return False, float("inf")
    X, Y = frame.X, frame.Y
    res = float(np.linalg.norm(X.T @ Y - Y.T @ X) / scale)
    return res <= tol, res


def is_symplectic(psi: np.ndarray, tol: float = 1e-10) -> bool:
    psi = np.asarray(psi, dtype=float)
    J = symplectic_matrix(psi.shape[0] // 2)
    return bool(np.linalg.norm(psi.T @ J @ psi - J) <= tol * max(1.0, np.linalg.norm(psi) ** 2))


def random_symplectic(n: int = 2, rng: Optional[np.random.Generator] = None,
                      scale: float = 0.3) -> np.ndarray:
    """Ψ = expm(J·S) với S đối xứng ngẫu nhiên"""
    rng = np.random.default_rng() if rng is None else rng
    S = rng.normal(scale=scale, size=(2 * n, 2 * n))
    return linalg.expm(symplectic_matrix(n) @ (S + S.T) / 2.0)


def complement_frame(frame: Frame) -> Frame:
    """J·ℓ = ℓ^⊥ cho ℓ Lagrangian; luôn hoành với ℓ"""
    Q = orthonormalize(frame.matrix)
    return Frame(symplectic_matrix(frame.n) @ Q)


def adapted_complement(K: np.ndarray, R: np.ndarray) -> Frame:
    """
    W = (ℓ* ⊖ K) ⊕ J·K với K = ℓ(t0) ∩ ℓ* (K, R đã trực chuẩn).

    W Lagrangian, hoành với ℓ(t0) và chứa phần bù của K trong ℓ*, nên
    ℓ(t) ∩ ℓ* ≠ {0} khi và chỉ khi Π·J·A(t)·Π suy biến, ở mọi bậc.
    """
    n = R.shape[1]
    rest = R @ linalg.null_space(K.T @ R) if K.shape[1] < n else np.zeros((2 * n, 0))
    return Frame(np.hstack([rest, symplectic_matrix(n) @ K]))


def _check_transverse(L0: np.ndarray, Wm: np.ndarray) -> None:
    cond = np.linalg.cond(np.hstack([L0, -Wm]))
    if not np.isfinite(cond) or cond > MAX_GRAPH_CONDITION:
        raise TransversalityError("W khong hoanh voi l(t0)", cond)


def sandwich_frame() -> Frame:
    """Mặt phẳng sandwich span(e2, e3) trong R⁴"""
    return Frame(np.eye(4)[:, [1, 2]])


def transform_path(path: LagrangianPath, psi: np.ndarray) -> LagrangianPath:
    psi = np.asarray(psi, dtype=float)
    return LagrangianPath(frame_at=lambda t: path.frame_at(t).transform(psi),
                          t_start=path.t_start, t_end=path.t_end)


# ==================== Toạ độ Plücker (n = 2) ====================

def plucker(frame: Frame, rank_tol: float = 1e-12) -> np.ndarray:
    """
    Toạ độ Plücker chuẩn hoá (P12, P13, P14, P23, P24, P34) của span(a, b),
    P_ij = a_i·b_j - a_j·b_i

    Raises:
        InvalidParameterError: khung không phải 4×2 hoặc hạng < 2
    """
    if frame.matrix.shape != (4, 2):
        raise InvalidParameterError("toa do Plucker chi dinh nghia cho khung 4x2")
    a, b = frame.matrix[:, 0], frame.matrix[:, 1]
    P = np.array([a[i] * b[j] - a[j] * b[i] for i, j in PLUCKER_PAIRS])
    norm = np.linalg.norm(P)
    if norm <= rank_tol * max(np.linalg.norm(a) * np.linalg.norm(b), 1e-300):
        raise InvalidParameterError("khung suy bien (hang < 2)")
    return P / norm


def plucker_trajectory(frames: Sequence[Frame]) -> np.ndarray:
    """
    Toạ độ Plücker dọc đường, dấu chọn liên tục: mẫu đầu có toạ độ khác 0
    đầu tiên dương, các mẫu sau cùng phía với mẫu trước
    """
    rows = np.array([plucker(f) for f in frames])
    if rows.size == 0:
        return rows.reshape(0, 6)
    first = rows[0][np.abs(rows[0]) > 1e-12]
    if first.size and first[0] < 0:
        rows[0] = -rows[0]
    for i in range(1, len(rows)):
        if rows[i] @ rows[i - 1] < 0:
            rows[i] = -rows[i]
    return rows


def plucker_relation(P: np.ndarray) -> float:
    """P12·P34 - P13·P24 + P14·P23 (bằng 0 với mọi 2-mặt phẳng)"""
    P12, P13, P14, P23, P24, P34 = P
    return float(P12 * P34 - P13 * P24 + P14 * P23)


def lagrangian_plucker_residual(P: np.ndarray) -> float:
    """ω(a, b)/‖a∧b‖ = P13 + P24, bằng 0 khi mặt phẳng Lagrangian"""
    return float(P[1] + P[4])


def sandwich_train_contains(point: Sequence[float], tol: float = 1e-12) -> bool:
    """Điểm (x, y, z) có thuộc miền train {(x, y, 0): (x ± ½)² + y² ≤ ¼} không"""
    x, y, z = point
    if abs(z) > tol:
        return False
    return min((x - 0.5) ** 2, (x + 0.5) ** 2) + y ** 2 <= 0.25 + tol


def count_train_entries(rows: np.ndarray, tol: float = 1e-3) -> int:
    """Số lần P14 đổi dấu tại điểm mà (P12, P13) nằm trong miền train"""
    count = 0
    for prev, cur in zip(rows[:-1], rows[1:]):
        if prev[2] == 0.0 or prev[2] * cur[2] > 0:
            continue
        w = prev[2] / (prev[2] - cur[2])
        hit = prev + w * (cur - prev)
        if sandwich_train_contains((hit[0], hit[1], 0.0), tol):
            count += 1
    return count


def distance_to_nonsimple(P: np.ndarray) -> float:
    """Khoảng cách tới điểm không đơn (0, 0, 0, ±1, 0, 0)"""
    P = np.asarray(P, dtype=float)
    return float(min(np.linalg.norm(P - NONSIMPLE_POINT), np.linalg.norm(P + NONSIMPLE_POINT)))


# ==================== Ma trận đồ thị A(t) ====================

def _graph_solve(Lt: np.ndarray, Wm: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Giải [L(t) | -W]·(c, w) = rhs, trả về w"""
    n = Lt.shape[1]
    S = np.hstack([Lt, -Wm])
    cond = np.linalg.cond(S)
    if not np.isfinite(cond) or cond > MAX_GRAPH_CONDITION:
        raise TransversalityError("l(t) khong hoanh voi W", cond)
    return linalg.solve(S, rhs)[n:]


def graph_matrix(path: LagrangianPath, t0: float, W: Frame, t: float) -> np.ndarray:
    """
    A(t): R^{2n} → W, với v + A(t)v ∈ ℓ(t) cho v ∈ ℓ(t0) và A = 0 trên ℓ(t0)^⊥

    Raises:
        TransversalityError: ℓ(t0) ∩ W ≠ {0} hoặc ℓ(t) ∩ W ≠ {0}
    """
    L0 = orthonormalize(path.frame_at(t0).matrix)
    Lt = orthonormalize(path.frame_at(t).matrix)
    Wm = orthonormalize(W.matrix)
    _check_transverse(L0, Wm)
    return Wm @ _graph_solve(Lt, Wm, L0) @ L0.T


def _pairing(path: LagrangianPath, t0: float, W: Frame, V: np.ndarray,
             L0: np.ndarray, t: float) -> np.ndarray:
    """Vᵀ·J·A(t)·V (đã đối xứng hoá)"""
    Lt = orthonormalize(path.frame_at(t).matrix)
    Wm = orthonormalize(W.matrix)
    AV = Wm @ _graph_solve(Lt, Wm, L0) @ (L0.T @ V)
    G = V.T @ symplectic_matrix(L0.shape[1]) @ AV
    return (G + G.T) / 2.0


def _central_weights(order: int) -> np.ndarray:
    """Trọng số sai phân trung tâm 2j+1 điểm cho đạo hàm bậc j"""
    offsets = np.arange(-order, order + 1)
    V = np.vander(offsets, increasing=True).T.astype(float)
    rhs = np.zeros(2 * order + 1)
    rhs[order] = factorial(order)
    return linalg.solve(V, rhs)


def _path_speed(path: LagrangianPath, t0: float, delta: float = 1e-4) -> float:
    """‖dΠ/dt‖ với Π là phép chiếu trực giao lên ℓ(t)"""
    Qp = orthonormalize(path.frame_at(t0 + delta).matrix)
    Qm = orthonormalize(path.frame_at(t0 - delta).matrix)
    return float(np.linalg.norm(Qp @ Qp.T - Qm @ Qm.T) / (2.0 * delta))


def _derivative(g: Callable[[float], np.ndarray], t0: float, order: int, h: float) -> np.ndarray:
    """Đạo hàm bậc `order` tại t0 với bước h và h/2, ghép Richardson"""
    weights = _central_weights(order)
    offsets = np.arange(-order, order + 1)

    def stencil(step: float) -> np.ndarray:
        total = sum(w * g(t0 + m * step) for w, m in zip(weights, offsets) if w != 0.0)
        return total / step ** order

    p = 2 * ceil((order + 1) / 2)
    coarse, fine = stencil(h), stencil(h / 2.0)
    return (2 ** p * fine - coarse) / (2 ** p - 1)


class _FormEvaluator:
    """Đạo hàm của t ↦ Vᵀ·J·A(t)·V, dùng chung bộ nhớ đệm các giá trị đã tính"""

    def __init__(self, path: LagrangianPath, t0: float, V: np.ndarray,
                 W: Optional[Frame], base_step: float):
        self.path = path
        self.t0 = t0
        self.V = V
        self.L0 = orthonormalize(path.frame_at(t0).matrix)
        self.W = complement_frame(Frame(self.L0)) if W is None else W
        _check_transverse(self.L0, orthonormalize(self.W.matrix))
        self.base_step = base_step
        self.speed = max(1.0, _path_speed(path, t0))
        self._cache: Dict[float, np.ndarray] = {}

    def pairing(self, t: float) -> np.ndarray:
        if t not in self._cache:
            self._cache[t] = _pairing(self.path, self.t0, self.W, self.V, self.L0, t)
        return self._cache[t]

    def form(self, order: int) -> np.ndarray:
        # bước tăng theo bậc để sai số làm tròn không lấn át
        h = self.base_step * order / self.speed
        return _derivative(self.pairing, self.t0, order, h)


# ==================== Dạng crossing ====================

def _intersection_basis(L0: np.ndarray, R: np.ndarray, tol: float) -> np.ndarray:
    """Cơ sở trực chuẩn của span(L0) ∩ span(R) (cả hai đã trực chuẩn)"""
    n = L0.shape[1]
    null = linalg.null_space(np.hstack([L0, -R]), rcond=tol / np.sqrt(2.0))
    if null.shape[1] == 0:
        return np.zeros((L0.shape[0], 0))
    return linalg.orth(L0 @ null[:n])


def _intersection_gap(frame: Frame, R: np.ndarray) -> float:
    """Giá trị kỳ dị nhỏ nhất của [L | R]: bằng 0 khi có giao không tầm thường"""
    L = orthonormalize(frame.matrix)
    return float(linalg.svdvals(np.hstack([L, R]))[-1])


def crossing_form(path: LagrangianPath, t0: float, reference: Frame,
                  max_order: int = MAX_ORDER, W: Optional[Frame] = None,
                  base_step: float = BASE_STEP, degeneracy_tol: float = DEGENERACY_TOL,
                  kernel_tol: float = KERNEL_TOL) -> CrossingFormResult:
    """
    Bậc j thấp nhất để Q⁽ʲ⁾ không suy biến trên ker = ℓ(t0) ∩ ℓ*, cùng với
    giá trị và chữ ký của nó

    Args:
        path: đường Lagrangian
        t0: điểm crossing
        reference: mặt phẳng tham chiếu ℓ*
        max_order: bậc lớn nhất được thử
        W: mặt phẳng Lagrangian hoành với ℓ(t0), mặc định (ℓ* ⊖ ker) ⊕ J·ker.
            Q⁽¹⁾ không phụ thuộc W; các bậc cao hơn chỉ phản ánh đúng giao
            ℓ(t) ∩ ℓ* khi W chứa phần bù của ker trong ℓ*

    Raises:
        CrossingError: t0 không phải crossing, crossing không cô lập, kernel suy biến
            một phần, hoặc mọi bậc ≤ max_order đều suy biến
        TransversalityError: W không hoành với ℓ(t) gần t0
    """
    R = orthonormalize(reference.matrix)
    L0 = orthonormalize(path.frame_at(t0).matrix)
    K = _intersection_basis(L0, R, kernel_tol)
    if K.shape[1] == 0:
        raise CrossingError(f"t0={t0:.6g} khong phai crossing (giao tam thuong)")

    reach = 10.0 * base_step
    if min(_intersection_gap(path.frame_at(t0 - reach), R),
           _intersection_gap(path.frame_at(t0 + reach), R)) < kernel_tol:
        raise CrossingError(f"crossing tai t0={t0:.6g} khong co lap")

    if W is None:
        W = adapted_complement(K, R)
    evaluator = _FormEvaluator(path, t0, K, W, base_step)
    lower: List[np.ndarray] = []
    for order in range(1, max_order + 1):
        form = evaluator.form(order)
        eig = linalg.eigvalsh(form)
        small = np.abs(eig) <= degeneracy_tol
        if np.all(small):
            logger.debug("Q^(%d) suy bien tai t0=%.6g: %s", order, t0, eig)
            lower.append(form)
            continue
        if np.any(small):
            raise CrossingError(f"Q^({order}) suy bien mot phan tren kernel tai t0={t0:.6g}")
        value = float(eig[np.argmax(np.abs(eig))])
        signature = (int(np.sum(eig > 0)), int(np.sum(eig < 0)))
        return CrossingFormResult(t0=t0, order=order, value=value, signature=signature,
                                  form=form, kernel=K, lower_forms=tuple(lower))

    raise CrossingError(f"moi dang crossing den bac {max_order} deu suy bien tai t0={t0:.6g}")


def crossing_form_value(path: LagrangianPath, t0: float, v: Sequence[float], order: int,
                        W: Optional[Frame] = None, base_step: float = BASE_STEP) -> float:
    """Q⁽ʲ⁾(v) trên vector v ∈ ℓ(t0) cho trước, không chuẩn hoá"""
    if order < 1:
        raise InvalidParameterError(f"bac phai >= 1, order={order}")
    V = np.asarray(v, dtype=float).reshape(-1, 1)
    return float(_FormEvaluator(path, t0, V, W, base_step).form(order)[0, 0])


def first_order_form_frame(path: LagrangianPath, t0: float, u: Sequence[float],
                           dt: float = 1e-4) -> float:
    """
    Q⁽¹⁾ từ khung: ⟨X u, Ẏ u⟩ - ⟨Y u, Ẋ u⟩, với v = [X; Y]·u
    (dùng trực tiếp khung của path, không trực chuẩn hoá)
    """
    u = np.asarray(u, dtype=float)
    frame = path.frame_at(t0)

    def columns(t: float) -> np.ndarray:
        return path.frame_at(t).matrix @ u

    dv = _derivative(columns, t0, 1, dt)
    n = frame.n
    Xu, Yu = frame.X @ u, frame.Y @ u
    return float(Xu @ dv[n:] - Yu @ dv[:n])


def eigenvalue_motion(path: LagrangianPath, t0: float, reference: Frame, ts: Sequence[float],
                      W: Optional[Frame] = None, kernel_tol: float = KERNEL_TOL) -> np.ndarray:
    """
    Trị riêng của Π·J·A(t)·Π (Π chiếu lên ker) theo t

    Returns:
        mảng (len(ts), dim ker), mỗi hàng sắp xếp tăng dần
    """
    R = orthonormalize(reference.matrix)
    L0 = orthonormalize(path.frame_at(t0).matrix)
    K = _intersection_basis(L0, R, kernel_tol)
    if K.shape[1] == 0:
        raise CrossingError(f"t0={t0:.6g} khong phai crossing (giao tam thuong)")
    W = adapted_complement(K, R) if W is None else W
    _check_transverse(L0, orthonormalize(W.matrix))
    return np.array([linalg.eigvalsh(_pairing(path, t0, W, K, L0, float(t))) for t in ts])


# ==================== Chỉ số Maslov ====================

def _crossing_det(path: LagrangianPath, R: np.ndarray, t: float) -> float:
    return float(np.linalg.det(np.hstack([orthonormalize(path.frame_at(t).matrix), R])))


def find_crossings(path: LagrangianPath, reference: Frame, num_samples: int = 401,
                   zero_tol: float = 1e-12, dip_tol: float = DIP_TOL) -> List[float]:
    """
    Các t có ℓ(t) ∩ ℓ* ≠ {0}: đổi dấu của det[L(t) | ℓ*] (tinh chỉnh bằng brentq),
    điểm mẫu bằng 0, và các cực tiểu địa phương của |det| gần 0 không đổi dấu
    """
    R = orthonormalize(reference.matrix)
    ts = np.linspace(path.t_start, path.t_end, num_samples)
    d = np.array([_crossing_det(path, R, float(t)) for t in ts])
    f = lambda t: _crossing_det(path, R, t)  # noqa: E731

    found: List[float] = [float(t) for t, v in zip(ts, d) if abs(v) <= zero_tol]
    for i in range(num_samples - 1):
        if abs(d[i]) <= zero_tol or abs(d[i + 1]) <= zero_tol:
            continue
        if d[i] * d[i + 1] < 0:
            found.append(float(brentq(f, ts[i], ts[i + 1], xtol=1e-13)))
    for i in range(1, num_samples - 1):
        a, b, c = abs(d[i - 1]), abs(d[i]), abs(d[i + 1])
        if zero_tol < b < dip_tol and b <= a and b <= c and d[i - 1] * d[i + 1] > 0:
            res = minimize_scalar(lambda t: abs(f(t)), bounds=(ts[i - 1], ts[i + 1]),
                                  method="bounded", options={"xatol": 1e-12})
            if abs(res.fun) < 1e3 * zero_tol:
                found.append(float(res.x))
    return sorted(found)


def maslov_index(path: LagrangianPath, reference: Frame, max_order: int = MAX_ORDER,
                 num_samples: int = 401, W: Optional[Frame] = None,
                 base_step: float = BASE_STEP) -> MaslovResult:
    """
    Chỉ số Maslov của ℓ(t) so với ℓ* trên [t_start, t_end].

    Điểm trong: j lẻ đóng góp p - q, j chẵn đóng góp 0.
    Đầu mút: ½·sign Q⁽ʲ⁾.
    """
    result = MaslovResult(index=0.0)
    span = path.t_end - path.t_start
    for t in find_crossings(path, reference, num_samples):
        endpoint = min(abs(t - path.t_start), abs(t - path.t_end)) <= 1e-9 * max(1.0, span)
        form = crossing_form(path, t, reference, max_order=max_order, W=W, base_step=base_step)
        if endpoint:
            contribution = 0.5 * float(form.signature[0] - form.signature[1])
        else:
            contribution = float(form.contribution)
        result.crossings.append(CrossingContribution(t=t, order=form.order,
                                                     signature=form.signature,
                                                     contribution=contribution,
                                                     endpoint=endpoint))
        result.index += contribution
        logger.info("Crossing t=%.6f bac %d chu ky %s -> %+g", t, form.order,
                    form.signature, contribution)
    return result


# ==================== Đường mẫu giải tích ====================

def path_one() -> LagrangianPath:
    """Đường mẫu có crossing chính quy tại s = 0"""
    def frame_at(s: float) -> Frame:
        return Frame.from_columns(
            [-0.5 * s ** 2 + 2.0 * s, 1.0, 2.0 - s, s ** 3 / 6.0 - s ** 2],
            [-3.0 * s ** 2 + 1.0, 6.0, -6.0 * s, s ** 3 - s + 2.0],
        )
    return LagrangianPath(frame_at=frame_at, t_start=-1.0, t_end=1.0)


def path_two() -> LagrangianPath:
    """Đường mẫu có crossing bậc ba tại s = 0 (Q1 = Q2 = 0)"""
    def frame_at(s: float) -> Frame:
        return Frame.from_columns(
            [-0.5 * s ** 2, 1.0, -s, s ** 3 / 6.0],
            [-3.0 * s ** 2 + 1.0, 6.0, -6.0 * s, s ** 3 - s],
        )
    return LagrangianPath(frame_at=frame_at, t_start=-1.0, t_end=1.0)


def path_one_complement() -> Frame:
    """W = span(e1, e4) = (sandwich)^⊥"""
    return Frame(np.eye(4)[:, [0, 3]])


def fixture_paths() -> Tuple[LagrangianPath, LagrangianPath]:
    """(ℓ₁, ℓ₂): crossing chính quy và crossing bậc ba tại s = 0 với mặt phẳng sandwich"""
    return path_one(), path_two()
