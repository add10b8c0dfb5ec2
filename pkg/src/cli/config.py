# Cấu hình chạy: giá trị mặc định, file JSON, cờ dòng lệnh
"""
RunConfig gom toàn bộ tham số. Thứ tự ưu tiên: cờ dòng lệnh > file JSON > mặc định.
"""

import argparse
import json
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np

from analysis.conjugate_points import DEGENERACY_TOL, SIMPLICITY_THRESHOLD
from analysis.spectrum import UNSTABLE_THRESHOLD
from simulation.fourier_pulse import DEFAULT_L_F, DEFAULT_N, NEWTON_MAX_ITER, NEWTON_TOL
from simulation.frame_shooter import L_CP, RENORM_EVERY, SAMPLE_DX, ShootParams
from simulation.swift_hohenberg import Params
from utils.errors import ConfigError, InvalidParameterError


@dataclass
class PulseSettings:
    nu: Optional[float] = None
    mu: Optional[float] = None
    phi: float = 0.0
    scale: float = 1.0


@dataclass
class DiscretizationSettings:
    L_f: float = DEFAULT_L_F
    N: int = DEFAULT_N
    newton_tol: float = NEWTON_TOL
    max_iter: int = NEWTON_MAX_ITER


@dataclass
class ShootingSettings:
    L_cp: float = L_CP
    # None: chọn theo L_cp (tail_tolerance)
    atol: Optional[float] = None
    rtol: Optional[float] = None
    renorm_every: float = RENORM_EVERY
    sample_dx: float = SAMPLE_DX


@dataclass
class ThresholdSettings:
    unstable: float = UNSTABLE_THRESHOLD
    degeneracy: float = DEGENERACY_TOL
    simplicity: float = SIMPLICITY_THRESHOLD


@dataclass
class RunConfig:
    pulse: PulseSettings = field(default_factory=PulseSettings)
    discretization: DiscretizationSettings = field(default_factory=DiscretizationSettings)
    shooting: ShootingSettings = field(default_factory=ShootingSettings)
    thresholds: ThresholdSettings = field(default_factory=ThresholdSettings)

    def validate(self) -> "RunConfig":
        """
        Raises:
            ConfigError: ngưỡng không dương, L_cp > L_f, N < 1...
        """
        d, s, t = self.discretization, self.shooting, self.thresholds
        for name, value in (("unstable", t.unstable), ("degeneracy", t.degeneracy),
                            ("simplicity", t.simplicity), ("newton_tol", d.newton_tol),
                            ("atol", s.atol), ("rtol", s.rtol),
                            ("renorm_every", s.renorm_every), ("sample_dx", s.sample_dx),
                            ("L_f", d.L_f), ("L_cp", s.L_cp)):
            if value is not None and not value > 0:
                raise ConfigError(f"{name} phai duong, nhan duoc {value}")
        if d.N < 1 or d.max_iter < 1:
            raise ConfigError(f"can N >= 1 va max_iter >= 1 (N={d.N}, max_iter={d.max_iter})")
        if s.L_cp > d.L_f:
            raise ConfigError(f"L_cp={s.L_cp} vuot qua L_f={d.L_f}")
        return self

    def model_params(self) -> Params:
        if self.pulse.nu is None or self.pulse.mu is None:
            raise ConfigError("can ca --nu va --mu")
        try:
            return Params(nu=self.pulse.nu, mu=self.pulse.mu)
        except InvalidParameterError as e:
            raise ConfigError(str(e)) from e

    def shoot_params(self) -> ShootParams:
        s = self.shooting
        return ShootParams(L_minus=-s.L_cp, L_plus=s.L_cp, renorm_every=s.renorm_every,
                           atol=s.atol, rtol=s.rtol, sample_dx=s.sample_dx)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def parse_phase(text: str) -> float:
    """'0' hoặc 'pi' (hoặc số gần 0/π)"""
    key = str(text).strip().lower()
    if key in ("pi", "π"):
        return float(np.pi)
    try:
        value = float(key)
    except ValueError:
        raise argparse.ArgumentTypeError(f"pha phai la 0 hoac pi, nhan duoc '{text}'")
    if abs(value) < 1e-9:
        return 0.0
    if abs(value - np.pi) < 1e-9:
        return float(np.pi)
    raise argparse.ArgumentTypeError(f"pha phai la 0 hoac pi, nhan duoc '{text}'")


def _merge(section: Any, values: Dict[str, Any], where: str) -> Any:
    known = {f.name for f in fields(section)}
    unknown = set(values) - known
    if unknown:
        raise ConfigError(f"khoa khong hop le trong [{where}]: {sorted(unknown)}")
    return replace(section, **values)


def load_config(path: Optional[str]) -> RunConfig:
    """Đọc file cấu hình JSON (các mục pulse, discretization, shooting, thresholds)"""
    config = RunConfig()
    if not path:
        return config
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise ConfigError(f"khong doc duoc file cau hinh {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"file cau hinh {path} hong o dong {e.lineno}: {e.msg}") from e
    if not isinstance(data, dict):
        raise ConfigError("file cau hinh phai la mot doi tuong JSON")
    for name, section in data.items():
        if not hasattr(config, name) or not isinstance(section, dict):
            raise ConfigError(f"muc cau hinh khong hop le: {name}")
        setattr(config, name, _merge(getattr(config, name), section, name))
    return config


# Cờ dòng lệnh -> (mục, khoá)
FLAG_FIELDS = {
    "nu": ("pulse", "nu"),
    "mu": ("pulse", "mu"),
    "phi": ("pulse", "phi"),
    "scale": ("pulse", "scale"),
    "Lf": ("discretization", "L_f"),
    "N": ("discretization", "N"),
    "Lcp": ("shooting", "L_cp"),
    "threshold": ("thresholds", "unstable"),
}


def build_config(args: argparse.Namespace) -> RunConfig:
    """Cấu hình từ --config rồi ghi đè bằng các cờ đã được đặt"""
    config = load_config(getattr(args, "config", None))
    for flag, (section, key) in FLAG_FIELDS.items():
        value = getattr(args, flag, None)
        if value is not None:
            setattr(getattr(config, section), key, value)
    return config.validate()
