# Hàm tiện ích, xử lý dữ liệu chung
"""
Log theo kiểu [HH:MM:SS] [TAG] thông điệp, cộng vài hàm đọc/ghi JSON và CSV
"""

import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Union

import pandas as pd

OK = 25
logging.addLevelName(OK, "OK")

LOG_FORMAT = "[%(asctime)s] [%(levelname)s] %(message)s"
LOG_DATEFMT = "%H:%M:%S"

_configured = False


def setup_logging(level: Union[int, str] = logging.INFO) -> None:
    """
    Cấu hình handler console cho logger gốc "sh" (chỉ một lần)

    Args:
        level: mức log, ví dụ logging.DEBUG hoặc "INFO"
    """
    global _configured
    root = logging.getLogger("sh")
    if not _configured:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT, LOG_DATEFMT))
        root.addHandler(handler)
        root.propagate = False
        _configured = True
    root.setLevel(level)


def get_logger(name: str) -> logging.Logger:
    """Logger con của "sh", ví dụ get_logger("pulse") -> "sh.pulse" """
    return logging.getLogger(f"sh.{name}")


def log_ok(logger: logging.Logger, message: str, *args) -> None:
    logger.log(OK, message, *args)


def write_json(path: Union[str, Path], payload: Dict[str, Any]) -> Path:
    """Ghi dict ra file JSON (ensure_ascii=False, indent=2), trả về đường dẫn"""
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, ensure_ascii=False, indent=2), encoding="utf-8")
    return path


def read_json(path: Union[str, Path]) -> Any:
    """Đọc JSON; lỗi cú pháp để nguyên json.JSONDecodeError cho bên gọi xử lý"""
    return json.loads(Path(path).read_text(encoding="utf-8"))


def write_table(path: Union[str, Path], table: pd.DataFrame) -> Path:
    """Ghi DataFrame ra CSV với độ chính xác đầy đủ"""
    path = Path(path)
    table.to_csv(path, index=False, float_format="%.12g")
    return path
