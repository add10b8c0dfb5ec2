# -*- coding: utf-8 -*-
# Entry point: phân tích ổn định pulse Swift-Hohenberg
import argparse
import logging
import os
import sys

# Thêm đường dẫn src vào sys.path để import được modules
sys.path.append(os.path.join(os.path.dirname(os.path.abspath(__file__)), 'src'))

from cli.commands import (
    cmd_conjugate, cmd_plucker, cmd_pulse, cmd_report, cmd_spectrum, cmd_verify,
)
from cli.config import parse_phase
from utils.errors import InvalidParameterError, PulseFileError, SwiftHohenbergError
from utils.helpers import get_logger, setup_logging

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_USAGE = 2

logger = get_logger("main")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="file cau hinh JSON")
    parser.add_argument("--Lf", type=float, help="nua chieu dai mien Fourier (mac dinh 100)")
    parser.add_argument("--N", type=int, help="so mode Fourier duong")
    parser.add_argument("--Lcp", type=float, help="cua so tich phan [-Lcp, Lcp] (mac dinh 60)")
    parser.add_argument("--threshold", type=float, help="nguong Re(lambda) bat on dinh")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="main.py",
        description="Dem gia tri rieng bat on dinh cua pulse Swift-Hohenberg bang diem lien hop",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log muc DEBUG")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pulse", help="giai pulse doi xung va ghi ra file JSON")
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--phi", type=parse_phase, default=None, help="0 hoac pi")
    p.add_argument("--scale", type=float, default=None, help="he so nhan cho seed dang chuan")
    p.add_argument("--out", default="pulse.json")
    _add_common(p)
    p.set_defaults(handler=cmd_pulse)

    for name, handler, helptext in (
        ("spectrum", cmd_spectrum, "dem gia tri rieng bat on dinh"),
        ("conjugate", cmd_conjugate, "tim va phan loai diem lien hop"),
        ("plucker", cmd_plucker, "xuat toa do Plucker doc duong"),
        ("report", cmd_report, "bao cao day du: pho + diem lien hop"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("pulse_file")
        if name in ("conjugate", "plucker"):
            p.add_argument("--out", help="file CSV dau ra")
        _add_common(p)
        p.set_defaults(handler=handler)

    p = sub.add_parser("verify", help="chay bo kiem tra chap nhan")
    p.add_argument("--quick", action="store_true", help="chi chay cac duong mau giai tich")
    p.add_argument("--tolerances", help="file JSON ghi de dung sai theo ten tieu chi")
    p.set_defaults(handler=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(logging.DEBUG if args.verbose else logging.INFO)
    try:
        return args.handler(args)
    except (InvalidParameterError, PulseFileError) as e:
        logger.error("%s", e)
        return EXIT_USAGE
    except SwiftHohenbergError as e:
        logger.error("%s", e)
        return EXIT_NUMERICAL
    except KeyboardInterrupt:
        logger.warning("Bi dung boi nguoi dung")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
