# Các lệnh con: pulse, spectrum, conjugate, plucker, report, verify
"""
Mỗi lệnh nhận argparse.Namespace, in kết quả ra stdout và trả về mã thoát.
Lỗi thư viện được bắt ở main.py.
"""

import argparse
import json

import pandas as pd

from analysis.conjugate_points import classify, format_report, scan_and_refine, stability_report
from analysis.lagrangian import count_train_entries, distance_to_nonsimple
from analysis.spectrum import count_unstable
from cli.config import build_config
from cli.verification import run_verification
from simulation import fourier_pulse
from simulation.frame_shooter import integrate_frame
from utils.errors import ConfigError
from utils.helpers import get_logger, log_ok, read_json, write_table

logger = get_logger("cli")


def cmd_pulse(args: argparse.Namespace) -> int:
    config = build_config(args)
    d = config.discretization
    seed = fourier_pulse.seed_from_normal_form(config.model_params(), config.pulse.phi,
                                               L_f=d.L_f, N=d.N, scale=config.pulse.scale)
    pulse = fourier_pulse.newton_solve(seed, tol=d.newton_tol, max_iter=d.max_iter)
    out = fourier_pulse.save(pulse, args.out)
    print(f"pulse {pulse.label}: residual={pulse.residual_norm:.3e}, "
          f"tail={pulse.tail_decay():.3e}, iterations={len(pulse.history) - 1}")
    log_ok(logger, "Da luu pulse vao %s", out)
    return 0


def cmd_spectrum(args: argparse.Namespace) -> int:
    config = build_config(args)
    pulse = fourier_pulse.load(args.pulse_file)
    report = count_unstable(pulse, config.thresholds.unstable)
    print(f"Pulse: {pulse.label}")
    if report.unstable:
        table = pd.DataFrame({"lambda": list(report.unstable)})
        print(table.to_string(index=False, float_format=lambda v: f"{v:.6f}"))
    else:
        print("unstable eigenvalues: none")
    return 0


def cmd_conjugate(args: argparse.Namespace) -> int:
    config = build_config(args)
    pulse = fourier_pulse.load(args.pulse_file)
    path = integrate_frame(pulse, config.shoot_params())
    if args.out:
        write_table(args.out, path.to_dataframe())
        log_ok(logger, "Da ghi quy dao vao %s", args.out)
    scan = scan_and_refine(path)
    records = [classify(x, path, config.thresholds.degeneracy) for x in scan.roots]
    print(f"Pulse: {pulse.label}")
    if not records:
        print("conjugate points: none")
    else:
        table = pd.DataFrame([{"x*": r.x_star, "case": r.case.value, "Q1": r.Q1,
                               "||M||": r.simplicity_norm} for r in records])
        print(table.to_string(index=False, float_format=lambda v: f"{v:.6f}"))
    for x in scan.suspected_even:
        print(f"[WARNING] suspected even-order crossing near x={x:.6f}")
    return 0


def cmd_plucker(args: argparse.Namespace) -> int:
    config = build_config(args)
    pulse = fourier_pulse.load(args.pulse_file)
    path = integrate_frame(pulse, config.shoot_params())
    table = path.to_dataframe()
    if args.out:
        write_table(args.out, table)
        log_ok(logger, "Da ghi toa do Plucker vao %s", args.out)
    rows = table[["P12", "P13", "P14", "P23", "P24", "P34"]].to_numpy()
    print(f"Pulse: {pulse.label}")
    print(f"train entries = {count_train_entries(rows)}")
    print(f"min distance to non-simple point = "
          f"{min(distance_to_nonsimple(r) for r in rows):.6f}")
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    config = build_config(args)
    pulse = fourier_pulse.load(args.pulse_file)
    report = stability_report(pulse, config.shoot_params(), config.thresholds.unstable,
                              config.thresholds.degeneracy)
    print(format_report(report))
    return 0 if report.counts_match and report.hypothesis_ok else 1


def cmd_verify(args: argparse.Namespace) -> int:
    tolerances = {}
    if args.tolerances:
        try:
            tolerances = read_json(args.tolerances)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"khong doc duoc file dung sai {args.tolerances}: {e}") from e
    checks = run_verification(quick=args.quick, tolerances=tolerances)
    for check in checks:
        print(check.line())
    failed = [c.name for c in checks if not c.passed]
    print(f"{len(checks) - len(failed)}/{len(checks)} passed")
    return 1 if failed else 0
