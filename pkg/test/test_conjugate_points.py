import numpy as np
import pytest

from analysis.conjugate_points import (
    CrossingCase, check_no_asymptotic_crossings, classify, classify_frame, cross_check,
    format_report, sandwich_obstruction, scan_and_refine, stability_report,
)
from analysis.lagrangian import (
    Frame, count_train_entries, distance_to_nonsimple, sandwich_frame,
)
from simulation.fourier_pulse import FourierPulse
from simulation.frame_shooter import ShootParams, det_a, integrate_frame
from simulation.swift_hohenberg import Params, asymptotic_frames
from utils.errors import InvalidParameterError

P = Params(nu=1.6, mu=0.05)


# ==================== Phân loại ====================

def test_classify_regular_crossing():
    frame = Frame.from_columns([0.0, 1.0, 2.0, 0.0], [1.0, 6.0, 0.0, 2.0])
    record = classify_frame(0.0, frame)
    assert record.case is CrossingCase.I
    assert record.Q1 == pytest.approx(0.2)
    assert record.Q3 is None
    assert record.crossing_value == pytest.approx(0.2)
    assert record.is_simple


def test_classify_degenerate_crossing_uses_cubic_form():
    frame = Frame.from_columns([0.0, 0.0, 1.0, 0.0], [0.0, 1.0, 0.0, 1.0])
    record = classify_frame(0.0, frame)
    assert record.case is CrossingCase.II
    assert record.Q1 == pytest.approx(0.0, abs=1e-14)
    assert record.Q3 == pytest.approx(2.0)
    assert record.crossing_value == pytest.approx(2.0)


def test_classify_frame_inside_sandwich_plane():
    record = classify_frame(0.0, sandwich_frame())
    assert record.case is CrossingCase.III
    assert not record.is_simple


@pytest.mark.parametrize("theta", np.linspace(np.pi / 2 + 0.01, np.pi - 0.01, 7))
def test_sandwich_obstruction_never_vanishes(theta):
    value = sandwich_obstruction(theta)
    assert value == pytest.approx(-np.sin(theta / 2), abs=1e-14)
    assert value < -0.7


def test_asymptotic_theta_lies_in_obstruction_range():
    for lam in (0.0, 0.3, 1.2):
        theta = asymptotic_frames(lam, P).theta
        assert np.pi / 2 < theta < np.pi


def test_no_asymptotic_crossings_on_lambda_grid():
    assert check_no_asymptotic_crossings(P, np.linspace(0.0, 1.2, 25))
    assert check_no_asymptotic_crossings(Params(nu=1.6, mu=0.2), np.linspace(0.0, 2.0, 25))


def test_report_needs_converged_pulse():
    pulse = FourierPulse(params=P, phi=0.0, L_f=80.0, N=4, a=np.zeros(5))
    with pytest.raises(InvalidParameterError):
        stability_report(pulse)


class _SinePath:
    """detA(x) = sin x trên [0.5, 8], tin cậy đến x = 5"""
    reliable_until = 5.0

    def __init__(self):
        self.xs = np.linspace(0.5, 8.0, 151)
        self.dets = np.sin(self.xs)

    def reintegrate(self, x):
        return Frame.from_columns([np.sin(x), 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 1.0])


def test_roots_past_reliable_zone_are_set_aside():
    scan = scan_and_refine(_SinePath())
    assert scan.roots == pytest.approx([np.pi], abs=1e-7)
    assert scan.tail_roots == pytest.approx([2 * np.pi], abs=1e-7)
    assert scan.suspected_even == []


# ==================== Pulse tham chiếu ====================

@pytest.mark.slow
def test_phase_zero_conjugate_point(path_phi0):
    scan = scan_and_refine(path_phi0)
    assert scan.roots == pytest.approx([1.2400], abs=5e-2)
    assert scan.suspected_even == []
    record = classify(scan.roots[0], path_phi0)
    assert record.case is CrossingCase.I
    assert record.Q1 > 0
    assert record.is_simple


@pytest.mark.slow
def test_phase_pi_conjugate_points(path_phipi):
    scan = scan_and_refine(path_phipi)
    assert scan.roots == pytest.approx([-0.6310, 17.5887], abs=5e-2)
    for x in scan.roots:
        assert classify(x, path_phipi).case is not CrossingCase.III


@pytest.mark.slow
def test_stable_pulse_has_no_conjugate_points(path_stable):
    assert scan_and_refine(path_stable).roots == []


@pytest.mark.slow
def test_closed_form_matches_general_crossing_form(path_phi0):
    x_star = scan_and_refine(path_phi0).roots[0]
    record = classify(x_star, path_phi0)
    result = cross_check(record, path_phi0)
    assert result.order == 1
    assert result.value == pytest.approx(record.Q1, rel=1e-3, abs=1e-6)


@pytest.mark.slow
def test_stability_report_matches_spectrum(pulse_phi0):
    report = stability_report(pulse_phi0)
    assert report.counts_match
    assert report.hypothesis_ok
    assert report.asymptotic_ok
    assert report.lambda_inf > 1.0
    assert report.warnings == []
    text = format_report(report)
    assert text == format_report(report)
    assert text.splitlines()[-1].startswith("Verdict: MATCH")


# ==================== Độ bền và tính chất đường bắn ====================

REFERENCE = ["phi0", "phipi", "stable"]
EXPECTED_COUNTS = {"phi0": 1, "phipi": 2, "stable": 0}
VARIANTS = [
    {"renorm_every": 1.0},
    {"renorm_every": 20.0},
    {"L_minus": -80.0, "L_plus": 80.0},
]


@pytest.mark.slow
@pytest.mark.parametrize("variant", VARIANTS)
@pytest.mark.parametrize("name", REFERENCE)
def test_conjugate_points_are_robust(request, name, variant):
    base = scan_and_refine(request.getfixturevalue(f"path_{name}")).roots
    pulse = request.getfixturevalue(f"pulse_{name}")
    scan = scan_and_refine(integrate_frame(pulse, ShootParams(**variant)))
    assert len(base) == len(scan.roots) == EXPECTED_COUNTS[name]
    assert scan.tail_roots == []
    assert np.allclose(scan.roots, base, atol=1e-4)


@pytest.mark.slow
@pytest.mark.parametrize("name", REFERENCE)
def test_conjugate_points_survive_tolerance_halving(request, name):
    path = request.getfixturevalue(f"path_{name}")
    base = scan_and_refine(path).roots
    half = ShootParams(atol=path.params.atol / 2, rtol=path.params.rtol / 2)
    roots = scan_and_refine(integrate_frame(path.pulse, half)).roots
    assert len(roots) == len(base)
    assert np.allclose(roots, base, atol=1e-4)


@pytest.mark.slow
@pytest.mark.parametrize("name", ["phi0", "phipi"])
def test_crossing_frames_meet_sandwich_plane(request, name):
    path = request.getfixturevalue(f"path_{name}")
    for x_star in scan_and_refine(path).roots:
        record = classify(x_star, path)
        assert abs(record.p[0]) < 1e-7 and abs(record.p[3]) < 1e-7
        left = det_a(path.reintegrate(x_star - 1e-3))
        right = det_a(path.reintegrate(x_star + 1e-3))
        assert left * right < 0


@pytest.mark.slow
@pytest.mark.parametrize("name", REFERENCE)
def test_plucker_trajectory_enters_train_once_per_crossing(request, name):
    path = request.getfixturevalue(f"path_{name}")
    rows = path.plucker()
    assert count_train_entries(rows) == EXPECTED_COUNTS[name]
    if name == "stable":
        assert min(distance_to_nonsimple(r) for r in rows) > 0.1


@pytest.mark.slow
def test_stable_pulse_report(pulse_stable):
    report = stability_report(pulse_stable)
    assert list(report.unstable) == []
    assert report.conjugate_points == []
    assert report.counts_match and report.warnings == []
    assert format_report(report).splitlines()[-1].startswith("Verdict: MATCH")
