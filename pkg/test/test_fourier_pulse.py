import json

import numpy as np
import pytest

from simulation import fourier_pulse as fp
from simulation.swift_hohenberg import Params, normal_form
from utils.errors import ConvergenceError, InvalidParameterError, PulseFileError

P = Params(nu=1.6, mu=0.05)


def _brute_convolution(a, order):
    N = (a.size - 1) // 2
    out = np.zeros_like(a)
    ks = range(-N, N + 1)
    for k in ks:
        total = 0.0
        if order == 2:
            for k1 in ks:
                k2 = k - k1
                if -N <= k2 <= N:
                    total += a[k1 + N] * a[k2 + N]
        else:
            for k1 in ks:
                for k2 in ks:
                    k3 = k - k1 - k2
                    if -N <= k3 <= N:
                        total += a[k1 + N] * a[k2 + N] * a[k3 + N]
        out[k + N] = total
    return out


def test_convolutions_match_direct_sums():
    rng = np.random.default_rng(3)
    a = rng.normal(size=13)
    assert np.allclose(fp.convolve2(a), _brute_convolution(a, 2), atol=1e-13)
    assert np.allclose(fp.convolve3(a), _brute_convolution(a, 3), atol=1e-13)


def test_jacobian_matches_finite_differences():
    rng = np.random.default_rng(7)
    a = 0.1 * rng.normal(size=17)
    J = fp.jacobian(a, P, 10.0)
    h = 1e-6
    for j in (0, 5, 8, 16):
        e = np.zeros_like(a)
        e[j] = h
        column = (fp.residual(a + e, P, 10.0) - fp.residual(a - e, P, 10.0)) / (2 * h)
        assert np.allclose(J[:, j], column, atol=1e-8)


def test_jacobian_symmetric_for_symmetric_coefficients():
    a = fp.expand_symmetric(np.array([0.2, 0.1, -0.05, 0.01, 0.002]))
    J = fp.jacobian(a, P, 20.0)
    assert np.allclose(J, J.T)


def test_expand_symmetric():
    assert np.array_equal(fp.expand_symmetric(np.array([1.0, 2.0, 3.0])),
                          np.array([3.0, 2.0, 1.0, 2.0, 3.0]))


def test_seed_reconstructs_normal_form():
    seed = fp.seed_from_normal_form(P, 0.0)
    assert seed.N == fp.DEFAULT_N and seed.L_f == fp.DEFAULT_L_F
    assert seed.evaluate(0.0) == pytest.approx(normal_form(0.0, 0.0, P), abs=1e-8)
    assert seed.evaluate(3.0) == pytest.approx(normal_form(3.0, 0.0, P), abs=1e-8)
    # biên ±L_f chỉ tuần hoàn tới ~1e-6 nên đuôi dừng quanh 1e-9
    assert abs(seed.a[-1]) < 1e-8


def test_zero_scale_seed_gives_trivial_solution():
    seed = fp.seed_from_normal_form(P, 0.0, L_f=20.0, N=32, scale=0.0)
    pulse = fp.newton_solve(seed)
    assert np.all(pulse.a == 0.0)
    assert pulse.residual_norm == 0.0


def test_phase_must_be_zero_or_pi():
    with pytest.raises(InvalidParameterError):
        fp.seed_from_normal_form(P, 1.0)


def test_newton_gives_up_after_max_iter():
    seed = fp.seed_from_normal_form(P, 0.0)
    with pytest.raises(ConvergenceError) as info:
        fp.newton_solve(seed, max_iter=1)
    assert info.value.last_residual > fp.NEWTON_TOL


@pytest.mark.slow
def test_converged_pulse_residual_and_convergence(pulse_phi0):
    assert pulse_phi0.residual_norm <= 1e-12
    history = pulse_phi0.history
    assert len(history) >= 2
    assert history[-1] <= max(1e3 * history[-2] ** 2, 1e-14)


@pytest.mark.slow
def test_converged_pulse_solves_ode_pointwise(pulse_phi0, pulse_phipi):
    x = np.linspace(-50.0, 50.0, 1001)
    for pulse in (pulse_phi0, pulse_phipi):
        assert np.max(np.abs(pulse.stationary_residual(x))) < 1e-6
        assert pulse.tail_decay() < 1e-10


@pytest.mark.slow
def test_pulse_is_even_and_bounded_to_domain(pulse_phi0):
    x = np.linspace(0.0, 40.0, 81)
    assert np.allclose(pulse_phi0.evaluate(x), pulse_phi0.evaluate(-x), atol=1e-14)
    assert pulse_phi0.evaluate(pulse_phi0.L_f) == pytest.approx(pulse_phi0.evaluate(-pulse_phi0.L_f))
    with pytest.raises(InvalidParameterError):
        pulse_phi0.evaluate(pulse_phi0.L_f + 1.0)


@pytest.mark.slow
def test_phase_pi_pulse_has_negative_center(pulse_phi0, pulse_phipi):
    assert pulse_phi0.evaluate(0.0) > 0.0
    assert pulse_phipi.evaluate(0.0) < 0.0


@pytest.mark.slow
def test_save_load_round_trip_is_exact(pulse_phipi, tmp_path):
    path = fp.save(pulse_phipi, tmp_path / "pulse.json")
    data = json.loads(path.read_text(encoding="utf-8"))
    assert set(data) == set(fp.PULSE_FIELDS)
    loaded = fp.load(path)
    assert np.array_equal(loaded.a, pulse_phipi.a)
    assert loaded.params == pulse_phipi.params
    assert loaded.phi == pulse_phipi.phi
    assert loaded.residual_norm == pulse_phipi.residual_norm


def _write(tmp_path, payload):
    path = tmp_path / "p.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


def _valid_payload():
    return {"nu": 1.6, "mu": 0.05, "phi": 0.0, "L_f": 10.0, "N": 2,
            "coefficients": [0.1, 0.05, 0.01], "residual_norm": 1e-13}


def test_load_rejects_missing_field(tmp_path):
    payload = _valid_payload()
    del payload["coefficients"]
    with pytest.raises(PulseFileError) as info:
        fp.load(_write(tmp_path, payload))
    assert info.value.field == "coefficients"


def test_load_rejects_wrong_coefficient_count(tmp_path):
    payload = _valid_payload()
    payload["N"] = 5
    with pytest.raises(PulseFileError):
        fp.load(_write(tmp_path, payload))


def test_load_reports_line_of_broken_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "nu": 1.6,\n  "mu": ,\n}', encoding="utf-8")
    with pytest.raises(PulseFileError) as info:
        fp.load(path)
    assert info.value.line == 3


def test_load_rejects_nonpositive_mu(tmp_path):
    payload = _valid_payload()
    payload["mu"] = 0.0
    with pytest.raises(InvalidParameterError):
        fp.load(_write(tmp_path, payload))
