import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from freejacobi.errors import DomainError
from freejacobi.exact import HalfIntegerParams
from freejacobi.mc_sim import (
    MCConfig,
    estimate_moments,
    gue_batch,
    jacobi_trace_powers,
    simulate_unitary_bm,
    unitary_step,
)
from freejacobi.moments import finite_moment


def _unitarity_error(u):
    eye = np.eye(u.shape[-1])
    return max(np.linalg.norm(x.conj().T @ x - eye) for x in u)


def test_config_validation():
    with pytest.raises(DomainError):
        MCConfig(d=4, m=3, p=2, t=1.0)
    with pytest.raises(DomainError):
        MCConfig(d=4, m=2, p=2, t=-1.0)
    with pytest.raises(DomainError):
        MCConfig(d=4, m=2, p=2, t=1.0, steps=0)
    with pytest.raises(DomainError):
        MCConfig(d=4, m=2, p=2, t=1.0, time_scale=0.0)
    assert MCConfig(d=8, m=2, p=3, t=2.0).physical_time == 0.25
    assert sum(MCConfig(d=8, m=2, p=3, t=1.0, samples=10, streams=3).stream_sizes()) == 10


def test_gue_normalisation():
    h = gue_batch(np.random.default_rng(1), 20_000, 3)
    assert np.allclose(h, np.conj(np.swapaxes(h, 1, 2)))
    assert np.var(h[:, 0, 0].real) == pytest.approx(1.0, abs=0.05)
    assert np.mean(np.abs(h[:, 0, 1]) ** 2) == pytest.approx(1.0, abs=0.05)
    assert np.mean(h[:, 0, 1].real ** 2) == pytest.approx(0.5, abs=0.03)


def test_step_is_the_matrix_exponential():
    rng = np.random.default_rng(3)
    for dt in (1e-4, 0.5):
        h = gue_batch(rng, 4, 6)
        u = unitary_step(h, dt)
        w, v = np.linalg.eigh(h)
        ref = (v * np.exp(1j * math.sqrt(dt) * w)[:, None, :]) @ np.conj(np.swapaxes(v, 1, 2))
        assert np.max(np.abs(u - ref)) < 1e-12


def test_zero_time_gives_identity():
    u = simulate_unitary_bm(5, 0.0, 10, 2, np.random.default_rng(0))
    assert np.array_equal(u, np.broadcast_to(np.eye(5), (2, 5, 5)))


def test_unitarity_over_many_steps():
    u = simulate_unitary_bm(32, 1.0 / 32, 1000, 2, np.random.default_rng(0))
    assert _unitarity_error(u) < 1e-10
    u = simulate_unitary_bm(16, 1.0, 100, 2, np.random.default_rng(1))
    assert _unitarity_error(u) < 1e-10


def test_scalar_case_stays_on_circle():
    u = simulate_unitary_bm(1, 2.0, 50, 8, np.random.default_rng(2))
    assert np.allclose(np.abs(u), 1.0)


def test_spectrum_of_J_in_unit_interval():
    u = simulate_unitary_bm(8, 0.3, 50, 20, np.random.default_rng(4))
    y = u[:, :3, :5]
    ev = np.linalg.eigvalsh(y @ np.conj(np.swapaxes(y, 1, 2)))
    assert ev.min() >= -1e-10 and ev.max() <= 1 + 1e-10
    vals = jacobi_trace_powers(u, 3, 5, 3)
    assert vals.shape == (20, 3)
    assert np.all(vals[:, 0] >= vals[:, 1] - 1e-12)


def test_time_zero_moments_are_one():
    res = estimate_moments(MCConfig(d=6, m=2, p=3, t=0.0, samples=7, streams=2), 3)
    assert res.mean == {1: 1.0, 2: 1.0, 3: 1.0}
    assert res.stderr == {1: 0.0, 2: 0.0, 3: 0.0}
    assert res.samples_used == 7


def test_determinism_and_executor_independence():
    cfg = MCConfig(d=6, m=2, p=3, t=1.0, steps=20, samples=60, seed=11, streams=3, batch=16)
    a = estimate_moments(cfg, 2)
    b = estimate_moments(cfg, 2)
    with ThreadPoolExecutor(3) as ex:
        c = estimate_moments(cfg, 2, executor=ex)
    assert a == b == c
    other = estimate_moments(MCConfig(d=6, m=2, p=3, t=1.0, steps=20, samples=60, seed=12, streams=3), 2)
    assert other.mean != a.mean


def test_small_calibration_against_exact_moments():
    cfg = MCConfig(d=6, m=3, p=3, t=1.0, steps=100, samples=2000, seed=5, streams=2)
    res = estimate_moments(cfg, 2)
    hp = HalfIntegerParams(3, 3, 6)
    for n in (1, 2):
        exact = finite_moment(n, hp)(1.0) / 3
        assert abs(res.mean[n] - exact) <= 3 * res.stderr[n] + 0.02


def test_doubling_steps_changes_little():
    base = dict(d=6, m=3, p=3, t=1.0, samples=1000, seed=8, streams=2)
    a = estimate_moments(MCConfig(steps=50, **base), 1)
    b = estimate_moments(MCConfig(steps=100, **base), 1)
    assert abs(a.mean[1] - b.mean[1]) < 3 * max(a.stderr[1], b.stderr[1])


def test_result_dict():
    res = estimate_moments(MCConfig(d=4, m=2, p=2, t=0.5, steps=10, samples=20), 2)
    doc = res.to_dict()
    assert [row["n"] for row in doc["moments"]] == [1, 2]
    assert doc["samples_used"] == 20 and doc["config"]["physical_time"] == 0.125
