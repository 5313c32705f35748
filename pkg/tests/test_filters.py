import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fecg_anc.errors import ConditioningError, ContractError, DivergenceError
from fecg_anc.filters import LMS, NLMS, RLS, make_filter, run_filter
from fecg_anc.signals import Regressor, Signal, tap_matrix

from conftest import linear_plant


def normal_equations(U, d, delta, lam=1.0):
    """Exponentially weighted regularised least squares, solved directly."""
    n, M = U.shape
    g = lam ** np.arange(n - 1, -1, -1)
    R = lam ** n / delta * np.eye(M) + (U * g[:, None]).T @ U
    return np.linalg.solve(R, (U * g[:, None]).T @ d)


def test_lms_zero_weights_pass_desired_through():
    out = LMS(3, 0.1).step([0.3, -2.0, 1.0], 5.0)
    assert (out.y, out.e) == (0.0, 5.0)


def test_lms_two_hand_steps():
    f = LMS(1, 0.5)
    out = f.step([1.0], 1.0)
    assert (out.y, out.e, f.w.tolist()) == (0.0, 1.0, [0.5])
    out = f.step([1.0], 1.0)
    assert (out.y, out.e, f.w.tolist()) == (0.5, 0.5, [0.75])


def test_lms_accepts_regressor_objects():
    r = Regressor(2).push(1.0)
    assert LMS(2, 0.1).step(r, 1.0).e == 1.0


def test_dimension_mismatch():
    with pytest.raises(ContractError):
        LMS(3).step([1.0, 2.0], 0.0)


def test_divergence_names_step():
    f = LMS(1, 10.0)
    with pytest.raises(DivergenceError) as info, np.errstate(over="ignore", invalid="ignore"):
        for _ in range(2000):
            f.step([1e10], 1e10)
    assert info.value.step is not None


def test_nlms_zero_regressor_keeps_weights():
    f = NLMS(3, w=[0.1, 0.2, 0.3])
    f.step([0, 0, 0], 7.0)
    assert f.w.tolist() == [0.1, 0.2, 0.3]


def test_nlms_exact_one_step_fit():
    f = NLMS(1, mu=1.0, eps=0.0)
    out = f.step([2.0], 4.0)
    assert (out.y, out.e, f.w.tolist()) == (0.0, 4.0, [2.0])


def test_nlms_projection_step():
    f = NLMS(2, mu=1.0, eps=1e-6)
    f.step([1.0, 1.0], 2.0)
    # w' = 2 u / (1e-6 + 2)
    np.testing.assert_allclose(f.w, [2 / (2 + 1e-6)] * 2, rtol=1e-15)
    assert abs(f.w @ [1.0, 1.0] - 2.0) < 1e-5


def test_nlms_step_size_range():
    with pytest.raises(ContractError):
        NLMS(2, mu=2.0)


def test_rls_single_tap_hand_evaluation():
    f = RLS(1, lam=1.0, delta=100.0)
    out = f.step([1.0], 1.0)
    assert (out.y, out.e) == (0.0, 1.0)
    np.testing.assert_allclose(f.w, [100 / 101], rtol=1e-15)
    np.testing.assert_allclose(f.P, [[100 / 101]], rtol=1e-12)


def test_rls_zero_regressor():
    f = RLS(3, lam=0.9, w=[1.0, 2.0, 3.0])
    P0 = f.P.copy()
    f.step([0, 0, 0], 4.0)
    assert f.w.tolist() == [1.0, 2.0, 3.0]
    np.testing.assert_allclose(f.P, P0 / 0.9, rtol=1e-15)


def test_rls_conditioning_error():
    f = RLS(2)
    f.P = -np.eye(2)
    with pytest.raises(ConditioningError):
        f.step([1.0, 1.0], 0.0)


@pytest.mark.parametrize("lam", [1.0, 0.95])
def test_rls_matches_normal_equations(lam):
    rng = np.random.default_rng(3)
    U = rng.standard_normal((50, 4))
    d = rng.standard_normal(50)
    f = RLS(4, lam=lam, delta=100.0)
    for n in range(50):
        f.step(U[n], d[n])
        ref = normal_equations(U[: n + 1], d[: n + 1], 100.0, lam)
        np.testing.assert_allclose(f.w, ref, rtol=1e-6, atol=1e-9)


def test_rls_p_symmetric_and_finite(synthetic_recording):
    rec = synthetic_recording
    f = RLS(10, lam=0.98)
    U = tap_matrix(rec.data[:, 7], 10)
    for n in range(rec.n_samples):
        f.step(U[n], rec.data[n, 1])
        asym = np.abs(f.P - f.P.T).max()
        assert asym <= 1e-8 * np.abs(f.P).max()
    assert np.all(np.isfinite(f.P))


@given(st.sampled_from(["lms", "nlms", "rls"]), st.integers(0, 2**32 - 1))
@settings(max_examples=30, deadline=None)
def test_error_is_desired_minus_output(kind, seed):
    rng = np.random.default_rng(seed)
    f = make_filter(kind, 3)
    for _ in range(20):
        u, d = rng.standard_normal(3), float(rng.standard_normal())
        out = f.step(u, d)
        assert out.e == d - out.y
        assert out.y + out.e == pytest.approx(d, abs=1e-15 * max(1.0, abs(d), abs(out.y)))


@pytest.mark.parametrize("filt", [LMS(4, 0.01), NLMS(4), RLS(4, 0.999)], ids=["lms", "nlms", "rls"])
def test_stationary_plant_identification(filt):
    x, d, w = linear_plant(11, 5000, order=4, sigma=0.01)
    run_filter(d, x, filt)
    assert np.abs(filt.w - w).max() < 0.05


def test_perfect_cancellation_rls():
    rng = np.random.default_rng(0)
    x = rng.standard_normal(400)
    # weak prior: with delta=100 the regulariser alone leaves |1 - w| ~ 1e-4
    res = run_filter(Signal(x), Signal(x), RLS(1, lam=1.0, delta=1e6))
    assert np.abs(res.e[101:]).max() < 1e-6


def test_zero_reference_returns_desired():
    d = np.random.default_rng(1).standard_normal(300)
    for f in (LMS(5), NLMS(5), RLS(5)):
        res = run_filter(d, np.zeros(300), f)
        np.testing.assert_array_equal(res.e, d)


def test_synthetic_impulse_recovery():
    # d = 0.8 * reference + fetal-like impulse train
    rng = np.random.default_rng(5)
    ref = rng.standard_normal(3000)
    impulses = np.zeros(3000)
    impulses[100::110] = 0.5
    d = 0.8 * ref + impulses
    res = run_filter(d, ref, RLS(4, lam=0.999))
    tail = slice(500, None)
    residual = res.e[tail] - impulses[tail]
    assert np.mean(residual ** 2) < 0.05 * np.mean(d[tail] ** 2)


def test_run_filter_length_mismatch():
    with pytest.raises(ContractError):
        run_filter(np.zeros(5), np.zeros(4), LMS(2))
