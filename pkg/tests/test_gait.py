import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pulleyopt.gait import (
    CSV_COLUMNS,
    GaitTrajectory,
    NoCyclesError,
    TrajectoryError,
    detect_events,
    load_trajectory,
    resample,
    save_trajectory,
    step_metrics,
    synthesize_gait,
)


def _write(tmp_path, rows, header=",".join(CSV_COLUMNS)):
    path = tmp_path / "traj.csv"
    path.write_text(header + "\n" + "\n".join(rows) + "\n")
    return path


def _row(t, z="0.1"):
    return ",".join([str(t), "0.05", "0.1", z, "-0.05", "0.1", "0.1", "0.05", "-0.1", "0.1", "-0.05", "-0.1", "0.1"])


def test_load_three_frames(tmp_path):
    traj = load_trajectory(_write(tmp_path, [_row(0.0), _row(0.01), _row(0.02)]))
    assert traj.n_frames == 3
    assert traj.sample_rate == pytest.approx(100.0)


def test_load_decreasing_time_names_row(tmp_path):
    with pytest.raises(TrajectoryError, match=":3:"):
        load_trajectory(_write(tmp_path, [_row(0.01), _row(0.0), _row(0.02)]))


def test_load_nan_names_column_and_row(tmp_path):
    with pytest.raises(TrajectoryError, match=r":3: column 'la_z'"):
        load_trajectory(_write(tmp_path, [_row(0.0), _row(0.01, z="nan"), _row(0.02)]))


def test_load_missing_column(tmp_path):
    header = ",".join(CSV_COLUMNS[:-1])
    with pytest.raises(TrajectoryError, match="rp_z"):
        load_trajectory(_write(tmp_path, [_row(0.0)[:-4]], header=header))


def test_load_unparseable(tmp_path):
    with pytest.raises(TrajectoryError, match=":2: column 't'"):
        load_trajectory(_write(tmp_path, [_row("abc"), _row(0.01)]))


def test_load_nonuniform(tmp_path):
    with pytest.raises(TrajectoryError, match="non-uniform"):
        load_trajectory(_write(tmp_path, [_row(0.0), _row(0.01), _row(0.05)]))


def test_coincident_attachments_rejected():
    p = np.zeros((2, 3))
    q = np.ones((2, 3))
    with pytest.raises(TrajectoryError, match="coincide"):
        GaitTrajectory([0, 0.01], p, p, q, p)


def test_synthesize_frame_count_and_antiphase():
    traj = synthesize_gait(speed=1.0, cadence=100, forward_excursion=0.58, duration=10, rate=100)
    assert traj.n_frames == 1000
    half = 60  # half of the 1.2 s stride at 100 Hz
    xl = traj.left_anterior[:-half, 0]
    xr = traj.right_anterior[half:, 0]
    np.testing.assert_allclose(xl, xr, atol=1e-9)


def test_synthesize_zero_lift_flat():
    traj = synthesize_gait(lift_height=0.0, duration=3)
    assert np.ptp(traj.left_anterior[:, 2]) == 0.0
    assert np.ptp(traj.right_posterior[:, 2]) == 0.0


def test_synthesize_cycle_range_exact():
    traj = synthesize_gait(forward_excursion=0.58, duration=10)
    x = traj.left_anterior[:, 0]
    for k in range(8):
        assert np.ptp(x[120 * k:120 * (k + 1)]) == pytest.approx(0.58, abs=1e-9)


@pytest.mark.parametrize("kw", [{"duration": 0}, {"rate": -1}, {"duration": -2}])
def test_synthesize_rejects(kw):
    with pytest.raises(ValueError):
        synthesize_gait(**kw)


def _brute_extrema(x):
    """Frames not lower (higher) than both neighbours, first frame of a plateau."""
    lo, hi = [], []
    for i in range(1, len(x) - 1):
        if x[i] < x[i - 1] and x[i] <= x[i + 1]:
            lo.append(i)
        if x[i] > x[i - 1] and x[i] >= x[i + 1]:
            hi.append(i)
    return lo, hi


def test_events_match_brute_force_scan(gait):
    for leg in ("left", "right"):
        ev = detect_events(gait, leg)
        lo, hi = _brute_extrema(gait.attachment(leg + "_anterior")[:, 0])
        assert list(ev.toe_offs) == lo
        assert list(ev.heel_strikes) == hi
        assert len(ev.toe_offs) == len(ev.heel_strikes) == 5


def test_events_at_analytic_extrema(gait):
    ev = detect_events(gait, "left")
    # x = A sin(2 pi t / 1.2): maxima at 0.3 + 1.2k, minima at 0.9 + 1.2k
    assert list(ev.heel_strikes) == [30 + 120 * k for k in range(5)]
    assert list(ev.toe_offs) == [90 + 120 * k for k in range(5)]


def test_constant_trajectory_has_no_cycles():
    p = np.tile([0.05, 0.1, 0.1], (200, 1))
    q = np.tile([-0.05, 0.1, 0.1], (200, 1))
    traj = GaitTrajectory(np.arange(200) / 100, p, q, p * [1, -1, 1], q * [1, -1, 1])
    with pytest.raises(NoCyclesError, match="no cycles"):
        detect_events(traj, "left")


def test_events_ignore_jitter():
    rng = np.random.default_rng(3)
    traj = synthesize_gait(duration=6)
    noisy = traj.left_anterior + rng.normal(0, 0.002, traj.left_anterior.shape)
    t2 = GaitTrajectory(traj.t, noisy, traj.left_posterior, traj.right_anterior, traj.right_posterior)
    ev = detect_events(t2, "left")
    assert len(ev.toe_offs) == 5 and len(ev.heel_strikes) == 5


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, 1.0), st.floats(0.3, 2.0), st.floats(0.0, 1.0))
def test_sinusoid_events_within_one_frame(amplitude, freq, phase_frac):
    rate = 100.0
    t = np.arange(int(4.0 / freq * rate)) / rate
    x = amplitude * np.sin(2 * np.pi * freq * t + 2 * np.pi * phase_frac)
    p = np.column_stack([x, np.full_like(x, 0.1), np.full_like(x, 0.1)])
    q = p - [0.1, 0, 0]
    traj = GaitTrajectory(t, p, q, p * [1, -1, 1], q * [1, -1, 1])
    ev = detect_events(traj, "left")
    period = 1.0 / freq
    phase = 2 * np.pi * phase_frac
    for frames, target in ((ev.heel_strikes, np.pi / 2), (ev.toe_offs, 3 * np.pi / 2)):
        assert frames
        for f in frames:
            # analytic extremum nearest this frame
            k = np.round((t[f] - (target - phase) / (2 * np.pi) * period) / period)
            t_star = (target - phase) / (2 * np.pi) * period + k * period
            assert abs(t[f] - t_star) <= 1.0 / rate + 1e-9
    merged = sorted([(f, "to") for f in ev.toe_offs] + [(f, "hs") for f in ev.heel_strikes])
    assert all(a[1] != b[1] for a, b in zip(merged, merged[1:]))


def test_step_metrics_recover_baseline(gait):
    for leg in ("left", "right"):
        m = step_metrics(gait, detect_events(gait, leg))
        assert m.step_length == pytest.approx(0.58, rel=0.02)
        assert m.step_height == pytest.approx(0.16, rel=0.02)


def test_step_metrics_zero_lift():
    traj = synthesize_gait(lift_height=0.0, duration=6)
    assert step_metrics(traj, detect_events(traj, "left")).step_height == 0.0


def test_step_metrics_median_robust_to_outlier(gait):
    ev = detect_events(gait, "left")
    start, stop = ev.cycles()[1]
    la = gait.left_anterior.copy()
    la[start + 10:start + 20, 2] += 0.3
    bumped = GaitTrajectory(gait.t, la, gait.left_posterior, gait.right_anterior, gait.right_posterior)
    m = step_metrics(bumped, ev)
    heights = [np.ptp(la[a:b + 1, 2]) for a, b in ev.cycles()]
    assert m.cycle_heights == pytest.approx(heights)
    assert m.step_height == pytest.approx(float(np.median(heights)))
    assert m.step_height == pytest.approx(0.16, rel=0.02)
    assert max(m.cycle_heights) > 0.25


def test_step_metrics_needs_a_cycle(gait):
    short = gait.slice(0, 115)
    ev = detect_events(short, "left")
    with pytest.raises(NoCyclesError):
        step_metrics(short, ev)


@settings(max_examples=20, deadline=None)
@given(st.floats(-5, 5), st.floats(-1, 1))
def test_step_metrics_time_shift_and_lateral_invariant(dt, dy):
    traj = synthesize_gait(duration=4)
    ref = step_metrics(traj, detect_events(traj, "left"))
    moved = traj.shifted(dt).translated([0, dy, 0])
    got = step_metrics(moved, detect_events(moved, "left"))
    assert got.step_length == pytest.approx(ref.step_length, abs=1e-12)
    assert got.step_height == pytest.approx(ref.step_height, abs=1e-12)


def test_resample_same_rate_identity(gait):
    same = resample(gait, 100.0)
    for a in ("t", "left_anterior", "right_posterior"):
        np.testing.assert_allclose(getattr(same, a), getattr(gait, a), atol=1e-12, rtol=0)


def test_resample_halves(gait):
    half = resample(gait, 50.0)
    assert abs(half.n_frames - gait.n_frames / 2) <= 1
    assert half.t[0] == gait.t[0] and half.t[-1] == gait.t[-1]


@given(st.floats(3.0, 400.0))
def test_resample_linear_ramp_exact(rate):
    t = np.arange(101) / 100
    ramp = np.column_stack([0.5 * t, 0.1 + 0 * t, 0.2 + 0.3 * t])
    traj = GaitTrajectory(t, ramp, ramp - [0.1, 0, 0], ramp * [1, -1, 1], (ramp - [0.1, 0, 0]) * [1, -1, 1])
    out = resample(traj, rate)
    np.testing.assert_allclose(out.left_anterior[:, 0], 0.5 * out.t, atol=1e-12)
    np.testing.assert_allclose(out.left_anterior[:, 2], 0.2 + 0.3 * out.t, atol=1e-12)


def test_resample_rejects_bad_rate(gait):
    with pytest.raises(ValueError):
        resample(gait, 0.0)


@settings(max_examples=25, deadline=None)
@given(n=st.integers(2, 40), rate=st.floats(1.0, 1000.0), seed=st.integers(0, 2**32 - 1))
def test_save_load_round_trip(n, rate, seed, tmp_path_factory):
    rng = np.random.default_rng(seed)
    t = rng.uniform(-10, 10) + np.arange(n) / rate
    arrs = [rng.normal(size=(n, 3)) for _ in range(4)]
    traj = GaitTrajectory(t, *arrs)
    path = tmp_path_factory.mktemp("rt") / "t.csv"
    save_trajectory(traj, path)
    back = load_trajectory(path)
    for a in ("t", "left_anterior", "left_posterior", "right_anterior", "right_posterior"):
        assert np.array_equal(getattr(back, a), getattr(traj, a))
