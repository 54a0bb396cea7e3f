import math
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vdtptune.sim.scenario import (
    Scenario,
    human_expert_config,
    load_scenario,
    preset,
    preset_names,
)
from vdtptune.sim.transfer import (
    effective_throughput,
    n_chunks,
    simulate_replication,
    simulate_session,
    simulate_session_events,
    write_event_trace,
)
from vdtptune.space import VdtpConfig


def lossless(file_size=1_048_576, bandwidth=5.5e6, prop=0.002, header=64):
    return Scenario(
        name="lossless",
        bandwidth_bps=bandwidth,
        header_bytes=header,
        propagation_delay_s=prop,
        base_loss_prob=0.0,
        link_up_mean_s=math.inf,
        link_down_mean_s=1.0,
        sessions=4,
        file_size_bytes=file_size,
        density_scale=0.0,
    )


def total_loss(**kw):
    return Scenario(
        name="blackout",
        base_loss_prob=1.0,
        link_up_mean_s=math.inf,
        sessions=2,
        **kw,
    )


def stop_and_wait_time(n, file_size, bandwidth, prop, header):
    """Handshake plus n request/reply exchanges, no losses, no retries."""
    return (n + 1) * (2.0 * header * 8.0 / bandwidth + 2.0 * prop) + file_size * 8.0 / bandwidth


# --- chunk arithmetic --------------------------------------------------------


def test_n_chunks_examples():
    assert n_chunks(1000, 256) == 4
    assert n_chunks(1024, 1024) == 1
    assert n_chunks(1025, 1024) == 2
    assert n_chunks(1, 524288) == 1


def test_n_chunks_matches_ceil():
    rng = np.random.default_rng(1)
    for _ in range(1000):
        file = int(rng.integers(1, 10_000_000))
        chunk = int(rng.integers(1, 600_000))
        assert n_chunks(file, chunk) == math.ceil(file / chunk)


def test_n_chunks_rejects_nonpositive():
    with pytest.raises(ValueError):
        n_chunks(0, 128)
    with pytest.raises(ValueError):
        n_chunks(100, 0)


# --- lossless closed form ----------------------------------------------------


def test_lossless_session_matches_closed_form():
    rng = np.random.default_rng(99)
    for _ in range(50):
        chunk = int(rng.integers(128, 524289))
        file = int(rng.integers(1, 5 * 2**20))
        bw = float(rng.uniform(1e5, 1e8))
        prop = float(rng.uniform(1e-4, 1e-2))
        sc = lossless(file, bw, prop)
        res = simulate_session((chunk, 1, 1e9), sc, seed=int(rng.integers(2**60)))
        expect = stop_and_wait_time(n_chunks(file, chunk), file, bw, prop, 64)
        assert res.time_s == pytest.approx(expect, abs=1e-9)
        assert res.lost_packets == 0
        assert res.delivered_bytes == file
        assert not res.refused


def test_lossless_time_independent_of_seed():
    sc = lossless()
    a = simulate_session((25600, 8, 8.0), sc, seed=1)
    b = simulate_session((25600, 8, 8.0), sc, seed=982451653)
    assert a == b


def test_larger_chunks_fewer_round_trips_lossless():
    sc = lossless()
    small = simulate_session((4096, 1, 1e9), sc, seed=0)
    big = simulate_session((262144, 1, 1e9), sc, seed=0)
    assert big.time_s < small.time_s


# --- refusal semantics -------------------------------------------------------


def test_total_loss_refuses_at_attempts_times_timeout():
    sc = total_loss()
    for attempts, timeout in [(1, 1.0), (3, 2.5), (7, 3.5), (250, 10.0)]:
        res = simulate_session((25600, attempts, timeout), sc, seed=11)
        assert res.refused
        assert res.delivered_bytes == 0
        assert res.lost_packets == attempts
        assert res.time_s == pytest.approx(attempts * timeout, abs=1e-9)


def test_total_loss_event_log_counts_handshake_sends():
    sc = total_loss()
    attempts, timeout = 5, 2.0
    events, res = simulate_session_events((25600, attempts, timeout), sc, seed=3)
    sends = [e for e in events if e[2] == "send" and e[3] == "FIRQ"]
    drops = [e for e in events if e[2] == "drop"]
    refusals = [e for e in events if e[2] == "refused"]
    assert len(sends) == attempts
    assert len(drops) == attempts
    assert len(refusals) == 1
    assert refusals[0][0] == pytest.approx(attempts * timeout, abs=1e-9)
    assert res.refused
    # nothing ever got past the first request type
    assert all(e[3] in ("FIRQ", "") for e in events)


# --- conservation and aggregation --------------------------------------------


def test_completed_session_delivers_whole_file():
    sc = lossless(file_size=123_457)
    res = simulate_session((1000, 3, 5.0), sc, seed=4)
    assert res.delivered_bytes == 123_457


def test_replication_aggregates_sessions():
    sc = lossless(file_size=65536)
    out = simulate_replication((8192, 3, 5.0), sc, seed=10)
    assert out.sessions == sc.sessions
    assert out.refused_sessions == 0
    assert out.completed_sessions == sc.sessions
    # every session delivered the file: total kB = sessions * file/1024
    assert out.data_transferred_kbytes == pytest.approx(sc.sessions * 65536 / 1024.0)
    assert out.per_session_kbytes() == pytest.approx(64.0)


def test_replication_deterministic_and_seed_sensitive():
    sc = preset("urban")
    cfg = VdtpConfig(25600, 8, 8.0)
    a = simulate_replication(cfg, sc, seed=5)
    b = simulate_replication(cfg, sc, seed=5)
    c = simulate_replication(cfg, sc, seed=6)
    assert a == b
    assert a != c


def test_effective_throughput_zero_when_nothing_completes():
    sc = total_loss()
    out = simulate_replication((25600, 2, 1.0), sc, seed=1)
    assert out.completed_sessions == 0
    assert effective_throughput(out) == 0.0


def test_effective_throughput_lossless_value():
    sc = lossless(file_size=1_048_576)
    out = simulate_replication((1_048_576, 1, 1e9), sc, seed=0)
    tp = effective_throughput(out)
    # one chunk: ~8.39 Mbit at 5.5 Mbit/s plus overheads, just above 1.5 s
    assert tp == pytest.approx(1024.0 / out.transmission_time_s)


# --- stochastic ordering -----------------------------------------------------


def test_more_loss_is_stochastically_worse():
    base = preset("urban")
    cfg = VdtpConfig(25600, 8, 8.0)
    seeds = range(40)

    def mean_time(loss):
        sc = Scenario(
            name="x",
            propagation_delay_s=base.propagation_delay_s,
            base_loss_prob=loss,
            link_up_mean_s=math.inf,
            sessions=1,
            file_size_bytes=base.file_size_bytes,
        )
        return np.mean([simulate_session(cfg, sc, seed=s).time_s for s in seeds])

    assert mean_time(0.0) < mean_time(0.05) < mean_time(0.3)


def test_density_scaling_increases_losses():
    sc = preset("urban")
    cfg = VdtpConfig(25600, 8, 8.0)
    plain = np.mean([simulate_session(cfg, sc, seed=s).lost_packets for s in range(60)])
    dense = np.mean(
        [simulate_session(cfg, sc.scaled(3.0), seed=s).lost_packets for s in range(60)]
    )
    assert dense > plain


# --- instrumented replay matches the kernel ----------------------------------


def test_event_replay_outcome_equals_kernel():
    for name in ("urban", "highway"):
        sc = preset(name)
        cfg = human_expert_config(sc)
        for seed in (1, 2, 3, 50, 51):
            events, replay = simulate_session_events(cfg, sc, seed=seed)
            kernel = simulate_session(cfg, sc, seed=seed)
            assert replay == kernel
            kinds = {e[2] for e in events}
            assert kinds <= {"send", "deliver", "drop", "timeout", "refused", "complete"}
            times = [e[0] for e in events]
            assert times == sorted(times)


def test_event_trace_file_round_trips(tmp_path):
    sc = preset("urban")
    events, _ = simulate_session_events(human_expert_config(sc), sc, seed=9)
    path = tmp_path / "events.csv"
    write_event_trace(path, events)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "virtual_time,session_id,event_kind,packet_type,attempt_no"
    assert len(lines) == len(events) + 1
    assert float(lines[1].split(",")[0]) == events[0][0]


# --- scenario plumbing -------------------------------------------------------


def test_preset_names_and_aliases():
    assert set(preset_names()) == {"urban", "urban_a1", "urban_a2", "urban_a3", "highway"}
    assert preset("Urban") == preset("urban")
    assert preset("urban_a1").name == preset("urban").name
    assert preset("UrbanA2") == preset("urban-a2")
    with pytest.raises(ValueError):
        preset("rural")


def test_scaled_presets_only_differ_in_density():
    a2 = preset("urban_a2")
    assert a2.density_scale > 0
    assert a2.effective_loss() > preset("urban").effective_loss()


def test_effective_loss_cap():
    sc = Scenario(name="x", base_loss_prob=0.5, density_scale=10.0)
    assert sc.effective_loss() == 0.95
    assert Scenario(name="x", base_loss_prob=1.0).effective_loss() == 1.0
    assert Scenario(name="x", base_loss_prob=0.004, density_scale=0.5).effective_loss() == pytest.approx(0.006)


def test_scenario_validation():
    with pytest.raises(ValueError):
        Scenario(name="x", base_loss_prob=1.5)
    with pytest.raises(ValueError):
        Scenario(name="x", bandwidth_bps=0)
    with pytest.raises(ValueError):
        Scenario(name="x", link_up_mean_s=0.0)
    with pytest.raises(ValueError):
        Scenario(name="x", sessions=0)


def test_load_scenario_round_trip(tmp_path):
    path = tmp_path / "custom.cfg"
    path.write_text(
        "[scenario]\n"
        "name = custom\n"
        "bandwidth_bps = 1e6\n"
        "propagation_delay_s = 0.01\n"
        "base_loss_prob = 0.1\n"
        "link_up_mean_s = inf\n"
        "sessions = 5\n"
        "file_size_bytes = 2048\n"
    )
    sc = load_scenario(path)
    assert sc.name == "custom"
    assert sc.bandwidth_bps == 1e6
    assert math.isinf(sc.link_up_mean_s)
    assert sc.sessions == 5
    with pytest.raises(ValueError):
        load_scenario(tmp_path / "missing.cfg")


def test_human_expert_configs():
    assert human_expert_config("urban") == VdtpConfig(25600.0, 8.0, 8.0)
    assert human_expert_config("urban_a3") == VdtpConfig(25600.0, 8.0, 8.0)
    assert human_expert_config(preset("highway")) == VdtpConfig(25600.0, 10.0, 10.0)


# --- hypothesis properties ---------------------------------------------------


@settings(max_examples=40, deadline=None)
@given(
    chunk=st.integers(min_value=128, max_value=524288),
    attempts=st.integers(min_value=1, max_value=50),
    timeout=st.floats(min_value=1.0, max_value=10.0),
    seed=st.integers(min_value=0, max_value=2**32 - 1),
)
def test_session_invariants_under_loss(chunk, attempts, timeout, seed):
    sc = Scenario(
        name="prop",
        base_loss_prob=0.2,
        link_up_mean_s=30.0,
        link_down_mean_s=3.0,
        sessions=1,
        file_size_bytes=65536,
    )
    res = simulate_session((chunk, attempts, timeout), sc, seed=seed)
    assert res.time_s >= 0.0
    assert res.lost_packets >= 0
    assert 0 <= res.delivered_bytes <= 65536
    if res.refused:
        assert res.delivered_bytes < 65536
    else:
        assert res.delivered_bytes == 65536


# --- jit/pure parity ---------------------------------------------------------


_PARITY_SNIPPET = """
import numpy as np
from vdtptune.sim import kernels
from vdtptune.sim.scenario import preset, human_expert_config
from vdtptune.sim.transfer import _kernel_args
print("numba", kernels.NUMBA_ENABLED)
for name in ("urban", "highway"):
    sc = preset(name)
    args = _kernel_args(human_expert_config(sc), sc)
    t, lost, dv, rf = kernels.run_sessions(40, *args, 777)
    for row in zip(t, lost, dv, rf):
        print(repr(float(row[0])), int(row[1]), int(row[2]), bool(row[3]))
"""


def _run_parity(disable: str) -> str:
    env = dict(os.environ, VDTPTUNE_DISABLE_NUMBA=disable)
    proc = subprocess.run(
        [sys.executable, "-c", _PARITY_SNIPPET], env=env, capture_output=True, text=True
    )
    assert proc.returncode == 0, proc.stderr
    return proc.stdout


def test_jit_and_pure_paths_bit_identical():
    """Both kernel paths must produce byte-identical numbers for equal seeds."""
    with_jit = _run_parity("0")
    pure = _run_parity("1")
    assert with_jit.splitlines()[1:] == pure.splitlines()[1:]
    assert pure.splitlines()[0] == "numba False"


# --- calibration bands -------------------------------------------------------


def test_urban_expert_band_quick():
    sc = preset("urban")
    times = [simulate_session(human_expert_config(sc), sc, seed=s).time_s for s in range(200)]
    assert 2.0 <= np.mean(times) <= 9.0


def test_highway_expert_band_quick():
    sc = preset("highway")
    times = [simulate_session(human_expert_config(sc), sc, seed=s).time_s for s in range(200)]
    assert 15.0 <= np.mean(times) <= 70.0
