"""Hot inner loops of the transfer simulator.

The session kernel is a plain event loop over request/reply exchanges with a
two-state (up/down) channel process. It is compiled with numba when available;
set VDTPTUNE_DISABLE_NUMBA=1 to force the pure-Python path (same source, same
random stream, bit-identical results; benchmarks/kernel_speed.py measures the
speed difference).

Randomness is a splitmix64 stream driven by explicit uint64 state, so compiled
and interpreted execution consume identical draws.
"""

from __future__ import annotations

import math
import os

import numpy as np

__all__ = ["NUMBA_ENABLED", "run_sessions", "session_kernel"]

_DISABLED = os.environ.get("VDTPTUNE_DISABLE_NUMBA", "").strip().lower() in (
    "1",
    "true",
    "yes",
)

if not _DISABLED:
    try:
        from numba import njit as _njit

        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        NUMBA_ENABLED = False
else:
    NUMBA_ENABLED = False

if not NUMBA_ENABLED:

    def _njit(*args, **kwargs):
        # numpy scalar uint64 arithmetic wraps like the compiled path but
        # raises RuntimeWarning on overflow; silence it for the fallback.
        def wrap(fn):
            return np.errstate(over="ignore")(fn)

        if args and callable(args[0]):
            return wrap(args[0])
        return wrap


U64 = np.uint64
_GOLDEN = U64(0x9E3779B97F4A7C15)
_MIX1 = U64(0xBF58476D1CE4E5B9)
_MIX2 = U64(0x94D049BB133111EB)
_INV53 = 1.0 / 9007199254740992.0  # 2^-53


@_njit(cache=True)
def _mix64(state):
    """splitmix64: returns (next_state, output_word)."""
    state = U64(state + _GOLDEN)
    z = state
    z = U64((z ^ (z >> U64(30))) * _MIX1)
    z = U64((z ^ (z >> U64(27))) * _MIX2)
    z = z ^ (z >> U64(31))
    return state, z


@_njit(cache=True)
def _u01(z):
    # 53-bit mantissa -> [0, 1)
    return (z >> U64(11)) * _INV53


@_njit(cache=True)
def session_kernel(
    chunk_bytes,
    attempts,
    timeout_s,
    file_size,
    header_bytes,
    bandwidth,
    prop_delay,
    eff_loss,
    up_mean,
    down_mean,
    seed,
):
    """Simulate one transfer session; returns (time_s, lost, delivered_bytes, refused).

    One request/reply exchange per chunk plus the initial size handshake.
    Each transmitted packet consumes one uniform; it is delivered iff the link
    is up at its arrival instant and the loss draw passes. A request whose
    reply has not arrived within timeout_s is retransmitted; `attempts`
    transmissions of the same request without a reply refuse the session.
    """
    state = U64(seed)

    # channel: alternating exponential up/down dwells, stationary start
    if math.isinf(up_mean):
        link_up = True
        t_switch = math.inf
    else:
        state, z = _mix64(state)
        link_up = _u01(z) < up_mean / (up_mean + down_mean)
        state, z = _mix64(state)
        mean0 = up_mean if link_up else down_mean
        t_switch = -mean0 * math.log(1.0 - _u01(z))

    n = (file_size + chunk_bytes - 1) // chunk_bytes
    tx_req = header_bytes * 8.0 / bandwidth
    succ_p = 1.0 - eff_loss

    t = 0.0
    lost = 0
    delivered = 0
    refused = False

    for req in range(n + 1):
        if req == 0:
            payload = 0  # size handshake
        elif req < n:
            payload = chunk_bytes
        else:
            payload = file_size - (n - 1) * chunk_bytes
        tx_rep = (header_bytes + payload) * 8.0 / bandwidth

        ok = False
        for _attempt in range(attempts):
            t0 = t
            req_arr = t0 + tx_req + prop_delay
            while t_switch <= req_arr:
                link_up = not link_up
                state, z = _mix64(state)
                mean_d = up_mean if link_up else down_mean
                t_switch += -mean_d * math.log(1.0 - _u01(z))
            state, z = _mix64(state)
            req_ok = link_up and (_u01(z) < succ_p)
            if req_ok:
                rep_arr = req_arr + tx_rep + prop_delay
                while t_switch <= rep_arr:
                    link_up = not link_up
                    state, z = _mix64(state)
                    mean_d = up_mean if link_up else down_mean
                    t_switch += -mean_d * math.log(1.0 - _u01(z))
                state, z = _mix64(state)
                rep_ok = link_up and (_u01(z) < succ_p)
                if rep_ok and (rep_arr - t0) <= timeout_s:
                    t = rep_arr
                    ok = True
                    break
                if not rep_ok:
                    lost += 1
            else:
                lost += 1
            t = t0 + timeout_s
        if not ok:
            refused = True
            break
        if req > 0:
            delivered += payload

    return t, lost, delivered, refused


@_njit(cache=True)
def run_sessions(
    n_sessions,
    chunk_bytes,
    attempts,
    timeout_s,
    file_size,
    header_bytes,
    bandwidth,
    prop_delay,
    eff_loss,
    up_mean,
    down_mean,
    seed,
):
    """Run independent sessions; per-session seeds derive from one stream."""
    times = np.empty(n_sessions)
    lost = np.empty(n_sessions)
    delivered = np.empty(n_sessions, np.int64)
    refused = np.zeros(n_sessions, np.bool_)
    state = U64(seed)
    for s in range(n_sessions):
        state, z = _mix64(state)
        t, l, d, r = session_kernel(
            chunk_bytes,
            attempts,
            timeout_s,
            file_size,
            header_bytes,
            bandwidth,
            prop_delay,
            eff_loss,
            up_mean,
            down_mean,
            z,
        )
        times[s] = t
        lost[s] = l
        delivered[s] = d
        refused[s] = r
    return times, lost, delivered, refused
