"""Spike-timing-dependent plasticity: learning window and weight updates.

The window follows the classical exponential form: a presynaptic pulse
arriving before the postsynaptic action potential potentiates the
synapse, one arriving at or after it depresses it. The time difference
convention throughout is

    delta_t = pre_arrival_tick - post_spike_tick

so negative delta_t means the causal (pre-before-post) case. Arrival
times already include the synaptic transmission delay.
"""

from __future__ import annotations

import math
from collections import defaultdict, deque
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .snn import Synapse


class PlasticityError(ValueError):
    """Raised when an update is applied to a non-plastic synapse."""


class SimultaneousPairs(Enum):
    """How on_post_spike treats a pulse arriving on the firing tick.

    WINDOW feeds the pair to the window function as printed (zero gap
    lands on the depression branch). CAUSAL evaluates it as the limit
    from the causal side (+a_plus): the stepper integrates pulses before
    the threshold test, so within the tick a same-tick pulse in fact
    precedes the action potential it helped trigger.
    """
    WINDOW = "window"
    CAUSAL = "causal"


@dataclass(frozen=True)
class StdpConfig:
    # Potentiation outweighs depression so that embodied conditioning
    # (where stray acausal pairings are unavoidable) still converges.
    a_plus: float = 0.15
    a_minus: float = 0.02
    tau_plus: float = 20.0
    tau_minus: float = 20.0
    w_min: float = 0.0
    # The ceiling equals the neurons' firing threshold: a fully
    # conditioned pathway is exactly strong enough to act as a reflex,
    # which is also where the self-limiting conditioning dynamics settle.
    w_max: float = 1.0
    window_cutoff: int = 0  # 0 -> derived as 5 * max(tau_plus, tau_minus)

    def __post_init__(self):
        for name in ("a_plus", "a_minus", "tau_plus", "tau_minus"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.w_min < 0:
            raise ValueError("w_min must be non-negative")
        if not self.w_min < self.w_max:
            raise ValueError("w_min must be below w_max")
        if self.window_cutoff == 0:
            object.__setattr__(self, "window_cutoff",
                               int(math.ceil(5 * max(self.tau_plus, self.tau_minus))))
        if self.window_cutoff < 1:
            raise ValueError("window_cutoff must be positive")


def stdp_window(delta_t: float, cfg: StdpConfig) -> float:
    """Weight change contributed by one (pre arrival, post spike) pair."""
    if delta_t < 0:
        return cfg.a_plus * math.exp(delta_t / cfg.tau_plus)
    return -cfg.a_minus * math.exp(-delta_t / cfg.tau_minus)


class SpikeHistory:
    """Bounded per-neuron record of recent spike ticks.

    One instance can hold every neuron of a circuit: presynaptic entries
    are emission ticks (add the synapse delay to get arrivals), while
    postsynaptic entries are firing ticks. Entries older than the window
    are dropped on record.
    """

    def __init__(self, window: int):
        if window < 1:
            raise ValueError("window must be positive")
        self.window = window
        self._ticks: dict[int, deque[int]] = defaultdict(deque)

    def record(self, neuron: int, tick: int):
        dq = self._ticks[neuron]
        if dq and tick <= dq[-1]:
            raise ValueError("spike ticks must be strictly increasing per neuron")
        dq.append(tick)
        horizon = tick - self.window
        while dq and dq[0] < horizon:
            dq.popleft()

    def ticks_for(self, neuron: int) -> Iterable[int]:
        return self._ticks.get(neuron, ())


def pairing_sum(pre_arrivals: Iterable[int], post_ticks: Iterable[int],
                cfg: StdpConfig) -> float:
    """Unclamped total weight change over all in-window spike pairs."""
    total = 0.0
    posts = list(post_ticks)
    for arrival in pre_arrivals:
        for post in posts:
            if abs(arrival - post) <= cfg.window_cutoff:
                total += stdp_window(arrival - post, cfg)
    return total


def on_post_spike(synapse: Synapse, history: SpikeHistory, post_tick: int,
                  cfg: StdpConfig, *,
                  simultaneous: SimultaneousPairs = SimultaneousPairs.WINDOW) -> float:
    """Update a synapse when its postsynaptic neuron fires.

    Sums the window over every recorded presynaptic arrival at or before
    the action potential (later arrivals are the business of
    on_pre_spike, so each pair is counted exactly once) and clamps the
    result into [w_min, w_max]. Returns the new weight.
    """
    _require_plastic(synapse)
    dw = 0.0
    for emission in history.ticks_for(synapse.pre):
        arrival = emission + synapse.delay
        if arrival > post_tick or post_tick - arrival > cfg.window_cutoff:
            continue
        if arrival == post_tick and simultaneous is SimultaneousPairs.CAUSAL:
            dw += cfg.a_plus
        else:
            dw += stdp_window(arrival - post_tick, cfg)
    synapse.weight = _clamp(synapse.weight + dw, cfg)
    return synapse.weight


def on_pre_spike(synapse: Synapse, history: SpikeHistory, pre_arrival_tick: int,
                 cfg: StdpConfig) -> float:
    """Update a synapse when a presynaptic pulse arrives.

    Applies the depression branch against every recorded postsynaptic
    spike strictly before the arrival; simultaneous pairs were already
    handled by on_post_spike. Returns the new weight.
    """
    _require_plastic(synapse)
    dw = 0.0
    for post in history.ticks_for(synapse.post):
        if post < pre_arrival_tick and pre_arrival_tick - post <= cfg.window_cutoff:
            dw += stdp_window(pre_arrival_tick - post, cfg)
    synapse.weight = _clamp(synapse.weight + dw, cfg)
    return synapse.weight


def _require_plastic(synapse: Synapse):
    if not synapse.plastic:
        raise PlasticityError("synapse is not plastic")


def _clamp(w: float, cfg: StdpConfig) -> float:
    if w < cfg.w_min:
        return cfg.w_min
    if w > cfg.w_max:
        return cfg.w_max
    return w
