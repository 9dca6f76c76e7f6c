"""The ant's neural controller.

Wires the full circuit on top of the spiking core: three olfactory
receptors feeding afferents, a nociceptor and a reward sensor with fixed
reflex pathways onto the two motoneurons, a two-neuron pacemaker loop
that keeps the ant walking, and the two pheromone neurons (one driven by
reward contact, one integrating pacemaker pulses as an energy-consumption
counter that reward inhibits). The afferent-to-motoneuron synapses are
the only plastic ones; everything else is a fixed reflex.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .plasticity import (
    SimultaneousPairs,
    SpikeHistory,
    StdpConfig,
    on_post_spike,
    on_pre_spike,
)
from .snn import Network, NeuronParams, NeuronPhase, Sign, SpikeEvent, ValidationError
from .world import Color

MOTOR_FORWARD = "forward"
MOTOR_ROTATE = "rotate"

SMELLS = (Color.WHITE, Color.RED, Color.GREEN)


@dataclass(frozen=True)
class CircuitConfig:
    pacemaker_period: int = 10
    reflex_weight: float = 2.0
    drive_weight: float = 1.2
    sense_amplitude: float = 2.0
    plastic_init_fraction: float = 0.1
    np_pulse_count: int = 20
    np_tau: float = 100.0
    np_inhibit_weight: float = 2.0
    # A long nociceptor dead time makes standing pain fire on alternate
    # world ticks, so the rotate reflex and the forward drive interleave
    # and the ant can actually walk off a harmful patch.
    nociceptor_refractory: int = 15
    membrane_tau: float = 5.0
    resting_potential: float = 0.0
    firing_threshold: float = 1.0
    refractory_potential: float = -1.0
    refractory_ticks: int = 2

    def __post_init__(self):
        if self.pacemaker_period < 2:
            raise ValidationError("pacemaker period must be at least 2 ticks")
        if self.pacemaker_period <= self.refractory_ticks:
            raise ValidationError("pacemaker period must exceed the refractory time")
        if not 0.0 <= self.plastic_init_fraction < 1.0:
            raise ValidationError("plastic_init_fraction must lie in [0, 1)")
        if self.np_pulse_count < 1:
            raise ValidationError("np_pulse_count must be at least 1")


@dataclass(frozen=True)
class StimulusFrame:
    """What one world tick presents to the senses."""
    smell_ahead: Optional[Color] = None
    pain_contact: bool = False
    reward_contact: bool = False


@dataclass(frozen=True)
class ActuatorFrame:
    move_forward: bool = False
    rotate: bool = False
    emit_positive_pheromone: bool = False
    emit_negative_pheromone: bool = False


@dataclass
class BrainLayout:
    olfactory_receptors: dict[Color, int]
    afferents: dict[Color, int]
    nociceptor: int
    reward_sensor: int
    motor_forward: int
    motor_rotate: int
    pacemaker_a: int
    pacemaker_b: int
    kickstart: int
    pheromone_positive: int
    pheromone_negative: int
    # (smell, motor role) -> synapse id; the only plastic synapses.
    plastic_synapses: dict[tuple[Color, str], int] = field(default_factory=dict)


def build_brain(net: Network, cfg: CircuitConfig, stdp: StdpConfig) -> BrainLayout:
    """Instantiate the full circuit in `net` and return the role map."""
    base = NeuronParams(
        resting_potential=cfg.resting_potential,
        firing_threshold=cfg.firing_threshold,
        refractory_potential=cfg.refractory_potential,
        refractory_duration=cfg.refractory_ticks,
        decay_time_constant=cfg.membrane_tau,
    )
    nociceptor_params = NeuronParams(
        resting_potential=cfg.resting_potential,
        firing_threshold=cfg.firing_threshold,
        refractory_potential=cfg.refractory_potential,
        refractory_duration=cfg.nociceptor_refractory,
        decay_time_constant=cfg.membrane_tau,
    )
    counter_params = NeuronParams(
        resting_potential=cfg.resting_potential,
        firing_threshold=cfg.firing_threshold,
        refractory_potential=cfg.refractory_potential,
        refractory_duration=cfg.refractory_ticks,
        decay_time_constant=cfg.np_tau,
    )

    receptors = {smell: net.create_neuron(base) for smell in SMELLS}
    afferents = {smell: net.create_neuron(base) for smell in SMELLS}
    nociceptor = net.create_neuron(nociceptor_params)
    reward = net.create_neuron(base)
    motor_forward = net.create_neuron(base)
    motor_rotate = net.create_neuron(base)
    pacemaker_a = net.create_neuron(base)
    pacemaker_b = net.create_neuron(base)
    kickstart = net.create_neuron(base)
    pheromone_positive = net.create_neuron(base)
    pheromone_negative = net.create_neuron(counter_params)

    layout = BrainLayout(
        olfactory_receptors=receptors,
        afferents=afferents,
        nociceptor=nociceptor,
        reward_sensor=reward,
        motor_forward=motor_forward,
        motor_rotate=motor_rotate,
        pacemaker_a=pacemaker_a,
        pacemaker_b=pacemaker_b,
        kickstart=kickstart,
        pheromone_positive=pheromone_positive,
        pheromone_negative=pheromone_negative,
    )

    w_fix = cfg.reflex_weight
    # Each receptor drives exactly one afferent.
    for smell in SMELLS:
        net.connect(receptors[smell], afferents[smell], w_fix, Sign.EXCITATORY, 1)

    # Conditionable pathways, initialized too weak to move anything.
    w_init = cfg.plastic_init_fraction * stdp.w_max
    for smell in SMELLS:
        sid = net.connect(afferents[smell], motor_forward, w_init,
                          Sign.EXCITATORY, 1, plastic=True)
        layout.plastic_synapses[(smell, MOTOR_FORWARD)] = sid
        sid = net.connect(afferents[smell], motor_rotate, w_init,
                          Sign.EXCITATORY, 1, plastic=True)
        layout.plastic_synapses[(smell, MOTOR_ROTATE)] = sid

    # Unconditioned reflexes.
    net.connect(nociceptor, motor_rotate, w_fix, Sign.EXCITATORY, 1)
    net.connect(reward, motor_forward, w_fix, Sign.EXCITATORY, 1)
    net.connect(reward, pheromone_positive, w_fix, Sign.EXCITATORY, 1)

    # Pacemaker loop; the two delays sum to the configured period.
    half = cfg.pacemaker_period // 2
    net.connect(pacemaker_a, pacemaker_b, w_fix, Sign.EXCITATORY, half)
    net.connect(pacemaker_b, pacemaker_a, w_fix, Sign.EXCITATORY,
                cfg.pacemaker_period - half)
    net.connect(kickstart, pacemaker_a, w_fix, Sign.EXCITATORY, 1)
    net.connect(pacemaker_a, motor_forward, cfg.drive_weight, Sign.EXCITATORY, 1)

    # Energy-consumption counter: sized so that exactly np_pulse_count
    # pacemaker pulses (with the decay seen between them) reach threshold.
    per_tick = math.exp(-1.0 / cfg.np_tau)
    per_period = per_tick ** cfg.pacemaker_period
    geometric = sum(per_period ** i for i in range(cfg.np_pulse_count))
    counter_weight = cfg.firing_threshold / geometric * (1.0 + 1e-9)
    net.connect(pacemaker_a, pheromone_negative, counter_weight, Sign.EXCITATORY, 1)
    net.connect(reward, pheromone_negative, cfg.np_inhibit_weight, Sign.INHIBITORY, 1)

    return layout


def sense(net: Network, layout: BrainLayout, frame: StimulusFrame, amplitude: float):
    """Inject suprathreshold pulses for everything the frame reports."""
    if frame.smell_ahead is not None:
        net.inject_pulse(layout.olfactory_receptors[frame.smell_ahead], amplitude)
    if frame.pain_contact:
        net.inject_pulse(layout.nociceptor, amplitude)
    if frame.reward_contact:
        net.inject_pulse(layout.reward_sensor, amplitude)


def actuate(layout: BrainLayout, events: Iterable[SpikeEvent]) -> ActuatorFrame:
    """Fold spike events into motor/pheromone commands.

    When forward and rotate both fired, rotate wins: avoidance dominates
    locomotion.
    """
    fired = {ev.neuron for ev in events}
    rotate = layout.motor_rotate in fired
    return ActuatorFrame(
        move_forward=layout.motor_forward in fired and not rotate,
        rotate=rotate,
        emit_positive_pheromone=layout.pheromone_positive in fired,
        emit_negative_pheromone=layout.pheromone_negative in fired,
    )


class AntBrain:
    """One network plus its layout, with optional online plasticity.

    A brain owns its network exclusively; many brains can be stepped in
    parallel because they share nothing.
    """

    def __init__(self, circuit_cfg: CircuitConfig = CircuitConfig(),
                 stdp_cfg: StdpConfig = StdpConfig(),
                 learning: bool = False, kickstart: bool = True):
        self.circuit_cfg = circuit_cfg
        self.stdp_cfg = stdp_cfg
        self.learning = learning
        self.net = Network()
        self.layout = build_brain(self.net, circuit_cfg, stdp_cfg)
        max_delay = max(self.net.synapses[s].delay
                        for s in self.layout.plastic_synapses.values())
        window = stdp_cfg.window_cutoff + max_delay
        # Shared record of postsynaptic firing plus, per plastic synapse,
        # the arrivals its postsynaptic membrane actually integrated.
        self._post_history = SpikeHistory(window)
        self._accepted_arrivals: dict[int, SpikeHistory] = {
            sid: SpikeHistory(window)
            for sid in self.layout.plastic_synapses.values()}
        self._arrivals: dict[int, list[int]] = {}
        self._plastic_in: dict[int, list[int]] = {}
        self._plastic_out: dict[int, list[int]] = {}
        for sid in self.layout.plastic_synapses.values():
            syn = self.net.synapses[sid]
            self._plastic_in.setdefault(syn.post, []).append(sid)
            self._plastic_out.setdefault(syn.pre, []).append(sid)
        if kickstart:
            self.net.inject_pulse(self.layout.kickstart, circuit_cfg.sense_amplitude)

    def sense(self, frame: StimulusFrame):
        sense(self.net, self.layout, frame, self.circuit_cfg.sense_amplitude)

    def step(self) -> list[SpikeEvent]:
        """One brain tick, with STDP bookkeeping when learning is on.

        Every (arrival, post) pair is fed to the window exactly once:
        potentiation when the post spike happens, depression when a
        later pulse arrives. Two refinements follow from the membrane
        semantics: a pulse arriving during the postsynaptic refractory
        period is neglected entirely (the membrane never saw it), and a
        pulse arriving on the firing tick counts as causal, because the
        stepper integrates pulses before testing the threshold.
        """
        if not self.learning:
            return self.net.step()
        refractory_before = {
            post: self.net.states[post].phase is NeuronPhase.REFRACTORY
            for post in self._plastic_in}
        events = self.net.step()
        t = self.net.current_tick
        stdp = self.stdp_cfg
        for sid in self._arrivals.pop(t, ()):
            syn = self.net.synapses[sid]
            if refractory_before[syn.post]:
                continue
            on_pre_spike(syn, self._post_history, t, stdp)
            self._accepted_arrivals[sid].record(syn.pre, t - syn.delay)
        for ev in events:
            for sid in self._plastic_in.get(ev.neuron, ()):
                on_post_spike(self.net.synapses[sid], self._accepted_arrivals[sid],
                              t, stdp, simultaneous=SimultaneousPairs.CAUSAL)
        for ev in events:
            if ev.neuron in self._plastic_in:
                self._post_history.record(ev.neuron, t)
            for sid in self._plastic_out.get(ev.neuron, ()):
                syn = self.net.synapses[sid]
                self._arrivals.setdefault(t + syn.delay, []).append(sid)
        return events

    def step_ticks(self, n: int) -> list[SpikeEvent]:
        events: list[SpikeEvent] = []
        for _ in range(n):
            events.extend(self.step())
        return events

    def actuate(self, events: Iterable[SpikeEvent]) -> ActuatorFrame:
        return actuate(self.layout, events)

    # -- trained-weight interchange --------------------------------------

    def weights(self) -> dict[tuple[Color, str], float]:
        return {key: self.net.synapses[sid].weight
                for key, sid in self.layout.plastic_synapses.items()}

    def set_weights(self, mapping: dict[tuple[Color, str], float]):
        for key, value in mapping.items():
            sid = self.layout.plastic_synapses[key]
            if not self.stdp_cfg.w_min <= value <= self.stdp_cfg.w_max:
                raise ValidationError(
                    f"weight for {key[0].value}->{key[1]} outside [w_min, w_max]")
            self.net.synapses[sid].weight = value


@dataclass(frozen=True)
class ConditioningSchedule:
    """A block of identical paired-stimulus trials.

    `stimulus_gap` is the tick offset from the smell to the unconditioned
    stimulus; a negative value presents the unconditioned stimulus first
    (the extinction-direction control). `trial_gap` spaces the trials far
    enough apart that cross-trial pairings sit in the window's far tail.
    """
    smell: Color
    unconditioned: str  # "pain" or "reward"
    pairings: int
    stimulus_gap: int = 2
    trial_gap: int = 60

    def __post_init__(self):
        if self.unconditioned not in ("pain", "reward"):
            raise ValidationError("unconditioned stimulus must be 'pain' or 'reward'")
        if self.pairings < 0:
            raise ValidationError("pairings must be non-negative")
        if self.trial_gap < 1:
            raise ValidationError("trial_gap must be positive")


def run_conditioning(brain: AntBrain,
                     schedules: Sequence[ConditioningSchedule] | ConditioningSchedule,
                     ) -> dict[tuple[Color, str], float]:
    """Run a disembodied classical-conditioning protocol.

    The brain should be built without a pacemaker kickstart so that the
    paired stimuli are the only activity; learning is forced on for the
    duration. Returns the plastic weights after the protocol.
    """
    if isinstance(schedules, ConditioningSchedule):
        schedules = [schedules]
    previous = brain.learning
    brain.learning = True
    try:
        for sched in schedules:
            if abs(sched.stimulus_gap) >= brain.stdp_cfg.window_cutoff:
                warnings.warn(
                    "stimulus gap reaches beyond the learning window; "
                    "no conditioning will occur", stacklevel=2)
            for _ in range(sched.pairings):
                _run_trial(brain, sched)
    finally:
        brain.learning = previous
    return brain.weights()


def _run_trial(brain: AntBrain, sched: ConditioningSchedule):
    smell_frame = StimulusFrame(smell_ahead=sched.smell)
    us_frame = (StimulusFrame(pain_contact=True) if sched.unconditioned == "pain"
                else StimulusFrame(reward_contact=True))
    first, second = smell_frame, us_frame
    gap = sched.stimulus_gap
    if gap < 0:
        first, second, gap = us_frame, smell_frame, -gap
    brain.sense(first)
    brain.step_ticks(gap)
    brain.sense(second)
    brain.step_ticks(sched.trial_gap)


# -- flat text weight files ------------------------------------------------

def format_weights(mapping: dict[tuple[Color, str], float]) -> str:
    lines = []
    for (smell, motor) in sorted(mapping, key=lambda k: (k[0].value, k[1])):
        lines.append(f"{smell.value} {motor} {mapping[(smell, motor)]!r}")
    return "\n".join(lines) + "\n"


def parse_weights(text: str) -> dict[tuple[Color, str], float]:
    mapping: dict[tuple[Color, str], float] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ValidationError(f"weight file line {lineno}: expected 'smell motor value'")
        smell_name, motor, raw = parts
        try:
            smell = Color(smell_name)
        except ValueError:
            raise ValidationError(f"weight file line {lineno}: unknown smell '{smell_name}'")
        if smell not in SMELLS:
            raise ValidationError(f"weight file line {lineno}: '{smell_name}' is not a smell")
        if motor not in (MOTOR_FORWARD, MOTOR_ROTATE):
            raise ValidationError(f"weight file line {lineno}: unknown motor '{motor}'")
        try:
            value = float(raw)
        except ValueError:
            raise ValidationError(f"weight file line {lineno}: bad number '{raw}'")
        mapping[(smell, motor)] = value
    missing = [f"{s.value}->{m}" for s in SMELLS for m in (MOTOR_FORWARD, MOTOR_ROTATE)
               if (s, m) not in mapping]
    if missing:
        raise ValidationError("weight file missing entries: " + ", ".join(missing))
    return mapping


def trained_reference_weights(stdp: StdpConfig = StdpConfig()) -> dict[tuple[Color, str], float]:
    """The idealized post-training weight set.

    Harm-colored smells drive rotation at full strength, the food smell
    drives forward motion, and every cross pathway sits at the floor.
    """
    w = {(s, m): stdp.w_min for s in SMELLS for m in (MOTOR_FORWARD, MOTOR_ROTATE)}
    w[(Color.WHITE, MOTOR_ROTATE)] = stdp.w_max
    w[(Color.RED, MOTOR_ROTATE)] = stdp.w_max
    w[(Color.GREEN, MOTOR_FORWARD)] = stdp.w_max
    return w
