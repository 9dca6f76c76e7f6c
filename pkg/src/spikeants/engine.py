"""Top-level simulation loop: phases, determinism and metrics.

Within one world tick the ants step in ascending id order (world
mutations land in that order), then both pheromone fields evaporate
once, then the metrics row is sampled. The seeded generator is consumed
only while placing randomly spawned ants before tick 0, so the whole
run is a pure function of (seed, config, scenario).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .agents import Ant, Heading, SimPhase, step_ant
from .circuit import AntBrain
from .config import SimConfig, config_hash
from .scenario import Scenario
from .world import Color, Grid, PatchKind

_HEADING_ORDER = (Heading.NORTH, Heading.EAST, Heading.SOUTH, Heading.WEST)


class SimulationError(ValueError):
    pass


@dataclass
class Metrics:
    """Per-tick measurement log of one run."""
    seed: int
    config_digest: str
    initial_food: int = 0
    ticks: list[int] = field(default_factory=list)
    total_food: list[int] = field(default_factory=list)
    neg_cells: list[int] = field(default_factory=list)
    pos_cells: list[int] = field(default_factory=list)
    harm_contacts: list[int] = field(default_factory=list)      # cumulative
    boundary_resets: list[int] = field(default_factory=list)    # cumulative
    boundary_reset_ticks: list[int] = field(default_factory=list)
    per_ant_harm_ticks: list[list[int]] = field(default_factory=list)
    food_consumed: int = 0

    CSV_HEADER = "tick,total_food,neg_cells,pos_cells,harm_contacts,boundary_resets"

    def sample(self, tick: int, grid: Grid, harm_total: int, reset_total: int):
        self.ticks.append(tick)
        self.total_food.append(grid.total_food())
        self.neg_cells.append(grid.negative_cell_count())
        self.pos_cells.append(grid.positive_cell_count())
        self.harm_contacts.append(harm_total)
        self.boundary_resets.append(reset_total)

    def to_csv_text(self) -> str:
        lines = [self.CSV_HEADER]
        for i in range(len(self.ticks)):
            lines.append(f"{self.ticks[i]},{self.total_food[i]},{self.neg_cells[i]},"
                         f"{self.pos_cells[i]},{self.harm_contacts[i]},"
                         f"{self.boundary_resets[i]}")
        return "\n".join(lines) + "\n"

    def summary(self) -> dict:
        return {
            "seed": self.seed,
            "config_hash": self.config_digest,
            "ticks": len(self.ticks),
            "initial_total_food": self.initial_food,
            "final_total_food": self.total_food[-1] if self.ticks else self.initial_food,
            "food_consumed": self.food_consumed,
            "final_neg_cells": self.neg_cells[-1] if self.ticks else 0,
            "final_pos_cells": self.pos_cells[-1] if self.ticks else 0,
            "harm_contacts": self.harm_contacts[-1] if self.ticks else 0,
            "boundary_resets": self.boundary_resets[-1] if self.ticks else 0,
        }

    def trajectory_lengths(self, ant_id: int) -> list[int]:
        """Tick gaps between consecutive harmful contacts of one ant."""
        ticks = self.per_ant_harm_ticks[ant_id]
        return [b - a for a, b in zip(ticks, ticks[1:])]


def build_ants(scenario: Scenario, cfg: SimConfig, grid: Grid,
               rng: np.random.Generator, learning: bool) -> list[Ant]:
    """Spawn ants: explicit scenario spawns first, then random placements.

    Randomness is a fixed draw sequence on the run's PCG64 stream: for
    each random ant, one draw for the cell (from the row-major list of
    empty cells, without replacement) and one for the heading.
    """
    explicit = list(scenario.spawns)
    n_random = scenario.random_ants
    if cfg.n_ants > 0:
        if cfg.n_ants < len(explicit):
            raise SimulationError(
                f"n_ants={cfg.n_ants} below the {len(explicit)} explicit spawns")
        n_random = cfg.n_ants - len(explicit)
    total = len(explicit) + n_random
    if total < 1:
        raise SimulationError("scenario provides no ants")

    poses: list[tuple[int, int, Heading]] = list(explicit)
    if n_random:
        empty = [(x, y) for y in range(grid.height) for x in range(grid.width)
                 if grid.kind[y, x] == PatchKind.EMPTY]
        if len(empty) < n_random:
            raise SimulationError("not enough empty cells for random spawns")
        for _ in range(n_random):
            idx = int(rng.integers(len(empty)))
            x, y = empty.pop(idx)
            heading = _HEADING_ORDER[int(rng.integers(4))]
            poses.append((x, y, heading))

    ants = []
    for i, (x, y, heading) in enumerate(poses):
        brain = AntBrain(cfg.circuit, cfg.stdp, learning=learning, kickstart=True)
        ants.append(Ant(id=i, position=(x, y), heading=heading, brain=brain,
                        initial_position=(x, y), initial_heading=heading))
    return ants


def _execute(cfg: SimConfig, scenario: Scenario,
             weights: Optional[dict[tuple[Color, str], float]],
             schedule: Sequence[tuple[SimPhase, int]],
             frame_hook=None) -> tuple[Metrics, list[Ant]]:
    if not schedule or any(t < 1 for _, t in schedule):
        raise SimulationError("every phase needs a positive tick count")
    if any(phase is SimPhase.FORAGING for phase, _ in schedule):
        if not scenario.boundary_is_walled():
            raise SimulationError("foraging scenarios must be enclosed by walls")

    grid = scenario.build_grid(clear_threshold=cfg.evaporation.clear_threshold)
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    ants = build_ants(scenario, cfg, grid, rng,
                      learning=_learning_for(schedule[0][0], cfg))
    if weights is not None:
        for ant in ants:
            ant.brain.set_weights(weights)

    metrics = Metrics(seed=cfg.seed, config_digest=config_hash(cfg),
                      initial_food=grid.total_food())
    metrics.per_ant_harm_ticks = [[] for _ in ants]
    harm_total = 0
    reset_total = 0
    tick = 0
    for phase, phase_ticks in schedule:
        learning = _learning_for(phase, cfg)
        # Stigmergy belongs to the collective foraging stage; an ant in
        # conditioning would only poison its own arena with deposits.
        deposition = cfg.pheromone_enabled and phase is not SimPhase.TRAINING
        for ant in ants:
            ant.brain.learning = learning
        for _ in range(phase_ticks):
            tick += 1
            for ant in ants:
                ev = step_ant(grid, ant, cfg.ant, phase,
                              pheromone_enabled=deposition)
                if ev.pain:
                    harm_total += 1
                    metrics.per_ant_harm_ticks[ant.id].append(tick)
                if ev.boundary_reset:
                    reset_total += 1
                    metrics.boundary_reset_ticks.append(tick)
                metrics.food_consumed += ev.ate
            grid.evaporate_step(cfg.evaporation)
            metrics.sample(tick, grid, harm_total, reset_total)
            if frame_hook is not None:
                frame_hook(tick, grid, ants)
    return metrics, ants


def _learning_for(phase: SimPhase, cfg: SimConfig) -> bool:
    if phase is SimPhase.TRAINING:
        return True
    return cfg.learn_during_foraging


def run(cfg: SimConfig, scenario: Scenario,
        weights: Optional[dict[tuple[Color, str], float]] = None,
        schedule: Optional[Sequence[tuple[SimPhase, int]]] = None,
        frame_hook=None) -> Metrics:
    """Execute a full simulation and return its metrics.

    `schedule` falls back to the config's phase_schedule, and failing
    that to a single foraging phase of `world_ticks`. `frame_hook(tick,
    grid, ants)`, when given, is called after every sampled tick (the
    CLI uses it for snapshot dumps).
    """
    if schedule is None:
        schedule = cfg.phase_schedule or ((SimPhase.FORAGING, cfg.world_ticks),)
    metrics, _ = _execute(cfg, scenario, weights, schedule, frame_hook)
    return metrics


def run_training(cfg: SimConfig, scenario: Scenario,
                 ) -> tuple[dict[tuple[Color, str], float], Metrics]:
    """Train a single embodied ant; returns its weights and the metrics.

    The scenario must hold both harmful and rewarding patches, otherwise
    there is nothing to condition on.
    """
    kinds = "".join(scenario.rows)
    if "R" not in kinds and "#" not in kinds:
        raise SimulationError("training scenario has no harmful patches")
    if "F" not in kinds:
        raise SimulationError("training scenario has no reward patches")
    n_random = scenario.random_ants
    if cfg.n_ants > 0:
        n_random = cfg.n_ants - len(scenario.spawns)
    if len(scenario.spawns) + n_random != 1:
        raise SimulationError("training runs use exactly one ant")
    metrics, ants = _execute(cfg, scenario, None,
                             ((SimPhase.TRAINING, cfg.world_ticks),))
    return ants[0].brain.weights(), metrics


@dataclass(frozen=True)
class CompareResult:
    enabled: Metrics
    disabled: Metrics

    def summary(self) -> dict:
        on, off = self.enabled, self.disabled
        return {
            "food_consumed_enabled": on.food_consumed,
            "food_consumed_disabled": off.food_consumed,
            "final_food_enabled": on.total_food[-1],
            "final_food_disabled": off.total_food[-1],
            "consumption_advantage": on.food_consumed - off.food_consumed,
        }


def compare(cfg: SimConfig, scenario: Scenario,
            weights: Optional[dict[tuple[Color, str], float]] = None) -> CompareResult:
    """Paired runs differing only in pheromone_enabled, same seed."""
    on = run(replace(cfg, pheromone_enabled=True), scenario, weights=weights)
    off = run(replace(cfg, pheromone_enabled=False), scenario, weights=weights)
    return CompareResult(enabled=on, disabled=off)
