"""Embodied ants: perception, movement, eating and pheromone deposition.

Each ant owns one brain and a pose on the grid. Movement is 4-connected
with quarter-turn rotations, which keeps "the single cell directly
ahead" well defined as the only smell source. Walls block movement; the
blocked attempt registers as a collision that reaches the nociceptor on
the following world tick (standing on a red cell hurts directly).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .circuit import ActuatorFrame, AntBrain, StimulusFrame
from .world import Color, Grid, PatchKind, PheromoneField


class Heading(Enum):
    NORTH = "N"
    EAST = "E"
    SOUTH = "S"
    WEST = "W"

    @property
    def vector(self) -> tuple[int, int]:
        return _VECTORS[self]

    def turned(self, direction: str) -> "Heading":
        order = _CLOCKWISE
        i = order.index(self)
        return order[(i + 1) % 4] if direction == "right" else order[(i - 1) % 4]


_VECTORS = {
    Heading.NORTH: (0, -1),
    Heading.EAST: (1, 0),
    Heading.SOUTH: (0, 1),
    Heading.WEST: (-1, 0),
}
_CLOCKWISE = (Heading.NORTH, Heading.EAST, Heading.SOUTH, Heading.WEST)


class SimPhase(Enum):
    TRAINING = "training"
    FORAGING = "foraging"


@dataclass(frozen=True)
class AntConfig:
    brain_steps_per_world_tick: int = 10
    positive_deposit_ticks: int = 6
    deposit_amount_positive: float = 1.0
    deposit_amount_negative: float = 1.0
    rotate_direction: str = "right"

    def __post_init__(self):
        if self.brain_steps_per_world_tick < 1:
            raise ValueError("brain_steps_per_world_tick must be at least 1")
        if self.positive_deposit_ticks < 0:
            raise ValueError("positive_deposit_ticks must be non-negative")
        if self.deposit_amount_positive < 0 or self.deposit_amount_negative < 0:
            raise ValueError("deposit amounts must be non-negative")
        if self.rotate_direction not in ("right", "left"):
            raise ValueError("rotate_direction must be 'right' or 'left'")


@dataclass
class Ant:
    id: int
    position: tuple[int, int]
    heading: Heading
    brain: AntBrain
    initial_position: Optional[tuple[int, int]] = None
    initial_heading: Optional[Heading] = None
    positive_deposit_remaining: int = 0
    pain_pending: bool = False

    def __post_init__(self):
        if self.initial_position is None:
            self.initial_position = self.position
        if self.initial_heading is None:
            self.initial_heading = self.heading


@dataclass(frozen=True)
class AntEvents:
    """What one ant did during one world tick."""
    moved: bool = False
    blocked: bool = False
    rotated: bool = False
    ate: int = 0
    pain: bool = False
    deposited_positive: bool = False
    deposited_negative: bool = False
    boundary_reset: bool = False


def perceive(grid: Grid, ant: Ant) -> StimulusFrame:
    """Build the stimulus frame for the ant's current pose.

    The only smell comes from the single cell directly ahead; pain is
    standing on a harm-colored cell or last tick's collision; reward is
    standing on actual food (a positively marked trail does not feed).
    """
    x, y = ant.position
    dx, dy = ant.heading.vector
    fx, fy = x + dx, y + dy
    smell: Optional[Color] = None
    if grid.in_bounds(fx, fy):
        front = grid.effective_color_at(fx, fy)
        if front is not Color.BLACK:
            smell = front
    here = grid.effective_color_at(x, y)
    pain = here in (Color.WHITE, Color.RED) or ant.pain_pending
    reward = grid.kind[y, x] == PatchKind.FOOD
    return StimulusFrame(smell_ahead=smell, pain_contact=pain, reward_contact=reward)


def deposit_actions(frame: ActuatorFrame, positive_deposit_remaining: int,
                    ) -> tuple[bool, bool, int]:
    """Pure deposition policy for one tick.

    Positive pheromone is released while the post-food countdown runs;
    negative pheromone follows the energy-counter neuron directly.
    Returns (deposit_positive, deposit_negative, new_countdown).
    """
    deposit_positive = False
    if positive_deposit_remaining > 0:
        deposit_positive = True
        positive_deposit_remaining -= 1
    return deposit_positive, frame.emit_negative_pheromone, positive_deposit_remaining


def step_ant(grid: Grid, ant: Ant, cfg: AntConfig, phase: SimPhase,
             pheromone_enabled: bool = True) -> AntEvents:
    """Advance one ant by one world tick."""
    frame = perceive(grid, ant)
    ant.pain_pending = False
    ant.brain.sense(frame)
    events = ant.brain.step_ticks(cfg.brain_steps_per_world_tick)
    act = ant.brain.actuate(events)

    # Consumption happens at the cell where the reward contact was
    # sensed: the motor drive moves the ant every tick, so testing the
    # post-move cell would leave contacted food permanently uneaten.
    ate = 0
    if frame.reward_contact and act.emit_positive_pheromone:
        cx, cy = ant.position
        if grid.kind[cy, cx] == PatchKind.FOOD:
            grid.consume_food(cx, cy, 1)
            ate = 1
            ant.positive_deposit_remaining = cfg.positive_deposit_ticks

    moved = blocked = rotated = False
    reset = False
    if act.rotate:
        ant.heading = ant.heading.turned(cfg.rotate_direction)
        rotated = True
    elif act.move_forward:
        x, y = ant.position
        dx, dy = ant.heading.vector
        tx, ty = x + dx, y + dy
        if not grid.in_bounds(tx, ty):
            # Open grid edge: treat like hitting the world boundary.
            blocked = True
            ant.pain_pending = True
            if phase is SimPhase.TRAINING:
                reset = True
        elif grid.kind[ty, tx] == PatchKind.WALL:
            blocked = True
            ant.pain_pending = True
            if phase is SimPhase.TRAINING and grid.is_boundary(tx, ty):
                reset = True
        else:
            ant.position = (tx, ty)
            moved = True

    x, y = ant.position
    dep_pos, dep_neg, ant.positive_deposit_remaining = deposit_actions(
        act, ant.positive_deposit_remaining)
    if pheromone_enabled:
        if dep_pos:
            grid.deposit(x, y, PheromoneField.POSITIVE, cfg.deposit_amount_positive)
        if dep_neg:
            grid.deposit(x, y, PheromoneField.NEGATIVE, cfg.deposit_amount_negative)
    else:
        dep_pos = dep_neg = False

    if phase is SimPhase.TRAINING and grid.is_boundary(*ant.position):
        reset = True
        if grid.effective_color_at(*ant.position) in (Color.WHITE, Color.RED):
            # Touching a harmful boundary still has to reach the senses
            # even though the pose snaps back before the next perceive.
            ant.pain_pending = True
    if reset:
        # Only the pose is reset; the brain (and its learning state)
        # carries straight through the repositioning.
        ant.position = ant.initial_position
        ant.heading = ant.initial_heading

    return AntEvents(moved=moved, blocked=blocked, rotated=rotated, ate=ate,
                     pain=frame.pain_contact, deposited_positive=dep_pos,
                     deposited_negative=dep_neg, boundary_reset=reset)
