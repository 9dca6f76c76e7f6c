"""Grid world: patches, food sources and the two evaporating pheromone fields."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, IntEnum
import numpy as np


class Color(Enum):
    """Stimulus colors as the ants perceive them."""
    BLACK = "black"
    WHITE = "white"
    RED = "red"
    GREEN = "green"


class PatchKind(IntEnum):
    EMPTY = 0
    WALL = 1
    HARM = 2
    FOOD = 3


class PheromoneField(Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


@dataclass
class PheromoneCell:
    positive: float = 0.0
    negative: float = 0.0


@dataclass
class Patch:
    """Snapshot of one grid cell."""
    base_kind: PatchKind
    food_quantity: int
    pheromone: PheromoneCell


@dataclass(frozen=True)
class EvaporationConfig:
    rho_positive: float = 0.03
    rho_negative: float = 0.002
    clear_threshold: float = 0.05

    def __post_init__(self):
        for name in ("rho_positive", "rho_negative"):
            if not 0.0 < getattr(self, name) < 1.0:
                raise ValueError(f"{name} must lie in (0, 1)")
        if not self.clear_threshold > 0:
            raise ValueError("clear_threshold must be positive")


def effective_color(patch: Patch, clear_threshold: float) -> Color:
    """Stimulus color a cell presents, mixing base kind and pheromones.

    Walls are always white and food always green; on anything else a
    negative deposit above the visibility threshold masks the cell red,
    while a positive deposit presents empty ground as green so that the
    food-conditioned response extends to marked trails.
    """
    if patch.base_kind is PatchKind.WALL:
        return Color.WHITE
    if patch.base_kind is PatchKind.FOOD:
        return Color.GREEN
    if patch.pheromone.negative >= clear_threshold:
        return Color.RED
    if patch.base_kind is PatchKind.HARM:
        return Color.RED
    if patch.pheromone.positive >= clear_threshold:
        return Color.GREEN
    return Color.BLACK


class Grid:
    """Rectangular field of patches with vectorized pheromone dynamics.

    Cell addressing is (x, y) with x the column and y the row; storage is
    row-major numpy. One writer per grid within a tick; snapshots taken
    between ticks may be shared freely.
    """

    def __init__(self, width: int, height: int, clear_threshold: float = 0.05):
        if width < 1 or height < 1:
            raise ValueError("grid dimensions must be positive")
        self.width = width
        self.height = height
        self.clear_threshold = clear_threshold
        self.kind = np.full((height, width), int(PatchKind.EMPTY), dtype=np.uint8)
        self.food = np.zeros((height, width), dtype=np.int64)
        self.positive = np.zeros((height, width), dtype=np.float64)
        self.negative = np.zeros((height, width), dtype=np.float64)
        self.wall_deposit_attempts = 0

    # -- cell access ---------------------------------------------------

    def in_bounds(self, x: int, y: int) -> bool:
        return 0 <= x < self.width and 0 <= y < self.height

    def is_boundary(self, x: int, y: int) -> bool:
        return x == 0 or y == 0 or x == self.width - 1 or y == self.height - 1

    def patch(self, x: int, y: int) -> Patch:
        self._check(x, y)
        return Patch(
            base_kind=PatchKind(int(self.kind[y, x])),
            food_quantity=int(self.food[y, x]),
            pheromone=PheromoneCell(positive=float(self.positive[y, x]),
                                    negative=float(self.negative[y, x])),
        )

    def set_kind(self, x: int, y: int, kind: PatchKind, food_quantity: int = 0):
        self._check(x, y)
        if (kind is PatchKind.FOOD) != (food_quantity > 0):
            raise ValueError("food_quantity must be positive exactly for food patches")
        self.kind[y, x] = int(kind)
        self.food[y, x] = food_quantity
        if kind is PatchKind.WALL:
            self.positive[y, x] = 0.0
            self.negative[y, x] = 0.0

    def effective_color_at(self, x: int, y: int) -> Color:
        self._check(x, y)
        k = self.kind[y, x]
        if k == PatchKind.WALL:
            return Color.WHITE
        if k == PatchKind.FOOD:
            return Color.GREEN
        eps = self.clear_threshold
        if self.negative[y, x] >= eps:
            return Color.RED
        if k == PatchKind.HARM:
            return Color.RED
        if self.positive[y, x] >= eps:
            return Color.GREEN
        return Color.BLACK

    # -- pheromone dynamics ---------------------------------------------

    def deposit(self, x: int, y: int, fieldkind: PheromoneField, amount: float):
        """Add pheromone to one cell; deposits accumulate additively.

        Attempts on wall cells are ignored, except for a diagnostic
        counter.
        """
        self._check(x, y)
        if amount < 0:
            raise ValueError("deposit amount must be non-negative")
        if self.kind[y, x] == PatchKind.WALL:
            self.wall_deposit_attempts += 1
            return
        if fieldkind is PheromoneField.POSITIVE:
            self.positive[y, x] += amount
        else:
            self.negative[y, x] += amount

    def evaporate_step(self, cfg: EvaporationConfig):
        """One tick of multiplicative decay; faint residues snap to zero."""
        self.positive *= (1.0 - cfg.rho_positive)
        self.negative *= (1.0 - cfg.rho_negative)
        eps = cfg.clear_threshold
        self.positive[self.positive < eps] = 0.0
        self.negative[self.negative < eps] = 0.0

    # -- food ------------------------------------------------------------

    def consume_food(self, x: int, y: int, bite: int = 1) -> int:
        """Take up to `bite` units; exhausted patches turn empty.

        Returns the remaining quantity; a non-food patch is a no-op
        returning 0.
        """
        self._check(x, y)
        if self.kind[y, x] != PatchKind.FOOD:
            return 0
        q = int(self.food[y, x])
        q -= min(bite, q)
        self.food[y, x] = q
        if q == 0:
            self.kind[y, x] = int(PatchKind.EMPTY)
        return q

    def total_food(self) -> int:
        return int(self.food.sum())

    # -- metrics helpers ---------------------------------------------------

    def negative_cell_count(self) -> int:
        """Empty-ground cells currently masked red by negative pheromone."""
        return int(((self.kind == PatchKind.EMPTY)
                    & (self.negative >= self.clear_threshold)).sum())

    def positive_cell_count(self) -> int:
        """Empty-ground cells currently presented green by positive pheromone."""
        return int(((self.kind == PatchKind.EMPTY)
                    & (self.positive >= self.clear_threshold)).sum())

    def empty_cell_count(self) -> int:
        return int((self.kind == PatchKind.EMPTY).sum())

    def _check(self, x: int, y: int):
        if not self.in_bounds(x, y):
            raise ValueError(f"cell ({x}, {y}) out of bounds")
