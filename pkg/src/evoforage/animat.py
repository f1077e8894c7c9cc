"""Animat embodiment: sensors, action decoding, and the life-span loop.

Coordinates: x grows rightward, y grows downward, origin at the top left.
Headings are North, East, South, West (indices 0..3); North points at -y.

An animat senses a 13-cell forward fan, two bits per cell (is_barrier,
has_food): distance 1 covers lateral offsets -1..+1, distances 2 and 3 cover
-2..+2, ordered near to far and then left to right.  The 6-bit output
register decodes as two flag triples, (Left, Right, None) for turning and
(Backward, Forward, Stay) for movement, the first set flag winning and the
all-zero triple meaning None/Stay.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .hebbnet import Network
from .world import BARRIER, OPEN, World, scatter_food

NORTH, EAST, SOUTH, WEST = 0, 1, 2, 3
HEADING_NAMES = ("North", "East", "South", "West")
_HEADING_DX = np.array([0, 1, 0, -1], dtype=np.int64)
_HEADING_DY = np.array([-1, 0, 1, 0], dtype=np.int64)

TURN_LEFT = "left"
TURN_RIGHT = "right"
TURN_NONE = "none"
MOVE_FORWARD = "forward"
MOVE_BACKWARD = "backward"
MOVE_STAY = "stay"

SENSOR_BITS = 2 * 13
REGISTER_BITS = 6

DEATH_CAUSES = ("LifeSpan", "Starved", "WorldEmpty")  # indexed by kernel cause


@dataclass(frozen=True)
class Pose:
    x: int
    y: int
    heading: int


@dataclass(frozen=True)
class Action:
    turn: str
    move: str


@dataclass
class LifeParams:
    life_span: int = 8000
    starvation_limit: int = 256
    infancy_span: int = 800
    end_on_empty: bool = True

    def __post_init__(self):
        if not (0 < self.starvation_limit <= self.life_span):
            raise ValueError("starvation_limit must be in (0, life_span]")
        if not (0 <= self.infancy_span <= self.life_span):
            raise ValueError("infancy_span must be in [0, life_span]")


@dataclass(frozen=True)
class LifeResult:
    fitness: int
    clicks_lived: int
    death_cause: str


@dataclass
class AnimatRng:
    """Per-life random streams: one for food scatter, one for spawn (and,
    for the random policy, the per-click action draws that follow spawn)."""
    food: np.random.Generator
    spawn: np.random.Generator


def _sense_offsets() -> tuple[np.ndarray, np.ndarray]:
    fan = [(1, o) for o in (-1, 0, 1)]
    fan += [(2, o) for o in range(-2, 3)]
    fan += [(3, o) for o in range(-2, 3)]
    dx = np.zeros((4, 13), dtype=np.int64)
    dy = np.zeros((4, 13), dtype=np.int64)
    for h in range(4):
        fx, fy = _HEADING_DX[h], _HEADING_DY[h]
        rx, ry = _HEADING_DX[(h + 1) % 4], _HEADING_DY[(h + 1) % 4]
        for i, (dist, off) in enumerate(fan):
            dx[h, i] = dist * fx + off * rx
            dy[h, i] = dist * fy + off * ry
    return dx, dy


_SENSE_DX, _SENSE_DY = _sense_offsets()


def sense(world: World, pose: Pose) -> np.ndarray:
    """26-bit sensor vector for the 13-cell fan ahead of the pose.

    Cells outside the grid read as (1, 0): barrier, no food."""
    xs = pose.x + _SENSE_DX[pose.heading]
    ys = pose.y + _SENSE_DY[pose.heading]
    inside = (xs >= 0) & (xs < world.width) & (ys >= 0) & (ys < world.height)
    cx = np.clip(xs, 0, world.width - 1)
    cy = np.clip(ys, 0, world.height - 1)
    bits = np.empty(SENSOR_BITS, dtype=np.uint8)
    bits[0::2] = np.where(inside, world.terrain[cy, cx] == BARRIER, 1)
    bits[1::2] = np.where(inside, world.food[cy, cx] > 0, 0)
    return bits


def _pick(triple, names: tuple[str, str, str], default: str) -> str:
    for i in (0, 1, 2):
        if triple[i]:
            return names[i]
    return default


def decode_output(register) -> Action:
    """Total decode of a 6-bit register into an Action."""
    bits = [int(b) for b in register]
    if len(bits) != REGISTER_BITS:
        raise ValueError(f"register must have length {REGISTER_BITS}")
    turn = _pick(bits[0:3], (TURN_LEFT, TURN_RIGHT, TURN_NONE), TURN_NONE)
    move = _pick(bits[3:6], (MOVE_BACKWARD, MOVE_FORWARD, MOVE_STAY), MOVE_STAY)
    return Action(turn, move)


def apply_action(world: World, pose: Pose, action: Action) -> tuple[Pose, int]:
    """Turn, then move along the new heading; collect food on arrival.

    A move into a barrier (or off-grid) leaves the position unchanged but
    the turn stands.  Mutates the world's food grid on collection."""
    h = pose.heading
    if action.turn == TURN_LEFT:
        h = (h + 3) % 4
    elif action.turn == TURN_RIGHT:
        h = (h + 1) % 4

    x, y = pose.x, pose.y
    collected = 0
    if action.move != MOVE_STAY:
        step = 1 if action.move == MOVE_FORWARD else -1
        nx = x + step * int(_HEADING_DX[h])
        ny = y + step * int(_HEADING_DY[h])
        if 0 <= nx < world.width and 0 <= ny < world.height and world.terrain[ny, nx] == OPEN:
            x, y = nx, ny
            collected = int(world.food[y, x])
            world.food[y, x] = 0
    return Pose(x, y, h), collected


# decode tables for the compiled life loop, built from decode_output so the
# kernel and the public decoder cannot drift apart
def _decode_tables() -> tuple[np.ndarray, np.ndarray]:
    turn_code = {TURN_NONE: 0, TURN_LEFT: 1, TURN_RIGHT: 2}
    move_code = {MOVE_STAY: 0, MOVE_FORWARD: 1, MOVE_BACKWARD: 2}
    turn_tab = np.zeros(64, dtype=np.uint8)
    move_tab = np.zeros(64, dtype=np.uint8)
    for code in range(64):
        bits = [(code >> (5 - b)) & 1 for b in range(6)]
        action = decode_output(bits)
        turn_tab[code] = turn_code[action.turn]
        move_tab[code] = move_code[action.move]
    return turn_tab, move_tab


_TURN_TAB, _MOVE_TAB = _decode_tables()
_NO_CODES = np.zeros(0, dtype=np.uint8)
_EMPTY_I32 = np.zeros(0, dtype=np.int32)
_EMPTY_F64 = np.zeros(0, dtype=np.float64)
_EMPTY_PTR = np.zeros(2, dtype=np.int32)


def _spawn(world: World, rng: np.random.Generator) -> Pose:
    """Uniform random Open cell (row-major order) and heading."""
    cells = np.flatnonzero(world.terrain.ravel() == OPEN)
    if len(cells) == 0:
        raise ValueError("no spawn cell: world has no open cells")
    flat = int(cells[rng.integers(len(cells))])
    heading = int(rng.integers(4))
    return Pose(flat % world.width, flat // world.width, heading)


def _finish(result: tuple[int, int, int]) -> LifeResult:
    fitness, clicks, cause = result
    return LifeResult(int(fitness), int(clicks), DEATH_CAUSES[cause])


def live(world_template: World, network: Network, life_params: LifeParams,
         animat_rng: AnimatRng) -> LifeResult:
    """Run one full life: scatter food, spawn, then sense/fire/decode/act
    each click, learning per click (Soft during infancy, AdultSoft always).

    The life ends at life_span clicks, after starvation_limit clicks without
    a collection, or when the world runs out of food (if end_on_empty).
    Mutates the network's learnable weights; the template world is untouched.
    """
    world = scatter_food(world_template, animat_rng.food)
    pose = _spawn(world, animat_rng.spawn)
    lp = life_params
    result = _kernels.run_life(
        world.terrain.ravel(), world.food.ravel(), world.width, world.height,
        network._indptr, network._cols, network._weights,
        network._learn_rows, network._learn_cols, network._learn_pos,
        network._n_soft, network.n,
        network.eta, network.rule == "oja", network.theta,
        pose.x, pose.y, pose.heading,
        lp.life_span, lp.starvation_limit, lp.infancy_span, lp.end_on_empty,
        _SENSE_DX, _SENSE_DY, _HEADING_DX, _HEADING_DY,
        _TURN_TAB, _MOVE_TAB,
        _NO_CODES, True)
    return _finish(result)


def random_policy_life(world_template: World, life_params: LifeParams,
                       animat_rng: AnimatRng) -> LifeResult:
    """As live(), but each click's register is drawn uniformly from the 64
    possible 6-bit patterns.  The calibration baseline."""
    world = scatter_food(world_template, animat_rng.food)
    pose = _spawn(world, animat_rng.spawn)
    lp = life_params
    codes = animat_rng.spawn.integers(0, 64, size=lp.life_span).astype(np.uint8)
    result = _kernels.run_life(
        world.terrain.ravel(), world.food.ravel(), world.width, world.height,
        _EMPTY_PTR, _EMPTY_I32, _EMPTY_F64,
        _EMPTY_I32, _EMPTY_I32, _EMPTY_I32, 0, 32,
        0.0035, True, 0.5,
        pose.x, pose.y, pose.heading,
        lp.life_span, lp.starvation_limit, lp.infancy_span, lp.end_on_empty,
        _SENSE_DX, _SENSE_DY, _HEADING_DX, _HEADING_DY,
        _TURN_TAB, _MOVE_TAB,
        codes, False)
    return _finish(result)
