"""Grid environment: terrain, food, and procedural world generation.

A world is a width x height grid of cells, each either Open or Barrier, with
at most one food unit per Open cell.  The outermost five rings of cells are
always Barrier, which pens animats in and lets sensors skip bounds checks.
Three world types are supported: Open (boundary ring only), RoundedBarrier1
(elliptical barrier blobs in otherwise open terrain) and Maze (recursive
division, corridor width 3).
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy import ndimage

OPEN = 0
BARRIER = 1

RING = 5                 # depth of the enclosing barrier ring
FOOD_PROBABILITY = 0.75  # per-open-cell chance of one food unit

WORLD_TYPES = ("Open", "RoundedBarrier1", "Maze")

# Fixed layout seed so all runs of an experiment share one terrain per type,
# the way a hand-drawn map would.  Overridable through generate_world.
DEFAULT_LAYOUT_SEED = 0xFEEDBEEF

_CORRIDOR = 3       # maze corridor width
_BLOBS = 6          # ellipse count for RoundedBarrier1
_MIN_BLOB_WORLD = 40

# 4-connectivity for flood fill
_CROSS = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=np.uint8)


@dataclass
class World:
    width: int
    height: int
    terrain: np.ndarray   # (height, width) uint8, BARRIER or OPEN
    food: np.ndarray      # (height, width) uint8 food units
    world_type: str


def _open_connected(terrain: np.ndarray) -> bool:
    """True when the Open cells form exactly one 4-connected component."""
    _, count = ndimage.label(terrain == OPEN, structure=_CROSS)
    return count == 1


def _ring_mask(height: int, width: int) -> np.ndarray:
    mask = np.zeros((height, width), dtype=bool)
    mask[:RING, :] = True
    mask[-RING:, :] = True
    mask[:, :RING] = True
    mask[:, -RING:] = True
    return mask


def _add_ellipse_blobs(terrain: np.ndarray, rng: np.random.Generator, max_tries: int = 200) -> None:
    height, width = terrain.shape
    ys, xs = np.ogrid[:height, :width]
    for blob in range(_BLOBS):
        for _ in range(max_tries):
            semi_x = int(rng.integers(4, 10))
            semi_y = int(rng.integers(4, 10))
            cx = int(rng.integers(RING, width - RING))
            cy = int(rng.integers(RING, height - RING))
            candidate = terrain.copy()
            mask = ((xs - cx) / semi_x) ** 2 + ((ys - cy) / semi_y) ** 2 <= 1.0
            candidate[mask] = BARRIER
            if _open_connected(candidate):
                terrain[:] = candidate
                break
        else:
            raise ValueError(f"could not place barrier blob {blob}: world too small")


def _carve_maze(terrain: np.ndarray, rng: np.random.Generator) -> None:
    """Recursive division on the interior, walls 1 thick, corridors 3 wide.

    Walls live on a fixed lattice (interior-local coordinate = 3 mod 4) and
    doors occupy whole corridor bands, so later walls never seal a door and
    the maze stays connected by construction.
    """
    height, width = terrain.shape
    stride = _CORRIDOR + 1

    def divide(x0: int, y0: int, x1: int, y1: int) -> None:
        w, h = x1 - x0, y1 - y0
        can_v = w >= 2 * _CORRIDOR + 1
        can_h = h >= 2 * _CORRIDOR + 1
        if not (can_v or can_h):
            return
        if can_v and can_h:
            if w != h:
                vertical = w > h
            else:
                vertical = bool(rng.integers(2))
        else:
            vertical = can_v
        if vertical:
            walls = np.arange(x0 + _CORRIDOR, x1 - _CORRIDOR, stride)
            wx = int(walls[rng.integers(len(walls))])
            doors = np.arange(y0, y1 - _CORRIDOR + 1, stride)
            dy = int(doors[rng.integers(len(doors))])
            terrain[y0:y1, wx] = BARRIER
            terrain[dy:dy + _CORRIDOR, wx] = OPEN
            divide(x0, y0, wx, y1)
            divide(wx + 1, y0, x1, y1)
        else:
            walls = np.arange(y0 + _CORRIDOR, y1 - _CORRIDOR, stride)
            wy = int(walls[rng.integers(len(walls))])
            doors = np.arange(x0, x1 - _CORRIDOR + 1, stride)
            dx = int(doors[rng.integers(len(doors))])
            terrain[wy, x0:x1] = BARRIER
            terrain[wy, dx:dx + _CORRIDOR] = OPEN
            divide(x0, y0, x1, wy)
            divide(x0, wy + 1, x1, y1)

    divide(RING, RING, width - RING, height - RING)


def generate_world(world_type: str, width: int = 110, height: int = 90,
                   layout_seed: int = DEFAULT_LAYOUT_SEED) -> World:
    """Deterministic terrain for one of the three world types.  No food."""
    if world_type not in WORLD_TYPES:
        raise ValueError(f"unknown world type {world_type!r}")
    minimum = _MIN_BLOB_WORLD if world_type == "RoundedBarrier1" else 2 * RING + 2
    if width < minimum or height < minimum:
        raise ValueError(f"world too small: {world_type} needs at least {minimum}x{minimum}")

    rng = np.random.Generator(np.random.PCG64(layout_seed))
    terrain = np.full((height, width), OPEN, dtype=np.uint8)
    terrain[_ring_mask(height, width)] = BARRIER
    if world_type == "RoundedBarrier1":
        _add_ellipse_blobs(terrain, rng)
    elif world_type == "Maze":
        _carve_maze(terrain, rng)
    food = np.zeros((height, width), dtype=np.uint8)
    return World(width, height, terrain, food, world_type)


def scatter_food(world: World, rng: np.random.Generator) -> World:
    """Fresh food grid: each Open cell gets one unit with probability 0.75."""
    draws = rng.random(world.terrain.shape)
    food = ((draws < FOOD_PROBABILITY) & (world.terrain == OPEN)).astype(np.uint8)
    return replace(world, food=food)


def consume_food(world: World, position: tuple[int, int]) -> tuple[World, int]:
    """Take the food at (x, y), mutating the world's food grid in place."""
    x, y = position
    if not (0 <= x < world.width and 0 <= y < world.height):
        raise ValueError(f"position {position} out of bounds")
    collected = int(world.food[y, x])
    world.food[y, x] = 0
    return world, collected


def remaining_food(world: World) -> int:
    return int(world.food.sum())


def save_world(world: World) -> str:
    """World file: header line, then one row of '#'/'.' per grid row."""
    lines = [f"{world.width} {world.height} {world.world_type}"]
    for row in world.terrain:
        lines.append("".join("#" if cell == BARRIER else "." for cell in row))
    return "\n".join(lines) + "\n"


def load_world(text: str) -> World:
    """Parse the world file format; food grids are never stored in files."""
    lines = text.splitlines()
    if not lines:
        raise ValueError("line 1: empty world file")
    header = lines[0].split()
    if len(header) != 3:
        raise ValueError("line 1: header must be 'width height world_type'")
    try:
        width, height = int(header[0]), int(header[1])
    except ValueError:
        raise ValueError("line 1: width and height must be integers") from None
    world_type = header[2]
    if world_type not in WORLD_TYPES:
        raise ValueError(f"line 1: unknown world type {world_type!r}")
    if width < 2 * RING + 2 or height < 2 * RING + 2:
        raise ValueError("line 1: world too small")
    if len(lines) != height + 1:
        raise ValueError(f"line {len(lines)}: expected {height} grid rows, found {len(lines) - 1}")

    terrain = np.zeros((height, width), dtype=np.uint8)
    for i in range(height):
        line_no = i + 2
        row = lines[i + 1]
        if len(row) != width:
            raise ValueError(f"line {line_no}: row has {len(row)} cells, expected {width}")
        for j, ch in enumerate(row):
            if ch == "#":
                terrain[i, j] = BARRIER
            elif ch == ".":
                terrain[i, j] = OPEN
            else:
                raise ValueError(f"line {line_no}: unknown cell character {ch!r}")

    ring = _ring_mask(height, width)
    bad = np.argwhere(ring & (terrain == OPEN))
    if len(bad):
        raise ValueError(f"line {int(bad[0][0]) + 2}: open cell inside the 5-deep boundary ring")
    food = np.zeros((height, width), dtype=np.uint8)
    return World(width, height, terrain, food, world_type)
