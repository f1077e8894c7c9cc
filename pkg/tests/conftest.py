"""Shared fixtures and independent oracles used across the suite."""
from collections import deque

import numpy as np
import pytest

from evoforage.world import OPEN


def flood_components(open_mask: np.ndarray) -> int:
    """Count 4-connected components of True cells by hand-rolled BFS.

    Independent of the scipy-based connectivity check inside world
    generation, so the two can cross-validate each other."""
    h, w = open_mask.shape
    seen = np.zeros((h, w), dtype=bool)
    components = 0
    for sy in range(h):
        for sx in range(w):
            if not open_mask[sy, sx] or seen[sy, sx]:
                continue
            components += 1
            queue = deque([(sy, sx)])
            seen[sy, sx] = True
            while queue:
                y, x = queue.popleft()
                for ny, nx in ((y - 1, x), (y + 1, x), (y, x - 1), (y, x + 1)):
                    if 0 <= ny < h and 0 <= nx < w and open_mask[ny, nx] and not seen[ny, nx]:
                        seen[ny, nx] = True
                        queue.append((ny, nx))
    return components


def open_cells_connected(world) -> bool:
    return flood_components(world.terrain == OPEN) == 1


@pytest.fixture(scope="session")
def open_world():
    from evoforage.world import generate_world
    return generate_world("Open")
