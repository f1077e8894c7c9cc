import numpy as np
import pytest

from evoforage.world import (
    BARRIER,
    OPEN,
    RING,
    World,
    consume_food,
    generate_world,
    load_world,
    remaining_food,
    save_world,
    scatter_food,
)
from conftest import flood_components, open_cells_connected


def ring_is_barrier(world):
    t = world.terrain
    return (t[:RING, :].all() and t[-RING:, :].all()
            and t[:, :RING].all() and t[:, -RING:].all())


def test_open_world_interior_fully_open(open_world):
    interior = open_world.terrain[RING:-RING, RING:-RING]
    assert (interior == OPEN).all()
    assert ring_is_barrier(open_world)


def test_generate_world_deterministic():
    a = generate_world("Maze", 110, 90, layout_seed=77)
    b = generate_world("Maze", 110, 90, layout_seed=77)
    assert np.array_equal(a.terrain, b.terrain)
    c = generate_world("Maze", 110, 90, layout_seed=78)
    assert not np.array_equal(a.terrain, c.terrain)


@pytest.mark.parametrize("seed", [1, 2, 3, 4, 5])
def test_rounded_barrier_connected_with_interior_blobs(seed):
    world = generate_world("RoundedBarrier1", 110, 90, layout_seed=seed)
    interior = world.terrain[RING:-RING, RING:-RING]
    assert (interior == BARRIER).sum() >= 1
    # flood-fill oracle: all open cells form one 4-connected component
    assert flood_components(world.terrain == OPEN) == 1
    assert ring_is_barrier(world)


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_maze_connected_and_narrow(seed):
    world = generate_world("Maze", 110, 90, layout_seed=seed)
    assert open_cells_connected(world)
    interior = world.terrain[RING:-RING, RING:-RING]
    assert (interior == BARRIER).sum() > 100  # real walls, not an open field
    assert ring_is_barrier(world)


def test_world_too_small_rejected():
    with pytest.raises(ValueError, match="too small"):
        generate_world("Open", 11, 90)
    with pytest.raises(ValueError, match="too small"):
        generate_world("Maze", 110, 10)
    with pytest.raises(ValueError):
        generate_world("NoSuchType", 110, 90)


def test_save_load_round_trip():
    for world_type in ("Open", "RoundedBarrier1", "Maze"):
        world = generate_world(world_type, 64, 48, layout_seed=9)
        again = load_world(save_world(world))
        assert np.array_equal(world.terrain, again.terrain)
        assert again.world_type == world_type
        assert (again.width, again.height) == (64, 48)
        assert again.food.sum() == 0  # food never stored in files


def test_load_all_barrier_world():
    text = "12 12 Open\n" + ("#" * 12 + "\n") * 12
    world = load_world(text)
    assert (world.terrain == BARRIER).all()


def test_load_ragged_row_names_line():
    rows = ["#" * 12] * 12
    rows[6] = "#" * 11
    text = "12 12 Open\n" + "\n".join(rows) + "\n"
    with pytest.raises(ValueError, match="line 8"):
        load_world(text)


def test_load_unknown_character_names_line():
    rows = ["#" * 12] * 12
    rows[3] = "#" * 5 + "x" + "#" * 6
    with pytest.raises(ValueError, match="line 5"):
        load_world("12 12 Open\n" + "\n".join(rows) + "\n")


def test_load_boundary_violation_rejected():
    rows = ["#" * 12] * 12
    rows[2] = "#" + "." * 10 + "#"  # open cells inside the 5-deep ring
    with pytest.raises(ValueError, match="boundary ring"):
        load_world("12 12 Open\n" + "\n".join(rows) + "\n")


def test_scatter_zero_open_cells():
    world = load_world("12 12 Open\n" + ("#" * 12 + "\n") * 12)
    scattered = scatter_food(world, np.random.default_rng(0))
    assert remaining_food(scattered) == 0


def test_scatter_deterministic_per_stream(open_world):
    a = scatter_food(open_world, np.random.default_rng(123))
    b = scatter_food(open_world, np.random.default_rng(123))
    assert np.array_equal(a.food, b.food)


def test_scatter_food_count_within_binomial_bounds(open_world):
    # 8000 open cells at p=0.75: binomial mean 6000, the spec's +-4 sigma
    # band is [5700, 6300]
    for seed in range(50):
        scattered = scatter_food(open_world, np.random.default_rng(seed))
        assert 5700 <= remaining_food(scattered) <= 6300
        assert (scattered.food[scattered.terrain == BARRIER] == 0).all()


def test_consume_food_cycle(open_world):
    world = scatter_food(open_world, np.random.default_rng(7))
    pos = tuple(int(v) for v in np.argwhere(world.food == 1)[0][::-1])
    before = remaining_food(world)
    world, collected = consume_food(world, pos)
    assert collected == 1
    assert remaining_food(world) == before - 1
    world, collected = consume_food(world, pos)
    assert collected == 0  # consumed cells stay empty
    world, collected = consume_food(world, (0, 0))
    assert collected == 0  # barrier cells never hold food
    assert remaining_food(world) == before - 1


def test_food_conservation_under_consumption(open_world):
    world = scatter_food(open_world, np.random.default_rng(11))
    rng = np.random.default_rng(12)
    total = remaining_food(world)
    collected_sum = 0
    for _ in range(500):
        x = int(rng.integers(world.width))
        y = int(rng.integers(world.height))
        world, collected = consume_food(world, (x, y))
        collected_sum += collected
    assert remaining_food(world) == total - collected_sum
