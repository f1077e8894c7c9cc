import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from evoforage.hebbnet import (
    ADULT,
    ADULT_SOFT,
    HARD,
    INFANCY,
    SOFT,
    Network,
    Phenotype,
    build_network,
    hebb_delta,
    oja_delta,
)


def empty_phenotype(n=32):
    return Phenotype(n, np.zeros((n, n), dtype=np.uint8), np.zeros((n, n)),
                     np.zeros((n, n), dtype=np.uint8))


def phenotype_with(connections, n=32):
    """connections: list of (post, pre, weight, conn_class)."""
    p = empty_phenotype(n)
    for post, pre, weight, conn_class in connections:
        p.connect[post, pre] = 1
        p.weight[post, pre] = weight
        p.conn_class[post, pre] = conn_class
    return p


def sensor(*on_bits):
    bits = np.zeros(26, dtype=np.uint8)
    for b in on_bits:
        bits[b] = 1
    return bits


def test_minimum_network_size():
    build_network(empty_phenotype(32))
    with pytest.raises(ValueError):
        build_network(empty_phenotype(16))


def test_empty_network_fires_all_zeros_forever():
    net = build_network(empty_phenotype())
    for _ in range(5):
        assert (net.fire(sensor(0, 3, 7)) == 0).all()


def test_hard_weights_preserved_exactly():
    p = phenotype_with([(30, 0, 0.7, HARD), (31, 4, -0.3, HARD), (29, 1, 0.0, SOFT)])
    net = build_network(p)
    dense = net.weight_matrix()
    assert dense[30, 0] == 0.7
    assert dense[31, 4] == -0.3
    assert dense[29, 1] == 0.0  # soft connections start at zero


def test_single_strong_connection_fires_target():
    p = phenotype_with([(31, 0, 1.0, HARD)])
    net = build_network(p, theta=0.5)
    register = net.fire(sensor(0))
    assert register[-1] == 1  # neuron 31 is the last register slot
    assert register[:5].sum() == 0


def test_opposing_inputs_cancel():
    p = phenotype_with([(31, 0, 1.0, HARD), (31, 1, -1.0, HARD)])
    net = build_network(p, theta=0.5)
    assert net.fire(sensor(0, 1))[-1] == 0
    assert net.fire(sensor(0))[-1] == 1


def test_fire_uses_pre_step_state():
    # input 0 -> hidden 27 -> output 31: signal needs two clicks to reach
    # the register under synchronous update
    p = phenotype_with([(27, 0, 1.0, HARD), (31, 27, 1.0, HARD)])
    net = build_network(p)
    assert net.fire(sensor(0))[-1] == 0
    assert net.fire(sensor(0))[-1] == 1


def test_input_slots_clamped_not_driven():
    # a connection into an input slot must not override the sensor clamp
    p = phenotype_with([(0, 1, 1.0, HARD), (31, 0, 1.0, HARD)])
    net = build_network(p)
    net.fire(sensor(1))
    assert net.state[0] == 0  # slot 0 reads the sensor, not its connection
    assert net.fire(sensor(1))[-1] == 0


def test_hebb_delta_values():
    assert hebb_delta(0.2, 1, 1, 0.0035) == pytest.approx(0.0035)
    assert hebb_delta(0.2, 0, 1, 0.0035) == 0
    assert hebb_delta(0.2, 1, 0, 0.0035) == 0


def test_oja_delta_values():
    assert oja_delta(0.0, 1, 1, 0.0035) == pytest.approx(0.0035)
    assert oja_delta(1.0, 1, 1, 0.0035) == 0  # fixed point
    assert oja_delta(0.5, 1, 0, 0.0035) == pytest.approx(-0.00175)


def co_firing_pair():
    """Soft connection input1 -> 31 while a hard connection from input0
    forces neuron 31 to fire every click."""
    return phenotype_with([(31, 0, 1.0, HARD), (31, 1, 0.0, SOFT)])


def test_adult_stage_freezes_soft_weights():
    net = build_network(co_firing_pair(), rule="oja")
    for _ in range(50):
        net.fire(sensor(0, 1))
        net.learn_step(net.last_pre, net.state, ADULT)
    assert net.weight_matrix()[31, 1] == 0.0


def test_hard_weights_never_learn():
    net = build_network(co_firing_pair(), rule="oja")
    for _ in range(100):
        net.fire(sensor(0, 1))
        net.learn_step(net.last_pre, net.state, INFANCY)
    assert net.weight_matrix()[31, 0] == 1.0


def test_adult_soft_learns_in_both_stages():
    p = phenotype_with([(31, 0, 1.0, HARD), (31, 1, 0.0, ADULT_SOFT)])
    net = build_network(p, rule="oja")
    net.fire(sensor(0, 1))
    net.learn_step(net.last_pre, net.state, ADULT)
    assert net.weight_matrix()[31, 1] == pytest.approx(0.0035)


def test_oja_converges_to_closed_form():
    eta = 0.0035
    net = build_network(co_firing_pair(), rule="oja", eta=eta)
    w = 0.0
    for t in range(10000):
        net.fire(sensor(0, 1))
        net.learn_step(net.last_pre, net.state, INFANCY)
        w = w + eta * (1.0 - w)  # independent scalar iterate
    learned = net.weight_matrix()[31, 1]
    assert learned == pytest.approx(w, abs=1e-12)
    assert learned == pytest.approx(1.0 - (1.0 - eta) ** 10000, abs=1e-9)
    assert abs(learned - 1.0) < 1e-3


def test_hebb_monotone_and_clamped():
    net = build_network(co_firing_pair(), rule="hebb", eta=0.1)
    last = 0.0
    for _ in range(30):
        net.fire(sensor(0, 1))
        net.learn_step(net.last_pre, net.state, INFANCY)
        w = net.weight_matrix()[31, 1]
        assert w >= last
        last = w
    assert last == 1.0  # clamp reached and held


def test_fire_pure_given_state_and_weights():
    rng = np.random.default_rng(5)
    p = empty_phenotype(64)
    mask = rng.random((64, 64)) < 0.1
    p.connect[mask] = 1
    p.weight[mask] = rng.uniform(-1, 1, size=int(mask.sum()))
    p.conn_class[mask] = HARD
    a, b = build_network(p), build_network(p)
    bits = (rng.random(26) < 0.5).astype(np.uint8)
    for _ in range(10):
        assert np.array_equal(a.fire(bits), b.fire(bits))
        assert np.array_equal(a.state, b.state)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 26 - 1), st.integers(0, 10 ** 9))
def test_weights_stay_bounded(sensor_bits, seed):
    rng = np.random.default_rng(seed)
    p = empty_phenotype(32)
    mask = rng.random((32, 32)) < 0.2
    p.connect[mask] = 1
    p.weight[mask] = rng.uniform(-1, 1, size=int(mask.sum()))
    p.conn_class[mask] = rng.choice([HARD, SOFT, ADULT_SOFT], size=int(mask.sum()))
    net = build_network(p, rule="hebb", eta=0.5)
    bits = np.array([(sensor_bits >> i) & 1 for i in range(26)], dtype=np.uint8)
    for _ in range(40):
        net.fire(bits)
        net.learn_step(net.last_pre, net.state, INFANCY)
    assert (np.abs(net._weights) <= 1.0).all()
    assert set(np.unique(net.state)) <= {0.0, 1.0}
