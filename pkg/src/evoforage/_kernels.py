"""Compiled inner loops for network firing, learning, and whole lives.

Networks are stored in CSR form (indptr/cols/weights).  Both the stepwise
API in hebbnet and the monolithic life loop below sum each row's inputs in
ascending CSR order, so the two paths produce bit-identical float64 results.
"""
from __future__ import annotations

import numpy as np
from numba import njit

N_INPUTS = 26
N_OUTPUTS = 6

# death causes, mirrored by animat.DEATH_CAUSES
CAUSE_LIFESPAN = 0
CAUSE_STARVED = 1
CAUSE_EMPTY = 2


@njit(cache=True)
def fire_step(indptr, cols, weights, state, sensor, theta, out):
    """One synchronous step.  Clamps input slots in `state` (the pre-step
    vector) and in `out`; every other neuron thresholds its weighted sum of
    the pre-step state."""
    n = state.shape[0]
    for i in range(N_INPUTS):
        state[i] = sensor[i]
    for j in range(N_INPUTS, n):
        s = 0.0
        for p in range(indptr[j], indptr[j + 1]):
            s += weights[p] * state[cols[p]]
        out[j] = 1.0 if s >= theta else 0.0
    for i in range(N_INPUTS):
        out[i] = sensor[i]


@njit(cache=True)
def learn_span(weights, learn_rows, learn_cols, learn_pos, lo, hi,
               pre, post, eta, use_oja):
    """Apply one Hebb/Oja update to learnable connections [lo, hi).

    Signals are binary, so a connection updates only when its postsynaptic
    neuron fired.  Weights are clamped to [-1, 1]."""
    for q in range(lo, hi):
        j = learn_rows[q]
        if post[j] == 1.0:
            p = learn_pos[q]
            e = pre[learn_cols[q]]
            if use_oja:
                w = weights[p] + eta * (e - weights[p])
            else:
                w = weights[p] + eta * e
            if w > 1.0:
                w = 1.0
            elif w < -1.0:
                w = -1.0
            weights[p] = w


@njit(cache=True)
def run_life(barrier, food, width, height,
             indptr, cols, weights,
             learn_rows, learn_cols, learn_pos, n_soft, n_neurons,
             eta, use_oja, theta,
             x, y, heading,
             life_span, starvation_limit, infancy_span, end_on_empty,
             sense_dx, sense_dy, heading_dx, heading_dy,
             turn_tab, move_tab,
             action_codes, use_network):
    """One full life in a private food grid.  Mutates `food` and `weights`.

    Returns (fitness, clicks_lived, cause).  When `use_network` is false the
    output register is read from `action_codes` instead (random policy)."""
    pre = np.zeros(n_neurons)
    post = np.zeros(n_neurons)
    sensor = np.zeros(N_INPUTS)
    n_learn = learn_pos.shape[0]

    remaining = 0
    for i in range(food.shape[0]):
        remaining += food[i]

    fitness = 0
    clicks = 0
    since_food = 0
    cause = CAUSE_LIFESPAN

    for t in range(life_span):
        for i in range(13):
            cx = x + sense_dx[heading, i]
            cy = y + sense_dy[heading, i]
            if 0 <= cx < width and 0 <= cy < height:
                f = cy * width + cx
                sensor[2 * i] = 1.0 if barrier[f] else 0.0
                sensor[2 * i + 1] = 1.0 if food[f] else 0.0
            else:
                sensor[2 * i] = 1.0
                sensor[2 * i + 1] = 0.0

        if use_network:
            fire_step(indptr, cols, weights, pre, sensor, theta, post)
            code = 0
            for b in range(N_OUTPUTS):
                bit = 1 if post[n_neurons - N_OUTPUTS + b] == 1.0 else 0
                code = (code << 1) | bit
            lo = 0 if t < infancy_span else n_soft
            learn_span(weights, learn_rows, learn_cols, learn_pos, lo, n_learn,
                       pre, post, eta, use_oja)
            tmp = pre
            pre = post
            post = tmp
        else:
            code = action_codes[t]

        turn = turn_tab[code]
        if turn == 1:
            heading = (heading + 3) % 4
        elif turn == 2:
            heading = (heading + 1) % 4

        collected = 0
        move = move_tab[code]
        if move != 0:
            step = 1 if move == 1 else -1
            nx = x + step * heading_dx[heading]
            ny = y + step * heading_dy[heading]
            if 0 <= nx < width and 0 <= ny < height:
                f = ny * width + nx
                if barrier[f] == 0:
                    x = nx
                    y = ny
                    if food[f] == 1:
                        food[f] = 0
                        remaining -= 1
                        fitness += 1
                        collected = 1

        clicks = t + 1
        if collected:
            since_food = 0
        else:
            since_food += 1
        if end_on_empty and remaining == 0:
            cause = CAUSE_EMPTY
            break
        if since_food >= starvation_limit:
            cause = CAUSE_STARVED
            break

    return fitness, clicks, cause
