"""Hebbian network engine: phenotype blueprint, threshold firing, learning.

Neurons are binary threshold units updated synchronously once per click.
Slots 0..25 are clamped to the sensor; the last 6 slots form the output
register.  Connections are Hard (fixed weight from the genotype), Soft
(start at 0, learn during infancy) or AdultSoft (learn for the whole life).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from ._kernels import fire_step, learn_span

HARD = 0
SOFT = 1
ADULT_SOFT = 2

INFANCY = "infancy"
ADULT = "adult"
STAGES = (INFANCY, ADULT)

RULE_HEBB = "hebb"
RULE_OJA = "oja"
RULES = (RULE_HEBB, RULE_OJA)

N_INPUTS = _kernels.N_INPUTS
N_OUTPUTS = _kernels.N_OUTPUTS
MIN_NEURONS = N_INPUTS + N_OUTPUTS  # 26 input slots + 6 output slots


@dataclass
class Phenotype:
    """Decoded network blueprint.  Row index = postsynaptic neuron."""
    n: int
    connect: np.ndarray     # (n, n) uint8
    weight: np.ndarray      # (n, n) float64, meaningful where connect=1
    conn_class: np.ndarray  # (n, n) uint8 in {HARD, SOFT, ADULT_SOFT}

    def validate(self) -> None:
        shape = (self.n, self.n)
        if self.connect.shape != shape or self.weight.shape != shape or self.conn_class.shape != shape:
            raise ValueError("phenotype matrices must all be n x n")
        on = self.connect == 1
        if np.any(np.abs(self.weight[on]) > 1.0):
            raise ValueError("connection weights must lie in [-1, 1]")


def hebb_delta(w: float, v: float, e: float, eta: float) -> float:
    """Plain Hebb update for one connection: grows when both sides fire."""
    return eta * v * e


def oja_delta(w: float, v: float, e: float, eta: float) -> float:
    """Oja update: Hebb with a decay term that self-limits weight growth."""
    return eta * v * (e - v * w)


class Network:
    """A runnable network built from a phenotype.

    Weights are held in CSR form; hard weights come from the phenotype and
    soft weights start at 0.  State V is a float64 0/1 vector.  fire() and
    learn_step() mutate the network, so build a fresh one per life.
    """

    def __init__(self, phenotype: Phenotype, eta: float = 0.0035,
                 rule: str = RULE_OJA, theta: float = 0.5):
        if phenotype.n < MIN_NEURONS:
            raise ValueError(
                f"network needs at least {MIN_NEURONS} neurons for "
                f"{N_INPUTS} inputs and {N_OUTPUTS} outputs, got {phenotype.n}")
        if rule not in RULES:
            raise ValueError(f"unknown learning rule {rule!r}")
        if eta <= 0:
            raise ValueError("eta must be positive")
        phenotype.validate()

        self.n = phenotype.n
        self.eta = float(eta)
        self.rule = rule
        self.theta = float(theta)

        rows, cols = np.nonzero(phenotype.connect)
        classes = phenotype.conn_class[rows, cols]
        indptr = np.zeros(self.n + 1, dtype=np.int32)
        indptr[1:] = np.cumsum(np.bincount(rows, minlength=self.n))
        self._indptr = indptr
        self._rows = rows.astype(np.int32)
        self._cols = cols.astype(np.int32)
        # hard connections keep their decoded weight, learning ones start at 0
        self._weights = np.where(classes == HARD, phenotype.weight[rows, cols], 0.0)

        soft_pos = np.flatnonzero(classes == SOFT).astype(np.int32)
        adult_pos = np.flatnonzero(classes == ADULT_SOFT).astype(np.int32)
        self._learn_pos = np.concatenate([soft_pos, adult_pos])
        self._learn_rows = self._rows[self._learn_pos]
        self._learn_cols = self._cols[self._learn_pos]
        self._n_soft = len(soft_pos)

        self.state = np.zeros(self.n)

    def fire(self, sensor) -> np.ndarray:
        """One synchronous step; returns a copy of the 6-bit output register."""
        sensor = np.asarray(sensor, dtype=np.float64)
        if sensor.shape != (N_INPUTS,):
            raise ValueError(f"sensor must have length {N_INPUTS}")
        new = np.empty(self.n)
        fire_step(self._indptr, self._cols, self._weights, self.state,
                  sensor, self.theta, new)
        self.last_pre = self.state  # clamped pre-step vector, for learn_step
        self.state = new
        return new[-N_OUTPUTS:].copy()

    def learn_step(self, pre_state, post_state, stage: str) -> None:
        """Update learnable weights from the states around one fire step.

        Soft connections learn only during infancy; AdultSoft always; Hard
        never.  Weights are clamped to [-1, 1]."""
        if stage not in STAGES:
            raise ValueError(f"unknown stage {stage!r}")
        pre = np.asarray(pre_state, dtype=np.float64)
        post = np.asarray(post_state, dtype=np.float64)
        lo = 0 if stage == INFANCY else self._n_soft
        learn_span(self._weights, self._learn_rows, self._learn_cols,
                   self._learn_pos, lo, len(self._learn_pos),
                   pre, post, self.eta, self.rule == RULE_OJA)

    def weight_matrix(self) -> np.ndarray:
        """Dense copy of the current effective weights."""
        dense = np.zeros((self.n, self.n))
        dense[self._rows, self._cols] = self._weights
        return dense


def build_network(phenotype: Phenotype, eta: float = 0.0035,
                  rule: str = RULE_OJA, theta: float = 0.5) -> Network:
    return Network(phenotype, eta=eta, rule=rule, theta=theta)
