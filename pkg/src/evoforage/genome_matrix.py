"""Direct matrix encoding: one (C, W) gene pair per potential connection.

A genotype is the row-major sequence of n*n pairs over (postsynaptic,
presynaptic).  C is the connection bit.  W comes from [-10..10] plus the
sentinel 100: 0 decodes to a Soft connection, 100 to AdultSoft, anything
else to a Hard connection of weight W/10.  W is carried even where C=0, so
a later connection flip reveals a pre-existing weight.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hebbnet import ADULT_SOFT, HARD, SOFT, Phenotype

W_ADULT = 100
# the 20 legal hard (nonzero) weight values
_NONZERO = np.concatenate([np.arange(-10, 0), np.arange(1, 11)]).astype(np.int16)


@dataclass
class GenotypeParams:
    """Random-generation knobs shared by all encodings."""
    p_conn: float = 0.05   # initial connection probability
    p_hard: float = 0.5    # probability a weight gene is hard
    p_adult: float = 0.1   # probability a non-hard weight gene is adult-soft

    def __post_init__(self):
        for name in ("p_conn", "p_hard", "p_adult"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1]")


@dataclass
class MatrixGenotype:
    n: int
    conn: np.ndarray      # (n*n,) uint8
    weights: np.ndarray   # (n*n,) int16

    def copy(self) -> "MatrixGenotype":
        return MatrixGenotype(self.n, self.conn.copy(), self.weights.copy())


def check_neuron_count(n: int) -> None:
    if n < 32 or (n & (n - 1)) != 0:
        raise ValueError(f"neuron count must be a power of two >= 32, got {n}")


def _legal_weights(w: np.ndarray) -> np.ndarray:
    return ((w >= -10) & (w <= 10)) | (w == W_ADULT)


def random_weight_values(count: int, params: GenotypeParams,
                         rng: np.random.Generator) -> np.ndarray:
    """Sample `count` W genes: hard with p_hard, else adult-soft with p_adult,
    else soft."""
    hard = rng.random(count) < params.p_hard
    adult = rng.random(count) < params.p_adult
    mag = rng.integers(1, 21, size=count)
    nonzero = np.where(mag <= 10, mag - 11, mag - 10).astype(np.int16)
    return np.where(hard, nonzero, np.where(adult, W_ADULT, 0)).astype(np.int16)


def random_matrix_genotype(n: int, params: GenotypeParams,
                           rng: np.random.Generator) -> MatrixGenotype:
    check_neuron_count(n)
    m = n * n
    conn = (rng.random(m) < params.p_conn).astype(np.uint8)
    weights = random_weight_values(m, params, rng)
    return MatrixGenotype(n, conn, weights)


def decode_pairs(n: int, conn: np.ndarray, weights: np.ndarray) -> Phenotype:
    """Shared (C, W) pair decode used by both encodings."""
    if not np.all(_legal_weights(weights)):
        bad = int(np.flatnonzero(~_legal_weights(weights))[0])
        raise ValueError(f"corrupt genotype: illegal W value {int(weights[bad])} at pair {bad}")
    wm = weights.reshape(n, n)
    conn_class = np.where(wm == 0, SOFT,
                          np.where(wm == W_ADULT, ADULT_SOFT, HARD)).astype(np.uint8)
    weight = np.where(conn_class == HARD, wm / 10.0, 0.0)
    return Phenotype(n, conn.reshape(n, n).astype(np.uint8), weight, conn_class)


def decode_matrix(genotype: MatrixGenotype) -> Phenotype:
    if len(genotype.conn) != genotype.n ** 2 or len(genotype.weights) != genotype.n ** 2:
        raise ValueError("corrupt genotype: pair count must be n^2")
    return decode_pairs(genotype.n, genotype.conn, genotype.weights)


def mutate_weight_values(weights: np.ndarray, selected: np.ndarray, p_type: float,
                         rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """W mutation scheme shared with the Lsys weight table.

    Each selected gene either switches category (probability p_type: to one
    of the two other categories, uniformly) or mutates within category
    (hard: resample a different nonzero value; soft/adult-soft: no change,
    their within-category space is empty).  Returns (new weights, mask of
    genes that took the category branch) so callers can couple structural
    changes to the same draw.
    """
    m = len(weights)
    structural = rng.random(m) < p_type
    pick = rng.integers(2, size=m)          # which of the two other categories
    mag = rng.integers(1, 21, size=m)
    nonzero = np.where(mag <= 10, mag - 11, mag - 10).astype(np.int16)
    step = rng.integers(19, size=m)         # within-category hard resample

    out = weights.copy()
    is_hard = (weights != 0) & (weights != W_ADULT)

    switch = selected & structural
    # hard -> soft or adult-soft
    out[switch & is_hard & (pick == 0)] = 0
    out[switch & is_hard & (pick == 1)] = W_ADULT
    # soft -> hard or adult-soft
    soft = weights == 0
    sel = switch & soft
    out[sel & (pick == 0)] = nonzero[sel & (pick == 0)]
    out[sel & (pick == 1)] = W_ADULT
    # adult-soft -> hard or soft
    adult = weights == W_ADULT
    sel = switch & adult
    out[sel & (pick == 0)] = nonzero[sel & (pick == 0)]
    out[sel & (pick == 1)] = 0

    within = selected & ~structural & is_hard
    if np.any(within):
        # index of the current value among the 20 nonzero choices
        cur = np.where(weights < 0, weights + 10, weights + 9)
        new_idx = (cur + 1 + step) % 20
        out[within] = _NONZERO[new_idx[within]]
    return out, switch


def mutate_matrix(genotype: MatrixGenotype, pm: float, p_type: float,
                  rng: np.random.Generator) -> MatrixGenotype:
    """Per-pair mutation with probability pm.  A mutating pair changes its
    structural aspect with probability p_type (the connection bit flips and
    the W gene switches category), otherwise only its value within category.
    """
    m = genotype.n ** 2
    selected = rng.random(m) < pm
    weights, switch = mutate_weight_values(genotype.weights, selected, p_type, rng)
    conn = genotype.conn.copy()
    conn[switch] ^= 1
    return MatrixGenotype(genotype.n, conn, weights)


def crossover_segments(length: int, k_points: int,
                       rng: np.random.Generator) -> np.ndarray:
    """Boolean take-from-parent-b mask from k distinct cuts in [1, length)."""
    if k_points < 1 or k_points > length - 1:
        raise ValueError(f"k_points must be in [1, {length - 1}]")
    cuts = rng.choice(length - 1, size=k_points, replace=False) + 1
    toggles = np.zeros(length, dtype=np.int64)
    toggles[cuts] = 1
    return (np.cumsum(toggles) % 2).astype(bool)


def crossover_matrix(parent_a: MatrixGenotype, parent_b: MatrixGenotype,
                     k_points: int, rng: np.random.Generator) -> MatrixGenotype:
    if parent_a.n != parent_b.n:
        raise ValueError("parents must share the neuron count")
    from_b = crossover_segments(parent_a.n ** 2, k_points, rng)
    conn = np.where(from_b, parent_b.conn, parent_a.conn)
    weights = np.where(from_b, parent_b.weights, parent_a.weights)
    return MatrixGenotype(parent_a.n, conn.astype(np.uint8), weights.astype(np.int16))


def serialize_matrix(genotype: MatrixGenotype) -> str:
    """Text form: header 'MATRIX n', then n rows of n 'C:W' tokens."""
    n = genotype.n
    conn = genotype.conn.reshape(n, n)
    weights = genotype.weights.reshape(n, n)
    lines = [f"MATRIX {n}"]
    for j in range(n):
        lines.append(" ".join(f"{conn[j, k]}:{weights[j, k]}" for k in range(n)))
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> MatrixGenotype:
    lines = text.splitlines()
    if not lines:
        raise ValueError("line 1: empty matrix genotype")
    header = lines[0].split()
    if len(header) != 2 or header[0] != "MATRIX":
        raise ValueError("line 1: header must be 'MATRIX n'")
    try:
        n = int(header[1])
    except ValueError:
        raise ValueError("line 1: neuron count must be an integer") from None
    check_neuron_count(n)
    if len(lines) != n + 1:
        raise ValueError(f"line {len(lines)}: expected {n} rows, found {len(lines) - 1}")

    conn = np.zeros(n * n, dtype=np.uint8)
    weights = np.zeros(n * n, dtype=np.int16)
    for j in range(n):
        line_no = j + 2
        tokens = lines[j + 1].split()
        if len(tokens) != n:
            raise ValueError(f"line {line_no}: expected {n} pairs, found {len(tokens)}")
        for k, token in enumerate(tokens):
            c, _, w = token.partition(":")
            if c not in ("0", "1") or not w:
                raise ValueError(f"line {line_no}, pair {k + 1}: malformed token {token!r}")
            try:
                wv = int(w)
            except ValueError:
                raise ValueError(f"line {line_no}, pair {k + 1}: malformed token {token!r}") from None
            if not (-10 <= wv <= 10 or wv == W_ADULT):
                raise ValueError(f"line {line_no}, pair {k + 1}: illegal W value {wv}")
            conn[j * n + k] = int(c)
            weights[j * n + k] = wv
    return MatrixGenotype(n, conn, weights)
