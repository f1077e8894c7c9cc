"""Constrained L-system encoding with O(log2 n) genes per genotype.

A genotype holds two rulesets, one generating the connection bits and one
the weight stream.  Each ruleset has a 4-symbol axiom of level-1 symbols and
log2(n)-2 production lines of 16 symbols: every symbol expands to exactly
four symbols of the next level, nonterminal levels share the alphabet
{A,B,C,D}, and the last line maps to the 16 terminals {a..p}.  Terminals are
hard-coded: in the connectivity ruleset terminal i expands to its index as
four bits (a=0000 .. p=1111); in the weight ruleset terminal i expands to
four entries of the genotype's 64-value weight table.  The two expanded
streams pair up positionally into the same (C, W) pairs the matrix encoding
uses, so an expansion is also directly convertible to a MatrixGenotype.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .genome_matrix import (
    GenotypeParams,
    MatrixGenotype,
    check_neuron_count,
    decode_pairs,
    crossover_segments,
    mutate_weight_values,
    random_weight_values,
)
from .hebbnet import Phenotype

NONTERMINALS = "ABCD"
TERMINALS = "abcdefghijklmnop"
WEIGHT_TABLE_SIZE = 64

# terminal index -> 4 bits, most significant first
_BIT_TABLE = np.array([[(i >> 3) & 1, (i >> 2) & 1, (i >> 1) & 1, i & 1]
                       for i in range(16)], dtype=np.uint8)


@dataclass
class LsysRuleset:
    axiom: np.ndarray      # (4,) uint8 in 0..3, level-1 symbols
    rules: np.ndarray      # (log2(n)-3, 16) uint8 in 0..3, nonterminal lines
    terminals: np.ndarray  # (16,) uint8 in 0..15, the terminal production line

    def copy(self) -> "LsysRuleset":
        return LsysRuleset(self.axiom.copy(), self.rules.copy(), self.terminals.copy())


@dataclass
class LsysGenotype:
    n: int
    connectivity: LsysRuleset
    weight: LsysRuleset
    weight_table: np.ndarray  # (64,) int16
    name: str = "genotype"

    def copy(self) -> "LsysGenotype":
        return LsysGenotype(self.n, self.connectivity.copy(), self.weight.copy(),
                            self.weight_table.copy(), self.name)


def _levels(n: int) -> int:
    """Nonterminal production line count: log2(n) - 3."""
    return n.bit_length() - 4


def validate_lsys(genotype: LsysGenotype) -> None:
    check_neuron_count(genotype.n)
    levels = _levels(genotype.n)
    for label, ruleset in (("connectivity", genotype.connectivity),
                           ("weight", genotype.weight)):
        if ruleset.axiom.shape != (4,) or np.any(ruleset.axiom > 3):
            raise ValueError(f"{label} axiom must be 4 symbols from {{A,B,C,D}}")
        if ruleset.rules.shape != (levels, 16) or np.any(ruleset.rules > 3):
            raise ValueError(f"{label} ruleset must have {levels} nonterminal "
                             "lines of 16 symbols from {A,B,C,D}")
        if ruleset.terminals.shape != (16,) or np.any(ruleset.terminals > 15):
            raise ValueError(f"{label} terminal line must be 16 symbols from {{a..p}}")
    table = genotype.weight_table
    if table.shape != (WEIGHT_TABLE_SIZE,):
        raise ValueError(f"weight table must hold exactly {WEIGHT_TABLE_SIZE} values")
    if not np.all(((table >= -10) & (table <= 10)) | (table == 100)):
        raise ValueError("weight table values must be in [-10..10] or 100")


def random_lsys_genotype(n: int, params: GenotypeParams, rng: np.random.Generator,
                         name: str = "genotype") -> LsysGenotype:
    """Random genotype.  Nonterminals are uniform; the connectivity terminal
    line is chosen by sampling 4 Bernoulli(p_conn) bits per symbol so the
    expanded connection density tracks p_conn; weight-table entries follow
    the matrix W scheme."""
    check_neuron_count(n)
    levels = _levels(n)

    conn_axiom = rng.integers(4, size=4).astype(np.uint8)
    conn_rules = rng.integers(4, size=(levels, 16)).astype(np.uint8)
    conn_bits = (rng.random((16, 4)) < params.p_conn).astype(np.uint8)
    conn_terminals = (conn_bits @ np.array([8, 4, 2, 1], dtype=np.uint8)).astype(np.uint8)

    wt_axiom = rng.integers(4, size=4).astype(np.uint8)
    wt_rules = rng.integers(4, size=(levels, 16)).astype(np.uint8)
    wt_terminals = rng.integers(16, size=16).astype(np.uint8)

    table = random_weight_values(WEIGHT_TABLE_SIZE, params, rng)
    return LsysGenotype(n,
                        LsysRuleset(conn_axiom, conn_rules, conn_terminals),
                        LsysRuleset(wt_axiom, wt_rules, wt_terminals),
                        table, name)


def _expand_terminal_symbols(ruleset: LsysRuleset) -> np.ndarray:
    """Level-indexed expansion down to the terminal symbol string (n^2/4)."""
    current = ruleset.axiom.astype(np.int64)
    for line in ruleset.rules:
        current = line.reshape(4, 4)[current].reshape(-1).astype(np.int64)
    return ruleset.terminals.reshape(4, 4)[current].reshape(-1)


def expand_streams(genotype: LsysGenotype) -> tuple[np.ndarray, np.ndarray]:
    """The paired (C, W) gene streams of length n^2."""
    conn_terms = _expand_terminal_symbols(genotype.connectivity)
    conn = _BIT_TABLE[conn_terms].reshape(-1)
    weight_terms = _expand_terminal_symbols(genotype.weight)
    weights = genotype.weight_table.reshape(16, 4)[weight_terms].reshape(-1)
    return conn, weights


def expand_lsys(genotype: LsysGenotype) -> Phenotype:
    """Deterministic expansion of both rulesets into a network blueprint."""
    validate_lsys(genotype)
    conn, weights = expand_streams(genotype)
    return decode_pairs(genotype.n, conn, weights)


def to_matrix_genotype(genotype: LsysGenotype) -> MatrixGenotype:
    """Package the expanded pair stream as a directly-encoded genotype."""
    validate_lsys(genotype)
    conn, weights = expand_streams(genotype)
    return MatrixGenotype(genotype.n, conn.astype(np.uint8), weights.astype(np.int16))


def _flip_symbols(values: np.ndarray, alphabet_size: int, pm: float,
                  rng: np.random.Generator) -> np.ndarray:
    """Each symbol mutates with probability pm to a different uniform symbol
    of its positional alphabet."""
    flat = values.reshape(-1)
    selected = rng.random(flat.shape[0]) < pm
    offset = rng.integers(1, alphabet_size, size=flat.shape[0])
    out = flat.copy()
    out[selected] = (flat[selected] + offset[selected]) % alphabet_size
    return out.reshape(values.shape).astype(np.uint8)


def mutate_lsys(genotype: LsysGenotype, pm: float, p_type: float,
                rng: np.random.Generator) -> LsysGenotype:
    """Per-gene mutation: symbols flip within their alphabet, weight-table
    entries follow the matrix W scheme.  Structure never changes."""
    out = genotype.copy()
    for ruleset in (out.connectivity, out.weight):
        ruleset.axiom = _flip_symbols(ruleset.axiom, 4, pm, rng)
        ruleset.rules = _flip_symbols(ruleset.rules, 4, pm, rng)
        ruleset.terminals = _flip_symbols(ruleset.terminals, 16, pm, rng)
    selected = rng.random(WEIGHT_TABLE_SIZE) < pm
    out.weight_table, _ = mutate_weight_values(genotype.weight_table, selected, p_type, rng)
    return out


def _flatten(genotype: LsysGenotype) -> np.ndarray:
    """Canonical gene sequence: connectivity axiom, its production lines,
    weight axiom, its production lines, weight table."""
    parts = []
    for ruleset in (genotype.connectivity, genotype.weight):
        parts += [ruleset.axiom, ruleset.rules.reshape(-1), ruleset.terminals]
    parts.append(genotype.weight_table)
    return np.concatenate([p.astype(np.int16) for p in parts])


def _inflate(n: int, flat: np.ndarray, name: str) -> LsysGenotype:
    levels = _levels(n)
    section = 4 + levels * 16 + 16
    rulesets = []
    pos = 0
    for _ in range(2):
        axiom = flat[pos:pos + 4].astype(np.uint8)
        rules = flat[pos + 4:pos + 4 + levels * 16].astype(np.uint8).reshape(levels, 16)
        terminals = flat[pos + section - 16:pos + section].astype(np.uint8)
        rulesets.append(LsysRuleset(axiom, rules, terminals))
        pos += section
    table = flat[pos:pos + WEIGHT_TABLE_SIZE].astype(np.int16)
    return LsysGenotype(n, rulesets[0], rulesets[1], table, name)


def crossover_lsys(parent_a: LsysGenotype, parent_b: LsysGenotype,
                   k_points: int, rng: np.random.Generator) -> LsysGenotype:
    """k-point recombination over the flattened gene sequence.  Positional
    alphabets align between parents, so the child is always structurally
    valid."""
    if parent_a.n != parent_b.n:
        raise ValueError("parents must share the neuron count")
    flat_a = _flatten(parent_a)
    flat_b = _flatten(parent_b)
    from_b = crossover_segments(len(flat_a), k_points, rng)
    return _inflate(parent_a.n, np.where(from_b, flat_b, flat_a), parent_a.name)


def genotype_gene_count(n: int) -> int:
    """Total genes in an Lsys genotype: grows by 32 per doubling of n."""
    check_neuron_count(n)
    lines = n.bit_length() - 3          # log2(n) - 2 production lines
    return 2 * (4 + 16 * lines) + WEIGHT_TABLE_SIZE


@dataclass(frozen=True)
class ProofSystemStats:
    """Row of the constant-growth L-system family's size table."""
    level: int
    symbols: int      # symbols in the rules
    terminals: int    # size of the terminal expansion
    neurons: int      # neuron count encodable by that expansion


def ls_proof_stats(i: int) -> ProofSystemStats:
    """Size statistics for the i-th member of the proof family: the rule set
    grows by a constant 20 symbols per level while the expansion quadruples.
    """
    if i < 1:
        raise ValueError("level index must be >= 1")
    return ProofSystemStats(i, 5 + (i - 1) * 20, 4 ** i, 2 ** i)


def serialize_lsys(genotype: LsysGenotype) -> str:
    """Genotype listing: [name], connectivity block, blank line, weight block,
    then the 64 weight-table values wrapped 32 per line."""
    validate_lsys(genotype)
    lines = [f"[{genotype.name}]"]
    for ruleset in (genotype.connectivity, genotype.weight):
        lines.append("".join(NONTERMINALS[s] for s in ruleset.axiom))
        for row in ruleset.rules:
            lines.append("".join(NONTERMINALS[s] for s in row))
        lines.append("".join(TERMINALS[s] for s in ruleset.terminals))
        if ruleset is genotype.connectivity:
            lines.append("")
    table = [str(int(v)) for v in genotype.weight_table]
    lines.append(" ".join(table[:32]))
    lines.append(" ".join(table[32:]))
    return "\n".join(lines) + "\n"


def _parse_symbol_line(line: str, line_no: int, alphabet: str, length: int) -> np.ndarray:
    if len(line) != length:
        raise ValueError(f"line {line_no}: expected {length} symbols, found {len(line)}")
    try:
        return np.array([alphabet.index(ch) for ch in line], dtype=np.uint8)
    except ValueError:
        raise ValueError(f"line {line_no}: symbols must come from {alphabet!r}") from None


def parse_lsys(text: str) -> LsysGenotype:
    lines = text.splitlines()
    if not lines or not (lines[0].startswith("[") and lines[0].endswith("]")):
        raise ValueError("line 1: genotype must start with a [name] header")
    name = lines[0][1:-1]

    try:
        blank = lines.index("", 1)
    except ValueError:
        raise ValueError(f"line {len(lines)}: missing blank line between rulesets") from None
    block = lines[1:blank]
    if len(block) < 4:
        raise ValueError(f"line {blank}: connectivity block needs an axiom and "
                         "at least 3 production lines")
    levels = len(block) - 2   # nonterminal production lines
    n = 2 ** (levels + 3)

    def parse_block(block_lines, first_line_no):
        axiom = _parse_symbol_line(block_lines[0], first_line_no, NONTERMINALS, 4)
        rules = np.zeros((levels, 16), dtype=np.uint8)
        for i in range(levels):
            rules[i] = _parse_symbol_line(block_lines[1 + i], first_line_no + 1 + i,
                                          NONTERMINALS, 16)
        terminals = _parse_symbol_line(block_lines[1 + levels], first_line_no + 1 + levels,
                                       TERMINALS, 16)
        return LsysRuleset(axiom, rules, terminals)

    connectivity = parse_block(block, 2)

    weight_start = blank + 1
    weight_block = lines[weight_start:weight_start + levels + 2]
    if len(weight_block) < levels + 2:
        raise ValueError(f"line {len(lines)}: weight ruleset must match the "
                         "connectivity ruleset's line count")
    weight = parse_block(weight_block, weight_start + 1)

    table_lines = lines[weight_start + levels + 2:]
    tokens: list[tuple[int, str]] = []
    for i, line in enumerate(table_lines):
        tokens += [(weight_start + levels + 3 + i, tok) for tok in line.split()]
    if len(tokens) != WEIGHT_TABLE_SIZE:
        raise ValueError(f"line {len(lines)}: weight table must hold exactly "
                         f"{WEIGHT_TABLE_SIZE} values, found {len(tokens)}")
    table = np.zeros(WEIGHT_TABLE_SIZE, dtype=np.int16)
    for i, (line_no, tok) in enumerate(tokens):
        try:
            v = int(tok)
        except ValueError:
            raise ValueError(f"line {line_no}: malformed weight value {tok!r}") from None
        if not (-10 <= v <= 10 or v == 100):
            raise ValueError(f"line {line_no}: illegal weight value {v}")
        table[i] = v

    genotype = LsysGenotype(n, connectivity, weight, table, name)
    validate_lsys(genotype)
    return genotype
