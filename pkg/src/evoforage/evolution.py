"""Genetic algorithm: rank-elitist reproduction and the generation loop.

Reproduction copies the two fittest genotypes verbatim and once mutated
(children 1-4), then fills the rest by mating the top quarter round-robin
with partners drawn from the top third, mutating every second mating child.
All randomness comes from streams addressed by (run_seed, generation,
member, purpose), so results are bit-identical for any worker count.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import genome_lsys, genome_matrix, rng as rngmod
from .animat import AnimatRng, LifeParams, LifeResult, live
from .config import RunConfig
from .hebbnet import Network, Phenotype
from .world import World, generate_world

ENCODINGS = ("matrix", "lsys", "matrixlsg")

MIN_POPULATION = 8


@dataclass
class GaParams:
    pm: float = 0.01        # per-gene mutation probability
    p_type: float = 0.3     # probability a mutation changes connection type
    k_points: int = 2       # crossover cut count
    p_cross: float = 1.0    # probability a mating performs crossover
    genotype: genome_matrix.GenotypeParams = field(default_factory=genome_matrix.GenotypeParams)
    life: LifeParams = field(default_factory=LifeParams)
    eta: float = 0.0035
    rule: str = "oja"
    theta: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.pm <= 1.0:
            raise ValueError("pm must be in [0, 1]")
        if self.k_points < 1:
            raise ValueError("k_points must be >= 1")


@dataclass
class Population:
    encoding: str
    members: list

    def __post_init__(self):
        if self.encoding not in ENCODINGS:
            raise ValueError(f"unknown encoding {self.encoding!r}")
        if len(self.members) < MIN_POPULATION or len(self.members) % 4:
            raise ValueError("population size must be >= 8 and divisible by 4")
        ns = {m.n for m in self.members}
        if len(ns) != 1:
            raise ValueError("all members must share the neuron count")

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def n(self) -> int:
        return self.members[0].n


@dataclass(frozen=True)
class GenerationStats:
    generation: int
    max_food: int
    mean_food: float
    best_ever: int
    starved: int
    mean_clicks: float


class _Ops:
    """Operator set for one encoding."""

    def __init__(self, decode, mutate, crossover):
        self.decode = decode
        self.mutate = mutate
        self.crossover = crossover
        self.copy = lambda g: g.copy()


_MATRIX_OPS = _Ops(genome_matrix.decode_matrix, genome_matrix.mutate_matrix,
                   genome_matrix.crossover_matrix)
_OPS = {
    "matrix": _MATRIX_OPS,
    "matrixlsg": _MATRIX_OPS,  # Lsys-seeded populations evolve with matrix operators
    "lsys": _Ops(genome_lsys.expand_lsys, genome_lsys.mutate_lsys,
                 genome_lsys.crossover_lsys),
}


def _decode_member(encoding: str, genotype) -> Phenotype:
    return _OPS[encoding].decode(genotype)


def _life_task(args) -> LifeResult:
    encoding, genotype, world, ga, food_seed, spawn_seed = args
    phenotype = _decode_member(encoding, genotype)
    network = Network(phenotype, eta=ga.eta, rule=ga.rule, theta=ga.theta)
    streams = AnimatRng(
        np.random.Generator(np.random.PCG64(food_seed)),
        np.random.Generator(np.random.PCG64(spawn_seed)),
    )
    return live(world, network, ga.life, streams)


_POOLS: dict[int, ProcessPoolExecutor] = {}


def _pool(jobs: int) -> ProcessPoolExecutor:
    if jobs not in _POOLS:
        _POOLS[jobs] = ProcessPoolExecutor(max_workers=jobs)
    return _POOLS[jobs]


def evaluate_lives(population: Population, world_template: World, ga_params: GaParams,
                   run_seed: int, generation: int, jobs: int = 1) -> list[LifeResult]:
    """One life per member, on streams derived from (run_seed, generation,
    member index).  Results are independent of evaluation order."""
    tasks = []
    for i, genotype in enumerate(population.members):
        try:
            _decode_member(population.encoding, genotype)
        except ValueError as exc:
            raise ValueError(f"member {i}: {exc}") from None
        tasks.append((population.encoding, genotype, world_template, ga_params,
                      rngmod.stream_seed(run_seed, generation, i, rngmod.FOOD),
                      rngmod.stream_seed(run_seed, generation, i, rngmod.SPAWN)))
    if jobs <= 1:
        return [_life_task(t) for t in tasks]
    chunk = max(1, len(tasks) // (jobs * 4))
    return list(_pool(jobs).map(_life_task, tasks, chunksize=chunk))


def evaluate_population(population: Population, world_template: World,
                        ga_params: GaParams, run_seed: int, generation: int,
                        jobs: int = 1) -> list[int]:
    """Food counts in member order."""
    results = evaluate_lives(population, world_template, ga_params,
                             run_seed, generation, jobs)
    return [r.fitness for r in results]


def mating_parent_slots(size: int) -> list[int]:
    """Rank slots of the mating parents: the top quarter, round-robin, until
    size - 4 children are produced (so each parent mates at most 4 times)."""
    quarter = size // 4
    return [j % quarter for j in range(size - 4)]


def next_generation(population: Population, fitnesses, ga_params: GaParams,
                    rng: np.random.Generator) -> Population:
    """Build the next population from ranked fitness.

    Children: rank-0 verbatim, rank-0 mutated, rank-1 verbatim, rank-1
    mutated, then mating children (crossover with a partner drawn uniformly
    from the top third; even-offset mating children are mutated)."""
    size = population.size
    if len(fitnesses) != size:
        raise ValueError("fitness vector length must equal population size")
    ops = _OPS[population.encoding]
    order = sorted(range(size), key=lambda i: (-fitnesses[i], i))
    ranked = [population.members[i] for i in order]

    pm, p_type, k = ga_params.pm, ga_params.p_type, ga_params.k_points
    children = [
        ops.copy(ranked[0]),
        ops.mutate(ranked[0], pm, p_type, rng),
        ops.copy(ranked[1]),
        ops.mutate(ranked[1], pm, p_type, rng),
    ]
    third = size // 3
    for offset, slot in enumerate(mating_parent_slots(size)):
        parent = ranked[slot]
        partner = ranked[int(rng.integers(third))]
        if rng.random() < ga_params.p_cross:
            child = ops.crossover(parent, partner, k, rng)
        else:
            child = ops.copy(parent)
        if offset % 2 == 0:
            child = ops.mutate(child, pm, p_type, rng)
        children.append(child)
    return Population(population.encoding, children)


def initial_population(encoding: str, size: int, n: int,
                       params: genome_matrix.GenotypeParams, run_seed: int) -> Population:
    """Seeded random population.  MatrixLSG members are random Lsys genotypes
    expanded and converted to matrix genotypes."""
    members = []
    for i in range(size):
        gen = rngmod.stream(run_seed, 0, i, rngmod.INIT)
        if encoding == "matrix":
            members.append(genome_matrix.random_matrix_genotype(n, params, gen))
        elif encoding == "lsys":
            members.append(genome_lsys.random_lsys_genotype(n, params, gen,
                                                            name=f"member-{i:03d}"))
        elif encoding == "matrixlsg":
            seed_genotype = genome_lsys.random_lsys_genotype(n, params, gen)
            members.append(genome_lsys.to_matrix_genotype(seed_genotype))
        else:
            raise ValueError(f"unknown encoding {encoding!r}")
    return Population(encoding, members)


def _stats_from(generation: int, results: list[LifeResult], best_ever: int) -> GenerationStats:
    fits = [r.fitness for r in results]
    return GenerationStats(
        generation=generation,
        max_food=max(fits),
        mean_food=float(np.mean(fits)),
        best_ever=max(best_ever, max(fits)),
        starved=sum(1 for r in results if r.death_cause == "Starved"),
        mean_clicks=float(np.mean([r.clicks_lived for r in results])),
    )


def _evolve(population: Population, world: World, ga_params: GaParams, run_seed: int,
            generations: int, jobs: int = 1,
            on_generation=None) -> tuple[list[GenerationStats], Population]:
    stats: list[GenerationStats] = []
    best_ever = 0
    for g in range(1, generations + 1):
        results = evaluate_lives(population, world, ga_params, run_seed, g, jobs)
        row = _stats_from(g, results, best_ever)
        best_ever = row.best_ever
        stats.append(row)
        if on_generation is not None:
            on_generation(row)
        fits = [r.fitness for r in results]
        repro = rngmod.stream(run_seed, g, 0, rngmod.REPRO)
        population = next_generation(population, fits, ga_params, repro)
    return stats, population


def ga_params_from_config(cfg: RunConfig) -> GaParams:
    return GaParams(
        pm=cfg.pm, p_type=cfg.p_type, k_points=cfg.k_points, p_cross=cfg.p_cross,
        genotype=genome_matrix.GenotypeParams(cfg.p_conn, cfg.p_hard, cfg.p_adult),
        life=LifeParams(cfg.life_span, cfg.starvation_limit, cfg.infancy_span,
                        cfg.end_on_empty),
        eta=cfg.eta, rule=cfg.rule, theta=cfg.theta)


def run_evolution(cfg: RunConfig, jobs: int = 1,
                  on_generation=None) -> tuple[list[GenerationStats], Population]:
    """Full experiment: seeded initial population, then the generation loop
    in the configured world.  Deterministic per (config, seed)."""
    ga = ga_params_from_config(cfg)
    world = generate_world(cfg.world_type, cfg.width, cfg.height, cfg.layout_seed)
    population = initial_population(cfg.encoding, cfg.population, cfg.neurons,
                                    ga.genotype, cfg.seed)
    return _evolve(population, world, ga, cfg.seed, cfg.generations, jobs, on_generation)


def transfer_run(population: Population, new_world_type: str, generations: int,
                 ga_params: GaParams, run_seed: int, *, width: int = 110,
                 height: int = 90, layout_seed: int | None = None, jobs: int = 1,
                 on_generation=None) -> list[GenerationStats]:
    """Continue evolving an existing population in a new world, with no
    re-initialization; generation 1 shows the transferred population as-is."""
    if layout_seed is None:
        world = generate_world(new_world_type, width, height)
    else:
        world = generate_world(new_world_type, width, height, layout_seed)
    stats, _ = _evolve(population, world, ga_params, run_seed, generations, jobs,
                       on_generation)
    return stats


def save_population(population: Population, generation: int = 0) -> str:
    """Snapshot: header line, then each member's codec text separated by %%."""
    if population.encoding == "lsys":
        serialize = genome_lsys.serialize_lsys
    else:
        serialize = genome_matrix.serialize_matrix
    blocks = [serialize(m) for m in population.members]
    header = (f"POPULATION {population.encoding} {population.size} "
              f"{population.n} {generation}")
    return header + "\n" + "%%\n".join(blocks)


def load_population(text: str) -> tuple[Population, int]:
    lines = text.splitlines()
    if not lines:
        raise ValueError("line 1: empty population snapshot")
    header = lines[0].split()
    if len(header) != 5 or header[0] != "POPULATION":
        raise ValueError("line 1: header must be 'POPULATION encoding size n generation'")
    encoding = header[1]
    if encoding not in ENCODINGS:
        raise ValueError(f"line 1: unknown encoding {encoding!r}")
    try:
        size, n, generation = int(header[2]), int(header[3]), int(header[4])
    except ValueError:
        raise ValueError("line 1: size, n and generation must be integers") from None

    body = "\n".join(lines[1:])
    blocks = [b for b in body.split("%%\n")]
    if len(blocks) != size:
        raise ValueError(f"snapshot holds {len(blocks)} members, header says {size}")
    parse = genome_lsys.parse_lsys if encoding == "lsys" else genome_matrix.parse_matrix
    members = []
    for i, block in enumerate(blocks):
        try:
            member = parse(block)
        except ValueError as exc:
            raise ValueError(f"member {i}: {exc}") from None
        if member.n != n:
            raise ValueError(f"member {i}: neuron count {member.n} != header {n}")
        members.append(member)
    return Population(encoding, members), generation
