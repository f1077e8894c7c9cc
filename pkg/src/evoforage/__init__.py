"""Neuroevolution workbench: Hebbian animats foraging in grid worlds,
evolved under direct-matrix and constrained L-system genetic encodings."""

from .animat import (
    Action,
    AnimatRng,
    LifeParams,
    LifeResult,
    Pose,
    apply_action,
    decode_output,
    live,
    random_policy_life,
    sense,
)
from .config import ConfigError, RunConfig, load_config
from .evolution import (
    GaParams,
    GenerationStats,
    Population,
    evaluate_population,
    initial_population,
    next_generation,
    run_evolution,
    transfer_run,
)
from .genome_lsys import (
    LsysGenotype,
    crossover_lsys,
    expand_lsys,
    genotype_gene_count,
    ls_proof_stats,
    mutate_lsys,
    parse_lsys,
    random_lsys_genotype,
    serialize_lsys,
    to_matrix_genotype,
)
from .genome_matrix import (
    GenotypeParams,
    MatrixGenotype,
    crossover_matrix,
    decode_matrix,
    mutate_matrix,
    parse_matrix,
    random_matrix_genotype,
    serialize_matrix,
)
from .hebbnet import Network, Phenotype, build_network, hebb_delta, oja_delta
from .world import (
    World,
    consume_food,
    generate_world,
    load_world,
    remaining_food,
    save_world,
    scatter_food,
)

__version__ = "0.1.0"
