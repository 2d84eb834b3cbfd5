"""
The four-city open-path walkthrough: seeding from the base row A C D B,
then observing A B C D. Used by the `demo-paper` command and the tests.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Tuple

import numpy as np

from gene_machine import GeneMachine
from models.fitness_list import Chromosome, FitnessList
from routines.seeding import latin_square_chromosomes
from services.problem_service import worked_example_instance

logger = logging.getLogger(__name__)

BucketSignature = Dict[float, FrozenSet[Tuple[int, int]]]

SEED_BASE = (0, 2, 3, 1)  # A C D B
SEED_FITNESS = [5.0, 4.0, 5.0, 4.0]
GROWN_CHROMOSOME = (0, 1, 2, 3)  # A B C D

# (gene, position), 0-based
SEEDED_BUCKETS: BucketSignature = {
    4.0: frozenset({(1, 0), (0, 1), (2, 2), (3, 3), (2, 0), (3, 1), (1, 2), (0, 3)}),
    5.0: frozenset({(0, 0), (2, 1), (3, 2), (1, 3), (3, 0), (1, 1), (0, 2), (2, 3)}),
}
GROWN_BUCKETS: BucketSignature = {
    3.0: frozenset({(2, 2), (0, 0), (1, 1), (3, 3)}),
    4.0: frozenset({(1, 0), (0, 1), (2, 0), (3, 1), (1, 2), (0, 3)}),
    5.0: frozenset({(2, 1), (3, 2), (1, 3), (3, 0), (0, 2), (2, 3)}),
}


def bucket_signature(fitness_list: FitnessList) -> BucketSignature:
    return {
        fitness: frozenset((b.gene, b.position) for b in members)
        for fitness, members in fitness_list.ordered_buckets()
    }


@dataclass
class WorkedExampleResult:
    seed_chromosomes: List[Chromosome]
    seeded_list: FitnessList
    grown_list: FitnessList
    grown_chromosome: Chromosome
    mismatches: List[str] = field(default_factory=list)

    @property
    def matches(self) -> bool:
        return not self.mismatches


def run_worked_example() -> WorkedExampleResult:
    problem = worked_example_instance()
    rng = np.random.default_rng(0)
    seeds = [Chromosome(genes, problem.evaluate(genes))
             for genes in latin_square_chromosomes(problem.n, rng, base=SEED_BASE)]

    machine = GeneMachine(problem.n)
    machine.seed(problem, rng, base=SEED_BASE)
    seeded = machine.snapshot()

    grown_chromosome = Chromosome(GROWN_CHROMOSOME, problem.evaluate(GROWN_CHROMOSOME))
    machine.fitness_list.record_observation(grown_chromosome)

    mismatches = []
    if [c.fitness for c in seeds] != SEED_FITNESS:
        mismatches.append(f"seed fitness {[c.fitness for c in seeds]} != {SEED_FITNESS}")
    if bucket_signature(seeded) != SEEDED_BUCKETS:
        mismatches.append("seeded fitness list differs from the expected two buckets")
    if bucket_signature(machine.fitness_list) != GROWN_BUCKETS:
        mismatches.append("grown fitness list differs from the expected three buckets")
    for mismatch in mismatches:
        logger.error(f"Worked example mismatch: {mismatch}")

    return WorkedExampleResult(
        seed_chromosomes=seeds,
        seeded_list=seeded,
        grown_list=machine.snapshot(),
        grown_chromosome=grown_chromosome,
        mismatches=mismatches,
    )
