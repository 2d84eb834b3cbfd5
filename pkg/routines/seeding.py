import logging
from typing import TYPE_CHECKING, List, Optional, Sequence

import numpy as np

from errors import InvalidArgumentError, InvalidSizeError, InvalidStateError
from models.fitness_list import Chromosome, FitnessList, Permutation, validate_permutation
from services.problem_service import Evaluator

if TYPE_CHECKING:
    from gene_machine import GeneMachine

logger = logging.getLogger(__name__)


def latin_square_chromosomes(n: int, rng: np.random.Generator,
                             base: Optional[Sequence[int]] = None) -> List[Permutation]:
    """
    n permutations that place every gene in every position exactly once:
    a random base row and its cyclic right-rotations. Passing `base` forces
    the first row (the worked example uses A C D B).
    """
    if n < 1:
        raise InvalidSizeError(f"Gene count must be at least 1, got {n}")
    if base is None:
        row = tuple(int(g) for g in rng.permutation(n))
    else:
        row = validate_permutation(base, n)
    return [row[n - k:] + row[:n - k] for k in range(n)]


def seed(machine: "GeneMachine", problem: Evaluator, rng: np.random.Generator,
         base: Optional[Sequence[int]] = None) -> "GeneMachine":
    """
    Seeding phase: evaluates the n Latin-square chromosomes, feeds every
    building block into the fitness list and keeps only the best chromosome.
    """
    if len(machine.fitness_list) > 0:
        raise InvalidStateError("Machine is already seeded")
    if problem.n != machine.n:
        raise InvalidArgumentError(f"Problem has {problem.n} genes but the machine has {machine.n}")

    # filled locally; the machine only changes once all n evaluations succeeded
    fitness_list = FitnessList(machine.n)
    best: Optional[Chromosome] = None
    for genes in latin_square_chromosomes(machine.n, rng, base=base):
        chrom = Chromosome(genes, problem.evaluate(genes))
        fitness_list.record_observation(chrom)
        logger.debug(f"Seed chromosome {list(genes)} -> {chrom.fitness}")
        if best is None or chrom.fitness < best.fitness:
            best = chrom

    machine.fitness_list = fitness_list
    machine.evals_used += machine.n
    machine.best = best
    logger.info(f"Seeding done: {len(machine.fitness_list)} building blocks, best seed fitness {best.fitness}.")
    return machine
