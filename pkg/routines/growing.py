import logging
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, List, Sequence

import numpy as np

from errors import DomainError, InvalidArgumentError, InvalidConfigError, InvalidStateError
from models.fitness_list import Chromosome, FitnessList, Permutation
from services.problem_service import Evaluator

if TYPE_CHECKING:
    from gene_machine import GeneMachine

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PressureSchedule:
    """Linear ramp of the selection pressure from beta0 (start) to beta1 (end of budget)."""
    beta0: float = 1.0
    beta1: float = 8.0

    def __post_init__(self):
        if not (math.isfinite(self.beta0) and math.isfinite(self.beta1)):
            raise InvalidConfigError(f"Pressure bounds must be finite, got {self.beta0}, {self.beta1}")
        if not 0 <= self.beta0 <= self.beta1:
            raise InvalidConfigError(f"Pressure bounds must satisfy 0 <= beta0 <= beta1, got {self.beta0}, {self.beta1}")


def pressure(elapsed_fraction: float, sched: PressureSchedule) -> float:
    if not 0.0 <= elapsed_fraction <= 1.0:
        raise DomainError(f"Elapsed fraction must be in [0, 1], got {elapsed_fraction}")
    return sched.beta0 + (sched.beta1 - sched.beta0) * elapsed_fraction


def selection_probabilities(fitness: np.ndarray, beta: float) -> np.ndarray:
    """
    exp(-beta * r/R) over dense ranks r (ties share a rank, R is the largest
    rank), normalised to sum to one. All-equal candidates get r/R = 0.
    """
    unique, ranks = np.unique(fitness, return_inverse=True)
    top_rank = len(unique) - 1
    normalized = ranks / top_rank if top_rank > 0 else np.zeros(len(fitness))
    weights = np.exp(-beta * normalized)
    return weights / weights.sum()


def select_gene(fitness_list: FitnessList, position: int, available: Sequence[int],
                beta: float, rng: np.random.Generator) -> int:
    """Draws one gene for `position` from `available`, biased toward smaller block fitness."""
    candidates = sorted(available)
    if not candidates:
        raise InvalidArgumentError(f"No genes available for position {position}")
    if not (math.isfinite(beta) and beta >= 0):
        raise InvalidArgumentError(f"Selection pressure must be finite and non-negative, got {beta}")
    if len(candidates) == 1:
        return candidates[0]
    probs = selection_probabilities(fitness_list.candidate_fitness(candidates, position), beta)
    return candidates[int(rng.choice(len(candidates), p=probs))]


def construct_chromosome(fitness_list: FitnessList, beta: float, rng: np.random.Generator) -> Permutation:
    """Fills positions in a fresh random order, each from the genes not used yet."""
    if not fitness_list.is_seeded:
        raise InvalidStateError("Cannot build chromosomes from an unseeded fitness list")
    n = fitness_list.n
    genes: List[int] = [-1] * n
    available = list(range(n))
    for position in rng.permutation(n):
        gene = select_gene(fitness_list, int(position), available, beta, rng)
        genes[position] = gene
        available.remove(gene)
    return tuple(genes)


def grow_step(machine: "GeneMachine", problem: Evaluator, beta: float,
              rng: np.random.Generator) -> "GeneMachine":
    """One growing iteration: construct, evaluate, promote blocks, keep the best."""
    if not machine.is_seeded:
        raise InvalidStateError("Machine must be seeded before growing")
    genes = construct_chromosome(machine.fitness_list, beta, rng)
    chrom = Chromosome(genes, problem.evaluate(genes))
    machine.evals_used += 1
    machine.fitness_list.record_observation(chrom)
    if chrom.fitness < machine.best.fitness:
        logger.debug(f"New best {chrom.fitness} (was {machine.best.fitness}) after {machine.evals_used} evaluations.")
        machine.best = chrom
    return machine
