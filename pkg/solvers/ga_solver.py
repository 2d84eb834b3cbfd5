import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from errors import BudgetTooSmallError, InvalidArgumentError, InvalidConfigError
from gene_machine import Budget
from models.fitness_list import Chromosome, Permutation, validate_permutation
from services.problem_service import Evaluator
from .base_solver import BaseSolver, EvaluationTracker, SolveResult

logger = logging.getLogger(__name__)

Member = Tuple[Permutation, float]


@dataclass(frozen=True)
class GaParams:
    population_size: int = 50
    tournament_k: int = 3
    crossover_rate: float = 0.9
    mutation_rate: float = 0.2
    elitism: int = 1

    def __post_init__(self):
        if self.population_size < 2:
            raise InvalidConfigError(f"Population size must be at least 2, got {self.population_size}")
        if self.tournament_k < 1:
            raise InvalidConfigError(f"Tournament size must be at least 1, got {self.tournament_k}")
        for name in ("crossover_rate", "mutation_rate"):
            rate = getattr(self, name)
            if not 0.0 <= rate <= 1.0:
                raise InvalidConfigError(f"{name} must be in [0, 1], got {rate}")
        if not 0 <= self.elitism < self.population_size:
            raise InvalidConfigError(f"Elitism must be in [0, population_size), got {self.elitism}")


@dataclass
class GaResult:
    best: Chromosome
    evaluations: int
    generations: int
    block_coverage: List[int] = field(default_factory=list)


def order_crossover(p1: Sequence[int], p2: Sequence[int], cut1: int, cut2: int) -> Permutation:
    """
    OX1: the child keeps p1[cut1:cut2] in place; the other positions are
    filled from cut2 onward (wrapping) with p2's genes in p2 order from cut2,
    skipping genes already copied.
    """
    n = len(p1)
    if len(p2) != n:
        raise InvalidArgumentError(f"Parents differ in length: {n} vs {len(p2)}")
    p1, p2 = validate_permutation(p1, n), validate_permutation(p2, n)
    if not 0 <= cut1 < cut2 <= n:
        raise InvalidArgumentError(f"Cuts must satisfy 0 <= cut1 < cut2 <= {n}, got {cut1}, {cut2}")
    child: List[Optional[int]] = [None] * n
    child[cut1:cut2] = p1[cut1:cut2]
    kept = set(p1[cut1:cut2])
    donors = [p2[(cut2 + i) % n] for i in range(n) if p2[(cut2 + i) % n] not in kept]
    for offset, gene in enumerate(donors):
        child[(cut2 + offset) % n] = gene
    return tuple(child)


def swap_mutation(perm: Sequence[int], i: int, j: int) -> Permutation:
    n = len(perm)
    if not (0 <= i < n and 0 <= j < n):
        raise InvalidArgumentError(f"Swap indices must be in [0, {n}), got {i}, {j}")
    genes = list(perm)
    genes[i], genes[j] = genes[j], genes[i]
    return tuple(genes)


def tournament_select(population: Sequence[Member], k: int, rng: np.random.Generator) -> Member:
    """k uniform draws with replacement; smallest fitness wins, ties go to the earliest draw."""
    if not population:
        raise InvalidArgumentError("Cannot select from an empty population")
    if k < 1:
        raise InvalidArgumentError(f"Tournament size must be at least 1, got {k}")
    draws = rng.integers(0, len(population), size=k)
    winner = int(draws[0])
    for index in draws[1:]:
        if population[index][1] < population[winner][1]:
            winner = int(index)
    return population[winner]


def block_coverage(population: Sequence[Member], n: int) -> int:
    """Distinct (gene, position) pairs present in the population (n² means nothing is lost)."""
    present = np.zeros((n, n), dtype=bool)
    genes = np.array([perm for perm, _ in population], dtype=int).reshape(-1, n)
    present[genes, np.arange(n)] = True
    return int(present.sum())


def run_ga(problem: Evaluator, params: GaParams, budget: int, rng: np.random.Generator,
           on_offspring: Optional[Callable[[Permutation], None]] = None) -> GaResult:
    """
    Generational GA: elitism, tournament parents, OX1 with probability
    crossover_rate (else a copy of the first parent) and a swap of two uniform
    positions with probability mutation_rate. Every evaluation is charged to
    the budget; the last generation may be cut short.
    """
    if budget < params.population_size:
        raise BudgetTooSmallError(f"Budget {budget} is smaller than the population size {params.population_size}")
    n = problem.n
    evaluations = 0

    population: List[Member] = []
    for _ in range(params.population_size):
        perm = tuple(int(g) for g in rng.permutation(n))
        population.append((perm, problem.evaluate(perm)))
        evaluations += 1
    best = Chromosome(*min(population, key=lambda m: m[1]))
    coverage = [block_coverage(population, n)]
    generations = 0

    while evaluations < budget:
        ranked = sorted(population, key=lambda m: m[1])
        offspring: List[Member] = ranked[:params.elitism]
        while len(offspring) < params.population_size and evaluations < budget:
            parent1 = tournament_select(population, params.tournament_k, rng)
            parent2 = tournament_select(population, params.tournament_k, rng)
            if rng.random() < params.crossover_rate:
                cut1, cut2 = sorted(int(c) for c in rng.choice(n + 1, size=2, replace=False))
                child = order_crossover(parent1[0], parent2[0], cut1, cut2)
            else:
                child = parent1[0]
            if rng.random() < params.mutation_rate:
                i, j = rng.integers(0, n, size=2)
                child = swap_mutation(child, int(i), int(j))
            if on_offspring:
                on_offspring(child)
            fitness = problem.evaluate(child)
            evaluations += 1
            offspring.append((child, fitness))
            if fitness < best.fitness:
                best = Chromosome(child, fitness)
        population = offspring
        generations += 1
        coverage.append(block_coverage(population, n))

    logger.info(f"GA finished: {generations} generations, {evaluations} evaluations, best fitness {best.fitness}, "
                f"final block coverage {coverage[-1]}/{n * n}.")
    return GaResult(best=best, evaluations=evaluations, generations=generations, block_coverage=coverage)


class GaSolver(BaseSolver):
    """Conventional permutation GA used as the comparison baseline."""
    ALGORITHM_TAG: str = "ga"

    def solve(self, problem: Evaluator, budget: Budget, seed: int, trace_interval: int = 1) -> SolveResult:
        limit = self._require_evaluation_budget(budget)
        params = self.settings.get('ga') or GaParams()
        tracker = EvaluationTracker(problem, trace_interval)
        result = run_ga(tracker, params, limit, np.random.default_rng(seed))
        return SolveResult(
            best=result.best,
            evaluations=tracker.evaluations,
            trace=tracker.finish_trace(),
            extra={
                "generations": result.generations,
                "final_block_coverage": result.block_coverage[-1],
                "min_block_coverage": min(result.block_coverage),
            },
        )
