import logging
from typing import Optional

import numpy as np

from errors import BudgetTooSmallError
from gene_machine import Budget
from models.fitness_list import Chromosome
from services.problem_service import Evaluator
from .base_solver import BaseSolver, EvaluationTracker, SolveResult

logger = logging.getLogger(__name__)


def random_search_baseline(problem: Evaluator, budget: int, rng: np.random.Generator) -> Chromosome:
    """Samples `budget` uniform permutations and keeps the best (first on ties)."""
    if budget < 1:
        raise BudgetTooSmallError(f"Random search needs a budget of at least 1, got {budget}")
    best: Optional[Chromosome] = None
    for _ in range(budget):
        perm = tuple(int(g) for g in rng.permutation(problem.n))
        fitness = problem.evaluate(perm)
        if best is None or fitness < best.fitness:
            best = Chromosome(perm, fitness)
    logger.info(f"Random search finished: {budget} samples, best fitness {best.fitness}.")
    return best


class RandomSolver(BaseSolver):
    """Uniform random permutations; the control for the comparison."""
    ALGORITHM_TAG: str = "random"

    def solve(self, problem: Evaluator, budget: Budget, seed: int, trace_interval: int = 1) -> SolveResult:
        limit = self._require_evaluation_budget(budget)
        tracker = EvaluationTracker(problem, trace_interval)
        best = random_search_baseline(tracker, limit, np.random.default_rng(seed))
        return SolveResult(best=best, evaluations=tracker.evaluations, trace=tracker.finish_trace())
