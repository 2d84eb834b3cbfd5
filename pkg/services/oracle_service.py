import itertools
import logging
import math
from typing import Tuple

from errors import TooLargeError
from models.fitness_list import Permutation
from services.problem_service import Evaluator

logger = logging.getLogger(__name__)

MAX_ORACLE_GENES = 10


def brute_force_optimum(inst: Evaluator) -> Tuple[float, Permutation]:
    """
    Enumerates all n! permutations in lexicographic order and keeps the first
    strict improvement, so ties resolve to the lexicographically smallest optimum.
    """
    if inst.n > MAX_ORACLE_GENES:
        raise TooLargeError(f"Brute force is limited to {MAX_ORACLE_GENES} genes, instance has {inst.n}")
    logger.info(f"Enumerating {math.factorial(inst.n)} permutations for the exact optimum (n={inst.n})...")
    best_fitness = math.inf
    best_perm: Permutation = tuple(range(inst.n))
    for perm in itertools.permutations(range(inst.n)):
        fitness = inst.evaluate(perm)
        if fitness < best_fitness:
            best_fitness, best_perm = fitness, perm
    logger.info(f"Exact optimum {best_fitness} at {list(best_perm)}.")
    return best_fitness, best_perm
