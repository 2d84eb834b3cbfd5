import itertools

import numpy as np
import pytest

from errors import TooLargeError
from services.oracle_service import MAX_ORACLE_GENES, brute_force_optimum
from services.problem_service import (
    ProblemInstance,
    ProblemKind,
    random_assignment_instance,
    random_tsp_instance,
    worked_example_instance,
)


def test_worked_example_optimum():
    """The four cities on a line are best visited in order: A B C D with length 3."""
    assert brute_force_optimum(worked_example_instance()) == (3.0, (0, 1, 2, 3))


def test_ties_resolve_to_the_lexicographically_smallest_permutation():
    inst = ProblemInstance(ProblemKind.ASSIGNMENT, np.zeros((3, 3)))
    assert brute_force_optimum(inst) == (0.0, (0, 1, 2))


def test_single_gene_instance():
    assert brute_force_optimum(random_tsp_instance(1, np.random.default_rng(0))) == (0.0, (0,))


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_assignment_optimum_is_a_lower_bound(seed):
    inst = random_assignment_instance(5, np.random.default_rng(seed))
    optimum, perm = brute_force_optimum(inst)
    assert inst.evaluate(perm) == optimum
    assert all(inst.evaluate(p) >= optimum for p in itertools.permutations(range(5)))


def test_too_many_genes_is_rejected():
    with pytest.raises(TooLargeError):
        brute_force_optimum(random_tsp_instance(MAX_ORACLE_GENES + 1, np.random.default_rng(0)))


def test_zero_diagonal_assignment_is_solved_by_the_identity():
    costs = np.ones((5, 5)) - np.eye(5)
    assert brute_force_optimum(ProblemInstance(ProblemKind.ASSIGNMENT, costs)) == (0.0, (0, 1, 2, 3, 4))
