from unittest.mock import MagicMock

import numpy as np
import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from errors import InvalidSizeError, InvalidStateError
from gene_machine import GeneMachine
from routines.seeding import latin_square_chromosomes, seed
from services.problem_service import random_tsp_instance, worked_example_instance
from solvers.base_solver import EvaluationTracker
from worked_example import SEED_BASE, SEED_FITNESS, SEEDED_BUCKETS, bucket_signature

A, B, C, D = 0, 1, 2, 3


def test_forced_base_reproduces_worked_example_rows():
    """Base A C D B rotates right into B A C D, D B A C and C D B A."""
    rows = latin_square_chromosomes(4, np.random.default_rng(0), base=SEED_BASE)
    assert rows == [(A, C, D, B), (B, A, C, D), (D, B, A, C), (C, D, B, A)]


def test_single_gene_square():
    assert latin_square_chromosomes(1, np.random.default_rng(0)) == [(0,)]


def test_zero_genes_is_rejected():
    with pytest.raises(InvalidSizeError):
        latin_square_chromosomes(0, np.random.default_rng(0))


@given(st.integers(min_value=1, max_value=12), st.integers(min_value=0, max_value=2**32 - 1))
@settings(max_examples=300)
def test_every_gene_appears_once_per_position(n, rng_seed):
    rows = latin_square_chromosomes(n, np.random.default_rng(rng_seed))
    assert len(rows) == n
    for row in rows:
        assert sorted(row) == list(range(n))
    for position in range(n):
        assert sorted(row[position] for row in rows) == list(range(n))


def test_same_seed_gives_same_square():
    first = latin_square_chromosomes(9, np.random.default_rng(42))
    second = latin_square_chromosomes(9, np.random.default_rng(42))
    assert first == second


def test_seed_worked_example_matches_expected_list():
    """Seed fitnesses are 5, 4, 5, 4 and the list holds the expected two buckets."""
    problem = worked_example_instance()
    machine = seed(GeneMachine(4), problem, np.random.default_rng(0), base=SEED_BASE)
    rows = latin_square_chromosomes(4, np.random.default_rng(0), base=SEED_BASE)
    assert [problem.evaluate(r) for r in rows] == SEED_FITNESS
    assert bucket_signature(machine.fitness_list) == SEEDED_BUCKETS
    assert machine.best.fitness == 4
    assert machine.best.genes == (B, A, C, D)


def test_seed_single_gene_problem():
    problem = random_tsp_instance(1, np.random.default_rng(3))
    machine = seed(GeneMachine(1), problem, np.random.default_rng(0))
    assert len(machine.fitness_list) == 1
    assert machine.best.genes == (0,)
    assert machine.best.fitness == 0


def test_seeding_twice_is_rejected():
    problem = worked_example_instance()
    machine = seed(GeneMachine(4), problem, np.random.default_rng(0))
    with pytest.raises(InvalidStateError):
        seed(machine, problem, np.random.default_rng(1))


@given(st.integers(min_value=1, max_value=12), st.integers(min_value=0, max_value=10_000))
@settings(max_examples=100, deadline=None)
def test_seed_covers_all_blocks_with_n_evaluations(n, rng_seed):
    """Seeding costs exactly n evaluations, fills all n² blocks and keeps the best seed."""
    problem = EvaluationTracker(random_tsp_instance(n, np.random.default_rng(rng_seed)))
    machine = seed(GeneMachine(n), problem, np.random.default_rng(rng_seed))
    assert problem.evaluations == n
    assert machine.evals_used == n
    assert machine.fitness_list.is_seeded
    for gene in range(n):
        for position in range(n):
            machine.fitness_list.bb_fitness(gene, position)
    rows = latin_square_chromosomes(n, np.random.default_rng(rng_seed))
    assert machine.best.fitness == min(problem.problem.evaluate(r) for r in rows)


def test_seed_is_reproducible():
    problem = random_tsp_instance(8, np.random.default_rng(5))
    first = seed(GeneMachine(8), problem, np.random.default_rng(11))
    second = seed(GeneMachine(8), problem, np.random.default_rng(11))
    assert first.fitness_list == second.fitness_list
    assert first.best == second.best


def test_failed_seeding_leaves_the_machine_untouched():
    """An evaluator that fails on the third seed row leaves nothing behind, and seeding can be retried."""
    problem = worked_example_instance()
    flaky = MagicMock(n=4)
    flaky.evaluate.side_effect = [5.0, 4.0, RuntimeError("evaluator crashed")]
    machine = GeneMachine(4)

    with pytest.raises(RuntimeError):
        seed(machine, flaky, np.random.default_rng(0))
    assert len(machine.fitness_list) == 0
    assert machine.evals_used == 0
    assert machine.best is None

    seed(machine, problem, np.random.default_rng(0))
    assert machine.is_seeded
    assert machine.evals_used == 4
