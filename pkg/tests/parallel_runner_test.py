import itertools

import numpy as np
import pytest

from errors import BudgetTooSmallError, InvalidConfigError
from gene_machine import Budget, new_machine
from parallel_runner import MergeMode, ParallelConfig, machine_rng, run_parallel
from routines.growing import PressureSchedule
from services.problem_service import random_tsp_instance, worked_example_instance
from solvers.base_solver import EvaluationTracker


@pytest.fixture
def problem():
    return random_tsp_instance(8, np.random.default_rng(21))


def test_single_machine_single_cycle_matches_plain_evolve(problem):
    """One machine and one cycle is the sequential machine on the first derived stream."""
    cfg = ParallelConfig(Budget.evaluations(300))
    result = run_parallel(problem, cfg, PressureSchedule(), seed=7)
    plain = new_machine(8).evolve(problem, Budget.evaluations(300), PressureSchedule(), machine_rng(7, 0))

    assert result.best == plain.best
    assert result.machines[0].fitness_list == plain.fitness_list
    assert result.evaluations == 300
    assert result.global_best == result.best


def test_merge_leaves_head_with_elementwise_minimum(problem):
    """After every cycle machine 1 holds the elementwise min of all pre-merge lists."""
    merges = []

    def on_merge(cycle, before, after):
        merges.append((cycle, before, after))

    cfg = ParallelConfig(Budget.evaluations(400), machines=2, cycles=4)
    run_parallel(problem, cfg, PressureSchedule(), seed=3, on_merge=on_merge)

    assert [cycle for cycle, _, _ in merges] == [0, 1, 2, 3]
    for _, before, after in merges:
        assert len(before) == 2
        expected = np.minimum(before[0].table(), before[1].table())
        assert np.array_equal(after.table(), expected)


def test_one_way_merge_leaves_other_machines_alone(problem):
    cfg = ParallelConfig(Budget.evaluations(200), machines=3, cycles=1)
    seen = {}

    def on_merge(cycle, before, after):
        seen['before'] = before

    result = run_parallel(problem, cfg, PressureSchedule(), seed=5, on_merge=on_merge)
    assert result.machines[1].fitness_list == seen['before'][1]
    assert result.machines[2].fitness_list == seen['before'][2]


def test_broadcast_copies_merged_list_to_every_machine(problem):
    cfg = ParallelConfig(Budget.evaluations(300), machines=3, cycles=2, merge_mode=MergeMode.BROADCAST)
    result = run_parallel(problem, cfg, PressureSchedule(), seed=11)
    head = result.machines[0].fitness_list
    assert all(m.fitness_list == head for m in result.machines[1:])


@pytest.mark.parametrize("limit, machines, cycles", [(400, 2, 4), (401, 2, 4), (250, 3, 2), (97, 1, 3)])
def test_evaluations_add_up_to_the_shared_budget(problem, limit, machines, cycles):
    tracker = EvaluationTracker(problem)
    cfg = ParallelConfig(Budget.evaluations(limit), machines=machines, cycles=cycles)
    result = run_parallel(tracker, cfg, PressureSchedule(), seed=1)
    expected = (limit // machines) * machines
    assert result.evaluations == expected
    assert tracker.evaluations == expected
    assert len(result.best_per_cycle) == cycles


def test_best_per_cycle_never_gets_worse(problem):
    cfg = ParallelConfig(Budget.evaluations(600), machines=2, cycles=6)
    result = run_parallel(problem, cfg, PressureSchedule(), seed=9)
    assert result.best_per_cycle == sorted(result.best_per_cycle, reverse=True)
    assert result.global_best.fitness <= result.best.fitness


def test_threads_give_the_same_result_as_sequential(problem):
    cfg = ParallelConfig(Budget.evaluations(400), machines=4, cycles=2)
    sequential = run_parallel(problem, cfg, PressureSchedule(), seed=13)
    threaded = run_parallel(problem, cfg, PressureSchedule(), seed=13, max_workers=4)

    assert sequential.best == threaded.best
    assert sequential.global_best == threaded.global_best
    for a, b in zip(sequential.machines, threaded.machines):
        assert a.fitness_list == b.fitness_list


def test_first_cycle_must_cover_seeding(problem):
    cfg = ParallelConfig(Budget.evaluations(30), machines=2, cycles=2)
    with pytest.raises(BudgetTooSmallError):
        run_parallel(problem, cfg, PressureSchedule(), seed=0)


def test_more_machines_than_evaluations_is_rejected():
    with pytest.raises(BudgetTooSmallError):
        ParallelConfig(Budget.evaluations(2), machines=3).cycle_budgets()


@pytest.mark.parametrize("kwargs", [{"machines": 0}, {"cycles": 0}, {"merge_mode": "sideways"}])
def test_invalid_parallel_config(kwargs):
    with pytest.raises(InvalidConfigError):
        ParallelConfig(Budget.evaluations(100), **kwargs)


def test_machine_streams_are_independent_and_reproducible():
    assert machine_rng(4, 0).random() == machine_rng(4, 0).random()
    assert machine_rng(4, 0).random() != machine_rng(4, 1).random()


def test_two_machines_four_cycles_reach_the_worked_example_optimum():
    """k=2, c=4 with 400 evaluations finds fitness 3 on the four-city line for at least 99 of 100 seeds."""
    problem = worked_example_instance()
    cfg = ParallelConfig(Budget.evaluations(400), machines=2, cycles=4)
    hits = sum(run_parallel(problem, cfg, PressureSchedule(), seed=seed).best.fitness == 3 for seed in range(100))
    assert hits >= 99


def test_sequential_machines_share_the_wall_clock_cycle(problem):
    """A 10 ms cycle read by a clock ticking 2 ms per call gives each of two machines 5 ms: two grow steps apiece."""
    ticks = itertools.count()
    cfg = ParallelConfig(Budget.wall_clock_ms(10), machines=2, cycles=1)
    result = run_parallel(problem, cfg, PressureSchedule(), seed=0, clock=lambda: next(ticks) * 0.002)
    assert [m.evals_used for m in result.machines] == [problem.n + 2, problem.n + 2]
