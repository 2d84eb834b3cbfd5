import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from errors import BudgetTooSmallError, InvalidConfigError
from gene_machine import Budget, BudgetKind, GeneMachine
from models.fitness_list import Chromosome, FitnessList
from routines.growing import PressureSchedule
from services.problem_service import Evaluator

logger = logging.getLogger(__name__)

MergeCallback = Callable[[int, List[FitnessList], FitnessList], None]


class MergeMode(str, Enum):
    ONE_WAY = "one-way"
    BROADCAST = "broadcast"


@dataclass(frozen=True)
class ParallelConfig:
    budget: Budget
    machines: int = 1
    cycles: int = 1
    merge_mode: MergeMode = MergeMode.ONE_WAY

    def __post_init__(self):
        if self.machines < 1:
            raise InvalidConfigError(f"At least one machine is required, got {self.machines}")
        if self.cycles < 1:
            raise InvalidConfigError(f"At least one cycle is required, got {self.cycles}")
        try:
            object.__setattr__(self, "merge_mode", MergeMode(self.merge_mode))
        except ValueError:
            raise InvalidConfigError(f"Unknown merge mode '{self.merge_mode}'") from None

    def cycle_budgets(self) -> List[Budget]:
        """
        Budget of one machine in each cycle. Evaluation budgets are first
        shared between the machines, then split over the cycles. A wall-clock
        limit is split over the cycles; threaded machines each get the full
        cycle, sequential ones share it.
        """
        if self.budget.kind is BudgetKind.EVALUATIONS:
            per_machine = self.budget.limit // self.machines
            if per_machine < 1:
                raise BudgetTooSmallError(f"{self.budget.limit} evaluations cannot feed {self.machines} machines")
            return Budget.evaluations(per_machine).split(self.cycles)
        return self.budget.split(self.cycles)


@dataclass
class ParallelResult:
    best: Chromosome
    global_best: Chromosome
    machines: List[GeneMachine]
    evaluations: int
    best_per_cycle: List[float] = field(default_factory=list)


def machine_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for machine `index`, fixed by the master seed alone."""
    return np.random.default_rng([seed, index])


def _pressure_windows(budgets: Sequence[Budget]) -> List[Tuple[float, float]]:
    total = sum(b.limit for b in budgets)
    windows, consumed = [], 0
    for b in budgets:
        windows.append((consumed / total, (consumed + b.limit) / total))
        consumed += b.limit
    return windows


def _evolve_all(machines: List[GeneMachine], rngs: List[np.random.Generator], problem: Evaluator,
                budget: Budget, sched: PressureSchedule, window: Tuple[float, float],
                max_workers: Optional[int], clock: Callable[[], float]) -> None:
    if max_workers is None or max_workers <= 1 or len(machines) == 1:
        # one after another, the machines share the cycle's wall-clock time
        if budget.kind is BudgetKind.WALL_CLOCK:
            budgets = budget.split(len(machines))
        else:
            budgets = [budget] * len(machines)
        for machine, rng, machine_budget in zip(machines, rngs, budgets):
            machine.evolve(problem, machine_budget, sched, rng, pressure_window=window, clock=clock)
        return
    # machines share nothing; under evaluation budgets this matches the sequential loop
    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        futures = [
            executor.submit(machine.evolve, problem, budget, sched, rng, pressure_window=window, clock=clock)
            for machine, rng in zip(machines, rngs)
        ]
        for future in futures:
            future.result()


def run_parallel(problem: Evaluator, cfg: ParallelConfig, sched: PressureSchedule, seed: int,
                 max_workers: Optional[int] = None, on_merge: Optional[MergeCallback] = None,
                 clock: Callable[[], float] = time.monotonic) -> ParallelResult:
    """
    Runs `cfg.machines` gene machines for `cfg.cycles` cycles. After each
    cycle the lists of machines 2..k are merged into machine 1; in broadcast
    mode machine 1's merged list is then copied back to every machine.
    """
    budgets = cfg.cycle_budgets()
    if budgets[0].kind is BudgetKind.EVALUATIONS and budgets[0].limit < problem.n:
        raise BudgetTooSmallError(f"First cycle gives each machine {budgets[0].limit} evaluations, "
                                  f"seeding needs {problem.n}")

    machines = [GeneMachine(problem.n) for _ in range(cfg.machines)]
    rngs = [machine_rng(seed, index) for index in range(cfg.machines)]
    windows = _pressure_windows(budgets)
    best_per_cycle: List[float] = []

    logger.info(f"Parallel run: {cfg.machines} machines, {cfg.cycles} cycles, "
                f"{cfg.budget.limit} {cfg.budget.kind.value} budget, merge mode {cfg.merge_mode.value}.")
    for cycle, (budget, window) in enumerate(zip(budgets, windows)):
        _evolve_all(machines, rngs, problem, budget, sched, window, max_workers, clock)

        if len(machines) > 1:
            before = [m.snapshot() for m in machines] if on_merge else []
            head = machines[0]
            for other in machines[1:]:
                head.merge_from(other)
            if cfg.merge_mode is MergeMode.BROADCAST:
                for other in machines[1:]:
                    other.fitness_list.replace_with(head.fitness_list)
            if on_merge:
                on_merge(cycle, before, head.snapshot())
            logger.debug(f"Cycle {cycle + 1}/{cfg.cycles}: merged {len(machines) - 1} machines into machine 1.")

        best_per_cycle.append(machines[0].best_chromosome().fitness)

    global_best = min((m.best_chromosome() for m in machines), key=lambda c: c.fitness)
    evaluations = sum(m.evals_used for m in machines)
    logger.info(f"Parallel run finished: machine 1 best {machines[0].best.fitness}, "
                f"global best {global_best.fitness}, {evaluations} evaluations.")
    return ParallelResult(
        best=machines[0].best_chromosome(),
        global_best=global_best,
        machines=machines,
        evaluations=evaluations,
        best_per_cycle=best_per_cycle,
    )
