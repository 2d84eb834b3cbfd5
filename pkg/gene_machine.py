import logging
import time
from dataclasses import dataclass
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from errors import BudgetTooSmallError, DomainError, InvalidArgumentError, InvalidConfigError, InvalidStateError
from models.fitness_list import Chromosome, FitnessList, merge_into
from routines import growing, seeding
from routines.growing import PressureSchedule, pressure
from services.problem_service import Evaluator

logger = logging.getLogger(__name__)


class BudgetKind(str, Enum):
    EVALUATIONS = "evaluations"
    WALL_CLOCK = "wall-clock"


@dataclass(frozen=True)
class Budget:
    """Either a number of fitness evaluations or a duration in milliseconds."""
    kind: BudgetKind
    limit: int

    def __post_init__(self):
        object.__setattr__(self, "kind", BudgetKind(self.kind))
        if int(self.limit) != self.limit or self.limit <= 0:
            raise InvalidConfigError(f"Budget limit must be a positive integer, got {self.limit}")

    @classmethod
    def evaluations(cls, limit: int) -> "Budget":
        return cls(BudgetKind.EVALUATIONS, limit)

    @classmethod
    def wall_clock_ms(cls, limit: int) -> "Budget":
        return cls(BudgetKind.WALL_CLOCK, limit)

    def split(self, parts: int) -> List["Budget"]:
        """Floor-divides the limit into `parts` budgets; the last one takes the remainder."""
        share, remainder = divmod(self.limit, parts)
        if share < 1:
            raise BudgetTooSmallError(f"A {self.kind.value} budget of {self.limit} cannot be split into {parts} parts")
        return [Budget(self.kind, share + (remainder if i == parts - 1 else 0)) for i in range(parts)]


class GeneMachine:
    """
    A single Gene-Machine: the fitness list of all n² building blocks and the
    one best chromosome seen so far. No population is kept.
    """

    def __init__(self, n: int):
        self.n = n
        self.fitness_list = FitnessList(n)
        self.best: Optional[Chromosome] = None
        self.evals_used = 0

    @property
    def is_seeded(self) -> bool:
        return self.fitness_list.is_seeded

    def seed(self, problem: Evaluator, rng: np.random.Generator,
             base: Optional[Sequence[int]] = None) -> "GeneMachine":
        return seeding.seed(self, problem, rng, base=base)

    def grow_step(self, problem: Evaluator, beta: float, rng: np.random.Generator) -> "GeneMachine":
        return growing.grow_step(self, problem, beta, rng)

    def evolve(self, problem: Evaluator, budget: Budget, sched: PressureSchedule, rng: np.random.Generator,
               pressure_window: Tuple[float, float] = (0.0, 1.0),
               clock: Callable[[], float] = time.monotonic) -> "GeneMachine":
        """
        Seeds if needed, then grows until `budget` is used up. The fraction of
        this call's budget consumed is mapped into `pressure_window` to pick
        the pressure, so consecutive calls can share one ramp.
        """
        if problem.n != self.n:
            raise InvalidArgumentError(f"Problem has {problem.n} genes but the machine has {self.n}")
        low, high = pressure_window
        if not 0.0 <= low <= high <= 1.0:
            raise DomainError(f"Pressure window must satisfy 0 <= low <= high <= 1, got {pressure_window}")

        def beta_at(fraction: float) -> float:
            return pressure(min(high, low + (high - low) * fraction), sched)

        start_evals = self.evals_used
        grow_steps = 0
        if budget.kind is BudgetKind.EVALUATIONS:
            if not self.is_seeded and budget.limit < self.n:
                raise BudgetTooSmallError(f"Seeding needs {self.n} evaluations, budget is {budget.limit}")
            if not self.is_seeded:
                self.seed(problem, rng)
            while (spent := self.evals_used - start_evals) < budget.limit:
                self.grow_step(problem, beta_at(spent / budget.limit), rng)
                grow_steps += 1
        else:
            limit_s = budget.limit / 1000.0
            started = clock()
            if not self.is_seeded:
                self.seed(problem, rng)
            # the clock is only read between steps
            while (elapsed := clock() - started) < limit_s:
                self.grow_step(problem, beta_at(elapsed / limit_s), rng)
                grow_steps += 1

        logger.info(f"Evolve finished: {grow_steps} grow steps, {self.evals_used - start_evals} evaluations, "
                    f"best fitness {self.best.fitness}.")
        return self

    def best_chromosome(self) -> Chromosome:
        if self.best is None:
            raise InvalidStateError("Machine has not been seeded, no best chromosome yet")
        return self.best

    def snapshot(self) -> FitnessList:
        return self.fitness_list.copy()

    def merge_from(self, other: "GeneMachine") -> "GeneMachine":
        merge_into(self.fitness_list, other.fitness_list)
        return self

    def __repr__(self) -> str:
        best = self.best.fitness if self.best else None
        return f"GeneMachine(n={self.n}, evals_used={self.evals_used}, best={best})"


def new_machine(n: int) -> GeneMachine:
    return GeneMachine(n)


def best(machine: GeneMachine) -> Chromosome:
    return machine.best_chromosome()
