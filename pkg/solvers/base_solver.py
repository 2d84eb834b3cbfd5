import logging
import math
import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Tuple

from errors import InvalidConfigError
from gene_machine import Budget, BudgetKind
from models.fitness_list import Chromosome
from services.problem_service import Evaluator

logger = logging.getLogger(__name__)

TracePoint = Tuple[int, float]


class EvaluationTracker:
    """
    Wraps an evaluator, counting calls and keeping the running best.
    A trace point (evaluations, best fitness) is recorded at the first
    evaluation and at every multiple of `trace_interval`.
    """

    def __init__(self, problem: Evaluator, trace_interval: int = 1):
        if trace_interval < 1:
            raise InvalidConfigError(f"Trace interval must be at least 1, got {trace_interval}")
        self.problem = problem
        self.trace_interval = trace_interval
        self.evaluations = 0
        self.best_fitness = math.inf
        self.trace: List[TracePoint] = []
        self._lock = threading.Lock()

    @property
    def n(self) -> int:
        return self.problem.n

    def evaluate(self, perm: Sequence[int]) -> float:
        fitness = self.problem.evaluate(perm)
        with self._lock:
            self.evaluations += 1
            if fitness < self.best_fitness:
                self.best_fitness = fitness
            if self.evaluations == 1 or self.evaluations % self.trace_interval == 0:
                self.trace.append((self.evaluations, self.best_fitness))
        return fitness

    def finish_trace(self) -> List[TracePoint]:
        """Adds the final point if the last evaluation was not already sampled."""
        with self._lock:
            if self.evaluations and (not self.trace or self.trace[-1][0] != self.evaluations):
                self.trace.append((self.evaluations, self.best_fitness))
            return list(self.trace)


def trace_interval_for(budget: Budget, points: int = 200) -> int:
    """Trace sampling period: max(1, budget / points) evaluations."""
    if budget.kind is not BudgetKind.EVALUATIONS:
        return 1
    return max(1, budget.limit // points)


@dataclass
class SolveResult:
    best: Chromosome
    evaluations: int
    trace: List[TracePoint] = field(default_factory=list)
    extra: Dict[str, Any] = field(default_factory=dict)


class BaseSolver(ABC):
    """
    Abstract Base Class for every algorithm the benchmark can run.
    Each solver is selected by its ALGORITHM_TAG (the `--algo` value).
    """
    # Class attribute that MUST be overridden by subclasses
    ALGORITHM_TAG: str = ""

    def __init__(self, settings: Dict[str, Any]):
        """
        Args:
            settings: run parameters shared by all solvers, e.g.
                      {'schedule': PressureSchedule, 'parallel': {...}, 'ga': GaParams}
        """
        if not self.ALGORITHM_TAG:
            raise NotImplementedError(f"Solver subclass {self.__class__.__name__} must define an ALGORITHM_TAG class attribute.")

        if not isinstance(settings, dict):
            raise TypeError("Settings must be provided as a dictionary.")
        self.settings = settings

        logger.debug(f"Solver '{self.__class__.__name__}' initialized for tag '{self.ALGORITHM_TAG}'.")

    @abstractmethod
    def solve(self, problem: Evaluator, budget: Budget, seed: int, trace_interval: int = 1) -> SolveResult:
        """
        Runs the algorithm once.
        Args:
            problem: the instance to minimise.
            budget: evaluation (or, where supported, wall-clock) budget.
            seed: the only source of randomness for this run.
            trace_interval: evaluations between best-fitness trace points.
        Returns:
            The best chromosome, evaluations used and the best-so-far trace.
        """
        pass

    def _get_setting(self, name: str) -> Any:
        value = self.settings.get(name)
        if value is None:
            logger.error(f"Required setting '{name}' not found for solver {self.__class__.__name__}")
            raise InvalidConfigError(f"Missing required setting '{name}' for solver {self.__class__.__name__}")
        return value

    def _require_evaluation_budget(self, budget: Budget) -> int:
        if budget.kind is not BudgetKind.EVALUATIONS:
            raise InvalidConfigError(f"Solver '{self.ALGORITHM_TAG}' only supports evaluation budgets")
        return budget.limit
