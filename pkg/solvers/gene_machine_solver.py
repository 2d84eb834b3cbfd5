import logging
from typing import Any, Dict

from gene_machine import Budget
from parallel_runner import MergeMode, ParallelConfig, run_parallel
from routines.growing import PressureSchedule
from services.problem_service import Evaluator
from .base_solver import BaseSolver, EvaluationTracker, SolveResult

logger = logging.getLogger(__name__)


class GeneMachineSolver(BaseSolver):
    """
    Runs the gene machine through the parallel runner; with one machine and
    one cycle (the defaults) that is exactly a single seed-and-grow run.
    """
    ALGORITHM_TAG: str = "gene-machine"

    def solve(self, problem: Evaluator, budget: Budget, seed: int, trace_interval: int = 1) -> SolveResult:
        sched = self.settings.get('schedule') or PressureSchedule()
        parallel: Dict[str, Any] = self.settings.get('parallel') or {}
        cfg = ParallelConfig(
            budget=budget,
            machines=parallel.get('machines', 1),
            cycles=parallel.get('cycles', 1),
            merge_mode=parallel.get('merge_mode', MergeMode.ONE_WAY),
        )
        tracker = EvaluationTracker(problem, trace_interval)
        result = run_parallel(tracker, cfg, sched, seed, max_workers=parallel.get('max_workers'))
        return SolveResult(
            best=result.best,
            evaluations=tracker.evaluations,
            trace=tracker.finish_trace(),
            extra={
                "global_best_fitness": result.global_best.fitness,
                "machines": cfg.machines,
                "cycles": cfg.cycles,
            },
        )
