import logging
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from errors import ExperimentCellError, GeneMachineError, InvalidConfigError
from gene_machine import Budget
from parallel_runner import MergeMode
from routines.growing import PressureSchedule
from services.instance_service import InstanceService
from services.oracle_service import MAX_ORACLE_GENES, brute_force_optimum
from services.problem_service import ProblemInstance, worked_example_instance
from services.report_service import (
    ARTIFACT_VERSION,
    REPORT_FORMATS,
    RunRecord,
    RunReport,
    summarize,
    write_report,
)
from solver_loader import SolverLoader
from solvers.base_solver import BaseSolver, trace_interval_for
from solvers.ga_solver import GaParams

logger = logging.getLogger(__name__)

ALGORITHMS = ("gene-machine", "ga", "random")


@dataclass
class ExperimentConfig:
    """
    One benchmark matrix: every algorithm runs once per seed on the same
    instance with the same budget. `instance=None` means the built-in
    four-city example; `problem` overrides loading altogether.
    """
    algorithms: List[str]
    seeds: List[int]
    budget: Budget
    instance: Optional[str] = None
    kind: str = "tsp-open"
    problem: Optional[ProblemInstance] = None
    schedule: PressureSchedule = field(default_factory=PressureSchedule)
    machines: int = 1
    cycles: int = 1
    merge_mode: MergeMode = MergeMode.ONE_WAY
    max_workers: Optional[int] = None
    ga: GaParams = field(default_factory=GaParams)
    trace_points: int = 200
    output_path: Optional[str] = None
    output_format: str = "json"
    with_oracle: bool = True

    def __post_init__(self):
        if not self.algorithms:
            raise InvalidConfigError("At least one algorithm is required")
        if not self.seeds:
            raise InvalidConfigError("At least one seed is required")
        if self.output_format not in REPORT_FORMATS:
            raise InvalidConfigError(f"Unsupported output format '{self.output_format}'")
        if self.trace_points < 1:
            raise InvalidConfigError(f"trace_points must be at least 1, got {self.trace_points}")
        try:
            self.merge_mode = MergeMode(self.merge_mode)
        except ValueError:
            raise InvalidConfigError(f"Unknown merge mode '{self.merge_mode}'") from None

    def solver_settings(self) -> Dict[str, Any]:
        return {
            'schedule': self.schedule,
            'parallel': {
                'machines': self.machines,
                'cycles': self.cycles,
                'merge_mode': self.merge_mode,
                'max_workers': self.max_workers,
            },
            'ga': self.ga,
        }

    def echo(self) -> Dict[str, Any]:
        """JSON-friendly copy of the settings that shape the results."""
        return {
            "instance": self.instance if self.problem is None else self.problem.name,
            "kind": self.kind,
            "algorithms": list(self.algorithms),
            "seeds": sorted(self.seeds),
            "budget": {"kind": self.budget.kind.value, "limit": self.budget.limit},
            "schedule": {"beta0": self.schedule.beta0, "beta1": self.schedule.beta1},
            "machines": self.machines,
            "cycles": self.cycles,
            "merge_mode": self.merge_mode.value,
            "ga": {
                "population_size": self.ga.population_size,
                "tournament_k": self.ga.tournament_k,
                "crossover_rate": self.ga.crossover_rate,
                "mutation_rate": self.ga.mutation_rate,
                "elitism": self.ga.elitism,
            },
            "trace_points": self.trace_points,
        }


class ExperimentRunner:
    """
    Runs every (algorithm, seed) cell of an experiment and assembles the report.
    Output order is the configured algorithm order, seeds ascending.
    """

    def __init__(self, solver_registry: Dict[str, BaseSolver], instance_service: Optional[InstanceService] = None):
        self.solver_registry = solver_registry
        self.instance_service = instance_service or InstanceService()

    def load_problem(self, cfg: ExperimentConfig) -> ProblemInstance:
        if cfg.problem is not None:
            return cfg.problem
        if cfg.instance is None:
            return worked_example_instance()
        return self.instance_service.load_instance(cfg.instance, cfg.kind)

    def run(self, cfg: ExperimentConfig) -> RunReport:
        missing = [a for a in cfg.algorithms if a not in self.solver_registry]
        if missing:
            raise InvalidConfigError(f"Unknown algorithm(s): {', '.join(missing)}. "
                                     f"Available: {', '.join(sorted(self.solver_registry))}")

        problem = self.load_problem(cfg)
        optimum, optimum_permutation = None, None
        if cfg.with_oracle and problem.n <= MAX_ORACLE_GENES:
            optimum, optimum_permutation = brute_force_optimum(problem)

        trace_interval = trace_interval_for(cfg.budget, cfg.trace_points)
        seeds = sorted(cfg.seeds)
        logger.info(f"Running experiment on '{problem.name}' (n={problem.n}): "
                    f"{len(cfg.algorithms)} algorithms x {len(seeds)} seeds.")

        records = []
        for algorithm in cfg.algorithms:
            solver = self.solver_registry[algorithm]
            for seed in seeds:
                records.append(self._run_cell(solver, algorithm, problem, cfg.budget, seed, trace_interval, optimum))

        report = RunReport(
            version=ARTIFACT_VERSION,
            config=cfg.echo(),
            optimum=optimum,
            optimum_permutation=optimum_permutation,
            records=records,
            summaries=summarize(records, cfg.algorithms),
        )
        for summary in report.summaries:
            logger.info(f"{summary.algorithm}: mean {summary.mean:.4g}, std {summary.std:.4g}, "
                        f"min {summary.min:.4g}, max {summary.max:.4g}, success rate {summary.success_rate}")
        return report

    def _run_cell(self, solver: BaseSolver, algorithm: str, problem: ProblemInstance, budget: Budget,
                  seed: int, trace_interval: int, optimum: Optional[float]) -> RunRecord:
        logger.debug(f"Cell algorithm='{algorithm}' seed={seed} starting...")
        started = time.perf_counter()
        try:
            result = solver.solve(problem, budget, seed, trace_interval)
        except GeneMachineError as e:
            logger.error(f"Cell algorithm='{algorithm}' seed={seed} failed: {e}", exc_info=True)
            raise ExperimentCellError(algorithm, seed, e) from e
        wall_time = time.perf_counter() - started
        return RunRecord(
            algorithm=algorithm,
            seed=seed,
            best_fitness=result.best.fitness,
            best_permutation=result.best.genes,
            evaluations=result.evaluations,
            wall_time_s=wall_time,
            trace=result.trace,
            success=None if optimum is None else result.best.fitness == optimum,
            extra=result.extra,
        )


def run_experiment(cfg: ExperimentConfig, instance_service: Optional[InstanceService] = None) -> RunReport:
    """Loads the solvers with the experiment's settings, runs all cells and writes the report if asked."""
    registry = SolverLoader(cfg.solver_settings(), known_tags=ALGORITHMS).load_solvers()
    report = ExperimentRunner(registry, instance_service).run(cfg)
    if cfg.output_path:
        write_report(report, cfg.output_format, cfg.output_path)
    return report
