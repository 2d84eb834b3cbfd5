import argparse
import json
import logging
import sys
from typing import List, Optional, Sequence

import numpy as np

from config import ConfigManager
from errors import GeneMachineError, InvalidConfigError
from experiment_runner import ALGORITHMS, ExperimentConfig, run_experiment
from gene_machine import Budget, GeneMachine
from models.fitness_list import (
    FitnessList,
    block_label,
    format_bucket_table,
    format_fitness,
    gene_label,
    merge_into,
)
from parallel_runner import MergeMode
from routines.growing import PressureSchedule
from routines.seeding import latin_square_chromosomes
from services.instance_service import INSTANCE_KINDS, InstanceService
from services.oracle_service import brute_force_optimum
from services.problem_service import ProblemInstance, worked_example_instance
from services.report_service import REPORT_FORMATS, emit_report
from solvers.ga_solver import GaParams
from worked_example import run_worked_example

LOG_FORMAT = '%(asctime)s - %(name)s [%(levelname)s] - %(message)s'

logger = logging.getLogger(__name__)


class UsageError(Exception):
    """Bad flag combinations found after argparse accepted the command line."""


# --- argument types ---

def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"'{text}' is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _seed_list(text: str) -> List[int]:
    try:
        return [int(token) for token in text.split(",") if token.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"'{text}' is not a comma-separated list of integers") from None


def _algorithm_list(text: str) -> List[str]:
    algorithms = [token.strip() for token in text.split(",") if token.strip()]
    unknown = [a for a in algorithms if a not in ALGORITHMS]
    if unknown or not algorithms:
        raise argparse.ArgumentTypeError(f"unknown algorithm(s) {unknown}; choose from {', '.join(ALGORITHMS)}")
    return algorithms


def _parse_genes(text: str, n: int) -> List[int]:
    genes = []
    for token in (t.strip() for t in text.split(",")):
        if token.isdigit():
            genes.append(int(token))
        elif len(token) == 1 and token.isalpha():
            genes.append(ord(token.upper()) - ord("A"))
        else:
            raise UsageError(f"'{token}' is not a gene label")
    if len(genes) != n:
        raise UsageError(f"Expected {n} genes, got {len(genes)}")
    return genes


# --- parser ---

def build_parser(config: ConfigManager) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--log-level", default=config.get_setting("LOG_LEVEL"),
                        help="logging level for stderr output (default: %(default)s)")

    instance = argparse.ArgumentParser(add_help=False)
    instance.add_argument("--instance", help="instance file path or http(s) URL (default: built-in four-city example)")
    instance.add_argument("--kind", choices=INSTANCE_KINDS, default="tsp-open", help="instance format")

    run = argparse.ArgumentParser(add_help=False)
    budget = run.add_mutually_exclusive_group()
    budget.add_argument("--budget-evals", type=_positive_int,
                        default=config.get_int("GENE_MACHINE_BUDGET_EVALS", 10000), help="fitness evaluations")
    budget.add_argument("--time-ms", type=_positive_int, help="wall-clock limit (gene-machine only)")
    run.add_argument("--machines", type=_positive_int, default=config.get_int("GENE_MACHINE_MACHINES", 1))
    run.add_argument("--cycles", type=_positive_int, default=config.get_int("GENE_MACHINE_CYCLES", 1))
    run.add_argument("--merge-mode", choices=[m.value for m in MergeMode],
                     default=config.get_setting("GENE_MACHINE_MERGE_MODE"))
    run.add_argument("--max-workers", type=_positive_int, default=config.get_int("GENE_MACHINE_MAX_WORKERS"),
                     help="threads for the per-cycle machine runs (default: sequential)")
    run.add_argument("--beta0", type=float, default=config.get_float("GENE_MACHINE_BETA0", 1.0))
    run.add_argument("--beta1", type=float, default=config.get_float("GENE_MACHINE_BETA1", 8.0))
    run.add_argument("--ga-pop", type=int, default=config.get_int("GA_POPULATION", 50))
    run.add_argument("--ga-tournament", type=int, default=config.get_int("GA_TOURNAMENT", 3))
    run.add_argument("--ga-cx", type=float, default=config.get_float("GA_CROSSOVER_RATE", 0.9))
    run.add_argument("--ga-mut", type=float, default=config.get_float("GA_MUTATION_RATE", 0.2))
    run.add_argument("--ga-elitism", type=int, default=config.get_int("GA_ELITISM", 1))
    run.add_argument("--trace-points", type=_positive_int, default=config.get_int("GENE_MACHINE_TRACE_POINTS", 200))
    run.add_argument("--out", help="write the report to this path")
    run.add_argument("--format", choices=REPORT_FORMATS, default="json", help="report format")

    parser = argparse.ArgumentParser(prog="gene-machine",
                                     description="Gene-Machine building-block search, baselines and benchmarks.")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")

    solve = subparsers.add_parser("solve", parents=[common, instance, run], help="run one algorithm once")
    solve.add_argument("--algo", choices=ALGORITHMS, default="gene-machine")
    solve.add_argument("--seed", type=int, default=0)
    solve.set_defaults(handler=_cmd_solve)

    compare = subparsers.add_parser("compare", parents=[common, instance, run], help="full experiment matrix")
    compare.add_argument("--algo", type=_algorithm_list, default=list(ALGORITHMS),
                         help="comma-separated algorithms (default: all)")
    seeds = compare.add_mutually_exclusive_group()
    seeds.add_argument("--seed", type=int)
    seeds.add_argument("--seeds", type=_seed_list)
    compare.set_defaults(handler=_cmd_compare)

    oracle = subparsers.add_parser("oracle", parents=[common, instance], help="exact optimum by enumeration (n <= 10)")
    oracle.set_defaults(handler=_cmd_oracle)

    seed_demo = subparsers.add_parser("seed-demo", parents=[common, instance], help="print a seeding walkthrough")
    seed_demo.add_argument("--seed", type=int, default=0)
    seed_demo.add_argument("--base", help="force the first seed row, e.g. A,C,D,B")
    seed_demo.set_defaults(handler=_cmd_seed_demo)

    demo = subparsers.add_parser("demo-paper", parents=[common],
                                 help="reproduce the four-city fitness list walkthrough and check it")
    demo.set_defaults(handler=_cmd_worked_example)

    merge = subparsers.add_parser("merge-demo", parents=[common], help="merge two serialized fitness lists")
    merge.add_argument("lists", nargs=2, metavar="LIST_JSON")
    merge.add_argument("--out", help="write the merged list here instead of stdout")
    merge.set_defaults(handler=_cmd_merge_demo)

    return parser


# --- helpers ---

def _load_problem(args: argparse.Namespace) -> ProblemInstance:
    if not args.instance:
        return worked_example_instance()
    return InstanceService().load_instance(args.instance, args.kind)


def _experiment_config(args: argparse.Namespace, algorithms: List[str], seeds: List[int],
                       with_oracle: bool) -> ExperimentConfig:
    budget = Budget.wall_clock_ms(args.time_ms) if args.time_ms else Budget.evaluations(args.budget_evals)
    return ExperimentConfig(
        algorithms=algorithms,
        seeds=seeds,
        budget=budget,
        instance=args.instance,
        kind=args.kind,
        schedule=PressureSchedule(args.beta0, args.beta1),
        machines=args.machines,
        cycles=args.cycles,
        merge_mode=args.merge_mode,
        max_workers=args.max_workers,
        ga=GaParams(
            population_size=args.ga_pop,
            tournament_k=args.ga_tournament,
            crossover_rate=args.ga_cx,
            mutation_rate=args.ga_mut,
            elitism=args.ga_elitism,
        ),
        trace_points=args.trace_points,
        output_path=args.out,
        output_format=args.format,
        with_oracle=with_oracle,
    )


def _labels(genes: Sequence[int], n: int) -> str:
    return " ".join(gene_label(g, n) for g in genes)


def _block_labels(genes: Sequence[int], n: int) -> str:
    return " ".join(block_label(g, p, n) for p, g in enumerate(genes))


# --- commands ---

def _cmd_solve(args: argparse.Namespace) -> int:
    if args.time_ms and args.algo != "gene-machine":
        raise UsageError(f"--time-ms is only supported by gene-machine, not '{args.algo}'")
    report = run_experiment(_experiment_config(args, [args.algo], [args.seed], with_oracle=False))
    record = report.records[0]
    n = len(record.best_permutation)
    print(f"{format_fitness(record.best_fitness)} {_labels(record.best_permutation, n)}")
    print(f"evaluations {record.evaluations}")
    return 0


def _cmd_compare(args: argparse.Namespace) -> int:
    if args.time_ms:
        raise UsageError("compare only accepts evaluation budgets (--budget-evals)")
    seeds = args.seeds or ([args.seed] if args.seed is not None else [0])
    report = run_experiment(_experiment_config(args, args.algo, seeds, with_oracle=True))
    if not args.out:
        print(emit_report(report, args.format), end="")
        return 0
    for summary in report.summaries:
        rate = "n/a" if summary.success_rate is None else f"{summary.success_rate:.2f}"
        print(f"{summary.algorithm:>14}  mean {summary.mean:.4f}  std {summary.std:.4f}  "
              f"min {format_fitness(summary.min)}  max {format_fitness(summary.max)}  success {rate}")
    return 0


def _cmd_oracle(args: argparse.Namespace) -> int:
    problem = _load_problem(args)
    fitness, perm = brute_force_optimum(problem)
    print(f"{format_fitness(fitness)} {_labels(perm, problem.n)}")
    return 0


def _cmd_seed_demo(args: argparse.Namespace) -> int:
    problem = _load_problem(args)
    base = _parse_genes(args.base, problem.n) if args.base else None
    rows = latin_square_chromosomes(problem.n, np.random.default_rng(args.seed), base=base)
    machine = GeneMachine(problem.n)
    machine.seed(problem, np.random.default_rng(args.seed), base=rows[0])
    print("Seed chromosomes:")
    for index, genes in enumerate(rows, start=1):
        print(f"  Chromosome {index} = {_block_labels(genes, problem.n)}  fitness value = "
              f"{format_fitness(problem.evaluate(genes))}")
    print("Fitness-List:")
    print(format_bucket_table(machine.fitness_list))
    best = machine.best_chromosome()
    print(f"Best seed: {format_fitness(best.fitness)} {_labels(best.genes, problem.n)}")
    return 0


def _cmd_worked_example(args: argparse.Namespace) -> int:
    result = run_worked_example()
    n = result.seeded_list.n
    print("Seed chromosomes:")
    for index, chrom in enumerate(result.seed_chromosomes, start=1):
        print(f"  Chromosome {index} = {_block_labels(chrom.genes, n)}  fitness value = {format_fitness(chrom.fitness)}")
    print("Fitness-List after seeding:")
    print(format_bucket_table(result.seeded_list))
    print(f"Observed {_labels(result.grown_chromosome.genes, n)} with fitness "
          f"{format_fitness(result.grown_chromosome.fitness)}")
    print("Fitness-List after growing:")
    print(format_bucket_table(result.grown_list))
    if not result.matches:
        for mismatch in result.mismatches:
            print(f"MISMATCH: {mismatch}")
        return 1
    print("OK: both fitness lists match the expected buckets.")
    return 0


def _cmd_merge_demo(args: argparse.Namespace) -> int:
    lists: List[FitnessList] = []
    for path in args.lists:
        with open(path, encoding="utf-8") as handle:
            try:
                lists.append(FitnessList.from_json(handle.read()))
            except json.JSONDecodeError as e:
                raise InvalidConfigError(f"{path} is not valid JSON: {e}") from e
            except UnicodeDecodeError as e:
                raise InvalidConfigError(f"{path} is not UTF-8 text: {e}") from e
    merged = merge_into(lists[0], lists[1])
    text = merged.to_json() + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
        logger.info(f"Merged list written to {args.out}")
    else:
        print(text, end="")
    return 0


def _configure_logging(level: str) -> None:
    logging.basicConfig(format=LOG_FORMAT, stream=sys.stderr)
    try:
        logging.getLogger().setLevel(level.upper())
    except ValueError:
        logging.getLogger().setLevel(logging.INFO)
        logger.warning(f"Unknown log level '{level}', using INFO.")


def cli_main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point; returns 0 on success, 2 on usage errors and 1 on runtime errors."""
    argv = list(sys.argv[1:] if argv is None else argv)
    config = ConfigManager()
    parser = build_parser(config)
    if not argv:
        parser.print_usage(sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    if not getattr(args, "handler", None):
        parser.print_usage(sys.stderr)
        return 2

    _configure_logging(args.log_level)
    try:
        return args.handler(args)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {e}", file=sys.stderr)
        return 2
    except (GeneMachineError, OSError) as e:
        logger.error(f"{args.command} failed: {e}", exc_info=logger.isEnabledFor(logging.DEBUG))
        return 1


def main():
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
