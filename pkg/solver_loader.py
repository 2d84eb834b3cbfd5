import logging
import os
import importlib
import inspect
from typing import Any, Dict, Iterator, Optional, Sequence, Type

from solvers.base_solver import BaseSolver

logger = logging.getLogger(__name__)

DEFAULT_SOLVERS_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'solvers')
SOLVER_SUFFIX = '_solver.py'


class SolverLoader:
    """
    Discovers the `*_solver.py` modules under solvers/ and registers one
    instance of every concrete BaseSolver by its ALGORITHM_TAG.

    With `known_tags` the registry is restricted to those algorithms: solvers
    with any other tag are skipped and known tags nobody provides are reported.
    """

    def __init__(self, settings: Dict[str, Any], known_tags: Optional[Sequence[str]] = None):
        self.settings = settings
        self.known_tags = tuple(known_tags) if known_tags is not None else None
        self.solver_registry: Dict[str, BaseSolver] = {}

    def load_solvers(self, solvers_dir: Optional[str] = None) -> Dict[str, BaseSolver]:
        solvers_dir = solvers_dir or DEFAULT_SOLVERS_DIR
        logger.debug(f"Loading solvers from directory: {solvers_dir}")
        if not os.path.isdir(solvers_dir):
            logger.error(f"Solvers directory not found: {solvers_dir}")
            return self.solver_registry

        for module_name in self._solver_modules(solvers_dir):
            try:
                for solver_class in self._solver_classes(module_name):
                    self.register(solver_class)
            except ImportError as e:
                logger.error(f"Failed to import module {module_name}: {e}", exc_info=True)
            except Exception as e:
                logger.error(f"Error processing module {module_name}: {e}", exc_info=True)

        if not self.solver_registry:
            logger.warning("No solvers were loaded successfully!")
        elif self.known_tags is not None:
            missing = [tag for tag in self.known_tags if tag not in self.solver_registry]
            if missing:
                logger.warning(f"No solver provides algorithm(s): {', '.join(missing)}")
        return self.solver_registry

    @staticmethod
    def _solver_modules(solvers_dir: str) -> Iterator[str]:
        for filename in sorted(os.listdir(solvers_dir)):
            if filename.endswith(SOLVER_SUFFIX) and filename != 'base_solver.py':
                yield f"solvers.{filename[:-3]}"

    @staticmethod
    def _solver_classes(module_name: str) -> Iterator[Type[BaseSolver]]:
        module = importlib.import_module(module_name)
        for _, obj in inspect.getmembers(module, inspect.isclass):
            # imported solver classes belong to their own module
            if issubclass(obj, BaseSolver) and not inspect.isabstract(obj) and obj.__module__ == module.__name__:
                yield obj

    def register(self, solver_class: Type[BaseSolver]) -> Optional[BaseSolver]:
        """Instantiates `solver_class` with the shared settings; returns None when it is skipped or fails."""
        tag = solver_class.ALGORITHM_TAG
        if self.known_tags is not None and tag not in self.known_tags:
            logger.warning(f"Skipping solver {solver_class.__name__}: algorithm tag '{tag}' is not one of "
                           f"{', '.join(self.known_tags)}")
            return None
        try:
            solver = solver_class(self.settings)
        except Exception as e:
            logger.error(f"Failed to instantiate solver {solver_class.__name__}: {e}", exc_info=True)
            return None

        if tag in self.solver_registry:
            logger.warning(f"Duplicate algorithm tag '{tag}' found! Solver {solver_class.__name__} will overwrite "
                           f"{self.solver_registry[tag].__class__.__name__}.")
        self.solver_registry[tag] = solver
        logger.debug(f"Loaded solver: '{solver_class.__name__}' with tag: '{tag}'")
        return solver

