import logging

from solver_loader import SolverLoader
from solvers.base_solver import BaseSolver
from solvers.ga_solver import GaSolver
from solvers.gene_machine_solver import GeneMachineSolver
from solvers.random_solver import RandomSolver


def test_load_solvers_registers_every_algorithm_tag():
    """Each *_solver module contributes its own solver, keyed by ALGORITHM_TAG."""
    registry = SolverLoader({}).load_solvers()
    assert set(registry) == {"gene-machine", "ga", "random"}
    assert isinstance(registry["gene-machine"], GeneMachineSolver)
    assert isinstance(registry["ga"], GaSolver)
    assert isinstance(registry["random"], RandomSolver)


def test_loaded_solvers_share_the_settings():
    settings = {'ga': None}
    registry = SolverLoader(settings).load_solvers()
    assert all(solver.settings is settings for solver in registry.values())
    assert all(isinstance(solver, BaseSolver) for solver in registry.values())


def test_missing_directory_gives_an_empty_registry(tmp_path):
    assert SolverLoader({}).load_solvers(str(tmp_path / "nowhere")) == {}


class AnnealingSolver(RandomSolver):
    ALGORITHM_TAG = "annealing"


def test_known_tags_skip_other_algorithms():
    """Restricting the registry drops solvers whose tag is not one of the known algorithms."""
    loader = SolverLoader({}, known_tags=["gene-machine", "ga", "random"])
    assert loader.register(AnnealingSolver) is None
    assert "annealing" not in loader.solver_registry
    assert set(loader.load_solvers()) == {"gene-machine", "ga", "random"}


def test_missing_known_tag_is_reported(caplog):
    with caplog.at_level(logging.WARNING, logger="solver_loader"):
        registry = SolverLoader({}, known_tags=["gene-machine", "ga", "random", "annealing"]).load_solvers()
    assert "annealing" not in registry
    assert "No solver provides algorithm(s): annealing" in caplog.text


def test_register_without_restriction_accepts_any_tag():
    loader = SolverLoader({})
    assert isinstance(loader.register(AnnealingSolver), AnnealingSolver)
    assert loader.solver_registry["annealing"].settings == {}


def test_solver_without_tag_is_not_registered():
    class UntaggedSolver(RandomSolver):
        ALGORITHM_TAG = ""

    loader = SolverLoader({})
    assert loader.register(UntaggedSolver) is None
    assert loader.solver_registry == {}
