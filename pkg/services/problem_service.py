import logging
import math
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Protocol, Sequence, Tuple

import numpy as np

from errors import ParseError, ProblemKindError
from models.fitness_list import validate_permutation

logger = logging.getLogger(__name__)


class ProblemKind(str, Enum):
    OPEN_PATH_TSP = "tsp-open"
    ASSIGNMENT = "assignment"


class Evaluator(Protocol):
    """Anything that maps a gene permutation to an inverse fitness."""
    n: int

    def evaluate(self, perm: Sequence[int]) -> float:
        ...


@dataclass(frozen=True)
class ProblemInstance:
    """
    An n x n non-negative matrix plus the rule that turns it into a fitness.
    Open-path TSP reads it as distances d[i][j]; assignment as costs c[gene][position].
    The matrix is stored read-only, so instances are safe to share between threads.
    """
    kind: ProblemKind
    matrix: np.ndarray = field(repr=False)
    name: str = "instance"

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=float)
        matrix.flags.writeable = False
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "kind", ProblemKind(self.kind))
        _validate_matrix(matrix, self.kind)

    @property
    def n(self) -> int:
        return int(self.matrix.shape[0])

    def evaluate(self, perm: Sequence[int]) -> float:
        if self.kind is ProblemKind.OPEN_PATH_TSP:
            return evaluate_open_path_tsp(self, perm)
        return evaluate_assignment(self, perm)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ProblemInstance):
            return NotImplemented
        return self.kind == other.kind and np.array_equal(self.matrix, other.matrix)

    def __hash__(self) -> int:
        return hash((self.kind, self.matrix.tobytes()))


def _validate_matrix(matrix: np.ndarray, kind: ProblemKind) -> None:
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] < 1:
        raise ParseError(f"Matrix must be square and non-empty, got shape {matrix.shape}")
    if not np.isfinite(matrix).all():
        raise ParseError("Matrix entries must be finite")
    if (matrix < 0).any():
        raise ParseError("Matrix entries must be non-negative")
    if kind is ProblemKind.OPEN_PATH_TSP:
        if np.diag(matrix).any():
            raise ParseError("Distance matrix must have a zero diagonal")
        if not np.array_equal(matrix, matrix.T):
            raise ParseError("Distance matrix must be symmetric")


def evaluate_open_path_tsp(inst: ProblemInstance, perm: Sequence[int]) -> float:
    """Length of the path visiting `perm` in order, without the closing edge."""
    if inst.kind is not ProblemKind.OPEN_PATH_TSP:
        raise ProblemKindError(f"Expected an open-path TSP instance, got '{inst.kind.value}'")
    order = np.asarray(validate_permutation(perm, inst.n))
    # fsum is exactly rounded, so a path and its reversal score identically
    return math.fsum(inst.matrix[order[:-1], order[1:]])


def evaluate_assignment(inst: ProblemInstance, perm: Sequence[int]) -> float:
    """Sum of c[perm[p]][p] over all positions p."""
    if inst.kind is not ProblemKind.ASSIGNMENT:
        raise ProblemKindError(f"Expected an assignment instance, got '{inst.kind.value}'")
    order = np.asarray(validate_permutation(perm, inst.n))
    return math.fsum(inst.matrix[order, np.arange(inst.n)])


# --- Parsers ---

def _parse_grid(text: str) -> Tuple[np.ndarray, List[int]]:
    """Returns the matrix and the source line number of each row."""
    rows: List[List[float]] = []
    row_lines: List[int] = []
    n: Optional[int] = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if n is None:
            if len(tokens) != 1:
                raise ParseError("First line must hold only the matrix size", line=line_no)
            try:
                n = int(tokens[0])
            except ValueError:
                raise ParseError(f"Matrix size '{tokens[0]}' is not an integer", line=line_no, column=1) from None
            if n < 1:
                raise ParseError(f"Matrix size must be at least 1, got {n}", line=line_no, column=1)
            continue
        if len(rows) == n:
            raise ParseError(f"Found more than {n} matrix rows", line=line_no)
        if len(tokens) != n:
            raise ParseError(f"Row has {len(tokens)} entries, expected {n}", line=line_no)
        row = []
        for col_no, token in enumerate(tokens, start=1):
            try:
                value = float(token)
            except ValueError:
                raise ParseError(f"Malformed number '{token}'", line=line_no, column=col_no) from None
            if not math.isfinite(value):
                raise ParseError(f"Entry '{token}' is not finite", line=line_no, column=col_no)
            if value < 0:
                raise ParseError(f"Negative entry {token}", line=line_no, column=col_no)
            row.append(value)
        rows.append(row)
        row_lines.append(line_no)
    if n is None:
        raise ParseError("Empty matrix document")
    if len(rows) != n:
        raise ParseError(f"Expected {n} matrix rows, found {len(rows)}")
    return np.array(rows, dtype=float), row_lines


def parse_distance_matrix(text: str, name: str = "instance") -> ProblemInstance:
    """Parses the `n` + n rows numeric grid into a validated open-path TSP instance."""
    matrix, row_lines = _parse_grid(text)
    n = matrix.shape[0]
    for i in range(n):
        if matrix[i, i] != 0:
            raise ParseError(f"Diagonal entry d[{i}][{i}] = {matrix[i, i]} must be zero",
                             line=row_lines[i], column=i + 1)
        for j in range(i + 1, n):
            if matrix[i, j] != matrix[j, i]:
                raise ParseError(f"Asymmetric distances d[{i}][{j}] = {matrix[i, j]} and d[{j}][{i}] = {matrix[j, i]}",
                                 line=row_lines[j], column=i + 1)
    return ProblemInstance(ProblemKind.OPEN_PATH_TSP, matrix, name=name)


def parse_cost_matrix(text: str, name: str = "instance") -> ProblemInstance:
    """Same grid format as `parse_distance_matrix`, read as assignment costs c[gene][position]."""
    matrix, _ = _parse_grid(text)
    return ProblemInstance(ProblemKind.ASSIGNMENT, matrix, name=name)


_TSPLIB_HEADER = re.compile(r"^\s*([A-Z_]+)\s*:\s*(.*?)\s*$")


def tsplib_round(x: np.ndarray) -> np.ndarray:
    return np.floor(x + 0.5)


def parse_tsplib_euc2d(text: str, name: str = "instance") -> ProblemInstance:
    """
    Minimal TSPLIB reader: DIMENSION, EDGE_WEIGHT_TYPE: EUC_2D and a
    NODE_COORD_SECTION. Nodes are mapped to genes by ascending node index.
    """
    dimension: Optional[int] = None
    weight_type: Optional[str] = None
    coords = {}
    in_section = False
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line == "EOF":
            break
        if in_section:
            tokens = line.split()
            if len(tokens) != 3:
                raise ParseError(f"Node line must be 'index x y', got '{line}'", line=line_no)
            try:
                index = int(tokens[0])
                x, y = float(tokens[1]), float(tokens[2])
            except ValueError:
                raise ParseError(f"Malformed node line '{line}'", line=line_no) from None
            if index in coords:
                raise ParseError(f"Duplicate node index {index}", line=line_no, column=1)
            coords[index] = (x, y)
            continue
        if line.startswith("NODE_COORD_SECTION"):
            in_section = True
            continue
        match = _TSPLIB_HEADER.match(line)
        if not match:
            raise ParseError(f"Unrecognised TSPLIB line '{line}'", line=line_no)
        key, value = match.group(1), match.group(2)
        if key == "DIMENSION":
            try:
                dimension = int(value)
            except ValueError:
                raise ParseError(f"DIMENSION '{value}' is not an integer", line=line_no) from None
            if dimension < 1:
                raise ParseError(f"DIMENSION must be at least 1, got {dimension}", line=line_no)
        elif key == "EDGE_WEIGHT_TYPE":
            weight_type = value
            if weight_type != "EUC_2D":
                raise ParseError(f"Unsupported EDGE_WEIGHT_TYPE '{weight_type}' (only EUC_2D)", line=line_no)
        elif key == "NAME":
            name = value or name
        # COMMENT, TYPE and other headers are informational

    if dimension is None:
        raise ParseError("Missing DIMENSION header")
    if weight_type is None:
        raise ParseError("Missing EDGE_WEIGHT_TYPE header")
    if not in_section:
        raise ParseError("Missing NODE_COORD_SECTION")
    if len(coords) != dimension:
        raise ParseError(f"DIMENSION is {dimension} but {len(coords)} nodes were listed")

    points = np.array([coords[index] for index in sorted(coords)], dtype=float)
    deltas = points[:, None, :] - points[None, :, :]
    matrix = tsplib_round(np.sqrt((deltas ** 2).sum(axis=2)))
    logger.debug(f"Parsed TSPLIB instance '{name}' with {dimension} nodes.")
    return ProblemInstance(ProblemKind.OPEN_PATH_TSP, matrix, name=name)


def format_distance_matrix(inst: ProblemInstance) -> str:
    """Writes any instance back in the numeric grid format."""
    lines = [str(inst.n)]
    for row in inst.matrix:
        lines.append(" ".join(str(int(v)) if float(v).is_integer() else repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


# --- Built-in and generated instances ---

WORKED_EXAMPLE_DISTANCES = [
    [0, 1, 2, 3],
    [1, 0, 1, 2],
    [2, 1, 0, 1],
    [3, 2, 1, 0],
]


def worked_example_instance() -> ProblemInstance:
    """The four-city open-path example: A-B, B-C, C-D are 1 apart, cities on a line."""
    return ProblemInstance(ProblemKind.OPEN_PATH_TSP, WORKED_EXAMPLE_DISTANCES, name="worked-example")


def random_tsp_instance(n: int, rng: np.random.Generator, name: str = "random-tsp") -> ProblemInstance:
    """Integer coordinates in [0, 100)², distances rounded the TSPLIB way."""
    points = rng.integers(0, 100, size=(n, 2)).astype(float)
    deltas = points[:, None, :] - points[None, :, :]
    return ProblemInstance(ProblemKind.OPEN_PATH_TSP, tsplib_round(np.sqrt((deltas ** 2).sum(axis=2))), name=name)


def random_assignment_instance(n: int, rng: np.random.Generator, high: int = 99,
                               name: str = "random-assignment") -> ProblemInstance:
    """Integer costs uniform in [0, high]."""
    return ProblemInstance(ProblemKind.ASSIGNMENT, rng.integers(0, high + 1, size=(n, n)), name=name)
