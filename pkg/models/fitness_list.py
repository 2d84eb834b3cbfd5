import json
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Sequence, Tuple

import numpy as np

from errors import (
    BuildingBlockNotFoundError,
    GeneMachineError,
    IncompatibleMachinesError,
    InvalidChromosomeError,
    InvalidSizeError,
    InvalidStateError,
)

logger = logging.getLogger(__name__)

Gene = int
Position = int
Permutation = Tuple[int, ...]

_SUBSCRIPTS = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


def validate_permutation(genes: Iterable[int], n: int) -> Permutation:
    """Returns `genes` as a tuple of ints, or raises if it is not a permutation of range(n)."""
    perm = tuple(int(g) for g in genes)
    if len(perm) != n or sorted(perm) != list(range(n)):
        raise InvalidChromosomeError(f"Expected a permutation of {n} genes, got {list(perm)}")
    return perm


def gene_label(gene: Gene, n: int) -> str:
    """Letters A..Z for small instances (A=0), decimal indices otherwise."""
    if n <= 26:
        return chr(ord("A") + gene)
    return str(gene)


def block_label(gene: Gene, position: Position, n: int) -> str:
    """1-based subscript notation: gene A at position 0 renders as A₁."""
    return f"{gene_label(gene, n)}{str(position + 1).translate(_SUBSCRIPTS)}"


def format_fitness(value: float) -> str:
    return str(int(value)) if float(value).is_integer() else repr(float(value))


@dataclass(frozen=True, order=True)
class BuildingBlock:
    """A gene in a given position, carrying the best fitness it has been seen with."""
    gene: Gene
    position: Position
    fitness: float


@dataclass(frozen=True)
class Chromosome:
    """A permutation of the n genes and its evaluated (inverse) fitness."""
    genes: Permutation
    fitness: float

    def __post_init__(self):
        object.__setattr__(self, "genes", validate_permutation(self.genes, len(self.genes)))
        object.__setattr__(self, "fitness", float(self.fitness))

    @property
    def n(self) -> int:
        return len(self.genes)

    def labels(self) -> List[str]:
        return [gene_label(g, self.n) for g in self.genes]


Bucket = Tuple[float, Tuple[BuildingBlock, ...]]


class FitnessList:
    """
    All n² building blocks with their min-updated fitness values.

    Stored as an n x n table indexed [gene, position]; NaN marks a block that
    has not been observed yet (only possible while seeding). Buckets are
    derived on demand, grouping blocks of exactly equal fitness.
    """

    def __init__(self, n: int):
        if n < 1:
            raise InvalidSizeError(f"Gene count must be at least 1, got {n}")
        self.n = n
        self._table = np.full((n, n), np.nan, dtype=float)
        self._size = 0

    @property
    def capacity(self) -> int:
        return self.n * self.n

    def __len__(self) -> int:
        return self._size

    @property
    def is_seeded(self) -> bool:
        return self._size == self.capacity

    def record_observation(self, chrom: Chromosome) -> "FitnessList":
        """
        Min-updates the n blocks of `chrom`. Blocks never seen before are
        inserted with the chromosome's fitness.
        """
        genes = np.asarray(validate_permutation(chrom.genes, self.n))
        if not math.isfinite(chrom.fitness):
            raise InvalidChromosomeError(f"Chromosome fitness must be finite, got {chrom.fitness}")
        positions = np.arange(self.n)
        current = self._table[genes, positions]
        inserted = int(np.count_nonzero(np.isnan(current)))
        # fmin ignores the NaN of unseen blocks
        updated = np.fmin(current, chrom.fitness)
        self._table[genes, positions] = updated
        self._size += inserted
        if logger.isEnabledFor(logging.DEBUG):
            promoted = int(np.count_nonzero(updated < current))
            logger.debug(f"Observed fitness {chrom.fitness}: {inserted} inserted, {promoted} promoted.")
        return self

    def bb_fitness(self, gene: Gene, position: Position) -> float:
        if not (0 <= gene < self.n and 0 <= position < self.n):
            raise BuildingBlockNotFoundError(f"Block (gene={gene}, position={position}) is outside a {self.n}-gene list")
        value = self._table[gene, position]
        if np.isnan(value):
            raise BuildingBlockNotFoundError(f"Block (gene={gene}, position={position}) has not been observed yet")
        return float(value)

    def candidate_fitness(self, genes: Sequence[Gene], position: Position) -> np.ndarray:
        """Stored fitness of each (gene, position) in `genes`, in the same order."""
        values = self._table[np.asarray(genes, dtype=int), position]
        if np.isnan(values).any():
            raise BuildingBlockNotFoundError(f"Some candidate blocks at position {position} have not been observed yet")
        return values

    def ordered_buckets(self) -> List[Bucket]:
        """Ascending-fitness buckets; members iterate in (gene, position) order."""
        buckets: Dict[float, List[BuildingBlock]] = {}
        for gene in range(self.n):
            for position in range(self.n):
                value = self._table[gene, position]
                if np.isnan(value):
                    continue
                buckets.setdefault(float(value), []).append(BuildingBlock(gene, position, float(value)))
        return [(fitness, tuple(buckets[fitness])) for fitness in sorted(buckets)]

    def table(self) -> np.ndarray:
        """Read-only view of the [gene, position] table."""
        view = self._table.view()
        view.flags.writeable = False
        return view

    def copy(self) -> "FitnessList":
        clone = FitnessList(self.n)
        clone._table = self._table.copy()
        clone._size = self._size
        return clone

    def replace_with(self, other: "FitnessList") -> "FitnessList":
        """Overwrites this list with a copy of `other` (broadcast merges)."""
        if other.n != self.n:
            raise IncompatibleMachinesError(f"Cannot copy a {other.n}-gene list into a {self.n}-gene list")
        self._table = other._table.copy()
        self._size = other._size
        return self

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FitnessList):
            return NotImplemented
        return self.n == other.n and np.array_equal(self._table, other._table, equal_nan=True)

    def __repr__(self) -> str:
        return f"FitnessList(n={self.n}, entries={self._size}/{self.capacity})"

    def to_dict(self) -> Dict[str, Any]:
        entries = [
            [gene, position, float(self._table[gene, position])]
            for gene in range(self.n)
            for position in range(self.n)
            if not np.isnan(self._table[gene, position])
        ]
        return {"n": self.n, "entries": entries}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "FitnessList":
        try:
            fitness_list = cls(int(data["n"]))
            for gene, position, fitness in data["entries"]:
                gene, position, fitness = int(gene), int(position), float(fitness)
                if not (0 <= gene < fitness_list.n and 0 <= position < fitness_list.n):
                    raise InvalidSizeError(f"Entry (gene={gene}, position={position}) is out of range")
                if not math.isfinite(fitness):
                    raise InvalidChromosomeError(f"Entry (gene={gene}, position={position}) has non-finite fitness")
                if np.isnan(fitness_list._table[gene, position]):
                    fitness_list._size += 1
                    fitness_list._table[gene, position] = fitness
                else:
                    fitness_list._table[gene, position] = min(fitness_list._table[gene, position], fitness)
        except GeneMachineError:
            raise
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidSizeError(f"Malformed fitness list document: {e}") from e
        return fitness_list

    @classmethod
    def from_json(cls, text: str) -> "FitnessList":
        return cls.from_dict(json.loads(text))


def make_fitness_list(n: int) -> FitnessList:
    return FitnessList(n)


def merge_into(dst: FitnessList, src: FitnessList) -> FitnessList:
    """Elementwise min of two seeded lists, written into `dst`; `src` is untouched."""
    if dst.n != src.n:
        raise IncompatibleMachinesError(f"Cannot merge a {src.n}-gene list into a {dst.n}-gene list")
    if not (dst.is_seeded and src.is_seeded):
        raise InvalidStateError("Both fitness lists must be seeded before merging")
    improved = int(np.count_nonzero(src._table < dst._table))
    np.minimum(dst._table, src._table, out=dst._table)
    logger.debug(f"Merged fitness lists: {improved} blocks improved.")
    return dst


def format_bucket_table(fitness_list: FitnessList) -> str:
    """Renders the buckets as `fitness | A₁, B₂, ...` lines."""
    lines = []
    for fitness, members in fitness_list.ordered_buckets():
        labels = ", ".join(block_label(b.gene, b.position, fitness_list.n) for b in members)
        lines.append(f"{format_fitness(fitness):>8} | {labels}")
    return "\n".join(lines)
