"""Linear block codes over block-structured ambient spaces."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .linalg import MatrixGF, PrimeField, kernel_basis, orthogonal_complement, row_basis

__all__ = [
    "BlockStructure",
    "LinearCode",
    "dual_code",
    "project",
    "cross_section",
    "ENUMERATION_LIMIT",
]

ENUMERATION_LIMIT = 24


@dataclass(frozen=True)
class BlockStructure:
    """Ordered labelled blocks; a flat vector lists the blocks in declaration order."""

    blocks: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        blocks = tuple((str(label), int(dim)) for label, dim in self.blocks)
        labels = [label for label, _ in blocks]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate block labels in {labels}")
        if any(dim < 0 for _, dim in blocks):
            raise ValueError("block dimensions must be non-negative")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def of(cls, *blocks: tuple[str, int]) -> BlockStructure:
        return cls(tuple(blocks))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.blocks)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(dim for _, dim in self.blocks)

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def dim_of(self, label: str) -> int:
        for lab, dim in self.blocks:
            if lab == label:
                return dim
        raise ValueError(f"unknown block label {label!r}")

    def offset(self, label: str) -> int:
        off = 0
        for lab, dim in self.blocks:
            if lab == label:
                return off
            off += dim
        raise ValueError(f"unknown block label {label!r}")

    def columns(self, labels: Iterable[str]) -> list[int]:
        """Flat column indices of ``labels``, in the order the labels are given."""
        cols: list[int] = []
        for label in labels:
            off = self.offset(label)
            cols.extend(range(off, off + self.dim_of(label)))
        return cols

    def restrict(self, keep: Iterable[str]) -> BlockStructure:
        keep = set(keep)
        unknown = keep - set(self.labels)
        if unknown:
            raise ValueError(f"unknown block labels {sorted(unknown)}")
        return BlockStructure(tuple(b for b in self.blocks if b[0] in keep))

    def split(self, word: Iterable[int]) -> dict[str, tuple[int, ...]]:
        word = [int(x) for x in word]
        out = {}
        off = 0
        for label, dim in self.blocks:
            out[label] = tuple(word[off:off + dim])
            off += dim
        return out


@dataclass(frozen=True, eq=True)
class LinearCode:
    """Subspace of a block-structured space, stored by its RREF generator basis."""

    structure: BlockStructure
    generators: MatrixGF

    def __post_init__(self) -> None:
        if self.generators.cols != self.structure.total_dim:
            raise ValueError(
                f"generators have {self.generators.cols} columns, "
                f"structure needs {self.structure.total_dim}"
            )
        object.__setattr__(self, "generators", row_basis(self.generators))

    @classmethod
    def from_rows(cls, field: PrimeField, structure: BlockStructure, rows) -> LinearCode:
        return cls(structure, MatrixGF(field, rows, cols=structure.total_dim))

    @classmethod
    def zero(cls, field: PrimeField, structure: BlockStructure) -> LinearCode:
        return cls(structure, MatrixGF.zeros(field, 0, structure.total_dim))

    @classmethod
    def full(cls, field: PrimeField, structure: BlockStructure) -> LinearCode:
        return cls(structure, MatrixGF.identity(field, structure.total_dim))

    @property
    def field(self) -> PrimeField:
        return self.generators.field

    @property
    def dim(self) -> int:
        return self.generators.rows

    @property
    def length(self) -> int:
        return self.structure.total_dim

    def dual(self) -> LinearCode:
        return LinearCode(self.structure, orthogonal_complement(self.generators, self.length))

    def parity_checks(self) -> MatrixGF:
        return orthogonal_complement(self.generators, self.length)

    def project(self, keep: Iterable[str]) -> LinearCode:
        sub = self.structure.restrict(keep)
        return LinearCode(sub, self.generators.columns(self.structure.columns(sub.labels)))

    def cross_section(self, keep: Iterable[str]) -> LinearCode:
        sub = self.structure.restrict(keep)
        rest = [lab for lab in self.structure.labels if lab not in set(sub.labels)]
        g_rest = self.generators.columns(self.structure.columns(rest))
        # coefficient vectors that vanish on every other block
        coeffs = kernel_basis(g_rest.T) if self.dim else MatrixGF.zeros(self.field, 0, 0)
        if coeffs.rows == 0:
            return LinearCode.zero(self.field, sub)
        words = coeffs @ self.generators
        return LinearCode(sub, words.columns(self.structure.columns(sub.labels)))

    def contains(self, word) -> bool:
        w = MatrixGF(self.field, [list(word)], cols=self.length)
        return (w @ self.parity_checks().T).is_zero()

    def enumerate(self) -> list[tuple[int, ...]]:
        """All codewords, in lexicographic order of their coefficient vectors."""
        return list(self.iter_codewords())

    def iter_codewords(self) -> Iterator[tuple[int, ...]]:
        if self.dim > ENUMERATION_LIMIT:
            raise ValueError(
                f"refusing to enumerate a code of dimension {self.dim} (limit {ENUMERATION_LIMIT})"
            )
        p = self.field.p
        g = self.generators.array
        if self.dim == 0:
            yield (0,) * self.length
            return
        for coeffs in itertools.product(range(p), repeat=self.dim):
            word = (np.array(coeffs, dtype=np.int64) @ g) % p
            yield tuple(int(x) for x in word)

    def __len__(self) -> int:
        return self.field.p ** self.dim

    def __repr__(self) -> str:
        return f"LinearCode({list(self.structure.blocks)}, {self.generators.tolist()})"


def dual_code(c: LinearCode) -> LinearCode:
    return c.dual()


def project(c: LinearCode, keep: Iterable[str]) -> LinearCode:
    return c.project(keep)


def cross_section(c: LinearCode, keep: Iterable[str]) -> LinearCode:
    return c.cross_section(keep)
