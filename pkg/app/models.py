from typing import Literal, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app import settings
from app.combinatorics import is_prime


class IntMatrix(BaseModel):
    """Dense square matrix of exact integers, stored row-major.

    Indices are 0-based: the 1-based entry (i, j), 1 <= i, j <= n, is ``at(i - 1, j - 1)``.
    """

    model_config = ConfigDict(frozen=True, strict=True)

    n: int = Field(ge=1)
    entries: tuple[int, ...]

    @model_validator(mode="after")
    def _check_shape(self) -> "IntMatrix":
        if len(self.entries) != self.n * self.n:
            raise ValueError(f"expected {self.n * self.n} entries for n={self.n}, got {len(self.entries)}")
        return self

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        n = len(rows)
        if any(len(row) != n for row in rows):
            raise ValueError("rows do not form a square matrix")
        return cls(n=n, entries=tuple(int(e) for row in rows for e in row))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n=n, entries=tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zero(cls, n: int) -> "IntMatrix":
        return cls(n=n, entries=(0,) * (n * n))

    def at(self, i: int, j: int) -> int:
        return self.entries[i * self.n + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.n : (i + 1) * self.n]

    def column(self, j: int) -> tuple[int, ...]:
        return self.entries[j :: self.n]

    def rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.n)]

    def diagonal(self) -> tuple[int, ...]:
        return self.entries[:: self.n + 1]

    def is_zero(self) -> bool:
        return not any(self.entries)


class ModMatrix(BaseModel):
    """Square matrix over the field with p elements; entries are residues in [0, p)."""

    model_config = ConfigDict(frozen=True, strict=True)

    n: int = Field(ge=1)
    p: int
    entries: tuple[int, ...]

    @model_validator(mode="after")
    def _check_residues(self) -> "ModMatrix":
        if not is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")
        if len(self.entries) != self.n * self.n:
            raise ValueError(f"expected {self.n * self.n} entries for n={self.n}, got {len(self.entries)}")
        if any(e < 0 or e >= self.p for e in self.entries):
            raise ValueError(f"entries must be residues in [0, {self.p})")
        return self

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], p: int) -> "ModMatrix":
        return cls(n=len(rows), p=p, entries=tuple(int(e) % p for row in rows for e in row))

    @classmethod
    def identity(cls, n: int, p: int) -> "ModMatrix":
        return cls(n=n, p=p, entries=tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    def at(self, i: int, j: int) -> int:
        return self.entries[i * self.n + j]

    def rows(self) -> list[list[int]]:
        return [list(self.entries[i * self.n : (i + 1) * self.n]) for i in range(self.n)]

    def is_zero(self) -> bool:
        return not any(self.entries)


class Seq(BaseModel):
    """Finite prefix (c_0, ..., c_{L-1}) of an integer sequence."""

    model_config = ConfigDict(frozen=True, strict=True)

    terms: tuple[int, ...]
    label: str = "literal"

    @property
    def length(self) -> int:
        return len(self.terms)

    def term(self, i: int) -> int:
        return self.terms[i]


def smith_chain_violation(diagonal: Sequence[int]) -> Optional[str]:
    """Why ``diagonal`` is not a Smith diagonal, or None when it is one."""
    if any(e < 0 for e in diagonal):
        return "Smith diagonal entries must be nonnegative"
    nonzero = [e for e in diagonal if e != 0]
    if list(diagonal[: len(nonzero)]) != nonzero:
        return "zeros must trail the Smith diagonal"
    for a, b in zip(nonzero, nonzero[1:]):
        if b % a != 0:
            return f"divisibility chain broken: {a} does not divide {b}"
    return None


class SmithTransforms(BaseModel):
    """Unimodular certificates with u * A * v == diag(diagonal)."""

    model_config = ConfigDict(frozen=True)

    u: IntMatrix
    v: IntMatrix


class SmithForm(BaseModel):
    model_config = ConfigDict(frozen=True)

    diagonal: tuple[int, ...]
    transforms: Optional[SmithTransforms] = None

    @model_validator(mode="after")
    def _check_chain(self) -> "SmithForm":
        problem = smith_chain_violation(self.diagonal)
        if problem is not None:
            raise ValueError(problem)
        return self

    @property
    def rank(self) -> int:
        return sum(1 for e in self.diagonal if e != 0)


class JordanSpec(BaseModel):
    """Eigenvalue residue plus the multiset of its Jordan block sizes (stored descending)."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    eigenvalue: int
    block_sizes: tuple[int, ...]

    @field_validator("block_sizes")
    @classmethod
    def _sort_sizes(cls, sizes: tuple[int, ...]) -> tuple[int, ...]:
        if any(s < 1 for s in sizes):
            raise ValueError("block sizes must be positive")
        return tuple(sorted(sizes, reverse=True))

    @model_validator(mode="after")
    def _check_total(self) -> "JordanSpec":
        if sum(self.block_sizes) != self.n:
            raise ValueError(f"block sizes {self.block_sizes} do not add up to n={self.n}")
        return self

    @property
    def block_count(self) -> int:
        return len(self.block_sizes)

    @property
    def largest_block(self) -> int:
        return self.block_sizes[0]


class Witness(BaseModel):
    """First discrepancy of a failed check; row/col are 1-based when the check is entrywise."""

    model_config = ConfigDict(frozen=True)

    row: Optional[int] = None
    col: Optional[int] = None
    lhs: int
    rhs: int


class CheckReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    check_id: str
    n: Optional[int] = None
    r: Optional[int] = None
    m: Optional[int] = None
    p: Optional[int] = None
    passed: bool
    witness: Optional[Witness] = None
    note: Optional[str] = None

    @model_validator(mode="after")
    def _failed_needs_witness(self) -> "CheckReport":
        if not self.passed and self.witness is None:
            raise ValueError(f"failed check {self.check_id} carries no witness")
        return self


Command = Literal["gen", "snf", "jordan", "verify", "oracle", "explore"]


class CliConfig(BaseModel):
    """Parsed command line."""

    model_config = ConfigDict(frozen=True)

    command: Command
    family: Optional[str] = None
    seq: Optional[str] = None
    input_path: Optional[str] = None
    n: Optional[int] = Field(default=None, ge=0)
    n_max: Optional[int] = Field(default=None, ge=1)
    r: Optional[int] = Field(default=None, ge=0)
    m: Optional[int] = Field(default=None, ge=0)
    p: Optional[int] = None
    kind: Optional[str] = None
    identity: Optional[str] = None
    check: Optional[str] = None
    format: Literal["csv", "text"] = "text"
    certify: bool = False
    trials: int = Field(default=settings.CONVOLUTION_TRIALS, ge=1)
    seed: int = settings.RANDOM_SEED

    @model_validator(mode="after")
    def _check_modulus(self) -> "CliConfig":
        if self.p is not None and not is_prime(self.p):
            raise ValueError(f"--mod {self.p} is not prime")
        return self
