"""Exact dense matrix operations over the integers and over F_p.

Matrices are immutable ``IntMatrix`` / ``ModMatrix`` values; every function returns a new
value. Index arguments are 0-based; witnesses reported to users are 1-based.
"""

import logging
from typing import Optional

from app.combinatorics import is_prime
from app.errors import DimensionMismatchError, NotPrimeError, NotUnitriangularError, ParameterRangeError
from app.models import IntMatrix, ModMatrix, Witness

logger = logging.getLogger(__name__)


def _require_same_size(a: IntMatrix | ModMatrix, b: IntMatrix | ModMatrix) -> None:
    if a.n != b.n:
        raise DimensionMismatchError(f"dimension mismatch: {a.n} vs {b.n}")


def identity(n: int) -> IntMatrix:
    return IntMatrix.identity(n)


def zero(n: int) -> IntMatrix:
    return IntMatrix.zero(n)


def from_diagonal(d: list[int] | tuple[int, ...]) -> IntMatrix:
    n = len(d)
    return IntMatrix(n=n, entries=tuple(d[i] if i == j else 0 for i in range(n) for j in range(n)))


def add(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    _require_same_size(a, b)
    return IntMatrix(n=a.n, entries=tuple(x + y for x, y in zip(a.entries, b.entries)))


def sub(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    _require_same_size(a, b)
    return IntMatrix(n=a.n, entries=tuple(x - y for x, y in zip(a.entries, b.entries)))


def scale(a: IntMatrix, k: int) -> IntMatrix:
    return IntMatrix(n=a.n, entries=tuple(k * x for x in a.entries))


def transpose(a: IntMatrix) -> IntMatrix:
    return IntMatrix(n=a.n, entries=tuple(a.at(j, i) for i in range(a.n) for j in range(a.n)))


def _product(n: int, left: tuple[int, ...], right: tuple[int, ...]) -> list[int]:
    columns = [right[j::n] for j in range(n)]
    out: list[int] = []
    for i in range(n):
        row = left[i * n : (i + 1) * n]
        out.extend(sum(x * y for x, y in zip(row, col)) for col in columns)
    return out


def mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    _require_same_size(a, b)
    return IntMatrix(n=a.n, entries=tuple(_product(a.n, a.entries, b.entries)))


def mul_vector(a: IntMatrix, v: list[int] | tuple[int, ...]) -> list[int]:
    if len(v) != a.n:
        raise DimensionMismatchError(f"vector of length {len(v)} against matrix of size {a.n}")
    return [sum(x * y for x, y in zip(a.row(i), v)) for i in range(a.n)]


def power(a: IntMatrix, r: int) -> IntMatrix:
    """a**r by repeated squaring; a**0 is the identity."""
    if r < 0:
        raise ParameterRangeError(f"matrix power needs r >= 0, got {r}")
    result = identity(a.n)
    base = a
    while r:
        if r & 1:
            result = mul(result, base)
        r >>= 1
        if r:
            base = mul(base, base)
    return result


def is_lower_triangular(a: IntMatrix) -> bool:
    return all(a.at(i, j) == 0 for i in range(a.n) for j in range(i + 1, a.n))


def is_unit_lower_triangular(a: IntMatrix) -> bool:
    return is_lower_triangular(a) and all(e == 1 for e in a.diagonal())


def inverse_unitriangular(a: IntMatrix) -> IntMatrix:
    """Exact inverse of a unit lower triangular matrix by forward substitution."""
    if not is_unit_lower_triangular(a):
        raise NotUnitriangularError("inverse_unitriangular needs a lower triangular matrix with unit diagonal")
    n = a.n
    inv = [[0] * n for _ in range(n)]
    for j in range(n):
        inv[j][j] = 1
        for i in range(j + 1, n):
            inv[i][j] = -sum(a.at(i, k) * inv[k][j] for k in range(j, i))
    return IntMatrix.from_rows(inv)


def determinant(a: IntMatrix) -> int:
    """Bareiss fraction-free elimination; every intermediate division is exact."""
    n = a.n
    m = a.rows()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def rank(a: IntMatrix) -> int:
    """Rank over the rationals, by fraction-free elimination."""
    m = a.rows()
    n = a.n
    rank_ = 0
    for col in range(n):
        pivot_row = next((i for i in range(rank_, n) if m[i][col] != 0), None)
        if pivot_row is None:
            continue
        m[rank_], m[pivot_row] = m[pivot_row], m[rank_]
        pivot = m[rank_][col]
        for i in range(rank_ + 1, n):
            factor = m[i][col]
            if factor:
                m[i] = [pivot * x - factor * y for x, y in zip(m[i], m[rank_])]
        rank_ += 1
    return rank_


def reduce_mod(a: IntMatrix, p: int) -> ModMatrix:
    if not is_prime(p):
        raise NotPrimeError(f"modulus {p} is not prime")
    return ModMatrix(n=a.n, p=p, entries=tuple(e % p for e in a.entries))


def lift(a: ModMatrix) -> IntMatrix:
    """Residues of ``a`` as an integer matrix with entries in [0, p)."""
    return IntMatrix(n=a.n, entries=a.entries)


def mul_mod(a: ModMatrix, b: ModMatrix) -> ModMatrix:
    _require_same_size(a, b)
    if a.p != b.p:
        raise DimensionMismatchError(f"moduli differ: {a.p} vs {b.p}")
    p = a.p
    return ModMatrix(n=a.n, p=p, entries=tuple(e % p for e in _product(a.n, a.entries, b.entries)))


def sub_identity_mod(a: ModMatrix) -> ModMatrix:
    """a - I over F_p."""
    n, p = a.n, a.p
    return ModMatrix(
        n=n, p=p, entries=tuple((a.at(i, j) - (1 if i == j else 0)) % p for i in range(n) for j in range(n))
    )


def power_mod(a: ModMatrix, r: int) -> ModMatrix:
    if r < 0:
        raise ParameterRangeError(f"matrix power needs r >= 0, got {r}")
    result = ModMatrix.identity(a.n, a.p)
    base = a
    while r:
        if r & 1:
            result = mul_mod(result, base)
        r >>= 1
        if r:
            base = mul_mod(base, base)
    return result


def rank_mod(a: ModMatrix) -> int:
    """Rank over F_p by Gaussian elimination."""
    p, n = a.p, a.n
    m = a.rows()
    rank_ = 0
    for col in range(n):
        pivot_row = next((i for i in range(rank_, n) if m[i][col] != 0), None)
        if pivot_row is None:
            continue
        m[rank_], m[pivot_row] = m[pivot_row], m[rank_]
        inv = pow(m[rank_][col], -1, p)
        m[rank_] = [x * inv % p for x in m[rank_]]
        for i in range(n):
            if i != rank_ and m[i][col]:
                factor = m[i][col]
                m[i] = [(x - factor * y) % p for x, y in zip(m[i], m[rank_])]
        rank_ += 1
    return rank_


def block2x2(
    top_left: Optional[IntMatrix],
    top_right: Optional[IntMatrix],
    bottom_left: Optional[IntMatrix],
    bottom_right: Optional[IntMatrix],
    row_split: int,
    col_split: int,
    n: int,
) -> IntMatrix:
    """Assemble [[A, B], [C, D]] into an n x n matrix; ``None`` stands for a zero block.

    Rows ``0..row_split-1`` form the top band and columns ``0..col_split-1`` the left band,
    so e.g. the top-right block must be ``row_split`` x ``n - col_split``. Blocks are square
    IntMatrix values, which means every non-zero block must sit in a square slot.
    """
    if not (0 <= row_split <= n and 0 <= col_split <= n):
        raise DimensionMismatchError(f"split ({row_split}, {col_split}) outside a matrix of size {n}")
    slots = [
        (top_left, 0, 0, row_split, col_split),
        (top_right, 0, col_split, row_split, n - col_split),
        (bottom_left, row_split, 0, n - row_split, col_split),
        (bottom_right, row_split, col_split, n - row_split, n - col_split),
    ]
    out = [[0] * n for _ in range(n)]
    for block, r0, c0, height, width in slots:
        if block is None:
            continue
        if block.n != height or block.n != width:
            raise DimensionMismatchError(f"block of size {block.n} does not fit a {height}x{width} slot")
        for i in range(height):
            out[r0 + i][c0 : c0 + width] = block.row(i)
    return IntMatrix.from_rows(out)


def principal_block(a: IntMatrix, start: int, size: int) -> IntMatrix:
    if start < 0 or size < 1 or start + size > a.n:
        raise DimensionMismatchError(f"block [{start}, {start + size}) outside a matrix of size {a.n}")
    return IntMatrix.from_rows([a.row(start + i)[start : start + size] for i in range(size)])


def diagonal_part(a: IntMatrix) -> IntMatrix:
    """Copy of ``a`` with every off-diagonal entry zeroed."""
    return from_diagonal(a.diagonal())


def first_discrepancy(a: IntMatrix, b: IntMatrix) -> Optional[Witness]:
    """First differing entry in row-major order, reported with 1-based indices."""
    _require_same_size(a, b)
    for idx, (x, y) in enumerate(zip(a.entries, b.entries)):
        if x != y:
            return Witness(row=idx // a.n + 1, col=idx % a.n + 1, lhs=x, rhs=y)
    return None
