import logging
from typing import Callable, Literal, Optional, Sequence

from app import matrix
from app.combinatorics import binomial, factorial, falling, rising, stirling_cycle, stirling_partition
from app.errors import NotNearJordanError, ParameterRangeError, SequenceTooShortError
from app.models import IntMatrix, Seq

logger = logging.getLogger(__name__)

StirlingKind = Literal["partition", "cycle"]
ShiftedKind = Literal["binomial", "binomial_offset", "cycle", "signed_partition"]
SequenceKind = Literal["sets", "delta", "stirling-partition", "stirling-cycle", "surjections"]

FAMILIES = (
    "pascal",
    "stirling-partition",
    "stirling-cycle",
    "F",
    "G",
    "H",
    "D",
    "bidiagonal",
    "pascal-minus-i-power",
    "generalized",
)


def _build(n: int, entry: Callable[[int, int], int]) -> IntMatrix:
    """n x n matrix from a 0-based entry function."""
    return IntMatrix(n=n, entries=tuple(entry(i, j) for i in range(n) for j in range(n)))


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def _require_n(n: int) -> None:
    if n < 1:
        raise ParameterRangeError(f"matrix size must be >= 1, got {n}")


def _require_order(n: int, r: int) -> None:
    _require_n(n)
    if not 1 <= r <= n - 1:
        raise ParameterRangeError(f"need 1 <= r <= n - 1, got n={n}, r={r}")


def _require_length(c: Seq, length: int) -> None:
    if c.length < length:
        raise SequenceTooShortError(f"sequence {c.label} has {c.length} terms, {length} needed")


class PascalService:
    """Constructors for the Pascal, Stirling and derived matrix families.

    Docstrings use 1-based (i, j); the code indexes from 0.
    """

    @staticmethod
    def pascal(n: int) -> IntMatrix:
        """P_n = (binom(i-1, j-1))."""
        _require_n(n)
        return _build(n, binomial)

    @staticmethod
    def stirling_matrix(kind: StirlingKind, n: int) -> IntMatrix:
        """S_n = ({i-1, j-1}) or C_n = ([i-1, j-1])."""
        _require_n(n)
        match kind:
            case "partition":
                return _build(n, stirling_partition)
            case "cycle":
                return _build(n, stirling_cycle)
        raise ParameterRangeError(f"unknown Stirling kind {kind!r}")

    @staticmethod
    def shifted_matrix(kind: ShiftedKind, n: int) -> IntMatrix:
        """Matrices indexed 1 <= i, j <= n without the -1 shift.

        ``binomial`` is (binom(i, j)); ``binomial_offset`` is (binom(i, j-1)) restricted to
        j <= i, whose diagonal is (1, ..., n) and which the cycle matrix diagonalizes;
        ``cycle`` is ([i, j]); ``signed_partition`` is ((-1)^(i-j) {i, j}).
        """
        _require_n(n)
        match kind:
            case "binomial":
                return _build(n, lambda i, j: binomial(i + 1, j + 1))
            case "binomial_offset":
                return _build(n, lambda i, j: binomial(i + 1, j) if j <= i else 0)
            case "cycle":
                return _build(n, lambda i, j: stirling_cycle(i + 1, j + 1))
            case "signed_partition":
                return _build(n, lambda i, j: _sign(i - j) * stirling_partition(i + 1, j + 1))
        raise ParameterRangeError(f"unknown shifted kind {kind!r}")

    @staticmethod
    def bidiagonal_target(n: int) -> IntMatrix:
        """S_n^-1 P_n S_n: unit diagonal, subdiagonal (1, 2, ..., n-1)."""
        _require_n(n)
        return _build(n, lambda i, j: 1 if i == j else (i if i == j + 1 else 0))

    @staticmethod
    def f_matrix(n: int, r: int) -> IntMatrix:
        """F_{n,r} = ((i-1)^falling(i-j) * binom(i-j-1, r-1))."""
        _require_order(n, r)
        return _build(n, lambda i, j: falling(i, i - j) * binomial(i - j - 1, r - 1) if i - j >= r else 0)

    @staticmethod
    def g_matrix(n: int, r: int) -> IntMatrix:
        """G_{n,r}: the (n-r) x (n-r) lower-left block of F_{n,r}."""
        _require_order(n, r)
        return _build(
            n - r, lambda i, j: falling(i + r, i + r - j) * binomial(i + r - j - 1, r - 1) if i + r - j >= r else 0
        )

    @staticmethod
    def h_matrix(n: int, r: int) -> IntMatrix:
        """H_{n,r} = ((-1)^(i-j) binom(i-1, j-1) r^falling(i-j)), banded: zero when i - j > r."""
        _require_order(n, r)
        return _build(n - r, lambda i, j: _sign(i - j) * binomial(i, j) * falling(r, i - j) if i >= j else 0)

    @staticmethod
    def d_matrix(n: int, r: int) -> IntMatrix:
        """D_{n,r} = diag(1^rising(r), ..., (n-r)^rising(r))."""
        _require_order(n, r)
        return matrix.from_diagonal([rising(k, r) for k in range(1, n - r + 1)])

    @staticmethod
    def named_sequence(kind: SequenceKind, length: int, r: Optional[int] = None) -> Seq:
        """Prefix of a named sequence; the Stirling and surjection kinds take column r."""
        if length < 0:
            raise ParameterRangeError(f"sequence length must be >= 0, got {length}")
        if kind in ("stirling-partition", "stirling-cycle", "surjections") and (r is None or r < 0):
            raise ParameterRangeError(f"sequence kind {kind} needs a column r >= 0")
        col = r or 0
        match kind:
            case "sets":
                return Seq(terms=tuple(0 if i == 0 else 1 for i in range(length)), label="sets")
            case "delta":
                return Seq(terms=tuple(1 if i == 0 else 0 for i in range(length)), label="delta")
            case "stirling-partition":
                return Seq(terms=tuple(stirling_partition(i, col) for i in range(length)), label=f"{kind}:{col}")
            case "stirling-cycle":
                return Seq(terms=tuple(stirling_cycle(i, col) for i in range(length)), label=f"{kind}:{col}")
            case "surjections":
                scale = factorial(col)
                terms = tuple(scale * stirling_partition(i, col) for i in range(length))
                return Seq(terms=terms, label=f"{kind}:{col}")
        raise ParameterRangeError(f"unknown sequence kind {kind!r}")

    @staticmethod
    def generalized_pascal(c: Seq, n: int) -> IntMatrix:
        """P_n(c) = (c_{i-j} binom(i-1, j-1)). The prefix must hold at least n terms."""
        _require_n(n)
        _require_length(c, n)
        return _build(n, lambda i, j: c.term(i - j) * binomial(i, j) if i >= j else 0)

    @staticmethod
    def binomial_convolve(c: Seq, d: Seq, length: int) -> Seq:
        """(c*d)_k = sum_i binom(k, i) c_i d_{k-i} for k < length."""
        _require_length(c, length)
        _require_length(d, length)
        terms = tuple(sum(binomial(k, i) * c.term(i) * d.term(k - i) for i in range(k + 1)) for k in range(length))
        return Seq(terms=terms, label=f"({c.label})*({d.label})")

    @staticmethod
    def convolution_power(c: Seq, r: int, length: int) -> Seq:
        """r-fold binomial convolution c*...*c; r = 0 gives delta."""
        if r < 0:
            raise ParameterRangeError(f"convolution power needs r >= 0, got {r}")
        _require_length(c, length)
        result = PascalService.named_sequence("delta", length)
        for _ in range(r):
            result = PascalService.binomial_convolve(result, c, length)
        return Seq(terms=result.terms, label=f"({c.label})^*{r}")

    @staticmethod
    def q_matrix(c: Seq, n: int, r: int) -> IntMatrix:
        """Q_n(c): the (n-r) x (n-r) lower-left block of P_n(c) when c starts with r zeros."""
        _require_order(n, r)
        _require_length(c, n)
        if any(c.terms[:r]):
            raise NotNearJordanError(f"sequence {c.label} does not begin with {r} zeros")
        return _build(n - r, lambda i, j: c.term(i + r - j) * binomial(i + r, j) if i + r >= j else 0)

    @staticmethod
    def closed_form_power(n: int, r: int) -> IntMatrix:
        """(P_n - I_n)^r entrywise: r! {i-j, r} binom(i-1, j-1); the identity when r = 0."""
        _require_n(n)
        if r < 0:
            raise ParameterRangeError(f"power must be >= 0, got {r}")
        scale = factorial(r)
        return _build(n, lambda i, j: scale * stirling_partition(i - j, r) * binomial(i, j))

    @staticmethod
    def pascal_minus_identity_power(n: int, r: int) -> IntMatrix:
        """(P_n - I_n)^r by matrix multiplication."""
        base = matrix.sub(PascalService.pascal(n), matrix.identity(n))
        return matrix.power(base, r)

    @staticmethod
    def jordan_block(n: int, eigenvalue: int) -> IntMatrix:
        """J_n(lambda; 1, ..., 1), ones on the subdiagonal."""
        return PascalService.near_jordan(eigenvalue, [1] * (n - 1))

    @staticmethod
    def near_jordan(eigenvalue: int, subdiagonal: Sequence[int]) -> IntMatrix:
        """J_n(lambda; c_1, ..., c_{n-1}) with n = len(subdiagonal) + 1."""
        n = len(subdiagonal) + 1
        return _build(n, lambda i, j: eigenvalue if i == j else (subdiagonal[j] if i == j + 1 else 0))

    @staticmethod
    def family(name: str, n: int, r: Optional[int] = None, seq: Optional[Seq] = None) -> IntMatrix:
        """Look up a matrix family by its command-line name."""
        match name:
            case "pascal":
                return PascalService.pascal(n)
            case "stirling-partition":
                return PascalService.stirling_matrix("partition", n)
            case "stirling-cycle":
                return PascalService.stirling_matrix("cycle", n)
            case "bidiagonal":
                return PascalService.bidiagonal_target(n)
            case "generalized":
                if seq is None:
                    raise ParameterRangeError("family 'generalized' needs a sequence")
                return PascalService.generalized_pascal(seq, n)
        if r is None:
            raise ParameterRangeError(f"family {name!r} needs r")
        match name:
            case "F":
                return PascalService.f_matrix(n, r)
            case "G":
                return PascalService.g_matrix(n, r)
            case "H":
                return PascalService.h_matrix(n, r)
            case "D":
                return PascalService.d_matrix(n, r)
            case "pascal-minus-i-power":
                return PascalService.pascal_minus_identity_power(n, r)
        raise ParameterRangeError(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}")
