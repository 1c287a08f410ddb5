import logging
from typing import Optional

from app import matrix
from app.combinatorics import factorize, is_prime, p_adic_valuation, rising
from app.errors import (
    InexactDivisionError,
    NotNearJordanError,
    NotPrimeError,
    NotUnipotentError,
    ParameterRangeError,
)
from app.models import IntMatrix, JordanSpec, ModMatrix, SmithForm, SmithTransforms, smith_chain_violation
from app.pascal_service import PascalService

logger = logging.getLogger(__name__)


class _SmithReduction:
    """Working state of one Smith normal form computation.

    Row operations are mirrored on ``u`` and column operations on ``v`` so that
    u * A * v equals the current working matrix at every step.
    """

    def __init__(self, a: IntMatrix, track: bool) -> None:
        self.n = a.n
        self.m = a.rows()
        self.u: Optional[list[list[int]]] = IntMatrix.identity(a.n).rows() if track else None
        self.v: Optional[list[list[int]]] = IntMatrix.identity(a.n).rows() if track else None
        self.rounds = 0

    def swap_rows(self, i: int, k: int) -> None:
        if i == k:
            return
        self.m[i], self.m[k] = self.m[k], self.m[i]
        if self.u is not None:
            self.u[i], self.u[k] = self.u[k], self.u[i]

    def swap_cols(self, j: int, k: int) -> None:
        if j == k:
            return
        for grid in (self.m, self.v):
            if grid is None:
                continue
            for row in grid:
                row[j], row[k] = row[k], row[j]

    def add_row(self, target: int, source: int, q: int) -> None:
        """row[target] += q * row[source]"""
        for grid in (self.m, self.u):
            if grid is None:
                continue
            grid[target] = [x + q * y for x, y in zip(grid[target], grid[source])]

    def add_col(self, target: int, source: int, q: int) -> None:
        """col[target] += q * col[source]"""
        for grid in (self.m, self.v):
            if grid is None:
                continue
            for row in grid:
                row[target] += q * row[source]

    def negate_row(self, i: int) -> None:
        for grid in (self.m, self.u):
            if grid is None:
                continue
            grid[i] = [-x for x in grid[i]]

    def smallest_entry(self, t: int) -> Optional[tuple[int, int]]:
        """Position of the smallest nonzero |entry| in the trailing submatrix, ties by (row, col)."""
        best: Optional[tuple[int, int]] = None
        best_abs = 0
        for i in range(t, self.n):
            for j in range(t, self.n):
                e = abs(self.m[i][j])
                if e and (best is None or e < best_abs):
                    best, best_abs = (i, j), e
        return best

    def clear_cross(self, t: int) -> bool:
        """Reduce column t below and row t right of the pivot; True when both are zero."""
        pivot = self.m[t][t]
        clean = True
        for i in range(t + 1, self.n):
            if self.m[i][t]:
                self.add_row(i, t, -(self.m[i][t] // pivot))
                clean = clean and self.m[i][t] == 0
        for j in range(t + 1, self.n):
            if self.m[t][j]:
                self.add_col(j, t, -(self.m[t][j] // pivot))
                clean = clean and self.m[t][j] == 0
        return clean

    def non_multiple(self, t: int) -> Optional[int]:
        """A row below t holding an entry the pivot does not divide."""
        pivot = self.m[t][t]
        for i in range(t + 1, self.n):
            if any(self.m[i][j] % pivot for j in range(t + 1, self.n)):
                return i
        return None

    def run(self) -> None:
        for t in range(self.n):
            while True:
                self.rounds += 1
                position = self.smallest_entry(t)
                if position is None:
                    return
                self.swap_rows(t, position[0])
                self.swap_cols(t, position[1])
                if not self.clear_cross(t):
                    continue
                offender = self.non_multiple(t)
                if offender is None:
                    break
                self.add_row(t, offender, 1)
            if self.m[t][t] < 0:
                self.negate_row(t)


class CanonicalService:
    """Smith normal forms over the integers and Jordan forms modulo a prime."""

    @staticmethod
    def smith_normal_form(a: IntMatrix, want_transforms: bool = False) -> SmithForm:
        """Smith normal form; with ``want_transforms`` also unimodular U, V with U A V = diag."""
        work = _SmithReduction(a, track=want_transforms)
        work.run()
        logger.debug("smith_normal_form n=%d finished after %d pivot rounds", a.n, work.rounds)
        diagonal = tuple(work.m[i][i] for i in range(a.n))
        transforms = None
        if work.u is not None and work.v is not None:
            transforms = SmithTransforms(u=IntMatrix.from_rows(work.u), v=IntMatrix.from_rows(work.v))
        return SmithForm(diagonal=diagonal, transforms=transforms)

    @staticmethod
    def certificate_holds(a: IntMatrix, form: SmithForm) -> bool:
        """Re-multiply the certificates: det(U), det(V) = +-1 and U A V = diag(form.diagonal)."""
        if form.transforms is None:
            return False
        u, v = form.transforms.u, form.transforms.v
        if abs(matrix.determinant(u)) != 1 or abs(matrix.determinant(v)) != 1:
            return False
        return matrix.mul(matrix.mul(u, a), v) == matrix.from_diagonal(form.diagonal)

    @staticmethod
    def is_smith_normal_form(diagonal: list[int] | tuple[int, ...]) -> bool:
        return smith_chain_violation(diagonal) is None

    @staticmethod
    def snf_of_diagonal(d: list[int] | tuple[int, ...]) -> list[int]:
        """Smith diagonal of diag(d) by sorting p-adic valuations prime by prime."""
        nonzero = [abs(x) for x in d if x != 0]
        primes: set[int] = set()
        for x in nonzero:
            primes.update(factorize(x))
        out = [1] * len(nonzero)
        for p in sorted(primes):
            for k, v in enumerate(sorted(p_adic_valuation(x, p) for x in nonzero)):
                out[k] *= p**v
        return out + [0] * (len(d) - len(nonzero))

    @staticmethod
    def predicted_snf_diagonal(n: int, r: int) -> list[int]:
        """Smith diagonal of (P_n - I_n)^r: elementary divisors of diag(1^rising(r), ..., (n-r)^rising(r), 0, ...)."""
        if n < 1 or r < 1:
            raise ParameterRangeError(f"need n >= 1 and r >= 1, got n={n}, r={r}")
        if r >= n:
            return [0] * n
        diagonal = [rising(k, r) for k in range(1, n - r + 1)] + [0] * r
        return CanonicalService.snf_of_diagonal(diagonal)

    @staticmethod
    def explicit_equivalence(n: int, r: int) -> tuple[IntMatrix, IntMatrix]:
        """Unimodular U, V with U (P_n - I_n)^r V = [[D_{n,r}, 0], [0, 0]].

        U = [[0, I_{n-r}], [I_r, 0]] C_n and V = C_n^-1 [[H_{n,r}, 0], [0, I_r]].
        """
        if not 1 <= r <= n - 1:
            raise ParameterRangeError(f"need 1 <= r <= n - 1, got n={n}, r={r}")
        cycle = PascalService.stirling_matrix("cycle", n)
        swap = matrix.block2x2(None, matrix.identity(n - r), matrix.identity(r), None, n - r, r, n)
        right = matrix.block2x2(PascalService.h_matrix(n, r), None, None, matrix.identity(r), n - r, n - r, n)
        u = matrix.mul(swap, cycle)
        v = matrix.mul(matrix.inverse_unitriangular(cycle), right)
        return u, v

    @staticmethod
    def jordan_blocks_unipotent_mod_p(a: ModMatrix) -> JordanSpec:
        """Jordan blocks of a unipotent matrix over F_p from the ranks of (A - I)^k.

        The number of blocks of size >= k is rank((A-I)^(k-1)) - rank((A-I)^k).
        """
        nilpotent = matrix.sub_identity_mod(a)
        if not matrix.power_mod(nilpotent, a.n).is_zero():
            raise NotUnipotentError(f"(A - I)^{a.n} is not zero mod {a.p}")
        ranks = [a.n]
        current = nilpotent
        while ranks[-1] > 0:
            ranks.append(matrix.rank_mod(current))
            current = matrix.mul_mod(current, nilpotent)
        logger.debug("rank sequence of (A - I)^k mod %d: %s", a.p, ranks)
        at_least = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))] + [0]
        sizes: list[int] = []
        for k in range(1, len(at_least)):
            sizes.extend([k] * (at_least[k - 1] - at_least[k]))
        return JordanSpec(n=a.n, eigenvalue=1, block_sizes=tuple(sizes))

    @staticmethod
    def predicted_pascal_jordan_mod_p(n: int, p: int) -> JordanSpec:
        """floor(n/p) blocks of size p plus one block of size n mod p when that is nonzero."""
        if not is_prime(p):
            raise NotPrimeError(f"modulus {p} is not prime")
        if n < 1:
            raise ParameterRangeError(f"matrix size must be >= 1, got {n}")
        sizes = [p] * (n // p) + ([n % p] if n % p else [])
        return JordanSpec(n=n, eigenvalue=1, block_sizes=tuple(sizes))

    @staticmethod
    def near_jordan_normalize(
        j: IntMatrix | ModMatrix, p: Optional[int] = None
    ) -> tuple[list[int], IntMatrix | ModMatrix]:
        """Conjugate a near-Jordan matrix J_n(lambda; c_1, ..., c_{n-1}) to J_n(lambda; 1, ..., 1).

        With d = (1, c_1, c_1 c_2, ...) the result is D^-1 J D, entry (i, j) = d_j J_ij / d_i.
        Over F_p (a ModMatrix, or an IntMatrix with ``p`` given) the scaling is reduced mod p
        and the result is a ModMatrix; over the integers every division must be exact.
        """
        if isinstance(j, ModMatrix):
            p = j.p
        elif p is not None:
            j = matrix.reduce_mod(j, p)
        n = j.n
        eigenvalue = j.at(0, 0)
        for i in range(n):
            for k in range(n):
                e = j.at(i, k)
                if i == k and e != eigenvalue:
                    raise NotNearJordanError(f"diagonal entry ({i + 1}, {k + 1}) = {e} differs from {eigenvalue}")
                if i == k + 1 and e == 0:
                    raise NotNearJordanError(f"subdiagonal entry ({i + 1}, {k + 1}) is zero")
                if i != k and i != k + 1 and e != 0:
                    raise NotNearJordanError(f"entry ({i + 1}, {k + 1}) = {e} lies off the two diagonals")
        scaling = [1]
        for i in range(1, n):
            step = scaling[-1] * j.at(i, i - 1)
            scaling.append(step % p if p is not None else step)
        if p is not None:
            inverses = [pow(d, -1, p) for d in scaling]
            entries = tuple(scaling[k] * j.at(i, k) * inverses[i] % p for i in range(n) for k in range(n))
            return scaling, ModMatrix(n=n, p=p, entries=entries)
        out: list[int] = []
        for i in range(n):
            for k in range(n):
                quotient, remainder = divmod(scaling[k] * j.at(i, k), scaling[i])
                if remainder:
                    raise InexactDivisionError(f"entry ({i + 1}, {k + 1}) not divisible by scaling {scaling[i]}")
                out.append(quotient)
        return scaling, IntMatrix(n=n, entries=tuple(out))

    @staticmethod
    def min_poly_exponent_mod_p(n: int, p: int) -> int:
        """Smallest e with (P_n - I)^e = 0 mod p; equals min(p, n)."""
        nilpotent = matrix.sub_identity_mod(matrix.reduce_mod(PascalService.pascal(n), p))
        exponent, current = 1, nilpotent
        while not current.is_zero():
            current = matrix.mul_mod(current, nilpotent)
            exponent += 1
        return exponent

    @staticmethod
    def elementary_divisors(a: IntMatrix) -> dict[int, list[int]]:
        """Prime -> ascending exponents of that prime across the nonzero Smith diagonal."""
        divisors: dict[int, list[int]] = {}
        for d in CanonicalService.smith_normal_form(a).diagonal:
            if d == 0:
                continue
            for prime, exponent in factorize(d).items():
                divisors.setdefault(prime, []).append(exponent)
        return {prime: sorted(divisors[prime]) for prime in sorted(divisors)}

    @staticmethod
    def rational_jordan_of_pascal(n: int) -> tuple[list[int], JordanSpec]:
        """Normalize S_n^-1 P_n S_n over the integers: one Jordan block, scaling (0!, 1!, ..., (n-1)!)."""
        scaling, result = CanonicalService.near_jordan_normalize(PascalService.bidiagonal_target(n))
        if result != PascalService.jordan_block(n, 1):
            raise InexactDivisionError(f"normalized bidiagonal form of P_{n} is not a Jordan block")
        return scaling, JordanSpec(n=n, eigenvalue=1, block_sizes=(n,))

    @staticmethod
    def jordan_blocks_from_bidiagonal_mod_p(n: int, p: int) -> JordanSpec:
        """Jordan blocks of P_n mod p read off the reduced bidiagonal form.

        The subdiagonal (1, ..., n-1) vanishes mod p exactly at multiples of p; each run
        between zeros is a near-Jordan block that normalizes to a single Jordan block.
        """
        reduced = matrix.reduce_mod(PascalService.bidiagonal_target(n), p)
        lifted = matrix.lift(reduced)
        cuts = [0] + [i for i in range(1, n) if reduced.at(i, i - 1) == 0] + [n]
        sizes: list[int] = []
        for start, stop in zip(cuts, cuts[1:]):
            block = matrix.principal_block(lifted, start, stop - start)
            _, normalized = CanonicalService.near_jordan_normalize(block, p)
            if normalized != matrix.reduce_mod(PascalService.jordan_block(stop - start, 1), p):
                raise InexactDivisionError(f"run [{start + 1}, {stop}] did not normalize to a Jordan block")
            sizes.append(stop - start)
        return JordanSpec(n=n, eigenvalue=1, block_sizes=tuple(sizes))
