import itertools
import logging
import random
from functools import lru_cache
from typing import Iterable, Literal, Optional

from app import matrix, settings
from app.canonical_service import CanonicalService
from app.combinatorics import (
    binomial,
    falling,
    rising,
    stirling_cycle,
    stirling_partition,
    surjection_count,
)
from app.errors import ParameterRangeError
from app.models import CheckReport, IntMatrix, Seq, Witness
from app.pascal_service import PascalService

logger = logging.getLogger(__name__)

OpenQuestionKind = Literal["stirling-cycle", "stirling-partition"]

IDENTITIES = ("1", "2", "3", "4")
CHECKS = (
    "theorem1",
    "theorem2",
    "theorem3",
    "equivalence",
    "closed-form",
    "convolution",
    "stirling-sums",
    "h-inverse",
    "ordered-partitions",
    "single-block",
    "combinatorial",
)
# checks that take an order r, bounded by the size n
ORDERED_CHECKS = ("theorem3", "equivalence", "closed-form", "h-inverse", "combinatorial")
DEFAULT_PRIMES = (2, 3, 5, 7, 11)


def _compare(check_id: str, lhs: IntMatrix, rhs: IntMatrix, **params: Optional[int]) -> CheckReport:
    witness = matrix.first_discrepancy(lhs, rhs)
    return CheckReport(check_id=check_id, passed=witness is None, witness=witness, **params)


def _compare_values(
    check_id: str, lhs: Iterable[int], rhs: Iterable[int], note: Optional[str] = None, **params: Optional[int]
) -> CheckReport:
    """Compare two sequences; a witness names the first differing 1-based position."""
    left, right = list(lhs), list(rhs)
    witness = None
    for k, (x, y) in enumerate(itertools.zip_longest(left, right, fillvalue=0)):
        if x != y:
            witness = Witness(row=k + 1, lhs=x, rhs=y)
            break
    if witness is None and len(left) != len(right):
        witness = Witness(row=min(len(left), len(right)) + 1, lhs=len(left), rhs=len(right))
    return CheckReport(check_id=check_id, passed=witness is None, witness=witness, note=note, **params)


def _require_order(n: int, r: Optional[int]) -> int:
    if r is None or not 1 <= r <= n - 1:
        raise ParameterRangeError(f"need 1 <= r <= n - 1, got n={n}, r={r}")
    return r


@lru_cache(maxsize=None)
def _cycle_count_histogram(n: int) -> tuple[int, ...]:
    """histogram[k] = number of permutations of [n] with k cycles, by enumeration."""
    histogram = [0] * (n + 1)
    for perm in itertools.permutations(range(n)):
        seen = [False] * n
        cycles = 0
        for start in range(n):
            if not seen[start]:
                cycles += 1
                i = start
                while not seen[i]:
                    seen[i] = True
                    i = perm[i]
        histogram[cycles] += 1
    logger.debug("enumerated %d permutations of [%d]", sum(histogram), n)
    return tuple(histogram)


class VerificationService:
    """Executable checks of the matrix identities and theorems about Pascal matrices.

    Every check returns a CheckReport instead of raising; a failed report names the first
    discrepancy in row-major order with 1-based indices.
    """

    @staticmethod
    def verify_identity(identity: int, n: int, r: Optional[int] = None) -> CheckReport:
        """Evaluate both sides of identity 1, 2, 3 or 4 exactly and compare them entrywise.

        1: S_n^-1 P_n S_n = bidiagonal target
        2: ([i,j]) (binom(i,j-1)) ([i,j])^-1 = diag(1, ..., n)
        3: C_n (P_n - I_n)^r C_n^-1 = F_{n,r}
        4: G_{n,r} H_{n,r} = D_{n,r}
        """
        if n < 1:
            raise ParameterRangeError(f"matrix size must be >= 1, got {n}")
        check_id = f"identity{identity}"
        match identity:
            case 1:
                s = PascalService.stirling_matrix("partition", n)
                lhs = matrix.mul(matrix.mul(matrix.inverse_unitriangular(s), PascalService.pascal(n)), s)
                return _compare(check_id, lhs, PascalService.bidiagonal_target(n), n=n)
            case 2:
                cycle = PascalService.shifted_matrix("cycle", n)
                binomials = PascalService.shifted_matrix("binomial_offset", n)
                lhs = matrix.mul(matrix.mul(cycle, binomials), matrix.inverse_unitriangular(cycle))
                return _compare(check_id, lhs, matrix.from_diagonal(list(range(1, n + 1))), n=n)
            case 3:
                r = _require_order(n, r)
                c = PascalService.stirling_matrix("cycle", n)
                conjugated = matrix.mul(
                    matrix.mul(c, PascalService.pascal_minus_identity_power(n, r)), matrix.inverse_unitriangular(c)
                )
                return _compare(check_id, conjugated, PascalService.f_matrix(n, r), n=n, r=r)
            case 4:
                r = _require_order(n, r)
                lhs = matrix.mul(PascalService.g_matrix(n, r), PascalService.h_matrix(n, r))
                return _compare(check_id, lhs, PascalService.d_matrix(n, r), n=n, r=r)
        raise ParameterRangeError(f"unknown identity {identity}; choose 1, 2, 3 or 4")

    @staticmethod
    def verify_theorem2(n: int) -> CheckReport:
        """The inverse of ([i,j]) is ((-1)^(i-j) {i,j}) and its columns are eigenvectors of (binom(i,j-1))."""
        inverse = matrix.inverse_unitriangular(PascalService.shifted_matrix("cycle", n))
        inverse_check = _compare("theorem2", inverse, PascalService.shifted_matrix("signed_partition", n), n=n)
        if not inverse_check.passed:
            return inverse_check
        binomials = PascalService.shifted_matrix("binomial_offset", n)
        for j in range(n):
            v = inverse.column(j)
            image = matrix.mul_vector(binomials, v)
            for i in range(n):
                if image[i] != (j + 1) * v[i]:
                    witness = Witness(row=i + 1, col=j + 1, lhs=image[i], rhs=(j + 1) * v[i])
                    return CheckReport(check_id="theorem2", n=n, passed=False, witness=witness)
        return CheckReport(check_id="theorem2", n=n, passed=True)

    @staticmethod
    def theorem2_eigenvalues(n: int) -> list[int]:
        """Eigenvalue attached to each column of the signed partition matrix, read at its unit entry."""
        inverse = PascalService.shifted_matrix("signed_partition", n)
        binomials = PascalService.shifted_matrix("binomial_offset", n)
        return [matrix.mul_vector(binomials, inverse.column(j))[j] for j in range(n)]

    @staticmethod
    def combinatorial_sides(n: int, m: int, r: int) -> tuple[int, int]:
        """Both sums counting cycle partitions of [n] with m black cycles and the rest r-colored surjectively.

        left  = sum_{k=m+r}^{n} [n,k] binom(k,m) r! {k-m, r}
        right = sum_{k=m}^{n-r} n^falling(n-k) binom(n-k-1, r-1) [k,m]
        """
        if n < 0 or m < 0 or r < 1:
            raise ParameterRangeError(f"need n >= 0, m >= 0, r >= 1, got n={n}, m={m}, r={r}")
        left = sum(
            stirling_cycle(n, k) * binomial(k, m) * surjection_count(k - m, r) for k in range(m + r, n + 1)
        )
        right = sum(
            falling(n, n - k) * binomial(n - k - 1, r - 1) * stirling_cycle(k, m) for k in range(m, n - r + 1)
        )
        return left, right

    @staticmethod
    def enumerate_colored_cycle_partitions(n: int, m: int, r: int) -> int:
        """Brute-force count over all permutations of [n].

        A permutation with k cycles contributes binom(k, m) choices of black cycles times
        the surjective r-colorings of the remaining k - m cycles.
        """
        if not 0 <= n <= settings.ENUMERATION_CAP:
            raise ParameterRangeError(f"enumeration needs 0 <= n <= {settings.ENUMERATION_CAP}, got {n}")
        if m < 0 or r < 1:
            raise ParameterRangeError(f"need m >= 0 and r >= 1, got m={m}, r={r}")
        histogram = _cycle_count_histogram(n)
        return sum(count * binomial(k, m) * surjection_count(k - m, r) for k, count in enumerate(histogram))

    @staticmethod
    def verify_combinatorial(n: int, m: int, r: int) -> CheckReport:
        left, right = VerificationService.combinatorial_sides(n, m, r)
        counted = VerificationService.enumerate_colored_cycle_partitions(n, m, r)
        witness = None
        if left != right:
            witness = Witness(lhs=left, rhs=right)
        elif left != counted:
            witness = Witness(lhs=left, rhs=counted)
        return CheckReport(check_id="combinatorial", n=n, r=r, m=m, passed=witness is None, witness=witness)

    @staticmethod
    def verify_closed_form(n: int, r: int) -> CheckReport:
        """(P_n - I_n)^r by multiplication against r! {i-j, r} binom(i-1, j-1)."""
        lhs = PascalService.pascal_minus_identity_power(n, r)
        return _compare("closed-form", lhs, PascalService.closed_form_power(n, r), n=n, r=r)

    @staticmethod
    def verify_convolution(c: Seq, d: Seq, n: int) -> CheckReport:
        """P_n(c) P_n(d) = P_n(c*d)."""
        lhs = matrix.mul(PascalService.generalized_pascal(c, n), PascalService.generalized_pascal(d, n))
        rhs = PascalService.generalized_pascal(PascalService.binomial_convolve(c, d, n), n)
        return _compare("convolution", lhs, rhs, n=n)

    @staticmethod
    def random_convolution_trials(trials: int, n_max: int, seed: int) -> list[CheckReport]:
        """Convolution checks on random sequences with entries in [-9, 9] and 1 <= n <= n_max."""
        if trials < 1 or n_max < 1:
            raise ParameterRangeError(f"need trials >= 1 and n_max >= 1, got trials={trials}, n_max={n_max}")
        rng = random.Random(seed)
        reports = []
        for _ in range(trials):
            n = rng.randint(1, n_max)
            c = Seq(terms=tuple(rng.randint(-9, 9) for _ in range(n)))
            d = Seq(terms=tuple(rng.randint(-9, 9) for _ in range(n)))
            reports.append(VerificationService.verify_convolution(c, d, n))
        return reports

    @staticmethod
    def explore_open_question(kind: OpenQuestionKind, r: int, n_max: int) -> list[CheckReport]:
        """Is Q_n(c) equivalent to its diagonal for c the r-th Stirling column, n = r+1 .. n_max?

        For the partition column this follows from identities (3) and (4); for the cycle
        column it is an open question, so a disagreement is reported and logged, not raised.
        """
        if r < 1 or n_max < r + 1:
            raise ParameterRangeError(f"need r >= 1 and n_max >= r + 1, got r={r}, n_max={n_max}")
        note = "open question" if kind == "stirling-cycle" else "follows from identities 3 and 4"
        reports = []
        for n in range(r + 1, n_max + 1):
            q = PascalService.q_matrix(PascalService.named_sequence(kind, n, r), n, r)
            snf = CanonicalService.smith_normal_form(q).diagonal
            report = _compare_values(
                f"open-question-{kind}", snf, CanonicalService.snf_of_diagonal(q.diagonal()), note=note, n=n, r=r
            )
            if not report.passed:
                logger.warning("Q_%d of %s column %d is not equivalent to its diagonal: %s", n, kind, r, report.witness)
            reports.append(report)
        return reports

    @staticmethod
    def verify_stirling_sums(n: int) -> list[CheckReport]:
        """{n+1, m+1} = sum_k binom(n,k) {k,m} and [n+1, m+1] = sum_k [n,k] binom(k,m) for 0 <= m <= n."""
        reports = []
        for m in range(n + 1):
            partition_sum = sum(binomial(n, k) * stirling_partition(k, m) for k in range(n + 1))
            reports.append(
                _compare_values("partition-binomial-sum", [stirling_partition(n + 1, m + 1)], [partition_sum], n=n, m=m)
            )
            cycle_sum = sum(stirling_cycle(n, k) * binomial(k, m) for k in range(n + 1))
            reports.append(
                _compare_values("cycle-binomial-sum", [stirling_cycle(n + 1, m + 1)], [cycle_sum], n=n, m=m)
            )
        return reports

    @staticmethod
    def verify_h_rising_form(n: int, r: int) -> CheckReport:
        """H_{n,r} entry equals binom(i-1, j-1) (-r)^rising(i-j)."""
        h = PascalService.h_matrix(n, r)
        size = h.n
        expected = IntMatrix(
            n=size,
            entries=tuple(
                binomial(i, j) * rising(-r, i - j) if i >= j else 0 for i in range(size) for j in range(size)
            ),
        )
        return _compare("h-rising-form", h, expected, n=n, r=r)

    @staticmethod
    def verify_h_inverse(n: int, r: int) -> CheckReport:
        """The inverse of H_{n,r} is (binom(i-1, j-1) r^rising(i-j))."""
        inverse = matrix.inverse_unitriangular(PascalService.h_matrix(n, r))
        size = inverse.n
        expected = IntMatrix(
            n=size,
            entries=tuple(
                binomial(i, j) * rising(r, i - j) if i >= j else 0 for i in range(size) for j in range(size)
            ),
        )
        return _compare("h-inverse", inverse, expected, n=n, r=r)

    @staticmethod
    def verify_ordered_partitions(r: int, length: int) -> CheckReport:
        """The r-fold convolution of the nonempty-set sequence counts ordered partitions, r! {i, r}."""
        sets = PascalService.named_sequence("sets", length)
        power = PascalService.convolution_power(sets, r, length)
        expected = PascalService.named_sequence("surjections", length, r)
        return _compare_values("ordered-partitions", power.terms, expected.terms, n=length, r=r)

    @staticmethod
    def verify_theorem1(n: int, p: int) -> CheckReport:
        """Jordan blocks of P_n mod p by the rank method and by the bidiagonal route against the prediction.

        Also checks that the largest block equals the minimal polynomial exponent.
        """
        computed = CanonicalService.jordan_blocks_unipotent_mod_p(matrix.reduce_mod(PascalService.pascal(n), p))
        predicted = CanonicalService.predicted_pascal_jordan_mod_p(n, p)
        report = _compare_values("theorem1", computed.block_sizes, predicted.block_sizes, n=n, p=p)
        if not report.passed:
            return report
        bidiagonal = CanonicalService.jordan_blocks_from_bidiagonal_mod_p(n, p)
        report = _compare_values("theorem1", bidiagonal.block_sizes, predicted.block_sizes, n=n, p=p)
        if not report.passed:
            return report
        exponent = CanonicalService.min_poly_exponent_mod_p(n, p)
        if exponent != computed.largest_block:
            return CheckReport(
                check_id="theorem1", n=n, p=p, passed=False, witness=Witness(lhs=computed.largest_block, rhs=exponent)
            )
        return report

    @staticmethod
    def verify_theorem3(n: int, r: int) -> CheckReport:
        """Smith diagonal of (P_n - I_n)^r against the prediction from the rising-factorial diagonal."""
        snf = CanonicalService.smith_normal_form(PascalService.pascal_minus_identity_power(n, r)).diagonal
        return _compare_values("theorem3", snf, CanonicalService.predicted_snf_diagonal(n, r), n=n, r=r)

    @staticmethod
    def verify_explicit_equivalence(n: int, r: int) -> CheckReport:
        """U (P_n - I_n)^r V = [[D_{n,r}, 0], [0, 0]] with det U, det V = +-1."""
        u, v = CanonicalService.explicit_equivalence(n, r)
        for factor in (u, v):
            det = matrix.determinant(factor)
            if abs(det) != 1:
                return CheckReport(
                    check_id="equivalence", n=n, r=r, passed=False, witness=Witness(lhs=det, rhs=1)
                )
        product = matrix.mul(matrix.mul(u, PascalService.pascal_minus_identity_power(n, r)), v)
        target = matrix.block2x2(PascalService.d_matrix(n, r), None, None, None, n - r, n - r, n)
        return _compare("equivalence", product, target, n=n, r=r)

    @staticmethod
    def verify_single_jordan_block(n: int) -> CheckReport:
        """Over the rationals P_n is one Jordan block, reached with scaling (0!, 1!, ..., (n-1)!)."""
        scaling, blocks = CanonicalService.rational_jordan_of_pascal(n)
        factorials = [1]
        for k in range(1, n):
            factorials.append(factorials[-1] * k)
        report = _compare_values("single-block", scaling, factorials, n=n)
        if report.passed and blocks.block_sizes != (n,):
            return CheckReport(
                check_id="single-block", n=n, passed=False, witness=Witness(lhs=blocks.block_count, rhs=1)
            )
        return report

    @staticmethod
    def identity_suite(identity: str, ns: Iterable[int], r: Optional[int] = None) -> list[CheckReport]:
        """Identity checks over ns, in identity then n then r order; identity may be 'all'."""
        chosen = IDENTITIES if identity == "all" else (identity,)
        sizes = list(ns)
        reports = []
        for ident in chosen:
            if ident not in IDENTITIES:
                raise ParameterRangeError(f"unknown identity {ident!r}; choose 1, 2, 3, 4 or all")
            for n in sizes:
                if ident in ("1", "2"):
                    reports.append(VerificationService.verify_identity(int(ident), n))
                    continue
                for order in range(1, n) if r is None else [r] if 1 <= r < n else []:
                    reports.append(VerificationService.verify_identity(int(ident), n, order))
            if r is not None and ident in ("3", "4") and not any(1 <= r < n for n in sizes):
                raise ParameterRangeError(f"identity {ident} needs 1 <= r < n, got r={r} for every requested n")
        return reports

    @staticmethod
    def batch(
        check: str,
        ns: Iterable[int],
        r: Optional[int] = None,
        p: Optional[int] = None,
        trials: int = settings.CONVOLUTION_TRIALS,
        seed: int = settings.RANDOM_SEED,
    ) -> list[CheckReport]:
        """Run one named check over a range of sizes; reports come back ordered by parameters."""
        sizes = list(ns)
        if not sizes:
            raise ParameterRangeError(f"check {check!r} needs at least one size")
        reports: list[CheckReport] = []
        admitted: list[int] = []

        def orders(n: int, lowest: int = 1, highest: Optional[int] = None) -> list[int]:
            top = n - 1 if highest is None else highest
            chosen = list(range(lowest, top + 1)) if r is None else [r] if lowest <= r <= top else []
            if chosen:
                admitted.append(n)
            return chosen

        match check:
            case "theorem1":
                for prime in [p] if p is not None else DEFAULT_PRIMES:
                    reports.extend(VerificationService.verify_theorem1(n, prime) for n in sizes)
            case "theorem2":
                reports.extend(VerificationService.verify_theorem2(n) for n in sizes)
            case "theorem3":
                for n in sizes:
                    reports.extend(VerificationService.verify_theorem3(n, k) for k in orders(n))
            case "equivalence":
                for n in sizes:
                    reports.extend(VerificationService.verify_explicit_equivalence(n, k) for k in orders(n))
            case "closed-form":
                for n in sizes:
                    reports.extend(VerificationService.verify_closed_form(n, k) for k in orders(n, 0, n))
            case "convolution":
                reports.extend(VerificationService.random_convolution_trials(trials, max(sizes), seed))
            case "stirling-sums":
                for n in sizes:
                    reports.extend(VerificationService.verify_stirling_sums(n))
            case "h-inverse":
                for n in sizes:
                    for k in orders(n):
                        reports.append(VerificationService.verify_h_inverse(n, k))
                        reports.append(VerificationService.verify_h_rising_form(n, k))
            case "ordered-partitions":
                length = max(sizes) + 1
                reports.extend(VerificationService.verify_ordered_partitions(k, length) for k in sizes)
            case "single-block":
                reports.extend(VerificationService.verify_single_jordan_block(n) for n in sizes)
            case "combinatorial":
                if max(sizes) > settings.ENUMERATION_CAP:
                    raise ParameterRangeError(
                        f"enumeration is capped at n={settings.ENUMERATION_CAP}, got n_max={max(sizes)}"
                    )
                for n in sizes:
                    for m in range(n + 1):
                        reports.extend(VerificationService.verify_combinatorial(n, m, k) for k in orders(n, 1, n))
            case _:
                raise ParameterRangeError(f"unknown check {check!r}; choose from {', '.join(CHECKS)}")
        if r is not None and check in ORDERED_CHECKS and not admitted:
            raise ParameterRangeError(f"r={r} is out of range for every requested n in check {check}")
        failed = sum(1 for report in reports if not report.passed)
        logger.info("check %s: %d reports, %d failed", check, len(reports), failed)
        return reports
