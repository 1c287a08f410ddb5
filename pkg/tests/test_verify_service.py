import logging

import pytest

from app import settings
from app.errors import ParameterRangeError
from app.models import Seq
from app.pascal_service import PascalService
from app.verify_service import CHECKS, VerificationService


def test_identity_one():
    """Test identity 1 at n = 5."""
    report = VerificationService.verify_identity(1, 5)
    assert report.passed
    assert report.check_id == "identity1"
    assert report.witness is None


def test_identity_two():
    """Test identity 2 for n up to 8."""
    for n in range(1, 9):
        assert VerificationService.verify_identity(2, n).passed


def test_identity_four_at_six_two():
    """Test identity 4 at n = 6, r = 2 and the report parameters."""
    report = VerificationService.verify_identity(4, 6, 2)
    assert report.passed
    assert (report.n, report.r) == (6, 2)


@pytest.mark.parametrize("n, r", [(n, r) for n in range(2, 9) for r in range(1, n)])
def test_identities_three_and_four(n, r):
    """Test identities 3 and 4 over every valid order."""
    assert VerificationService.verify_identity(3, n, r).passed
    assert VerificationService.verify_identity(4, n, r).passed


def test_identity_parameter_errors():
    """Test out-of-range identity parameters."""
    with pytest.raises(ParameterRangeError):
        VerificationService.verify_identity(3, 5)
    with pytest.raises(ParameterRangeError):
        VerificationService.verify_identity(4, 5, 5)
    with pytest.raises(ParameterRangeError):
        VerificationService.verify_identity(5, 5)
    with pytest.raises(ParameterRangeError):
        VerificationService.verify_identity(1, 0)


def test_theorem2():
    """Test the diagonalization of the offset binomial matrix."""
    assert VerificationService.verify_theorem2(1).passed
    assert VerificationService.verify_theorem2(5).passed
    assert VerificationService.theorem2_eigenvalues(6) == [1, 2, 3, 4, 5, 6]


def test_combinatorial_sides():
    """Test both closed sides of the cycle-coloring count."""
    assert VerificationService.combinatorial_sides(3, 1, 1) == (9, 9)
    assert VerificationService.combinatorial_sides(3, 3, 1) == (0, 0)
    assert VerificationService.combinatorial_sides(4, 1, 2) == (60, 60)
    with pytest.raises(ParameterRangeError):
        VerificationService.combinatorial_sides(3, 1, 0)


def test_enumeration():
    """Test brute-force counts, including empty cases."""
    assert VerificationService.enumerate_colored_cycle_partitions(3, 1, 1) == 9
    assert VerificationService.enumerate_colored_cycle_partitions(4, 1, 2) == 60
    assert VerificationService.enumerate_colored_cycle_partitions(3, 5, 1) == 0
    assert VerificationService.enumerate_colored_cycle_partitions(0, 0, 1) == 0


def test_enumeration_cap():
    """Test that enumeration above the cap raises."""
    with pytest.raises(ParameterRangeError, match="enumeration"):
        VerificationService.enumerate_colored_cycle_partitions(settings.ENUMERATION_CAP + 1, 1, 1)


@pytest.mark.parametrize("n", range(0, 7))
def test_combinatorial_identity_small(n):
    """Test the combinatorial identity for every m and r at small n."""
    for m in range(n + 1):
        for r in range(1, n + 1):
            report = VerificationService.verify_combinatorial(n, m, r)
            assert report.passed, report


def test_closed_form():
    """Test the closed form of (P_n - I)^r, including r = n."""
    assert VerificationService.verify_closed_form(4, 0).passed
    assert VerificationService.verify_closed_form(6, 2).passed
    assert VerificationService.verify_closed_form(5, 5).passed


def test_convolution():
    """Test the convolution homomorphism on fixed sequences."""
    delta = PascalService.named_sequence("delta", 6)
    c = Seq(terms=(3, -1, 4, 1, -5, 9))
    assert VerificationService.verify_convolution(delta, c, 6).passed
    sets = PascalService.named_sequence("sets", 6)
    assert VerificationService.verify_convolution(sets, sets, 6).passed


def test_random_convolution_trials_are_reproducible():
    """Test that a seed fixes the random trials."""
    first = VerificationService.random_convolution_trials(20, 8, seed=7)
    second = VerificationService.random_convolution_trials(20, 8, seed=7)
    assert len(first) == 20
    assert all(report.passed for report in first)
    assert [report.n for report in first] == [report.n for report in second]


def test_explore_partition_column():
    """Test that the partition column always agrees."""
    reports = VerificationService.explore_open_question("stirling-partition", 2, 8)
    assert [report.n for report in reports] == [3, 4, 5, 6, 7, 8]
    assert all(report.passed for report in reports)
    assert reports[0].note == "follows from identities 3 and 4"


def test_explore_cycle_column_single_block():
    """Test the smallest cycle-column case."""
    reports = VerificationService.explore_open_question("stirling-cycle", 1, 2)
    assert len(reports) == 1
    assert reports[0].passed
    assert reports[0].note == "open question"


def test_explore_cycle_column_reports_every_size():
    """Test that every size is reported, with a witness on disagreement."""
    reports = VerificationService.explore_open_question("stirling-cycle", 2, 7)
    assert [report.n for report in reports] == [3, 4, 5, 6, 7]
    assert all(report.r == 2 for report in reports)
    assert all(report.passed or report.witness is not None for report in reports)


def test_explore_range_errors():
    """Test that n_max below r + 1 raises."""
    with pytest.raises(ParameterRangeError):
        VerificationService.explore_open_question("stirling-cycle", 3, 3)


def test_stirling_sums():
    """Test the binomial sums behind identities 1 and 2."""
    reports = VerificationService.verify_stirling_sums(6)
    assert len(reports) == 14
    assert all(report.passed for report in reports)


def test_h_matrix_forms():
    """Test the rising form of H and its inverse."""
    for n in range(2, 8):
        for r in range(1, n):
            assert VerificationService.verify_h_rising_form(n, r).passed
            assert VerificationService.verify_h_inverse(n, r).passed


def test_ordered_partitions():
    """Test convolution powers of the sets sequence."""
    for r in range(0, 5):
        assert VerificationService.verify_ordered_partitions(r, 9).passed


def test_theorem1():
    """Test Jordan blocks of P_n mod p against the prediction."""
    report = VerificationService.verify_theorem1(5, 2)
    assert report.passed
    assert (report.n, report.p) == (5, 2)
    assert VerificationService.verify_theorem1(4, 5).passed


def test_theorem3_and_equivalence():
    """Test Smith forms and the explicit equivalence."""
    for n in range(2, 8):
        for r in range(1, n):
            assert VerificationService.verify_theorem3(n, r).passed
            assert VerificationService.verify_explicit_equivalence(n, r).passed


def test_single_jordan_block():
    """Test that P_n is a single rational Jordan block."""
    for n in range(1, 9):
        assert VerificationService.verify_single_jordan_block(n).passed


def test_identity_suite_order_and_count():
    """Test report order and count of the full identity suite."""
    reports = VerificationService.identity_suite("all", range(1, 5))
    # identities 1 and 2 once per n, identities 3 and 4 once per (n, r) with 1 <= r < n
    assert len(reports) == 4 + 4 + 6 + 6
    assert [report.check_id for report in reports[:4]] == ["identity1"] * 4
    three = [(report.n, report.r) for report in reports if report.check_id == "identity3"]
    assert three == [(2, 1), (3, 1), (3, 2), (4, 1), (4, 2), (4, 3)]
    assert all(report.passed for report in reports)


def test_identity_suite_fixed_order_skips_small_sizes():
    """Test that sizes too small for a fixed r are skipped."""
    reports = VerificationService.identity_suite("3", range(1, 6), r=3)
    assert [report.n for report in reports] == [4, 5]


def test_identity_suite_unknown_identity():
    """Test that an unknown identity raises."""
    with pytest.raises(ParameterRangeError):
        VerificationService.identity_suite("7", range(1, 3))


@pytest.mark.parametrize("check", CHECKS)
def test_batch_runs_every_check(check):
    """Test that every named check passes on small sizes."""
    reports = VerificationService.batch(check, range(1, 5), trials=5, seed=1)
    assert reports
    assert all(report.passed for report in reports)


def test_batch_with_fixed_prime():
    """Test theorem 1 batches with a fixed prime."""
    reports = VerificationService.batch("theorem1", range(1, 7), p=3)
    assert [report.p for report in reports] == [3] * 6
    assert [report.n for report in reports] == [1, 2, 3, 4, 5, 6]


def test_batch_logs_summary(caplog):
    """Test the batch summary log line."""
    with caplog.at_level(logging.INFO, logger="app.verify_service"):
        VerificationService.batch("theorem2", range(1, 4))
    assert "check theorem2: 3 reports, 0 failed" in caplog.text


def test_batch_unknown_check():
    """Test that an unknown check raises."""
    with pytest.raises(ParameterRangeError, match="unknown check"):
        VerificationService.batch("theorem9", range(1, 3))



def test_convolution_trials_need_a_positive_size():
    """Test that random convolution trials reject n_max < 1 and trials < 1."""
    with pytest.raises(ParameterRangeError):
        VerificationService.random_convolution_trials(5, 0, seed=1)
    with pytest.raises(ParameterRangeError):
        VerificationService.random_convolution_trials(0, 5, seed=1)
    with pytest.raises(ParameterRangeError):
        VerificationService.batch("convolution", range(0, 1))


def test_batch_needs_sizes():
    """Test that an empty size range is an error."""
    with pytest.raises(ParameterRangeError, match="at least one size"):
        VerificationService.batch("theorem2", range(1, 1))


@pytest.mark.parametrize(
    "check, r",
    [("theorem3", 9), ("equivalence", 0), ("closed-form", 7), ("h-inverse", 5), ("combinatorial", 6)],
)
def test_batch_rejects_order_no_size_admits(check, r):
    """Test that an order outside every requested size raises instead of returning nothing."""
    with pytest.raises(ParameterRangeError, match="out of range"):
        VerificationService.batch(check, range(1, 6), r=r)


def test_batch_keeps_order_admitted_by_some_sizes():
    """Test that sizes too small for r are skipped when a larger one admits it."""
    reports = VerificationService.batch("theorem3", range(1, 6), r=3)
    assert [(report.n, report.r) for report in reports] == [(4, 3), (5, 3)]


@pytest.mark.parametrize("identity", ["3", "4", "all"])
def test_identity_suite_rejects_order_no_size_admits(identity):
    """Test that identities 3 and 4 raise when r >= n for every size."""
    with pytest.raises(ParameterRangeError):
        VerificationService.identity_suite(identity, [5], r=9)


def test_combinatorial_batch_checks_cap_on_the_largest_size():
    """Test that a sweep whose largest size passes the enumeration cap is rejected as a whole."""
    with pytest.raises(ParameterRangeError, match="enumeration is capped"):
        VerificationService.batch("combinatorial", range(1, settings.ENUMERATION_CAP + 2))
