import pytest

from app.models import IntMatrix


@pytest.fixture
def pascal_5() -> IntMatrix:
    return IntMatrix.from_rows(
        [
            [1, 0, 0, 0, 0],
            [1, 1, 0, 0, 0],
            [1, 2, 1, 0, 0],
            [1, 3, 3, 1, 0],
            [1, 4, 6, 4, 1],
        ]
    )


@pytest.fixture
def stirling_partition_5() -> IntMatrix:
    return IntMatrix.from_rows(
        [
            [1, 0, 0, 0, 0],
            [0, 1, 0, 0, 0],
            [0, 1, 1, 0, 0],
            [0, 1, 3, 1, 0],
            [0, 1, 7, 6, 1],
        ]
    )


@pytest.fixture
def stirling_cycle_5() -> IntMatrix:
    return IntMatrix.from_rows(
        [
            [1, 0, 0, 0, 0],
            [0, 1, 0, 0, 0],
            [0, 1, 1, 0, 0],
            [0, 2, 3, 1, 0],
            [0, 6, 11, 6, 1],
        ]
    )


@pytest.fixture
def g_6_2() -> IntMatrix:
    return IntMatrix.from_rows(
        [
            [2, 0, 0, 0],
            [12, 6, 0, 0],
            [72, 48, 12, 0],
            [480, 360, 120, 20],
        ]
    )


@pytest.fixture
def h_6_2() -> IntMatrix:
    return IntMatrix.from_rows(
        [
            [1, 0, 0, 0],
            [-2, 1, 0, 0],
            [2, -4, 1, 0],
            [0, 6, -6, 1],
        ]
    )


@pytest.fixture
def d_6_2() -> IntMatrix:
    return IntMatrix.from_rows(
        [
            [2, 0, 0, 0],
            [0, 6, 0, 0],
            [0, 0, 12, 0],
            [0, 0, 0, 20],
        ]
    )
