import numpy as np
import pytest

from gdict.dictionary import Database

# 4-record, 7-bit reference database used across the suite; record i sits at
# index i, so searching for 1010110 must return index 2 (binary 10).
REFERENCE_RECORDS = ("0101000", "1000110", "1010110", "0110101")


@pytest.fixture
def reference_db() -> Database:
    return Database(REFERENCE_RECORDS)


def random_database(rng: np.random.Generator, m: int, n: int, count: int | None = None) -> Database:
    if count is None:
        count = 1 << m
    records = tuple(
        "".join("1" if rng.integers(0, 2) else "0" for _ in range(n))
        for _ in range(count)
    )
    return Database(records)
