import pytest

from concord import enumerate_partitions, enumerate_partitions_containing, random_partition, validate_partition
from concord.exceptions import CoverageError, InvalidData, OverlapError, SizeLimitError
from concord.objects import CoalitionSet, Partition, SystemSpec
from concord.utils import all_masks, bell_number, restricted_growth_strings, subset_sums, submasks


def _recursive_bell(n: int) -> int:
    # B(n + 1) = sum_k C(n, k) B(k)
    from math import comb
    values = [1]
    for m in range(n):
        values.append(sum(comb(m, k) * values[k] for k in range(m + 1)))
    return values[n]


@pytest.fixture
def small() -> SystemSpec:
    return SystemSpec([3, 2, 1], 1.0)


def test_valid_partition(small):
    partition = validate_partition(small, Partition.from_string("2|0,1", 3))
    assert partition.to_string() == "0,1|2"


def test_overlap(small):
    with pytest.raises(OverlapError) as info:
        validate_partition(small, Partition.from_string("0,1|1,2", 3))
    assert info.value.agent == 1


def test_coverage(small):
    with pytest.raises(CoverageError) as info:
        validate_partition(small, Partition.from_string("0|1", 3))
    assert info.value.agent == 2


def test_foreign_agent(small):
    with pytest.raises(InvalidData):
        validate_partition(small, Partition([CoalitionSet.of([0, 1, 2, 3])], 3))


@pytest.mark.parametrize("n, expected", [(1, 1), (3, 5), (5, 52)])
def test_partition_counts(n, expected):
    assert sum(1 for _ in enumerate_partitions(n)) == expected


@pytest.mark.parametrize("n", range(1, 9))
def test_counts_match_bell_numbers(n):
    partitions = list(enumerate_partitions(n))
    assert len(partitions) == bell_number(n) == _recursive_bell(n)
    assert len(set(partitions)) == len(partitions)


def test_rgs_order_is_lexicographic():
    strings = list(restricted_growth_strings(4))
    assert strings == sorted(strings)
    assert strings[0] == (0, 0, 0, 0) and strings[-1] == (0, 1, 2, 3)


def test_size_guard():
    with pytest.raises(SizeLimitError):
        next(enumerate_partitions(13))


def test_canonical_form_is_idempotent():
    for partition in enumerate_partitions(5):
        again = validate_partition(SystemSpec([1] * 5, 1.0), partition)
        assert again == partition
        assert validate_partition(SystemSpec([1] * 5, 1.0), again).blocks == again.blocks


@pytest.mark.parametrize("n, members, expected", [
    (4, [0, 1, 2, 3], 1),
    (4, [0], 5),
    (5, [0, 1], 5),
])
def test_containing_examples(n, members, expected):
    block = CoalitionSet.of(members)
    partitions = list(enumerate_partitions_containing(n, block))
    assert len(partitions) == expected
    assert all(block in partition for partition in partitions)


@pytest.mark.parametrize("n", range(1, 7))
def test_containing_counts(n):
    for mask in all_masks(n):
        block = CoalitionSet(mask)
        count = sum(1 for _ in enumerate_partitions_containing(n, block))
        assert count == bell_number(n - len(block))


def test_containing_rejects_empty():
    with pytest.raises(InvalidData):
        next(enumerate_partitions_containing(3, CoalitionSet(0)))


def test_random_partition_is_valid():
    spec = SystemSpec([1] * 6, 1.0)
    for seed in range(10):
        validate_partition(spec, random_partition(6, seed))


def test_combinatorics_helpers():
    assert submasks(0b101) == [0b001, 0b100]
    assert submasks(0b101, proper=False) == [0b001, 0b100, 0b101]
    sums = subset_sums([9, 7, 6, 5, 3])
    assert 16 in sums and 31 not in sums
    assert bell_number(0) == 1 and bell_number(10) == 115975
