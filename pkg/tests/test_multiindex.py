"""Count-vector enumeration, orbit sizes, and rank/unrank."""

import math

import pytest

from finex.errors import DomainError
from finex.multiindex import (
    compositions,
    num_compositions,
    orbit_sequences,
    orbit_size,
    rank,
    sequence_index,
    sequence_to_counts,
    sequences,
    unrank,
)


def test_compositions_two_outcomes():
    assert compositions(2, 2) == [(2, 0), (1, 1), (0, 2)]


def test_compositions_counts():
    assert len(compositions(2, 6)) == 21
    assert len(compositions(3, 6)) == 56
    assert num_compositions(2, 6) == 21
    assert num_compositions(3, 6) == 56


def test_compositions_strictly_descending():
    for r, d in [(0, 1), (1, 3), (4, 3), (5, 4), (3, 6)]:
        comps = compositions(r, d)
        assert len(comps) == num_compositions(r, d)
        assert all(a > b for a, b in zip(comps, comps[1:]))
        assert all(sum(n) == r and len(n) == d for n in comps)


def test_compositions_rejects_zero_outcomes():
    with pytest.raises(DomainError):
        compositions(2, 0)


def test_orbit_size_values():
    assert orbit_size((1, 1, 0, 0, 0, 0)) == 2
    assert orbit_size((2, 0, 0, 0, 0, 0)) == 1
    assert orbit_size((1, 1, 1, 0, 0, 0)) == 6


def test_orbit_size_large_exact():
    # 20 draws over 6 faces: must be exact, not floating point
    n = (4, 4, 3, 3, 3, 3)
    expected = math.factorial(20) // (
        math.factorial(4) ** 2 * math.factorial(3) ** 4
    )
    assert orbit_size(n) == expected


def test_orbits_partition_sequence_space():
    for d in range(1, 7):
        for r in range(0, 9):
            total = sum(orbit_size(n) for n in compositions(r, d))
            assert total == d**r


def test_sequence_to_counts():
    # outcomes 2, 3, 3 in 1-based labels are 1, 2, 2 in 0-based
    assert sequence_to_counts((1, 2, 2), 6) == (0, 1, 2, 0, 0, 0)
    assert sequence_to_counts((), 6) == (0, 0, 0, 0, 0, 0)
    assert sequence_to_counts((0, 0), 2) == (2, 0)


def test_sequence_to_counts_out_of_range():
    with pytest.raises(DomainError):
        sequence_to_counts((0, 2), 2)


def test_rank_first_element():
    assert rank((2, 0)) == 0
    assert unrank(2, 2, 2) == (0, 2)
    assert rank(unrank(13, 2, 6)) == 13


def test_rank_unrank_roundtrip():
    for d in range(1, 7):
        for r in range(0, 7):
            comps = compositions(r, d)
            for k, n in enumerate(comps):
                assert rank(n) == k
                assert unrank(k, r, d) == n


def test_unrank_out_of_range():
    with pytest.raises(DomainError):
        unrank(21, 2, 6)
    with pytest.raises(DomainError):
        unrank(-1, 2, 6)


def test_sequences_and_index():
    seqs = sequences(2, 2)
    assert seqs == [(0, 0), (0, 1), (1, 0), (1, 1)]
    for i, seq in enumerate(sequences(3, 3)):
        assert sequence_index(seq, 3) == i


def test_orbit_sequences():
    orbit = orbit_sequences((1, 1, 1))
    assert len(orbit) == 6
    assert len(set(orbit)) == 6
    assert all(sequence_to_counts(seq, 3) == (1, 1, 1) for seq in orbit)
    assert orbit_sequences((2, 0)) == [(0, 0)]
