import numpy as np
import pytest

from qci.gates import Identity, SignedWord, identity_holds, parse_token
from qci.miner import RawIdentitySet, count_table, cumulative_counts, mine


@pytest.fixture(scope="module")
def raw2():
    return mine(2)


def test_length_one_and_two_counts(raw2):
    assert raw2.counts_by_length == {1: 47, 2: 625}
    assert raw2.rejected == 0


def test_length_three_count(raw3):
    assert raw3.counts_by_length[3] == 15068
    assert cumulative_counts(raw3) == (47, 672, 15740)


def test_count_table(raw3):
    table = count_table(raw3)
    assert list(table.index) == ["Length 1", "Length <=2", "Length <=3"]
    assert list(table["count"]) == [47, 625, 15068]
    assert table.loc["Length <=3", "cumulative"] == 15740


def test_half_turn_matches_present(raw2):
    found = set(raw2.iter_identities(1))
    for lhs, rhs in [("X4", "P4"), ("P4", "Z4"), ("Y4", "X4"), ("H", "H")]:
        assert Identity(parse_token(lhs), SignedWord.of(rhs)) in found
    assert Identity(parse_token("X"), SignedWord.of("Y")) not in found


def test_mined_identities_hold_exactly(raw2):
    for identity in raw2.iter_identities(2):
        assert identity.origin_length == 2
        assert identity_holds(identity)


def test_rows_sorted_by_word_then_lhs(raw2):
    rows = raw2.matches[2]
    keys = [tuple(r[1:]) + (r[0],) for r in rows.tolist()]
    assert keys == sorted(keys)


def test_from_identities_restores_layout(raw2):
    rebuilt = RawIdentitySet.from_identities(raw2.identities)
    for n in raw2.lengths:
        assert np.array_equal(rebuilt.matches[n], raw2.matches[n])


def test_from_identities_rejects_signed():
    with pytest.raises(ValueError):
        RawIdentitySet.from_identities([Identity(parse_token("Y3"), SignedWord.of("- H X"))])


def test_parallel_mining_is_deterministic(raw2):
    parallel = mine(2, workers=2)
    for n in raw2.lengths:
        assert np.array_equal(parallel.matches[n], raw2.matches[n])


def test_bad_arguments():
    with pytest.raises(ValueError):
        mine(0)
    with pytest.raises(ValueError):
        mine(1, eps=0)


def test_loose_tolerance_is_caught_by_exact_check():
    loose = mine(1, eps=0.8)
    assert loose.rejected > 0
    assert loose.counts_by_length == {1: 47}


@pytest.mark.slow
def test_length_four_count():
    raw = mine(4, workers=4)
    assert raw.counts_by_length[4] == 384349
    assert cumulative_counts(raw)[-1] == 400089
