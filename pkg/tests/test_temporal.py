import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from temporal_eca import engine
from temporal_eca.errors import IllFormed, InvalidWord
from temporal_eca.temporal import (bijective_subset, count_rules, enumerate_rules, from_partition,
                                   is_valid_word, parse, schedule, sign_triples)

from oracles import collapsed_acyclic, naive_valid, simulate_times, word_from_times


@pytest.mark.parametrize("n", range(3, 9))
def test_validity_matches_acyclicity(n):
    count = 0
    for t in itertools.product("<=>", repeat=n):
        w = "".join(t)
        ok = is_valid_word(w)
        assert ok == collapsed_acyclic(w), w
        count += ok
    assert count == count_rules(n) == 3 ** n - 2 ** (n + 1) + 2


@pytest.mark.parametrize("n", [3, 4, 5])
def test_validity_matches_time_assignment(n):
    for t in itertools.product("<=>", repeat=n):
        w = "".join(t)
        assert is_valid_word(w) == naive_valid(w), w


def test_counts():
    assert count_rules(3) == 13
    assert count_rules(4) == 51
    assert count_rules(10) == 57003
    assert sum(1 for _ in enumerate_rules(10)) == 57003


def test_parse_examples():
    with pytest.raises(IllFormed):
        parse("=<=")
    with pytest.raises(IllFormed):
        parse("≡<≡")
    assert parse("≡≡≡").is_synchronous
    assert parse("<≡>>").symbols == "<=>>"
    assert parse("<≡>>").pretty() == "<≡>>"
    for bad in ("<>", "<x>", "", "<=>?"):
        with pytest.raises(InvalidWord):
            parse(bad)


@pytest.mark.parametrize("word, expected", [
    ("<=>>", "(1,2|3|0)"), ("<><>", "(1,3|0,2)"), (">=><", "(0|1,2|3)"), ("===", "(0,1,2)"),
])
def test_schedule_examples(word, expected):
    assert str(schedule(word)) == expected


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_schedule_respects_word(n):
    for rule in enumerate_rules(n):
        idx = schedule(rule).layer_index()
        assert from_partition(schedule(rule)) == rule
        for i, s in enumerate(rule.symbols):
            a, b = idx[i], idx[(i + 1) % n]
            assert {"<": a > b, "=": a == b, ">": a < b}[s]


def test_enumeration_order_and_uniqueness():
    words = [r.symbols for r in enumerate_rules(4)]
    key = {"<": 0, "=": 1, ">": 2}
    assert words == sorted(words, key=lambda w: [key[c] for c in w])
    assert len(set(words)) == 51
    assert words.count("====") == 1


def test_bijective_subset():
    words = [r.symbols for r in bijective_subset(3)]
    assert len(words) == 6
    assert sum(1 for _ in bijective_subset(10)) == 1022
    assert all("=" not in w for w in words)


@pytest.mark.parametrize("layers, word", [
    ([[1], [0], [2]], "<><"), ([[0], [1], [2]], ">><"), ([[0, 1, 2, 3]], "===="),
])
def test_from_partition_examples(layers, word):
    assert from_partition(layers).symbols == word


def _random_times(rng, n):
    while True:
        times = [rng.randrange(n) for _ in range(n)]
        if is_valid_word(word_from_times(times)):
            return times


@settings(max_examples=200, deadline=None)
@given(st.integers(4, 7), st.sampled_from([57, 105]), st.randoms(use_true_random=False))
def test_same_signs_same_dynamics(n, eca, rng):
    # two time assignments with the same adjacent signs induce the same map
    times = _random_times(rng, n)
    word = word_from_times(times)
    order = sorted(set(times))
    stretched = [order.index(t) * 3 + 1 for t in times]
    assert word_from_times(stretched) == word
    other = list(schedule(word).layer_index())
    assert sign_triples(_layers(times)) == sign_triples(_layers(other))
    table = engine.state_map(eca, word).table
    for v in rng.sample(range(1 << n), min(16, 1 << n)):
        assert simulate_times(eca, times, v) == table[v]
        assert simulate_times(eca, stretched, v) == table[v]


def _layers(times):
    return [[i for i, t in enumerate(times) if t == s] for s in sorted(set(times))]


def test_from_partition_ignores_relabelling():
    rng = random.Random(5)
    for _ in range(50):
        n = rng.randrange(3, 8)
        times = _random_times(rng, n)
        shift = [2 * t + 7 for t in times]
        assert from_partition(_layers(times)) == from_partition(_layers(shift))
