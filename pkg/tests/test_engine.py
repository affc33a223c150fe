import random

import numpy as np
import pytest

from temporal_eca import engine
from temporal_eca.engine import (Configuration, StateMap, apply_sequence, compose, iterate, orbit,
                                 parse_config, rule_tables, sequence_map, state_map, sweep)
from temporal_eca.errors import DimensionMismatch, DomainError
from temporal_eca.temporal import bijective_subset, enumerate_rules, schedule

from oracles import simulate_times


def test_configuration_encoding():
    c = Configuration.from_bits("1000")
    assert c.value == 8 and c.cells == (1, 0, 0, 0) and str(c) == "1000"
    assert Configuration.from_bits([0, 1, 1]).value == 3
    assert parse_config("5", 4) == Configuration(4, 5)
    assert parse_config("0101") == Configuration(4, 5)
    with pytest.raises(DomainError):
        parse_config("12")
    with pytest.raises(DomainError):
        Configuration(3, 8)


def test_sweep_examples():
    assert str(sweep(57, "<><>", parse_config("1000"))) == "1110"
    assert str(sweep(57, "<><", parse_config("000"))) == "011"
    # one sweep of "<>=": cell 1 first, then cells 0 and 2 together
    assert str(sweep(57, "<>=", parse_config("000"))) == "011"
    # 101 is the trace value after the first three rules of the INC sequence
    assert str(apply_sequence(57, ["<><", "<>>", "<>="], parse_config("000"))) == "101"
    for v in range(16):
        assert sweep(204, "<=>>", Configuration(4, v)).value == v


def test_iterate_and_sequence_examples():
    c = parse_config("1000")
    assert iterate(57, "<><>", c, 0) == c
    assert str(iterate(57, "<><>", c, 1)) == "1110"
    inc = ["<><", "<>>", "<>=", "=><", ">><"]
    mul = ["<<>", "><>", "=<>", ">=<", ">><"]
    assert str(apply_sequence(57, inc, parse_config("000"))) == "001"
    assert str(apply_sequence(57, mul, parse_config("010"))) == "110"
    assert apply_sequence(57, [], c) == c


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        sweep(57, "<><", parse_config("1000"))
    with pytest.raises(DimensionMismatch):
        compose(state_map(57, "<><"), state_map(57, "<><>"))


def test_state_map_examples():
    assert state_map(57, "<><").tolist() == [3, 5, 4, 6, 7, 2, 1, 0]
    assert state_map(204, "<=>>") == StateMap.identity(4)
    # every cell sees 000 and rule 57 maps that to 1
    sync = state_map(57, "====")
    assert sync(0) == 0b1111


@pytest.mark.parametrize("n", [3, 4, 5, 6])
@pytest.mark.parametrize("eca", [57, 105, 30, 110])
def test_tables_match_time_simulation(n, eca):
    tables = rule_tables(eca, n)
    for rule, table in zip(enumerate_rules(n), tables):
        times = schedule(rule).layer_index()
        expected = [simulate_times(eca, times, v) for v in range(1 << n)]
        assert table.tolist() == expected, rule.symbols


def test_compose_and_iterate_agree():
    rng = random.Random(3)
    m = state_map(57, "<=>>")
    mm = compose(m, m)
    for _ in range(50):
        v = rng.randrange(16)
        assert mm(v) == iterate(57, "<=>>", Configuration(4, v), 2).value
    assert compose(StateMap.identity(4), m) == m
    inc = ["<><", "<>>", "<>=", "=><", ">><"]
    assert sequence_map(57, inc, 3).tolist() == [1, 2, 3, 4, 5, 6, 7, 0]


def test_orbit_examples():
    info = orbit(StateMap.identity(3), 5)
    assert (info.preperiod, info.period, info.visited) == (0, 1, frozenset({5}))
    info = orbit(state_map(57, "<><"), 0)
    assert info.period == 8 and info.preperiod == 0 and len(info.visited) == 8


@pytest.mark.parametrize("n", [3, 4, 5])
def test_orbit_invariants(n):
    for rule in list(enumerate_rules(n))[:20]:
        m = state_map(57, rule)
        for v in range(1 << n):
            info = orbit(m, v)
            assert len(info.visited) == info.preperiod + info.period
            base = iterate(57, rule, Configuration(n, v), info.preperiod)
            for k in (1, 2, 3):
                assert iterate(57, rule, Configuration(n, v), info.preperiod + k * info.period) == base


@pytest.mark.parametrize("n", range(3, 9))
@pytest.mark.parametrize("eca", [57, 105])
def test_eq_free_rules_are_bijective(n, eca):
    words = [r.symbols for r in bijective_subset(n)]
    for t in rule_tables(eca, n, words):
        assert np.unique(t).size == 1 << n


@pytest.mark.parametrize("n", range(4, 9))
def test_eq_rules_are_not_bijective_for_57(n):
    words = [r.symbols for r in enumerate_rules(n) if "=" in r.symbols]
    for t in rule_tables(57, n, words):
        assert np.unique(t).size < 1 << n


def test_thread_count_does_not_change_tables():
    a = rule_tables(57, 6, threads=1)
    b = rule_tables(57, 6, threads=4)
    assert np.array_equal(a, b)


def test_layer_step_touches_only_given_cells():
    out = engine.layer_step(57, [1, 2], parse_config("0001"))
    assert str(out) == "0101"
