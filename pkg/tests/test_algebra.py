import math
import random

import pytest

from temporal_eca.algebra import (StabilizerChain, bijective_rule_maps, classify, contains_alternating,
                                  cycles, group_order, inv, minimal_generating_triples, mul,
                                  multiplicity_profile, permutation_info, rule_group)
from temporal_eca.engine import StateMap, rule_tables, state_map
from temporal_eca.errors import DegreeTooLarge, NonBijectiveGenerator
from temporal_eca.synthesis import builtin
from temporal_eca.temporal import enumerate_rules

from oracles import group_closure_order


def test_permutation_info_examples():
    info = permutation_info(StateMap.identity(3))
    assert info.bijective and info.parity == "even" and info.cycle_type == (1,) * 8
    info = permutation_info(state_map(57, "<><"))
    assert info.parity == "odd" and info.cycle_type == (8,)
    assert not permutation_info(state_map(57, "<=>>")).bijective


@pytest.mark.parametrize("n", [3, 4, 5])
def test_parity_is_multiplicative(n):
    rng = random.Random(n)
    words, tables = bijective_rule_maps(57, n)
    sign = {"even": 1, "odd": -1}
    for _ in range(500):
        a, b = rng.choice(tables), rng.choice(tables)
        ab = b[a]
        pa, pb, pab = (permutation_info(x).parity for x in (a, b, ab))
        assert sign[pab] == sign[pa] * sign[pb]


def test_parity_against_cycle_count():
    rng = random.Random(0)
    for _ in range(100):
        p = list(range(16))
        rng.shuffle(p)
        info = permutation_info(p)
        ncyc = len(cycles(p))
        assert (info.parity == "even") == ((16 - ncyc) % 2 == 0)


@pytest.mark.parametrize("n", range(4, 9))
def test_no_odd_eq_free_rules_for_57(n):
    words, tables = bijective_rule_maps(57, n, "eq_free")
    assert len(words) == 2 ** n - 2
    assert all(permutation_info(t).parity == "even" for t in tables)


def test_odd_rule_exists_at_3():
    words, tables = bijective_rule_maps(57, 3)
    assert any(permutation_info(t).parity == "odd" for t in tables)


def test_multiplicity_profile_examples():
    prof = multiplicity_profile(state_map(57, "<=>>"))
    assert prof.at == {0: 2, 1: 12, 2: 2}
    assert prof.image_size == 14
    prof = multiplicity_profile(builtin("MUL_2_BY_2", 4).table)
    assert prof.sharp == {0: 7, 1: 1, 2: 2, 3: 2, 4: 1, 6: 2, 9: 1}
    assert prof.pair_sum == 6
    prof = multiplicity_profile(StateMap.identity(5))
    assert prof.at == {1: 32}


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_eq_rules_leave_holes(n):
    words = [r.symbols for r in enumerate_rules(n) if "=" in r.symbols]
    for t in rule_tables(57, n, words):
        prof = multiplicity_profile(t)
        assert prof.at.get(0, 0) >= 1
        assert sum(k * a for k, a in prof.at.items()) == 1 << n
        assert prof.at.get(0, 0) == (1 << n) - prof.image_size


@pytest.mark.parametrize("eca, n", [(105, 3), (105, 4), (57, 3), (54, 3), (150, 4), (60, 3)])
def test_group_order_matches_closure(eca, n):
    words, tables = bijective_rule_maps(eca, n, "eq_free")
    gens = [tuple(int(x) for x in t) for t in tables]
    assert group_order(gens).order == group_closure_order(gens)


def test_group_order_examples():
    assert rule_group(105, 3, "eq_free").order == 24
    assert rule_group(105, 4, "eq_free").order == 48
    assert rule_group(105, 5, "eq_free").order == 1920
    assert rule_group(105, 6, "eq_free").order == 11520
    assert rule_group(57, 3, "bijective").order == math.factorial(8)
    assert rule_group(57, 3, "eq_free").order == 336


def test_single_cycle_generator():
    for q in (2, 3, 5, 7):
        p = list(range(10))
        for i in range(q):
            p[i] = (i + 1) % q
        assert group_order([p]).order == q


def test_alternating_and_classification():
    rep = rule_group(57, 4)
    assert rep.generator_count == 14
    assert rep.order == math.factorial(16) // 2
    assert rep.classification == "alternating" and rep.contains_alternating
    assert not contains_alternating(list(bijective_rule_maps(105, 4, "eq_free")[1]))
    assert not contains_alternating([list(range(8))])
    assert classify(math.factorial(8), 8) == "symmetric"


def test_order_divides_factorial():
    for eca in (57, 105, 54, 60, 150):
        words, tables = bijective_rule_maps(eca, 3)
        if words:
            assert math.factorial(8) % rule_group(eca, 3).order == 0


def test_generating_triples():
    assert minimal_generating_triples(57, 3) is not None
    triple = minimal_generating_triples(57, 4)
    words, tables = bijective_rule_maps(57, 4)
    gens = [tables[words.index(w)] for w in triple]
    assert contains_alternating(gens)
    assert minimal_generating_triples(105, 4, generator_set="eq_free") is None
    assert minimal_generating_triples(204, 3) is None


def test_group_errors():
    with pytest.raises(NonBijectiveGenerator):
        group_order([state_map(57, "<=>>")])
    with pytest.raises(DegreeTooLarge):
        rule_group(57, 8)


def test_stabilizer_chain_membership():
    gens = [tuple(int(x) for x in t) for t in bijective_rule_maps(105, 4, "eq_free")[1]]
    chain = StabilizerChain(gens, 16)
    for g in gens:
        assert g in chain
        assert inv(g) in chain
    assert mul(gens[0], gens[1]) in chain
    swap = list(range(16))
    swap[0], swap[1] = 1, 0
    assert tuple(swap) not in chain
