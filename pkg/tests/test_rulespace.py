import pytest
from hypothesis import given, strategies as st

from temporal_eca.errors import DomainError
from temporal_eca.rulespace import (WolframRule, as_rule, complement, enumerate_families,
                                    family_of, local_update, mirror)

codes = st.integers(0, 255)


@given(codes)
def test_bits_round_trip(code):
    r = WolframRule(code)
    assert WolframRule.from_bits(r.bits) == r
    assert sum(b << k for k, b in enumerate(r.bits)) == code


@pytest.mark.parametrize("bad", [-1, 256, 1000])
def test_code_out_of_range(bad):
    with pytest.raises(DomainError):
        WolframRule(bad)


def test_local_update_examples():
    assert local_update(57, 1, 1, 1) == 0
    for c in (0, 1):
        assert local_update(57, 0, c, 1) == c
    for l in (0, 1):
        for c in (0, 1):
            for r in (0, 1):
                assert local_update(204, l, c, r) == c


@given(codes, st.integers(0, 7))
def test_mirror_definition(code, k):
    a, b, c = (k >> 2) & 1, (k >> 1) & 1, k & 1
    assert local_update(mirror(code), a, b, c) == local_update(code, c, b, a)


@given(codes, st.integers(0, 7))
def test_complement_definition(code, k):
    assert complement(code).bits[k] == 1 - WolframRule(code).bits[7 - k]


@given(codes)
def test_symmetries_are_commuting_involutions(code):
    assert mirror(mirror(code)).code == code
    assert complement(complement(code)).code == code
    assert mirror(complement(code)) == complement(mirror(code))


def test_symmetry_examples():
    assert mirror(2).code == 16
    assert mirror(204).code == 204
    assert complement(0).code == 255
    assert complement(57).code == 99


@pytest.mark.parametrize("code, members", [
    (57, {57, 99}), (30, {30, 135, 86, 149}), (105, {105}), (2, {2, 16, 191, 247}),
])
def test_family_of(code, members):
    fam = family_of(code)
    assert fam.members == members
    assert fam.canonical.code == min(members)


def test_families_partition_all_codes():
    fams = enumerate_families()
    assert len(fams) == 88
    seen = [c for f in fams for c in f.members]
    assert sorted(seen) == list(range(256))
    assert [f.canonical.code for f in fams] == sorted(f.canonical.code for f in fams)
    assert all(len(f.members) in (1, 2, 4) for f in fams)
    singles = {f.canonical.code for f in fams if len(f.members) == 1}
    assert singles == {23, 51, 77, 105, 150, 178, 204, 232}


@given(codes)
def test_family_closed_under_symmetries(code):
    fam = family_of(code)
    for m in fam.members:
        assert mirror(m).code in fam.members
        assert complement(m).code in fam.members


def test_as_rule_accepts_both():
    assert as_rule(57) == as_rule(WolframRule(57))
