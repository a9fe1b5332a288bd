import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from burau4.braid import (
    DELTA,
    BraidParseError,
    BudgetExceeded,
    PositiveBraid,
    Syllable,
    delta_divides,
    delta_divides_bfs,
    flip,
    garside_normal_form,
    isolated_sigma2_decomposition,
    minimal_form,
    minimal_word,
    parse_braid_word,
    positive_equivalent,
    rewrite_closure,
    s_subproducts,
    verify_minimal_constraints,
)
from burau4.laurent import burau_delta_power, burau_of_word

pos_words = st.lists(st.sampled_from([1, 2, 3]), max_size=9)
any_words = st.lists(st.sampled_from([1, 2, 3, -1, -2, -3]), max_size=8)


# ---------------------------------------------------------------------------
# parsing

def test_parse_examples():
    assert parse_braid_word("1 2 1").letters == (1, 2, 1)
    assert parse_braid_word("1 -2 3^2").letters == (1, -2, 3, 3)
    assert parse_braid_word("  ").letters == ()


@pytest.mark.parametrize("text,offset", [("4", 0), ("1 4", 2), ("1 2^0", 2), ("1 x", 2)])
def test_parse_errors_carry_offset(text, offset):
    with pytest.raises(BraidParseError) as err:
        parse_braid_word(text)
    assert err.value.offset == offset


@given(any_words)
def test_parse_round_trip(w):
    assert parse_braid_word(str(parse_braid_word(" ".join(map(str, w))))).letters == tuple(w)


# ---------------------------------------------------------------------------
# equivalence and minimal form

def test_positive_equivalent_examples():
    assert positive_equivalent([2, 1, 2], [1, 2, 1])
    assert positive_equivalent([1, 3], [3, 1])
    assert not positive_equivalent([1, 2], [2, 1])
    assert rewrite_closure([1, 2]) == {(1, 2)}


def test_positive_equivalent_rejects_inverses():
    with pytest.raises(ValueError):
        positive_equivalent([1, -2], [1])


def test_closure_budget():
    with pytest.raises(BudgetExceeded):
        rewrite_closure(list(DELTA) * 2, budget=10)


def test_minimal_form_examples():
    assert minimal_form([2, 1, 2]).syllables == (Syllable(1, 0, 1), Syllable(1, 0, 0))
    assert minimal_form([1, 3, 2, 1, 2]).word == (1, 1, 3, 2, 1)
    assert minimal_form([]).syllables == ()


def test_minimal_form_matches_bfs_small_sweep():
    for n in range(7):
        for w in itertools.product((1, 2, 3), repeat=n):
            assert minimal_word(w) == min(rewrite_closure(w))


@given(pos_words)
@settings(max_examples=80)
def test_minimal_form_invariants(w):
    m = minimal_form(w)
    assert m.length == len(w)
    assert minimal_form(m.word) == m
    assert positive_equivalent(m.word, w)
    assert verify_minimal_constraints(m) == []


def test_bfs_method_agrees():
    assert minimal_form([2, 3, 2, 1], method="bfs") == minimal_form([2, 3, 2, 1])


def test_constraint_violations():
    raw = PositiveBraid((Syllable(0, 0, 1), Syllable(1, 0, 1)))
    assert [v.clause for v in verify_minimal_constraints(raw)] == ["i"]
    raw = PositiveBraid((Syllable(0, 1, 1), Syllable(1, 1, 0)))
    assert [v.clause for v in verify_minimal_constraints(raw)] == ["ii"]
    assert verify_minimal_constraints(minimal_form([2, 1, 2])) == []


def test_json_round_trip():
    p = minimal_form([1, 3, 2, 2, 1])
    assert p.to_json() == [[1, 1, 2], [1, 0, 0]]
    assert PositiveBraid.from_json(p.to_json()) == p


# ---------------------------------------------------------------------------
# Delta and Garside

def test_delta_divides_examples():
    assert delta_divides(minimal_form(list(DELTA) + [2]))
    for n in range(7):
        assert not delta_divides(minimal_form([1] * n))
    for a in range(1, 4):
        assert delta_divides(minimal_form([1] * a + [2, 1, 3, 2, 1]))


def test_delta_divides_matches_bfs():
    for n in range(7, 9):
        for w in itertools.product((1, 2, 3), repeat=n):
            assert delta_divides(minimal_form(w)) == delta_divides_bfs(w)


def test_flip_swaps_ends():
    assert flip([1, 2, 3]) == (3, 2, 1)
    assert burau_of_word(DELTA) @ burau_of_word([1]) == burau_of_word([3]) @ burau_of_word(DELTA)


def test_garside_examples():
    g = garside_normal_form(parse_braid_word("1 2 3 1 2 1"))
    assert (g.k, g.tail.word) == (1, ())
    g = garside_normal_form(parse_braid_word("1"))
    assert (g.k, g.tail.word) == (0, (1,))
    g = garside_normal_form(parse_braid_word("-1"))
    assert g.k == -1
    assert g.tail == minimal_form([1, 2, 3, 1, 2])
    assert not delta_divides(g.tail)


@given(any_words)
@settings(max_examples=80)
def test_garside_reassembles(w):
    g = garside_normal_form(parse_braid_word(" ".join(map(str, w))))
    assert not delta_divides(g.tail)
    assert burau_delta_power(g.k) @ burau_of_word(g.tail.word) == burau_of_word(w)


@given(pos_words, st.integers(0, 2))
@settings(max_examples=40)
def test_garside_exponent_at_least_k(w, k):
    g = garside_normal_form(parse_braid_word(" ".join(map(str, list(DELTA) * k + w))))
    assert g.k >= k


# ---------------------------------------------------------------------------
# isolated sigma_2 pieces and s-subproducts

def test_isolated_examples():
    segs = isolated_sigma2_decomposition(minimal_form([1, 1, 2, 2, 3, 3, 2, 2]))
    assert [s.kind for s in segs] == ["non-isolated"]
    segs = isolated_sigma2_decomposition(minimal_form([1, 3, 2, 1, 1, 2, 3, 3, 2, 2]))
    assert [(s.kind, s.type) for s in segs] == [("isolated", "I"), ("non-isolated", None)]
    segs = isolated_sigma2_decomposition(minimal_form([1, 2, 1, 3, 2]))
    assert [(s.kind, s.type) for s in segs] == [("isolated", "III")]


@given(pos_words)
def test_isolated_segments_partition(w):
    m = minimal_form(w)
    segs = isolated_sigma2_decomposition(m)
    cuts = [s.letters for s in segs]
    assert all(a[1] == b[0] for a, b in zip(cuts, cuts[1:]))
    if cuts:
        assert cuts[0][0] == 0 and cuts[-1][1] == m.length


def test_s_subproducts_examples():
    got = [(P.word, s) for P, s, _ in s_subproducts(minimal_form([1, 2]))]
    assert got == [((), "2"), ((1,), "13"), ((1, 2), "2")]
    got = [(P.word, s) for P, s, _ in s_subproducts(PositiveBraid.from_triples([(1, 1, 2)]))]
    assert got == [((), "2"), ((1, 3), "13"), ((1, 3, 2, 2), "2")]
    assert [(P.word, s) for P, s, _ in s_subproducts(PositiveBraid(()))] == [((), "2")]


@given(pos_words)
def test_s_subproducts_are_increasing_prefixes(w):
    m = minimal_form(w)
    lens = [P.length for P, _, _ in s_subproducts(m)]
    assert lens == sorted(lens)
    assert all(m.word[: P.length] == P.word for P, _, _ in s_subproducts(m))
