import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from burau4.blocks import (
    Block,
    block_road_decomposition,
    classify_block,
    is_normal_block,
    is_normal_braid,
    is_normal_braid_syllables,
)
from burau4.braid import PositiveBraid, delta_divides, minimal_form
from burau4.kernel import iter_minimal_forms

pos_words = st.lists(st.sampled_from([1, 2, 3]), max_size=14)


def decompose(word):
    s = minimal_form(word)
    return s, block_road_decomposition(s)


def test_no_blocks_when_exponents_large():
    s, d = decompose([1, 1, 2, 2, 3, 3, 2, 2])
    assert d.blocks == [] and [r.letters for r in d.roads] == [(0, 8)]


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_initial_two_block(n):
    s, d = decompose([1] * n + [2, 1, 1])
    assert d.to_json() == [
        {"kind": "block", "type": "2-block", "p": 1, "span": [0, n + 3], "class": "initial", "exponents": [n, 0, 2]},
        {"kind": "road", "span": [n + 3, n + 3]},
    ]


def test_three_block():
    s, d = decompose([2, 2, 2, 3, 2, 2])
    (b,) = d.blocks
    assert (b.kind, b.letters, b.exponents(s)) == ("3", (0, 6), (3, 2))


def test_classify_examples():
    s, d = decompose([1, 1, 2, 1, 1, 3])
    assert [b.cls for b in d.blocks] == ["initial"]
    s, d = decompose([1, 1, 3, 2, 1, 1])
    assert [b.cls for b in d.blocks] == ["singular"]
    s, d = decompose([1, 1, 3, 3, 2, 2, 3, 2, 2, 1])
    assert [b.cls for b in d.blocks] == ["generic"]
    assert classify_block(d.blocks[0], s) == "generic"


def test_normal_block_examples():
    # 2-block with a_p >= b_p + 1 and a_{p+1} = 2
    s = PositiveBraid.from_triples([(2, 0, 2), (3, 2, 1), (2, 0, 0)])
    blk = [b for b in block_road_decomposition(s).blocks if b.p == 2]
    assert [b.cls for b in blk] == ["generic"] and not is_normal_block(blk[0], s)
    s = PositiveBraid.from_triples([(2, 0, 2), (3, 2, 1), (3, 0, 0)])
    assert is_normal_block(block_road_decomposition(s).blocks[0], s)
    # 3-block with c_p = 3 and c_{p-1} >= 2
    s = PositiveBraid.from_triples([(1, 0, 2), (0, 1, 3)])
    (b,) = block_road_decomposition(s).blocks
    assert is_normal_block(b, s)
    # 3-block with c_{p-1} = 1 and a_{p-1} + 1 >= c_p
    s = PositiveBraid.from_triples([(2, 0, 1), (0, 1, 3)])
    blk = [b for b in block_road_decomposition(s).blocks if b.kind == "3"]
    assert blk and not is_normal_block(blk[0], s)


def test_initial_block_rejected():
    s, d = decompose([1, 1, 1, 2, 1, 1])
    with pytest.raises(ValueError):
        is_normal_block(d.blocks[0], s)


def test_normal_braid_examples():
    assert is_normal_braid(PositiveBraid(())).normal
    assert is_normal_braid(minimal_form([1, 1, 2, 2, 3, 3, 2, 2])).normal
    rep = is_normal_braid(minimal_form([1, 1, 2, 3, 2, 2]))
    assert not rep.normal and [b.kind for b in rep.abnormal_blocks] == ["3"]
    assert rep.to_json()["normal"] is False


@given(pos_words)
@settings(max_examples=150)
def test_decomposition_reassembles(w):
    s, d = decompose(w)
    spans = []
    for b, r in d.pieces:
        if b is not None:
            spans.append(b.letters)
        spans.append(r.letters)
    assert spans[0][0] == 0 and spans[-1][1] == s.length
    assert all(x[1] == y[0] for x, y in zip(spans, spans[1:]))
    for b in d.blocks:
        lo, hi = b.letters
        inner = s.word[lo:hi]
        if b.kind == "2":
            assert inner.count(2) == 1
        else:
            assert inner.count(3) == 1 and 1 not in inner


def _blocks_sweep(max_len):
    for w, _ in iter_minimal_forms(max_len):
        s = PositiveBraid.from_word(w)
        yield s, block_road_decomposition(s)


def test_structural_facts_small_sweep():
    for s, d in _blocks_sweep(9):
        for b in d.blocks:
            p = b.p
            if b.kind == "2" and s.b(p) == 0:
                assert p == 1
            if b.kind == "2" and b.cls != "initial":
                assert s.b(p + 1) == 0
            if b.kind == "3" and p > 3:
                assert s.c(p - 2) >= 2


def test_no_initial_and_singular_together():
    for s, d in _blocks_sweep(9):
        if delta_divides(s):
            continue
        classes = {b.cls for b in d.blocks}
        assert not {"initial", "singular"} <= classes


def test_readings_agree_away_from_the_ends():
    for s, d in _blocks_sweep(9):
        if s.n < 2 or delta_divides(s):
            continue
        opens = s.a(1) == 0 and s.b(1) == 1
        closes = any(b.kind == "3" and b.p == s.n for b in d.blocks)
        if not opens and not closes:
            assert is_normal_braid(s).normal == is_normal_braid_syllables(s)


def test_block_json_without_context():
    assert Block("2", 1, (0, 3)).to_json() == {"kind": "block", "type": "2-block", "p": 1, "span": [0, 3], "class": "generic"}
