"""Acceptance suite: one test per criterion, summarised by the conftest hook."""
import itertools
import random

import pytest

from props import extension_law_sweep, extension_proposition_sweep

from burau4.braid import (
    DELTA,
    PositiveBraid,
    delta_divides,
    minimal_form,
    minimal_word,
    rewrite_closure,
    verify_minimal_constraints,
)
from burau4.kernel import (
    check_kernel,
    classify_braid,
    exglobal_family,
    iter_minimal_forms,
    multiple_leading_rows,
    verify_certificate,
    verify_theorem_sweep,
)
from burau4.laurent import BurauMatrix, LaurentPoly, burau_delta_power, burau_generator, burau_of_word, reduce_mod
from burau4.paths import admissible_weighted_count, distinguished_partner, enumerate_paths, path_weight, weighted_count

PAIRS = [(r, s) for r in (1, 2, 3) for s in (1, 2, 3)]


def mat(rows):
    return BurauMatrix([[LaurentPoly(e) for e in row] for row in rows])


def test_c01_generators_and_relations(criterion):
    q, one, mq = {1: 1}, {0: 1}, {1: -1}
    want = {
        1: mat([[q, {}, {}], [mq, one, {}], [{}, {}, one]]),
        2: mat([[one, one, {}], [{}, q, {}], [{}, mq, one]]),
        3: mat([[one, {}, {}], [{}, one, one], [{}, {}, q]]),
    }
    exact = all(burau_generator(i) == want[i] for i in (1, 2, 3))
    inverses = all((burau_generator(i, True) @ burau_generator(i)).is_identity() for i in (1, 2, 3))
    rels = [((1, 2, 1), (2, 1, 2)), ((2, 3, 2), (3, 2, 3)), ((1, 3), (3, 1))]
    artin = all(burau_of_word(a) == burau_of_word(b) for a, b in rels)
    ok = exact and inverses and artin
    criterion(1, ok, f"generators exact={exact} inverses={inverses} relations={artin}")
    assert ok


def _delta_word(k):
    if k >= 0:
        return DELTA * k
    return tuple(-x for x in reversed(DELTA)) * -k


def test_c02_delta_powers(criterion):
    bad = [k for k in range(-6, 7) if burau_delta_power(k) != burau_of_word(_delta_word(k))]
    criterion(2, not bad, f"|k|<=6 mismatches={bad}")
    assert not bad


@pytest.mark.slow
def test_c03_minimal_form_oracle(criterion):
    n = mismatch = violated = 0
    for L in range(10):
        for w in itertools.product((1, 2, 3), repeat=L):
            n += 1
            if minimal_word(w) != min(rewrite_closure(w)):
                mismatch += 1
            if verify_minimal_constraints(minimal_form(w)):
                violated += 1
    ok = mismatch == 0 and violated == 0
    criterion(3, ok, f"words={n} oracle mismatches={mismatch} constraint violations={violated}")
    assert ok


@pytest.fixture(scope="module")
def forms10():
    return [(PositiveBraid.from_word(w), m) for w, m in iter_minimal_forms(10)]


@pytest.mark.slow
def test_c04_path_count_oracle(criterion, forms10):
    bad = [(P.word, r, s) for P, m in forms10 for r, s in PAIRS if weighted_count(P, r, s) != m.entry(r, s)]
    criterion(4, not bad, f"minimal forms={len(forms10)} mismatches={len(bad)}")
    assert not bad


@pytest.mark.slow
def test_c05_admissible_refinement(criterion, forms10):
    bad = [(P.word, r, s) for P, m in forms10 for r, s in PAIRS
           if admissible_weighted_count(P, r, s) != m.entry(r, s)]
    pairs = broken = 0
    for P, _ in forms10:
        for r, s in PAIRS:
            for x in enumerate_paths(P, r, s):
                got = distinguished_partner(x)
                if got is None:
                    continue
                y = got[1]
                pairs += 1
                back = distinguished_partner(y)
                cancels = (path_weight(x).poly() + path_weight(y).poly()).is_zero()
                if y.vertices == x.vertices or not cancels or back is None or back[1].vertices != x.vertices:
                    broken += 1
    ok = not bad and broken == 0
    criterion(5, ok, f"admissible mismatches={len(bad)} paired paths={pairs} involution failures={broken}")
    assert ok


@pytest.mark.slow
def test_c06_extension_laws(criterion):
    checks, fails, _ = extension_proposition_sweep(10, corrected=False)
    lchecks, lfails, _ = extension_law_sweep(10)
    total = sum(fails.values()) + sum(lfails.values())
    by_clause = {str(k): v for k, v in fails.items()}
    by_clause.update({f"lemma.{k}": v for k, v in lfails.items()})
    by_clause = dict(sorted(by_clause.items()))
    criterion(6, total == 0,
              f"proposition checks={sum(checks.values())} lemma checks={sum(lchecks.values())} fails={total} {by_clause}")
    assert total == 0, by_clause


@pytest.fixture(scope="module")
def sweep12():
    return verify_theorem_sweep(12)


@pytest.mark.slow
def test_c07_normal_braids(criterion):
    st = verify_theorem_sweep(12, weak=False, syllable_reading=True)
    normal = sum(c["normal"] for c in st.counts.values())
    criterion(7, not st.failures, f"normal braids={normal} failures={len(st.failures)}")
    assert not st.failures


def _corpus_families():
    for c in range(2, 9):
        for k in range(c + 2):
            yield (2,) * c + (3, 2, 2) + (3, 3, 2, 2) * k + (1,)
            yield (1,) + (2,) * c + (3, 2, 2) + (3, 3, 2, 2) * k + (3, 1)
            yield (1,) + (2,) * c + (3, 2, 2) + (1, 3, 2, 2) * k + (1, 3)
    for a in range(2, 8):
        for b in range(1, a):
            for k in range(a + 2):
                yield (3,) + (1,) * a + (3,) * b + (2, 1, 1) + (2, 2, 1, 1) * k + (2, 3)
                yield (3,) + (1,) * a + (3,) * b + (2, 1, 1) + (2, 2, 3, 3) * k + (2, 1)


def _random_corpus(rng, count):
    for _ in range(count):
        L = rng.randint(13, 22)
        w = []
        while len(w) < L:
            w += [rng.choice([1, 2, 3])] * rng.choice([1, 1, 2, 2, 2, 3])
        yield tuple(w)


@pytest.mark.slow
def test_c08_weakly_normal_braids(criterion, sweep12):
    swept = sum(c["weakly_normal"] for c in sweep12.counts.values())
    checked = failed = 0
    words = list(_corpus_families()) + list(_random_corpus(random.Random(2026), 4000))
    for w in words:
        s = minimal_form(w)
        if delta_divides(s) or classify_braid(s) == "neither":
            continue
        checked += 1
        M = burau_of_word(s.word)
        if not (multiple_leading_rows(M, 5) and multiple_leading_rows(M, 7)):
            failed += 1
    ok = not sweep12.failures and failed == 0
    criterion(8, ok, f"sweep weakly normal={swept} sweep failures={len(sweep12.failures)} "
                     f"corpus checked={checked} corpus failures={failed}")
    assert ok


def test_c09_family(criterion):
    wrong = []
    for n in (3, 5, 7):
        for m in range(1, n + 1):
            rep = exglobal_family(n, m)
            critical = 2 * m == n + 1
            if rep.entry_22.is_zero() != critical:
                wrong.append((n, m, "zero (2,2)" if rep.entry_22.is_zero() else "nonzero (2,2)"))
            lead = [x for x in rep.row2_leading if x is not None]
            if critical:
                if not lead or rep.row2_leading[0] is None or rep.row2_leading[0][1] != (-1) ** (m + 1):
                    wrong.append((n, m, "(2,1) sign"))
            elif [abs(c) for _, c in lead].count(1) < 2:
                wrong.append((n, m, "row 2 leading"))
            if not rep.delta_power_free:
                wrong.append((n, m, "Delta power"))
    criterion(9, not wrong, f"deviations={wrong}")
    assert not wrong


@pytest.mark.slow
def test_c10_normal_fraction_trend(criterion, sweep12):
    frac = {L: f for L, f in sweep12.normal_fraction.items() if 6 <= L <= 12}
    seq = [frac[L] for L in sorted(frac)]
    ok = all(a <= b for a, b in zip(seq, seq[1:]))
    shown = " ".join(f"L{L}={f:.4f}" for L, f in sorted(frac.items()))
    criterion(10, ok, f"normal fraction {shown}")
    assert ok


@pytest.mark.slow
def test_c11_kernel_fuzz(criterion):
    rng = random.Random(2026)
    unsound = false_trivial = 0
    status = {"trivial": 0, "not_in_kernel": 0, "unknown": 0}
    for _ in range(100_000):
        w = [rng.choice([1, 2, 3, -1, -2, -3]) for _ in range(rng.randint(0, 16))]
        v = check_kernel(w)
        status[v.status] += 1
        if not verify_certificate(v, w):
            unsound += 1
        if v.status == "trivial" and not reduce_mod(burau_of_word(w), 5).is_identity():
            false_trivial += 1
    ok = unsound == 0 and false_trivial == 0
    criterion(11, ok, f"words=100000 {status} unverified={unsound} false trivial={false_trivial}")
    assert ok
