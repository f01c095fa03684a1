import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fsalg.free_words import (
    IDENTITY,
    GeneratorSet,
    ReducedWord,
    ResourceCapError,
    WordSyntaxError,
    ball,
    count_words,
    cyclic_coset_scan,
    enumerate_words,
    format_word,
    inverse,
    parse_word,
    reduce_concat,
    word_length,
)

W = parse_word


def naive_reduce(letters):
    stack = []
    for a in letters:
        if stack and stack[-1] == -a:
            stack.pop()
        else:
            stack.append(a)
    return tuple(stack)


letters = st.lists(st.integers(1, 3).flatmap(lambda g: st.sampled_from([g, -g])), max_size=12)
words = letters.map(ReducedWord.from_letters)


def test_concat_examples():
    assert reduce_concat(W("x1"), W("x1^-1")) == IDENTITY
    assert reduce_concat(W("x1.x2"), W("x2^-1.x1")) == W("x1^2")
    a, b = W("x1.x2.x1^-1"), W("x1.x2^-1.x1^-1")
    assert reduce_concat(a, b) == IDENTITY
    assert naive_reduce(a.letters() + b.letters()) == ()


def test_inverse_examples():
    assert inverse(IDENTITY) == IDENTITY
    assert inverse(W("x1.x2^-1")) == W("x2.x1^-1")
    assert inverse(W("x3^2")) == W("x3^-2")


def test_length_examples():
    assert word_length(IDENTITY) == 0
    assert word_length(W("x1^2.x2")) == 3
    prod = reduce_concat(W("x1.x2"), W("x2^-1.x3"))
    assert word_length(prod) == len(naive_reduce((1, 2, -2, 3))) == 2


def test_invariants_rejected():
    with pytest.raises(ValueError):
        ReducedWord(((1, 1), (1, 2)))
    with pytest.raises(ValueError):
        ReducedWord(((1, 0),))
    with pytest.raises(ValueError):
        ReducedWord(((0, 1),))


def test_text_roundtrip_and_errors():
    for text in ["e", "x1", "x1.x2^-1.x1^3", "x12^-7"]:
        assert format_word(W(text)) == text
    with pytest.raises(WordSyntaxError) as err:
        W("x1.x1")
    assert err.value.column == 4
    with pytest.raises(WordSyntaxError) as err:
        W("x1.y2")
    assert err.value.column == 4
    with pytest.raises(WordSyntaxError):
        W("x1^0")
    with pytest.raises(WordSyntaxError):
        W("")
    assert parse_word("x1.x1^-1.x2", auto_reduce=True) == W("x2")
    assert parse_word("x1^0", auto_reduce=True) == IDENTITY


@given(words, words, words)
def test_associativity(a, b, c):
    assert (a * b) * c == a * (b * c)


@settings(max_examples=300)
@given(letters)
def test_matches_letter_stack(ls):
    assert ReducedWord.from_letters(ls).letters() == naive_reduce(ls)


def test_letter_stack_oracle_bulk(rng):
    for _ in range(10_000):
        n = int(rng.integers(0, 16))
        ls = [int(g) * int(s) for g, s in zip(rng.integers(1, 4, n), rng.choice([-1, 1], n))]
        assert ReducedWord.from_letters(ls).letters() == naive_reduce(ls)


@given(words, words)
def test_group_laws(a, b):
    assert a * IDENTITY == a == IDENTITY * a
    assert a * a.inverse() == IDENTITY
    assert a.inverse().inverse() == a
    assert len(a) == len(a.inverse())
    assert len(a * b) <= len(a) + len(b)


def brute_words(k, n):
    alphabet = [g * s for g in range(1, k + 1) for s in (1, -1)]
    found = {naive_reduce(t) for t in itertools.product(alphabet, repeat=n)}
    return {t for t in found if len(t) == n}


def test_enumeration_small():
    assert enumerate_words(2, 0) == [IDENTITY]
    assert {w.letters() for w in enumerate_words(2, 1)} == {(1,), (-1,), (2,), (-2,)}
    ws = enumerate_words(2, 2)
    assert len(ws) == 12 == len(set(ws))
    assert {w.letters() for w in ws} == brute_words(2, 2)


def test_enumeration_order_is_lexicographic():
    key = {1: 0, -1: 1, 2: 2, -2: 3}
    ws = enumerate_words(2, 3)
    assert [w.letters() for w in ws] == sorted((w.letters() for w in ws), key=lambda t: [key[a] for a in t])


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("n", range(7))
def test_count_matches_enumeration(k, n):
    assert count_words(k, n) == len(enumerate_words(k, n))


def test_count_examples():
    assert count_words(2, 1) == 4
    assert count_words(2, 3) == 36 == len(brute_words(2, 3))
    assert count_words(1, 5) == 2
    with pytest.raises(OverflowError):
        count_words(10, 40)


def test_caps():
    with pytest.raises(ResourceCapError):
        enumerate_words(3, 12, cap=1000)
    with pytest.raises(ResourceCapError):
        ball(3, 12, cap=1000)
    with pytest.raises(ResourceCapError):
        cyclic_coset_scan(GeneratorSet.first(5), 3, 20, cap=1000)


def test_generator_set():
    S = GeneratorSet((3, 1, 2, 1))
    assert S.indices == (1, 2, 3)
    assert S.contains(W("x2^-1")) and not S.contains(W("x4")) and not S.contains(W("x1^2"))
    assert not GeneratorSet((1,), symmetric=False).contains(W("x1^-1"))
    with pytest.raises(ValueError):
        GeneratorSet(())


def brute_scan(S, L, N, k):
    best = 0
    gs = [w for n in range(L + 1) for w in enumerate_words(k, n)]
    for g in gs:
        for w in gs[1:]:
            hits = 0
            for n in range(1, N + 1):
                p = g * (w ** n)
                if len(p) == 1 and S.contains(p):
                    hits += 1
            best = max(best, hits)
    return best


def test_scan_against_brute_force():
    S = GeneratorSet.first(2)
    res = cyclic_coset_scan(S, 2, 6)
    assert res.max_hits == brute_scan(S, 2, 6, 3)
    g, w = res.witness
    hits = sum(1 for n in range(1, 7) if S.contains(g * w ** n))
    assert hits == res.max_hits


def test_scan_examples():
    assert cyclic_coset_scan(GeneratorSet.first(5), 1, 10).max_hits <= 2
    assert cyclic_coset_scan(GeneratorSet.first(3), 2, 20).max_hits <= 2
    S = GeneratorSet((1,))
    assert sum(S.contains(W("x1") ** n) for n in range(1, 11)) == 1


def test_scan_monotone():
    S = GeneratorSet.first(2)
    by_n = [cyclic_coset_scan(S, 2, n).max_hits for n in (1, 2, 5, 10)]
    assert by_n == sorted(by_n)
    by_l = [cyclic_coset_scan(S, l, 6).max_hits for l in (1, 2, 3)]
    assert by_l == sorted(by_l)
