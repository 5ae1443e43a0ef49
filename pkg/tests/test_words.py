import itertools
import random

import pytest

from randcurve.words import (Alphabet, BallSpec, CyclicWord, Word, WordError,
                             alphabet_letters, ball_size, are_conjugate,
                             conjugates_in_ball, cyclic_reduce, letter_counts,
                             least_rotation, reduce, satisfies_no_cancellation,
                             sphere_size)


def W(s, rank=2):
    return Word.from_string(s, rank)


def C(s, rank=2):
    return CyclicWord.from_string(s, rank)


def all_cyclic_classes(max_len, rank=2):
    letters = alphabet_letters(rank)
    seen = set()
    for L in range(1, max_len + 1):
        for tup in itertools.product(letters, repeat=L):
            if any(tup[i] == -tup[(i + 1) % L] for i in range(L)):
                continue
            k = least_rotation(tup)
            canon = tup[k:] + tup[:k]
            if canon not in seen:
                seen.add(canon)
                yield CyclicWord(canon, rank)


def random_reduced(rng, length, rank=2):
    letters = alphabet_letters(rank)
    out = []
    for _ in range(length):
        out.append(rng.choice([x for x in letters if not out or x != -out[-1]]))
    return tuple(out)


def test_parse_format_roundtrip():
    w = W("aBcA", 3)
    assert w.letters == (1, -2, 3, -1)
    assert str(w) == "aBcA"
    with pytest.raises(WordError):
        W("a1b")
    with pytest.raises(WordError):
        W("abc", rank=2)  # letter outside alphabet


def test_alphabet():
    al = Alphabet(2)
    assert al.letters == (1, 2, -1, -2)
    assert al.inverse(1) == -1
    with pytest.raises(WordError):
        Alphabet(0)
    with pytest.raises(WordError):
        Alphabet(27)


def test_reduce_examples():
    assert str(reduce(W("aAb"))) == "b"
    assert str(reduce(W(""))) == ""
    assert str(reduce(W("abBa"))) == "aa"


def test_reduce_idempotent_random():
    rng = random.Random(0)
    for _ in range(300):
        w = Word(tuple(rng.choice(alphabet_letters(2)) for _ in range(rng.randrange(15))), 2)
        r = reduce(w)
        assert r.is_reduced()
        assert reduce(r).letters == r.letters


def test_cyclic_reduce_examples():
    assert str(cyclic_reduce(W("baB"))) == "a"
    assert str(cyclic_reduce(W("ab"))) == "ab"
    assert str(cyclic_reduce(W("Baab"))) == "aa"


def test_cyclic_reduce_conjugation_invariant():
    rng = random.Random(1)
    for _ in range(200):
        w = Word(tuple(rng.choice(alphabet_letters(2)) for _ in range(rng.randrange(1, 10))), 2)
        u = Word(random_reduced(rng, rng.randrange(6)), 2)
        conj = u.concat(w).concat(u.inverse())
        assert cyclic_reduce(conj).letters == cyclic_reduce(w).letters
        assert are_conjugate(w, conj)


def test_canonical_rotation_invariant():
    for c in itertools.islice(all_cyclic_classes(6), 300):
        w = c.letters
        for i in range(len(w)):
            assert cyclic_reduce(Word(w[i:] + w[:i], 2)).letters == w


def test_cyclic_word_validation():
    with pytest.raises(WordError):
        CyclicWord((1, -1), 2)  # not cyclically reduced
    with pytest.raises(WordError):
        CyclicWord((2, 1), 2)  # not least rotation


def test_primitive_root():
    root, k = C("abab").primitive_root()
    assert str(root) == "ab" and k == 2
    root, k = C("aab").primitive_root()
    assert k == 1
    with pytest.raises(WordError):
        CyclicWord((), 2).primitive_root()


def test_ball_and_sphere_sizes():
    assert sphere_size(BallSpec(2, 2)) == 12
    assert ball_size(BallSpec(2, 2)) == 17
    assert ball_size(BallSpec(1, 3)) == 7
    assert sphere_size(BallSpec(2, 0)) == 1
    # cross-check against direct enumeration of reduced words, rank 2
    for n in range(0, 5):
        count = 1
        for k in range(1, n + 1):
            count += sum(1 for w in itertools.product(alphabet_letters(2), repeat=k)
                         if all(w[i] != -w[i + 1] for i in range(k - 1)))
        assert ball_size(BallSpec(2, n)) == count


def test_letter_counts():
    lc = letter_counts(C("abAb"))
    assert lc.counts == {1: 1, -1: 1, 2: 2}
    assert lc.exponent_sums == {1: 0, 2: 2}
    lc = letter_counts(C("aaa"))
    assert lc.counts == {1: 3}
    assert sum(lc.counts.values()) == 3


def test_no_cancellation_examples():
    c = C("aa")
    assert satisfies_no_cancellation(W("b"), c) is True
    assert satisfies_no_cancellation(W("A"), c) is False
    assert satisfies_no_cancellation(W("ba"), c) is False


def test_no_cancellation_length_formula_exhaustive():
    # spec invariant: exhaustive over |w| <= 5 and ||c|| <= 4
    words_by_len = {0: [()]}
    letters = alphabet_letters(2)
    for L in range(1, 6):
        words_by_len[L] = [w + (x,) for w in words_by_len[L - 1]
                           for x in letters if not w or x != -w[-1]]
    classes = list(all_cyclic_classes(4))
    for c in classes:
        for L, ws in words_by_len.items():
            for wl in ws:
                w = Word(wl, 2)
                if satisfies_no_cancellation(w, c):
                    full = w.concat(Word(c.letters, 2)).concat(w.inverse())
                    assert len(reduce(full)) == 2 * L + len(c)


def _conjugates_formula(c: CyclicWord, n: int) -> int:
    """Independent count: every conjugate has a unique normal form u p u^-1
    with p a rotation and the last letter of u avoiding cancellation."""
    L = len(c)
    if n < L:
        return 0
    r = c.rank
    total = 0
    for rot in set(c.rotations()):
        bad = {-rot[0], rot[-1]}
        for m in range((n - L) // 2 + 1):
            if m == 0:
                total += 1
            else:
                total += (2 * r - len(bad)) * (2 * r - 1) ** (m - 1)
    return total


def test_conjugates_in_ball_examples():
    assert conjugates_in_ball(C("a"), 3) == 3
    assert conjugates_in_ball(C("a"), 0) == 0
    with pytest.raises(WordError):
        conjugates_in_ball(cyclic_reduce(W("")), 3)


def test_conjugates_in_ball_vs_formula():
    for c in all_cyclic_classes(4):
        for n in range(0, 9):
            assert conjugates_in_ball(c, n) == _conjugates_formula(c, n)


def test_conjugates_in_ball_lemma_bound_small():
    for c in all_cyclic_classes(4):
        for n in range(len(c), 9):
            bound = n * ball_size(BallSpec(2, (n - len(c)) // 2))
            assert conjugates_in_ball(c, n) <= bound
