import math
import random

import pytest

from randcurve.covers import (Partition, hall_count,
                              hook_degree, mednykh_count, partitions,
                              simple_lifting_degree, subgroup_class_count,
                              subgroup_count_by_enumeration,
                              count_transitive_reps, transitive_reps)
from randcurve.intersect import EdgePath, self_intersection, spiraling
from randcurve.ribbon import punctured_torus
from randcurve.words import CyclicWord, Word, alphabet_letters, cyclic_reduce

PT = punctured_torus()


def C(s):
    return CyclicWord.from_string(s, 2)


def test_partitions():
    assert len(partitions(5)) == 7
    assert Partition((3, 1, 1)).size == 5
    with pytest.raises(ValueError):
        Partition((1, 2))


def test_hook_degrees():
    assert hook_degree(Partition((3,))) == 1
    assert hook_degree(Partition((2, 1))) == 2
    assert hook_degree(Partition((2, 2))) == 2
    for d in range(1, 9):
        assert sum(hook_degree(lam) ** 2 for lam in partitions(d)) == math.factorial(d)
        for lam in partitions(d):
            assert math.factorial(d) % hook_degree(lam) == 0


def test_hall_values():
    assert [hall_count(2, d) for d in range(1, 6)] == [1, 3, 13, 71, 461]
    assert hall_count(3, 1) == 1
    with pytest.raises(ValueError):
        hall_count(1, 2)


def test_hall_vs_enumeration():
    for d in range(1, 5):
        assert subgroup_count_by_enumeration(2, d) == hall_count(2, d)
    assert subgroup_count_by_enumeration(3, 3) == hall_count(3, 3)


def test_transitive_counts():
    assert count_transitive_reps(2, 1) == 1
    assert count_transitive_reps(2, 2) == 3
    reps = list(transitive_reps(2, 2))
    assert all(r.is_transitive for r in reps)


def test_mednykh_values_and_enumeration():
    assert mednykh_count(2, 1) == 1
    assert mednykh_count(2, 2) == 15  # = 2^4 - 1 nonzero classes in H^1(S_2; Z/2)
    assert subgroup_count_by_enumeration(4, 2, closed_genus=2) == 15
    with pytest.raises(ValueError):
        mednykh_count(1, 2)


def test_subgroup_class_count_small():
    # classes <= subgroups, equality at d = 1, 2
    for d in (1, 2):
        assert subgroup_class_count(2, d) == hall_count(2, d)
    assert subgroup_class_count(2, 3) <= hall_count(2, 3)


# degrees frozen after exhaustive-search cross-validation
DEGREES = {
    "a": 1, "ab": 1, "aab": 1, "aabab": 1,
    "aa": 2, "aabb": 2, "abab": 2, "abaB": 2,
    "aaa": 3, "aabaB": 3, "aabbab": 3,
    "Baaaba": 4, "aabbaabb": 4,
}


@pytest.mark.parametrize("word,deg", sorted(DEGREES.items()))
def test_simple_lifting_degree_values(word, deg):
    res = simple_lifting_degree(C(word), PT, d_max=6)
    assert res.degree == deg
    assert res.witness is not None and res.witness.is_transitive
    assert res.elevation_index is not None


def test_degree_search_matches_exhaustive():
    rng = random.Random(31)
    letters = alphabet_letters(2)
    for _ in range(25):
        c = cyclic_reduce(Word(tuple(rng.choice(letters) for _ in range(rng.randrange(1, 8))), 2))
        if len(c) == 0:
            continue
        fast = simple_lifting_degree(c, PT, d_max=3)
        full = simple_lifting_degree(c, PT, d_max=3, exhaustive=True)
        assert fast.degree == full.degree, c


def test_degree_one_iff_simple():
    rng = random.Random(32)
    letters = alphabet_letters(2)
    for _ in range(25):
        c = cyclic_reduce(Word(tuple(rng.choice(letters) for _ in range(rng.randrange(1, 7))), 2))
        if len(c) == 0:
            continue
        res = simple_lifting_degree(c, PT, d_max=4)
        simple = self_intersection(EdgePath.from_word(c, PT)) == 0
        assert (res.degree == 1) == simple


def test_degree_invariant_under_conjugation_and_inversion():
    for w in ("aabb", "abaB", "aaa"):
        c = C(w)
        base = simple_lifting_degree(c, PT, d_max=6).degree
        assert simple_lifting_degree(c.inverse(), PT, d_max=6).degree == base
        conj = cyclic_reduce(Word.from_string("b" + w + "B", 2))
        assert simple_lifting_degree(conj, PT, d_max=6).degree == base


def test_degree_bounds():
    for w, deg in DEGREES.items():
        i = self_intersection(EdgePath.from_word(C(w), PT))
        assert deg <= 5 * i + 5
        c = C(w)
        root = c.primitive_root()[0].letters
        sp = max(spiraling(c, CyclicWord((j,), 2), PT)
                 for j in (1, 2) if root not in ((j,), (-j,)))
        assert deg >= sp


def test_not_found_result():
    res = simple_lifting_degree(C("aabbaabb"), PT, d_max=3)
    assert not res.found and res.degree is None and res.d_max == 3


def test_witness_elevation_is_simple():
    from randcurve.ribbon import elevations

    for w in ("aabb", "aa", "aabbab"):
        c = C(w)
        res = simple_lifting_degree(c, PT, d_max=6)
        els = elevations(c, res.witness, PT)
        e = els[res.elevation_index]
        assert self_intersection(EdgePath(e.cover, e.darts)) == 0
