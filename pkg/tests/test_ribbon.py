import itertools

import pytest

from randcurve.ribbon import (PermRep, RibbonGraph, RibbonError, SurfaceSignature,
                              boundary_words, components, cover, elevations,
                              faces, genus2_boundary1, pair_of_pants,
                              project_elevation, punctured_torus, signature,
                              surface)
from randcurve.words import CyclicWord


def test_signatures_of_presets():
    assert signature(punctured_torus()) == SurfaceSignature(1, 1)
    assert signature(pair_of_pants()) == SurfaceSignature(0, 3)
    assert signature(genus2_boundary1()) == SurfaceSignature(2, 1)
    annulus = RibbonGraph.rose((1, -1), 1)
    assert signature(annulus) == SurfaceSignature(0, 2)
    assert signature(punctured_torus()).euler_characteristic == -1


def test_rose_validation():
    with pytest.raises(RibbonError):
        RibbonGraph.rose("abA")  # missing B
    g = RibbonGraph.rose("abAB")
    assert g.rank == 2 and g.dart_count == 4 and g.vertex_count == 1


def test_boundary_word_of_punctured_torus():
    (word,) = boundary_words(punctured_torus())
    # one boundary of length 4, the commutator class up to rotation/inversion
    c = CyclicWord.from_string("abAB", 2)
    rots = [word[i:] + word[:i] for i in range(4)]
    inv = tuple(-x for x in reversed(word))
    rots += [inv[i:] + inv[:i] for i in range(4)]
    assert len(word) == 4 and c.letters in rots


def test_serialization_roundtrip():
    for g in (punctured_torus(), pair_of_pants(), genus2_boundary1()):
        h = RibbonGraph.from_text(g.to_text())
        assert h.nxt == g.nxt and h.pair == g.pair and h.label == g.label
        assert signature(h) == signature(g)


def test_perm_rep_basics():
    phi = PermRep(2, ((1, 0), (0, 1)))
    assert phi.perm(1) == (1, 0)
    assert phi.perm(-1) == (1, 0)
    assert phi.act(0, 1) == 1
    assert phi.perm_of((1, 2)) == (1, 0)
    assert phi.is_transitive
    assert phi.cycle_notation(1) == "(1 2)"
    assert phi.cycle_notation(2) == "()"
    id2 = PermRep(2, ((0, 1), (0, 1)))
    assert not id2.is_transitive
    assert id2.orbit_count() == 2


def test_closed_relation():
    # S_2 is abelian, so every 4-tuple satisfies the genus-2 relation
    phi = PermRep(2, ((1, 0), (0, 1), (1, 0), (1, 0)))
    assert phi.satisfies_closed_relation(2)
    tup3 = ((1, 2, 0), (0, 1, 2), (0, 1, 2), (0, 1, 2))
    assert PermRep(3, tup3).satisfies_closed_relation(2)
    with pytest.raises(RibbonError):
        PermRep(2, ((1, 0),)).satisfies_closed_relation(2)


def test_cover_spec_example():
    # d=2, phi(a) = (1 2), phi(b) = id over the punctured torus
    pt = punctured_torus()
    phi = PermRep(2, ((1, 0), (0, 1)))
    cov = cover(pt, phi)
    sig = signature(cov)
    assert cov.vertex_count == 2 and cov.edge_count == 4
    assert (sig.genus, sig.boundary_count) == (1, 2)
    assert sig.euler_characteristic == -2


def test_identity_cover_is_copy():
    pt = punctured_torus()
    phi = PermRep(1, ((0,), (0,)))
    cov = cover(pt, phi)
    assert cov.nxt == pt.nxt and cov.pair == pt.pair and cov.label == pt.label


def test_nontransitive_cover_components():
    pt = punctured_torus()
    phi = PermRep(2, ((0, 1), (0, 1)))
    cov = cover(pt, phi)
    assert components(cov) == phi.orbit_count() == 2
    with pytest.raises(RibbonError):
        signature(cov)


def test_cover_euler_multiplicative():
    pt = punctured_torus()
    perms3 = list(itertools.permutations(range(3)))
    for pa in perms3:
        for pb in perms3:
            cov = cover(pt, PermRep(3, (pa, pb)))
            assert cov.vertex_count - cov.edge_count == 3 * (-1)


def test_cover_boundaries_are_elevations_of_base_boundary():
    pt = punctured_torus()
    base = boundary_words(pt)[0]
    rots = [base[i:] + base[:i] for i in range(len(base))]
    perms = list(itertools.permutations(range(3)))
    for pa, pb in itertools.islice(itertools.product(perms, perms), 0, None, 7):
        cov = cover(pt, PermRep(3, (pa, pb)))
        total = 0
        for f in faces(cov):
            w = tuple(cov.label[d] for d in f)
            k, rem = divmod(len(w), len(base))
            assert rem == 0
            assert any(w == r * k for r in rots)
            total += k
        assert total == 3


def test_elevations_examples():
    pt = punctured_torus()
    a = CyclicWord.from_string("a", 2)
    b = CyclicWord.from_string("b", 2)
    aab = CyclicWord.from_string("aab", 2)
    swap = PermRep(2, ((1, 0), (0, 1)))
    els = elevations(a, swap, pt)
    assert len(els) == 1 and els[0].winding == 2
    els = elevations(b, swap, pt)
    assert len(els) == 2 and all(e.winding == 1 for e in els)
    els = elevations(aab, swap, pt)  # phi(aab) = id
    assert len(els) == 2 and all(e.winding == 1 for e in els)
    assert sum(e.winding for e in els) == 2
    for e in els:
        assert project_elevation(e) == aab.letters * e.winding


def test_surface_preset_lookup():
    assert surface("punctured-torus").rank == 2
    with pytest.raises(RibbonError):
        surface("klein-bottle")
