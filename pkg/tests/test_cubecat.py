import itertools

import pytest

from hdts.cubecat import (CubeArrow, NEG, POS, arrow_compose, compose_chain,
                          enumerate_arrows, face, factor_arrow,
                          generator_kind, generators_into, identity_arrow,
                          symmetry)


def test_face_table_encoding():
    # inserting alpha at slot i shifts later slots down by one
    f = face(2, 0, 3)
    assert f.fhat == (1, NEG, 2)
    g = face(1, 1, 2)
    assert g.fhat == (POS, 1)


def test_face_vertex_action():
    f = face(2, 1, 3)
    assert f.apply_states((0, 1)) == (0, 1, 1)


def test_symmetry_is_involution():
    s = symmetry(1, 2)
    assert arrow_compose(s, s) == identity_arrow(2)
    assert s.apply_states((0, 1)) == (1, 0)


def test_compose_matches_vertex_semantics():
    for m, n, p in [(0, 1, 2), (1, 2, 3), (2, 2, 3), (1, 1, 2)]:
        for f in enumerate_arrows(m, n):
            for g in enumerate_arrows(n, p):
                gf = arrow_compose(g, f)
                for eps in itertools.product((0, 1), repeat=m):
                    assert gf.apply_states(eps) == g.apply_states(f.apply_states(eps))


def test_compose_dimension_mismatch():
    with pytest.raises(ValueError):
        arrow_compose(face(1, 0, 1), face(1, 0, 1))


def test_arrow_counts():
    # vertices of the n-cube: arrows [0] -> [n]
    assert len(enumerate_arrows(0, 2)) == 4
    # edges: choose the axis slot, a sign for the other: 2 * 2
    assert len(enumerate_arrows(1, 2)) == 4
    # symmetries of the square
    assert len(enumerate_arrows(2, 2)) == 2
    assert len(enumerate_arrows(3, 2)) == 0


def test_source_word_deletion_and_swap():
    assert face(1, 0, 2).source_word(("a", "b")) == ("b",)
    assert face(2, 1, 2).source_word(("a", "b")) == ("a",)
    assert symmetry(1, 2).source_word(("a", "b")) == ("b", "a")


def test_factor_arrow_roundtrip():
    for m, n in [(0, 0), (0, 2), (1, 2), (2, 2), (2, 3), (3, 3), (1, 3)]:
        for f in enumerate_arrows(m, n):
            factors = factor_arrow(f)
            assert compose_chain(factors, m) == f
            for g in factors:
                assert generator_kind(g)[0] in ("face", "sym")


def test_braid_relation_by_tables():
    s1, s2 = symmetry(1, 3), symmetry(2, 3)
    left = arrow_compose(s1, arrow_compose(s2, s1))
    right = arrow_compose(s2, arrow_compose(s1, s2))
    assert left == right


def test_generators_into_counts():
    assert len(generators_into(0)) == 0
    assert len(generators_into(1)) == 2
    assert len(generators_into(3)) == 8
