import pytest

from hdts.core import (action_only, boundary, cube, double, identity_map,
                       interval, is_cubical, is_isomorphism, make_hdts,
                       make_map, pure_transition, state_only, terminal, tr,
                       validate)
from hdts.cubecat import face, symmetry
from hdts.ops import (arrows_isomorphic, colimit, coproduct, coreflect_cubical,
                      cubify, enumerate_cube_maps, find_isomorphism, hom_set,
                      is_isomorphic, pair_into_product, product, pushout,
                      realize_arrow)


def test_product_interval_times_edge():
    sig = ("x",)
    v = interval(sig, dim=3)
    c = cube(("x",), sig)
    apex, p1, p2 = product(v, c)
    assert len(apex.states) == 2
    assert len(apex.actions) == 2
    assert len(apex.transitions_of_arity(1)) == 2
    assert apex.max_arity == 1
    assert validate(apex)


def test_product_with_terminal_is_identity_up_to_iso():
    sig = ("a", "b")
    x = cube(("a", "b"), sig)
    one = terminal(sig, dim=3)
    apex, p1, _ = product(x, one)
    assert is_isomorphic(apex, x)


def test_product_disjoint_labels_is_discrete():
    sig = ("x", "y")
    a = cube(("x",), sig)
    b = cube(("y",), sig)
    apex, _, _ = product(a, b)
    assert len(apex.states) == 4
    assert not apex.actions and not apex.transitions


def test_product_projections_and_pairing():
    sig = ("x",)
    a = cube(("x",), sig)
    apex, p1, p2 = product(a, a)
    diag = pair_into_product(apex, identity_map(a), identity_map(a))
    assert all(p1.push(t) in a.tset for t in apex.transitions)
    assert diag.cod == apex


def test_pushout_shared_action_gives_double():
    sig = ("x",)
    c = cube(("x",), sig)
    x_only = action_only(sig, [("x", "x")])
    into = make_map(x_only, c, {}, {"x": ("x", 1)})
    po = pushout(into, into)
    assert len(po.apex.states) == 4
    assert len(po.apex.actions) == 1
    assert len(po.apex.transitions) == 2
    assert is_isomorphic(po.apex, double("x"))


def test_coproduct_of_points():
    pt = cube((), ("a",))
    co = coproduct(pt, pt)
    assert len(co.apex.states) == 2


def test_pushout_of_cube_along_boundary_is_cube():
    sig = ("a", "b")
    b = boundary(("a", "b"), sig)
    c = cube(("a", "b"), sig)
    incl = make_map(b, c, {s: s for s in b.states},
                    {a: a for a in b.action_ids})
    po = pushout(incl, incl)
    assert is_isomorphic(po.apex, c)


def test_colimit_cocone_and_induced():
    sig = ("x",)
    c = cube(("x",), sig)
    co = coproduct(c, c)
    fold = co.induced([identity_map(c), identity_map(c)], c)
    assert all(fold.push(t) in c.tset for t in co.apex.transitions)


def test_colimits_of_cubical_are_cubical():
    sig = ("x", "y")
    fixtures = [
        coproduct(cube(("x",), sig), cube(("y",), sig)).apex,
        pushout(make_map(boundary(("x", "y"), sig), cube(("x", "y"), sig),
                         {s: s for s in boundary(("x", "y"), sig).states},
                         {a: a for a in boundary(("x", "y"), sig).action_ids}),
                identity_map(boundary(("x", "y"), sig))).apex,
    ]
    for apex in fixtures:
        assert is_cubical(apex)


def test_hom_count_examples():
    sig = ("x",)
    assert len(hom_set(cube((), sig), double("x", sig))) == 4
    assert len(hom_set(cube(("x",), sig), double("x", sig))) == 2
    assert hom_set(cube(("x",), sig), cube((), sig)) == []


def test_enumerate_cube_maps_small():
    sig = ("x",)
    c = cube(("x",), sig)
    maps = enumerate_cube_maps(c)
    words = [w for w, _ in maps]
    assert words.count(()) == 2
    assert words.count(("x",)) == 1
    b = boundary(("x", "y"))
    maps = enumerate_cube_maps(b)
    assert sum(1 for w, _ in maps if len(w) == 1) == 4
    assert sum(1 for w, _ in maps if len(w) == 2) == 0


def test_enumerate_cube_maps_beyond_arity_is_empty():
    c = cube(("x",))
    assert all(len(w) <= 1 for w, _ in enumerate_cube_maps(c, n_max=3))


def test_cube_maps_of_square_include_symmetry():
    c = cube(("x", "y"))
    maps = enumerate_cube_maps(c)
    assert sum(1 for w, _ in maps if len(w) == 2) == 2
    assert {w for w, _ in maps if len(w) == 2} == {("x", "y"), ("y", "x")}


def test_coreflect_pure_transition():
    p = pure_transition(("a", "b"))
    sub, incl = coreflect_cubical(p)
    assert len(sub.states) == 2 and not sub.actions and not sub.transitions


def test_coreflect_fixes_cubical():
    for x in [boundary(("x", "y")), cube(("a", "b")), double("x")]:
        sub, _ = coreflect_cubical(x)
        assert sub == x
        again, _ = coreflect_cubical(sub)
        assert again == sub


def test_realize_arrow_face():
    f = realize_arrow(face(1, 0, 2), ("b",), ("a", "b"))
    assert f.on_state((0,)) == (0, 0)
    assert f.on_state((1,)) == (0, 1)
    assert f.on_action(("b", 1)) == ("b", 2)


def test_realize_arrow_label_incompatible():
    with pytest.raises(ValueError):
        realize_arrow(face(1, 0, 2), ("a",), ("a", "b"))


def test_realize_arrow_functorial():
    from hdts.cubecat import arrow_compose, enumerate_arrows
    from hdts.core import compose
    word3 = ("a", "b", "a")
    for g in enumerate_arrows(2, 3):
        wg = g.source_word(word3)
        for f in enumerate_arrows(1, 2):
            wf = f.source_word(wg)
            lhs = realize_arrow(arrow_compose(g, f), wf, word3, ("a", "b"))
            rhs = compose(realize_arrow(g, wg, word3, ("a", "b")),
                          realize_arrow(f, wf, wg, ("a", "b")))
            assert lhs == rhs


def test_cubify_cube_is_identity():
    for word in [(), ("x",), ("x", "y")]:
        c = cube(word, ("x", "y"))
        apex, counit = cubify(c)
        assert is_isomorphic(apex, c)
        assert is_isomorphism(counit)


def test_cubify_boundary_splits_actions():
    b = boundary(("x", "y"))
    apex, counit = cubify(b)
    assert len(apex.actions) == 4
    assert len(apex.states) == 4
    assert not is_isomorphism(counit)


def test_cubify_double_is_two_edges():
    d = double("x")
    apex, _ = cubify(d)
    assert len(apex.states) == 4
    assert len(apex.actions) == 2
    co = coproduct(cube(("x",)), cube(("x",)))
    assert is_isomorphic(apex, co.apex)


def test_find_isomorphism_and_arrows():
    # distinct labels leave only the identity; equal labels add the swap
    assert len(find_isomorphism(cube(("x", "y")), cube(("x", "y")),
                                limit=None)) == 1
    assert len(find_isomorphism(cube(("x", "x")), cube(("x", "x")),
                                limit=None)) == 2
    c = cube(("x", "y"), ("x", "y"))
    b = boundary(("x", "y"))
    incl = make_map(b, c, {s: s for s in b.states},
                    {a: a for a in b.action_ids})
    assert arrows_isomorphic(incl, incl)
    assert not arrows_isomorphic(incl, identity_map(c))
