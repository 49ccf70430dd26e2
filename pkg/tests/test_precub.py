import pytest

from hdts.cubecat import enumerate_arrows, face, symmetry
from hdts.precub import (apply_arrow, arrow_cell_id, check_hda,
                         colimit_precub, compose_precub, construct_precub,
                         coproduct_precub, cylinder_precub,
                         find_precub_isomorphism, hom_set_precub,
                         identity_precub_map, is_cofibration_precub,
                         is_precub_isomorphism, make_precub, make_precub_map,
                         precub_boundary, precub_cube, precub_free,
                         precub_terminal, product_precub, pushout_precub,
                         quotient_precub, sh_reflect, validate_presheaf)


def boundary_inclusion(word, sigma=None):
    b = precub_boundary(word, sigma)
    c = precub_cube(word, sigma)
    return make_precub_map(b, c, {(n, x): x for n in range(b.dim + 1)
                                  for x in b.cells_at(n)})


def test_cube_cell_counts():
    c = precub_cube(("a", "b"))
    assert [len(c.cells_at(n)) for n in range(3)] == [4, 4, 2]
    assert validate_presheaf(c)


def test_cube_cell_counts_match_arrow_enumeration():
    for n in range(4):
        word = tuple("abc"[:n])
        c = precub_cube(word, ("a", "b", "c"))
        for m in range(n + 1):
            assert len(c.cells_at(m)) == len(enumerate_arrows(m, n))


def test_boundary_drops_interior():
    b = precub_boundary(("a", "b"))
    assert [len(b.cells_at(n)) for n in range(3)] == [4, 4, 0]
    assert validate_presheaf(b)


def test_free_on_singleton():
    k = precub_free({"x": "x"}, dim=2)
    assert [len(k.cells_at(n)) for n in range(3)] == [1, 1, 1]
    assert validate_presheaf(k)


def test_free_label_rules():
    k = precub_free({"u": "a", "v": "b"}, dim=3)
    assert validate_presheaf(k)
    x = ("u", "v", "u")
    assert k.word(3, x) == ("a", "b", "a")
    assert k.d(3, 2, 0, x) == ("u", "u")
    assert k.s(3, 1, x) == ("v", "u", "u")


def test_apply_arrow_face_on_square():
    c = precub_cube(("a", "b"))
    top = arrow_cell_id(enumerate_arrows(2, 2)[0])  # identity 2-cell
    # identity cell maps through delta_1^0 to the face labelled (b)
    dim, cell = apply_arrow(c, face(1, 0, 2), top)
    assert dim == 1
    assert c.word(1, cell) == ("b",)


def test_apply_arrow_identity():
    c = precub_cube(("a",))
    from hdts.cubecat import identity_arrow
    for x in c.cells_at(1):
        assert apply_arrow(c, identity_arrow(1), x) == (1, x)


def test_apply_arrow_agrees_with_tables_on_composites():
    # coherence: applying an arrow must equal chaining generator tables
    from hdts.cubecat import arrow_compose
    c = precub_cube(("a", "b", "c"))
    f = arrow_compose(symmetry(1, 3), face(2, 1, 3))
    for x in c.cells_at(3):
        dim, cell = apply_arrow(c, f, x)
        step = c.s(3, 1, x)
        expect = c.d(3, 2, 1, step)
        assert (dim, cell) == (2, expect)


def test_validate_detects_tampered_symmetry():
    c = precub_cube(("a", "b"))
    two = list(c.cells_at(2))
    syms = dict(c.syms)
    # point s_1 of one 2-cell at itself instead of its swap
    syms[(2, 1, two[0])] = two[0]
    broken = make_precub(c.sigma, c.dim,
                         {n: c.cells_at(n) for n in range(c.dim + 1)},
                         c.labels, c.faces, syms)
    v = validate_presheaf(broken)
    assert not v


def test_zero_dimensional_valid():
    k = make_precub(("a",), 0, {0: ["p", "q"]}, {}, {}, {})
    assert validate_presheaf(k)


def test_cylinder_of_edge():
    k = precub_cube(("x",))
    cyl, g0, g1, sig = cylinder_precub(k)
    assert len(cyl.cells_at(0)) == 2
    assert len(cyl.cells_at(1)) == 2
    assert validate_presheaf(cyl)
    assert compose_precub(sig, g0).cmap == identity_precub_map(k).cmap
    assert compose_precub(sig, g1).cmap == identity_precub_map(k).cmap


def test_cylinder_is_product_with_free_interval():
    k = precub_cube(("x",))
    cyl, *_ = cylinder_precub(k)
    vv = precub_free({("x", 0): "x", ("x", 1): "x"}, sigma=("x",), dim=k.dim)
    apex, _, _ = product_precub(vv, k)
    iso = find_precub_isomorphism(cyl, apex)
    assert iso is not None


def test_product_with_terminal():
    k = precub_cube(("a", "b"))
    one = precub_terminal(k.sigma, dim=k.dim)
    apex, _, _ = product_precub(k, one)
    assert find_precub_isomorphism(apex, k) is not None


def test_product_mismatched_words_is_discrete():
    sig = ("x", "y")
    a = precub_cube(("x",), sig)
    b = precub_cube(("y",), sig)
    apex, _, _ = product_precub(a, b)
    assert len(apex.cells_at(0)) == 4
    assert len(apex.cells_at(1)) == 0


def test_pushout_double_square():
    incl = boundary_inclusion(("x", "y"))
    po = pushout_precub(incl, incl)
    # shared boundary, and each copy contributes its two interior cells
    assert [len(po.apex.cells_at(n)) for n in range(3)] == [4, 4, 4]
    assert validate_presheaf(po.apex)


def test_coequalizer_loop():
    k = precub_cube(("x",))
    pts = k.cells_at(0)
    pt = precub_cube((), ("x",), dim=k.dim)
    m0 = make_precub_map(pt, k, {(0, pt.cells_at(0)[0]): pts[0]})
    m1 = make_precub_map(pt, k, {(0, pt.cells_at(0)[0]): pts[1]})
    co = colimit_precub([pt, k], [(0, 1, m0), (0, 1, m1)])
    assert len(co.apex.cells_at(0)) == 1
    assert len(co.apex.cells_at(1)) == 1


def test_coproduct_points():
    pt = precub_cube((), ("a",))
    co = coproduct_precub(pt, pt)
    assert len(co.apex.cells_at(0)) == 2


def test_cofibration_checks():
    incl = boundary_inclusion(("a", "b"))
    assert is_cofibration_precub(incl)
    k = precub_cube(("x",))
    co = coproduct_precub(k, k)
    fold = co.induced([identity_precub_map(k), identity_precub_map(k)], k)
    assert not is_cofibration_precub(fold)


def test_check_hda():
    incl = boundary_inclusion(("x", "y"))
    po = pushout_precub(incl, incl)
    v = check_hda(po.apex)
    assert not v
    assert v.witness[0] == 2
    assert check_hda(precub_cube(("x", "y")))
    assert check_hda(precub_free({"x": "x"}, dim=3))


def test_sh_reflect_double_square():
    incl = boundary_inclusion(("x", "y"))
    po = pushout_precub(incl, incl)
    sh, unit = sh_reflect(po.apex)
    assert check_hda(sh)
    assert find_precub_isomorphism(sh, precub_cube(("x", "y"))) is not None
    # fixed point: reflecting again is the identity
    again, unit2 = sh_reflect(sh)
    assert again == sh and unit2.cmap == identity_precub_map(sh).cmap


def test_sh_reflect_merges_symmetric_partners():
    # merging one 2-cell pair must drag the symmetric pair along
    incl = boundary_inclusion(("x", "y"))
    po = pushout_precub(incl, incl)
    sh, unit = sh_reflect(po.apex)
    assert len(sh.cells_at(2)) == 2


def test_hom_set_precub_yoneda():
    # maps from the standard cube correspond to cells of that dimension
    k = precub_cube(("x", "y"))
    c1 = precub_cube(("x",), k.sigma, dim=k.dim)
    homs = hom_set_precub(c1, k)
    x_edges = [x for x in k.cells_at(1) if k.word(1, x) == ("x",)]
    assert len(homs) == len(x_edges)


def test_quotient_label_clash():
    sig = ("x", "y")
    k = coproduct_precub(precub_cube(("x",), sig),
                         precub_cube(("y",), sig)).apex
    edges = [(1, x) for x in k.cells_at(1)]
    with pytest.raises(ValueError):
        quotient_precub(k, [(1, edges[0][1], edges[1][1])])
