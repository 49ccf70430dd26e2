from hdts.core import boundary, cube, double, is_cofibration_hdts, is_cubical
from hdts.ops import coproduct, cubify, is_isomorphic, product
from hdts.precub import (check_hda, precub_boundary, precub_cube, precub_free,
                         make_precub_map, pushout_precub, sh_reflect,
                         cylinder_precub)
from hdts.realize import (adjunction_check, counit_map, nerve,
                          nerve_with_table, realize, realize_map,
                          realize_of_free, realize_with_cocone)
from hdts.core import clique, interval


def bnd_incl(word, sigma=None):
    b = precub_boundary(word, sigma)
    c = precub_cube(word, sigma)
    return make_precub_map(b, c, {(n, x): x for n in range(b.dim + 1)
                                  for x in b.cells_at(n)})


def test_realize_cube_is_cube():
    for word in [(), ("x",), ("a", "b"), ("a", "b", "c")]:
        r = realize(precub_cube(word, ("a", "b", "c", "x")))
        assert is_isomorphic(r, cube(word, ("a", "b", "c", "x")))


def test_realize_boundary_splits_actions():
    r = realize(precub_boundary(("x", "y")))
    assert len(r.actions) == 4
    assert len(r.states) == 4
    full = realize(precub_cube(("x", "y")))
    assert len(full.actions) == 2


def test_realize_not_left_quillen_regression():
    # the motivating counterexample: realizing the boundary inclusion of a
    # labelled square is not action-injective
    f = realize_map(bnd_incl(("x", "y")))
    assert not is_cofibration_hdts(f)


def test_realize_is_cubical():
    for k in [precub_cube(("a", "b")), precub_boundary(("a", "b")),
              precub_free({"u": "a"}, ("a", "b"), dim=2)]:
        assert is_cubical(realize(k))


def test_realize_of_free_matches_clique():
    for mu, sigma in [({"x": "x"}, ("x",)),
                      ({}, ("x",)),
                      ({"u": "a", "v": "a"}, ("a",))]:
        got = realize_of_free(mu, sigma, dim=3)
        want = clique(mu, sigma, dim=3)
        assert is_isomorphic(got, want)


def test_realize_interval_object_is_interval():
    sigma = ("x",)
    got = realize_of_free({(x, k): x for x in sigma for k in (0, 1)},
                          sigma, dim=2)
    assert is_isomorphic(got, interval(sigma, dim=2))


def test_realize_preserves_pushouts_of_cubes():
    sigma = ("x", "y")
    incl = bnd_incl(("x", "y"), sigma)
    po = pushout_precub(incl, incl)
    lhs = realize(po.apex)
    from hdts.core import make_map
    from hdts.ops import pushout
    rincl = realize_map(incl)
    rhs = pushout(rincl, rincl).apex
    assert is_isomorphic(lhs, rhs)


def test_realize_cylinder_is_interval_times():
    sigma = ("a", "b")
    for word in [("a",), ("a", "b")]:
        k = precub_cube(word, sigma)
        cyl, *_ = cylinder_precub(k)
        lhs = realize(cyl)
        tk = realize(k)
        v = interval(sigma, max(1, tk.max_arity))
        rhs, _, _ = product(v, tk)
        assert is_isomorphic(lhs, rhs)


def test_nerve_of_edge():
    n = nerve(cube(("x",)), dim=1)
    assert len(n.cells_at(0)) == 2
    assert len(n.cells_at(1)) == 1


def test_nerve_of_point():
    n = nerve(cube((), ("x",)), dim=1)
    assert len(n.cells_at(0)) == 1
    assert not n.cells_at(1)


def test_nerve_satisfies_hda():
    for x in [cube(("a", "b")), boundary(("a", "b")), double("x"),
              interval(("x",), 2)]:
        assert check_hda(nerve(x, dim=2))


def test_nerve_of_cube_recovers_cell_counts():
    for word in [("x",), ("x", "y")]:
        c = cube(word)
        k = precub_cube(word)
        n = nerve(c, dim=len(word))
        for m in range(len(word) + 1):
            assert len(n.cells_at(m)) == len(k.cells_at(m))


def test_counit_is_iso_on_cubes():
    from hdts.core import is_isomorphism
    for word in [("x",), ("x", "y")]:
        nx = nerve_with_table(cube(word), dim=2)
        eps = counit_map(nx)
        assert is_isomorphism(eps)


def test_counit_realizes_cubification():
    for x in [boundary(("x", "y")), double("x")]:
        nx = nerve_with_table(x, dim=2)
        eps = counit_map(nx)
        cub_x, _ = cubify(x)
        assert is_isomorphic(eps.dom, cub_x)


def test_adjunction_bijection_edge_vs_double():
    sigma = ("x",)
    k = precub_cube(("x",), sigma)
    x = double("x", sigma)
    report = adjunction_check(k, x)
    assert len(report.hom_realized) == 2
    assert len(report.hom_nerve) == 2
    assert report.ok


def test_realize_sh_agrees():
    incl = bnd_incl(("x", "y"))
    po = pushout_precub(incl, incl)
    sh, _ = sh_reflect(po.apex)
    assert is_isomorphic(realize(po.apex), realize(sh))
