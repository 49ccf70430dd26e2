"""Shared fixture corpus: small cubical systems, cofibrations between
them, and the parallel-axiom targets used by the acceptance gate."""

import pytest

from hdts.core import (boundary, clique, cube, double, empty_hdts, interval,
                       make_map, pure_transition, state_only, terminal)
from hdts.ops import coproduct, cubify, pushout
from hdts.homotopy import (GeneratorFamily, cyl_hdts,
                           parallel_collapse_cofibrant, wedge_inclusion)

SIG = ("x", "y")


def loop_system(sigma=SIG):
    """One state with a single looping labelled edge."""
    from hdts.core import make_hdts, tr
    return make_hdts(sigma, ["s"], [("x", "x")], [tr("s", ["x"], "s")])


@pytest.fixture(scope="session")
def corpus20():
    """Twenty cubical systems over a two-letter alphabet."""
    objs = [
        cube((), SIG),
        cube(("x",), SIG),
        cube(("y",), SIG),
        cube(("x", "y"), SIG),
        cube(("x", "x"), SIG),
        cube(("x", "y", "x"), SIG),
        boundary(("x", "y"), SIG),
        boundary(("x", "x"), SIG),
        double("x", SIG),
        double("y", SIG),
        cubify(boundary(("x", "y"), SIG))[0],
        cubify(double("x", SIG))[0],
        coproduct(cube(("x",), SIG), cube(("x",), SIG)).apex,
        cyl_hdts(cube(("x",), SIG))[0],
        cyl_hdts(cube(("x", "y"), SIG))[0],
        interval(SIG, 2),
        terminal(SIG, 2),
        clique({"u": "x", "v": "x"}, SIG, 2),
        state_only(SIG, [0, 1, 2]),
        parallel_collapse_cofibrant("x", SIG).cod,
    ]
    assert len(objs) == 20
    return objs


@pytest.fixture(scope="session")
def cofibration10():
    """Ten cofibrations between cubical systems."""
    b2 = boundary(("x", "y"), SIG)
    c2 = cube(("x", "y"), SIG)
    b2x = boundary(("x", "x"), SIG)
    c2x = cube(("x", "x"), SIG)
    c1 = cube(("x",), SIG)
    fam = {m.name: m.map for m in GeneratorFamily("I_hdts", SIG, 2).members()}
    maps = [
        make_map(empty_hdts(SIG), c1, {}, {}),
        wedge_inclusion("x", SIG),
        make_map(b2, c2, {s: s for s in b2.states},
                 {a: a for a in b2.action_ids}),
        make_map(b2x, c2x, {s: s for s in b2x.states},
                 {a: a for a in b2x.action_ids}),
        fam["C"],
        fam["R"],
        make_map(cube((), SIG), c1, {(): (0,)}, {}),
        make_map(c1, loop_system(), {(0,): "s", (1,): "s"},
                 {("x", 1): "x"}),
        parallel_collapse_cofibrant("x", SIG),
        make_map(c1, c2,
                 {(0,): (0, 0), (1,): (1, 0)}, {("x", 1): ("x", 1)}),
    ]
    assert len(maps) == 10
    return maps
