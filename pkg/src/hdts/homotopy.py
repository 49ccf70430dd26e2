"""Model-structure machinery over cubical transition systems and labelled
symmetric precubical sets: generating cofibration families, cylinders and
pushout-products, lifting problems, the two reflections (action-merging
and label-merging), the weak-equivalence deciders, homotopy of maps, cell
factorizations of cofibrations, and fibrancy probes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Sequence

from .core import (Budget, BudgetExceeded, DEFAULT_BUDGET, HdtsMap, Id,
                   Transition, Verdict, WeakHdts, boundary, compose, cube,
                   double, empty_hdts, identity_map, idkey, interval,
                   is_cofibration_hdts, is_cubical, is_isomorphism, make_hdts,
                   make_map, state_only, action_only, tr)
from .ops import (Colimit, _search, colimit, coproduct, find_isomorphism,
                  hom_set, is_isomorphic, map_key, product, pushout)
from .precub import (LsPrecubSet, PrecubMap, colimit_precub, compose_precub,
                     cylinder_precub, hom_set_precub, identity_precub_map,
                     is_cofibration_precub, make_precub_map, precub_boundary,
                     precub_cube, pushout_precub)
from .realize import realize_map, realize_with_cocone


@dataclass(frozen=True)
class Named:
    """A named arrow of either category."""

    name: str
    map: Any  # HdtsMap | PrecubMap


# ---------------------------------------------------------------------------
# Generating families
# ---------------------------------------------------------------------------

def _sorted_words(sigma: Sequence[str], n: int) -> list[tuple[str, ...]]:
    return list(itertools.combinations_with_replacement(sorted(sigma), n))


def cubical_boundary_inclusion(word: Sequence[str],
                               sigma: Sequence[str]) -> HdtsMap:
    """Boundary inclusion into the labelled cube, taken inside cubical
    systems: in dimension one the boundary is the two endpoints."""
    w = tuple(word)
    c = cube(w, sigma)
    if len(w) == 1:
        dom = state_only(sigma, c.states)
        return make_map(dom, c, {s: s for s in dom.states}, {})
    dom = boundary(w, sigma)
    return make_map(dom, c, {s: s for s in dom.states},
                    {a: a for a in dom.action_ids})


def wedge_inclusion(x: str, sigma: Sequence[str]) -> HdtsMap:
    """The cofibration from the labelled edge into the parallel pair."""
    c = cube((x,), sigma)
    d = double(x, sigma)
    return make_map(c, d, {(0,): 1, (1,): 2}, {(x, 1): x})


def map_C(sigma: Sequence[str]) -> HdtsMap:
    return make_map(empty_hdts(sigma), state_only(sigma, [0]), {}, {})


def map_R(sigma: Sequence[str]) -> HdtsMap:
    return make_map(state_only(sigma, [0, 1]), state_only(sigma, [0]),
                    {0: 0, 1: 0}, {})


def parallel_collapse(x: str, sigma: Sequence[str]) -> HdtsMap:
    """The localizing map from two disjoint labelled edges onto the
    parallel pair (mono and epi, never an isomorphism)."""
    co = coproduct(cube((x,), sigma), cube((x,), sigma))
    d = double(x, sigma)
    smap = {co.legs[0].on_state((0,)): 1, co.legs[0].on_state((1,)): 2,
            co.legs[1].on_state((0,)): 3, co.legs[1].on_state((1,)): 4}
    amap = {co.legs[i].on_action((x, 1)): x for i in (0, 1)}
    return make_map(co.apex, d, smap, amap)


def parallel_collapse_cofibrant(x: str, sigma: Sequence[str]) -> HdtsMap:
    """Cofibrant replacement of the localizing map: the inclusion of two
    labelled edges into two action-doubled edges with one merged action."""
    w, _, _ = product(interval(sigma, 1), cube((x,), sigma))
    co = coproduct(w, w)
    merged = action_only(sigma, [("m", x)])
    hot = ((x, 1), (x, 1))  # the k=1 action of the cylinder of the edge
    span = [make_map(merged, co.apex, {}, {"m": co.legs[i].on_action(hot)})
            for i in (0, 1)]
    quot = colimit([merged, co.apex], [(0, 1, span[0]), (0, 1, span[1])])
    target = quot.apex
    src = coproduct(cube((x,), sigma), cube((x,), sigma))
    cold = ((x, 0), (x, 1))
    smap = {src.legs[i].on_state(s):
            quot.legs[1].on_state(co.legs[i].on_state((0, s)))
            for i in (0, 1) for s in [(0,), (1,)]}
    amap = {src.legs[i].on_action((x, 1)):
            quot.legs[1].on_action(co.legs[i].on_action(cold)) for i in (0, 1)}
    return make_map(src.apex, target, smap, amap)


@dataclass(frozen=True)
class GeneratorFamily:
    """An instantiated generating family over a finite alphabet slice.

    Tags: I_hdts and I_plus (cubical transition systems), I_precub
    (precubical sets), S_family and S_cof (the localizing maps).
    """

    tag: str
    sigma: tuple[str, ...]
    dim: int = 2

    def members(self) -> list[Named]:
        sig = tuple(sorted(set(self.sigma)))
        if self.tag in ("I_hdts", "I_plus"):
            out = [Named("C", map_C(sig)), Named("R", map_R(sig))]
            for n in range(1, self.dim + 1):
                for w in _sorted_words(sig, n):
                    out.append(Named(f"bnd{n}{list(w)}",
                                     cubical_boundary_inclusion(w, sig)))
            for x in sig:
                out.append(Named(f"wedge[{x}]", wedge_inclusion(x, sig)))
            if self.tag == "I_plus":
                for w in _sorted_words(sig, 2):
                    out.append(Named(f"rbnd{list(w)}",
                                     realized_square_inclusion(w, sig)))
            return out
        if self.tag == "I_precub":
            out = [Named("C", precub_map_C(sig, 0)),
                   Named("R", precub_map_R(sig, 0))]
            for n in range(1, self.dim + 1):
                for w in _sorted_words(sig, n):
                    out.append(Named(f"bnd{n}{list(w)}",
                                     precub_boundary_inclusion(w, sig)))
            return out
        if self.tag == "S_family":
            return [Named(f"p[{x}]", parallel_collapse(x, sig)) for x in sig]
        if self.tag == "S_cof":
            return [Named(f"pcof[{x}]", parallel_collapse_cofibrant(x, sig))
                    for x in sig]
        raise ValueError(f"unknown family {self.tag!r}")


def precub_boundary_inclusion(word: Sequence[str],
                              sigma: Sequence[str]) -> PrecubMap:
    b = precub_boundary(word, sigma)
    c = precub_cube(word, sigma)
    return make_precub_map(b, c, {(n, x): x for n in range(b.dim + 1)
                                  for x in b.cells_at(n)})


def precub_map_C(sigma: Sequence[str], dim: int) -> PrecubMap:
    from .precub import make_precub
    emp = make_precub(sigma, dim, {}, {}, {}, {})
    pt = make_precub(sigma, dim, {0: [0]}, {}, {}, {})
    return make_precub_map(emp, pt, {})


def precub_map_R(sigma: Sequence[str], dim: int) -> PrecubMap:
    from .precub import make_precub
    two = make_precub(sigma, dim, {0: [0, 1]}, {}, {}, {})
    pt = make_precub(sigma, dim, {0: [0]}, {}, {}, {})
    return make_precub_map(two, pt, {(0, 0): 0, (0, 1): 0})


def realized_square_inclusion(word: Sequence[str],
                              sigma: Sequence[str]) -> HdtsMap:
    """Realization of the boundary inclusion of a labelled square; the
    extra generating cofibrations of the augmented model structure."""
    return realize_map(precub_boundary_inclusion(word, sigma))


# ---------------------------------------------------------------------------
# Cylinders and pushout-products
# ---------------------------------------------------------------------------

def cyl_hdts(x: WeakHdts, vdim: int | None = None
             ) -> tuple[WeakHdts, HdtsMap, HdtsMap, HdtsMap]:
    """The cylinder (interval times the system) with its two end inclusions
    and the projection; returns (cyl X, gamma0, gamma1, sigma)."""
    vdim = vdim if vdim is not None else max(1, x.max_arity)
    v = interval(x.sigma, vdim)
    apex, _, p2 = product(v, x)
    gammas = tuple(
        make_map(x, apex, {s: (0, s) for s in x.states},
                 {u: ((x.label[u], k), u) for u in x.action_ids}, check=False)
        for k in (0, 1))
    return apex, gammas[0], gammas[1], p2


def cyl_hdts_map(f: HdtsMap, cyl_dom: WeakHdts, cyl_cod: WeakHdts) -> HdtsMap:
    return make_map(cyl_dom, cyl_cod,
                    {(v, s): (v, f.on_state(s)) for v, s in cyl_dom.states},
                    {(a, u): (a, f.on_action(u))
                     for a, u in cyl_dom.action_ids})


def pushout_product(f, which: str = "gamma", category: str | None = None,
                    budget: Budget | None = None):
    """The corner map f * gamma (or f * gamma^k) combining a map with the
    cylinder end inclusions; built from the category's cylinder and colimit."""
    if category is None:
        category = "hdts" if isinstance(f, HdtsMap) else "precub"
    if category == "hdts":
        return _pushout_product_hdts(f, which, budget)
    return _pushout_product_precub(f, which)


def _pushout_product_hdts(f: HdtsMap, which: str,
                          budget: Budget | None) -> HdtsMap:
    vdim = max(1, f.dom.max_arity, f.cod.max_arity)
    cyl_x, g0x, g1x, _ = cyl_hdts(f.dom, vdim)
    cyl_y, g0y, g1y, _ = cyl_hdts(f.cod, vdim)
    cyl_f = cyl_hdts_map(f, cyl_x, cyl_y)
    if which == "gamma":
        diagram = colimit([f.dom, f.dom, f.cod, f.cod, cyl_x],
                          [(0, 2, f), (1, 3, f), (0, 4, g0x), (1, 4, g1x)],
                          budget=budget)
        return diagram.induced([compose(g0y, f), compose(g1y, f),
                                g0y, g1y, cyl_f], cyl_y)
    gx, gy = (g0x, g0y) if which == "gamma0" else (g1x, g1y)
    diagram = colimit([f.dom, f.cod, cyl_x], [(0, 1, f), (0, 2, gx)],
                      budget=budget)
    return diagram.induced([compose(gy, f), gy, cyl_f], cyl_y)


def _pushout_product_precub(f: PrecubMap, which: str) -> PrecubMap:
    cyl_x, g0x, g1x, _ = cylinder_precub(f.dom)
    cyl_y, g0y, g1y, _ = cylinder_precub(f.cod)
    cyl_f = make_precub_map(cyl_x, cyl_y,
                            {(n, (x, bits)): (f.on_cell(n, x), bits)
                             for n in range(cyl_x.dim + 1)
                             for (x, bits) in cyl_x.cells_at(n)}, check=False)
    if which == "gamma":
        diagram = colimit_precub([f.dom, f.dom, f.cod, f.cod, cyl_x],
                                 [(0, 2, f), (1, 3, f),
                                  (0, 4, g0x), (1, 4, g1x)])
        return diagram.induced([compose_precub(g0y, f), compose_precub(g1y, f),
                                g0y, g1y, cyl_f], cyl_y)
    gx, gy = (g0x, g0y) if which == "gamma0" else (g1x, g1y)
    diagram = colimit_precub([f.dom, f.cod, cyl_x], [(0, 1, f), (0, 2, gx)])
    return diagram.induced([compose_precub(gy, f), gy, cyl_f], cyl_y)


def fold_into_cylinder(k: LsPrecubSet) -> PrecubMap:
    """The canonical map K + K -> cyl K (a cofibration in dims >= 1)."""
    cyl, g0, g1, _ = cylinder_precub(k)
    co = colimit_precub([k, k])
    return co.induced([g0, g1], cyl)


# ---------------------------------------------------------------------------
# Lambda sets
# ---------------------------------------------------------------------------

def _arrow_signature(f: HdtsMap):
    return (len(f.dom.states), len(f.dom.actions), len(f.dom.transitions),
            len(f.cod.states), len(f.cod.actions), len(f.cod.transitions))


def _dedupe(named: list[Named], budget: Budget) -> list[Named]:
    from .ops import arrows_isomorphic
    kept: list[Named] = []
    by_sig: dict[tuple, list[Named]] = {}
    for cand in named:
        sig = _arrow_signature(cand.map)
        group = by_sig.setdefault(sig, [])
        if any(arrows_isomorphic(cand.map, old.map, budget) for old in group):
            continue
        group.append(cand)
        kept.append(cand)
    return kept


def lambda_generate(sigma: Sequence[str], s_members: Iterable[Named],
                    i_members: Iterable[Named], depth: int,
                    budget: Budget | None = None,
                    max_members: int = 400) -> list[Named]:
    """The finite slice of the fibrancy test set: level zero is S together
    with both one-sided pushout-products of the generators, and each next
    level is the previous one's two-sided pushout-product.  Members are
    deduplicated up to isomorphism of arrows."""
    budget = budget or DEFAULT_BUDGET
    level: list[Named] = list(s_members)
    for m in i_members:
        level.append(Named(f"{m.name}*g0", pushout_product(m.map, "gamma0",
                                                           budget=budget)))
        level.append(Named(f"{m.name}*g1", pushout_product(m.map, "gamma1",
                                                           budget=budget)))
    level = _dedupe(level, budget)
    out = list(level)
    for d in range(depth):
        nxt = [Named(f"({m.name})*g", pushout_product(m.map, "gamma",
                                                      budget=budget))
               for m in level]
        level = _dedupe(nxt, budget)
        out.extend(level)
        out = _dedupe(out, budget)
        if len(out) > max_members:
            raise BudgetExceeded("lambda slice exceeded the member cap")
    return out


# ---------------------------------------------------------------------------
# Lifting
# ---------------------------------------------------------------------------

def lift_search(f, g, top, bottom, budget: Budget | None = None) -> list:
    """All diagonal fillers for the square bottom o f = g o top; supports
    right-lifting-property checks (at least one) and orthogonality checks
    (exactly one)."""
    if isinstance(f, HdtsMap):
        return _lift_search_hdts(f, g, top, bottom, budget)
    return _lift_search_precub(f, g, top, bottom)


def _lift_search_hdts(f: HdtsMap, g: HdtsMap, top: HdtsMap, bottom: HdtsMap,
                      budget: Budget | None) -> list[HdtsMap]:
    budget = budget or DEFAULT_BUDGET
    for s in f.dom.states:
        if g.on_state(top.on_state(s)) != bottom.on_state(f.on_state(s)):
            raise ValueError("square does not commute on states")
    for a in f.dom.action_ids:
        if g.on_action(top.on_action(a)) != bottom.on_action(f.on_action(a)):
            raise ValueError("square does not commute on actions")
    spins: dict[Id, Id] = {}
    apins: dict[Id, Id] = {}
    for s in f.dom.states:
        key, val = f.on_state(s), top.on_state(s)
        if spins.setdefault(key, val) != val:
            return []
    for a in f.dom.action_ids:
        key, val = f.on_action(a), top.on_action(a)
        if apins.setdefault(key, val) != val:
            return []
    sfibers: dict[Id, list[Id]] = {}
    for s in g.dom.states:
        sfibers.setdefault(g.on_state(s), []).append(s)
    afibers: dict[Id, list[Id]] = {}
    for a in g.dom.action_ids:
        afibers.setdefault(g.on_action(a), []).append(a)
    scands = {}
    for b in f.cod.states:
        allowed = sfibers.get(bottom.on_state(b), [])
        if b in spins:
            allowed = [x for x in allowed if x == spins[b]]
        scands[b] = tuple(allowed)
    acands = {}
    for b in f.cod.action_ids:
        allowed = afibers.get(bottom.on_action(b), [])
        if b in apins:
            allowed = [x for x in allowed if x == apins[b]]
        acands[b] = tuple(allowed)
    return sorted(_search(f.cod, g.dom, scands, acands, budget), key=map_key)


def _lift_search_precub(f: PrecubMap, g: PrecubMap, top: PrecubMap,
                        bottom: PrecubMap) -> list[PrecubMap]:
    pins: dict[tuple[int, Id], Id] = {}
    for (n, x), y in f.cmap.items():
        val = top.on_cell(n, x)
        if pins.setdefault((n, y), val) != val:
            return []
    out = []
    for h in hom_set_precub(f.cod, g.dom, pins=pins):
        if all(g.on_cell(n, h.on_cell(n, x)) == bottom.on_cell(n, x)
               for n in range(f.cod.dim + 1) for x in f.cod.cells_at(n)):
            out.append(h)
    return out


def injective_wrt(x, arrow, budget: Budget | None = None) -> Verdict:
    """Does every map from the arrow's source into x extend along it?"""
    if isinstance(arrow, HdtsMap):
        for u in hom_set(arrow.dom, x, budget):
            pins_s: dict[Id, Id] = {}
            pins_a: dict[Id, Id] = {}
            stuck = False
            for s in arrow.dom.states:
                key, val = arrow.on_state(s), u.on_state(s)
                if pins_s.setdefault(key, val) != val:
                    stuck = True
                    break
            if not stuck:
                for a in arrow.dom.action_ids:
                    key, val = arrow.on_action(a), u.on_action(a)
                    if pins_a.setdefault(key, val) != val:
                        stuck = True
                        break
            if stuck or not hom_set(arrow.cod, x, budget, state_pins=pins_s,
                                    action_pins=pins_a, limit=1):
                return Verdict(False, "no extension", u)
        return Verdict(True)
    for u in hom_set_precub(arrow.dom, x):
        pins: dict[tuple[int, Id], Id] = {}
        stuck = False
        for (n, c), y in arrow.cmap.items():
            val = u.on_cell(n, c)
            if pins.setdefault((n, y), val) != val:
                stuck = True
                break
        if stuck or not hom_set_precub(arrow.cod, x, pins=pins, limit=1):
            return Verdict(False, "no extension", u)
    return Verdict(True)


def orthogonal_to(x, arrow, budget: Budget | None = None) -> Verdict:
    """Unique extensions: restriction along the arrow is a bijection of
    hom-sets into x."""
    if isinstance(arrow, HdtsMap):
        into_cod = hom_set(arrow.cod, x, budget)
        restricted = [map_key(compose(h, arrow)) for h in into_cod]
        into_dom = [map_key(u) for u in hom_set(arrow.dom, x, budget)]
    else:
        into_cod = hom_set_precub(arrow.cod, x)
        restricted = [compose_precub(h, arrow).key() for h in into_cod]
        into_dom = [u.key() for u in hom_set_precub(arrow.dom, x)]
    ok = sorted(restricted) == sorted(into_dom) and \
        len(set(restricted)) == len(restricted)
    return Verdict(ok, "" if ok else "restriction is not a bijection")


# ---------------------------------------------------------------------------
# Reflections
# ---------------------------------------------------------------------------

def satisfies_csa1(x: WeakHdts) -> Verdict:
    """Parallel transitions with a common label must share their action."""
    seen: dict[tuple, Id] = {}
    for t in x.transitions_of_arity(1):
        key = (t.source, t.target, x.label[t.actions[0]])
        other = seen.setdefault(key, t.actions[0])
        if other != t.actions[0]:
            return Verdict(False, "parallel same-label actions",
                           (other, t.actions[0]))
    return Verdict(True)


def csa1_reflect(x: WeakHdts, budget: Budget | None = None
                 ) -> tuple[WeakHdts, HdtsMap]:
    """Merge same-label actions joined by parallel transitions, re-closing
    the transition set after each merge, until the axiom holds."""
    if not is_cubical(x):
        raise ValueError("the reflection is defined on cubical systems")
    subst = {a: a for a in x.action_ids}
    cur = x
    while True:
        v = satisfies_csa1(cur)
        if v:
            break
        keep, drop = sorted(v.witness, key=idkey)
        merged = {a: (keep if a == drop else a) for a in cur.action_ids}
        cur = make_hdts(cur.sigma, cur.states,
                        {a: lab for a, lab in cur.actions if a != drop},
                        [tr(t.source, [merged[a] for a in t.actions], t.target)
                         for t in cur.transitions],
                        close=True, budget=budget)
        subst = {a: merged[b] for a, b in subst.items()}
    unit = make_map(x, cur, {s: s for s in x.states}, subst)
    return cur, unit


def bls_reflect(x: WeakHdts, budget: Budget | None = None
                ) -> tuple[WeakHdts, HdtsMap]:
    """Merge all actions sharing a label (one pass) and re-close; the
    result has an injective labelling map and satisfies the parallel
    transition axiom."""
    if not is_cubical(x):
        raise ValueError("the reflection is defined on cubical systems")
    rep: dict[str, Id] = {}
    for a in x.action_ids:
        lab = x.label[a]
        if lab not in rep or idkey(a) < idkey(rep[lab]):
            rep[lab] = a
    subst = {a: rep[x.label[a]] for a in x.action_ids}
    cur = make_hdts(x.sigma, x.states,
                    {rep[lab]: lab for lab in rep},
                    [tr(t.source, [subst[a] for a in t.actions], t.target)
                     for t in x.transitions],
                    close=True, budget=budget)
    if not satisfies_csa1(cur):
        raise AssertionError("label-merged system fails the parallel axiom")
    unit = make_map(x, cur, {s: s for s in x.states}, subst)
    return cur, unit


def _reflect_map(f: HdtsMap, reflect, budget: Budget | None) -> HdtsMap:
    rdom, udom = reflect(f.dom, budget)
    rcod, ucod = reflect(f.cod, budget)
    amap: dict[Id, Id] = {}
    for a in f.dom.action_ids:
        cls = udom.on_action(a)
        val = ucod.on_action(f.on_action(a))
        if amap.setdefault(cls, val) != val:
            raise AssertionError("reflection is not functorial on this map")
    smap = {udom.on_state(s): ucod.on_state(f.on_state(s))
            for s in f.dom.states}
    return make_map(rdom, rcod, smap, amap)


def csa1_of_map(f: HdtsMap, budget: Budget | None = None) -> HdtsMap:
    return _reflect_map(f, csa1_reflect, budget)


def bls_of_map(f: HdtsMap, budget: Budget | None = None) -> HdtsMap:
    return _reflect_map(f, bls_reflect, budget)


# ---------------------------------------------------------------------------
# Homotopy and weak equivalence
# ---------------------------------------------------------------------------

def homotopic(f: HdtsMap, g: HdtsMap) -> Verdict:
    """Cylinder homotopy between parallel maps.  A homotopy is determined
    by its restrictions to the two ends, so the single candidate is built
    and checked for validity."""
    if f.dom != g.dom or f.cod != g.cod:
        raise ValueError("homotopy needs parallel maps")
    if f.state_map != g.state_map:
        return Verdict(False, "end state maps differ")
    x = f.dom
    cyl_x, *_ = cyl_hdts(x)
    smap = {(0, s): f.on_state(s) for s in x.states}
    amap = {}
    for u in x.action_ids:
        amap[((x.label[u], 0), u)] = f.on_action(u)
        amap[((x.label[u], 1), u)] = g.on_action(u)
    try:
        h = make_map(cyl_x, f.cod, smap, amap)
    except ValueError as exc:
        return Verdict(False, str(exc))
    return Verdict(True, "homotopy found", h)


def weak_equiv(f: HdtsMap, model: str = "cts",
               budget: Budget | None = None) -> Verdict:
    """Weak equivalence deciders: the plain and augmented structures test
    whether the action-merging reflection of the map is an isomorphism,
    the localized structure tests the label-merging reflection."""
    if model in ("cts", "cts_plus", "cts+"):
        return is_isomorphism(csa1_of_map(f, budget))
    if model == "localized":
        return is_isomorphism(bls_of_map(f, budget))
    raise ValueError(f"unknown model {model!r}")


def weak_equiv_precub_localized(f: PrecubMap,
                                budget: Budget | None = None) -> Verdict:
    """The localized equivalence of precubical maps, reflected through the
    realization functor."""
    return weak_equiv(realize_map(f, budget=budget), "localized", budget)


# ---------------------------------------------------------------------------
# Cell factorization of cofibrations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CellAttachment:
    """One pushout of a generating cofibration: the generator instance,
    its attaching map into the current stage, and the pushout legs."""

    generator: str
    gen: HdtsMap
    attach: HdtsMap
    stage_leg: HdtsMap  # previous stage -> new stage
    cell_leg: HdtsMap   # generator codomain -> new stage

    @property
    def stage(self) -> WeakHdts:
        return self.stage_leg.cod


@dataclass(frozen=True)
class CellComplexFactorization:
    arrow: HdtsMap
    cells: tuple[CellAttachment, ...]
    terminal_iso: HdtsMap

    def composite(self) -> HdtsMap:
        acc = identity_map(self.arrow.dom)
        for cell in self.cells:
            acc = compose(cell.stage_leg, acc)
        return compose(self.terminal_iso, acc)

    def replay_ok(self) -> bool:
        return self.composite() == self.arrow


def _attach(gen_name: str, gen: HdtsMap, attach: HdtsMap, zb: HdtsMap,
            cell_to_b: HdtsMap, budget: Budget | None
            ) -> tuple[CellAttachment, HdtsMap]:
    po = pushout(gen, attach, budget=budget)
    cell = CellAttachment(gen_name, gen, attach,
                          stage_leg=po.legs[2], cell_leg=po.legs[1])
    new_zb = po.induced([compose(zb, attach), cell_to_b, zb], zb.cod)
    return cell, new_zb


def cellularize(f: HdtsMap, budget: Budget | None = None,
                max_dim: int | None = None) -> CellComplexFactorization:
    """Factor a cofibration between cubical systems as a finite composite
    of pushouts of generating cofibrations followed by an isomorphism.

    Stages: realize the state map by point and merge cells, attach missing
    actions through edge cells, then missing transitions dimensionwise
    (parallel-pair cells for dimension one, boundary inclusions above).
    """
    budget = budget or DEFAULT_BUDGET
    if not is_cofibration_hdts(f):
        raise ValueError("cellularize needs an action-injective map")
    if not (is_cubical(f.dom) and is_cubical(f.cod)):
        raise ValueError("cellularize needs cubical systems")
    sig = f.dom.sigma
    b = f.cod

    # fast path: the arrow is itself (isomorphic to) a single generator
    fam = GeneratorFamily("I_hdts", sig, max(2, b.max_arity)).members()
    for member in fam:
        pair = find_arrow_isomorphism(member.map, f, budget)
        if pair is not None:
            phi, psi = pair
            po = pushout(member.map, phi, budget=budget)
            cell = CellAttachment(member.name, member.map, phi,
                                  stage_leg=po.legs[2], cell_leg=po.legs[1])
            term = po.induced([compose(f, phi), psi, f], b)
            if is_isomorphism(term):
                return CellComplexFactorization(f, (cell,), term)

    cells: list[CellAttachment] = []
    zb = f  # current stage -> B

    # states: add the missed ones, then merge fibers
    for s in sorted(set(b.states) - set(zb.state_map.values()), key=idkey):
        gen = map_C(sig)
        attach = make_map(empty_hdts(sig), zb.dom, {}, {})
        to_b = make_map(gen.cod, b, {0: s}, {})
        cell, zb = _attach("C", gen, attach, zb, to_b, budget)
        cells.append(cell)
    while True:
        fibers: dict[Id, list[Id]] = {}
        for s in zb.dom.states:
            fibers.setdefault(zb.on_state(s), []).append(s)
        merge = next((sorted(v, key=idkey)[:2]
                      for k, v in sorted(fibers.items(),
                                         key=lambda p: idkey(p[0]))
                      if len(v) > 1), None)
        if merge is None:
            break
        gen = map_R(sig)
        attach = make_map(gen.dom, zb.dom, {0: merge[0], 1: merge[1]}, {})
        to_b = make_map(gen.cod, b, {0: zb.on_state(merge[0])}, {})
        cell, zb = _attach("R", gen, attach, zb, to_b, budget)
        cells.append(cell)

    # actions: attach an edge for every missed one
    for a in sorted(set(b.action_ids) - set(zb.action_map.values()),
                    key=idkey):
        inv_s = {v: k for k, v in zb.smap}
        lab = b.label[a]
        t = min((t for t in b.transitions_of_arity(1) if t.actions[0] == a),
                key=lambda t: (idkey(t.source), idkey(t.target)))
        gen = cubical_boundary_inclusion((lab,), sig)
        attach = make_map(gen.dom, zb.dom,
                          {(0,): inv_s[t.source], (1,): inv_s[t.target]}, {})
        to_b = make_map(gen.cod, b, {(0,): t.source, (1,): t.target},
                        {(lab, 1): a})
        cell, zb = _attach(f"bnd1[{lab}]", gen, attach, zb, to_b, budget)
        cells.append(cell)

    # transitions, dimensionwise; the stage map is bijective on states and
    # actions between attachments from here on
    top = b.max_arity if max_dim is None else max_dim
    for n in range(1, top + 1):
        for t in sorted(b.transitions_of_arity(n), key=lambda t:
                        (idkey(t.source), idkey(t.actions), idkey(t.target))):
            inv_s = {v: k for k, v in zb.smap}
            inv_a = {v: k for k, v in zb.amap}
            if tr(inv_s[t.source], [inv_a[a] for a in t.actions],
                  inv_s[t.target]) in zb.dom.tset:
                continue
            if n == 1:
                a = t.actions[0]
                lab = b.label[a]
                base = min((u for u in zb.dom.transitions_of_arity(1)
                            if u.actions[0] == inv_a[a]),
                           key=lambda u: (idkey(u.source), idkey(u.target)))
                prev_src, prev_tgt = inv_s[t.source], inv_s[t.target]
                gen = wedge_inclusion(lab, sig)
                attach = make_map(gen.dom, zb.dom,
                                  {(0,): base.source, (1,): base.target},
                                  {(lab, 1): inv_a[a]})
                to_b = make_map(gen.cod, b,
                                {1: zb.on_state(base.source),
                                 2: zb.on_state(base.target),
                                 3: t.source, 4: t.target}, {lab: a})
                cell, zb = _attach(f"wedge[{lab}]", gen, attach, zb, to_b,
                                   budget)
                cells.append(cell)
                # fold the two fresh endpoints onto the carried-over states
                fresh = [cell.cell_leg.on_state(3), cell.cell_leg.on_state(4)]
                carried = [cell.stage_leg.on_state(prev_src),
                           cell.stage_leg.on_state(prev_tgt)]
                for pos, want in ((0, t.source), (1, t.target)):
                    if fresh[pos] == carried[pos]:
                        continue
                    gen = map_R(sig)
                    attach = make_map(gen.dom, zb.dom,
                                      {0: carried[pos], 1: fresh[pos]}, {})
                    to_b = make_map(gen.cod, b, {0: want}, {})
                    cell, zb = _attach("R", gen, attach, zb, to_b, budget)
                    cells.append(cell)
                    fresh = [cell.stage_leg.on_state(v) for v in fresh]
                    carried = [cell.stage_leg.on_state(v) for v in carried]
            else:
                from .ops import _cube_maps_over
                counter = [0]
                found = _cube_maps_over(b, t, budget, counter, limit=1)
                if not found:
                    raise AssertionError("cubical codomain lacks a cube over "
                                         "one of its transitions")
                word, cmap = found[0]
                gen = cubical_boundary_inclusion(word, sig)
                attach = make_map(gen.dom, zb.dom,
                                  {s: inv_s[cmap.on_state(s)]
                                   for s in gen.dom.states},
                                  {a: inv_a[cmap.on_action(a)]
                                   for a in gen.dom.action_ids})
                to_b = make_map(gen.cod, b, cmap.state_map, cmap.action_map)
                cell, zb = _attach(f"bnd{n}{list(word)}", gen, attach, zb,
                                   to_b, budget)
                cells.append(cell)

    term = is_isomorphism(zb)
    if not term:
        raise AssertionError(f"terminal map is not an isomorphism: {term.reason}")
    return CellComplexFactorization(f, tuple(cells), zb)


def find_arrow_isomorphism(f: HdtsMap, g: HdtsMap,
                           budget: Budget | None = None
                           ) -> tuple[HdtsMap, HdtsMap] | None:
    """A pair (phi, psi) of isomorphisms with g o phi = psi o f, if any."""
    budget = budget or DEFAULT_BUDGET
    for phi in find_isomorphism(f.dom, g.dom, budget, limit=None):
        spins: dict[Id, Id] = {}
        apins: dict[Id, Id] = {}
        consistent = True
        for s in f.dom.states:
            key, val = f.on_state(s), g.on_state(phi.on_state(s))
            if spins.setdefault(key, val) != val:
                consistent = False
                break
        if consistent:
            for a in f.dom.action_ids:
                key, val = f.on_action(a), g.on_action(phi.on_action(a))
                if apins.setdefault(key, val) != val:
                    consistent = False
                    break
        if not consistent:
            continue
        found = find_isomorphism(f.cod, g.cod, budget, state_pins=spins,
                                 action_pins=apins)
        if found:
            return phi, found[0]
    return None


# ---------------------------------------------------------------------------
# Fibrancy
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FibrancyReport:
    status: str  # fibrant | not_fibrant | unknown
    detail: str = ""
    witness: Any = None


def fibrancy(x: WeakHdts, mode: str = "csa1_certificate", depth: int = 1,
             dim: int = 2, budget: Budget | None = None) -> FibrancyReport:
    """Sound fibrancy probes: the certificate confirms fibrancy of systems
    satisfying the parallel-transition axiom; the bounded refuter searches
    a finite slice of the test set for a failed extension and never
    confirms."""
    if not is_cubical(x):
        raise ValueError("fibrancy is about cubical systems")
    if mode == "csa1_certificate":
        if satisfies_csa1(x):
            return FibrancyReport("fibrant", "satisfies the parallel axiom")
        return FibrancyReport("unknown", "certificate does not apply")
    if mode != "bounded_refute":
        raise ValueError(f"unknown mode {mode!r}")
    budget = budget or DEFAULT_BUDGET
    fam = GeneratorFamily("I_hdts", x.sigma, dim).members()
    slice_ = lambda_generate(x.sigma, [], fam, depth, budget)
    for member in slice_:
        v = injective_wrt(x, member.map, budget)
        if not v:
            return FibrancyReport("not_fibrant",
                                  f"extension fails against {member.name}",
                                  (member.name, v.witness))
    return FibrancyReport("unknown",
                          f"no refutation at depth {depth}, dim {dim}")
