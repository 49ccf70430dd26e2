"""Limits, colimits and search over weak HDTS.

Products carry the initial structure (a multiset of paired actions is a
transition iff both projections are), colimits the final one (transitions
are the composition closure of the pushed-forward ones).  Cube maps are
enumerated by backtracking and feed both the cubical coreflection and the
cubification colimit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .core import (Budget, DEFAULT_BUDGET, HdtsMap, Id, Transition, WeakHdts,
                   close_composition, compose, cube, idkey, is_cubical,
                   make_hdts, make_map, sorted_ids, tr, validate)
from .cubecat import CubeArrow, generators_into


def map_key(f: HdtsMap):
    return (tuple((idkey(a), idkey(b)) for a, b in f.smap),
            tuple((idkey(a), idkey(b)) for a, b in f.amap))


# ---------------------------------------------------------------------------
# Product
# ---------------------------------------------------------------------------

def _label_matchings(xs: Sequence[Id], ys: Sequence[Id]) -> Iterator[tuple]:
    for perm in itertools.permutations(ys):
        yield tuple(zip(xs, perm))


def product(x: WeakHdts, y: WeakHdts) -> tuple[WeakHdts, HdtsMap, HdtsMap]:
    """Binary product: paired states, label-fibered paired actions, and the
    transitions whose two projections are transitions."""
    if x.sigma != y.sigma:
        raise ValueError("product requires a common alphabet")
    states = [(s, t) for s in x.states for t in y.states]
    actions = {(u, v): lu
               for u, lu in x.actions for v, lv in y.actions if lu == lv}
    trans: set[Transition] = set()
    y_by_arity: dict[int, list[Transition]] = {}
    for t in y.transitions:
        y_by_arity.setdefault(t.arity, []).append(t)
    for tx in x.transitions:
        for ty in y_by_arity.get(tx.arity, ()):
            gx: dict[str, list[Id]] = {}
            for a in tx.actions:
                gx.setdefault(x.label[a], []).append(a)
            gy: dict[str, list[Id]] = {}
            for b in ty.actions:
                gy.setdefault(y.label[b], []).append(b)
            if {l: len(v) for l, v in gx.items()} != \
                    {l: len(v) for l, v in gy.items()}:
                continue
            per_label = [_label_matchings(gx[l], gy[l]) for l in sorted(gx)]
            for combo in itertools.product(*per_label):
                pairs = [p for block in combo for p in block]
                trans.add(tr((tx.source, ty.source), pairs,
                             (tx.target, ty.target)))
    apex = make_hdts(x.sigma, states, actions, trans)
    p1 = make_map(apex, x, {(s, t): s for s, t in states},
                  {ab: ab[0] for ab in actions}, check=False)
    p2 = make_map(apex, y, {(s, t): t for s, t in states},
                  {ab: ab[1] for ab in actions}, check=False)
    return apex, p1, p2


def pair_into_product(apex: WeakHdts, f: HdtsMap, g: HdtsMap) -> HdtsMap:
    """The map <f, g> into a product built by :func:`product`."""
    if f.dom != g.dom:
        raise ValueError("pairing needs a common domain")
    return make_map(f.dom, apex,
                    {s: (f.on_state(s), g.on_state(s)) for s in f.dom.states},
                    {a: (f.on_action(a), g.on_action(a))
                     for a in f.dom.action_ids})


# ---------------------------------------------------------------------------
# Colimits by congruence closure
# ---------------------------------------------------------------------------

class _UnionFind:
    def __init__(self) -> None:
        self.parent: dict = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # keep the idkey-least element as root for determinism
            if idkey(rb) < idkey(ra):
                ra, rb = rb, ra
            self.parent[rb] = ra

    def classes(self) -> dict:
        out: dict = {}
        for x in self.parent:
            out[x] = self.find(x)
        return out


@dataclass(frozen=True)
class Colimit:
    objects: tuple[WeakHdts, ...]
    apex: WeakHdts
    legs: tuple[HdtsMap, ...]

    def induced(self, maps: Sequence[HdtsMap], cod: WeakHdts) -> HdtsMap:
        """Factor a compatible cocone (maps[i]: objects[i] -> cod) through
        the apex; consistency across identified elements is asserted."""
        smap: dict[Id, Id] = {}
        amap: dict[Id, Id] = {}
        for i, (obj, leg, h) in enumerate(zip(self.objects, self.legs, maps)):
            if h.dom != obj:
                raise ValueError(f"cocone map {i} has the wrong domain")
            for s in obj.states:
                cls = leg.on_state(s)
                val = h.on_state(s)
                if smap.setdefault(cls, val) != val:
                    raise ValueError("cocone is not compatible on states")
            for a in obj.action_ids:
                cls = leg.on_action(a)
                val = h.on_action(a)
                if amap.setdefault(cls, val) != val:
                    raise ValueError("cocone is not compatible on actions")
        return make_map(self.apex, cod, smap, amap)


def colimit(objects: Sequence[WeakHdts],
            arrows: Iterable[tuple[int, int, HdtsMap]] = (),
            sigma: Iterable[str] | None = None,
            budget: Budget | None = None) -> Colimit:
    """Colimit of a finite diagram: disjoint unions quotiented by the
    equivalence generated by the arrows, transitions closed under the
    composition axiom."""
    objects = tuple(objects)
    if objects:
        sig = objects[0].sigma
        if any(o.sigma != sig for o in objects):
            raise ValueError("diagram objects must share the alphabet")
    elif sigma is None:
        raise ValueError("empty diagram needs an explicit alphabet")
    else:
        sig = tuple(sorted(set(sigma)))
    uf_s, uf_a = _UnionFind(), _UnionFind()
    for i, obj in enumerate(objects):
        for s in obj.states:
            uf_s.find((i, s))
        for a in obj.action_ids:
            uf_a.find((i, a))
    arrows = tuple(arrows)
    for i, j, f in arrows:
        if f.dom != objects[i] or f.cod != objects[j]:
            raise ValueError("diagram arrow endpoints do not match")
        for s in objects[i].states:
            uf_s.union((i, s), (j, f.on_state(s)))
        for a in objects[i].action_ids:
            uf_a.union((i, a), (j, f.on_action(a)))
    scls = uf_s.classes()
    acls = uf_a.classes()
    labels: dict[Id, str] = {}
    for i, obj in enumerate(objects):
        for a, lab in obj.actions:
            rep = acls[(i, a)]
            if labels.setdefault(rep, lab) != lab:
                raise ValueError("label clash under identification")
    pushed: set[Transition] = set()
    for i, obj in enumerate(objects):
        for t in obj.transitions:
            pushed.add(tr(scls[(i, t.source)],
                          [acls[(i, a)] for a in t.actions],
                          scls[(i, t.target)]))
    closed = close_composition(pushed, budget=budget)
    apex = make_hdts(sig, set(scls.values()), labels, closed)
    legs = tuple(make_map(obj, apex,
                          {s: scls[(i, s)] for s in obj.states},
                          {a: acls[(i, a)] for a in obj.action_ids})
                 for i, obj in enumerate(objects))
    return Colimit(objects, apex, legs)


def coproduct(*objects: WeakHdts, budget: Budget | None = None) -> Colimit:
    return colimit(objects, (), budget=budget)


def pushout(f: HdtsMap, g: HdtsMap, budget: Budget | None = None) -> Colimit:
    """Pushout of X <--f-- A --g--> Y; legs are [A, X, Y]."""
    if f.dom != g.dom:
        raise ValueError("pushout needs a common source")
    return colimit([f.dom, f.cod, g.cod], [(0, 1, f), (0, 2, g)], budget=budget)


# ---------------------------------------------------------------------------
# Hom search
# ---------------------------------------------------------------------------

def _search(dom: WeakHdts, cod: WeakHdts,
            state_cands: Mapping[Id, Sequence[Id]],
            action_cands: Mapping[Id, Sequence[Id]],
            budget: Budget,
            injective: bool = False,
            limit: int | None = None) -> list[HdtsMap]:
    items = [("s", s) for s in dom.states] + [("a", a) for a in dom.action_ids]
    pos = {it: i for i, it in enumerate(items)}
    buckets: list[list[Transition]] = [[] for _ in items]
    for t in dom.transitions:
        last = max([pos[("s", t.source)], pos[("s", t.target)]]
                   + [pos[("a", a)] for a in t.actions])
        buckets[last].append(t)
    asg_s: dict[Id, Id] = {}
    asg_a: dict[Id, Id] = {}
    used_s: set = set()
    used_a: set = set()
    out: list[HdtsMap] = []
    counter = [0]

    def ok(t: Transition) -> bool:
        return tr(asg_s[t.source], [asg_a[a] for a in t.actions],
                  asg_s[t.target]) in cod.tset

    def rec(i: int) -> None:
        if limit is not None and len(out) >= limit:
            return
        if i == len(items):
            out.append(make_map(dom, cod, dict(asg_s), dict(asg_a),
                                check=False))
            return
        kind, xx = items[i]
        cands = state_cands[xx] if kind == "s" else action_cands[xx]
        used = used_s if kind == "s" else used_a
        asg = asg_s if kind == "s" else asg_a
        for y in cands:
            if injective and y in used:
                continue
            budget.spend_node(counter)
            asg[xx] = y
            if injective:
                used.add(y)
            if all(ok(t) for t in buckets[i]):
                rec(i + 1)
            del asg[xx]
            if injective:
                used.discard(y)

    rec(0)
    return out


def hom_set(x: WeakHdts, y: WeakHdts, budget: Budget | None = None,
            state_pins: Mapping[Id, Id] | None = None,
            action_pins: Mapping[Id, Id] | None = None,
            limit: int | None = None) -> list[HdtsMap]:
    """All maps x -> y, in a deterministic order.  Pins fix the image of
    chosen states/actions (used for lifting problems)."""
    if x.sigma != y.sigma:
        raise ValueError("hom requires a common alphabet")
    budget = budget or DEFAULT_BUDGET
    state_pins = state_pins or {}
    action_pins = action_pins or {}
    scands = {s: (state_pins[s],) if s in state_pins else y.states
              for s in x.states}
    by_label: dict[str, tuple[Id, ...]] = {}
    for lab in y.sigma:
        by_label[lab] = tuple(a for a, l in y.actions if l == lab)
    acands = {a: (action_pins[a],) if a in action_pins
              else by_label[x.label[a]] for a in x.action_ids}
    maps = _search(x, y, scands, acands, budget, limit=limit)
    return sorted(maps, key=map_key)


def find_isomorphism(x: WeakHdts, y: WeakHdts,
                     budget: Budget | None = None,
                     state_pins: Mapping[Id, Id] | None = None,
                     action_pins: Mapping[Id, Id] | None = None,
                     limit: int | None = 1) -> list[HdtsMap]:
    """Isomorphisms x -> y (first one found unless ``limit`` is raised)."""
    if x.sigma != y.sigma:
        return []
    if len(x.states) != len(y.states) or len(x.actions) != len(y.actions) \
            or len(x.transitions) != len(y.transitions):
        return []
    lx = sorted(x.label[a] for a in x.action_ids)
    ly = sorted(y.label[a] for a in y.action_ids)
    if lx != ly:
        return []
    if sorted(t.arity for t in x.transitions) != \
            sorted(t.arity for t in y.transitions):
        return []
    budget = budget or DEFAULT_BUDGET
    state_pins = state_pins or {}
    action_pins = action_pins or {}
    scands = {s: (state_pins[s],) if s in state_pins else y.states
              for s in x.states}
    by_label: dict[str, tuple[Id, ...]] = {}
    for lab in y.sigma:
        by_label[lab] = tuple(a for a, l in y.actions if l == lab)
    acands = {a: (action_pins[a],) if a in action_pins
              else by_label[x.label[a]] for a in x.action_ids}
    # bijective on states/actions + equal transition counts makes the image
    # of the transition set the whole of y's (injectivity is automatic)
    return _search(x, y, scands, acands, budget, injective=True, limit=limit)


def is_isomorphic(x: WeakHdts, y: WeakHdts, budget: Budget | None = None) -> bool:
    return bool(find_isomorphism(x, y, budget))


def arrows_isomorphic(f: HdtsMap, g: HdtsMap,
                      budget: Budget | None = None) -> bool:
    """Isomorphism of arrows: domain and codomain isomorphisms commuting
    with f and g."""
    budget = budget or DEFAULT_BUDGET
    for phi in find_isomorphism(f.dom, g.dom, budget, limit=None):
        spins: dict[Id, Id] = {}
        apins: dict[Id, Id] = {}
        consistent = True
        for s in f.dom.states:
            key = f.on_state(s)
            val = g.on_state(phi.on_state(s))
            if spins.setdefault(key, val) != val:
                consistent = False
                break
        if consistent:
            for a in f.dom.action_ids:
                key = f.on_action(a)
                val = g.on_action(phi.on_action(a))
                if apins.setdefault(key, val) != val:
                    consistent = False
                    break
        if not consistent:
            continue
        if find_isomorphism(f.cod, g.cod, budget, state_pins=spins,
                            action_pins=apins):
            return True
    return False


# ---------------------------------------------------------------------------
# Cube enumeration, coreflection, cubification
# ---------------------------------------------------------------------------

def _distinct_orderings(ms: tuple[Id, ...]) -> list[tuple[Id, ...]]:
    return sorted({p for p in itertools.permutations(ms)},
                  key=lambda p: tuple(idkey(a) for a in p))


def _cube_maps_over(x: WeakHdts, t: Transition, budget: Budget,
                    counter: list[int],
                    limit: int | None = None) -> list[tuple[tuple, HdtsMap]]:
    """Cube maps whose top transition is t."""
    n = t.arity
    out: list[tuple[tuple, HdtsMap]] = []
    for arrangement in _distinct_orderings(t.actions):
        word = tuple(x.label[a] for a in arrangement)
        cb = cube(word, x.sigma)
        amap = {(word[i], i + 1): arrangement[i] for i in range(n)}
        smap: dict[Id, Id] = {(0,) * n: t.source, (1,) * n: t.target}
        free = sorted((v for v in cb.states if v not in smap),
                      key=lambda v: (sum(v), v))
        touching: dict[Id, list[Transition]] = {v: [] for v in cb.states}
        for ct in cb.transitions:
            touching[ct.source].append(ct)
            touching[ct.target].append(ct)

        def ok_here(v) -> bool:
            for ct in touching[v]:
                other = ct.target if ct.source == v else ct.source
                if other in smap:
                    if tr(smap[ct.source],
                          [amap[a] for a in ct.actions],
                          smap[ct.target]) not in x.tset:
                        return False
            return True

        def rec(k: int) -> None:
            if limit is not None and len(out) >= limit:
                return
            if k == len(free):
                out.append((word, make_map(cb, x, dict(smap), dict(amap),
                                           check=False)))
                return
            v = free[k]
            for cand in x.states:
                budget.spend_node(counter)
                smap[v] = cand
                if ok_here(v):
                    rec(k + 1)
                del smap[v]

        if not ok_here((1,) * n):  # checks the pinned pair incl. the top
            continue
        rec(0)
        if limit is not None and len(out) >= limit:
            break
    return out


def enumerate_cube_maps(x: WeakHdts, n_max: int | None = None,
                        budget: Budget | None = None
                        ) -> list[tuple[tuple, HdtsMap]]:
    """All cube maps C_n[word] -> x for n <= n_max, deterministically
    ordered; dimensions above the maximal arity contribute nothing."""
    budget = budget or DEFAULT_BUDGET
    if n_max is None:
        n_max = x.max_arity
    counter = [0]
    out: list[tuple[tuple, HdtsMap]] = []
    c0 = cube((), x.sigma)
    for s in x.states:
        out.append(((), make_map(c0, x, {(): s}, {}, check=False)))
    for n in range(1, min(n_max, x.max_arity) + 1):
        for t in x.transitions_of_arity(n):
            out.extend(_cube_maps_over(x, t, budget, counter))
    return sorted(out, key=lambda wf: (len(wf[0]), wf[0], map_key(wf[1])))


def coreflect_cubical(x: WeakHdts, budget: Budget | None = None
                      ) -> tuple[WeakHdts, HdtsMap]:
    """The largest cubical sub-system: all states, the used actions, and
    the transitions lying under some cube map."""
    budget = budget or DEFAULT_BUDGET
    counter = [0]
    keep: list[Transition] = []
    for t in x.transitions:
        if t.arity == 1 or _cube_maps_over(x, t, budget, counter, limit=1):
            keep.append(t)
    used = {a for t in keep if t.arity == 1 for a in t.actions}
    sub = make_hdts(x.sigma, x.states,
                    {a: lab for a, lab in x.actions if a in used}, keep)
    if not validate(sub, budget):
        raise AssertionError("cubical coreflection is not closed")
    if not is_cubical(sub):
        raise AssertionError("cubical coreflection is not cubical")
    incl = make_map(sub, x, {s: s for s in sub.states},
                    {a: a for a in sub.action_ids})
    return sub, incl


def realize_arrow(f: CubeArrow, src_word: Sequence[str],
                  tgt_word: Sequence[str],
                  sigma: Iterable[str] | None = None) -> HdtsMap:
    """The map of cubes C_m[src_word] -> C_n[tgt_word] realizing a cube
    category arrow; raises on label-incompatible words."""
    src_word, tgt_word = tuple(src_word), tuple(tgt_word)
    if f.source_word(tgt_word) != src_word:
        raise ValueError("words are not compatible with the arrow")
    if sigma is None:
        sigma = sorted(set(src_word) | set(tgt_word))
    dom = cube(src_word, sigma)
    cod = cube(tgt_word, sigma)
    smap = {eps: f.apply_states(eps) for eps in dom.states}
    amap = {}
    for i in range(1, f.m + 1):
        j = f.axis_image(i)
        amap[(src_word[i - 1], i)] = (tgt_word[j - 1], j)
    return make_map(dom, cod, smap, amap, check=False)


def cubify(x: WeakHdts, budget: Budget | None = None
           ) -> tuple[WeakHdts, HdtsMap]:
    """Colimit of all cubes mapping into x, with the counit to x.

    The diagram's arrows are generated by the face and symmetry arrows of
    the cube category, which generate all cube morphisms over x.
    """
    budget = budget or DEFAULT_BUDGET
    cmaps = enumerate_cube_maps(x, budget=budget)
    index = {(word, map_key(f)): k for k, (word, f) in enumerate(cmaps)}
    objects = [cube(word, x.sigma) for word, _ in cmaps]
    arrows = []
    for k, (word, f) in enumerate(cmaps):
        for g in generators_into(len(word)):
            sw = g.source_word(word)
            r = realize_arrow(g, sw, word, x.sigma)
            f2 = compose(f, r)
            k2 = index.get((sw, map_key(f2)))
            if k2 is None:
                raise AssertionError("cube enumeration is not closed under faces")
            arrows.append((k2, k, r))
    colim = colimit(objects, arrows, sigma=x.sigma, budget=budget)
    counit = colim.induced([f for _, f in cmaps], x)
    return colim.apex, counit
