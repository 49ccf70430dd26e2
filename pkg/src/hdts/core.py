"""Kernel of finite weak higher dimensional transition systems.

A weak HDTS is a triple (states, labelled actions, n-ary transitions).
Transitions are stored as canonical sorted multisets of action ids, so
permutation-invariance is representational and the composition axiom is
enforced in its multiset form by :func:`close_composition`.

Ids for states and actions are ints, strings, or (nested) tuples thereof;
:func:`idkey` gives them a deterministic total order so every construction
in this package is reproducible run to run.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from functools import cached_property, lru_cache
from typing import Any, Iterable, Iterator, Mapping, Sequence

Id = Any  # int | str | tuple of Id

DEFAULT_LABEL = "tau"


class BudgetExceeded(RuntimeError):
    """A derivation or search cap was hit; the instance is too large."""


@dataclass(frozen=True)
class Budget:
    """Hard caps for closure fixpoints and backtracking searches."""

    max_transitions: int = 50_000
    max_nodes: int = 2_000_000

    def spend_node(self, counter: list[int]) -> None:
        counter[0] += 1
        if counter[0] > self.max_nodes:
            raise BudgetExceeded(f"search exceeded {self.max_nodes} nodes")


DEFAULT_BUDGET = Budget()


def idkey(v: Id):
    """Deterministic sort key over the id universe (int | str | tuple)."""
    if isinstance(v, bool):
        raise TypeError("bool is not a valid id")
    if isinstance(v, int):
        return (0, v)
    if isinstance(v, str):
        return (1, v)
    if isinstance(v, tuple):
        return (2, tuple(idkey(x) for x in v))
    raise TypeError(f"invalid id {v!r} of type {type(v).__name__}")


def sorted_ids(xs: Iterable[Id]) -> tuple[Id, ...]:
    return tuple(sorted(xs, key=idkey))


@dataclass(frozen=True)
class Verdict:
    """Boolean answer plus a human-readable reason and a witness object."""

    ok: bool
    reason: str = ""
    witness: Any = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class Transition:
    """An n-transition source --multiset of actions--> target, n >= 1.

    ``actions`` is kept sorted by :func:`idkey`; it is the canonical
    representative of the orbit of ordered tuples under permutation.
    """

    source: Id
    actions: tuple[Id, ...]
    target: Id

    @property
    def arity(self) -> int:
        return len(self.actions)


def tr(source: Id, actions: Iterable[Id], target: Id) -> Transition:
    """Build a transition in canonical (sorted) form."""
    acts = sorted_ids(actions)
    if not acts:
        raise ValueError("a transition needs at least one action")
    return Transition(source, acts, target)


@dataclass(frozen=True)
class WeakHdts:
    """A finite weak higher dimensional transition system.

    All four fields are canonically sorted tuples, so equality is
    structural equality of canonical forms.  Instances are immutable.
    """

    sigma: tuple[str, ...]
    states: tuple[Id, ...]
    actions: tuple[tuple[Id, str], ...]  # (action id, label)
    transitions: tuple[Transition, ...]

    @cached_property
    def state_set(self) -> frozenset:
        return frozenset(self.states)

    @cached_property
    def label(self) -> dict:
        return dict(self.actions)

    @cached_property
    def action_ids(self) -> tuple[Id, ...]:
        return tuple(a for a, _ in self.actions)

    @cached_property
    def tset(self) -> frozenset:
        return frozenset(self.transitions)

    @cached_property
    def max_arity(self) -> int:
        return max((t.arity for t in self.transitions), default=0)

    def transitions_of_arity(self, n: int) -> tuple[Transition, ...]:
        return tuple(t for t in self.transitions if t.arity == n)

    def __repr__(self) -> str:  # keep test failure output readable
        return (f"WeakHdts(|S|={len(self.states)}, |L|={len(self.actions)}, "
                f"|T|={len(self.transitions)}, sigma={list(self.sigma)})")


def _transition_key(t: Transition):
    return (t.arity, idkey(t.source), idkey(t.actions), idkey(t.target))


def make_hdts(sigma: Iterable[str],
              states: Iterable[Id],
              actions: Iterable[tuple[Id, str]] | Mapping[Id, str],
              transitions: Iterable[Transition | tuple],
              *,
              close: bool = False,
              budget: Budget | None = None) -> WeakHdts:
    """Canonicalize raw data into a :class:`WeakHdts`.

    References are checked (dangling ids raise ``ValueError``); the
    composition closure is *not* checked here, see :func:`validate`.
    With ``close=True`` the transition set is replaced by its closure.
    """
    sig = tuple(sorted(set(sigma)))
    if not sig:
        raise ValueError("alphabet must be nonempty")
    sts = sorted_ids(set(states))
    if isinstance(actions, Mapping):
        actions = actions.items()
    acts: dict[Id, str] = {}
    for a, lab in actions:
        if a in acts and acts[a] != lab:
            raise ValueError(f"action {a!r} given two labels")
        if lab not in sig:
            raise ValueError(f"label {lab!r} of action {a!r} not in alphabet")
        acts[a] = lab
    state_set = set(sts)
    trs: set[Transition] = set()
    for t in transitions:
        if not isinstance(t, Transition):
            s, ms, g = t
            t = tr(s, ms, g)
        else:
            t = tr(t.source, t.actions, t.target)
        if t.source not in state_set:
            raise ValueError(f"dangling source state {t.source!r}")
        if t.target not in state_set:
            raise ValueError(f"dangling target state {t.target!r}")
        for a in t.actions:
            if a not in acts:
                raise ValueError(f"dangling action {a!r} in transition")
        trs.add(t)
    if close:
        trs = set(close_composition(trs, budget=budget))
    return WeakHdts(
        sigma=sig,
        states=sts,
        actions=tuple(sorted(acts.items(), key=lambda p: idkey(p[0]))),
        transitions=tuple(sorted(trs, key=_transition_key)),
    )


def empty_hdts(sigma: Iterable[str]) -> WeakHdts:
    return make_hdts(sigma, [], [], [])


def state_only(sigma: Iterable[str], states: Iterable[Id]) -> WeakHdts:
    """A set viewed as a weak HDTS: states only, no actions, no transitions."""
    return make_hdts(sigma, states, [], [])


def action_only(sigma: Iterable[str], actions: Iterable[tuple[Id, str]]) -> WeakHdts:
    """Actions with no states and no transitions (the underlined objects)."""
    return make_hdts(sigma, [], actions, [])


# ---------------------------------------------------------------------------
# Composition axiom closure
# ---------------------------------------------------------------------------

def merge_sorted(a: tuple[Id, ...], b: tuple[Id, ...]) -> tuple[Id, ...]:
    return tuple(sorted(a + b, key=idkey))


def multiset_partitions3(ms: tuple[Id, ...]) -> Iterator[tuple[tuple, tuple, tuple]]:
    """All ordered partitions of a sorted multiset into three nonempty parts."""
    groups = [(k, len(list(g))) for k, g in itertools.groupby(ms)]

    def splits(counts):
        if not counts:
            yield ((), (), ())
            return
        (elem, m), rest = counts[0], counts[1:]
        for tail in splits(rest):
            for a in range(m + 1):
                for b in range(m - a + 1):
                    c = m - a - b
                    yield ((elem,) * a + tail[0],
                           (elem,) * b + tail[1],
                           (elem,) * c + tail[2])

    for part in splits(groups):
        if all(part):
            yield part


def close_composition(seed: Iterable[Transition],
                      budget: Budget | None = None) -> frozenset:
    """Smallest superset of ``seed`` closed under the composition axiom.

    Multiset form: for every transition M: a -> b and every partition of M
    into nonempty A, B, C, if A: a -> v1, B+C: v1 -> b, A+B: a -> v2 and
    C: v2 -> b are all present, then B: v1 -> v2 is added.  Fixpoint by
    repeated passes; a :class:`BudgetExceeded` error caps runaway instances.
    """
    budget = budget or DEFAULT_BUDGET
    tset: set[Transition] = {tr(t.source, t.actions, t.target) for t in seed}
    if len(tset) > budget.max_transitions:
        raise BudgetExceeded(
            f"seed exceeds {budget.max_transitions} transitions")
    targets: dict[tuple, set] = {}
    sources: dict[tuple, set] = {}

    def index(t: Transition) -> None:
        targets.setdefault((t.source, t.actions), set()).add(t.target)
        sources.setdefault((t.actions, t.target), set()).add(t.source)

    for t in tset:
        index(t)

    changed = True
    while changed:
        changed = False
        for t in sorted(tset, key=_transition_key):
            if t.arity < 3:
                continue
            for part_a, part_b, part_c in multiset_partitions3(t.actions):
                v1s = targets.get((t.source, part_a))
                if not v1s:
                    continue
                v2s = targets.get((t.source, merge_sorted(part_a, part_b)))
                if not v2s:
                    continue
                bc = merge_sorted(part_b, part_c)
                v1s = v1s & sources.get((bc, t.target), set())
                if not v1s:
                    continue
                v2s = {v for v in v2s
                       if t.target in targets.get((v, part_c), ())}
                if not v2s:
                    continue
                for v1 in v1s:
                    for v2 in v2s:
                        cand = Transition(v1, part_b, v2)
                        if cand not in tset:
                            tset.add(cand)
                            index(cand)
                            changed = True
                            if len(tset) > budget.max_transitions:
                                raise BudgetExceeded(
                                    "composition closure exceeded "
                                    f"{budget.max_transitions} transitions")
    return frozenset(tset)


def validate(x: WeakHdts, budget: Budget | None = None) -> Verdict:
    """Accept iff the transition set equals its composition closure.

    References and canonical encodings are enforced by construction; the
    multiset axiom is representational and reported as such.
    """
    closed = close_composition(x.transitions, budget=budget)
    missing = closed - x.tset
    if missing:
        w = min(missing, key=_transition_key)
        return Verdict(False, "composition axiom: derivable transition missing"
                       " (multiset axiom: represented)", w)
    return Verdict(True, "axioms hold (multiset axiom: represented)")


# ---------------------------------------------------------------------------
# Basic constructions
# ---------------------------------------------------------------------------

def _infer_sigma(word: Sequence[str]) -> tuple[str, ...]:
    return tuple(sorted(set(word))) if word else (DEFAULT_LABEL,)


def cube_action(label: str, axis: int) -> Id:
    return (label, axis)


@lru_cache(maxsize=None)
def _cube_cached(word: tuple[str, ...], sigma: tuple[str, ...]) -> WeakHdts:
    n = len(word)
    states = list(itertools.product((0, 1), repeat=n))
    actions = [(cube_action(word[i - 1], i), word[i - 1]) for i in range(1, n + 1)]
    trans = []
    for src in states:
        for dst in states:
            diff = [i for i in range(n) if src[i] != dst[i]]
            if diff and all(src[i] <= dst[i] for i in range(n)):
                trans.append(tr(src, [cube_action(word[i], i + 1) for i in diff], dst))
    return make_hdts(sigma, states, actions, trans)


def cube(word: Sequence[str], sigma: Iterable[str] | None = None) -> WeakHdts:
    """The n-cube: n actions running concurrently, states = {0,1}^n."""
    w = tuple(word)
    sig = tuple(sorted(set(sigma))) if sigma is not None else _infer_sigma(w)
    return _cube_cached(w, sig)


def boundary(word: Sequence[str], sigma: Iterable[str] | None = None) -> WeakHdts:
    """The n-cube with all its n-transitions removed (n >= 1)."""
    w = tuple(word)
    if not w:
        raise ValueError("boundary needs a nonempty word")
    c = cube(w, sigma)
    return replace(c, transitions=tuple(t for t in c.transitions if t.arity < len(w)))


def pure_transition(word: Sequence[str], sigma: Iterable[str] | None = None) -> WeakHdts:
    """Only the two endpoints and the top transition of the n-cube."""
    w = tuple(word)
    if not w:
        raise ValueError("pure transition needs a nonempty word")
    n = len(w)
    acts = [(cube_action(w[i - 1], i), w[i - 1]) for i in range(1, n + 1)]
    return make_hdts(sigma if sigma is not None else _infer_sigma(w),
                     [(0,) * n, (1,) * n], acts,
                     [tr((0,) * n, [a for a, _ in acts], (1,) * n)])


def double(x: str, sigma: Iterable[str] | None = None) -> WeakHdts:
    """Four states, one action, two parallel x-transitions."""
    sig = sigma if sigma is not None else (x,)
    return make_hdts(sig, [1, 2, 3, 4], [(x, x)], [tr(1, [x], 2), tr(3, [x], 4)])


def clique(mu: Mapping[Id, str], sigma: Iterable[str] | None = None,
           dim: int = 4) -> WeakHdts:
    """One state carrying every multiset of actions up to arity ``dim``.

    This is the one-state system of a label map; its transition set is
    infinite in arity, so it is truncated at the configurable bound.
    """
    sig = tuple(sorted(set(sigma))) if sigma is not None \
        else tuple(sorted(set(mu.values()))) or (DEFAULT_LABEL,)
    acts = sorted(mu, key=idkey)
    trans = []
    for n in range(1, dim + 1):
        for ms in itertools.combinations_with_replacement(acts, n):
            trans.append(tr(0, ms, 0))
    return make_hdts(sig, [0], mu, trans)


def interval(sigma: Iterable[str], dim: int = 4) -> WeakHdts:
    """The interval object: the clique on sigma x {0,1} over sigma."""
    sig = tuple(sorted(set(sigma)))
    return clique({(x, k): x for x in sig for k in (0, 1)}, sig, dim)


def terminal(sigma: Iterable[str], dim: int = 4) -> WeakHdts:
    """The terminal object (truncated): the clique on the identity of sigma."""
    sig = tuple(sorted(set(sigma)))
    return clique({x: x for x in sig}, sig, dim)


def construct_basic(kind: str, arg, sigma: Iterable[str] | None = None,
                    dim: int = 4) -> WeakHdts:
    """Dispatch for the standard objects: cube | boundary | pure | double
    | clique | interval."""
    if kind == "cube":
        return cube(arg, sigma)
    if kind == "boundary":
        return boundary(arg, sigma)
    if kind == "pure":
        return pure_transition(arg, sigma)
    if kind == "double":
        return double(arg, sigma)
    if kind == "clique":
        return clique(arg, sigma, dim)
    if kind == "interval":
        return interval(arg if sigma is None else sigma, dim)
    raise ValueError(f"unknown kind {kind!r}")


# ---------------------------------------------------------------------------
# Maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HdtsMap:
    """A structure-preserving map: a state map and a label-preserving
    action map under which transitions map to transitions."""

    dom: WeakHdts
    cod: WeakHdts
    smap: tuple[tuple[Id, Id], ...]
    amap: tuple[tuple[Id, Id], ...]

    @cached_property
    def state_map(self) -> dict:
        return dict(self.smap)

    @cached_property
    def action_map(self) -> dict:
        return dict(self.amap)

    def on_state(self, s: Id) -> Id:
        return self.state_map[s]

    def on_action(self, a: Id) -> Id:
        return self.action_map[a]

    def push(self, t: Transition) -> Transition:
        return tr(self.state_map[t.source],
                  [self.action_map[a] for a in t.actions],
                  self.state_map[t.target])

    def __repr__(self) -> str:
        return f"HdtsMap({self.dom!r} -> {self.cod!r})"


def make_map(dom: WeakHdts, cod: WeakHdts, smap: Mapping[Id, Id],
             amap: Mapping[Id, Id], check: bool = True) -> HdtsMap:
    if check:
        if dom.sigma != cod.sigma:
            raise ValueError("maps require a common alphabet")
        for s in dom.states:
            if smap.get(s) not in cod.state_set:
                raise ValueError(f"state {s!r} not mapped into codomain")
        for a, lab in dom.actions:
            b = amap.get(a)
            if b is None or b not in cod.label:
                raise ValueError(f"action {a!r} not mapped into codomain")
            if cod.label[b] != lab:
                raise ValueError(f"action map breaks labelling at {a!r}")
    f = HdtsMap(dom, cod,
                tuple(sorted(((s, smap[s]) for s in dom.states),
                             key=lambda p: idkey(p[0]))),
                tuple(sorted(((a, amap[a]) for a in dom.action_ids),
                             key=lambda p: idkey(p[0]))))
    if check:
        for t in dom.transitions:
            if f.push(t) not in cod.tset:
                raise ValueError(f"image of transition {t} is not a transition")
    return f


def identity_map(x: WeakHdts) -> HdtsMap:
    return make_map(x, x, {s: s for s in x.states},
                    {a: a for a in x.action_ids}, check=False)


def compose(g: HdtsMap, f: HdtsMap) -> HdtsMap:
    """g after f."""
    if f.cod != g.dom:
        raise ValueError("maps are not composable")
    return make_map(f.dom, g.cod,
                    {s: g.state_map[v] for s, v in f.smap},
                    {a: g.action_map[b] for a, b in f.amap}, check=False)


def is_isomorphism(f: HdtsMap) -> Verdict:
    """Bijective on states and actions and surjective on transitions
    (injectivity on transitions is then automatic)."""
    if len(set(f.state_map.values())) != len(f.dom.states) or \
            len(f.dom.states) != len(f.cod.states):
        return Verdict(False, "not bijective on states")
    if len(set(f.action_map.values())) != len(f.dom.action_ids) or \
            len(f.dom.action_ids) != len(f.cod.action_ids):
        return Verdict(False, "not bijective on actions")
    image = {f.push(t) for t in f.dom.transitions}
    missed = f.cod.tset - image
    if missed:
        return Verdict(False, "not surjective on transitions",
                       min(missed, key=_transition_key))
    return Verdict(True)


def is_cofibration_hdts(f: HdtsMap) -> Verdict:
    """Cofibrations of cubical transition systems: action-injective maps."""
    seen: dict[Id, Id] = {}
    for a, b in f.amap:
        if b in seen:
            return Verdict(False, "action map not injective", (seen[b], a))
        seen[b] = a
    return Verdict(True)


# ---------------------------------------------------------------------------
# Cubicality
# ---------------------------------------------------------------------------

def multiset_partitions2(ms: tuple[Id, ...]) -> Iterator[tuple[tuple, tuple]]:
    """All ordered partitions of a sorted multiset into two nonempty parts."""
    groups = [(k, len(list(g))) for k, g in itertools.groupby(ms)]

    def splits(counts):
        if not counts:
            yield ((), ())
            return
        (elem, m), rest = counts[0], counts[1:]
        for tail in splits(rest):
            for a in range(m + 1):
                yield ((elem,) * a + tail[0], (elem,) * (m - a) + tail[1])

    for part in splits(groups):
        if all(part):
            yield part


def is_cubical(x: WeakHdts) -> Verdict:
    """All actions used in 1-transitions, and the intermediate state axiom:
    every transition splits at every two-part partition of its multiset."""
    used = {t.actions[0] for t in x.transitions if t.arity == 1}
    for a in x.action_ids:
        if a not in used:
            return Verdict(False, "unused action", a)
    by_src_acts = {}
    for t in x.transitions:
        by_src_acts.setdefault((t.source, t.actions), set()).add(t.target)
    for t in x.transitions:
        if t.arity < 2:
            continue
        for left, right in multiset_partitions2(t.actions):
            if not any(t.target in by_src_acts.get((v, right), ())
                       for v in by_src_acts.get((t.source, left), ())):
                return Verdict(False, "intermediate state axiom fails",
                               (t, left, right))
    return Verdict(True)
