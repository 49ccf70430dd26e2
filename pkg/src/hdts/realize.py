"""The realization functor from labelled symmetric precubical sets to
cubical transition systems, its right adjoint nerve, and diagnostics for
the adjunction between them.

Realization takes the colimit of one labelled cube per cell, glued along
the face and symmetry generators (which generate all cube morphisms);
the nerve's cells in dimension n are the cube maps into the system.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Sequence

from .core import (Budget, DEFAULT_BUDGET, HdtsMap, Id, Verdict, WeakHdts,
                   compose, cube, idkey, is_cubical, make_map)
from .cubecat import face, generator_kind, generators_into, symmetry
from .ops import (Colimit, colimit, cubify, enumerate_cube_maps,
                  find_isomorphism, hom_set, is_isomorphic, map_key,
                  realize_arrow)
from .precub import (LsPrecubSet, PrecubMap, apply_generator, hom_set_precub,
                     make_precub, precub_free)


@dataclass
class Realization:
    """A realized precubical set with its defining cocone (one leg per
    cell, from the labelled cube of that cell's word)."""

    source: LsPrecubSet
    nodes: tuple[tuple[int, Id], ...]
    colim: Colimit

    @property
    def apex(self) -> WeakHdts:
        return self.colim.apex

    def leg(self, n: int, x: Id) -> HdtsMap:
        return self.colim.legs[self.nodes.index((n, x))]


def realize_with_cocone(k: LsPrecubSet, budget: Budget | None = None) -> Realization:
    nodes = tuple((n, x) for n in range(k.dim + 1) for x in k.cells_at(n))
    index = {node: i for i, node in enumerate(nodes)}
    objects = [cube(k.word(n, x), k.sigma) for n, x in nodes]
    arrows = []
    for i, (n, x) in enumerate(nodes):
        w = k.word(n, x)
        for g in generators_into(n):
            src_node = apply_generator(k, generator_kind(g), n, x)
            r = realize_arrow(g, g.source_word(w), w, k.sigma)
            arrows.append((index[src_node], i, r))
    colim = colimit(objects, arrows, sigma=k.sigma, budget=budget)
    return Realization(k, nodes, colim)


def realize(k: LsPrecubSet, budget: Budget | None = None) -> WeakHdts:
    """The realization: colimit in weak HDTS of the cube of every cell."""
    return realize_with_cocone(k, budget).apex


def realize_map(f: PrecubMap, rk: Realization | None = None,
                rl: Realization | None = None,
                budget: Budget | None = None) -> HdtsMap:
    """Image of a precubical map under the realization functor."""
    rk = rk or realize_with_cocone(f.dom, budget)
    rl = rl or realize_with_cocone(f.cod, budget)
    index = {node: i for i, node in enumerate(rl.nodes)}
    maps = [rl.colim.legs[index[(n, f.on_cell(n, x))]] for n, x in rk.nodes]
    return rk.colim.induced(maps, rl.apex)


# ---------------------------------------------------------------------------
# Nerve
# ---------------------------------------------------------------------------

@dataclass
class Nerve:
    source: WeakHdts
    set: LsPrecubSet
    # cell id -> the cube map it stands for
    table: dict[tuple[int, Id], tuple[tuple, HdtsMap]]


def nerve_with_table(x: WeakHdts, dim: int,
                     budget: Budget | None = None) -> Nerve:
    if not is_cubical(x):
        raise ValueError("the nerve is defined on cubical systems")
    cmaps = enumerate_cube_maps(x, n_max=dim, budget=budget)
    by_dim: dict[int, list[tuple[tuple, HdtsMap]]] = {n: [] for n in range(dim + 1)}
    for word, f in cmaps:
        by_dim[len(word)].append((word, f))
    lookup: dict[tuple, Id] = {}
    cells: dict[int, list[Id]] = {}
    labels: dict[tuple[int, Id], tuple[str, ...]] = {}
    table: dict[tuple[int, Id], tuple[tuple, HdtsMap]] = {}
    for n in range(dim + 1):
        cells[n] = []
        for idx, (word, f) in enumerate(by_dim[n]):
            cells[n].append(idx)
            labels[(n, idx)] = word
            lookup[(n, word, map_key(f))] = idx
            table[(n, idx)] = (word, f)
    faces: dict[tuple[int, int, int, Id], Id] = {}
    syms: dict[tuple[int, int, Id], Id] = {}
    for n in range(1, dim + 1):
        for idx, (word, f) in enumerate(by_dim[n]):
            for i in range(1, n + 1):
                for alpha in (0, 1):
                    g = face(i, alpha, n)
                    sw = g.source_word(word)
                    f2 = compose(f, realize_arrow(g, sw, word, x.sigma))
                    faces[(n, i, alpha, idx)] = lookup[(n - 1, sw, map_key(f2))]
            for i in range(1, n):
                g = symmetry(i, n)
                sw = g.source_word(word)
                f2 = compose(f, realize_arrow(g, sw, word, x.sigma))
                syms[(n, i, idx)] = lookup[(n, sw, map_key(f2))]
    k = make_precub(x.sigma, dim, cells, labels, faces, syms)
    return Nerve(x, k, table)


def nerve(x: WeakHdts, dim: int, budget: Budget | None = None) -> LsPrecubSet:
    """Right adjoint to realization, truncated at the given bound."""
    return nerve_with_table(x, dim, budget).set


def realize_of_free(mu: Mapping[Id, str], sigma: Iterable[str] | None = None,
                    dim: int = 3, budget: Budget | None = None) -> WeakHdts:
    """Realization of the free labelled symmetric precubical set of a label
    map; structurally a one-state clique up to the arity bound."""
    return realize(precub_free(mu, sigma, dim), budget)


# ---------------------------------------------------------------------------
# Adjunction diagnostics
# ---------------------------------------------------------------------------

@dataclass
class AdjunctionReport:
    hom_realized: list[HdtsMap]
    hom_nerve: list[PrecubMap]
    bijective: bool
    counit: HdtsMap
    counit_is_cubification: bool

    @property
    def ok(self) -> bool:
        return self.bijective and self.counit_is_cubification


def transpose(g: PrecubMap, rk: Realization, nx: Nerve) -> HdtsMap:
    """The adjunct T(K) -> X of a map K -> R(X)."""
    maps = [nx.table[(n, g.on_cell(n, x))][1] for n, x in rk.nodes]
    return rk.colim.induced(maps, nx.source)


def counit_map(nx: Nerve, budget: Budget | None = None) -> HdtsMap:
    """The counit T(R(X)) -> X induced by the nerve's cube maps."""
    r = realize_with_cocone(nx.set, budget)
    maps = [nx.table[node][1] for node in r.nodes]
    return r.colim.induced(maps, nx.source)


def adjunction_check(k: LsPrecubSet, x: WeakHdts,
                     budget: Budget | None = None) -> AdjunctionReport:
    """Verify hom(T(K), X) = hom(K, R(X)) by explicit transposition, and
    that the counit realizes the cubification of X."""
    if k.sigma != x.sigma:
        raise ValueError("adjunction check requires a common alphabet")
    rk = realize_with_cocone(k, budget)
    nx = nerve_with_table(x, k.dim, budget)
    hom_t = hom_set(rk.apex, x, budget)
    hom_n = hom_set_precub(k, nx.set)
    transposed = [transpose(g, rk, nx) for g in hom_n]
    keys = {map_key(h) for h in transposed}
    bij = (len(keys) == len(transposed)
           and keys == {map_key(h) for h in hom_t})
    eps = counit_map(nx, budget)
    cub_x, _ = cubify(x, budget)
    return AdjunctionReport(hom_t, hom_n, bij, eps,
                            is_isomorphic(eps.dom, cub_x, budget))
