"""Labelled symmetric precubical sets, truncated at an explicit dimension.

A set is stored as per-dimension cell ids with a label word per cell and
generator operator tables (faces d_i^alpha and adjacent symmetries s_i).
Well-definedness over the cube category is checked semantically: any two
generator words with the same arrow semantics must act identically on
every cell.  Words of length up to three suffice because the category's
relations have sides of that length.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator, Mapping, Sequence

from .core import Id, Verdict, idkey, sorted_ids
from .cubecat import (CubeArrow, arrow_compose, arrow_key, enumerate_arrows,
                      face, factor_arrow, generator_kind, generators_into,
                      identity_arrow, symmetry, NEG, POS)


@dataclass
class LsPrecubSet:
    """Cells per dimension with label words and generator operator tables.

    Immutable by convention: operations build new instances.
    ``faces`` keys are (n, i, alpha, cell) with 1 <= i <= n, ``syms`` keys
    are (n, i, cell) with 1 <= i <= n-1.
    """

    sigma: tuple[str, ...]
    dim: int
    cells: tuple[tuple[Id, ...], ...]
    labels: dict[tuple[int, Id], tuple[str, ...]]
    faces: dict[tuple[int, int, int, Id], Id]
    syms: dict[tuple[int, int, Id], Id]

    def cells_at(self, n: int) -> tuple[Id, ...]:
        return self.cells[n] if 0 <= n <= self.dim else ()

    def word(self, n: int, x: Id) -> tuple[str, ...]:
        return self.labels[(n, x)]

    def d(self, n: int, i: int, alpha: int, x: Id) -> Id:
        return self.faces[(n, i, alpha, x)]

    def s(self, n: int, i: int, x: Id) -> Id:
        return self.syms[(n, i, x)]

    def size(self) -> int:
        return sum(len(c) for c in self.cells)

    def __repr__(self) -> str:
        counts = ",".join(str(len(c)) for c in self.cells)
        return f"LsPrecubSet(dim={self.dim}, cells=[{counts}])"


def make_precub(sigma: Iterable[str], dim: int,
                cells: Mapping[int, Iterable[Id]],
                labels: Mapping[tuple[int, Id], Sequence[str]],
                faces: Mapping[tuple[int, int, int, Id], Id],
                syms: Mapping[tuple[int, int, Id], Id]) -> LsPrecubSet:
    """Canonicalize raw table data; totality and label sanity are enforced,
    the deeper coherence check lives in :func:`validate_presheaf`."""
    sig = tuple(sorted(set(sigma)))
    if not sig:
        raise ValueError("alphabet must be nonempty")
    if dim < 0:
        raise ValueError("dimension bound must be >= 0")
    levels = tuple(sorted_ids(set(cells.get(n, ()))) for n in range(dim + 1))
    labs: dict[tuple[int, Id], tuple[str, ...]] = {}
    for n, level in enumerate(levels):
        for x in level:
            if n == 0:
                labs[(n, x)] = ()
                continue
            if (n, x) not in labels:
                raise ValueError(f"cell ({n}, {x!r}) has no label word")
            w = tuple(labels[(n, x)])
            if len(w) != n:
                raise ValueError(f"cell ({n}, {x!r}) has a word of wrong length")
            for a in w:
                if a not in sig:
                    raise ValueError(f"letter {a!r} not in alphabet")
            labs[(n, x)] = w
    fc: dict[tuple[int, int, int, Id], Id] = {}
    sy: dict[tuple[int, int, Id], Id] = {}
    for n, level in enumerate(levels):
        if n == 0:
            continue
        lower = set(levels[n - 1])
        same = set(level)
        for x in level:
            for i in range(1, n + 1):
                for alpha in (0, 1):
                    y = faces.get((n, i, alpha, x))
                    if y is None or y not in lower:
                        raise ValueError(f"face table gap at ({n},{i},{alpha},{x!r})")
                    fc[(n, i, alpha, x)] = y
            for i in range(1, n):
                y = syms.get((n, i, x))
                if y is None or y not in same:
                    raise ValueError(f"symmetry table gap at ({n},{i},{x!r})")
                sy[(n, i, x)] = y
    return LsPrecubSet(sig, dim, levels, labs, fc, sy)


def _word_delete(w: tuple[str, ...], i: int) -> tuple[str, ...]:
    return w[:i - 1] + w[i:]


def _word_swap(w: tuple[str, ...], i: int) -> tuple[str, ...]:
    return w[:i - 1] + (w[i], w[i - 1]) + w[i + 1:]


def apply_generator(k: LsPrecubSet, kind: tuple, n: int, x: Id) -> tuple[int, Id]:
    """Apply a classified generator arrow into [n] to a cell of K_n."""
    if kind[0] == "face":
        return n - 1, k.d(n, kind[1], kind[2], x)
    if kind[0] == "sym":
        return n, k.s(n, kind[1], x)
    return n, x


def apply_arrow(k: LsPrecubSet, f: CubeArrow, x: Id) -> tuple[int, Id]:
    """K(f)(x) for an arrow f: [m] -> [n] and x in K_n, via the canonical
    factorization into generators."""
    if f.n > k.dim or (f.n, x) not in k.labels:
        raise ValueError("cell out of range for the arrow")
    cur_dim, cur = f.n, x
    for g in reversed(factor_arrow(f)):
        cur_dim, cur = apply_generator(k, generator_kind(g), cur_dim, cur)
    return cur_dim, cur


def _generator_words(n: int, max_len: int) -> Iterator[tuple[tuple, ...]]:
    """Composable generator sequences (outermost first) ending at [n]."""
    yield ()
    if max_len == 0:
        return
    for g in generators_into(n):
        kind = generator_kind(g)
        for rest in _generator_words(g.m, max_len - 1):
            yield (kind,) + rest


def _word_semantics(n: int, word: Sequence[tuple]) -> CubeArrow:
    acc = identity_arrow(n)
    for kind in word:
        if kind[0] == "face":
            g = face(kind[1], kind[2], acc.m)
        else:
            g = symmetry(kind[1], acc.m)
        acc = arrow_compose(acc, g)
    return acc


def validate_presheaf(k: LsPrecubSet) -> Verdict:
    """Label rules plus semantic coherence for generator words of length
    up to three (long enough to cover the cube category's relations)."""
    for n in range(1, k.dim + 1):
        for x in k.cells_at(n):
            w = k.word(n, x)
            for i in range(1, n + 1):
                for alpha in (0, 1):
                    y = k.d(n, i, alpha, x)
                    if k.word(n - 1, y) != _word_delete(w, i):
                        return Verdict(False, "face label rule fails",
                                       ((n, x), (i, alpha), y))
            for i in range(1, n):
                y = k.s(n, i, x)
                if k.word(n, y) != _word_swap(w, i):
                    return Verdict(False, "symmetry label rule fails",
                                   ((n, x), i, y))
    for n in range(k.dim + 1):
        buckets: dict[tuple, list[tuple]] = {}
        for word in _generator_words(n, 3):
            sem = _word_semantics(n, word)
            buckets.setdefault(arrow_key(sem), []).append(word)
        for words in buckets.values():
            if len(words) < 2:
                continue
            for x in k.cells_at(n):
                results = set()
                for word in words:
                    cur_dim, cur = n, x
                    for kind in word:
                        cur_dim, cur = apply_generator(k, kind, cur_dim, cur)
                    results.add((cur_dim, cur))
                if len(results) > 1:
                    return Verdict(False, "semantic coherence fails",
                                   (words[0], words[1], (n, x)))
    return Verdict(True)


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------

def arrow_cell_id(a: CubeArrow) -> Id:
    return tuple("0" if v == NEG else "1" if v == POS else v for v in a.fhat)


def precub_cube(word: Sequence[str], sigma: Iterable[str] | None = None,
                dim: int | None = None) -> LsPrecubSet:
    """The standard labelled cube: cells in dimension m are the cube
    category arrows [m] -> [n] with their induced words."""
    w = tuple(word)
    n = len(w)
    sig = tuple(sorted(set(sigma))) if sigma is not None else \
        (tuple(sorted(set(w))) or ("tau",))
    dim = n if dim is None else dim
    if dim < n:
        raise ValueError("dimension bound below the cube's dimension")
    cells: dict[int, list[Id]] = {m: [] for m in range(dim + 1)}
    labels: dict[tuple[int, Id], tuple[str, ...]] = {}
    faces: dict[tuple[int, int, int, Id], Id] = {}
    syms: dict[tuple[int, int, Id], Id] = {}
    for m in range(min(n, dim) + 1):
        for a in enumerate_arrows(m, n):
            xid = arrow_cell_id(a)
            cells[m].append(xid)
            labels[(m, xid)] = a.source_word(w)
            for i in range(1, m + 1):
                for alpha in (0, 1):
                    faces[(m, i, alpha, xid)] = arrow_cell_id(
                        arrow_compose(a, face(i, alpha, m)))
            for i in range(1, m):
                syms[(m, i, xid)] = arrow_cell_id(
                    arrow_compose(a, symmetry(i, m)))
    return make_precub(sig, dim, cells, labels, faces, syms)


def precub_boundary(word: Sequence[str], sigma: Iterable[str] | None = None,
                    dim: int | None = None) -> LsPrecubSet:
    """The labelled cube with its interior removed (cells of dimension >=
    n are dropped; the bound stays at n so gluings typecheck)."""
    w = tuple(word)
    n = len(w)
    if n == 0:
        raise ValueError("the boundary of the point is empty; use dim >= 0 sets")
    full = precub_cube(w, sigma, dim)
    cells = {m: list(full.cells_at(m)) for m in range(full.dim + 1) if m < n}
    labels = {(m, x): wd for (m, x), wd in full.labels.items() if m < n}
    faces = {key: y for key, y in full.faces.items() if key[0] < n}
    syms = {key: y for key, y in full.syms.items() if key[0] < n}
    return make_precub(full.sigma, full.dim, cells, labels, faces, syms)


def precub_free(mu: Mapping[Id, str], sigma: Iterable[str] | None = None,
                dim: int = 3) -> LsPrecubSet:
    """Truncation of the free labelled symmetric precubical set of a label
    map: cells in dimension n are words of length n over the domain."""
    sig = tuple(sorted(set(sigma))) if sigma is not None \
        else (tuple(sorted(set(mu.values()))) or ("tau",))
    gens = sorted_ids(mu)
    cells: dict[int, list[Id]] = {}
    labels: dict[tuple[int, Id], tuple[str, ...]] = {}
    faces: dict[tuple[int, int, int, Id], Id] = {}
    syms: dict[tuple[int, int, Id], Id] = {}
    for n in range(dim + 1):
        cells[n] = []
        for cell in itertools.product(gens, repeat=n):
            cells[n].append(cell)
            labels[(n, cell)] = tuple(mu[a] for a in cell)
            for i in range(1, n + 1):
                for alpha in (0, 1):
                    faces[(n, i, alpha, cell)] = cell[:i - 1] + cell[i:]
            for i in range(1, n):
                syms[(n, i, cell)] = \
                    cell[:i - 1] + (cell[i], cell[i - 1]) + cell[i + 1:]
    return make_precub(sig, dim, cells, labels, faces, syms)


def precub_terminal(sigma: Iterable[str], dim: int = 3) -> LsPrecubSet:
    sig = tuple(sorted(set(sigma)))
    return precub_free({x: x for x in sig}, sig, dim)


def construct_precub(kind: str, arg, sigma: Iterable[str] | None = None,
                     dim: int | None = None) -> LsPrecubSet:
    if kind == "cube":
        return precub_cube(arg, sigma, dim)
    if kind == "boundary":
        return precub_boundary(arg, sigma, dim)
    if kind == "free":
        return precub_free(arg, sigma, 3 if dim is None else dim)
    raise ValueError(f"unknown kind {kind!r}")


# ---------------------------------------------------------------------------
# Maps
# ---------------------------------------------------------------------------

@dataclass
class PrecubMap:
    """Dimensionwise cell map commuting with faces and symmetries and
    preserving label words."""

    dom: LsPrecubSet
    cod: LsPrecubSet
    cmap: dict[tuple[int, Id], Id]

    def on_cell(self, n: int, x: Id) -> Id:
        return self.cmap[(n, x)]

    def key(self):
        return tuple(sorted(((n, idkey(x), idkey(y))
                             for (n, x), y in self.cmap.items())))

    def __repr__(self) -> str:
        return f"PrecubMap({self.dom!r} -> {self.cod!r})"


def make_precub_map(dom: LsPrecubSet, cod: LsPrecubSet,
                    cmap: Mapping[tuple[int, Id], Id],
                    check: bool = True) -> PrecubMap:
    if check:
        if dom.sigma != cod.sigma or dom.dim != cod.dim:
            raise ValueError("maps require equal alphabet and bound")
        for n in range(dom.dim + 1):
            for x in dom.cells_at(n):
                y = cmap.get((n, x))
                if y is None or (n, y) not in cod.labels:
                    raise ValueError(f"cell ({n},{x!r}) not mapped")
                if dom.word(n, x) != cod.word(n, y):
                    raise ValueError(f"label word broken at ({n},{x!r})")
                for i in range(1, n + 1):
                    for alpha in (0, 1):
                        if cmap[(n - 1, dom.d(n, i, alpha, x))] != \
                                cod.d(n, i, alpha, y):
                            raise ValueError(f"face square broken at ({n},{x!r})")
                for i in range(1, n):
                    if cmap[(n, dom.s(n, i, x))] != cod.s(n, i, y):
                        raise ValueError(f"symmetry square broken at ({n},{x!r})")
    keep = {(n, x): cmap[(n, x)]
            for n in range(dom.dim + 1) for x in dom.cells_at(n)}
    return PrecubMap(dom, cod, keep)


def identity_precub_map(k: LsPrecubSet) -> PrecubMap:
    return make_precub_map(k, k, {(n, x): x for n in range(k.dim + 1)
                                  for x in k.cells_at(n)}, check=False)


def compose_precub(g: PrecubMap, f: PrecubMap) -> PrecubMap:
    if f.cod != g.dom:
        raise ValueError("maps are not composable")
    return make_precub_map(f.dom, g.cod,
                           {key: g.cmap[(key[0], y)] for key, y in f.cmap.items()},
                           check=False)


def is_cofibration_precub(f: PrecubMap) -> Verdict:
    """One-to-one in every dimension >= 1 (dimension 0 is unconstrained)."""
    for n in range(1, f.dom.dim + 1):
        seen: dict[Id, Id] = {}
        for x in f.dom.cells_at(n):
            y = f.on_cell(n, x)
            if y in seen:
                return Verdict(False, f"dimension {n} not injective",
                               (n, seen[y], x))
            seen[y] = x
    return Verdict(True)


def is_precub_isomorphism(f: PrecubMap) -> bool:
    for n in range(f.dom.dim + 1):
        if len(f.dom.cells_at(n)) != len(f.cod.cells_at(n)):
            return False
        if len({f.on_cell(n, x) for x in f.dom.cells_at(n)}) != \
                len(f.dom.cells_at(n)):
            return False
    return True


# ---------------------------------------------------------------------------
# Cylinder and product
# ---------------------------------------------------------------------------

def cylinder_precub(k: LsPrecubSet
                    ) -> tuple[LsPrecubSet, PrecubMap, PrecubMap, PrecubMap]:
    """Cells K_n x {0,1}^n; returns (cyl K, gamma0, gamma1, sigma)."""
    cells: dict[int, list[Id]] = {}
    labels: dict[tuple[int, Id], tuple[str, ...]] = {}
    faces: dict[tuple[int, int, int, Id], Id] = {}
    syms: dict[tuple[int, int, Id], Id] = {}
    for n in range(k.dim + 1):
        cells[n] = []
        for x in k.cells_at(n):
            for bits in itertools.product((0, 1), repeat=n):
                cell = (x, bits)
                cells[n].append(cell)
                labels[(n, cell)] = k.word(n, x)
                for i in range(1, n + 1):
                    for alpha in (0, 1):
                        faces[(n, i, alpha, cell)] = \
                            (k.d(n, i, alpha, x), bits[:i - 1] + bits[i:])
                for i in range(1, n):
                    syms[(n, i, cell)] = \
                        (k.s(n, i, x),
                         bits[:i - 1] + (bits[i], bits[i - 1]) + bits[i + 1:])
    cyl = make_precub(k.sigma, k.dim, cells, labels, faces, syms)
    gammas = tuple(
        make_precub_map(k, cyl, {(n, x): (x, (kk,) * n)
                                 for n in range(k.dim + 1)
                                 for x in k.cells_at(n)}, check=False)
        for kk in (0, 1))
    sig = make_precub_map(cyl, k, {(n, (x, bits)): x
                                   for n in range(k.dim + 1)
                                   for (x, bits) in cells[n]}, check=False)
    return cyl, gammas[0], gammas[1], sig


def product_precub(k: LsPrecubSet, l: LsPrecubSet
                   ) -> tuple[LsPrecubSet, PrecubMap, PrecubMap]:
    """Fibered product over the label words, operators componentwise."""
    if k.sigma != l.sigma or k.dim != l.dim:
        raise ValueError("product requires equal alphabet and bound")
    cells: dict[int, list[Id]] = {}
    labels: dict[tuple[int, Id], tuple[str, ...]] = {}
    faces: dict[tuple[int, int, int, Id], Id] = {}
    syms: dict[tuple[int, int, Id], Id] = {}
    for n in range(k.dim + 1):
        cells[n] = []
        by_word: dict[tuple, list[Id]] = {}
        for y in l.cells_at(n):
            by_word.setdefault(l.word(n, y), []).append(y)
        for x in k.cells_at(n):
            for y in by_word.get(k.word(n, x), ()):
                cell = (x, y)
                cells[n].append(cell)
                labels[(n, cell)] = k.word(n, x)
                for i in range(1, n + 1):
                    for alpha in (0, 1):
                        faces[(n, i, alpha, cell)] = \
                            (k.d(n, i, alpha, x), l.d(n, i, alpha, y))
                for i in range(1, n):
                    syms[(n, i, cell)] = (k.s(n, i, x), l.s(n, i, y))
    apex = make_precub(k.sigma, k.dim, cells, labels, faces, syms)
    p1 = make_precub_map(apex, k, {(n, xy): xy[0]
                                   for n in range(k.dim + 1)
                                   for xy in cells[n]}, check=False)
    p2 = make_precub_map(apex, l, {(n, xy): xy[1]
                                   for n in range(k.dim + 1)
                                   for xy in cells[n]}, check=False)
    return apex, p1, p2


# ---------------------------------------------------------------------------
# Colimits and quotients
# ---------------------------------------------------------------------------

class _UF:
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

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if idkey(rb) < idkey(ra):
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


@dataclass
class PrecubColimit:
    objects: tuple[LsPrecubSet, ...]
    apex: LsPrecubSet
    legs: tuple[PrecubMap, ...]

    def induced(self, maps: Sequence[PrecubMap], cod: LsPrecubSet) -> PrecubMap:
        cmap: dict[tuple[int, Id], Id] = {}
        for i, (obj, leg, h) in enumerate(zip(self.objects, self.legs, maps)):
            if h.dom != obj:
                raise ValueError(f"cocone map {i} has the wrong domain")
            for n in range(obj.dim + 1):
                for x in obj.cells_at(n):
                    cls = leg.on_cell(n, x)
                    val = h.on_cell(n, x)
                    if cmap.setdefault((n, cls), val) != val:
                        raise ValueError("cocone is not compatible")
        return make_precub_map(self.apex, cod, cmap)


def colimit_precub(objects: Sequence[LsPrecubSet],
                   arrows: Iterable[tuple[int, int, PrecubMap]] = (),
                   sigma: Iterable[str] | None = None,
                   dim: int | None = None) -> PrecubColimit:
    """Objectwise set colimit: disjoint union quotiented per dimension by
    the equivalence the arrows generate; operators are re-induced with a
    well-definedness assertion pass."""
    objects = tuple(objects)
    if objects:
        sig, bound = objects[0].sigma, objects[0].dim
        if any(o.sigma != sig or o.dim != bound for o in objects):
            raise ValueError("diagram objects must share alphabet and bound")
    elif sigma is None or dim is None:
        raise ValueError("empty diagram needs an alphabet and a bound")
    else:
        sig, bound = tuple(sorted(set(sigma))), dim
    uf = [_UF() for _ in range(bound + 1)]
    for i, obj in enumerate(objects):
        for n in range(bound + 1):
            for x in obj.cells_at(n):
                uf[n].find((i, x))
    for i, j, f in arrows:
        if f.dom != objects[i] or f.cod != objects[j]:
            raise ValueError("diagram arrow endpoints do not match")
        for n in range(bound + 1):
            for x in objects[i].cells_at(n):
                uf[n].union((i, x), (j, f.on_cell(n, x)))
    reps = [{key: uf[n].find(key) for key in uf[n].parent}
            for n in range(bound + 1)]
    cells: dict[int, list[Id]] = {n: sorted(set(reps[n].values()), key=idkey)
                                  for n in range(bound + 1)}
    labels: dict[tuple[int, Id], tuple[str, ...]] = {}
    faces: dict[tuple[int, int, int, Id], Id] = {}
    syms: dict[tuple[int, int, Id], Id] = {}
    for i, obj in enumerate(objects):
        for n in range(bound + 1):
            for x in obj.cells_at(n):
                rep = reps[n][(i, x)]
                w = obj.word(n, x)
                if labels.setdefault((n, rep), w) != w:
                    raise ValueError("label clash under identification")
                for ii in range(1, n + 1):
                    for alpha in (0, 1):
                        val = reps[n - 1][(i, obj.d(n, ii, alpha, x))]
                        if faces.setdefault((n, ii, alpha, rep), val) != val:
                            raise AssertionError("face operator ill-defined")
                for ii in range(1, n):
                    val = reps[n][(i, obj.s(n, ii, x))]
                    if syms.setdefault((n, ii, rep), val) != val:
                        raise AssertionError("symmetry operator ill-defined")
    apex = make_precub(sig, bound, cells, labels, faces, syms)
    legs = tuple(make_precub_map(obj, apex,
                                 {(n, x): reps[n][(i, x)]
                                  for n in range(bound + 1)
                                  for x in obj.cells_at(n)})
                 for i, obj in enumerate(objects))
    return PrecubColimit(objects, apex, legs)


def coproduct_precub(*objects: LsPrecubSet) -> PrecubColimit:
    return colimit_precub(objects, ())


def pushout_precub(f: PrecubMap, g: PrecubMap) -> PrecubColimit:
    """Pushout of X <--f-- A --g--> Y; legs are [A, X, Y]."""
    if f.dom != g.dom:
        raise ValueError("pushout needs a common source")
    return colimit_precub([f.dom, f.cod, g.cod], [(0, 1, f), (0, 2, g)])


def quotient_precub(k: LsPrecubSet,
                    pairs: Iterable[tuple[int, Id, Id]]
                    ) -> tuple[LsPrecubSet, PrecubMap]:
    """Quotient by the operator congruence generated by the given cell
    pairs; returns the quotient and the projection."""
    uf = [_UF() for _ in range(k.dim + 1)]
    queue = list(pairs)
    while queue:
        n, x, y = queue.pop()
        if not uf[n].union(x, y):
            continue
        for i in range(1, n + 1):
            for alpha in (0, 1):
                queue.append((n - 1, k.d(n, i, alpha, x), k.d(n, i, alpha, y)))
        for i in range(1, n):
            queue.append((n, k.s(n, i, x), k.s(n, i, y)))
    rep = [{x: uf[n].find(x) for x in k.cells_at(n)} for n in range(k.dim + 1)]
    cells = {n: sorted(set(rep[n].values()), key=idkey)
             for n in range(k.dim + 1)}
    labels: dict[tuple[int, Id], tuple[str, ...]] = {}
    faces: dict[tuple[int, int, int, Id], Id] = {}
    syms: dict[tuple[int, int, Id], Id] = {}
    for n in range(k.dim + 1):
        for x in k.cells_at(n):
            r = rep[n][x]
            w = k.word(n, x)
            if labels.setdefault((n, r), w) != w:
                raise ValueError("label clash in quotient")
            for i in range(1, n + 1):
                for alpha in (0, 1):
                    val = rep[n - 1][k.d(n, i, alpha, x)]
                    if faces.setdefault((n, i, alpha, r), val) != val:
                        raise AssertionError("face operator ill-defined")
            for i in range(1, n):
                val = rep[n][k.s(n, i, x)]
                if syms.setdefault((n, i, r), val) != val:
                    raise AssertionError("symmetry operator ill-defined")
    apex = make_precub(k.sigma, k.dim, cells, labels, faces, syms)
    proj = make_precub_map(k, apex, {(n, x): rep[n][x]
                                     for n in range(k.dim + 1)
                                     for x in k.cells_at(n)})
    return apex, proj


# ---------------------------------------------------------------------------
# The higher dimensional automata paradigm
# ---------------------------------------------------------------------------

def check_hda(k: LsPrecubSet) -> Verdict:
    """At most one filler per shell: no two distinct p-cells (p >= 2) may
    share all their faces."""
    for n in range(2, k.dim + 1):
        shells: dict[tuple, Id] = {}
        for x in k.cells_at(n):
            shell = tuple(k.d(n, i, alpha, x)
                          for i in range(1, n + 1) for alpha in (0, 1))
            if shell in shells:
                return Verdict(False, f"two {n}-cells share a shell",
                               (n, shells[shell], x))
            shells[shell] = x
    return Verdict(True)


def sh_reflect(k: LsPrecubSet) -> tuple[LsPrecubSet, PrecubMap]:
    """Reflection onto the paradigm: merge equal-shell cell pairs (with
    operator congruence) until none remain.  Terminates since each merge
    strictly decreases the total cell count."""
    cur = k
    unit = identity_precub_map(k)
    while True:
        v = check_hda(cur)
        if v:
            return cur, unit
        n, x, y = v.witness
        cur, proj = quotient_precub(cur, [(n, x, y)])
        unit = compose_precub(proj, unit)


# ---------------------------------------------------------------------------
# Hom search
# ---------------------------------------------------------------------------

def hom_set_precub(k: LsPrecubSet, l: LsPrecubSet,
                   pins: Mapping[tuple[int, Id], Id] | None = None,
                   limit: int | None = None,
                   injective: bool = False) -> list[PrecubMap]:
    """All maps k -> l by dimensionwise backtracking, deterministically
    ordered; ``pins`` fixes images of chosen cells."""
    if k.sigma != l.sigma or k.dim != l.dim:
        raise ValueError("hom requires equal alphabet and bound")
    pins = pins or {}
    items = [(n, x) for n in range(k.dim + 1) for x in k.cells_at(n)]
    by_word: dict[tuple[int, tuple], list[Id]] = {}
    for n in range(l.dim + 1):
        for y in l.cells_at(n):
            by_word.setdefault((n, l.word(n, y)), []).append(y)
    asg: dict[tuple[int, Id], Id] = {}
    used: list[set] = [set() for _ in range(k.dim + 1)]
    out: list[PrecubMap] = []

    def consistent(n: int, x: Id, y: Id) -> bool:
        if k.word(n, x) != l.word(n, y):
            return False
        for i in range(1, n + 1):
            for alpha in (0, 1):
                if asg[(n - 1, k.d(n, i, alpha, x))] != l.d(n, i, alpha, y):
                    return False
        for i in range(1, n):
            other = (n, k.s(n, i, x))
            if other in asg and asg[other] != l.s(n, i, y):
                return False
        return True

    def rec(idx: int) -> None:
        if limit is not None and len(out) >= limit:
            return
        if idx == len(items):
            out.append(make_precub_map(k, l, dict(asg), check=False))
            return
        n, x = items[idx]
        cands = (pins[(n, x)],) if (n, x) in pins \
            else by_word.get((n, k.word(n, x)), ())
        for y in cands:
            if injective and y in used[n]:
                continue
            asg[(n, x)] = y
            if injective:
                used[n].add(y)
            if consistent(n, x, y):
                rec(idx + 1)
            del asg[(n, x)]
            if injective:
                used[n].discard(y)

    rec(0)
    return sorted(out, key=lambda f: f.key())


def find_precub_isomorphism(k: LsPrecubSet, l: LsPrecubSet) -> PrecubMap | None:
    """First isomorphism k -> l if any."""
    if k.sigma != l.sigma or k.dim != l.dim:
        return None
    for n in range(max(k.dim, l.dim) + 1):
        kw = sorted(k.word(n, x) for x in k.cells_at(n))
        lw = sorted(l.word(n, y) for y in l.cells_at(n))
        if kw != lw:
            return None
    found = hom_set_precub(k, l, limit=1, injective=True)
    return found[0] if found else None
