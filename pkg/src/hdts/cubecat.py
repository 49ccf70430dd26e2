"""The finite symmetric cube category.

An arrow [m] -> [n] between cube vertex sets {0,1}^m -> {0,1}^n is encoded
by its characteristic table ``fhat``: a map {1..n} -> {1..m} u {-inf,+inf}
whose finite part is a bijection onto {1..m}.  The underlying set map is
(e_1..e_m) |-> (e_{fhat(1)}, .., e_{fhat(n)}) with e_{-inf}=0, e_{+inf}=1.
Composition of arrows composes the tables contravariantly.

Arrows act on label words contravariantly: the source word of an arrow
with target word b is a_i = b_j where fhat(j) = i.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

NEG = "-inf"
POS = "+inf"

Entry = int | str  # 1-based axis index, or NEG/POS


@dataclass(frozen=True)
class CubeArrow:
    """Arrow [m] -> [n]; ``fhat[j-1]`` is the table value at j in {1..n}."""

    m: int
    n: int
    fhat: tuple[Entry, ...]

    def __post_init__(self) -> None:
        if len(self.fhat) != self.n:
            raise ValueError("table length must equal target dimension")
        finite = [v for v in self.fhat if isinstance(v, int)]
        if sorted(finite) != list(range(1, self.m + 1)):
            raise ValueError("finite part of the table must biject onto {1..m}")

    def apply_states(self, eps: Sequence[int]) -> tuple[int, ...]:
        """The underlying vertex map {0,1}^m -> {0,1}^n."""
        if len(eps) != self.m:
            raise ValueError("vertex has wrong dimension")
        out = []
        for v in self.fhat:
            if v == NEG:
                out.append(0)
            elif v == POS:
                out.append(1)
            else:
                out.append(eps[v - 1])
        return tuple(out)

    def axis_image(self, i: int) -> int:
        """The target axis j with fhat(j) = i, for a source axis i."""
        return self.fhat.index(i) + 1

    def source_word(self, target_word: Sequence[str]) -> tuple[str, ...]:
        """The word induced on the source from a word on the target."""
        if len(target_word) != self.n:
            raise ValueError("word has wrong length")
        out: list[str] = [""] * self.m
        for j, v in enumerate(self.fhat, start=1):
            if isinstance(v, int):
                out[v - 1] = target_word[j - 1]
        return tuple(out)

    def is_identity(self) -> bool:
        return self.m == self.n and self.fhat == tuple(range(1, self.n + 1))


def identity_arrow(n: int) -> CubeArrow:
    return CubeArrow(n, n, tuple(range(1, n + 1)))


def face(i: int, alpha: int, n: int) -> CubeArrow:
    """The face arrow [n-1] -> [n] inserting constant ``alpha`` at slot i."""
    if not 1 <= i <= n:
        raise ValueError("face index out of range")
    table: list[Entry] = []
    for j in range(1, n + 1):
        if j == i:
            table.append(NEG if alpha == 0 else POS)
        elif j < i:
            table.append(j)
        else:
            table.append(j - 1)
    return CubeArrow(n - 1, n, tuple(table))


def symmetry(i: int, n: int) -> CubeArrow:
    """The symmetry arrow [n] -> [n] swapping adjacent slots i, i+1."""
    if not 1 <= i <= n - 1:
        raise ValueError("symmetry index out of range")
    table = list(range(1, n + 1))
    table[i - 1], table[i] = table[i], table[i - 1]
    return CubeArrow(n, n, tuple(table))


def arrow_compose(g: CubeArrow, f: CubeArrow) -> CubeArrow:
    """g after f; tables compose contravariantly (f's table after g's)."""
    if f.n != g.m:
        raise ValueError("arrows are not composable")
    table: list[Entry] = []
    for v in g.fhat:
        if isinstance(v, int):
            table.append(f.fhat[v - 1])
        else:
            table.append(v)
    return CubeArrow(f.m, g.n, tuple(table))


def _entry_key(v: Entry):
    if isinstance(v, int):
        return (0, v)
    return (1, 0) if v == NEG else (1, 1)


def arrow_key(a: CubeArrow):
    return (a.m, a.n, tuple(_entry_key(v) for v in a.fhat))


@lru_cache(maxsize=None)
def enumerate_arrows(m: int, n: int) -> tuple[CubeArrow, ...]:
    """All arrows [m] -> [n], in a fixed deterministic order."""
    if m > n:
        return ()
    out = []
    for finite_slots in itertools.combinations(range(n), m):
        free = [j for j in range(n) if j not in finite_slots]
        for perm in itertools.permutations(range(1, m + 1)):
            base: list[Entry] = [0] * n
            for slot, val in zip(finite_slots, perm):
                base[slot] = val
            for signs in itertools.product((NEG, POS), repeat=len(free)):
                table = list(base)
                for slot, sg in zip(free, signs):
                    table[slot] = sg
                out.append(CubeArrow(m, n, tuple(table)))
    return tuple(sorted(out, key=arrow_key))


def generators_into(n: int) -> tuple[CubeArrow, ...]:
    """All face arrows [n-1] -> [n] and symmetry arrows [n] -> [n]."""
    gens = [face(i, alpha, n) for i in range(1, n + 1) for alpha in (0, 1)]
    gens += [symmetry(i, n) for i in range(1, n)]
    return tuple(gens)


def factor_arrow(f: CubeArrow) -> tuple[CubeArrow, ...]:
    """Factor f into faces and symmetries: returns [g_1, ..., g_k] with
    f = g_k o ... o g_1 (g_1 innermost).

    Canonical form: the residual permutation as adjacent transpositions
    in bubble order, then constant insertions in increasing position order.
    """
    # Peel insertions outermost first (largest constant slot of the table).
    peeled: list[CubeArrow] = []
    table = list(f.fhat)
    n = f.n
    while n > f.m:
        slot = max(j for j in range(1, n + 1) if not isinstance(table[j - 1], int))
        alpha = 0 if table[slot - 1] == NEG else 1
        peeled.append(face(slot, alpha, n))
        table = table[:slot - 1] + table[slot:]
        n -= 1
    # The rest is a permutation p of {1..m} (table[j-1] = p(j)); bubbling it
    # to the identity records swaps whose reverse rebuilds p innermost-first.
    m = f.m
    work = list(table)
    swaps: list[CubeArrow] = []
    for pos in range(m):
        for j in range(m - 1, pos, -1):
            if work[j - 1] > work[j]:
                work[j - 1], work[j] = work[j], work[j - 1]
                swaps.append(symmetry(j, m))
    return tuple(reversed(swaps)) + tuple(reversed(peeled))


def compose_chain(factors: Sequence[CubeArrow], m: int) -> CubeArrow:
    """Compose g_k o ... o g_1 given as [g_1, ..., g_k]."""
    acc = identity_arrow(m)
    for g in factors:
        acc = arrow_compose(g, acc)
    return acc


def generator_kind(g: CubeArrow) -> tuple:
    """Classify a generator arrow: ("face", i, alpha) or ("sym", i)."""
    if g.n == g.m + 1:
        for i in range(1, g.n + 1):
            for alpha in (0, 1):
                if face(i, alpha, g.n) == g:
                    return ("face", i, alpha)
    if g.n == g.m:
        for i in range(1, g.n):
            if symmetry(i, g.n) == g:
                return ("sym", i)
        if g.is_identity():
            return ("id",)
    raise ValueError(f"{g} is not a generator arrow")
