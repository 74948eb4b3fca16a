"""Permutations, noncrossing partitions and the orders on them.

Permutations are stored in one-line notation with 1-based values.  The
product follows function composition, ``(u * w)(i) == u(w(i))``.

A noncrossing partition is a permutation whose cycles are all decreasing
("backwards") and whose cycle supports do not cross.

>>> w = Permutation((2, 3, 6, 1, 5, 4))
>>> w.cycles()
((6, 4, 1, 2, 3), (5,))
>>> is_noncrossing(Permutation.from_cycles(6, [(6, 3, 2, 1), (5, 4)]))
True
>>> is_noncrossing(Permutation((3, 4, 1, 2)))
False
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from math import comb

__all__ = [
    "Permutation",
    "NoncrossingPartition",
    "catalan",
    "is_noncrossing",
    "noncrossing",
    "kreweras_leq",
    "kreweras_meet",
    "kreweras_join",
    "cayley_edge",
    "bruhat_leq",
    "inversions",
    "noncrossing_inversions",
    "absolute_length",
    "enumerate_nc",
    "enumerate_nc_blocks",
    "backward_long_cycle",
    "insert_fixed_point",
    "insert_shifted",
]


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


@dataclass(frozen=True, order=True)
class Permutation:
    word: tuple[int, ...]

    def __post_init__(self):
        word = tuple(self.word)
        object.__setattr__(self, "word", word)
        if sorted(word) != list(range(1, len(word) + 1)):
            raise ValueError(f"not a permutation: {word}")

    @property
    def n(self) -> int:
        return len(self.word)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> "Permutation":
        word = list(range(1, n + 1))
        word[i - 1], word[j - 1] = j, i
        return cls(tuple(word))

    @classmethod
    def from_cycles(cls, n: int, cycles) -> "Permutation":
        """Build from cycles; ``(a b c)`` maps a->b->c->a."""
        word = list(range(1, n + 1))
        for cyc in cycles:
            cyc = tuple(cyc)
            for k, a in enumerate(cyc):
                word[a - 1] = cyc[(k + 1) % len(cyc)]
        return cls(tuple(word))

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        """Parse ``"231"`` or ``"2 3 1"`` or ``"2,3,1"``."""
        text = text.strip()
        if any(c in text for c in " ,"):
            parts = text.replace(",", " ").split()
            return cls(tuple(int(p) for p in parts))
        return cls(tuple(int(c) for c in text))

    def __call__(self, i: int) -> int:
        return self.word[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if self.n != other.n:
            raise ValueError("size mismatch")
        return Permutation(tuple(self.word[v - 1] for v in other.word))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, v in enumerate(self.word, 1):
            inv[v - 1] = i
        return Permutation(tuple(inv))

    def cycles(self, include_fixed: bool = True) -> tuple[tuple[int, ...], ...]:
        """Cycles, each listed from its largest element, sorted by that element
        in decreasing order."""
        seen = set()
        out = []
        for start in range(self.n, 0, -1):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            j = self(start)
            while j != start:
                cyc.append(j)
                seen.add(j)
                j = self(j)
            if include_fixed or len(cyc) > 1:
                out.append(tuple(cyc))
        return tuple(out)

    def length(self) -> int:
        return len(inversions(self))

    def act(self, vec):
        """``u . lam = (lam[u^-1(1)], ..., lam[u^-1(n)])``."""
        inv = self.inverse()
        return tuple(vec[inv(i) - 1] for i in range(1, self.n + 1))

    def cycle_str(self) -> str:
        cyc = self.cycles(include_fixed=False)
        if not cyc:
            return "()"
        return "".join("(" + "".join(str(a) if self.n < 10 else f"{a} " for a in c).strip() + ")"
                       for c in cyc)

    def __str__(self) -> str:
        if self.n < 10:
            return "".join(map(str, self.word))
        return " ".join(map(str, self.word))

    def to_json(self):
        return list(self.word)


def backward_long_cycle(n: int) -> Permutation:
    return Permutation.from_cycles(n, [tuple(range(n, 0, -1))])


def _is_backward(cyc: tuple[int, ...]) -> bool:
    # cycles() lists from the max, so decreasing order is required
    return all(cyc[k] > cyc[k + 1] for k in range(len(cyc) - 1))


def _crossing(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    for p, q in combinations(sorted(a), 2):
        inside = [x for x in b if p < x < q]
        if inside and len(inside) < len(b):
            return True
    return False


def is_noncrossing(w: Permutation) -> bool:
    cycles = w.cycles()
    if not all(_is_backward(c) for c in cycles):
        return False
    big = [c for c in cycles if len(c) > 1]
    return not any(_crossing(a, b) for a, b in combinations(big, 2))


@dataclass(frozen=True)
class NoncrossingPartition:
    perm: Permutation
    blocks: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return self.perm.n

    def block_of(self) -> dict[int, int]:
        return {a: k for k, blk in enumerate(self.blocks) for a in blk}

    def to_json(self):
        return [list(b) for b in self.blocks]

    def __str__(self) -> str:
        return self.perm.cycle_str()


def noncrossing(w: Permutation) -> NoncrossingPartition:
    if not is_noncrossing(w):
        raise ValueError(f"{w} is not a noncrossing partition")
    blocks = tuple(sorted(w.cycles(), key=lambda c: min(c)))
    return NoncrossingPartition(w, blocks)


def _as_perm(w) -> Permutation:
    return w.perm if isinstance(w, NoncrossingPartition) else w


def kreweras_leq(u, v) -> bool:
    """Block refinement."""
    u, v = _as_perm(u), _as_perm(v)
    label = {}
    for k, cyc in enumerate(v.cycles()):
        for a in cyc:
            label[a] = k
    return all(len({label[a] for a in cyc}) == 1 for cyc in u.cycles())


def _from_blocks(n: int, blocks) -> NoncrossingPartition:
    cycles = [tuple(sorted(b, reverse=True)) for b in blocks]
    return noncrossing(Permutation.from_cycles(n, cycles))


def kreweras_meet(u, v) -> NoncrossingPartition:
    """Blockwise intersection, which is again noncrossing."""
    u, v = _as_perm(u), _as_perm(v)
    blocks = []
    for a in u.cycles():
        for b in v.cycles():
            common = set(a) & set(b)
            if common:
                blocks.append(common)
    return _from_blocks(u.n, blocks)


def kreweras_join(u, v) -> NoncrossingPartition:
    """Finest noncrossing partition coarser than both."""
    u, v = _as_perm(u), _as_perm(v)
    blocks = [set(c) for c in u.cycles()] + [set(c) for c in v.cycles()]
    merged = True
    while merged:
        merged = False
        for x, y in combinations(range(len(blocks)), 2):
            a, b = blocks[x], blocks[y]
            if a & b or _crossing(tuple(a), tuple(b)):
                blocks[x] = a | b
                del blocks[y]
                merged = True
                break
    return _from_blocks(u.n, blocks)


def cayley_edge(u, w):
    """Return ``(i, j)`` with ``w == (i j) u``, or None."""
    u, w = _as_perm(u), _as_perm(w)
    d = w * u.inverse()
    moved = [i for i in range(1, d.n + 1) if d(i) != i]
    if len(moved) == 2:
        return tuple(moved)
    return None


def bruhat_leq(u, v) -> bool:
    """Tableau criterion: sorted prefixes of u are dominated by those of v."""
    u, v = _as_perm(u), _as_perm(v)
    for k in range(1, u.n):
        a = sorted(u.word[:k])
        b = sorted(v.word[:k])
        if any(x > y for x, y in zip(a, b)):
            return False
    return True


def inversions(w) -> frozenset[tuple[int, int]]:
    w = _as_perm(w)
    return frozenset((i, j) for i in range(1, w.n + 1) for j in range(i + 1, w.n + 1)
                     if w(i) > w(j))


def noncrossing_inversions(w) -> frozenset[tuple[int, int]]:
    """Inversions (i, j) for which w * (i j) is still noncrossing."""
    w = _as_perm(w)
    if not is_noncrossing(w):
        raise ValueError(f"{w} is not noncrossing")
    return frozenset((i, j) for (i, j) in inversions(w)
                     if is_noncrossing(w * Permutation.transposition(w.n, i, j)))


def absolute_length(w) -> int:
    w = _as_perm(w)
    return w.n - len(w.cycles())


def enumerate_nc(n: int) -> list[NoncrossingPartition]:
    """All of NC_n by filtering S_n (used up to n = 8)."""
    if n > 8:
        return enumerate_nc_blocks(n)
    out = []
    for word in permutations(range(1, n + 1)):
        w = Permutation(word)
        if is_noncrossing(w):
            out.append(noncrossing(w))
    return out


@lru_cache(maxsize=None)
def _nc_set_partitions(lo: int, hi: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    # noncrossing set partitions of {lo..hi}; block of lo decides the split
    if lo > hi:
        return ((),)
    out = []
    rest = list(range(lo + 1, hi + 1))
    for r in range(len(rest) + 1):
        for others in combinations(rest, r):
            block = (lo,) + others
            gaps = []
            bounds = list(block) + [hi + 1]
            for a, b in zip(bounds, bounds[1:]):
                gaps.append((a + 1, b - 1))
            parts = [()]
            for g in gaps:
                parts = [p + q for p in parts for q in _nc_set_partitions(*g)]
            out.extend(((block,) + p) for p in parts)
    return tuple(out)


def enumerate_nc_blocks(n: int) -> list[NoncrossingPartition]:
    """All of NC_n by recursion on the block containing the smallest element."""
    out = []
    for parts in _nc_set_partitions(1, n):
        cycles = [tuple(sorted(b, reverse=True)) for b in parts]
        out.append(noncrossing(Permutation.from_cycles(n, cycles)))
    out.sort(key=lambda x: x.perm.word)
    return out


def insert_fixed_point(w: Permutation, i: int) -> Permutation:
    """Embed S_{n-1} into S_n as the permutations fixing i."""
    word = []
    for k in range(1, w.n + 2):
        if k == i:
            word.append(i)
        else:
            v = w(k - (k > i))
            word.append(v + (v >= i))
    return Permutation(tuple(word))


def insert_shifted(w: Permutation, i: int) -> Permutation:
    """Insert 1 at position i of the one-line word and raise the other values.

    >>> str(insert_shifted(Permutation((1, 5, 6, 8, 4, 2, 3, 7)), 3))
    '261795348'
    """
    word = [v + 1 for v in w.word]
    word.insert(i - 1, 1)
    return Permutation(tuple(word))
