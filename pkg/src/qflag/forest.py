"""Bicolored nested forests and the words that build them.

A forest on ``n`` leaves is a tuple of planar binary trees whose leaves are
labelled by ``1..n``.  Internal nodes are black (``"B"``) or white (``"W"``).
Trees are kept sorted by their smallest leaf; two forests are equal exactly
when their trees, colors and leaf labels coincide.

Every internal node ``v`` is identified by its *label*: the largest leaf of
its left subtree.  Labels are unique inside a forest and survive whitening
and left edge deletion of other nodes, so they are used as node handles
throughout.

>>> F = forest_from_reseq(parse_word("r1- r1+ r2- e1 e3 r2+"))
>>> F
W(B(1,W(2,3)),6) B(4,5)
>>> sorted(str(w) for w in fixed_set(F))
['(632)', '(632)(54)', '(6321)', '(6321)(54)']
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator, Union

from .permnc import (
    NoncrossingPartition,
    Permutation,
    bruhat_leq,
    noncrossing,
    noncrossing_inversions,
)

BLACK = "B"
WHITE = "W"

RMINUS = "r-"
RPLUS = "r+"
E = "e"
_KIND_ORDER = {RMINUS: 0, RPLUS: 1, E: 2}


# --------------------------------------------------------------------------
# words

@dataclass(frozen=True, order=True)
class Letter:
    index: int
    kind: str

    def __post_init__(self):
        if self.kind not in _KIND_ORDER:
            raise ValueError(f"unknown letter kind {self.kind!r}")
        if self.index < 1:
            raise ValueError("letter index must be positive")

    def sort_key(self):
        return (self.index, _KIND_ORDER[self.kind])

    def __str__(self) -> str:
        if self.kind == E:
            return f"e{self.index}"
        return f"r{self.index}{self.kind[1]}"


def parse_letter(token: str) -> Letter:
    token = token.strip()
    if token.startswith("e"):
        return Letter(int(token[1:]), E)
    if token.startswith("r") and token[-1] in "+-":
        return Letter(int(token[1:-1]), "r" + token[-1])
    raise ValueError(f"cannot parse letter {token!r}")


def parse_word(text: str) -> tuple[Letter, ...]:
    """``"r1- e1 r2+"`` -> tuple of letters."""
    return tuple(parse_letter(t) for t in text.split())


def format_word(word: Iterable[Letter]) -> str:
    return " ".join(str(a) for a in word)


def is_reseq(word) -> bool:
    for k, a in enumerate(word, 1):
        bound = k if a.kind == RMINUS else k - 1
        if not 1 <= a.index <= bound:
            return False
    return True


def enumerate_reseq(n: int, kinds=(RMINUS, RPLUS, E)) -> Iterator[tuple[Letter, ...]]:
    """All words of length n obeying the positional bound."""
    def rec(prefix):
        k = len(prefix) + 1
        if k > n:
            yield prefix
            return
        for kind in kinds:
            bound = k if kind == RMINUS else k - 1
            for i in range(1, bound + 1):
                yield from rec(prefix + (Letter(i, kind),))
    yield from rec(())


# --------------------------------------------------------------------------
# trees

@dataclass(frozen=True)
class Node:
    color: str
    left: "Tree"
    right: "Tree"
    lo: int = field(init=False, compare=False, repr=False)
    hi: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "lo", _lo(self.left))
        object.__setattr__(self, "hi", _hi(self.right))

    @property
    def label(self) -> int:
        return _hi(self.left)

    def __repr__(self) -> str:
        return f"{self.color}({_fmt(self.left)},{_fmt(self.right)})"


Tree = Union[int, Node]


def _lo(t: Tree) -> int:
    return t if isinstance(t, int) else t.lo


def _hi(t: Tree) -> int:
    return t if isinstance(t, int) else t.hi


def _fmt(t: Tree) -> str:
    return str(t) if isinstance(t, int) else repr(t)


def tree_leaves(t: Tree) -> list[int]:
    if isinstance(t, int):
        return [t]
    return tree_leaves(t.left) + tree_leaves(t.right)


def tree_nodes(t: Tree) -> Iterator[Node]:
    """Preorder: node, then left subtree, then right subtree."""
    if isinstance(t, Node):
        yield t
        yield from tree_nodes(t.left)
        yield from tree_nodes(t.right)


def _relabel(t: Tree, f) -> Tree:
    if isinstance(t, int):
        return f(t)
    return Node(t.color, _relabel(t.left, f), _relabel(t.right, f))


def _replace_leaf(t: Tree, leaf: int, new: Tree) -> Tree:
    if isinstance(t, int):
        return new if t == leaf else t
    if not t.lo <= leaf <= t.hi:
        return t
    return Node(t.color, _replace_leaf(t.left, leaf, new), _replace_leaf(t.right, leaf, new))


# --------------------------------------------------------------------------
# forests

@dataclass(frozen=True)
class BnForest:
    trees: tuple
    n: int

    def __post_init__(self):
        trees = tuple(sorted(self.trees, key=_lo))
        object.__setattr__(self, "trees", trees)

    def __repr__(self) -> str:
        return " ".join(_fmt(t) for t in self.trees if isinstance(t, Node)) or "()"

    def nodes(self) -> list[Node]:
        return [v for t in self.trees for v in tree_nodes(t)]

    def node_map(self) -> dict[int, Node]:
        return {v.label: v for v in self.nodes()}

    def labels(self, color: str | None = None) -> frozenset[int]:
        return frozenset(v.label for v in self.nodes() if color is None or v.color == color)

    def black(self) -> frozenset[int]:
        return self.labels(BLACK)

    def white(self) -> frozenset[int]:
        return self.labels(WHITE)

    def size(self) -> int:
        """Number of black nodes."""
        return len(self.black())

    def right_children(self) -> frozenset[int]:
        """Labels of internal nodes that are right children."""
        return frozenset(v.right.label for v in self.nodes() if isinstance(v.right, Node))

    def blocks(self) -> list[list[int]]:
        return [tree_leaves(t) for t in self.trees]

    def to_json(self):
        def enc(t):
            if isinstance(t, int):
                return {"leaf": t}
            return {"color": t.color, "children": [enc(t.left), enc(t.right)]}
        return {"n": self.n, "trees": [enc(t) for t in self.trees]}

    @classmethod
    def from_json(cls, data) -> "BnForest":
        def dec(d):
            if "leaf" in d:
                return int(d["leaf"])
            a, b = d["children"]
            return Node(d["color"], dec(a), dec(b))
        return cls(tuple(dec(t) for t in data["trees"]), int(data["n"]))


def empty_forest(n: int = 0) -> BnForest:
    return BnForest(tuple(range(1, n + 1)), n)


def forest_from_trees(n: int, trees) -> BnForest:
    """Build from the non-singleton trees; missing labels become isolated leaves."""
    trees = list(trees)
    used = {a for t in trees for a in tree_leaves(t)}
    trees += [i for i in range(1, n + 1) if i not in used]
    return BnForest(tuple(trees), n)


def apply_letter(F: BnForest, a: Letter) -> BnForest:
    n = F.n
    if a.kind == RMINUS:
        if not 1 <= a.index <= n + 1:
            raise ValueError(f"{a} not allowed on {n} leaves")
        i = a.index
        trees = [_relabel(t, lambda x: x + (x >= i)) for t in F.trees] + [i]
        return BnForest(tuple(trees), n + 1)
    if not 1 <= a.index <= n:
        raise ValueError(f"{a} not allowed on {n} leaves")
    i = a.index
    color = BLACK if a.kind == E else WHITE
    new = Node(color, i, i + 1)
    trees = [_replace_leaf(_relabel(t, lambda x: x + (x > i)), i, new) for t in F.trees]
    return BnForest(tuple(trees), n + 1)


def forest_from_reseq(word) -> BnForest:
    if isinstance(word, str):
        word = parse_word(word)
    if not is_reseq(word):
        raise ValueError(f"not a valid word: {format_word(word)}")
    F = empty_forest(0)
    for a in word:
        F = apply_letter(F, a)
    return F


def words_equivalent(w1, w2) -> bool:
    return forest_from_reseq(w1) == forest_from_reseq(w2)


def _last_letter_options(F: BnForest):
    """Pairs (G, letter) with apply_letter(G, letter) == F."""
    n = F.n
    for t in F.trees:
        if isinstance(t, int):
            i = t
            rest = [_relabel(s, lambda x: x - (x > i)) for s in F.trees if s != t]
            yield BnForest(tuple(rest), n - 1), Letter(i, RMINUS)
    for v in F.nodes():
        if isinstance(v.left, int) and v.right == v.left + 1:
            i = v.left
            kind = E if v.color == BLACK else RPLUS
            trees = [_replace_node(t, v.label, lambda node: i) for t in F.trees]
            trees = [_relabel(s, lambda x: x - (x > i + 1)) for s in trees]
            yield BnForest(tuple(trees), n - 1), Letter(i, kind)


@lru_cache(maxsize=None)
def canonical_word(F: BnForest) -> tuple[Letter, ...]:
    """Lexicographically least word building F; letters compare by (index, kind)
    with r- < r+ < e."""
    if F.n == 0:
        return ()
    best = None
    for G, a in _last_letter_options(F):
        cand = tuple(x.sort_key() for x in canonical_word(G)) + (a.sort_key(),)
        if best is None or cand < best[0]:
            best = (cand, canonical_word(G) + (a,))
    return best[1]


# --------------------------------------------------------------------------
# node data

def tau(F: BnForest, label: int) -> tuple[int, int]:
    """The transposition (label, rightmost leaf of the node)."""
    v = F.node_map()[label]
    return (v.label, v.hi)


def spread(F: BnForest, label: int) -> tuple[int, int]:
    v = F.node_map()[label]
    return (v.lo, v.hi)


def spreads(F: BnForest) -> frozenset[tuple[int, int]]:
    return frozenset((v.lo, v.hi) for v in F.nodes())


def tau_product(n: int, pairs) -> Permutation:
    """Product of transpositions, leftmost factor applied last."""
    w = Permutation.identity(n)
    for i, j in pairs:
        w = w * Permutation.transposition(n, i, j)
    return w


def preorder_labels(F: BnForest) -> list[int]:
    return [v.label for v in F.nodes()]


def postorder_right_first(F: BnForest) -> list[int]:
    """Another linear extension (ancestors first): right subtree before left."""
    out = []

    def rec(t):
        if isinstance(t, Node):
            out.append(t.label)
            rec(t.right)
            rec(t.left)
    for t in reversed(F.trees):
        rec(t)
    return out


def ncperm_tau(F: BnForest, order=None) -> Permutation:
    nodes = F.node_map()
    order = preorder_labels(F) if order is None else order
    return tau_product(F.n, [(nodes[a].label, nodes[a].hi) for a in order])


def ncperm_blocks(F: BnForest) -> Permutation:
    cycles = [sorted(b, reverse=True) for b in F.blocks()]
    return Permutation.from_cycles(F.n, cycles)


def ncperm(F: BnForest) -> NoncrossingPartition:
    return noncrossing(ncperm_blocks(F))


# --------------------------------------------------------------------------
# local moves

def _replace_node(t: Tree, label: int, fn) -> Tree:
    if isinstance(t, int):
        return t
    if t.label == label:
        return fn(t)
    if not t.lo <= label <= t.hi:
        return t
    return Node(t.color, _replace_node(t.left, label, fn), _replace_node(t.right, label, fn))


def whiten(F: BnForest, label: int) -> BnForest:
    trees = [_replace_node(t, label, lambda v: Node(WHITE, v.left, v.right)) for t in F.trees]
    return BnForest(tuple(trees), F.n)


def delete_left_edge(F: BnForest, label: int) -> BnForest:
    """Detach the left subtree of the node as its own tree; the right child
    takes the node's place."""
    v = F.node_map()[label]
    trees = [_replace_node(t, label, lambda node: node.right) for t in F.trees]
    return BnForest(tuple(trees) + (v.left,), F.n)


def apply_choices(F: BnForest, choices: dict[int, str]) -> BnForest:
    """choices maps labels to 'e' (keep), '+' (whiten) or '-' (delete left edge)."""
    G = F
    for label, c in choices.items():
        if c == "+":
            G = whiten(G, label)
        elif c == "-":
            G = delete_left_edge(G, label)
        elif c != "e":
            raise ValueError(c)
    return G


def face_set(F: BnForest) -> set[BnForest]:
    black = sorted(F.black())
    return {apply_choices(F, dict(zip(black, cs))) for cs in product("e+-", repeat=len(black))}


def vert_set(F: BnForest) -> set[BnForest]:
    black = sorted(F.black())
    return {apply_choices(F, dict(zip(black, cs))) for cs in product("+-", repeat=len(black))}


def leq_re(G: BnForest, F: BnForest) -> bool:
    return G in face_set(F)


def fixed_set(F: BnForest) -> frozenset[NoncrossingPartition]:
    """Products of tau over the internal nodes minus a subset of the black ones."""
    black = F.black()
    order = preorder_labels(F)
    nodes = F.node_map()
    out = set()
    for mask in product((False, True), repeat=len(black)):
        drop = {b for b, m in zip(sorted(black), mask) if m}
        w = tau_product(F.n, [(a, nodes[a].hi) for a in order if a not in drop])
        out.add(noncrossing(w))
    return frozenset(out)


def fixed_set_from_vertices(F: BnForest) -> frozenset[NoncrossingPartition]:
    return frozenset(ncperm(G) for G in vert_set(F))


# --------------------------------------------------------------------------
# colored Tamari rotations and normal forms

def rotate(F: BnForest, label: int) -> BnForest:
    """At node v(A, W(B, C)) produce W(v(A, B), C)."""
    def fn(v):
        r = v.right
        if not (isinstance(r, Node) and r.color == WHITE):
            raise ValueError("rotation needs a white internal right child")
        return Node(WHITE, Node(v.color, v.left, r.left), r.right)
    return BnForest(tuple(_replace_node(t, label, fn) for t in F.trees), F.n)


def _normalize(t: Tree) -> Tree:
    if isinstance(t, int):
        return t
    color, left, right = t.color, _normalize(t.left), _normalize(t.right)
    while isinstance(right, Node) and right.color == WHITE:
        left = _normalize(Node(color, left, right.left))
        color, right = WHITE, right.right
    return Node(color, left, right)


def tamari_normal_form(F: BnForest) -> BnForest:
    return BnForest(tuple(_normalize(t) for t in F.trees), F.n)


def is_normal(F: BnForest) -> bool:
    return all(not (isinstance(v.right, Node) and v.right.color == WHITE) for v in F.nodes())


def for_to_nc(F: BnForest) -> NoncrossingPartition:
    if not is_normal(F):
        raise ValueError("forest is not in normal form")
    G = F
    for label in F.right_children():
        G = delete_left_edge(G, label)
    return ncperm(G)


def bruhat_max(ws) -> Permutation:
    ws = [w.perm if isinstance(w, NoncrossingPartition) else w for w in ws]
    tops = [w for w in ws if all(bruhat_leq(u, w) for u in ws)]
    if len(tops) != 1:
        raise ValueError("no Bruhat maximum")
    return tops[0]


# --------------------------------------------------------------------------
# Forest_n and the (F, S) construction

def is_plain(F: BnForest) -> bool:
    """All nodes black and every tree supported on an interval."""
    if F.white():
        return False
    return all(b == list(range(b[0], b[-1] + 1)) for b in F.blocks())


def _binary_trees(lo: int, hi: int) -> list[Tree]:
    if lo == hi:
        return [lo]
    out = []
    for m in range(lo, hi):
        for a in _binary_trees(lo, m):
            for b in _binary_trees(m + 1, hi):
                out.append(Node(BLACK, a, b))
    return out


def _compositions(n: int):
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in _compositions(n - first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def enumerate_forests(n: int) -> tuple[BnForest, ...]:
    """Forest_n: all-black forests whose trees sit on consecutive intervals."""
    out = []
    for comp in _compositions(n):
        start, parts = 1, []
        for size in comp:
            parts.append(_binary_trees(start, start + size - 1))
            start += size
        for trees in product(*parts):
            out.append(BnForest(tuple(trees), n))
    return tuple(sorted(out, key=_forest_key))


def enumerate_trees(n: int) -> tuple[BnForest, ...]:
    return tuple(F for F in enumerate_forests(n) if len(F.trees) == 1)


def _forest_key(F: BnForest):
    return (F.size(), tuple(x.sort_key() for x in canonical_word(F)))


def forests_from_words(n: int) -> set[BnForest]:
    """Forest_n via words (r1-)^(n-k) e_{i1} ... e_{ik}."""
    out = set()
    for k in range(n):
        prefix = (Letter(1, RMINUS),) * (n - k)

        def rec(word):
            if len(word) == n:
                out.add(forest_from_reseq(word))
                return
            for i in range(1, len(word) + 1):
                rec(word + (Letter(i, E),))
        rec(prefix)
    return out


@lru_cache(maxsize=None)
def enumerate_bnfor(n: int) -> tuple[BnForest, ...]:
    """All forests reachable by words of length n (deduplicated level by level)."""
    level = {empty_forest(0)}
    for k in range(1, n + 1):
        nxt = set()
        for F in level:
            for i in range(1, k + 1):
                nxt.add(apply_letter(F, Letter(i, RMINUS)))
            for i in range(1, k):
                nxt.add(apply_letter(F, Letter(i, RPLUS)))
                nxt.add(apply_letter(F, Letter(i, E)))
        level = nxt
    return tuple(sorted(level, key=_forest_key))


def pair_to_forest(F: BnForest, S) -> BnForest:
    """Left-edge-delete the right children in S, whiten the rest of S."""
    if not is_plain(F):
        raise ValueError("first argument must lie in Forest_n")
    S = frozenset(S)
    if not S <= F.labels():
        raise ValueError("S must be a set of internal node labels")
    rc = F.right_children()
    G = F
    for label in sorted(S):
        G = delete_left_edge(G, label) if label in rc else whiten(G, label)
    return G


def forest_for_nc(w) -> BnForest:
    """The forest in Forest_n whose spreads are the noncrossing inversions of w."""
    if isinstance(w, NoncrossingPartition):
        w = w.perm
    n = w.n
    inv = noncrossing_inversions(w)
    by_start: dict[int, list[int]] = {}
    for a, b in inv:
        by_start.setdefault(a, []).append(b)

    def build(a, b):
        if a == b:
            return a
        inner = [m for m in by_start.get(a, []) if m < b]
        if inner:
            m = max(inner)
            return Node(BLACK, build(a, m), build(m + 1, b))
        return Node(BLACK, a, build(a + 1, b))

    covered = set()
    trees = []
    for a, b in sorted(inv):
        if any(x <= a and b <= y for x, y in inv if (x, y) != (a, b)):
            continue
        trees.append(build(a, b))
        covered.update(range(a, b + 1))
    trees += [i for i in range(1, n + 1) if i not in covered]
    return BnForest(tuple(trees), n)


@lru_cache(maxsize=None)
def _forest_by_nc(n: int) -> dict:
    return {for_to_nc(F).perm: F for F in enumerate_forests(n)}


def forest_for_nc_lookup(w) -> BnForest:
    if isinstance(w, NoncrossingPartition):
        w = w.perm
    return _forest_by_nc(w.n)[w]


def forest_to_pair(G: BnForest) -> tuple[BnForest, frozenset[int]]:
    if not is_normal(G):
        raise ValueError("forest is not in normal form")
    F = forest_for_nc(for_to_nc(G))
    S = G.white() | (F.labels() - G.labels())
    return F, frozenset(S)


@lru_cache(maxsize=None)
def enumerate_normal_forms(n: int) -> tuple[BnForest, ...]:
    out = []
    for F in enumerate_forests(n):
        labels = sorted(F.labels())
        for mask in product((False, True), repeat=len(labels)):
            out.append(pair_to_forest(F, {a for a, m in zip(labels, mask) if m}))
    return tuple(sorted(set(out), key=_forest_key))


def containment_by_faces(G: BnForest, F: BnForest) -> bool:
    """Whether some face of F is Tamari equivalent to G."""
    target = tamari_normal_form(G)
    return any(tamari_normal_form(H) == target for H in face_set(F))


# --------------------------------------------------------------------------
# forests modulo trailing isolated leaves

def lter(F: BnForest) -> frozenset[int]:
    """Left leaves of terminal nodes."""
    return frozenset(v.left for v in F.nodes()
                     if isinstance(v.left, int) and v.right == v.left + 1)


def support_max(F: BnForest) -> int:
    return max((v.hi for v in F.nodes()), default=0)


def trim(F: BnForest) -> BnForest:
    """Drop trailing isolated leaves."""
    m = support_max(F)
    return BnForest(tuple(t for t in F.trees if _lo(t) <= m), m)


def pad(F: BnForest, m: int) -> BnForest:
    if m < F.n:
        if support_max(F) > m:
            raise ValueError("cannot shrink below the support")
        return trim(F) if m == support_max(F) else pad(trim(F), m)
    return BnForest(F.trees + tuple(range(F.n + 1, m + 1)), m)


def enumerate_lt_forests(n: int, max_nodes: int) -> tuple[BnForest, ...]:
    """Trimmed forests with at most max_nodes nodes and terminal left leaves in [n]."""
    out = set()
    for F in enumerate_forests(n + max_nodes):
        if F.size() <= max_nodes and lter(F) <= set(range(1, n + 1)):
            out.add(trim(F))
    return tuple(sorted(out, key=lambda F: (F.size(), F.n, repr(F))))


def enumerate_zigzag(n: int, max_nodes: int, include_empty: bool = True) -> tuple[BnForest, ...]:
    out = [F for F in enumerate_lt_forests(n, max_nodes) if lter(F) == {n}]
    if include_empty:
        out.insert(0, empty_forest(0))
    return tuple(out)


# --------------------------------------------------------------------------
# insertion of fixed points along tree words

def tree_word_permutations(word) -> tuple[Permutation, Permutation]:
    """For r1- e_{i1} ... e_{i(n-1)} return u = eps_{i(n-1)}...eps_{i1}(id) and
    v = eps_{i(n-1)+1}...eps_{i1+1}(id)."""
    from .permnc import insert_shifted
    if word[0] != Letter(1, RMINUS) or any(a.kind != E for a in word[1:]):
        raise ValueError("expected r1- followed by e letters")
    u = Permutation.identity(1)
    v = Permutation.identity(1)
    for a in word[1:]:
        u = insert_shifted(u, a.index)
        v = insert_shifted(v, a.index + 1)
    return u, v
