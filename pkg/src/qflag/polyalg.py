"""Integer polynomials in x_1..x_N, t_1..t_N and the operators acting on them.

Exponent vectors are dense tuples of length 2N, x-exponents first.

>>> N = 2
>>> f = x(1, N) * x(1, N)
>>> str(divided_difference(1, f))
'x1 + x2'
>>> str(quasi_dd(1, x(1, N) - t(1, N)))
'1'
>>> str(schubert_double(Permutation((2, 1))))
'x1 - t1'
"""

from __future__ import annotations

import random
from functools import lru_cache
from itertools import combinations_with_replacement, product
from typing import Iterable

from .forest import (
    BnForest,
    Letter,
    RMINUS,
    RPLUS,
    E,
    canonical_word,
    empty_forest,
    enumerate_forests,
    enumerate_lt_forests,
    enumerate_zigzag,
    forest_from_reseq,
    is_plain,
    lter,
    Node,
    trim,
    _relabel,
    _replace_node,
)
from .linalg import PRIME, in_span, solve_mod_p, symmetric_lift
from .permnc import Permutation, enumerate_nc

__all__ = [
    "MPoly", "x", "t", "const",
    "divided_difference", "r_minus", "r_plus", "quasi_dd", "quasi_dd_by_division",
    "star", "phi_program", "phi_apply",
    "schubert_double", "forest_poly_double", "forest_poly_single", "fundamental_double",
    "ev", "is_eqsym", "ideal_member", "expand_forest_basis", "graham_positive",
]


class MPoly:
    __slots__ = ("N", "terms")

    def __init__(self, N: int, terms=None):
        self.N = N
        clean = {}
        for e, c in (terms or {}).items():
            if c:
                clean[tuple(e)] = clean.get(tuple(e), 0) + c
        self.terms = {e: c for e, c in clean.items() if c}

    # construction -------------------------------------------------------
    @classmethod
    def _raw(cls, N, terms):
        p = cls.__new__(cls)
        p.N = N
        p.terms = terms
        return p

    def zero_like(self):
        return MPoly._raw(self.N, {})

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, MPoly):
            if other.N != self.N:
                raise ValueError(f"width mismatch {self.N} vs {other.N}")
            return other
        return const(other, self.N)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return MPoly._raw(self.N, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly._raw(self.N, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            if other == 0:
                return self.zero_like()
            return MPoly._raw(self.N, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return MPoly._raw(self.N, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = const(1, self.N)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.N == other.N and self.terms == other.terms
        return self == const(other, self.N)

    def __hash__(self):
        return hash((self.N, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # inspection ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self, d: int) -> bool:
        return all(sum(e) == d for e in self.terms)

    def x_free(self) -> bool:
        return all(not any(e[: self.N]) for e in self.terms)

    def uses_x(self, i: int) -> bool:
        return any(e[i - 1] for e in self.terms)

    def coefficients(self) -> list[int]:
        return list(self.terms.values())

    # variable maps ------------------------------------------------------
    def rename(self, mapping: dict[int, int], N: int | None = None) -> "MPoly":
        """Send variable slot k to slot mapping.get(k, k); slots index the
        exponent vector (x_i -> i-1, t_i -> N+i-1)."""
        N_out = self.N if N is None else N
        out: dict = {}
        for e, c in self.terms.items():
            ne = [0] * (2 * N_out)
            for k, a in enumerate(e):
                if a:
                    ne[mapping.get(k, k)] += a
            ne = tuple(ne)
            v = out.get(ne, 0) + c
            if v:
                out[ne] = v
            else:
                out.pop(ne, None)
        return MPoly._raw(N_out, out)

    def substitute(self, mapping: dict[int, "MPoly"]) -> "MPoly":
        """Replace variable slots by polynomials (same width)."""
        out = self.zero_like()
        powers: dict = {}
        for e, c in self.terms.items():
            keep = [0] * (2 * self.N)
            term = None
            for k, a in enumerate(e):
                if not a:
                    continue
                if k in mapping:
                    key = (k, a)
                    if key not in powers:
                        powers[key] = mapping[k] ** a
                    term = powers[key] if term is None else term * powers[key]
                else:
                    keep[k] = a
            mono = MPoly._raw(self.N, {tuple(keep): c})
            out = out + (mono if term is None else mono * term)
        return out

    def set_zero(self, slots: Iterable[int]) -> "MPoly":
        slots = set(slots)
        return MPoly._raw(self.N, {e: c for e, c in self.terms.items()
                                   if not any(e[k] for k in slots)})

    def resize(self, N: int) -> "MPoly":
        """Change the alphabet size; dropped variables are set to zero."""
        if N >= self.N:
            pad = (0,) * (N - self.N)
            return MPoly._raw(N, {e[: self.N] + pad + e[self.N:] + pad: c
                                  for e, c in self.terms.items()})
        out = {}
        for e, c in self.terms.items():
            if any(e[N: self.N]) or any(e[self.N + N:]):
                continue
            out[e[:N] + e[self.N: self.N + N]] = c
        return MPoly._raw(N, out)

    # text ---------------------------------------------------------------
    def __str__(self) -> str:
        if not self.terms:
            return "0"
        N = self.N
        keys = sorted(self.terms, key=lambda e: (-sum(e), tuple(-a for a in e)))
        parts = []
        for e in keys:
            c = self.terms[e]
            vars_ = []
            for k, a in enumerate(e):
                if a:
                    name = f"x{k + 1}" if k < N else f"t{k - N + 1}"
                    vars_.append(name if a == 1 else f"{name}^{a}")
            body = "*".join(vars_)
            mag = abs(c)
            if not body:
                s = str(mag)
            elif mag == 1:
                s = body
            else:
                s = f"{mag}*{body}"
            parts.append(("-" if c < 0 else "+", s))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, s in parts[1:]:
            out += f" {sign} {s}"
        return out

    __repr__ = __str__

    def to_json(self):
        N = self.N
        return [{"coef": c, "xexp": list(e[:N]), "texp": list(e[N:])}
                for e, c in sorted(self.terms.items(), reverse=True)]

    @classmethod
    def from_json(cls, data, N: int) -> "MPoly":
        return cls(N, {tuple(d["xexp"]) + tuple(d["texp"]): d["coef"] for d in data})


def x(i: int, N: int) -> MPoly:
    e = [0] * (2 * N)
    e[i - 1] = 1
    return MPoly._raw(N, {tuple(e): 1})


def t(i: int, N: int) -> MPoly:
    e = [0] * (2 * N)
    e[N + i - 1] = 1
    return MPoly._raw(N, {tuple(e): 1})


def const(c: int, N: int) -> MPoly:
    return MPoly._raw(N, {(0,) * (2 * N): c} if c else {})


def _xs(i, N):  # slot of x_i
    return i - 1


def _ts(i, N):  # slot of t_i
    return N + i - 1


# --------------------------------------------------------------------------
# operators

def divided_difference(i: int, f: MPoly) -> MPoly:
    """(f - s_i f) / (x_i - x_{i+1})."""
    N = f.N
    if not 1 <= i < N:
        raise ValueError("index out of range")
    a_slot, b_slot = i - 1, i
    out: dict = {}
    for e, c in f.terms.items():
        a, b = e[a_slot], e[b_slot]
        if a == b:
            continue
        sign = 1 if a > b else -1
        lo, hi = min(a, b), max(a, b)
        base = list(e)
        for k in range(hi - lo):
            base[a_slot] = lo + hi - lo - 1 - k
            base[b_slot] = lo + k
            if sign < 0:
                base[a_slot], base[b_slot] = base[b_slot], base[a_slot]
            key = tuple(base)
            v = out.get(key, 0) + sign * c
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return MPoly._raw(N, out)


def mask_index(i: int, A, n: int) -> int:
    """The i-th element of [n] minus A."""
    rest = [j for j in range(1, n + 1) if j not in set(A or ())]
    return rest[i - 1]


def r_minus(i: int, f: MPoly, A=None, n: int | None = None) -> MPoly:
    """x_i -> t_{i,A}, x_j -> x_{j-1} for j > i."""
    N = f.N
    n = N if n is None else n
    ti = mask_index(i, A, n)
    mapping = {_xs(i, N): _ts(ti, N)}
    for j in range(i + 1, N + 1):
        mapping[_xs(j, N)] = _xs(j - 1, N)
    return f.rename(mapping)


def r_plus(i: int, f: MPoly, A=None, n: int | None = None) -> MPoly:
    """x_{i+1} -> t_{i,A}, x_j -> x_{j-1} for j > i+1."""
    N = f.N
    n = N if n is None else n
    ti = mask_index(i, A, n)
    mapping = {}
    if i + 1 <= N:
        mapping[_xs(i + 1, N)] = _ts(ti, N)
    for j in range(i + 2, N + 1):
        mapping[_xs(j, N)] = _xs(j - 1, N)
    return f.rename(mapping)


def div_linear(f: MPoly, slot: int, other: MPoly):
    """Divide f by (v - other) where v is the variable in ``slot`` and other
    does not involve v.  Returns (quotient, remainder)."""
    N = f.N
    by_power: dict[int, dict] = {}
    for e, c in f.terms.items():
        k = e[slot]
        e2 = list(e)
        e2[slot] = 0
        by_power.setdefault(k, {})[tuple(e2)] = c
    if not by_power:
        return f.zero_like(), f.zero_like()
    d = max(by_power)
    coef = {k: MPoly._raw(N, v) for k, v in by_power.items()}
    v = MPoly._raw(N, {tuple(1 if s == slot else 0 for s in range(2 * N)): 1})
    q_coeffs = [f.zero_like()] * max(d, 1)
    prev = f.zero_like()
    for k in range(d, 0, -1):
        cur = coef.get(k, f.zero_like()) + other * prev
        q_coeffs[k - 1] = cur
        prev = cur
    rem = coef.get(0, f.zero_like()) + other * prev if d >= 1 else coef.get(0, f.zero_like())
    q = f.zero_like()
    vp = const(1, N)
    for k in range(d):
        q = q + q_coeffs[k] * vp
        vp = vp * v
    return q, rem


def quasi_dd(i: int, f: MPoly, A=None, n: int | None = None) -> MPoly:
    """e_{i,A} f, computed as r^-_{i,A} of the divided difference when i < N
    and by exact division otherwise."""
    if i < f.N:
        return r_minus(i, divided_difference(i, f), A, n)
    return quasi_dd_by_division(i, f, A, n)


def quasi_dd_by_division(i: int, f: MPoly, A=None, n: int | None = None) -> MPoly:
    """(r^+ f - r^- f) / (x_i - t_{i,A}) by synthetic division."""
    N = f.N
    n = N if n is None else n
    num = r_plus(i, f, A, n) - r_minus(i, f, A, n)
    q, rem = div_linear(num, _xs(i, N), t(mask_index(i, A, n), N))
    if not rem.is_zero():
        raise ArithmeticError("division was not exact")
    return q


def star(A, B, n: int) -> frozenset[int]:
    """A * B = {([n] - B)_i : i in A} | B.

    >>> sorted(star({2}, {3}, 4))
    [2, 3]
    """
    A, B = frozenset(A), frozenset(B)
    if len(A) + len(B) > n:
        raise ValueError("|A| + |B| exceeds n")
    if not A <= set(range(1, n - len(B) + 1)) or not B <= set(range(1, n + 1)):
        raise ValueError("need A inside [n - |B|] and B inside [n]")
    rest = [j for j in range(1, n + 1) if j not in B]
    return frozenset(rest[i - 1] for i in A) | B


def phi_program(word) -> list[tuple[Letter, frozenset[int]]]:
    """Operators in application order: (letter, mask)."""
    if isinstance(word, BnForest):
        word = canonical_word(word)
    n = len(word)
    A: frozenset[int] = frozenset()
    out = []
    for a in reversed(word):
        out.append((a, A))
        A = star({a.index}, A, n)
    return out


def phi_apply(word, f: MPoly) -> MPoly:
    if isinstance(word, BnForest):
        word = canonical_word(word)
    n = len(word)
    if f.N < n or any(f.uses_x(j) for j in range(n + 1, f.N + 1)):
        raise ValueError("alphabet mismatch")
    for a, A in phi_program(word):
        if a.kind == RMINUS:
            f = r_minus(a.index, f, A, n)
        elif a.kind == RPLUS:
            f = r_plus(a.index, f, A, n)
        else:
            f = quasi_dd(a.index, f, A, n) if a.index < f.N else quasi_dd_by_division(a.index, f, A, n)
    return f


# --------------------------------------------------------------------------
# Schubert polynomials

def schubert_top(n: int) -> MPoly:
    p = const(1, n)
    for i in range(1, n + 1):
        for j in range(1, n + 1 - i):
            p = p * (x(i, n) - t(j, n))
    return p


@lru_cache(maxsize=None)
def _schub(word: tuple[int, ...], choose_last: bool) -> MPoly:
    n = len(word)
    if word == tuple(range(n, 0, -1)):
        return schubert_top(n)
    ascents = [i for i in range(1, n) if word[i - 1] < word[i]]
    i = ascents[-1] if choose_last else ascents[0]
    up = list(word)
    up[i - 1], up[i] = up[i], up[i - 1]
    return divided_difference(i, _schub(tuple(up), choose_last))


def schubert_double(w: Permutation, route: str = "first") -> MPoly:
    """Double Schubert polynomial, by divided differences from the longest element.

    route picks the ascent used at each step ("first" or "last")."""
    return _schub(tuple(w.word), route == "last")


# --------------------------------------------------------------------------
# forest polynomials

def ev(w: Permutation, f: MPoly) -> MPoly:
    """x_i -> t_{w(i)}."""
    N = f.N
    if w.n > N:
        raise ValueError("permutation larger than alphabet")
    mapping = {_xs(i, N): _ts(w(i), N) for i in range(1, w.n + 1)}
    return f.rename(mapping)


def _monomials(nvars: int, d: int):
    for combo in combinations_with_replacement(range(nvars), d):
        e = [0] * nvars
        for k in combo:
            e[k] += 1
        yield tuple(e)


def _remove_terminal(F: BnForest, i: int) -> BnForest:
    v = next(v for v in F.nodes() if v.left == i and v.right == i + 1)
    trees = [_replace_node(s, v.label, lambda node: i) for s in F.trees]
    trees = [_relabel(s, lambda a: a - (a > i + 1)) for s in trees]
    return BnForest(tuple(trees), F.n - 1)


def _skip_t(f: MPoly, i: int, N: int) -> MPoly:
    """t_j -> t_{j + [j >= i]} and widen to N."""
    g = f.resize(N)
    mapping = {_ts(j, N): _ts(j + (j >= i), N) for j in range(i, f.N + 1)}
    return g.rename(mapping)


class SolveError(RuntimeError):
    pass


@lru_cache(maxsize=None)
def _forest_poly_trimmed(F: BnForest) -> MPoly:
    m = F.n
    d = F.size()
    if d == 0:
        return const(1, max(m, 1))
    N = m
    # unknowns: monomials of degree d in x_1..x_{m-1}, t_1..t_m
    cols = [ex[: m - 1] + (0,) + ex[m - 1:] for ex in _monomials(2 * m - 1, d)]
    equations: dict = {}

    def add(key, k, c):
        row = equations.setdefault(key, {})
        row[k] = row.get(k, 0) + c

    targets = {}
    terminals = lter(F)
    for i in range(1, m):
        if i in terminals:
            G = trim(_remove_terminal(F, i))
            PG = _forest_poly_trimmed(G) if G.n else const(1, 1)
            targets[i] = _skip_t(PG, i, N)
        else:
            targets[i] = MPoly._raw(N, {})
    for k, ex in enumerate(cols):
        mono = MPoly._raw(N, {ex: 1})
        for i in range(1, m):
            for e, c in quasi_dd(i, mono).terms.items():
                add(("e", i, e), k, c)
        at_t = mono.rename({_xs(j, N): _ts(j, N) for j in range(1, N + 1)})
        for e, c in at_t.terms.items():
            add(("v", e), k, c)
    rhs_map = {}
    for i, tg in targets.items():
        for e, c in tg.terms.items():
            rhs_map[("e", i, e)] = c
            equations.setdefault(("e", i, e), {})
    keys = list(equations)
    rows = [equations[key] for key in keys]
    rhs = [rhs_map.get(key, 0) for key in keys]
    sol, full = solve_mod_p(rows, rhs, len(cols))
    if sol is None:
        raise SolveError(f"inconsistent system for {F!r}")
    if not full:
        raise SolveError(f"solution not unique for {F!r}")
    P = MPoly(N, {cols[k]: symmetric_lift(v) for k, v in enumerate(sol) if v})
    _verify_forest_poly(F, P, targets)
    return P


def _verify_forest_poly(F: BnForest, P: MPoly, targets) -> None:
    N = P.N
    if P.uses_x(N):
        raise SolveError("depends on the last x variable")
    at_t = P.rename({_xs(j, N): _ts(j, N) for j in range(1, N + 1)})
    if not at_t.is_zero():
        raise SolveError("does not vanish at x = t")
    for i, tg in targets.items():
        if quasi_dd(i, P) != tg:
            raise SolveError(f"e_{i} constraint fails for {F!r}")


def forest_poly_double(F: BnForest, n: int | None = None) -> MPoly:
    """Double forest polynomial of an all-black interval forest.

    With n at least the support, the polynomial is returned over n letters;
    with smaller n it is the n-truncated polynomial (x_j, t_j -> 0 for j > n)."""
    if not is_plain(F):
        raise ValueError("forest must be all black with interval trees")
    T = trim(F)
    P = _forest_poly_trimmed(T)
    if T.n == 0:
        return const(1, n if n is not None else max(F.n, 1))
    if n is None:
        n = F.n
    return P.resize(n)


def forest_poly_single(F: BnForest, n: int | None = None) -> MPoly:
    P = forest_poly_double(F, n)
    return P.set_zero(range(P.N, 2 * P.N))


def fundamental_double(Z: BnForest, n: int) -> MPoly:
    if Z.size() and lter(Z) != {n}:
        raise ValueError("not a zigzag forest for this n")
    return forest_poly_double(Z, n)


# --------------------------------------------------------------------------
# quasisymmetry and the ideal

def is_eqsym(f: MPoly, n: int | None = None) -> bool:
    n = f.N if n is None else n
    return all(r_minus(i, f) == r_plus(i, f) for i in range(1, n))


def ev_nc(f: MPoly, n: int) -> dict:
    return {w.perm: ev(w.perm, f) for w in enumerate_nc(n)}


def ideal_member(f: MPoly, n: int) -> bool:
    return all(ev(w.perm, f).is_zero() for w in enumerate_nc(n))


def expand_forest_basis(f: MPoly, n: int):
    """Coefficients [Phi_F] f over Forest_n and the remainder."""
    if f.N != n:
        raise ValueError("alphabet mismatch")
    coeffs = {}
    rem = f
    for F in enumerate_forests(n):
        c = phi_apply(F, f)
        coeffs[F] = c
        if not c.is_zero():
            rem = rem - c * forest_poly_double(F, n)
    return coeffs, rem


def ideal_generators(n: int, max_nodes: int) -> list[MPoly]:
    """P_Z - P_Z(t;t) for nonempty zigzag forests; the second term is zero."""
    return [fundamental_double(Z, n) for Z in enumerate_zigzag(n, max_nodes, include_empty=False)]


def in_single_ideal(f: MPoly, n: int) -> bool:
    """Membership of a homogeneous t-free f in the ideal generated by the
    nonempty single fundamental polynomials, by linear algebra over Q."""
    d = f.degree()
    if f.is_zero():
        return True
    gens = [forest_poly_single(Z, n) for Z in enumerate_zigzag(n, d, include_empty=False)]
    span = []
    for g in gens:
        k = d - g.degree()
        for ex in _monomials(n, k):
            span.append(g * MPoly._raw(n, {ex + (0,) * n: 1}))
    basis = [ex + (0,) * n for ex in _monomials(n, d)]
    vecs = [[g.terms.get(b, 0) for b in basis] for g in span]
    target = [f.terms.get(b, 0) for b in basis]
    if any(e not in set(basis) for e in f.terms):
        raise ValueError("expected a homogeneous t-free polynomial")
    return in_span(vecs, target)


# --------------------------------------------------------------------------
# positivity

NOT_APPLICABLE = "not-applicable"


def graham_positive(p: MPoly, n: int | None = None):
    """True/False for Graham positivity of a t-only polynomial; the string
    NOT_APPLICABLE when p is not translation invariant."""
    if not p.x_free():
        raise ValueError("expected a polynomial in t only")
    N = p.N
    n = N if n is None else n
    s = x(1, N)
    shifted = p.substitute({_ts(i, N): t(i, N) + s for i in range(1, n + 1)})
    if shifted != p:
        return NOT_APPLICABLE
    # t_1 = 0, t_i = a_1 + ... + a_{i-1}, with a_k stored in x_k
    sub = {_ts(1, N): const(0, N)}
    acc = const(0, N)
    for i in range(2, n + 1):
        acc = acc + x(i - 1, N)
        sub[_ts(i, N)] = acc
    q = p.substitute(sub)
    return all(c > 0 for c in q.coefficients())


def random_poly(N: int, max_degree: int, rng: random.Random, nterms: int = 6,
                coef: int = 3) -> MPoly:
    out = {}
    for _ in range(nterms):
        d = rng.randint(0, max_degree)
        e = [0] * (2 * N)
        for _ in range(d):
            e[rng.randrange(2 * N)] += 1
        out[tuple(e)] = out.get(tuple(e), 0) + rng.randint(-coef, coef)
    return MPoly(N, out)
