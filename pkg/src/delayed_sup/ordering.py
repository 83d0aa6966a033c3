"""Knuth-Bendix ordering and its multiset extensions to literals and clauses."""
from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Sequence

from .terms import TOP, Symbol, Term, occurs


class Order(enum.Enum):
    GREATER = ">"
    LESS = "<"
    EQUAL = "="
    INCOMPARABLE = "?"

    def flip(self) -> "Order":
        return _FLIP[self]


GREATER, LESS, EQUAL, INCOMPARABLE = Order.GREATER, Order.LESS, Order.EQUAL, Order.INCOMPARABLE
_FLIP = {GREATER: LESS, LESS: GREATER, EQUAL: EQUAL, INCOMPARABLE: INCOMPARABLE}


def not_leq(r: Order) -> bool:
    """``s`` is not below-or-equal ``t`` given ``r = cmp(s, t)``."""
    return r is GREATER or r is INCOMPARABLE


class OrderingError(ValueError):
    pass


@dataclass(eq=False)
class KboParams:
    """Symbol weights and a precedence (higher rank = greater symbol).

    Symbols missing from ``precedence`` rank below every listed symbol,
    ordered among themselves by ``(arity, name)``. ``TOP`` is always the
    smallest symbol.
    """

    precedence: Dict[Symbol, int] = field(default_factory=dict)
    weights: Dict[Symbol, int] = field(default_factory=dict)
    var_weight: int = 1
    cache_limit: int = 200_000

    def __post_init__(self):
        if self.var_weight <= 0:
            raise OrderingError("variable weight must be positive")
        for sym, w in self.weights.items():
            if w < 0:
                raise OrderingError(f"negative weight for {sym}")
            if sym.arity == 0 and w < self.var_weight:
                raise OrderingError(f"constant {sym} lighter than a variable")
            if w == 0 and sym.arity == 1:
                top = max(self.precedence.items(), key=lambda kv: kv[1], default=(None, 0))[0]
                if top != sym:
                    raise OrderingError(f"weight-0 unary symbol {sym} must be maximal in precedence")
            if w == 0 and sym.arity != 1:
                raise OrderingError(f"only unary symbols may have weight 0 ({sym})")
        self.uniform = self.var_weight == 1 and all(w == 1 for w in self.weights.values())
        self._cache: dict = {}

    @classmethod
    def from_symbols(cls, symbols: Sequence[Symbol], scheme: str = "arity") -> "KboParams":
        """Uniform weights; precedence from ``symbols`` listed in first-occurrence order.

        ``arity``: higher arity is greater, ties broken by earlier occurrence.
        ``occurrence``: earlier occurrence is greater.
        ``reverse``: later occurrence is greater.
        """
        syms = [s for s in dict.fromkeys(symbols) if s != TOP]
        n = len(syms)
        if scheme == "arity":
            ordered = sorted(range(n), key=lambda i: (syms[i].arity, -i))
        elif scheme == "occurrence":
            ordered = list(reversed(range(n)))
        elif scheme == "reverse":
            ordered = list(range(n))
        else:
            raise OrderingError(f"unknown precedence scheme {scheme!r}")
        prec = {syms[i]: rank for rank, i in enumerate(ordered, 1)}
        return cls(precedence=prec)

    def prec_key(self, sym: Symbol):
        r = self.precedence.get(sym)
        if r is not None:
            return (2, r, "")
        if sym == TOP:
            return (0, 0, "")
        return (1, sym.arity, sym.name)

    def weight(self, t: Term) -> int:
        if self.uniform:
            return t.size
        if t.is_var:
            return self.var_weight
        return self.weights.get(t.sym, 1) + sum(self.weight(a) for a in t.args)


DEFAULT = KboParams()


def _var_balance(t, sign, acc):
    if t.ground:
        return
    if t.is_var:
        acc[t] += sign
        return
    for a in t.args:
        _var_balance(a, sign, acc)


def cmp_terms(p: KboParams, s: Term, t: Term) -> Order:
    if s is t:
        return EQUAL
    key = (s, t)
    cache = p._cache
    r = cache.get(key)
    if r is None:
        r = _kbo(p, s, t)
        if len(cache) >= p.cache_limit:
            cache.clear()
        cache[key] = r
    return r


def _kbo(p, s, t):
    if s == t:
        return EQUAL
    if s.is_var:
        return LESS if occurs(s, t) else INCOMPARABLE
    if t.is_var:
        return GREATER if occurs(t, s) else INCOMPARABLE
    s_ok = t_ok = True
    if not (s.ground and t.ground):
        bal = Counter()
        _var_balance(s, 1, bal)
        _var_balance(t, -1, bal)
        for n in bal.values():
            if n < 0:
                s_ok = False
            elif n > 0:
                t_ok = False
    ws, wt = p.weight(s), p.weight(t)
    if ws > wt:
        return GREATER if s_ok else INCOMPARABLE
    if ws < wt:
        return LESS if t_ok else INCOMPARABLE
    if s.sym != t.sym:
        if p.prec_key(s.sym) > p.prec_key(t.sym):
            return GREATER if s_ok else INCOMPARABLE
        return LESS if t_ok else INCOMPARABLE
    for a, b in zip(s.args, t.args):
        if a == b:
            continue
        r = cmp_terms(p, a, b)
        if r is GREATER:
            return GREATER if s_ok else INCOMPARABLE
        if r is LESS:
            return LESS if t_ok else INCOMPARABLE
        return INCOMPARABLE
    return EQUAL


def multiset_cmp(xs: Iterable, ys: Iterable, cmp) -> Order:
    """Dershowitz-Manna extension of the partial order ``cmp``."""
    xs = list(xs)
    ys = list(ys)
    rest = []
    for x in xs:
        for j, y in enumerate(ys):
            if x == y:
                del ys[j]
                break
        else:
            rest.append(x)
    xs = rest
    if not xs and not ys:
        return EQUAL
    if not ys:
        return GREATER
    if not xs:
        return LESS
    table = [[cmp(x, y) for y in ys] for x in xs]
    if all(any(table[i][j] is GREATER for i in range(len(xs))) for j in range(len(ys))):
        return GREATER
    if all(any(table[i][j] is LESS for j in range(len(ys))) for i in range(len(xs))):
        return LESS
    return INCOMPARABLE


def literal_multiset(lit) -> tuple:
    if lit.positive:
        return (lit.lhs, lit.rhs)
    return (lit.lhs, lit.lhs, lit.rhs, lit.rhs)


def cmp_literals(p: KboParams, l1, l2) -> Order:
    if l1 is l2:
        return EQUAL
    if l1.positive == l2.positive:
        if (l1.lhs == l2.lhs and l1.rhs == l2.rhs) or (l1.lhs == l2.rhs and l1.rhs == l2.lhs):
            return EQUAL
    return multiset_cmp(literal_multiset(l1), literal_multiset(l2), lambda a, b: cmp_terms(p, a, b))


def cmp_clauses(p: KboParams, c1, c2) -> Order:
    lits1 = getattr(c1, "literals", c1)
    lits2 = getattr(c2, "literals", c2)
    return multiset_cmp(lits1, lits2, lambda a, b: cmp_literals(p, a, b))


def maximality(p: KboParams, lits: Sequence) -> tuple:
    """Per-literal ``(maximal, strictly_maximal)`` flags within ``lits``."""
    n = len(lits)
    maximal = [True] * n
    strict = [True] * n
    for i in range(n):
        for j in range(i + 1, n):
            r = cmp_literals(p, lits[i], lits[j])
            if r is GREATER:
                maximal[j] = strict[j] = False
            elif r is LESS:
                maximal[i] = strict[i] = False
            elif r is EQUAL:
                strict[i] = strict[j] = False
    return maximal, strict


def eligible(p: KboParams, selected, lits: Sequence, index: int, strict: bool) -> bool:
    """Eligibility of ``lits[index]`` given the selected positions of its clause.

    ``lits`` is the (possibly instantiated) literal list; ``selected`` comes
    from the uninstantiated clause.
    """
    if selected:
        return index in selected
    me = lits[index]
    for j, other in enumerate(lits):
        if j == index:
            continue
        r = cmp_literals(p, other, me)
        if r is GREATER or (strict and r is EQUAL):
            return False
    return True
