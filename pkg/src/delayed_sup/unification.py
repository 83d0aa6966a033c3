"""Syntactic unification and matching.

``mgu`` returns an idempotent most general unifier or raises
:class:`UnificationFailure`; ``unify`` is the non-raising variant used in hot
loops.
"""
from __future__ import annotations

from typing import Iterable, Optional, Tuple

from .terms import App, SortError, Substitution, Term, Var


class UnificationFailure(Exception):
    """No unifier exists. ``reason`` is ``"clash"`` or ``"occurs"``."""

    def __init__(self, reason: str, left: Term = None, right: Term = None):
        super().__init__(f"{reason}: {left} vs {right}")
        self.reason = reason
        self.left = left
        self.right = right


def _walk(t, bind):
    while t.is_var:
        nxt = bind.get(t)
        if nxt is None:
            return t
        t = nxt
    return t


def _occurs(v, t, bind):
    t = _walk(t, bind)
    if t.is_var:
        return t == v
    if t.ground:
        return False
    return any(_occurs(v, a, bind) for a in t.args)


def _resolve(t, bind):
    if t.ground:
        return t
    if t.is_var:
        nxt = bind.get(t)
        return t if nxt is None else _resolve(nxt, bind)
    args = tuple(_resolve(a, bind) for a in t.args)
    if all(x is y for x, y in zip(args, t.args)):
        return t
    return App._make(t.sym, args)


def _solve(pairs, bind):
    stack = list(pairs)
    while stack:
        s, t = stack.pop()
        s = _walk(s, bind)
        t = _walk(t, bind)
        if s is t:
            continue
        if s.is_var:
            if t.is_var and t == s:
                continue
            if _occurs(s, t, bind):
                raise UnificationFailure("occurs", s, t)
            bind[s] = t
        elif t.is_var:
            if _occurs(t, s, bind):
                raise UnificationFailure("occurs", t, s)
            bind[t] = s
        else:
            if s.sym != t.sym:
                raise UnificationFailure("clash", s, t)
            if s == t:
                continue
            stack.extend(zip(s.args, t.args))
    return bind


def mgu_pairs(pairs: Iterable[Tuple[Term, Term]]) -> Substitution:
    """Simultaneous most general unifier of a list of pairs."""
    pairs = list(pairs)
    for s, t in pairs:
        if s.sort != t.sort:
            raise SortError(f"cannot unify {s}:{s.sort} with {t}:{t.sort}")
    bind = _solve(pairs, {})
    return {v: _resolve(t, bind) for v, t in bind.items()}


def mgu(s: Term, t: Term) -> Substitution:
    return mgu_pairs([(s, t)])


def unify(s: Term, t: Term) -> Optional[Substitution]:
    try:
        return mgu_pairs([(s, t)])
    except UnificationFailure:
        return None


def _match(p, t, bind) -> bool:
    if p.is_var:
        old = bind.get(p)
        if old is None:
            if p.sort != t.sort:
                return False
            bind[p] = t
            return True
        return old == t
    if t.is_var or p.sym != t.sym:
        return False
    if p.ground:
        return p == t
    for a, b in zip(p.args, t.args):
        if not _match(a, b, bind):
            return False
    return True


def match_term(pattern: Term, target: Term, subst: Substitution = None) -> Optional[Substitution]:
    """One-sided unification: a ``sigma`` with ``pattern.sigma == target``, or ``None``.

    Variables of ``target`` are treated as constants.
    """
    if pattern.sort != target.sort:
        raise SortError(f"cannot match {pattern}:{pattern.sort} against {target}:{target.sort}")
    bind = dict(subst) if subst else {}
    return bind if _match(pattern, target, bind) else None
