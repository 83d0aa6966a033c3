"""Sorts, symbols, terms, positions and substitutions.

Terms are immutable. Structural equality is syntactic equality; hashes are
computed once at construction. A substitution is a plain ``dict`` mapping
:class:`Var` objects to terms.
"""
from __future__ import annotations

from typing import Dict, Iterator, Tuple


class SortError(TypeError):
    """Raised when a term, binding or replacement would be ill-sorted."""


class PositionError(IndexError):
    """Raised for a position that does not address a subterm."""


class Sort:
    __slots__ = ("name", "_hash")

    def __init__(self, name: str):
        self.name = name
        self._hash = hash(("sort", name))

    def __eq__(self, other):
        return self is other or (isinstance(other, Sort) and other.name == self.name)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Sort({self.name!r})"

    def __str__(self):
        return self.name


IOTA = Sort("$i")
BOOL = Sort("$o")


class Symbol:
    """A function symbol with a monomorphic type."""

    __slots__ = ("name", "arg_sorts", "result_sort", "arity", "_hash")

    def __init__(self, name: str, arg_sorts=(), result_sort: Sort = IOTA):
        self.name = name
        self.arg_sorts = tuple(arg_sorts)
        self.result_sort = result_sort
        self.arity = len(self.arg_sorts)
        self._hash = hash((name, self.arity, result_sort))

    @classmethod
    def untyped(cls, name: str, arity: int, result_sort: Sort = IOTA) -> "Symbol":
        return cls(name, (IOTA,) * arity, result_sort)

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, Symbol)
            and self._hash == other._hash
            and self.name == other.name
            and self.arg_sorts == other.arg_sorts
            and self.result_sort == other.result_sort
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"{self.name}/{self.arity}"

    def __call__(self, *args: "Term") -> "App":
        return App(self, args)


# the constant used to encode a non-equality atom A as A = TOP
TOP = Symbol("$true", (), BOOL)


class Term:
    __slots__ = ()

    is_var = False


class Var(Term):
    __slots__ = ("id", "sort", "_hash")

    is_var = True
    ground = False
    size = 1

    def __init__(self, id: int, sort: Sort = IOTA):
        self.id = id
        self.sort = sort
        self._hash = hash(("var", id))

    def __eq__(self, other):
        return self is other or (
            isinstance(other, Var) and other.id == self.id and other.sort == self.sort
        )

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"X{self.id}"

    __str__ = __repr__


class App(Term):
    __slots__ = ("sym", "args", "_hash", "size", "ground")

    def __init__(self, sym: Symbol, args=()):
        args = tuple(args)
        if len(args) != sym.arity:
            raise SortError(f"{sym.name} expects {sym.arity} arguments, got {len(args)}")
        for a, s in zip(args, sym.arg_sorts):
            if a.sort != s:
                raise SortError(f"argument {a} of {sym.name} has sort {a.sort}, expected {s}")
        self._init(sym, args)

    def _init(self, sym, args):
        self.sym = sym
        self.args = args
        self._hash = hash((sym._hash, args))
        size = 1
        ground = True
        for a in args:
            size += a.size
            ground = ground and a.ground
        self.size = size
        self.ground = ground

    @classmethod
    def _make(cls, sym: Symbol, args: tuple) -> "App":
        # unchecked constructor for callers that preserve sorts by construction
        t = cls.__new__(cls)
        t._init(sym, args)
        return t

    @property
    def sort(self) -> Sort:
        return self.sym.result_sort

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, App) or self._hash != other._hash:
            return False
        return self.sym == other.sym and self.args == other.args

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if not self.args:
            return self.sym.name
        return f"{self.sym.name}({','.join(map(repr, self.args))})"

    __str__ = __repr__


Substitution = Dict[Var, Term]
Position = Tuple[int, ...]


def const(name: str, sort: Sort = IOTA) -> App:
    return App(Symbol(name, (), sort))


def apply(sigma: Substitution, t: Term) -> Term:
    """Apply ``sigma`` to ``t`` (simultaneous, single pass)."""
    if not sigma or t.ground:
        return t
    if t.is_var:
        return sigma.get(t, t)
    new_args = tuple(apply(sigma, a) for a in t.args)
    if all(x is y for x, y in zip(new_args, t.args)):
        return t
    return App._make(t.sym, new_args)


def compose(sigma: Substitution, rho: Substitution) -> Substitution:
    """Return the substitution ``sigma`` followed by ``rho``.

    Bindings of ``rho`` for variables already bound by ``sigma`` are shadowed,
    and trivial ``x -> x`` bindings are dropped.
    """
    for subst in (sigma, rho):
        for v, t in subst.items():
            if v.sort != t.sort:
                raise SortError(f"binding {v} -> {t} changes sort {v.sort} to {t.sort}")
    out: Substitution = {}
    for v, t in sigma.items():
        t2 = apply(rho, t)
        if t2 != v:
            out[v] = t2
    for v, t in rho.items():
        if v not in sigma and t != v:
            out[v] = t
    return out


def subterm_at(t: Term, p: Position) -> Term:
    for i in p:
        if t.is_var or not 1 <= i <= len(t.args):
            raise PositionError(f"position {p} invalid")
        t = t.args[i - 1]
    return t


def replace_at(t: Term, p: Position, u: Term) -> Term:
    if not p:
        if u.sort != t.sort:
            raise SortError(f"cannot replace {t} of sort {t.sort} by {u} of sort {u.sort}")
        return u
    i = p[0]
    if t.is_var or not 1 <= i <= len(t.args):
        raise PositionError(f"position {p} invalid")
    args = list(t.args)
    args[i - 1] = replace_at(args[i - 1], p[1:], u)
    return App._make(t.sym, tuple(args))


def variables(t: Term) -> set:
    """The set of variable ids occurring in ``t``."""
    out = set()
    _collect_vars(t, out)
    return {v.id for v in out}


def var_set(t: Term) -> set:
    """The set of :class:`Var` objects occurring in ``t``."""
    out = set()
    _collect_vars(t, out)
    return out


def _collect_vars(t, out):
    if t.ground:
        return
    if t.is_var:
        out.add(t)
        return
    for a in t.args:
        _collect_vars(a, out)


def occurs(v: Var, t: Term) -> bool:
    if t.ground:
        return False
    if t.is_var:
        return t == v
    return any(occurs(v, a) for a in t.args)


def positions(t: Term, prefix: Position = ()) -> Iterator[Tuple[Position, Term]]:
    """Yield ``(position, subterm)`` for every subterm, pre-order."""
    yield prefix, t
    if not t.is_var:
        for i, a in enumerate(t.args, 1):
            yield from positions(a, prefix + (i,))


def nonvar_positions(t: Term, prefix: Position = ()) -> Iterator[Tuple[Position, Term]]:
    if t.is_var:
        return
    yield prefix, t
    for i, a in enumerate(t.args, 1):
        yield from nonvar_positions(a, prefix + (i,))


def at_or_below_var(t: Term, p: Position) -> bool:
    """True when some prefix of ``p`` (including ``p``) addresses a variable of ``t``."""
    for i in p:
        if t.is_var:
            return True
        t = t.args[i - 1]
    return t.is_var


def depth(t: Term) -> int:
    if t.is_var or not t.args:
        return 0
    return 1 + max(depth(a) for a in t.args)


def shift_vars(t: Term, offset: int) -> Term:
    if t.ground or offset == 0:
        return t
    if t.is_var:
        return Var(t.id + offset, t.sort)
    return App._make(t.sym, tuple(shift_vars(a, offset) for a in t.args))


def max_var_id(t: Term) -> int:
    if t.ground:
        return -1
    if t.is_var:
        return t.id
    return max(max_var_id(a) for a in t.args)
