"""Literals, clauses, selection, derivation records and clause utilities."""
from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from . import ordering
from .ordering import GREATER, LESS, KboParams, cmp_literals
from .terms import (
    BOOL, TOP, App, SortError, Substitution, Term, Var, apply, max_var_id, shift_vars,
    variables,
)
from .unification import _match


class Literal:
    """An unoriented (dis)equation. ``s = t`` and ``t = s`` compare equal."""

    __slots__ = ("positive", "lhs", "rhs", "_hash")

    def __init__(self, positive: bool, lhs: Term, rhs: Term):
        if lhs.sort != rhs.sort:
            raise SortError(f"literal sides {lhs} and {rhs} have different sorts")
        self.positive = positive
        self.lhs = lhs
        self.rhs = rhs
        self._hash = hash((positive, lhs._hash ^ rhs._hash, lhs._hash + rhs._hash))

    @classmethod
    def atom(cls, positive: bool, atom: Term) -> "Literal":
        return cls(positive, atom, App._make(TOP, ()))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Literal) or self._hash != other._hash:
            return False
        if self.positive != other.positive:
            return False
        return (self.lhs == other.lhs and self.rhs == other.rhs) or (
            self.lhs == other.rhs and self.rhs == other.lhs
        )

    def __hash__(self):
        return self._hash

    def side(self, k: int) -> Term:
        return self.rhs if k else self.lhs

    def with_sides(self, k: int, s: Term, other: Term) -> "Literal":
        """A literal of the same polarity with side ``k`` = ``s``."""
        return Literal(self.positive, other, s) if k else Literal(self.positive, s, other)

    def apply(self, sigma: Substitution) -> "Literal":
        if not sigma:
            return self
        lhs, rhs = apply(sigma, self.lhs), apply(sigma, self.rhs)
        if lhs is self.lhs and rhs is self.rhs:
            return self
        return Literal(self.positive, lhs, rhs)

    def negate(self) -> "Literal":
        return Literal(not self.positive, self.lhs, self.rhs)

    @property
    def trivial(self) -> bool:
        return self.lhs == self.rhs

    @property
    def ground(self) -> bool:
        return self.lhs.ground and self.rhs.ground

    def __repr__(self):
        if self.rhs.is_var is False and self.rhs.sym == TOP and self.lhs.sort == BOOL and not (
            self.lhs.is_var is False and self.lhs.sym == TOP
        ):
            return str(self.lhs) if self.positive else f"~{self.lhs}"
        return f"{self.lhs} {'=' if self.positive else '!='} {self.rhs}"

    __str__ = __repr__


def pos(s: Term, t: Term) -> Literal:
    return Literal(True, s, t)


def neg(s: Term, t: Term) -> Literal:
    return Literal(False, s, t)


class Selection(str, enum.Enum):
    NONE = "none"
    ONE_NEGATIVE = "one-negative"
    ALL_NEGATIVE = "all-negative"


def literals_max_var(lits: Sequence[Literal]) -> int:
    m = -1
    for lit in lits:
        m = max(m, max_var_id(lit.lhs), max_var_id(lit.rhs))
    return m


def normalize_vars(lits: Sequence[Literal]) -> Tuple[Literal, ...]:
    """Rename variables to 0, 1, ... in order of first occurrence."""
    mapping: Dict[Var, Term] = {}

    def visit(t):
        if t.ground:
            return
        if t.is_var:
            if t not in mapping:
                mapping[t] = Var(len(mapping), t.sort)
            return
        for a in t.args:
            visit(a)

    for lit in lits:
        visit(lit.lhs)
        visit(lit.rhs)
    if all(k.id == v.id for k, v in mapping.items()):
        return tuple(lits)
    return tuple(lit.apply(mapping) for lit in lits)


@dataclass(eq=False)
class InferenceRecord:
    """How a clause was obtained.

    ``rule`` is an inference name (``Sup``, ``VSup``, ``EqFact``, ``VEqFact``,
    ``Decompose``, ``Bind``, ``ReflDel``, ``StdSup``, ``StdEqFact``,
    ``EqRes``), ``Input``, or a simplification tag (``Dedup``). ``notes``
    carries the positions needed to replay the step; ``notes["simp"]`` marks
    steps applied as simplifications.
    """

    rule: str
    premises: tuple = ()
    unifier: Substitution = field(default_factory=dict)
    notes: dict = field(default_factory=dict)

    @property
    def premise_ids(self) -> List[int]:
        return [p.id for p in self.premises]

    @property
    def simplification(self) -> bool:
        return bool(self.notes.get("simp"))


class Clause:
    """A multiset of literals with provenance.

    Variables are renamed to a canonical sequence on construction unless
    ``normalize=False``. ``id`` is assigned once, by the saturation state.
    """

    __slots__ = ("literals", "id", "age", "derivation", "_weight", "_maxvar", "_info")

    def __init__(self, literals=(), derivation: InferenceRecord = None, normalize: bool = True):
        lits = tuple(literals)
        self.literals = normalize_vars(lits) if normalize else lits
        self.derivation = derivation or InferenceRecord("Input")
        self.id: Optional[int] = None
        self.age = 0
        self._weight = None
        self._maxvar = None
        self._info = None

    def __len__(self):
        return len(self.literals)

    def __iter__(self):
        return iter(self.literals)

    def __getitem__(self, i):
        return self.literals[i]

    @property
    def is_empty(self) -> bool:
        return not self.literals

    @property
    def weight(self) -> int:
        if self._weight is None:
            self._weight = sum(l.lhs.size + l.rhs.size for l in self.literals)
        return self._weight

    @property
    def max_var(self) -> int:
        if self._maxvar is None:
            self._maxvar = literals_max_var(self.literals)
        return self._maxvar

    @property
    def ground(self) -> bool:
        return all(l.ground for l in self.literals)

    def vars(self) -> set:
        out = set()
        for lit in self.literals:
            out |= variables(lit.lhs) | variables(lit.rhs)
        return out

    def shifted(self, offset: int) -> "Clause":
        if offset == 0:
            return self
        lits = tuple(
            Literal(l.positive, shift_vars(l.lhs, offset), shift_vars(l.rhs, offset))
            for l in self.literals
        )
        c = Clause(lits, self.derivation, normalize=False)
        c.id = self.id
        c.age = self.age
        c._info = self._info
        return c

    def multiset_key(self) -> frozenset:
        return frozenset(Counter(self.literals).items())

    def __repr__(self):
        if not self.literals:
            return "$false"
        return " | ".join(map(str, self.literals))

    __str__ = __repr__


def rename_apart(c1: Clause, c2: Clause) -> Tuple[Clause, Clause]:
    """Shift the variables of ``c2`` above those of ``c1``."""
    if c2.ground or c1.ground:
        return c1, c2
    return c1, c2.shifted(c1.max_var + 1)


def is_tautology(c) -> bool:
    lits = getattr(c, "literals", c)
    seen_pos = set()
    seen_neg = set()
    for lit in lits:
        if lit.positive:
            if lit.trivial:
                return True
            seen_pos.add(Literal(True, lit.lhs, lit.rhs))
        else:
            seen_neg.add(Literal(True, lit.lhs, lit.rhs))
    return not seen_pos.isdisjoint(seen_neg)


def remove_duplicates(lits: Sequence[Literal]) -> Tuple[Literal, ...]:
    out = []
    seen = set()
    for lit in lits:
        if lit not in seen:
            seen.add(lit)
            out.append(lit)
    return tuple(out)


def _head(t):
    return None if t.is_var else t.sym


def _match_literal(a: Literal, b: Literal, bind) -> List[dict]:
    out = []
    if a.positive != b.positive:
        return out
    for bl, br in ((b.lhs, b.rhs), (b.rhs, b.lhs)):
        trial = dict(bind)
        if _match(a.lhs, bl, trial) and _match(a.rhs, br, trial):
            out.append(trial)
        if bl == br:
            break
    return out


def subsumes(c, d) -> bool:
    """Is there a ``sigma`` with ``c.sigma`` a sub-multiset of ``d``?"""
    cl = list(getattr(c, "literals", c))
    dl = list(getattr(d, "literals", d))
    if len(cl) > len(dl):
        return False
    if sum(l.positive for l in cl) > sum(l.positive for l in dl):
        return False
    if sum(not l.positive for l in cl) > sum(not l.positive for l in dl):
        return False
    # prefilter: each literal of c needs at least one candidate partner
    cands = []
    for a in cl:
        ca = [j for j, b in enumerate(dl) if _could_match(a, b)]
        if not ca:
            return False
        cands.append(ca)
    order = sorted(range(len(cl)), key=lambda i: len(cands[i]))
    used = [False] * len(dl)

    def search(k, bind):
        if k == len(order):
            return True
        i = order[k]
        for j in cands[i]:
            if used[j]:
                continue
            for b2 in _match_literal(cl[i], dl[j], bind):
                used[j] = True
                if search(k + 1, b2):
                    return True
                used[j] = False
        return False

    return search(0, {})


def _could_match(a: Literal, b: Literal) -> bool:
    if a.positive != b.positive:
        return False
    ha, hb = _head(a.lhs), _head(a.rhs)
    h1, h2 = _head(b.lhs), _head(b.rhs)
    return ((ha is None or ha == h1) and (hb is None or hb == h2)) or (
        (ha is None or ha == h2) and (hb is None or hb == h1)
    )


def variant(c, d) -> bool:
    return subsumes(c, d) and subsumes(d, c)


def select(sel: Selection, c, params: KboParams = ordering.DEFAULT) -> FrozenSet[int]:
    """Positions of the selected literals of ``c`` (always negative ones)."""
    lits = getattr(c, "literals", c)
    negs = [i for i, l in enumerate(lits) if not l.positive]
    if sel is Selection.NONE or sel == "none" or not negs:
        return frozenset()
    if sel is Selection.ALL_NEGATIVE or sel == "all-negative":
        return frozenset(negs)
    # one-negative: a minimal negative literal, first by position
    for i in negs:
        if not any(cmp_literals(params, lits[j], lits[i]) is LESS for j in negs if j != i):
            return frozenset((i,))
    return frozenset((negs[0],))


def eligible(params: KboParams, sel: Selection, c, index: int, sigma: Substitution = None,
             strict: bool = False) -> bool:
    lits = getattr(c, "literals", c)
    selected = select(sel, lits, params)
    if sigma:
        lits = [l.apply(sigma) for l in lits]
    return ordering.eligible(params, selected, lits, index, strict)
