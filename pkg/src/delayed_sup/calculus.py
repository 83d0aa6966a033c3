"""Inference rules.

Delayed-unification rules: ``Sup``, ``VSup``, ``EqFact``, ``VEqFact``,
``Decompose``, ``Bind``, ``ReflDel``. Classical rules for the ``standard``
mode: ``StdSup``, ``StdEqFact``, ``EqRes``.

Each rule method takes premises plus positions and returns an
:class:`Inference` or ``None`` when the rule does not apply. Positions:

* equation position ``(i, k)``: literal ``i``, side ``k`` (0 = lhs, 1 = rhs)
* target position ``(j, k, path)``: literal, side, 1-based argument path

The second premise of a binary rule is renamed apart by shifting its
variables above those of the first; ``Inference.literals`` lives in that
renamed space so callers can instantiate conclusions without re-deriving
the renaming.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Sequence, Tuple

from .clauses import (
    Clause, InferenceRecord, Literal, Selection, neg, remove_duplicates, rename_apart, select,
)
from .ordering import DEFAULT, KboParams, cmp_clauses, cmp_terms, maximality, not_leq
from . import ordering
from .terms import Substitution, apply, nonvar_positions, occurs, replace_at, subterm_at
from .unification import unify


class Mode(str, enum.Enum):
    STANDARD = "standard"
    DELAYED = "delayed"
    DELAYED_FP = "delayed-fp"
    DELAYED_EAGER = "delayed-eager"

    @property
    def delayed(self) -> bool:
        return self is not Mode.STANDARD


# A rule-application failure is reported as ``None``; these are the names.
DELAYED_RULES = ("Sup", "VSup", "EqFact", "VEqFact", "Decompose", "Bind", "ReflDel")
STANDARD_RULES = ("StdSup", "StdEqFact", "EqRes")


@dataclass(eq=False)
class Inference:
    rule: str
    premises: tuple
    literals: tuple
    n_constraints: int = 0
    unifier: Substitution = field(default_factory=dict)
    notes: dict = field(default_factory=dict)

    @property
    def constraints(self) -> tuple:
        return self.literals[len(self.literals) - self.n_constraints:]

    @property
    def body(self) -> tuple:
        """The conclusion without its constraint literals."""
        return self.literals[: len(self.literals) - self.n_constraints]

    def clause(self) -> Clause:
        return Clause(self.literals, InferenceRecord(self.rule, self.premises, self.unifier, self.notes))


def _others(c, *skip) -> tuple:
    return tuple(l for n, l in enumerate(c.literals) if n not in skip)


def _constraints(ts, ss) -> tuple:
    return tuple(Literal(False, a, b) for a, b in zip(ts, ss))


class Calculus:
    """Rule applications under fixed ordering parameters and selection."""

    def __init__(self, params: KboParams = DEFAULT, selection: Selection = Selection.NONE):
        self.params = params
        self.selection = Selection(selection)

    # -- eligibility -------------------------------------------------------

    def _info(self, c):
        info = c._info
        if info is None or info[0] is not self:
            sel = select(self.selection, c.literals, self.params)
            maximal, strict = maximality(self.params, c.literals)
            info = (self, sel, maximal, strict)
            c._info = info
        return info

    def selected(self, c) -> frozenset:
        return self._info(c)[1]

    def eligible(self, c, i: int, strict: bool = False, sigma: Substitution = None) -> bool:
        _, sel, maximal, smax = self._info(c)
        if sel:
            return i in sel
        if not (smax[i] if strict else maximal[i]):
            return False
        if not sigma:
            return True
        # instantiation can only shrink the set of maximal literals
        lits = [l.apply(sigma) for l in c.literals]
        return ordering.eligible(self.params, sel, lits, i, strict)

    def _cmp(self, s, t):
        return cmp_terms(self.params, s, t)

    # -- candidate positions -------------------------------------------------

    def equation_sides(self, c) -> Iterator[Tuple[int, int]]:
        """``(i, k)`` such that side ``k`` of positive literal ``i`` may rewrite."""
        for i, lit in enumerate(c.literals):
            if not lit.positive or lit.trivial or not self.eligible(c, i, strict=True):
                continue
            for k in (0, 1):
                if not_leq(self._cmp(lit.side(k), lit.side(1 - k))):
                    yield i, k

    def target_positions(self, c) -> Iterator[Tuple[int, int, tuple, object]]:
        """``(j, k, path, subterm)`` for every rewritable non-variable subterm."""
        for j, lit in enumerate(c.literals):
            if not self.eligible(c, j, strict=lit.positive):
                continue
            for k in (0, 1):
                s = lit.side(k)
                if not not_leq(self._cmp(s, lit.side(1 - k))):
                    continue
                for path, u in nonvar_positions(s):
                    yield j, k, path, u

    # -- delayed binary rules ---------------------------------------------

    def sup(self, d, eq_pos, c, target_pos) -> Optional[Inference]:
        i, k = eq_pos
        j, k2, path = target_pos
        dl = d.literals[i]
        t, t1 = dl.side(k), dl.side(1 - k)
        if not dl.positive or t.is_var:
            return None
        _, cr = rename_apart(d, c)
        cl = cr.literals[j]
        s, s1 = cl.side(k2), cl.side(1 - k2)
        u = subterm_at(s, path)
        if u.is_var or u.sym != t.sym:
            return None
        if not self.eligible(d, i, strict=True) or not self.eligible(cr, j, strict=cl.positive):
            return None
        if not not_leq(self._cmp(t, t1)) or not not_leq(self._cmp(s, s1)):
            return None
        if not not_leq(cmp_clauses(self.params, cr, d)):
            return None
        new = cl.with_sides(k2, replace_at(s, path, t1), s1)
        cs = _constraints(t.args, u.args)
        lits = _others(cr, j) + _others(d, i) + (new,) + cs
        return Inference("Sup", (d, c), lits, len(cs), {}, {"eq": (i, k), "target": (j, k2, path)})

    def vsup(self, d, eq_pos, c, target_pos) -> Optional[Inference]:
        i, k = eq_pos
        j, k2, path = target_pos
        dl = d.literals[i]
        x, t1 = dl.side(k), dl.side(1 - k)
        if not dl.positive or not x.is_var:
            return None
        _, cr = rename_apart(d, c)
        cl = cr.literals[j]
        s, s1 = cl.side(k2), cl.side(1 - k2)
        u = subterm_at(s, path)
        if u.is_var or u.sort != x.sort or occurs(x, u):
            return None
        sigma = {x: u}
        if not self.eligible(cr, j, strict=cl.positive):
            return None
        if not self.eligible(d, i, strict=True, sigma=sigma):
            return None
        if not not_leq(self._cmp(u, apply(sigma, t1))) or not not_leq(self._cmp(s, s1)):
            return None
        ds = [l.apply(sigma) for l in d.literals]
        if not not_leq(cmp_clauses(self.params, cr.literals, ds)):
            return None
        new = cl.with_sides(k2, replace_at(s, path, t1), s1)
        lits = tuple(l.apply(sigma) for l in _others(cr, j) + _others(d, i) + (new,))
        return Inference("VSup", (d, c), lits, 0, sigma, {"eq": (i, k), "target": (j, k2, path)})

    # -- delayed unary rules ------------------------------------------------

    def eq_fact(self, c, lit_positions) -> Optional[Inference]:
        (i, ki), (j, kj) = lit_positions
        if i == j:
            return None
        li, lj = c.literals[i], c.literals[j]
        if not (li.positive and lj.positive):
            return None
        u, v = li.side(ki), li.side(1 - ki)
        u2, v2 = lj.side(kj), lj.side(1 - kj)
        if u.is_var or u2.is_var or u.sym != u2.sym:
            return None
        if not self.eligible(c, i):
            return None
        if not not_leq(self._cmp(u, v)) or not not_leq(self._cmp(u2, v2)):
            return None
        cs = _constraints(u2.args, u.args)
        lits = _others(c, i, j) + (neg(v, v2), li) + cs
        return Inference("EqFact", (c,), lits, len(cs), {}, {"lits": ((i, ki), (j, kj))})

    def veq_fact(self, c, lit_positions) -> Optional[Inference]:
        (i, ki), (j, kj) = lit_positions
        if i == j:
            return None
        li, lj = c.literals[i], c.literals[j]
        if not (li.positive and lj.positive):
            return None
        u, v = li.side(ki), li.side(1 - ki)
        u2, v2 = lj.side(kj), lj.side(1 - kj)
        if not (u.is_var or u2.is_var) or u.sort != u2.sort:
            return None
        sigma = unify(u, u2)
        if sigma is None:
            return None
        if not self.eligible(c, i, sigma=sigma):
            return None
        if not not_leq(self._cmp(apply(sigma, u), apply(sigma, v))):
            return None
        if not not_leq(self._cmp(apply(sigma, u2), apply(sigma, v2))):
            return None
        lits = tuple(l.apply(sigma) for l in _others(c, i, j) + (neg(v, v2), li))
        return Inference("VEqFact", (c,), lits, 0, sigma, {"lits": ((i, ki), (j, kj))})

    def decompose(self, c, i: int) -> Optional[Inference]:
        lit = c.literals[i]
        s, t = lit.lhs, lit.rhs
        if lit.positive or s.is_var or t.is_var or s.sym != t.sym or s == t:
            return None
        if not self.eligible(c, i):
            return None
        cs = _constraints(t.args, s.args)
        return Inference("Decompose", (c,), _others(c, i) + cs, len(cs), {}, {"lit": i})

    def bind(self, c, i: int, side: int = None, simp: bool = False) -> Optional[Inference]:
        lit = c.literals[i]
        if lit.positive:
            return None
        if side is None:
            side = 0 if lit.lhs.is_var else 1
        x, t = lit.side(side), lit.side(1 - side)
        if not x.is_var or occurs(x, t):
            return None
        sigma = {x: t}
        if not simp and not self.eligible(c, i, sigma=sigma):
            return None
        lits = tuple(l.apply(sigma) for l in _others(c, i))
        notes = {"lit": i, "side": side}
        if simp:
            notes["simp"] = True
        return Inference("Bind", (c,), lits, 0, sigma, notes)

    def refl_del(self, c, i: int, simp: bool = False) -> Optional[Inference]:
        lit = c.literals[i]
        if lit.positive or not lit.trivial:
            return None
        if not simp and not self.eligible(c, i):
            return None
        notes = {"lit": i}
        if simp:
            notes["simp"] = True
        return Inference("ReflDel", (c,), _others(c, i), 0, {}, notes)

    # -- classical rules ----------------------------------------------------

    def std_sup(self, d, eq_pos, c, target_pos) -> Optional[Inference]:
        i, k = eq_pos
        j, k2, path = target_pos
        dl = d.literals[i]
        if not dl.positive:
            return None
        l, r = dl.side(k), dl.side(1 - k)
        _, cr = rename_apart(d, c)
        cl = cr.literals[j]
        s, s1 = cl.side(k2), cl.side(1 - k2)
        u = subterm_at(s, path)
        if u.is_var or u.sort != l.sort:
            return None
        sigma = unify(l, u)
        if sigma is None:
            return None
        if not not_leq(self._cmp(apply(sigma, l), apply(sigma, r))):
            return None
        if not not_leq(self._cmp(apply(sigma, s), apply(sigma, s1))):
            return None
        if not self.eligible(d, i, strict=True, sigma=sigma):
            return None
        if not self.eligible(cr, j, strict=cl.positive, sigma=sigma):
            return None
        cs_ = [x.apply(sigma) for x in cr.literals]
        ds_ = [x.apply(sigma) for x in d.literals]
        if not not_leq(cmp_clauses(self.params, cs_, ds_)):
            return None
        new = cl.with_sides(k2, replace_at(s, path, r), s1)
        lits = tuple(x.apply(sigma) for x in _others(cr, j) + _others(d, i) + (new,))
        return Inference("StdSup", (d, c), lits, 0, sigma, {"eq": (i, k), "target": (j, k2, path)})

    def std_eq_fact(self, c, lit_positions) -> Optional[Inference]:
        (i, ki), (j, kj) = lit_positions
        if i == j:
            return None
        li, lj = c.literals[i], c.literals[j]
        if not (li.positive and lj.positive):
            return None
        u, v = li.side(ki), li.side(1 - ki)
        u2, v2 = lj.side(kj), lj.side(1 - kj)
        if u.sort != u2.sort:
            return None
        sigma = unify(u, u2)
        if sigma is None:
            return None
        if not self.eligible(c, i, sigma=sigma):
            return None
        if not not_leq(self._cmp(apply(sigma, u), apply(sigma, v))):
            return None
        if not not_leq(self._cmp(apply(sigma, u2), apply(sigma, v2))):
            return None
        lits = tuple(l.apply(sigma) for l in _others(c, i, j) + (neg(v, v2), li))
        return Inference("StdEqFact", (c,), lits, 0, sigma, {"lits": ((i, ki), (j, kj))})

    def eq_res(self, c, i: int) -> Optional[Inference]:
        lit = c.literals[i]
        if lit.positive:
            return None
        sigma = unify(lit.lhs, lit.rhs)
        if sigma is None:
            return None
        if not self.eligible(c, i, sigma=sigma):
            return None
        lits = tuple(l.apply(sigma) for l in _others(c, i))
        return Inference("EqRes", (c,), lits, 0, sigma, {"lit": i})

    # -- enumeration --------------------------------------------------------

    def unary_inferences(self, c, mode: Mode = Mode.DELAYED, rules=None) -> List[Inference]:
        out = []
        allowed = (lambda name: True) if rules is None else (lambda name: name in rules)
        n = len(c.literals)
        if mode is Mode.STANDARD:
            if allowed("StdEqFact"):
                for pair in _fact_pairs(c):
                    inf = self.std_eq_fact(c, pair)
                    if inf:
                        out.append(inf)
            if allowed("EqRes"):
                for i in range(n):
                    inf = self.eq_res(c, i)
                    if inf:
                        out.append(inf)
            return out
        eager = mode is Mode.DELAYED_EAGER
        for pair in _fact_pairs(c):
            (i, ki), (j, kj) = pair
            u, u2 = c.literals[i].side(ki), c.literals[j].side(kj)
            if u.is_var or u2.is_var:
                inf = self.veq_fact(c, pair) if allowed("VEqFact") else None
            else:
                inf = self.eq_fact(c, pair) if allowed("EqFact") else None
            if inf:
                out.append(inf)
        for i in range(n):
            lit = c.literals[i]
            if lit.positive:
                continue
            if allowed("Decompose"):
                inf = self.decompose(c, i)
                if inf:
                    out.append(inf)
            if not eager and allowed("Bind") and (lit.lhs.is_var or lit.rhs.is_var):
                inf = self.bind(c, i)
                if inf:
                    out.append(inf)
            if not eager and allowed("ReflDel"):
                inf = self.refl_del(c, i)
                if inf:
                    out.append(inf)
        return out

    def binary(self, d, eq_pos, c, target_pos, mode: Mode = Mode.DELAYED) -> Optional[Inference]:
        if mode is Mode.STANDARD:
            return self.std_sup(d, eq_pos, c, target_pos)
        i, k = eq_pos
        if d.literals[i].side(k).is_var:
            return self.vsup(d, eq_pos, c, target_pos)
        return self.sup(d, eq_pos, c, target_pos)

    def binary_inferences(self, d, c, mode: Mode = Mode.DELAYED, prefilter=None) -> List[Inference]:
        """All superposition-type inferences with ``d`` as the equation premise.

        Brute force over positions. ``prefilter(l, u)`` may veto a pair of
        equation side and target subterm.
        """
        out = []
        _, cr = rename_apart(d, c)
        targets = list(self.target_positions(cr))
        for i, k in self.equation_sides(d):
            t = d.literals[i].side(k)
            for j, k2, path, u in targets:
                if mode.delayed and not t.is_var and t.sym != u.sym:
                    continue
                if t.sort != u.sort:
                    continue
                if prefilter is not None and not prefilter(t, u):
                    continue
                inf = self.binary(d, (i, k), c, (j, k2, path), mode)
                if inf:
                    out.append(inf)
        return out

    # -- replay -------------------------------------------------------------

    def replay(self, record: InferenceRecord):
        """Recompute the conclusion literals of a recorded step (``None`` if it no longer applies)."""
        rule, prem, notes = record.rule, record.premises, record.notes
        simp = bool(notes.get("simp"))
        if rule in ("Sup", "VSup", "StdSup"):
            fn = {"Sup": self.sup, "VSup": self.vsup, "StdSup": self.std_sup}[rule]
            return fn(prem[0], notes["eq"], prem[1], notes["target"])
        if rule in ("EqFact", "VEqFact", "StdEqFact"):
            fn = {"EqFact": self.eq_fact, "VEqFact": self.veq_fact, "StdEqFact": self.std_eq_fact}[rule]
            return fn(prem[0], notes["lits"])
        if rule == "Decompose":
            return self.decompose(prem[0], notes["lit"])
        if rule == "EqRes":
            return self.eq_res(prem[0], notes["lit"])
        if rule == "Bind":
            return self.bind(prem[0], notes["lit"], notes.get("side"), simp=simp)
        if rule == "ReflDel":
            return self.refl_del(prem[0], notes["lit"], simp=simp)
        if rule == "Dedup":
            return Inference("Dedup", prem, remove_duplicates(prem[0].literals), 0, {}, dict(notes))
        raise ValueError(f"cannot replay rule {rule!r}")


def _fact_pairs(c):
    pos_idx = [i for i, l in enumerate(c.literals) if l.positive]
    for i in pos_idx:
        for j in pos_idx:
            if i == j:
                continue
            for ki in (0, 1):
                for kj in (0, 1):
                    yield (i, ki), (j, kj)
