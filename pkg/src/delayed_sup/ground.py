"""Ground-level oracle.

Enumerates ground instances of clauses over a depth-bounded Herbrand
universe, runs classical ground superposition (``GSup``, ``GEqFact``,
``GEqRes``) on them, and checks that every ground inference is either the
ground instance of a delayed inference (constraints dropped) or a ``GSup``
that rewrites at or below a variable position of its non-ground premise.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .calculus import Calculus, Inference, Mode
from .clauses import Clause, Literal, Selection, neg
from .ordering import GREATER, LESS, KboParams, cmp_clauses, cmp_terms, maximality, not_leq
from .terms import (
    App, Sort, Substitution, Symbol, Term, Var, apply, at_or_below_var, positions, replace_at,
)


class UninhabitedSort(ValueError):
    pass


class GroundingSpace:
    """Ground terms over ``symbols`` of depth at most ``depth`` (constants have depth 0)."""

    def __init__(self, symbols: Iterable[Symbol], depth: int):
        self.symbols = list(dict.fromkeys(symbols))
        self.depth = depth
        self._universe = self._build()

    def _build(self) -> Dict[Sort, List[Term]]:
        levels: Dict[Sort, List[Term]] = {}
        for s in self.symbols:
            if s.arity == 0:
                levels.setdefault(s.result_sort, []).append(App._make(s, ()))
        for _ in range(self.depth):
            new: Dict[Sort, List[Term]] = {k: list(v) for k, v in levels.items()}
            for s in self.symbols:
                if s.arity == 0:
                    continue
                pools = [levels.get(srt, []) for srt in s.arg_sorts]
                for args in itertools.product(*pools):
                    t = App._make(s, tuple(args))
                    if t not in new.setdefault(s.result_sort, []):
                        new[s.result_sort].append(t)
            levels = new
        return levels

    def universe(self, sort: Sort) -> List[Term]:
        terms = self._universe.get(sort)
        if not terms:
            raise UninhabitedSort(f"no ground term of sort {sort} within depth {self.depth}")
        return terms


def ground_substitutions(c, space: GroundingSpace) -> Iterable[Substitution]:
    vs = sorted({v for lit in c.literals for side in (lit.lhs, lit.rhs) for v in _vars(side)},
                key=lambda v: v.id)
    pools = [space.universe(v.sort) for v in vs]
    for combo in itertools.product(*pools):
        yield dict(zip(vs, combo))


def _vars(t):
    if t.ground:
        return
    if t.is_var:
        yield t
        return
    for a in t.args:
        yield from _vars(a)


def groundings(c, space: GroundingSpace) -> List[Clause]:
    """Distinct ground instances of ``c`` (as multisets)."""
    out, seen = [], set()
    for theta in ground_substitutions(c, space):
        lits = tuple(l.apply(theta) for l in c.literals)
        key = frozenset(Counter(lits).items())
        if key not in seen:
            seen.add(key)
            out.append(Clause(lits, normalize=False))
    return out


@dataclass(eq=False)
class GroundClause:
    """A ground clause with the non-ground clause and substitution it came from."""

    literals: tuple
    preimage: Optional[Clause] = None
    theta: Substitution = field(default_factory=dict)
    selected: frozenset = frozenset()
    index: int = 0


@dataclass(eq=False)
class GroundInference:
    rule: str
    premises: tuple
    positions: tuple
    conclusion: tuple

    @property
    def main_premise(self) -> GroundClause:
        """The maximal premise: the rewritten clause for ``GSup``."""
        return self.premises[-1]


def _others(lits, *skip):
    return tuple(l for n, l in enumerate(lits) if n not in skip)


def ground_inferences(clauses: Sequence, params: KboParams) -> List[GroundInference]:
    """All ``GSup``/``GEqFact``/``GEqRes`` inferences among ground clauses.

    Items may be :class:`GroundClause` (their ``selected`` set is used as the
    ground selection) or plain literal sequences (nothing selected).
    """
    gcs = [c if isinstance(c, GroundClause) else GroundClause(tuple(getattr(c, "literals", c)))
           for c in clauses]
    for n, g in enumerate(gcs):
        g.index = n
    cmp = lambda s, t: cmp_terms(params, s, t)
    info = []
    for g in gcs:
        maximal, strict = maximality(params, g.literals)
        info.append((maximal, strict))

    def elig(n, i, strict):
        g = gcs[n]
        if g.selected:
            return i in g.selected
        return info[n][1][i] if strict else info[n][0][i]

    out: List[GroundInference] = []
    # rewrite equations keyed by the larger side
    eqs: Dict[Term, list] = {}
    for n, g in enumerate(gcs):
        for i, lit in enumerate(g.literals):
            if not lit.positive or not elig(n, i, True):
                continue
            for k in (0, 1):
                if cmp(lit.side(k), lit.side(1 - k)) is GREATER:
                    eqs.setdefault(lit.side(k), []).append((n, i, k))
    for n, c in enumerate(gcs):
        for j, lit in enumerate(c.literals):
            if not elig(n, j, lit.positive):
                continue
            for k2 in (0, 1):
                s, s1 = lit.side(k2), lit.side(1 - k2)
                if not not_leq(cmp(s, s1)):
                    continue
                for path, u in positions(s):
                    for m, i, k in eqs.get(u, ()):
                        d = gcs[m]
                        if cmp_clauses(params, d.literals, c.literals) is not LESS:
                            continue
                        dl = d.literals[i]
                        new = lit.with_sides(k2, replace_at(s, path, dl.side(1 - k)), s1)
                        concl = _others(c.literals, j) + _others(d.literals, i) + (new,)
                        out.append(GroundInference("GSup", (d, c), ((i, k), (j, k2, path)), concl))
        for i, li in enumerate(c.literals):
            if li.positive:
                if not elig(n, i, False):
                    continue
                for j, lj in enumerate(c.literals):
                    if j == i or not lj.positive:
                        continue
                    for ki in (0, 1):
                        u, v = li.side(ki), li.side(1 - ki)
                        if cmp(u, v) is not GREATER:
                            continue
                        for kj in (0, 1):
                            u2, v2 = lj.side(kj), lj.side(1 - kj)
                            if u2 != u or cmp(u2, v2) is not GREATER:
                                continue
                            concl = _others(c.literals, i, j) + (neg(v, v2), li)
                            out.append(GroundInference("GEqFact", (c,), ((i, ki), (j, kj)), concl))
            elif li.lhs == li.rhs and elig(n, i, False):
                out.append(GroundInference("GEqRes", (c,), (i,), _others(c.literals, i)))
    return out


@dataclass
class LiftingReport:
    ground_clauses: int = 0
    ground_inferences: int = 0
    lifted: int = 0
    exempt: int = 0
    violations: List[str] = field(default_factory=list)
    # (ground inference, delayed inference, theta) for every lifted case
    witnesses: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        return (f"ground clauses: {self.ground_clauses}, ground inferences: {self.ground_inferences}, "
                f"lifted: {self.lifted}, exempt: {self.exempt}, violations: {len(self.violations)}")


def ground_clause_set(clauses: Sequence[Clause], space: GroundingSpace, calc: Calculus) -> List[GroundClause]:
    """Ground instances of ``clauses``; each ground clause is attributed to the
    first clause (in list order) that has it as an instance."""
    out, seen = [], set()
    for c in clauses:
        sel = calc.selected(c)
        for theta in ground_substitutions(c, space):
            lits = tuple(l.apply(theta) for l in c.literals)
            key = frozenset(Counter(lits).items())
            if key in seen:
                continue
            seen.add(key)
            out.append(GroundClause(lits, c, theta, sel))
    return out


def _shift_subst(theta: Substitution, offset: int) -> Substitution:
    if offset == 0:
        return theta
    return {Var(v.id + offset, v.sort): t for v, t in theta.items()}


def _instance_matches(inf: Inference, theta: Substitution, concl: tuple) -> Optional[str]:
    body = [l.apply(theta) for l in inf.body]
    if any(not l.ground for l in body):
        return "conclusion instance is not ground"
    if Counter(body) != Counter(concl):
        return f"instance {body} differs from ground conclusion {list(concl)}"
    for cs in inf.constraints:
        g = cs.apply(theta)
        if g.lhs != g.rhs:
            return f"constraint {cs} not trivial under theta"
    return None


class LiftingChecker:
    def __init__(self, calc: Calculus):
        self.calc = calc
        self._cache: dict = {}

    def lift(self, gi: GroundInference):
        """Return ``("exempt", None, None)``, ``("lifted", inference, theta)`` or
        ``("violation", message, None)``."""
        calc = self.calc
        if gi.rule == "GSup":
            dg, cg = gi.premises
            (i, k), (j, k2, path) = gi.positions
            d, c = dg.preimage, cg.preimage
            if at_or_below_var(c.literals[j].side(k2), path):
                return "exempt", None, None
            key = ("sup", id(d), id(c), i, k, j, k2, path)
            if key not in self._cache:
                self._cache[key] = calc.binary(d, (i, k), c, (j, k2, path), Mode.DELAYED)
            inf = self._cache[key]
            offset = 0 if (d.ground or c.ground) else d.max_var + 1
            theta = dict(dg.theta)
            theta.update(_shift_subst(cg.theta, offset))
        elif gi.rule == "GEqFact":
            cg, = gi.premises
            c = cg.preimage
            (i, ki), (j, kj) = gi.positions
            key = ("fact", id(c), i, ki, j, kj)
            if key not in self._cache:
                u, u2 = c.literals[i].side(ki), c.literals[j].side(kj)
                if u.is_var or u2.is_var:
                    self._cache[key] = calc.veq_fact(c, gi.positions)
                else:
                    self._cache[key] = calc.eq_fact(c, gi.positions)
            inf = self._cache[key]
            theta = cg.theta
        else:
            cg, = gi.premises
            c = cg.preimage
            i, = gi.positions
            key = ("res", id(c), i)
            if key not in self._cache:
                lit = c.literals[i]
                if lit.lhs == lit.rhs:
                    self._cache[key] = calc.refl_del(c, i)
                elif lit.lhs.is_var or lit.rhs.is_var:
                    self._cache[key] = calc.bind(c, i, side=0 if lit.lhs.is_var else 1)
                else:
                    self._cache[key] = calc.decompose(c, i)
            inf = self._cache[key]
            theta = cg.theta
        if inf is None:
            return "violation", f"{gi.rule} at {gi.positions} has no delayed counterpart", None
        problem = _instance_matches(inf, theta, gi.conclusion)
        if problem:
            return "violation", f"{gi.rule} via {inf.rule}: {problem}", None
        return "lifted", inf, theta


def check_lifting(clauses: Sequence[Clause], space: GroundingSpace, calc: Calculus = None,
                  keep_witnesses: bool = False) -> LiftingReport:
    """Check that every ground inference over the instances of ``clauses`` lifts."""
    calc = calc or Calculus()
    gcs = ground_clause_set(clauses, space, calc)
    infs = ground_inferences(gcs, calc.params)
    report = LiftingReport(ground_clauses=len(gcs), ground_inferences=len(infs))
    checker = LiftingChecker(calc)
    for gi in infs:
        verdict, what, theta = checker.lift(gi)
        if verdict == "exempt":
            report.exempt += 1
        elif verdict == "lifted":
            report.lifted += 1
            if keep_witnesses:
                report.witnesses.append((gi, what, theta))
        else:
            prem = ", ".join(str(list(p.literals)) for p in gi.premises)
            report.violations.append(f"{what} [premises: {prem}]")
    return report


def check_constraint_grounding(inf: Inference, theta: Substitution, main_premise: Sequence[Literal],
                               params: KboParams) -> List[str]:
    """Constraints become trivial under ``theta`` and the whole instantiated
    conclusion is smaller than the ground main premise."""
    problems = []
    for cs in inf.constraints:
        g = cs.apply(theta)
        if g.lhs != g.rhs:
            problems.append(f"constraint {cs} becomes {g}")
    concl = [l.apply(theta) for l in inf.literals]
    if cmp_clauses(params, concl, list(main_premise)) is not LESS:
        problems.append(f"instance {concl} not below main premise {list(main_premise)}")
    return problems
