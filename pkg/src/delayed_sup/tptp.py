"""TPTP CNF reader and writer.

Accepts ``cnf(name, role, formula).`` and ``include('file').`` with ``%``
and ``/* */`` comments. Uppercase words are variables, scoped per clause.
Non-equality atoms ``p(t1..tn)`` become ``p(t1..tn) = TOP`` where ``p``
has result sort ``$o``; every other term has sort ``$i``. The reserved
constant ``tTop`` denotes TOP so that any clause can be written back in
CNF syntax.
"""
from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .clauses import Clause, InferenceRecord, Literal
from .terms import BOOL, IOTA, TOP, App, Symbol, Term, Var

TOP_NAME = "tTop"
ROLES = {
    "axiom", "hypothesis", "definition", "assumption", "lemma", "theorem", "corollary",
    "conjecture", "negated_conjecture", "plain", "type", "unknown",
}
UNSUPPORTED = {"fof", "tff", "thf", "tcf", "tpi", "tfx"}


class TptpError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0, source: str = ""):
        self.message, self.line, self.col, self.source = message, line, col, source
        where = f"{source}:" if source else ""
        super().__init__(f"{where}{line}:{col}: {message}" if line else f"{where}{message}")


class ParseError(TptpError):
    pass


class UnsupportedInput(TptpError):
    pass


@dataclass
class Diagnostic:
    message: str
    line: int = 0
    col: int = 0
    source: str = ""

    def __str__(self):
        where = f"{self.source}:" if self.source else ""
        return f"{where}{self.line}:{self.col}: {self.message}"


@dataclass
class ProblemFile:
    clauses: List[Clause] = field(default_factory=list)
    names: List[str] = field(default_factory=list)
    roles: List[str] = field(default_factory=list)
    symbols: Dict[Tuple[str, int], Symbol] = field(default_factory=dict)
    spans: List[Tuple[str, int, int]] = field(default_factory=list)
    diagnostics: List[Diagnostic] = field(default_factory=list)

    @property
    def signature(self) -> List[Symbol]:
        return list(self.symbols.values())

    @property
    def conjecture_flags(self) -> List[bool]:
        return [r == "negated_conjecture" for r in self.roles]


# -- lexer ------------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<line_comment>%[^\n]*)
  | (?P<block_comment>/\*.*?\*/)
  | (?P<upper>[A-Z][A-Za-z0-9_]*)
  | (?P<lower>[a-z][A-Za-z0-9_]*)
  | (?P<dollar>\$\$?[a-z][A-Za-z0-9_]*)
  | (?P<squote>'(?:[^'\\]|\\.)*')
  | (?P<dquote>"(?:[^"\\]|\\.)*")
  | (?P<number>[+-]?[0-9]+(?:[./][0-9]+)?(?:[eE][+-]?[0-9]+)?)
  | (?P<op>!=|=>|<=>|<=|<~>|~\||~&|[(),.\[\]|&~=:!?*+<>-])
""", re.VERBOSE | re.DOTALL)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _lex(text: str, source: str) -> List[_Tok]:
    toks: List[_Tok] = []
    pos, line, line_start = 0, 1, 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None:
            if text.startswith("/*", pos):
                raise ParseError("unterminated block comment", line, pos - line_start + 1, source)
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1, source)
        kind = m.lastgroup
        s = m.group()
        if kind not in ("ws", "line_comment", "block_comment"):
            toks.append(_Tok(kind, s, line, pos - line_start + 1))
        nl = s.count("\n")
        if nl:
            line += nl
            line_start = pos + s.rfind("\n") + 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


# -- raw syntax -------------------------------------------------------------

@dataclass
class _RTerm:
    name: str
    args: list
    is_var: bool
    line: int
    col: int


@dataclass
class _RLit:
    positive: bool
    kind: str  # "eq", "atom", "true", "false"
    lhs: Optional[_RTerm] = None
    rhs: Optional[_RTerm] = None


@dataclass
class _RClause:
    name: str
    role: str
    lits: List[_RLit]
    line: int
    col: int
    source: str


class _Parser:
    def __init__(self, text: str, source: str):
        self.source = source
        self.toks = _lex(text, source)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, tok.line, tok.col, self.source)

    def expect(self, text: str) -> _Tok:
        t = self.peek()
        if t.text != text or t.kind in ("squote", "dquote"):
            shown = t.text or "end of input"
            raise self.error(f"expected {text!r}, found {shown!r}")
        return self.next()

    def name(self) -> str:
        t = self.next()
        if t.kind in ("lower", "upper", "number"):
            return t.text
        if t.kind == "squote":
            return _unquote(t.text)
        raise self.error(f"expected a name, found {t.text or 'end of input'!r}", t)

    def units(self):
        """Yield ``("cnf", _RClause)`` or ``("include", path, names, tok)``."""
        while self.peek().kind != "eof":
            t = self.next()
            if t.kind != "lower":
                raise self.error(f"expected an annotated formula, found {t.text!r}", t)
            if t.text in UNSUPPORTED:
                raise UnsupportedInput(f"{t.text} formulas are not supported (CNF only)",
                                       t.line, t.col, self.source)
            if t.text == "include":
                self.expect("(")
                f = self.next()
                if f.kind != "squote":
                    raise self.error("include expects a quoted file name", f)
                names = None
                if self.peek().text == ",":
                    self.next()
                    self.expect("[")
                    names = []
                    if self.peek().text != "]":
                        names.append(self.name())
                        while self.peek().text == ",":
                            self.next()
                            names.append(self.name())
                    self.expect("]")
                self.expect(")")
                self.expect(".")
                yield ("include", _unquote(f.text), names, t)
                continue
            if t.text != "cnf":
                raise self.error(f"unknown directive {t.text!r}", t)
            self.expect("(")
            name = self.name()
            self.expect(",")
            role_tok = self.next()
            if role_tok.kind != "lower" or role_tok.text not in ROLES:
                raise self.error(f"unknown formula role {role_tok.text!r}", role_tok)
            self.expect(",")
            lits = self.formula()
            if self.peek().text == ",":
                # annotations are skipped with balanced brackets
                self.next()
                self._skip_annotations()
            self.expect(")")
            self.expect(".")
            yield ("cnf", _RClause(name, role_tok.text, lits, t.line, t.col, self.source))

    def _skip_annotations(self):
        depth = 0
        while True:
            t = self.peek()
            if t.kind == "eof":
                raise self.error("unterminated annotation")
            if t.text in ("(", "[") and t.kind == "op":
                depth += 1
            elif t.text in (")", "]") and t.kind == "op":
                if depth == 0:
                    return
                depth -= 1
            self.next()

    def formula(self) -> List[_RLit]:
        if self.peek().text == "(":
            # parenthesised disjunction, or a parenthesised first literal
            save = self.i
            self.next()
            lits = self.formula()
            if self.peek().text == ")":
                self.next()
                if self.peek().text == "|":
                    self.next()
                    return lits + self.formula()
                return lits
            self.i = save
        lits = [self.literal()]
        while self.peek().text == "|":
            self.next()
            lits.append(self.literal())
        t = self.peek()
        if t.kind == "op" and t.text in ("&", "=>", "<=>", "<=", "<~>", "~|", "~&", "!", "?"):
            raise UnsupportedInput(f"connective {t.text!r} is not allowed in CNF", t.line, t.col, self.source)
        return lits

    def literal(self) -> _RLit:
        t = self.peek()
        if t.text == "~" and t.kind == "op":
            self.next()
            if self.peek().text == "(":
                self.next()
                lit = self.literal()
                self.expect(")")
            else:
                lit = self.literal()
            lit.positive = not lit.positive
            return lit
        if t.kind == "dollar":
            if t.text in ("$true", "$false"):
                self.next()
                if self.peek().text in ("=", "!="):
                    raise self.error(f"{t.text} cannot appear in an equation")
                return _RLit(True, t.text[1:])
            raise UnsupportedInput(f"defined symbol {t.text} is not supported", t.line, t.col, self.source)
        lhs = self.term()
        op = self.peek()
        if op.kind == "op" and op.text in ("=", "!="):
            self.next()
            rhs = self.term()
            return _RLit(op.text == "=", "eq", lhs, rhs)
        if lhs.is_var:
            raise self.error("a variable cannot be used as an atom", op)
        return _RLit(True, "atom", lhs)

    def term(self) -> _RTerm:
        t = self.next()
        if t.kind == "upper":
            return _RTerm(t.text, [], True, t.line, t.col)
        if t.kind in ("lower", "squote", "number", "dquote"):
            name = _unquote(t.text) if t.kind == "squote" else t.text
            args = []
            if self.peek().text == "(" and self.peek().kind == "op":
                self.next()
                args.append(self.term())
                while self.peek().text == ",":
                    self.next()
                    args.append(self.term())
                self.expect(")")
            return _RTerm(name, args, False, t.line, t.col)
        if t.kind == "dollar":
            raise UnsupportedInput(f"defined symbol {t.text} is not supported", t.line, t.col, self.source)
        raise self.error(f"expected a term, found {t.text or 'end of input'!r}", t)


def _unquote(s: str) -> str:
    return re.sub(r"\\(.)", r"\1", s[1:-1])


# -- typing -----------------------------------------------------------------

class _Builder:
    """Assigns sorts and builds clauses from raw syntax."""

    def __init__(self, raw: Sequence[_RClause], strict: bool):
        self.strict = strict
        self.problem = ProblemFile()
        self.preds = set()
        self._arity: Dict[str, Tuple[int, _RClause, _RTerm]] = {}
        self._clash_reported = set()
        for rc in raw:
            for lit in rc.lits:
                if lit.kind == "atom":
                    self.preds.add(lit.lhs.name)
        self.raw = raw

    def _symbol(self, rt: _RTerm, rc: _RClause, predicate: bool) -> Symbol:
        name, n = rt.name, len(rt.args)
        if name == TOP_NAME:
            if n:
                self._clash(f"reserved constant {TOP_NAME} used with arguments", rt, rc)
            return TOP
        seen = self._arity.get(name)
        if seen is not None and seen[0] != n:
            self._clash(f"symbol {name} used with arities {seen[0]} and {n}", rt, rc)
        elif seen is None:
            self._arity[name] = (n, rc, rt)
        key = (name, n)
        sym = self.problem.symbols.get(key)
        if sym is None:
            sym = Symbol.untyped(name, n, BOOL if predicate else IOTA)
            self.problem.symbols[key] = sym
        elif (sym.result_sort == BOOL) != predicate:
            self._clash(f"symbol {name} used both as a predicate and as a function", rt, rc)
        return sym

    def _clash(self, msg, rt, rc):
        if msg in self._clash_reported:
            return
        self._clash_reported.add(msg)
        if self.strict:
            raise ParseError(msg, rt.line, rt.col, rc.source)
        self.problem.diagnostics.append(Diagnostic(msg, rt.line, rt.col, rc.source))

    def _term(self, rt: _RTerm, rc, vars_: Dict[str, Var], top_level_sort=IOTA) -> Term:
        if rt.is_var:
            v = vars_.get(rt.name)
            if v is None:
                v = vars_[rt.name] = Var(len(vars_))
            return v
        predicate = top_level_sort == BOOL
        sym = self._symbol(rt, rc, predicate)
        args = tuple(self._term(a, rc, vars_) for a in rt.args)
        return App._make(sym, args)

    def _is_bool_side(self, rt: _RTerm) -> bool:
        return not rt.is_var and (rt.name == TOP_NAME or rt.name in self.preds)

    def build(self) -> ProblemFile:
        top = App._make(TOP, ())
        for rc in self.raw:
            vars_: Dict[str, Var] = {}
            lits = []
            tautology = False
            for rl in rc.lits:
                if rl.kind in ("true", "false"):
                    if (rl.kind == "true") == rl.positive:
                        tautology = True
                    continue
                if rl.kind == "atom":
                    lits.append(Literal(rl.positive, self._term(rl.lhs, rc, vars_, BOOL), top))
                    continue
                boolean = self._is_bool_side(rl.lhs) or self._is_bool_side(rl.rhs)
                srt = BOOL if boolean else IOTA
                lhs = self._term(rl.lhs, rc, vars_, srt)
                rhs = self._term(rl.rhs, rc, vars_, srt)
                if lhs.sort != rhs.sort:
                    self._clash("equation between terms of different sorts", rl.lhs, rc)
                    continue
                lits.append(Literal(rl.positive, lhs, rhs))
            if tautology:
                lits = [Literal(True, top, top)]
            notes = {"name": rc.name, "role": rc.role}
            self.problem.clauses.append(Clause(lits, InferenceRecord("Input", notes=notes)))
            self.problem.names.append(rc.name)
            self.problem.roles.append(rc.role)
            self.problem.spans.append((rc.source, rc.line, rc.col))
        return self.problem


# -- entry points -----------------------------------------------------------

def _include_roots(include_dir, base_dir) -> List[Path]:
    roots = []
    if include_dir:
        roots.append(Path(include_dir))
    env = os.environ.get("TPTP")
    if env:
        roots.append(Path(env))
    if base_dir is not None:
        roots.append(Path(base_dir))
    roots.append(Path.cwd())
    return roots


def _collect(text: str, source: str, include_dir, base_dir, stack: tuple) -> List[_RClause]:
    out: List[_RClause] = []
    parser = _Parser(text, source)
    for unit in parser.units():
        if unit[0] == "cnf":
            out.append(unit[1])
            continue
        _, rel, names, tok = unit
        path = None
        for root in _include_roots(include_dir, base_dir):
            cand = root / rel
            if cand.is_file():
                path = cand
                break
        if path is None:
            raise ParseError(f"cannot resolve include {rel!r}", tok.line, tok.col, source)
        key = str(path.resolve())
        if key in stack:
            raise ParseError(f"include cycle through {rel!r}", tok.line, tok.col, source)
        try:
            sub_text = path.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as e:
            raise ParseError(f"cannot read include {rel!r}: {e}", tok.line, tok.col, source)
        sub = _collect(sub_text, str(path), include_dir, base_dir, stack + (key,))
        if names is not None:
            wanted = set(names)
            sub = [rc for rc in sub if rc.name in wanted]
        out.extend(sub)
    return out


def parse_cnf(text, source: str = "", include_dir=None, base_dir=None, strict: bool = True) -> ProblemFile:
    """Parse CNF text (``str`` or UTF-8 ``bytes``).

    With ``strict`` an arity or sort clash raises :class:`ParseError`;
    otherwise it is recorded in ``ProblemFile.diagnostics``.
    """
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as e:
            raise ParseError(f"input is not valid UTF-8 ({e.reason} at byte {e.start})", source=source)
    try:
        raw = _collect(text, source, include_dir, base_dir, ())
    except RecursionError:
        raise ParseError("formula nested too deeply", source=source)
    return _Builder(raw, strict).build()


def parse_file(path, include_dir=None, strict: bool = True) -> ProblemFile:
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise TptpError(f"cannot read {path}: {e.strerror}") from e
    return parse_cnf(data, str(path), include_dir, path.parent, strict)


def validate(problem: ProblemFile) -> List[Diagnostic]:
    """Consistency diagnostics: symbol clashes, sort errors, missing clauses."""
    diags = list(problem.diagnostics)
    if not problem.clauses:
        diags.append(Diagnostic("no clauses"))
    for c, (src, line, col), name in zip(problem.clauses, problem.spans, problem.names):
        for lit in c.literals:
            if lit.lhs.sort != lit.rhs.sort:
                diags.append(Diagnostic(f"clause {name}: sides of {lit} have different sorts", line, col, src))
    return diags


# -- printing ---------------------------------------------------------------

_LOWER = re.compile(r"[a-z][A-Za-z0-9_]*\Z")


def format_term(t: Term) -> str:
    if t.is_var:
        return f"X{t.id}"
    if t.sym == TOP:
        return TOP_NAME
    name = t.sym.name
    if not _LOWER.match(name):
        name = "'" + name.replace("\\", "\\\\").replace("'", "\\'") + "'"
    if not t.args:
        return name
    return f"{name}({','.join(format_term(a) for a in t.args)})"


def format_literal(lit: Literal) -> str:
    lhs, rhs = lit.lhs, lit.rhs
    if not rhs.is_var and rhs.sym == TOP and not lhs.is_var and lhs.sym != TOP:
        atom = format_term(lhs)
        return atom if lit.positive else f"~{atom}"
    return f"{format_term(lhs)} {'=' if lit.positive else '!='} {format_term(rhs)}"


def format_clause(c) -> str:
    lits = getattr(c, "literals", c)
    if not lits:
        return "$false"
    return " | ".join(format_literal(l) for l in lits)


def format_problem(clauses: Sequence[Clause], names: Sequence[str] = None, roles: Sequence[str] = None) -> str:
    lines = []
    for n, c in enumerate(clauses):
        name = names[n] if names else f"c{n + 1}"
        role = roles[n] if roles else "axiom"
        if not _LOWER.match(name) and not re.fullmatch(r"[0-9]+", name):
            name = "'" + name.replace("\\", "\\\\").replace("'", "\\'") + "'"
        lines.append(f"cnf({name}, {role}, {format_clause(c)}).")
    return "\n".join(lines) + ("\n" if lines else "")
