import pytest
from hypothesis import given, settings, strategies as st

from delayed_sup.bench import CORPUS_DIR
from delayed_sup.terms import BOOL, IOTA, TOP
from delayed_sup.tptp import (
    ParseError, TptpError, UnsupportedInput, format_clause, format_problem, parse_cnf, parse_file,
    validate,
)

SAMPLE = """
% comment line
cnf(ax1, axiom, f(X, g(X)) != t).
cnf(ax2, axiom, ( f(g(b), Y) = t | ~p(Y) ) ).
cnf(goal, negated_conjecture, p(a), [annotation(1)]).
/* block
   comment */
cnf('quoted name', hypothesis, 'Strange Sym' = c).
"""


def test_parse_sample():
    prob = parse_cnf(SAMPLE, "sample.p")
    assert prob.names == ["ax1", "ax2", "goal", "quoted name"]
    assert prob.roles[2] == "negated_conjecture"
    assert prob.conjecture_flags == [False, False, True, False]
    assert len(prob.clauses) == 4
    assert str(prob.clauses[1]) == "f(g(b),X0) = t | ~p(X0)"
    assert prob.symbols[("p", 1)].result_sort == BOOL
    assert prob.symbols[("f", 2)].result_sort == IOTA
    assert prob.clauses[0].derivation.notes == {"name": "ax1", "role": "axiom"}
    assert validate(prob) == []


def test_variables_are_clause_local():
    prob = parse_cnf("cnf(a, axiom, X = Y). cnf(b, axiom, f(Y) = X).")
    assert str(prob.clauses[0]) == "X0 = X1"
    assert str(prob.clauses[1]) == "f(X0) = X1"


def test_truth_constants():
    prob = parse_cnf("cnf(a, axiom, $false | p). cnf(b, axiom, $true | q). cnf(c, axiom, $false).")
    assert str(prob.clauses[0]) == "p"
    assert prob.clauses[1].literals[0].lhs.sym == TOP
    assert prob.clauses[2].is_empty


def test_reserved_top_constant():
    prob = parse_cnf("cnf(a, axiom, p(X) = tTop).")
    assert prob.clauses[0].literals[0].rhs.sym == TOP
    assert prob.clauses[0].literals[0].lhs.sort == BOOL


def test_predicate_equation_gets_boolean_sort():
    prob = parse_cnf("cnf(a, axiom, p(a) | q). cnf(b, axiom, p(X) = q).")
    lit = prob.clauses[1].literals[0]
    assert lit.lhs.sort == BOOL and lit.rhs.sort == BOOL


@pytest.mark.parametrize("text, kind, line", [
    ("cnf(a, axiom, f(X) = ).", ParseError, 1),
    ("\n\ncnf(a, axiom, p(X)", ParseError, 3),
    ("fof(a, axiom, ![X]: p(X)).", UnsupportedInput, 1),
    ("cnf(a, axiom, p => q).", UnsupportedInput, 1),
    ("cnf(a, axiom, p(a)).\ncnf(b, axiom, p(a,b)).", ParseError, 2),
    ("cnf(a, bogus_role, p).", ParseError, 1),
])
def test_errors_carry_location(text, kind, line):
    with pytest.raises(kind) as e:
        parse_cnf(text, "bad.p")
    assert e.value.line == line
    assert e.value.col > 0
    assert str(e.value).startswith("bad.p:")


def test_non_strict_collects_diagnostics():
    prob = parse_cnf("cnf(a, axiom, p(a)).\ncnf(b, axiom, p(a,b)).", strict=False)
    diags = validate(prob)
    assert len(diags) == 1 and "arities" in diags[0].message
    assert diags[0].line == 2


def test_predicate_used_as_function_is_clash():
    with pytest.raises(ParseError):
        parse_cnf("cnf(a, axiom, p(a)). cnf(b, axiom, f(p(a)) = b).")


def test_empty_problem_diagnostic():
    assert [d.message for d in validate(parse_cnf("% nothing\n"))] == ["no clauses"]


def test_bad_utf8_and_deep_nesting():
    with pytest.raises(ParseError):
        parse_cnf(b"cnf(a, axiom, \xff).")
    deep = "cnf(a, axiom, " + "f(" * 5000 + "a" + ")" * 5000 + " = b)."
    with pytest.raises(ParseError):
        parse_cnf(deep)


def test_includes(tmp_path, monkeypatch):
    monkeypatch.delenv("TPTP", raising=False)
    (tmp_path / "Axioms").mkdir()
    (tmp_path / "Axioms" / "ax.ax").write_text("cnf(k1, axiom, a = b).\ncnf(k2, axiom, b = c).\n")
    main = tmp_path / "main.p"
    main.write_text("include('Axioms/ax.ax').\ninclude('Axioms/ax.ax', [k2]).\ncnf(g, negated_conjecture, a != c).\n")
    prob = parse_file(main)
    assert prob.names == ["k1", "k2", "k2", "g"]
    other = tmp_path / "elsewhere"
    other.mkdir()
    moved = other / "main.p"
    moved.write_text(main.read_text())
    with pytest.raises(ParseError, match="cannot resolve include"):
        parse_file(moved)
    assert len(parse_file(moved, include_dir=tmp_path).clauses) == 4
    monkeypatch.setenv("TPTP", str(tmp_path))
    assert len(parse_file(moved).clauses) == 4


def test_include_cycle(tmp_path):
    (tmp_path / "a.p").write_text("include('b.p').\n")
    (tmp_path / "b.p").write_text("include('a.p').\n")
    with pytest.raises(ParseError, match="cycle"):
        parse_file(tmp_path / "a.p")


def test_missing_file():
    with pytest.raises(TptpError):
        parse_file("/nonexistent/problem.p")


def test_corpus_round_trips():
    files = sorted(CORPUS_DIR.glob("*.p"))
    assert len(files) >= 50
    for path in files:
        prob = parse_file(path)
        text = format_problem(prob.clauses, prob.names, prob.roles)
        again = parse_cnf(text)
        assert [format_clause(c) for c in again.clauses] == [format_clause(c) for c in prob.clauses]
        assert again.names == prob.names and again.roles == prob.roles


names = st.from_regex(r"k[a-z0-9_]{0,4}", fullmatch=True)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(names, names, st.booleans()), min_size=1, max_size=5))
def test_generated_equations_round_trip(eqs):
    text = "".join(f"cnf(c{n}, axiom, f({l}) {'=' if p else '!='} g({r}, X)).\n"
                   for n, (l, r, p) in enumerate(eqs))
    prob = parse_cnf(text)
    again = parse_cnf(format_problem(prob.clauses, prob.names, prob.roles))
    assert list(map(str, again.clauses)) == list(map(str, prob.clauses))


tptp_fragments = st.lists(st.sampled_from(
    ["cnf", "(", ")", ",", ".", "|", "~", "=", "!=", "X", "a", "f", "axiom", " ", "\n", "%", "'",
     "include", "[", "]", "$true", "$false", "/*", "*/", "fof", "&"]), max_size=30).map("".join)


@settings(max_examples=400, deadline=None)
@given(st.one_of(tptp_fragments, st.text(max_size=40), st.binary(max_size=40)))
def test_parser_is_total(text):
    try:
        prob = parse_cnf(text, strict=False)
    except TptpError:
        return
    validate(prob)
