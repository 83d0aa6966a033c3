from delayed_sup.bench import CORPUS_DIR
from delayed_sup.tptp import parse_file


def corpus_file(stem: str):
    matches = sorted(CORPUS_DIR.glob(f"{stem}*.p"))
    assert len(matches) == 1, stem
    return matches[0]


def load(stem: str):
    return parse_file(corpus_file(stem)).clauses


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE: dict = {}


def record(key: str, passed: bool, detail: str = "") -> bool:
    ACCEPTANCE[key] = (passed, detail)
    return passed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: (len(k.split()[0]), k)):
        passed, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if passed else 'FAIL'}  {detail}")
