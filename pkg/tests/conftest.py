from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parents[1]
MINI_CORPUS = REPO_ROOT / "data" / "mini_corpus"
GOLDEN_DIR = REPO_ROOT / "data" / "golden"

# collected by tests/test_acceptance.py; printed after the run
ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def record_acceptance(name: str, ok: bool, detail: str = "") -> None:
    ACCEPTANCE_RESULTS.append((name, ok, detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        status = "PASS" if ok else "FAIL"
        suffix = f"  ({detail})" if detail else ""
        terminalreporter.write_line(f"[{status}] {name}{suffix}")
