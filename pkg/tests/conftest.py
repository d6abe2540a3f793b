import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

# acceptance criteria report one line each; collected here and printed at the end
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split()[0][1:])):
            terminalreporter.write_line(line)
