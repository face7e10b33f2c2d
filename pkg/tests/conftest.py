from pathlib import Path

import pytest

from fspv.composer import compile_target
from fspv.fsp import load_spec

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"

ACCEPTANCE_LINES: list[str] = []


def spec(name):
    return load_spec(CORPUS / name)


def target(file, name, args=None):
    return compile_target(spec(file), name, args)


@pytest.fixture
def corpus_dir():
    return CORPUS


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
