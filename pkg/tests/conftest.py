import io
import json
from importlib import resources

import jsonschema
import pytest

from nounforge.cli import main

from synthetic import eval_fixture, kitchen


def write_pairs(path, counts):
    path.write_text(counts.dumps(), encoding="utf-8")


@pytest.fixture
def kitchen_files(tmp_path):
    t, counts = kitchen()
    (tmp_path / "thesaurus.tsv").write_text(t.dump(), encoding="utf-8")
    write_pairs(tmp_path / "pairs.tsv", counts)
    return tmp_path


@pytest.fixture
def eval_files(tmp_path):
    t, counts, gold, _ = eval_fixture()
    (tmp_path / "thesaurus.tsv").write_text(t.dump(), encoding="utf-8")
    write_pairs(tmp_path / "pairs.tsv", counts)
    (tmp_path / "gold.tsv").write_text("\n".join(gold) + "\n", encoding="utf-8")
    return tmp_path


def run(argv, stdin=""):
    """Run the CLI in-process; returns (exit status, stdout text)."""
    import sys
    out = io.StringIO()
    saved = sys.stdin
    sys.stdin = io.StringIO(stdin)
    try:
        status = main([str(a) for a in argv], out=out)
    except SystemExit as e:
        status = e.code
    finally:
        sys.stdin = saved
    return status, out.getvalue()


def schema(name):
    text = resources.files("nounforge").joinpath("schemas", name).read_text(encoding="utf-8")
    return json.loads(text)


def validate(record, name):
    jsonschema.validate(record, schema(name))


def pytest_terminal_summary(terminalreporter):
    import test_acceptance
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
