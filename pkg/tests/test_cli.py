import io
import json
import shutil

from fastapi.testclient import TestClient

from multicat.cli import build_parser, main, run_repl
from multicat.service import build_registry, create_app

from .conftest import DATASETS, EXAMPLE_1, EXAMPLE_2

EX1_CSV = "customerId,customerName,creditLimit\r\nc1,Mary,5000\r\nc4,Alice,8000\r\n"


def test_query_csv(capsys):
    rc = main(["query", "--data", str(DATASETS), "-d", "ecommerce",
               "-q", EXAMPLE_1, "--format", "csv"])
    captured = capsys.readouterr()
    assert rc == 0
    assert captured.out == EX1_CSV
    assert captured.err == ""


def test_cli_csv_matches_service_payload(capsys):
    main(["query", "--data", str(DATASETS), "-d", "ecommerce",
          "-q", EXAMPLE_1, "--format", "csv"])
    cli_out = capsys.readouterr().out
    client = TestClient(create_app(build_registry(str(DATASETS))))
    body = client.post("/datasets/ecommerce/query", json={"query": EXAMPLE_1}).json()
    assert cli_out == body["rendered"]["relational"]["csv"]


def test_query_default_format_follows_to_clause(capsys):
    rc = main(["query", "--data", str(DATASETS), "-d", "ecommerce", "-q", EXAMPLE_1])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert [v["id"] for v in payload["graph"]["vertices"]] == ["c1", "c4"]


def test_query_table_format(capsys):
    rc = main(["query", "--data", str(DATASETS), "-d", "ecommerce",
               "-q", EXAMPLE_2, "--format", "table"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "col1" in out and "Mary" in out and "Alice" in out


def test_query_dot_format(capsys):
    rc = main(["query", "--data", str(DATASETS), "-d", "ecommerce",
               "-q", EXAMPLE_1, "--format", "dot"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "c1 -> c4;" in out


def test_malformed_query_file(tmp_path, capsys):
    bad = tmp_path / "query.txt"
    bad.write_text("QUERY (\\x ->\nFROM customers TO xml")
    rc = main(["query", "--data", str(DATASETS), "-d", "ecommerce",
               "-f", str(bad)])
    captured = capsys.readouterr()
    assert rc == 1
    assert captured.out == ""
    assert "syntax error at" in captured.err


def test_missing_dataset_dir(capsys):
    rc = main(["query", "--data", str(DATASETS), "-d", "missing", "-q", EXAMPLE_1])
    captured = capsys.readouterr()
    assert rc == 2
    assert "error" in captured.err


def test_check_ok(capsys):
    rc = main(["check", "--data", str(DATASETS)])
    out = capsys.readouterr().out
    assert rc == 0
    assert "ecommerce: OK" in out
    assert "company: OK" in out


def test_check_empty_root(tmp_path, capsys):
    rc = main(["check", "--data", str(tmp_path)])
    assert rc == 0
    assert "no datasets" in capsys.readouterr().out


def test_check_flags_corrupted_composite(tmp_path, capsys):
    root = tmp_path / "data"
    shutil.copytree(DATASETS / "company", root / "company")
    # projectDept should send pr1 to d1; misroute it to d2.
    (root / "company" / "projectdept.csv").write_text(
        "key,value\r\npr1,d2\r\npr2,d2\r\n")
    rc = main(["check", "--data", str(root)])
    out = capsys.readouterr().out
    assert rc == 1
    assert "company: FAIL" in out
    assert "functor-composition" in out


def test_check_unloadable_package(tmp_path, capsys):
    root = tmp_path / "data"
    shutil.copytree(DATASETS / "ecommerce", root / "ecommerce")
    (root / "ecommerce" / "locations.csv").unlink()
    rc = main(["check", "--data", str(root)])
    assert rc == 2
    assert "error" in capsys.readouterr().err


def test_repl_session():
    args = build_parser().parse_args(
        ["repl", "--data", str(DATASETS), "-d", "ecommerce"])
    script = EXAMPLE_1 + "\n\n:schema\n:examples\n:quit\n"
    out = io.StringIO()
    rc = run_repl(args, stdin=io.StringIO(script), stdout=out)
    text = out.getvalue()
    assert rc == 0
    assert "stages: 1" in text
    assert "located: Customer -> Location" in text
    assert "orderProducts: Order -> [Product]" in text
    assert "Example 1" in text
    assert '"c1"' in text  # the graph JSON rendering


def test_repl_reports_diagnostics_and_continues():
    args = build_parser().parse_args(
        ["repl", "--data", str(DATASETS), "-d", "ecommerce"])
    script = "QUERY oops\n\n:quit\n"
    out = io.StringIO()
    rc = run_repl(args, stdin=io.StringIO(script), stdout=out)
    assert rc == 0
    assert "syntax error" in out.getvalue()
