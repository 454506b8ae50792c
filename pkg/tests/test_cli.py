"""Command-line interface: argument handling, output shapes, exit codes."""

import json
import subprocess
import sys

import pytest

import oracles
from pgx.cli import DEFAULT_LISTEN, entry

WHY_SITTING = "Why do you think the person is sitting?"


@pytest.fixture()
def pg_file(tmp_path, fixture_pg_text):
    path = tmp_path / "scene.pg.json"
    path.write_text(fixture_pg_text)
    return str(path)


@pytest.fixture()
def onto_file(tmp_path, fixture_onto_text):
    path = tmp_path / "facts.onto"
    path.write_text(fixture_onto_text)
    return str(path)


@pytest.fixture()
def corpus_file(tmp_path):
    path = tmp_path / "annotations.jsonl"
    lines = [json.dumps(r) for r in oracles.build_corpus_records(26)]
    path.write_text("\n".join(lines) + "\n")
    return str(path)


class TestValidate:
    def test_valid_file(self, pg_file, capsys):
        assert entry(["validate", pg_file]) == 0
        assert capsys.readouterr().out == "valid\n"

    def test_invalid_file_lists_violations(self, tmp_path, fixture_pg_text, capsys):
        doc = json.loads(fixture_pg_text)
        doc["nodes"][0]["score"] = 4.5
        path = tmp_path / "bad.pg.json"
        path.write_text(json.dumps(doc))
        assert entry(["validate", str(path)]) == 1
        out = capsys.readouterr().out
        assert "score-range" in out
        assert out.rstrip().endswith("violation(s)")

    def test_malformed_json(self, tmp_path, capsys):
        path = tmp_path / "broken.pg.json"
        path.write_text("{nope")
        assert entry(["validate", str(path)]) == 1
        assert capsys.readouterr().err.startswith("error:")

    def test_missing_file(self, capsys):
        with pytest.raises(SystemExit) as err:
            entry(["validate", "/no/such/file.json"])
        assert err.value.code == 1
        assert "cannot read" in capsys.readouterr().err


class TestAsk:
    def test_why_question(self, pg_file, onto_file, capsys):
        code = entry(["ask", pg_file, WHY_SITTING, "--ontology", onto_file])
        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].startswith("WH_X -> ")
        assert any(line.startswith("  ranked: ") for line in lines)
        assert " > " in [l for l in lines if l.startswith("  ranked:")][0]

    def test_evidence_lines(self, pg_file, onto_file, capsys):
        entry(["ask", pg_file, "Why do you think there is a person?",
               "--ontology", onto_file])
        out = capsys.readouterr().out
        assert "  evidence: " in out

    def test_hypothetical_prints_consequences(self, pg_file, onto_file, capsys):
        code = entry(["ask", pg_file, "What if the person was not sitting?",
                      "--ontology", onto_file])
        assert code == 0
        out = capsys.readouterr().out
        assert out.startswith("DO_NOT_X -> ")
        assert "  consequence: " in out

    def test_unrecognized_question(self, pg_file, capsys):
        assert entry(["ask", pg_file, "hello there"]) == 2
        err = capsys.readouterr().err
        assert err.startswith("error:")
        assert "supported question forms:" in err
        # one example line per question type
        assert sum(1 for line in err.splitlines() if line.startswith("  ")) == 10

    def test_bad_ontology_file(self, pg_file, tmp_path, capsys):
        path = tmp_path / "facts.onto"
        path.write_text("part_of head\n")
        with pytest.raises(SystemExit) as err:
            entry(["ask", pg_file, WHY_SITTING, "--ontology", str(path)])
        assert err.value.code == 1

    def test_policy_flag(self, pg_file, tmp_path, capsys):
        from pgx.policy import default_table, save_policy

        path = tmp_path / "policy.json"
        path.write_text(save_policy(default_table()))
        assert entry(["ask", pg_file, WHY_SITTING, "--policy", str(path)]) == 0


class TestEval:
    def test_matrix_output(self, corpus_file, capsys):
        assert entry(["eval", corpus_file]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 11
        assert lines[0].split()[0] == "Question"
        assert lines[1].startswith("WH-X")

    def test_uniform_weights_appends_aggregate(self, corpus_file, capsys):
        assert entry(["eval", corpus_file, "--weights", "uniform"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 12
        assert lines[-1].startswith("ALL (uniform)")

    def test_bad_corpus(self, tmp_path, capsys):
        path = tmp_path / "bad.jsonl"
        path.write_text("{oops\n")
        with pytest.raises(SystemExit) as err:
            entry(["eval", str(path)])
        assert err.value.code == 1
        assert "line 1" in capsys.readouterr().err


class TestRepl:
    def run_repl(self, monkeypatch, pg_file, onto_file, lines):
        feed = iter(lines)

        def fake_input(prompt=""):
            try:
                return next(feed)
            except StopIteration:
                raise EOFError

        monkeypatch.setattr("builtins.input", fake_input)
        return entry(["repl", pg_file, "--ontology", onto_file])

    def test_ask_then_quit(self, monkeypatch, pg_file, onto_file, capsys):
        code = self.run_repl(monkeypatch, pg_file, onto_file, [WHY_SITTING, ":quit"])
        assert code == 0
        out = capsys.readouterr().out
        assert out.startswith("ask away")
        assert "WH_X -> " in out

    def test_history_lists_turns_and_overlay(
        self, monkeypatch, pg_file, onto_file, capsys
    ):
        code = self.run_repl(
            monkeypatch,
            pg_file,
            onto_file,
            [WHY_SITTING, "What if the person was not sitting?", ":history", ":quit"],
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "1. [WH_X -> " in out
        assert "2. [DO_NOT_X -> " in out
        assert "overlay:" in out
        assert "remove_node" in out

    def test_reset(self, monkeypatch, pg_file, onto_file, capsys):
        code = self.run_repl(
            monkeypatch, pg_file, onto_file, [WHY_SITTING, ":reset", ":history", ":quit"]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "session reset" in out
        assert "1. [" not in out.split("session reset")[1]

    def test_eof_exits_cleanly(self, monkeypatch, pg_file, onto_file, capsys):
        assert self.run_repl(monkeypatch, pg_file, onto_file, []) == 0

    def test_unrecognized_line_keeps_running(
        self, monkeypatch, pg_file, onto_file, capsys
    ):
        code = self.run_repl(monkeypatch, pg_file, onto_file, ["hello there", ":quit"])
        assert code == 0
        assert "supported question forms:" in capsys.readouterr().err


class TestServe:
    def capture_run(self, monkeypatch):
        calls = {}

        def fake_run(app, host, port, log_level):
            calls.update(app=app, host=host, port=port, log_level=log_level)

        import uvicorn

        monkeypatch.setattr(uvicorn, "run", fake_run)
        return calls

    def test_default_listen(self, monkeypatch):
        monkeypatch.delenv("PGX_LISTEN", raising=False)
        calls = self.capture_run(monkeypatch)
        assert entry(["serve"]) == 0
        host, port = DEFAULT_LISTEN.rsplit(":", 1)
        assert (calls["host"], calls["port"]) == (host, int(port))

    def test_env_listen(self, monkeypatch):
        monkeypatch.setenv("PGX_LISTEN", "0.0.0.0:9100")
        calls = self.capture_run(monkeypatch)
        assert entry(["serve"]) == 0
        assert (calls["host"], calls["port"]) == ("0.0.0.0", 9100)

    def test_flag_beats_env(self, monkeypatch):
        monkeypatch.setenv("PGX_LISTEN", "0.0.0.0:9100")
        calls = self.capture_run(monkeypatch)
        assert entry(["serve", "--listen", "127.0.0.1:9200"]) == 0
        assert (calls["host"], calls["port"]) == ("127.0.0.1", 9200)

    def test_bad_listen(self, monkeypatch, capsys):
        self.capture_run(monkeypatch)
        with pytest.raises(SystemExit) as err:
            entry(["serve", "--listen", "nonsense"])
        assert err.value.code == 1


class TestConsoleScript:
    def test_installed_entry_point(self, pg_file):
        result = subprocess.run(
            [sys.executable, "-m", "pgx.cli", "validate", pg_file],
            capture_output=True,
            text=True,
        )
        assert result.returncode == 0
        assert result.stdout == "valid\n"
