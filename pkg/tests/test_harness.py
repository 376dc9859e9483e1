import json
import subprocess
import sys

import pytest

from dynsubmod.cli import main
from dynsubmod.errors import SpecError, StreamValidationError
from dynsubmod.harness import RunConfig, RunError, run
from dynsubmod.streams import (DELETE, INSERT, StreamEvent, format_stream, generate_stream,
                               parse_gen_spec, parse_stream, parse_stream_text)

CARD_ORACLE = {"function": {"type": "coverage", "universe": 6,
                            "covers": {"1": [0, 1], "2": [1, 2], "3": [3], "4": [3, 4, 5],
                                       "5": [0], "6": [2, 5]}}}


def test_parse_insert_delete(tmp_path):
    p = tmp_path / "s.txt"
    p.write_text("+ 3\n- 3")
    assert [(e.op, e.element) for e in parse_stream(p)] == [(INSERT, 3), (DELETE, 3)]


def test_delete_of_dead_element():
    with pytest.raises(StreamValidationError) as info:
        parse_stream_text("- 3\n")
    assert info.value.position == 0


def test_crlf_and_comments(tmp_path):
    lf, crlf = tmp_path / "lf", tmp_path / "crlf"
    lf.write_bytes(b"# header\n+ 1\n+ 2  # trailing\n\n- 1\n")
    crlf.write_bytes(b"# header\r\n+ 1\r\n+ 2  # trailing\r\n\r\n- 1\r\n")
    assert parse_stream(lf) == parse_stream(crlf)


def test_malformed_line_reports_line_number():
    with pytest.raises(SpecError, match="line 2"):
        parse_stream_text("+ 1\n* 2\n")


def test_double_insert_is_invalid():
    with pytest.raises(StreamValidationError):
        parse_stream_text("+ 1\n+ 1\n")


def test_generate_examples():
    assert [e.op for e in generate_stream(5, 5, "insert_only", 0)] == [INSERT] * 5
    window = generate_stream(10, 6, "sliding_window", 0, window=2)
    assert format_stream(window).split("\n")[:-1] == ["+ 1", "+ 2", "- 1", "+ 3", "- 2", "+ 4"]
    assert generate_stream(20, 100, "random_mix", 4, p_delete=0.3) == \
        generate_stream(20, 100, "random_mix", 4, p_delete=0.3)


def test_generated_streams_are_valid():
    for dist, kw in (("insert_only", {}), ("sliding_window", {"window": 4}), ("random_mix", {"p_delete": 0.6})):
        events = generate_stream(12, 80, dist, 1, **kw)
        assert parse_stream_text(format_stream(events)) == [StreamEvent(e.op, e.element, e.t) for e in events]


def test_gen_spec_parsing():
    kw = parse_gen_spec("sliding_window:n=10,ops=30,w=4")
    assert kw == {"distribution": "sliding_window", "n": 10, "ops": 30, "window": 4}
    with pytest.raises(SpecError):
        parse_gen_spec("random_mix:q=1")


def _cfg(tmp_path, **kw):
    base = dict(constraint="cardinality", k=2, epsilon=1, oracle=CARD_ORACLE,
                gen="random_mix:n=6,ops=40,p=0.3", seed=3)
    base.update(kw)
    return RunConfig(**base)


def test_tiny_run_meets_bound(tmp_path):
    report = run(_cfg(tmp_path, baseline="exact", check_invariants=True))
    last = report.steps[-1]
    assert last["value"] * 3 >= last["baseline"]
    assert report.summary["bound_failures"] == 0
    assert report.summary["invariant_violations"] == 0


def test_report_totals_reconcile(tmp_path):
    report = run(_cfg(tmp_path, check_invariants=True, baseline="greedy", baseline_every=5))
    s = report.summary
    assert s["update_queries_total"] == sum(r["update_queries"] for r in report.steps)
    assert s["audit_queries_total"] == sum(r["audit_queries"] for r in report.steps)
    assert s["update_queries_max"] == max(r["update_queries"] for r in report.steps)
    assert sum("baseline" in r for r in report.steps) == 8


def test_report_is_reproducible(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    run(_cfg(tmp_path, out=a, check_invariants=True))
    run(_cfg(tmp_path, out=b, check_invariants=True))
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert len(lines) == 41 and "summary" in json.loads(lines[-1])


def test_matroid_run_needs_matroid(tmp_path):
    with pytest.raises(RunError):
        run(_cfg(tmp_path, constraint="matroid"))


def test_bad_event_reports_index(tmp_path):
    events = [StreamEvent(INSERT, 1), StreamEvent(INSERT, 1)]
    with pytest.raises(RunError, match="event 1"):
        run(_cfg(tmp_path, gen=None, events=events))


def test_uniformity_mode(tmp_path):
    oracle = {"function": {"type": "coverage", "universe": 9, "covers": {str(e): [e] for e in range(9)}},
              "matroid": {"type": "uniform", "k": 4}}
    report = run(_cfg(tmp_path, constraint="matroid", k=None, oracle=oracle,
                      gen="insert_only:n=9,ops=9", uniformity_trials=800))
    u = report.summary["uniformity"]
    assert u["trials"] == 800 and u["pool_size"] >= 2 and 0 <= u["p_value"] <= 1


def test_cli_end_to_end(tmp_path, capsys):
    oracle, stream, out = tmp_path / "o.json", tmp_path / "s.txt", tmp_path / "r.jsonl"
    assert main(["gen-oracle", "--n", "8", "--matroid", "graphic", "--out", str(oracle)]) == 0
    assert main(["gen-stream", "random_mix:n=8,ops=30", "--out", str(stream)]) == 0
    assert len(parse_stream(stream)) == 30
    # generated stream files use ids 1..n; the run draws its own stream over the oracle's ids
    code = main(["run", "--constraint", "matroid", "--epsilon", "0.5", "--oracle", str(oracle),
                 "--gen", "random_mix:n=8,ops=30", "--check-invariants", "--baseline", "exact",
                 "--out", str(out)])
    assert code == 0
    summary = json.loads(out.read_text().splitlines()[-1])["summary"]
    assert summary["events"] == 30 and summary["invariant_violations"] == 0


def test_cli_reports_errors(tmp_path, capsys):
    assert main(["run", "--constraint", "cardinality", "--k", "2", "--epsilon", "1",
                 "--oracle", str(tmp_path / "missing.json"), "--gen", "insert_only:n=3"]) == 2
    assert "error" in capsys.readouterr().err


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "dynsubmod", "gen-stream", "sliding_window:n=4,ops=6,w=2"],
                         capture_output=True, text=True, check=True).stdout
    assert out.splitlines() == ["+ 1", "+ 2", "- 1", "+ 3", "- 2", "+ 4"]
