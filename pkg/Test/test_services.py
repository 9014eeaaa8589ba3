import json

import pandas as pd
import pytest

import catalog
import depth
from enums import ClassifyTag, OutputFormat, VerdictKind
from errors import InternalInconsistencyError, NotCoveredError, OracleCapError
from model import AppendixRecord, OutputRecord, PrimeRecord
from services import (ClassificationService, ExportService, OracleService, PrimeSearchService, classify_group,
                      record_payload)


@pytest.fixture
def classification_service():
    return ClassificationService()

@pytest.fixture
def prime_service():
    return PrimeSearchService()

@pytest.fixture
def oracle_service():
    return OracleService(order_cap=5000, join_budget=10 ** 6)

@pytest.fixture
def export_service():
    return ExportService()

@pytest.fixture
def sample_records():
    return [
        OutputRecord("report", "L(2,7)", {"length": 5, "depth": 3, "cr_low": "5/3", "soluble": False},
                     ["length:l2-prime", "depth:l2p-dichotomy"]),
        OutputRecord("primes", "table5-row1 <= 50", {"count": 2, "rows": [{"p": 13}, {"p": 43}]},
                     ["primes:table5-row1"]),
    ]


# --- Classification ---

def test_classify_group_depth3():
    records = classify_group(ClassifyTag.DEPTH3, catalog.linear(2, 8))
    assert [r.group for r in records] == ["L(2,8)"]
    assert records[0].tag == "depth3"
    assert classify_group(ClassifyTag.DEPTH3, catalog.alternating(7)) == []

def test_classify_group_table3_names_the_extension():
    records = classify_group(ClassifyTag.TABLE3, catalog.linear(2, 29))
    assert [r.group for r in records] == ["L(2,29).2"]
    assert records[0].witnesses["extension"] == "2"

def test_classify_group_quasisimple():
    records = classify_group(ClassifyTag.DEPTH4_QUASISIMPLE, catalog.suzuki(8))
    assert [r.group for r in records] == ["2.Sz(8)"]

def test_classify_group_length_filter():
    assert classify_group(ClassifyTag.LENGTH_AT_MOST_9, catalog.linear(2, 25), l_filter=6)
    assert not classify_group(ClassifyTag.LENGTH_AT_MOST_9, catalog.linear(2, 25), l_filter=5)

def test_scan_emits_progress(classification_service, qtbot):
    with qtbot.waitSignal(classification_service.scan_started, timeout=1000) as started:
        with qtbot.waitSignal(classification_service.scan_finished, timeout=10000) as finished:
            records = classification_service.scan(ClassifyTag.DEPTH3, q_max=30, families=["L2"])
    total = started.args[0]
    assert total == len(list(catalog.iter_simple_groups(q_max=30, families=["L2"])))
    assert finished.args == [True, len(records)]
    names = [r.group for r in records]
    assert "L(2,7)" in names and "L(2,8)" in names
    assert "L(2,9)" not in names

def test_scan_progress_counts_every_group(classification_service, qtbot):
    seen = []
    classification_service.scan_progress.connect(lambda done, name: seen.append(done))
    classification_service.scan(ClassifyTag.CD1, q_max=50, families=["L2"])
    assert seen == list(range(1, len(seen) + 1))
    assert seen

def test_scan_needs_a_bound(classification_service, qtbot):
    with qtbot.waitSignal(classification_service.scan_failed, timeout=1000):
        with pytest.raises(ValueError):
            classification_service.scan(ClassifyTag.DEPTH3)

def test_scan_stops_on_inconsistency(classification_service, monkeypatch, qtbot):
    def contradicting(g):
        raise InternalInconsistencyError(f"{catalog.render(g)}: rules disagree")

    monkeypatch.setattr(depth, "depth_witnesses", contradicting)
    with qtbot.waitSignal(classification_service.scan_failed, timeout=1000) as blocker:
        with pytest.raises(InternalInconsistencyError) as excinfo:
            classification_service.scan(ClassifyTag.DEPTH3, q_max=10, families=["L2"])
    assert excinfo.value.exit_code == 4
    assert "rules disagree" in blocker.args[0]

def test_scan_skips_groups_without_a_rule(classification_service, monkeypatch):
    real_witnesses = depth.depth_witnesses

    def uncovered(g):
        if catalog.render(g) == "L(2,7)":
            raise NotCoveredError("no rule")
        return real_witnesses(g)

    monkeypatch.setattr(depth, "depth_witnesses", uncovered)
    names = [r.group for r in classification_service.scan(ClassifyTag.DEPTH3, q_max=10, families=["L2"])]
    assert "L(2,7)" not in names
    assert "L(2,8)" in names

def test_scan_in_parallel_matches_serial(classification_service):
    serial = classification_service.scan(ClassifyTag.CD2, q_max=200, families=["L2", "A"])
    parallel = classification_service.scan(ClassifyTag.CD2, q_max=200, families=["L2", "A"], jobs=2)
    assert parallel == serial


# --- Prime searches ---

def test_prime_search_signals(prime_service, qtbot):
    with qtbot.waitSignal(prime_service.search_started, timeout=1000) as started:
        with qtbot.waitSignal(prime_service.search_finished, timeout=10000) as finished:
            records = prime_service.search("table5-row1", 2000, block_size=500)
    assert started.args == [4]
    assert finished.args == [True, 10]
    assert all(isinstance(r, PrimeRecord) for r in records)
    assert records[-1].p == 1867

def test_prime_search_progress_per_block(prime_service):
    progress = []
    prime_service.search_progress.connect(lambda done, hits: progress.append((done, hits)))
    prime_service.search("table5-row1", 2000, block_size=500)
    assert [done for done, _ in progress] == [1, 2, 3, 4]
    assert progress[-1][1] == 10

def test_prime_search_appendix_records(prime_service):
    records = prime_service.search("appendix", 200)
    assert all(isinstance(r, AppendixRecord) for r in records)
    assert [r.p for r in records] == [5, 149]

def test_prime_search_unknown_family(prime_service, qtbot):
    with qtbot.waitSignal(prime_service.search_failed, timeout=1000):
        with pytest.raises(ValueError):
            prime_service.search("no-such-row", 100)


# --- Oracle ---

def test_oracle_run(oracle_service, qtbot):
    with qtbot.waitSignal(oracle_service.lattice_started, timeout=1000) as started:
        with qtbot.waitSignal(oracle_service.lattice_finished, timeout=30000) as finished:
            report, verdict = oracle_service.run(catalog.alternating(5))
    assert started.args == ["A(5)"]
    assert finished.args == [True, 59]
    assert (report.length, report.depth) == (4, 3)
    assert verdict.kind is VerdictKind.AGREE

def test_oracle_run_without_verify(oracle_service):
    _, verdict = oracle_service.run(catalog.symmetric(3), verify=False)
    assert verdict is None

def test_oracle_cap(oracle_service, qtbot):
    with qtbot.waitSignal(oracle_service.oracle_failed, timeout=1000):
        with pytest.raises(OracleCapError) as excinfo:
            oracle_service.run(catalog.alternating(9))
    assert excinfo.value.exit_code == 3

def test_oracle_export_lattice(oracle_service, tmp_path, qtbot):
    with qtbot.waitSignal(oracle_service.oracle_failed, timeout=1000):
        with pytest.raises(ValueError):
            oracle_service.export_lattice(str(tmp_path / "none.json"))
    oracle_service.run(catalog.symmetric(3), verify=False)
    path = oracle_service.export_lattice(str(tmp_path / "s3.dot"))
    with open(path, encoding="utf-8") as f:
        assert f.read().count("->") == 8


# --- Export ---

def test_record_payload_uses_decimal_strings(sample_records):
    payload = record_payload(sample_records[0])
    assert payload["result"]["length"] == "5"
    assert payload["result"]["soluble"] is False
    assert payload["format"] == "json"

def test_render_json_single_and_many(export_service, sample_records):
    single = json.loads(export_service.render(sample_records[:1], OutputFormat.JSON))
    assert single["query"] == "L(2,7)"
    many = json.loads(export_service.render(sample_records, OutputFormat.JSON))
    assert [r["command"] for r in many] == ["report", "primes"]

def test_render_csv_expands_rows(export_service, sample_records, tmp_path):
    path = tmp_path / "out.csv"
    path.write_text(export_service.render(sample_records[1:], OutputFormat.CSV), encoding="utf-8")
    frame = pd.read_csv(path)
    assert frame["p"].tolist() == [13, 43]
    assert set(frame["command"]) == {"primes"}

def test_render_text_lists_provenance(export_service, sample_records):
    text = export_service.render(sample_records[:1], OutputFormat.TEXT)
    assert text.startswith("report L(2,7)")
    assert "  length: 5" in text
    assert "    - depth:l2p-dichotomy" in text

def test_write_to_file(export_service, sample_records, tmp_path, qtbot):
    target = str(tmp_path / "out.json")
    with qtbot.waitSignal(export_service.export_complete, timeout=1000) as blocker:
        export_service.write(sample_records, OutputFormat.JSON, target)
    assert blocker.args == [target]
    with open(target, encoding="utf-8") as f:
        assert len(json.load(f)) == 2

def test_write_to_stdout(export_service, sample_records, capsys):
    assert export_service.write(sample_records[:1], OutputFormat.TEXT) == "stdout"
    assert "report L(2,7)" in capsys.readouterr().out

def test_write_failure(export_service, sample_records, tmp_path, qtbot):
    target = str(tmp_path / "missing" / "out.json")
    with qtbot.waitSignal(export_service.export_failed, timeout=1000):
        with pytest.raises(OSError):
            export_service.write(sample_records, OutputFormat.JSON, target)
