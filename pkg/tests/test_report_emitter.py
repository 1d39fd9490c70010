import json

import pytest

from backend.models.report_models import CheckRecord, Report, RunConfig
from backend.services.report_emitter import (
    compare, emit, emit_json, emit_text, parse_report, read_report, write_report
)
from backend.utils.exceptions import ReportIOError, ReportSchemaError


@pytest.fixture
def sample_report():
    return Report(
        config=RunConfig(suites=("config", "omega")).to_dict(),
        checks=(
            CheckRecord("omega.rank", "span has dimension 2N", "skipped", {'reason': "symbolic-only"}),
            CheckRecord("config.gram-rank", "rank 18", "pass", {'rank': 18}),
            CheckRecord("config.cycle-rank", "I8 cycles", "fail", {'cycle_ranks': {'D1': 6}}),
        )
    )


@pytest.mark.unit
class TestEmit:
    def test_checks_are_sorted(self, sample_report):
        assert [c.id for c in sample_report.checks] == ["config.cycle-rank", "config.gram-rank", "omega.rank"]

    def test_json_shape(self, sample_report):
        data = emit_json(sample_report)
        assert data.endswith(b"\n")
        payload = json.loads(data)
        assert set(payload) == {'version', 'config', 'checks', 'summary'}
        assert payload['summary'] == {'total': 3, 'passed': 1, 'failed': 1, 'skipped': 1}
        assert payload['checks'][0]['id'] == "config.cycle-rank"

    def test_json_is_deterministic(self, sample_report):
        rebuilt = Report(config=dict(sample_report.config), checks=tuple(reversed(sample_report.checks)))
        assert emit_json(rebuilt) == emit_json(sample_report)

    def test_text_lines(self, sample_report):
        lines = emit_text(sample_report).decode('utf-8').splitlines()
        assert lines[0].startswith("kummer-enriques-verifier report v1.0 (symbolic)")
        assert lines[1] == "FAIL config.cycle-rank -- I8 cycles"
        assert lines[2] == "PASS config.gram-rank -- rank 18"
        assert lines[3] == "SKIP omega.rank -- span has dimension 2N [symbolic-only]"
        assert lines[4] == "3 checks: 1 passed, 1 failed, 1 skipped"

    def test_unknown_format(self, sample_report):
        with pytest.raises(ValueError):
            emit(sample_report, "xml")

    def test_exit_code(self, sample_report):
        assert sample_report.exit_code == 1

    def test_duplicate_ids(self):
        record = CheckRecord("config.gram-rank", "rank 18", "pass")
        with pytest.raises(ValueError):
            Report(config={}, checks=(record, record))

    def test_bad_status(self):
        with pytest.raises(ValueError):
            CheckRecord("config.gram-rank", "rank 18", "maybe")


@pytest.mark.unit
class TestParse:
    def test_round_trip(self, sample_report):
        parsed = parse_report(emit_json(sample_report))
        assert parsed.to_dict() == sample_report.to_dict()

    def test_file_round_trip(self, sample_report, temp_report_path):
        write_report(emit_json(sample_report), temp_report_path)
        assert parse_report(read_report(temp_report_path)) == sample_report

    @pytest.mark.parametrize("mutate", [
        lambda p: p.pop('summary'),
        lambda p: p.update(version="0.1"),
        lambda p: p['checks'][0].pop('anchor'),
        lambda p: p['summary'].update(passed=3),
        lambda p: p.update(checks={}),
    ])
    def test_schema_errors(self, sample_report, mutate):
        payload = json.loads(emit_json(sample_report))
        mutate(payload)
        with pytest.raises(ReportSchemaError):
            parse_report(json.dumps(payload))

    def test_not_json(self):
        with pytest.raises(ReportSchemaError):
            parse_report(b"PASS config.gram-rank")

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(ReportIOError):
            read_report(tmp_path / "missing.json")

    def test_unwritable_path(self, sample_report, tmp_path):
        with pytest.raises(ReportIOError):
            write_report(emit_json(sample_report), tmp_path / "no-such-dir" / "report.json")


@pytest.mark.unit
def test_compare_lists_status_changes(sample_report):
    current = Report(
        config=sample_report.config,
        checks=(
            CheckRecord("config.gram-rank", "rank 18", "pass"),
            CheckRecord("config.cycle-rank", "I8 cycles", "pass"),
            CheckRecord("mukai.smoothness", "smooth", "pass"),
        )
    )
    assert compare(sample_report, current) == {
        "config.cycle-rank": {'before': "fail", 'after': "pass"},
        "mukai.smoothness": {'before': None, 'after': "pass"},
        "omega.rank": {'before': "skipped", 'after': None},
    }
