import io
import json

import pytest

from app import main
from backend.handlers.cli_handlers import CliHandlers
from backend.utils.exceptions import ForbiddenParameterError, RunConfigError, ValidationError

Z4_INVERSION = {
    'order': 4,
    'table': [[(a + b) % 4 for b in range(4)] for a in range(4)],
    'theta': [0, 3, 2, 1],
}


def feed_stdin(monkeypatch, payload: bytes):
    monkeypatch.setattr('sys.stdin', io.TextIOWrapper(io.BytesIO(payload)))


@pytest.fixture
def handlers():
    return CliHandlers()


@pytest.mark.unit
class TestHandlers:
    def test_build_run_config(self, handlers):
        run_config = handlers.build_run_config(mode="specialized", s="2", t="3", suites="mukai,config")
        assert run_config.suites == ("config", "mukai")
        assert run_config.s0 == 2 and run_config.t0 == 3

    def test_bad_rational(self, handlers):
        with pytest.raises(ValidationError):
            handlers.build_run_config(mode="specialized", s="two", t="3")

    def test_diagonal_rejected(self, handlers):
        with pytest.raises(ForbiddenParameterError):
            handlers.build_run_config(mode="specialized", s="2", t="2")

    def test_print_alphas_needs_both(self, handlers):
        with pytest.raises(RunConfigError):
            handlers.print_alphas(s="2")

    def test_h1(self, handlers):
        assert handlers.h1(json.dumps(Z4_INVERSION)).output == b"2\n"
        assert handlers.h1(json.dumps(Z4_INVERSION), trivial=True).output == b"2\n"


@pytest.mark.integration
class TestMain:
    def test_print_alphas(self, capsysbinary):
        assert main(["print-alphas", "--s", "2", "--t", "3"]) == 0
        lines = capsysbinary.readouterr().out.decode('utf-8').splitlines()
        assert lines[0] == "alpha1 = ((2))/((1))"
        assert lines[-1].startswith("Q: ")

    def test_print_alphas_lone_parameter(self, capsysbinary):
        assert main(["print-alphas", "--s", "2"]) == 2
        captured = capsysbinary.readouterr()
        assert captured.out == b""
        assert b"error:" in captured.err

    def test_verify_text(self, capsysbinary):
        assert main(["verify", "--suites", "cohomology", "--format", "text"]) == 0
        lines = capsysbinary.readouterr().out.decode('utf-8').splitlines()
        assert lines[0].startswith("kummer-enriques-verifier report")
        assert all(line.startswith("PASS cohomology.") for line in lines[1:-1])
        assert lines[-1].endswith("0 failed, 0 skipped")

    def test_verify_json_stdout_is_clean(self, capsysbinary):
        assert main(["--log-level", "DEBUG", "verify", "--suites", "cohomology"]) == 0
        payload = json.loads(capsysbinary.readouterr().out)
        assert payload['summary']['failed'] == 0

    def test_forbidden_parameters(self, capsysbinary):
        assert main(["verify", "--mode", "specialized", "--s", "2", "--t", "2"]) == 2

    def test_unknown_suite(self, capsysbinary):
        assert main(["verify", "--suites", "config,hodge"]) == 2

    def test_usage_error(self, capsysbinary):
        assert main(["verify", "--mode", "numeric"]) == 2
        assert main([]) == 2

    def test_out_and_compare(self, capsysbinary, temp_report_path):
        assert main(["verify", "--suites", "cohomology", "--out", temp_report_path]) == 0
        assert capsysbinary.readouterr().out == b""
        with open(temp_report_path, 'rb') as f:
            assert json.loads(f.read())['config']['suites'] == ["cohomology"]

        assert main(["verify", "--suites", "cohomology", "--compare", temp_report_path]) == 0
        assert json.loads(capsysbinary.readouterr().out)['summary']['failed'] == 0

    def test_compare_with_missing_file(self, capsysbinary, tmp_path):
        assert main(["verify", "--suites", "cohomology", "--compare", str(tmp_path / "none.json")]) == 2

    def test_h1_from_stdin(self, capsysbinary, monkeypatch):
        feed_stdin(monkeypatch, json.dumps(Z4_INVERSION).encode('utf-8'))
        assert main(["h1"]) == 0
        assert capsysbinary.readouterr().out == b"2\n"

    def test_h1_bad_group(self, capsysbinary, monkeypatch):
        bad = dict(Z4_INVERSION, theta=[0, 2, 1, 3])
        feed_stdin(monkeypatch, json.dumps(bad).encode('utf-8'))
        assert main(["h1"]) == 2

    def test_h1_rejects_invalid_utf8(self, capsysbinary, monkeypatch):
        feed_stdin(monkeypatch, b'\xff')
        assert main(["h1"]) == 2
        assert capsysbinary.readouterr().out == b""

    def test_compare_with_invalid_utf8(self, capsysbinary, tmp_path):
        path = tmp_path / "garbled.json"
        path.write_bytes(b'\xff\xfe{"version": "1.0"}')
        assert main(["verify", "--suites", "cohomology", "--compare", str(path)]) == 2
