import json
from fractions import Fraction

import pytest

from config import AppConfig, SuiteDefaults
from backend.utils.cache import LRUCache, cache_result, make_key
from backend.utils.exceptions import (
    BaseVerifierException, ErrorHandler, FieldDivisionByZeroError, ForbiddenParameterError,
    NonCycleError, ReportIOError, ValidationError, create_exception_from_error
)
from backend.utils.metrics import MetricsCollector, PerformanceCounter, metrics_collector, performance_timer
from backend.utils.validation import InputValidator


@pytest.mark.unit
class TestInputValidator:
    @pytest.mark.parametrize("text, value", [("2", 2), ("-3/4", Fraction(-3, 4)), (" 10/5 ", 2)])
    def test_parse_rational(self, text, value):
        assert InputValidator.parse_rational(text) == value

    @pytest.mark.parametrize("text", ["", "1.5", "a", "1/0", "1/-2", "--1"])
    def test_parse_rational_rejects(self, text):
        with pytest.raises(ValidationError):
            InputValidator.parse_rational(text)

    def test_suites(self):
        assert InputValidator.validate_suites("omega,config,config") == ["config", "omega"]
        assert InputValidator.validate_suites("") == []
        with pytest.raises(ValidationError) as info:
            InputValidator.validate_suites("config,hodge")
        assert info.value.details == {'unknown': ["hodge"]}

    def test_expression(self):
        assert InputValidator.validate_expression(" s^2 - t ") == "s^2 - t"
        for text in ("", "x + 1", "s; t"):
            with pytest.raises(ValidationError):
                InputValidator.validate_expression(text)

    def test_json_structure(self):
        assert InputValidator.validate_json_structure(b'{"a": 1}') == {'a': 1}
        with pytest.raises(ValidationError):
            InputValidator.validate_json_structure("[1, 2]")
        with pytest.raises(ValidationError):
            InputValidator.validate_json_structure("{")
        with pytest.raises(ValidationError):
            InputValidator.validate_json_structure('{"a": 1}', max_size=4)

    def test_json_structure_rejects_invalid_utf8(self):
        with pytest.raises(ValidationError) as info:
            InputValidator.validate_json_structure(b'\xff\xfe{"a":1}')
        assert info.value.error_code == "BAD_ENCODING"
        assert isinstance(info.value.cause, UnicodeDecodeError)

    def test_group_json(self):
        data = InputValidator.validate_group_json({'order': 2, 'table': [[0, 1], [1, 0]]})
        assert data['theta'] == [0, 1]

    @pytest.mark.parametrize("payload", [
        {'table': [[0]]},
        {'order': 0, 'table': []},
        {'order': 2, 'table': [[0, 1]]},
        {'order': 2, 'table': [[0, 1], [1, 2]]},
        {'order': 2, 'table': [[0, 1], [1, 0]], 'theta': [0]},
        {'order': True, 'table': [[0]]},
    ])
    def test_group_json_rejects(self, payload):
        with pytest.raises(ValidationError):
            InputValidator.validate_group_json(json.dumps(payload))


@pytest.mark.unit
class TestExceptions:
    def test_to_dict(self):
        error = NonCycleError("broken", details={'fibration': "D1"}, cause=ValueError("x"))
        assert error.to_dict() == {
            'error': "NonCycleError",
            'message': "broken",
            'type': "NonCycleError",
            'details': {'fibration': "D1"},
            'cause': "x",
        }

    def test_create_from_error(self):
        assert isinstance(create_exception_from_error(ZeroDivisionError()), FieldDivisionByZeroError)
        assert isinstance(create_exception_from_error(OSError("disk")), ReportIOError)
        generic = create_exception_from_error(KeyError("k"), context="lookup")
        assert generic.error_code == "UNKNOWN_ERROR"
        assert "lookup" in generic.message

    def test_verifier_errors_pass_through(self):
        error = ValidationError("bad")
        assert ErrorHandler.handle_check_error(error, "config.gram-rank") is error

    def test_describe(self):
        assert ErrorHandler.describe(None) == {}
        assert ErrorHandler.describe(RuntimeError("boom"))['type'] == "RuntimeError"
        assert ErrorHandler.describe(ValidationError("bad"))['error'] == "ValidationError"

    @pytest.mark.parametrize("s0, t0", [(0, 2), (2, 1), (3, 3)])
    def test_construction_parameters(self, s0, t0):
        with pytest.raises(ForbiddenParameterError):
            ErrorHandler.validate_construction_parameters(s0, t0)

    def test_diagonal_allowed_on_request(self):
        ErrorHandler.validate_construction_parameters(3, 3, allow_diagonal=True)

    def test_required_field(self):
        with pytest.raises(ValidationError):
            ErrorHandler.validate_required_field("  ", 'id')

    def test_hierarchy(self):
        assert issubclass(ForbiddenParameterError, BaseVerifierException)


@pytest.mark.unit
class TestCache:
    def test_lru_eviction(self):
        cache = LRUCache(max_size=2)
        cache.put("a", 1)
        cache.put("b", 2)
        assert cache.get("a") == 1
        cache.put("c", 3)
        assert cache.get("b") is None
        assert len(cache) == 2
        assert cache.stats()['hits'] == 1

    def test_put_refreshes_recency(self):
        cache = LRUCache(max_size=2)
        cache.put("a", 1)
        cache.put("b", 2)
        cache.put("a", 10)
        cache.put("c", 3)
        assert cache.get("a") == 10
        assert cache.get("b") is None

    def test_cache_result(self):
        calls = []

        @cache_result(LRUCache())
        def square(x):
            calls.append(x)
            return x * x

        assert square(3) == square(3) == 9
        assert calls == [3]
        assert square.cache.stats()['size'] == 1

    def test_make_key(self):
        assert make_key("frame", "2", "3") == make_key("frame", 2, 3)
        assert make_key("frame", "2", "3") != make_key("frame", "3", "2")


@pytest.mark.unit
class TestMetrics:
    def test_counter(self):
        counter = PerformanceCounter()
        counter.record(0.5)
        counter.record(1.5, failed=True)
        stats = counter.get_stats()
        assert stats['count'] == 2
        assert stats['failures'] == 1
        assert stats['average_time'] == 1.0

    def test_collector(self):
        collector = MetricsCollector()
        collector.record_counter("config.gram-rank", 0.2)
        collector.record_counter("mukai.smoothness", 0.9)
        assert [s['name'] for s in collector.slowest(1)] == ["mukai.smoothness"]
        snapshot = collector.snapshot()
        assert snapshot['rss_bytes'] > 0
        assert set(collector.get_all_metrics()["counters"]) == {"config.gram-rank", "mukai.smoothness"}

    def test_timer_records_failures(self):
        with pytest.raises(RuntimeError):
            with performance_timer("check.timer-failure"):
                raise RuntimeError("boom")
        stats = metrics_collector.get_all_metrics()["counters"]["check.timer-failure"]
        assert stats["failures"] >= 1


@pytest.mark.unit
class TestConfig:
    def test_defaults_are_valid(self):
        assert AppConfig().validate() == []

    def test_from_environment(self, monkeypatch):
        monkeypatch.setenv('KUMMER_OMEGA_N', "5")
        monkeypatch.setenv('KUMMER_REPORT_FORMAT', "TEXT")
        app_config = AppConfig.from_environment()
        assert app_config.suites.omega_n == 5
        assert app_config.report_format == "text"

    def test_invalid_values(self):
        errors = AppConfig(suites=SuiteDefaults(torus_level=5, workers=0), report_format="yaml").validate()
        assert len(errors) == 3
