"""
Report serialization.

JSON output is sorted, indented and newline-terminated so that equal
reports give equal bytes. Text output has one line per check.
"""

import json
from pathlib import Path
from typing import Dict, Optional, Union

from ..models.report_models import FORMATS, REPORT_VERSION, Report
from ..utils.exceptions import ReportIOError, ReportSchemaError, ValidationError
from ..utils.logging_config import get_logger
from ..utils.validation import InputValidator

logger = get_logger(__name__)

REQUIRED_KEYS = ('version', 'config', 'checks', 'summary')
CHECK_KEYS = ('id', 'anchor', 'status', 'witness')
STATUS_MARKS = {'pass': "PASS", 'fail': "FAIL", 'skipped': "SKIP"}


def emit_json(report: Report) -> bytes:
    text = json.dumps(report.to_dict(), sort_keys=True, indent=2, ensure_ascii=False)
    return (text + "\n").encode('utf-8')


def emit_text(report: Report) -> bytes:
    lines = [f"kummer-enriques-verifier report v{report.version} ({report.config.get('mode', '?')})"]
    for record in report.checks:
        line = f"{STATUS_MARKS[record.status]} {record.id} -- {record.anchor}"
        if record.status == "skipped":
            line += f" [{record.witness.get('reason', '')}]"
        lines.append(line)
    summary = report.summary
    lines.append(
        f"{summary['total']} checks: {summary['passed']} passed, "
        f"{summary['failed']} failed, {summary['skipped']} skipped"
    )
    return ("\n".join(lines) + "\n").encode('utf-8')


def emit(report: Report, report_format: str = "json") -> bytes:
    """Serialize a report as json or text"""
    if report_format == "json":
        return emit_json(report)
    if report_format == "text":
        return emit_text(report)
    raise ValueError(f"Unknown report format {report_format!r}; expected one of {FORMATS}")


def write_report(data: bytes, path: Union[str, Path]) -> Path:
    """
    Write emitted bytes to a file.

    Raises:
        ReportIOError: the file cannot be written
    """
    path = Path(path)
    try:
        path.write_bytes(data)
    except OSError as e:
        raise ReportIOError(
            f"Cannot write report to {path}: {e.strerror or e}",
            error_code="REPORT_WRITE_FAILED",
            details={'path': str(path)},
            cause=e
        ) from e
    logger.info("Report written", path=str(path), size=len(data))
    return path


def read_report(path: Union[str, Path]) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as e:
        raise ReportIOError(
            f"Cannot read report from {path}: {e.strerror or e}",
            error_code="REPORT_READ_FAILED",
            details={'path': str(path)},
            cause=e
        ) from e


def parse_report(data: Union[bytes, str]) -> Report:
    """
    Rebuild a Report from its JSON bytes.

    Raises:
        ReportSchemaError: not JSON, or keys missing or mistyped
    """
    try:
        payload = InputValidator.validate_json_structure(data)
    except ValidationError as e:
        raise ReportSchemaError(f"Report is not a JSON object: {e.message}", cause=e) from e

    missing = [key for key in REQUIRED_KEYS if key not in payload]
    if missing:
        raise ReportSchemaError(
            f"Report is missing {', '.join(missing)}",
            error_code="REPORT_SCHEMA",
            details={'missing': missing}
        )
    if payload['version'] != REPORT_VERSION:
        raise ReportSchemaError(
            f"Unsupported report version {payload['version']!r}",
            error_code="REPORT_VERSION",
            details={'version': payload['version']}
        )
    if not isinstance(payload['checks'], list) or not isinstance(payload['config'], dict):
        raise ReportSchemaError("Report checks must be a list and config an object", error_code="REPORT_SCHEMA")
    for entry in payload['checks']:
        if not isinstance(entry, dict) or any(key not in entry for key in CHECK_KEYS):
            raise ReportSchemaError(
                "Every check needs id, anchor, status and witness",
                error_code="REPORT_SCHEMA",
                details={'entry': entry if isinstance(entry, dict) else str(entry)}
            )

    try:
        report = Report.from_dict(payload)
    except (KeyError, TypeError, ValueError) as e:
        raise ReportSchemaError(f"Malformed report: {e}", error_code="REPORT_SCHEMA", cause=e) from e

    if report.summary != payload['summary']:
        raise ReportSchemaError(
            "Report summary does not match its checks",
            error_code="REPORT_SUMMARY",
            details={'declared': payload['summary'], 'recomputed': report.summary}
        )
    return report


def compare(previous: Report, current: Report) -> Dict[str, Dict[str, Optional[str]]]:
    """Check ids whose status differs, with both statuses (None when absent)"""
    before = {c.id: c.status for c in previous.checks}
    after = {c.id: c.status for c in current.checks}
    return {
        check_id: {'before': before.get(check_id), 'after': after.get(check_id)}
        for check_id in sorted(set(before) | set(after))
        if before.get(check_id) != after.get(check_id)
    }
