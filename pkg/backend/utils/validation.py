"""
Input validation for the verifier's command-line and JSON inputs.
"""

import json
import re
from fractions import Fraction
from typing import Any, Dict, List, Sequence, Union

from config import SUITE_NAMES
from ..utils.exceptions import ValidationError


class InputValidator:
    """Validation of user-supplied rationals, suite lists, expressions and group tables"""

    MAX_EXPRESSION_LENGTH = 4096
    MAX_GROUP_ORDER = 512
    MAX_JSON_BYTES = 16 * 1024 * 1024

    RATIONAL_PATTERN = re.compile(r'^-?\d+(/\d+)?$')
    SUITE_PATTERN = re.compile(r'^[a-z]+$')
    EXPRESSION_PATTERN = re.compile(r'^[str0-9+\-*/^()\s]+$')

    @staticmethod
    def parse_rational(text: str) -> Fraction:
        """
        Parse "a" or "a/b" into an exact rational.

        Raises:
            ValidationError: malformed text or zero denominator
        """
        if not isinstance(text, str):
            raise ValidationError("Rational value must be a string")

        text = text.strip()
        if not InputValidator.RATIONAL_PATTERN.match(text):
            raise ValidationError(
                f"Not a rational number: {text!r}",
                error_code="BAD_RATIONAL",
                details={'value': text}
            )
        if re.search(r'/0+$', text):
            raise ValidationError(f"Zero denominator in {text!r}", error_code="BAD_RATIONAL")
        return Fraction(text)

    @staticmethod
    def validate_suites(text: Union[str, Sequence[str]]) -> List[str]:
        """
        Comma list of suite names, returned in canonical order without duplicates.

        An empty string selects no suites.
        """
        if isinstance(text, str):
            names = [name.strip() for name in text.split(',') if name.strip()]
        else:
            names = [str(name).strip() for name in text]

        unknown = [name for name in names if name not in SUITE_NAMES]
        if unknown:
            raise ValidationError(
                f"Unknown suite(s): {', '.join(unknown)}; expected a subset of {', '.join(SUITE_NAMES)}",
                error_code="UNKNOWN_SUITE",
                details={'unknown': unknown}
            )
        return [name for name in SUITE_NAMES if name in names]

    @staticmethod
    def validate_expression(text: str) -> str:
        """Token alphabet s t r digits + - * / ^ ( ) and whitespace"""
        if not isinstance(text, str):
            raise ValidationError("Expression must be a string")

        text = text.strip()
        if not text:
            raise ValidationError("Expression cannot be empty")
        if len(text) > InputValidator.MAX_EXPRESSION_LENGTH:
            raise ValidationError(f"Expression too long (max {InputValidator.MAX_EXPRESSION_LENGTH} characters)")
        if not InputValidator.EXPRESSION_PATTERN.match(text):
            raise ValidationError(
                "Expression contains characters outside s, t, r, digits and + - * / ^ ( )",
                error_code="BAD_EXPRESSION"
            )
        return text

    @staticmethod
    def validate_json_structure(data: Union[str, bytes, Dict], max_size: int = None) -> Dict[str, Any]:
        """
        Validate JSON structure and size.

        Raises:
            ValidationError: If JSON is invalid or not an object
        """
        max_size = max_size or InputValidator.MAX_JSON_BYTES
        if isinstance(data, bytes):
            try:
                data = data.decode('utf-8')
            except UnicodeDecodeError as e:
                raise ValidationError(f"Input is not valid UTF-8: {e.reason}", error_code="BAD_ENCODING", cause=e)
        if isinstance(data, str):
            if len(data.encode('utf-8')) > max_size:
                raise ValidationError(f"JSON too large (max {max_size} bytes)")

            try:
                data = json.loads(data)
            except json.JSONDecodeError as e:
                raise ValidationError(f"Invalid JSON: {str(e)}", cause=e)

        if not isinstance(data, dict):
            raise ValidationError("JSON must be an object/dictionary")

        return data

    @staticmethod
    def validate_group_json(data: Union[str, bytes, Dict]) -> Dict[str, Any]:
        """
        Shape checks for {order, table, theta} before the group axioms are tested.

        Raises:
            ValidationError: missing keys, wrong sizes or out-of-range entries
        """
        data = InputValidator.validate_json_structure(data)

        for key in ('order', 'table'):
            if key not in data:
                raise ValidationError(f"Group JSON is missing '{key}'", error_code="BAD_GROUP_JSON")

        order = data['order']
        if not isinstance(order, int) or isinstance(order, bool) or not 1 <= order <= InputValidator.MAX_GROUP_ORDER:
            raise ValidationError(
                f"Group order must be an integer in 1..{InputValidator.MAX_GROUP_ORDER}",
                error_code="BAD_GROUP_JSON",
                details={'order': order}
            )

        table = data['table']
        if not isinstance(table, list) or len(table) != order:
            raise ValidationError(f"Table must have {order} rows", error_code="BAD_GROUP_JSON")
        for row in table:
            if not isinstance(row, list) or len(row) != order:
                raise ValidationError(f"Every table row must have {order} entries", error_code="BAD_GROUP_JSON")
            if any(not isinstance(x, int) or isinstance(x, bool) or not 0 <= x < order for x in row):
                raise ValidationError(f"Table entries must be integers in 0..{order - 1}", error_code="BAD_GROUP_JSON")

        theta = data.get('theta', list(range(order)))
        if not isinstance(theta, list) or len(theta) != order:
            raise ValidationError(f"theta must list {order} images", error_code="BAD_GROUP_JSON")
        if any(not isinstance(x, int) or isinstance(x, bool) or not 0 <= x < order for x in theta):
            raise ValidationError(f"theta entries must be integers in 0..{order - 1}", error_code="BAD_GROUP_JSON")

        return {'order': order, 'table': table, 'theta': theta}
