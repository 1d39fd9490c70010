from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Mapping, Optional, Sequence, Tuple

from config import SUITE_NAMES, config
from ..utils.exceptions import ErrorHandler, RunConfigError
from .lattice_models import CurveId, IntersectionTable
from .projective_models import AlphaTriple

REPORT_VERSION = "1.0"

MODES = ("symbolic", "specialized")
FORMATS = ("json", "text")
STATUSES = ("pass", "fail", "skipped")


@dataclass(frozen=True)
class SuiteOverrides:
    """Deliberate corruptions used as negative controls; never set on a normal run"""
    table: Optional[IntersectionTable] = None
    alphas: Optional[AlphaTriple] = None
    cycles: Optional[Mapping[str, Tuple[CurveId, ...]]] = None

    def is_empty(self) -> bool:
        return self.table is None and self.alphas is None and not self.cycles

    def to_dict(self) -> Dict[str, Any]:
        return {
            'table': self.table is not None,
            'alphas': self.alphas.to_dict() if self.alphas is not None else None,
            'cycles': {name: [c.label for c in cycle] for name, cycle in sorted((self.cycles or {}).items())}
        }


@dataclass(frozen=True)
class RunConfig:
    """One verification run"""
    mode: str = "symbolic"
    s0: Optional[Fraction] = None
    t0: Optional[Fraction] = None
    suites: Tuple[str, ...] = SUITE_NAMES
    omega_n: int = field(default_factory=lambda: config.suites.omega_n)
    torus_level: int = field(default_factory=lambda: config.suites.torus_level)
    psi_range: int = field(default_factory=lambda: config.suites.psi_range)
    pairwise_n: int = field(default_factory=lambda: config.suites.pairwise_n)
    report_format: str = field(default_factory=lambda: config.report_format)
    output_path: Optional[str] = None
    workers: int = field(default_factory=lambda: config.suites.workers)
    overrides: SuiteOverrides = field(default_factory=SuiteOverrides)

    def __post_init__(self):
        if self.mode not in MODES:
            raise RunConfigError(f"Unknown mode {self.mode!r}; expected one of {', '.join(MODES)}", error_code="BAD_MODE")

        if self.mode == "specialized":
            if self.s0 is None or self.t0 is None:
                raise RunConfigError("Specialized mode needs both --s and --t", error_code="MISSING_PARAMETERS")
            object.__setattr__(self, 's0', Fraction(self.s0))
            object.__setattr__(self, 't0', Fraction(self.t0))
            ErrorHandler.validate_construction_parameters(self.s0, self.t0)
        elif self.s0 is not None or self.t0 is not None:
            raise RunConfigError("--s and --t only apply to specialized mode", error_code="UNUSED_PARAMETERS")

        suites = tuple(self.suites)
        unknown = [name for name in suites if name not in SUITE_NAMES]
        if unknown:
            raise RunConfigError(f"Unknown suite(s): {', '.join(unknown)}", error_code="UNKNOWN_SUITE")
        object.__setattr__(self, 'suites', tuple(name for name in SUITE_NAMES if name in suites))

        if not 0 <= self.omega_n <= 32:
            raise RunConfigError("omega range must be between 0 and 32", error_code="BAD_OMEGA_N")
        if self.torus_level < 4 or self.torus_level & (self.torus_level - 1):
            raise RunConfigError("torus level must be a power of two >= 4", error_code="BAD_TORUS_LEVEL")
        if self.psi_range < 0 or self.pairwise_n < 1:
            raise RunConfigError("psi range must be >= 0 and pairwise range >= 1", error_code="BAD_PSI_RANGE")
        if self.report_format not in FORMATS:
            raise RunConfigError(f"Unknown report format {self.report_format!r}", error_code="BAD_FORMAT")
        if self.workers < 1:
            raise RunConfigError("workers must be at least 1", error_code="BAD_WORKERS")

    @property
    def specialized(self) -> bool:
        return self.mode == "specialized"

    def to_dict(self) -> Dict[str, Any]:
        """Report view: output path and worker count do not change results"""
        result = {
            'mode': self.mode,
            's': str(self.s0) if self.s0 is not None else None,
            't': str(self.t0) if self.t0 is not None else None,
            'suites': list(self.suites),
            'omega_n': self.omega_n,
            'torus_level': self.torus_level,
            'psi_range': self.psi_range,
            'pairwise_n': self.pairwise_n,
            'format': self.report_format
        }
        if not self.overrides.is_empty():
            result['overrides'] = self.overrides.to_dict()
        return result


@dataclass(frozen=True)
class CheckRecord:
    """Outcome of one check"""
    id: str
    anchor: str
    status: str
    witness: Dict[str, Any] = field(default_factory=dict, hash=False)

    def __post_init__(self):
        ErrorHandler.validate_required_field(self.id, 'id')
        if self.status not in STATUSES:
            raise ValueError(f"Check status must be one of {STATUSES}, got {self.status!r}")

    @property
    def module(self) -> str:
        return self.id.split('.', 1)[0]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'id': self.id,
            'anchor': self.anchor,
            'status': self.status,
            'witness': self.witness
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CheckRecord":
        return cls(data['id'], data['anchor'], data['status'], data.get('witness', {}))


@dataclass(frozen=True)
class Report:
    """Checks sorted by id with summary counts"""
    config: Dict[str, Any]
    checks: Tuple[CheckRecord, ...] = ()
    version: str = REPORT_VERSION

    def __post_init__(self):
        checks = tuple(sorted(self.checks, key=lambda c: c.id))
        ids = [c.id for c in checks]
        if len(ids) != len(set(ids)):
            duplicates = sorted({i for i in ids if ids.count(i) > 1})
            raise ValueError(f"Duplicate check ids in report: {duplicates}")
        object.__setattr__(self, 'checks', checks)

    @property
    def summary(self) -> Dict[str, int]:
        counts = {status: 0 for status in STATUSES}
        for check in self.checks:
            counts[check.status] += 1
        return {
            'total': len(self.checks),
            'passed': counts['pass'],
            'failed': counts['fail'],
            'skipped': counts['skipped']
        }

    @property
    def exit_code(self) -> int:
        return 1 if self.summary['failed'] else 0

    def check(self, check_id: str) -> Optional[CheckRecord]:
        for record in self.checks:
            if record.id == check_id:
                return record
        return None

    def failed(self) -> Sequence[CheckRecord]:
        return [c for c in self.checks if c.status == "fail"]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'version': self.version,
            'config': self.config,
            'checks': [c.to_dict() for c in self.checks],
            'summary': self.summary
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Report":
        return cls(
            config=data['config'],
            checks=tuple(CheckRecord.from_dict(c) for c in data['checks']),
            version=data['version']
        )
