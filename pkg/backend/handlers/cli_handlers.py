from dataclasses import dataclass
from typing import Optional, Sequence, Union

from ..models.group_models import FiniteInvolutiveGroup
from ..models.report_models import RunConfig
from ..services.exact_field import to_text
from ..services.galois_h1 import GaloisCohomologyService, h1_trivial_action
from ..services.mukai_cremona import MukaiCremonaService, template_equation
from ..services.report_emitter import compare, emit, parse_report, read_report, write_report
from ..services.verification_suite import run_suite
from ..utils.exceptions import RunConfigError
from ..utils.logging_config import LoggingMixin, log_performance
from ..utils.validation import InputValidator


@dataclass
class CommandResult:
    """Exit code plus the bytes destined for stdout"""
    exit_code: int
    output: bytes = b""


class CliHandlers(LoggingMixin):
    """One method per subcommand; configuration errors propagate to the caller"""

    def __init__(self):
        self.mukai = MukaiCremonaService()
        self.galois = GaloisCohomologyService()

    @staticmethod
    def _parameters(s: Optional[str], t: Optional[str]):
        if (s is None) != (t is None):
            raise RunConfigError("--s and --t must be given together", error_code="MISSING_PARAMETERS")
        if s is None:
            return None, None
        return InputValidator.parse_rational(s), InputValidator.parse_rational(t)

    def build_run_config(
        self,
        mode: str = "symbolic",
        s: Optional[str] = None,
        t: Optional[str] = None,
        suites: Optional[Union[str, Sequence[str]]] = None,
        omega_n: Optional[int] = None,
        torus_level: Optional[int] = None,
        report_format: Optional[str] = None,
        out: Optional[str] = None,
        workers: Optional[int] = None
    ) -> RunConfig:
        """RunConfig from command-line strings; unset values fall back to the configured defaults"""
        s0 = InputValidator.parse_rational(s) if s is not None else None
        t0 = InputValidator.parse_rational(t) if t is not None else None
        options = {
            'mode': mode,
            's0': s0,
            't0': t0,
            'output_path': out,
        }
        if suites is not None:
            options['suites'] = tuple(InputValidator.validate_suites(suites))
        for name, value in (('omega_n', omega_n), ('torus_level', torus_level),
                            ('report_format', report_format), ('workers', workers)):
            if value is not None:
                options[name] = value
        return RunConfig(**options)

    @log_performance
    def verify(self, run_config: RunConfig, compare_path: Optional[str] = None) -> CommandResult:
        """
        Run the suites and emit the report.

        The report goes to run_config.output_path when set, otherwise to stdout.
        With compare_path, status changes against an earlier JSON report are logged.

        Raises:
            ReportIOError: the output or comparison file cannot be accessed
            ReportSchemaError: the comparison file is not a report
        """
        report = run_suite(run_config)
        data = emit(report, run_config.report_format)

        if compare_path:
            previous = parse_report(read_report(compare_path))
            changes = compare(previous, report)
            self.log_operation("compare", against=compare_path, changed=len(changes))
            for check_id, change in changes.items():
                self.logger.warning("Check status changed", check=check_id, **change)

        self.log_operation("verify", mode=run_config.mode, **report.summary)
        if run_config.output_path:
            write_report(data, run_config.output_path)
            return CommandResult(report.exit_code)
        return CommandResult(report.exit_code, data)

    def print_alphas(self, s: Optional[str] = None, t: Optional[str] = None) -> CommandResult:
        """Template coefficients and quadric equation, symbolic or at a rational point"""
        s0, t0 = self._parameters(s, t)
        if s0 is None:
            frame = self.mukai.frame_and_alphas()
        else:
            frame = self.mukai.specialize_frame(s0, t0)
        alpha = frame.alphas
        lines = [f"alpha{k} = {to_text(value)}" for k, value in enumerate(alpha.as_tuple(), start=1)]
        lines.append(f"Q: {template_equation(alpha)}")
        self.log_operation("print_alphas", s=str(s0), t=str(t0))
        return CommandResult(0, ("\n".join(lines) + "\n").encode('utf-8'))

    def h1(self, payload: Union[str, bytes], trivial: bool = False) -> CommandResult:
        """
        Count H^1 classes for a group given as {order, table, theta}.

        With trivial set, theta is ignored and involution classes are counted.

        Raises:
            ValidationError: malformed JSON
            InvalidGroupError: the table is not a group or theta not an involutive automorphism
        """
        data = InputValidator.validate_group_json(payload)
        group = FiniteInvolutiveGroup.from_json(data, name="stdin")
        if trivial:
            count = h1_trivial_action(group)
        else:
            count = self.galois.classes(group).count
        self.log_operation("h1", order=group.order, trivial=trivial, count=count)
        return CommandResult(0, f"{count}\n".encode('utf-8'))
