import os
import logging
from dataclasses import dataclass, field
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

SUITE_NAMES = ("config", "fibration", "torsor", "mukai", "cohomology", "omega")


@dataclass
class FieldConfig:
    """Configuration for exact rational-function arithmetic"""
    max_degree: int = 64

    def validate(self) -> list[str]:
        """Validate field configuration and return list of errors"""
        errors = []
        if self.max_degree < 8:
            errors.append("KUMMER_MAX_DEGREE must be at least 8")
        return errors


@dataclass
class SuiteDefaults:
    """Default sizes for the verification suites"""
    omega_n: int = 8
    torus_level: int = 16
    psi_range: int = 10
    pairwise_n: int = 10
    workers: int = 1

    def validate(self) -> list[str]:
        """Validate suite defaults and return list of errors"""
        errors = []
        if not 0 <= self.omega_n <= 32:
            errors.append("KUMMER_OMEGA_N must be between 0 and 32")
        if self.torus_level < 4 or self.torus_level & (self.torus_level - 1):
            errors.append("KUMMER_TORUS_LEVEL must be a power of two >= 4")
        if self.psi_range < 0:
            errors.append("KUMMER_PSI_RANGE must be non-negative")
        if self.pairwise_n < 1:
            errors.append("KUMMER_PAIRWISE_N must be at least 1")
        if self.workers < 1:
            errors.append("KUMMER_WORKERS must be at least 1")
        return errors


@dataclass
class AppConfig:
    """Main application configuration"""
    arithmetic: FieldConfig = field(default_factory=FieldConfig)
    suites: SuiteDefaults = field(default_factory=SuiteDefaults)
    report_format: str = "json"
    log_level: str = "WARNING"

    @classmethod
    def from_environment(cls) -> 'AppConfig':
        """Create configuration from environment variables"""
        field_config = FieldConfig(
            max_degree=int(os.getenv('KUMMER_MAX_DEGREE', '64'))
        )

        suite_defaults = SuiteDefaults(
            omega_n=int(os.getenv('KUMMER_OMEGA_N', '8')),
            torus_level=int(os.getenv('KUMMER_TORUS_LEVEL', '16')),
            psi_range=int(os.getenv('KUMMER_PSI_RANGE', '10')),
            pairwise_n=int(os.getenv('KUMMER_PAIRWISE_N', '10')),
            workers=int(os.getenv('KUMMER_WORKERS', '1')),
        )

        return cls(
            arithmetic=field_config,
            suites=suite_defaults,
            report_format=os.getenv('KUMMER_REPORT_FORMAT', 'json').lower(),
            log_level=os.getenv('LOG_LEVEL', 'WARNING').upper(),
        )

    def validate(self) -> list[str]:
        """Validate all configuration and return list of errors"""
        errors = []

        errors.extend(self.arithmetic.validate())
        errors.extend(self.suites.validate())

        if self.report_format not in ("json", "text"):
            errors.append("KUMMER_REPORT_FORMAT must be 'json' or 'text'")

        return errors


# Global configuration instance
config = AppConfig.from_environment()


def validate_configuration() -> bool:
    """Validate configuration and log any issues"""
    errors = config.validate()

    if errors:
        for error in errors:
            logging.error(f"Configuration error: {error}")
        return False

    return True
