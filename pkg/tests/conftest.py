"""
Pytest configuration and shared fixtures for the verifier tests.
"""

import pytest
import tempfile
import os

# Add the project root to the path
import sys
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from backend.models.report_models import RunConfig
from backend.services.exact_field import R, S, T
from backend.services.fibration_mw import FibrationService
from backend.services.kummer_config import KummerConfigService
from backend.services.mukai_cremona import MukaiCremonaService
from backend.services.torsor_calculus import TorsorCalculusService


@pytest.fixture
def field_gens():
    """The generators s, t, r of Q(s, t, r)"""
    return S, T, R


@pytest.fixture
def kummer_service():
    """Configuration service over the incidence-rule table"""
    return KummerConfigService()


@pytest.fixture
def fibration_service(kummer_service):
    return FibrationService(kummer_service)


@pytest.fixture
def d1_fibration(fibration_service):
    return fibration_service.build_fibration("D1")


@pytest.fixture
def d2_fibration(fibration_service):
    return fibration_service.build_fibration("D2")


@pytest.fixture
def torsor_service(fibration_service):
    return TorsorCalculusService(fibration_service)


@pytest.fixture
def general_calibration(torsor_service):
    return torsor_service.calibrate("general")


@pytest.fixture
def diagonal_calibration(torsor_service):
    return torsor_service.calibrate("diagonal")


@pytest.fixture
def mukai_service():
    return MukaiCremonaService()


@pytest.fixture
def mukai_frame_symbolic(mukai_service):
    """Frame and template coefficients over Q(s, t)"""
    return mukai_service.frame_and_alphas(S, T)


@pytest.fixture
def mukai_frame_23(mukai_service):
    """Frame at (s, t) = (2, 3)"""
    return mukai_service.specialize_frame(2, 3)


@pytest.fixture
def default_run_config():
    return RunConfig()


@pytest.fixture
def temp_report_path():
    """Temporary path for a report file"""
    with tempfile.NamedTemporaryFile(mode='wb', delete=False, suffix='.json') as f:
        path = f.name
    yield path
    if os.path.exists(path):
        os.unlink(path)
