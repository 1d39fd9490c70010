from fractions import Fraction

import pytest

from backend.models.fibration_models import FiberConfiguration, MWProfile
from backend.models.lattice_models import CurveId
from backend.services.fibration_mw import FibrationService
from backend.services.kummer_config import declared_components
from backend.utils.exceptions import (
    NegativeRankError, NonCycleError, NotASectionError, OddBranchCountError
)


@pytest.mark.unit
class TestCycles:
    @pytest.mark.parametrize("name, second", [("D1", "D1'"), ("D2", "D2'")])
    def test_derived_cycles_follow_declared_order(self, fibration_service, name, second):
        fib = fibration_service.build_fibration(name)
        assert fib.cycle(0) == declared_components(name)
        assert fib.cycle(1) == declared_components(second)

    def test_euler_census(self, d1_fibration, d2_fibration):
        for fib in (d1_fibration, d2_fibration):
            assert fib.i1_count == 8
            assert fib.euler_census == 24

    def test_zero_sections(self, d1_fibration, d2_fibration):
        assert d1_fibration.zero_section is CurveId.C21
        assert d2_fibration.zero_section is CurveId.C23

    def test_supplied_cycle_is_checked(self, fibration_service):
        order = list(declared_components("D1"))
        # a rotation is still a cycle
        rotated = order[3:] + order[:3]
        fib = fibration_service.build_fibration("D1", {"D1": rotated})
        assert fib.cycle(0) == tuple(rotated)

    def test_broken_cycle_order(self, fibration_service):
        order = list(declared_components("D1"))
        order[1], order[2] = order[2], order[1]
        with pytest.raises(NonCycleError):
            fibration_service.build_fibration("D1", {"D1": order})

    def test_cycle_with_wrong_components(self, fibration_service):
        order = list(declared_components("D1"))
        order[0] = CurveId.E0
        with pytest.raises(NonCycleError):
            fibration_service.check_cycle(order, declared_components("D1"))

    def test_non_cycle_adjacency(self, fibration_service):
        with pytest.raises(NonCycleError):
            fibration_service.build_cycle([CurveId.E0, CurveId.E1, CurveId.C00])

    def test_unknown_fibration(self, fibration_service):
        with pytest.raises(ValueError):
            fibration_service.build_fibration("D3")

    def test_fiber_configuration_validation(self):
        with pytest.raises(ValueError):
            FiberConfiguration("I8", (CurveId.E0,))
        with pytest.raises(ValueError):
            FiberConfiguration("I1", (CurveId.E0,))
        with pytest.raises(ValueError):
            FiberConfiguration("IV")


@pytest.mark.unit
class TestHeights:
    def test_c32_on_d2(self, fibration_service, d2_fibration):
        record = fibration_service.section_positions(d2_fibration, CurveId.C32)
        assert record.positions == [4, 4]
        assert record.components == [CurveId.E3, CurveId.F2]
        breakdown = fibration_service.height_breakdown(d2_fibration, CurveId.C32)
        assert breakdown.summands() == [4, 0, -2, -2]
        assert breakdown.total == 0

    def test_c12_on_d1(self, fibration_service, d1_fibration):
        assert fibration_service.height_self(d1_fibration, CurveId.C12) == 0
        assert fibration_service.torsion_candidate(d1_fibration, CurveId.C12)

    def test_zero_section_has_height_zero(self, fibration_service, d1_fibration, d2_fibration):
        assert fibration_service.height_self(d1_fibration, CurveId.C21) == 0
        assert fibration_service.height_self(d2_fibration, CurveId.C23) == 0

    def test_height_is_rational(self, fibration_service, d1_fibration):
        height = fibration_service.height_self(d1_fibration, CurveId.C11)
        assert isinstance(height, Fraction)

    def test_not_a_section(self, fibration_service, d1_fibration):
        with pytest.raises(NotASectionError):
            fibration_service.section_positions(d1_fibration, CurveId.E0)

    def test_torsion_sections(self, fibration_service, d2_fibration):
        assert CurveId.C32 in fibration_service.torsion_sections(d2_fibration)
        assert CurveId.C23 not in fibration_service.torsion_sections(d2_fibration)


@pytest.mark.unit
class TestMordellWeil:
    def test_shioda_tate(self, d2_fibration):
        assert FibrationService.shioda_tate_rank(18, d2_fibration.reducible_fibers) == 2

    def test_negative_rank(self, d2_fibration):
        with pytest.raises(NegativeRankError):
            FibrationService.shioda_tate_rank(10, d2_fibration.reducible_fibers)

    def test_profile(self, fibration_service, d2_fibration):
        profile = fibration_service.mw_profile(d2_fibration)
        assert profile.rank == 2
        assert profile.torsion_exponent_claim == 2
        assert profile.describe() == "Z^2 + Z/2"

    @pytest.mark.parametrize("branch, genus", [(2, 0), (4, 1), (8, 3)])
    def test_genus(self, branch, genus):
        assert FibrationService.genus_double_cover(branch) == genus

    @pytest.mark.parametrize("branch", [3, 7, -2])
    def test_odd_branch_count(self, branch):
        with pytest.raises(OddBranchCountError):
            FibrationService.genus_double_cover(branch)

    def test_profile_validation(self):
        assert MWProfile(0).describe() == "0"
        with pytest.raises(ValueError):
            MWProfile(-1)
