from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from backend.models.curve_models import INFINITY
from backend.models.lattice_models import CurveId
from backend.models.torsor_models import MarkedPoint, MobiusMap, TorsorElement
from backend.services.exact_field import ONE, R, S, T, ZERO, rf, torsion_unit_test
from backend.services.torsor_calculus import (
    F_SECTION, H_SECTION, ZERO_SECTION, centralizer_scalar, expected_psi_n, f4_restriction,
    omega_rank, pairwise_distinct, psi_n, psi_restriction, torsor_mul
)
from backend.utils.exceptions import (
    CalibrationInconsistencyError, DegenerateMapError, NotASectionError, ZeroInputError
)


@pytest.mark.unit
class TestTorsorGroup:
    def test_identity_and_inverse(self):
        a = TorsorElement(ONE + T, 3)
        assert torsor_mul(TorsorElement.identity(), a) == a
        assert torsor_mul(a, a.inverse()).is_identity()

    def test_shift_is_mod_eight(self):
        b = TorsorElement(S, 6)
        assert b ** 4 == TorsorElement(S ** 4, 0)
        assert TorsorElement(S, 11).shift == 3

    def test_zero_scalar(self):
        with pytest.raises(ZeroInputError):
            TorsorElement(ZERO, 1)


@pytest.mark.unit
class TestMobius:
    def test_degenerate(self):
        with pytest.raises(DegenerateMapError):
            MobiusMap(ONE, ONE, ONE, ONE)

    def test_three_points(self):
        m = MobiusMap.from_three_points((rf(0), ONE, INFINITY), (ONE, INFINITY, rf(0)))
        assert m(0) == ONE
        assert m(1) is INFINITY
        assert m(INFINITY) == ZERO

    def test_inverse_and_power(self):
        m = MobiusMap(S, ONE, ZERO, ONE)
        assert m.compose(m.inverse()).is_identity()
        assert m.power(3).same_map(m.compose(m).compose(m))
        assert m.power(-1).same_map(m.inverse())

    def test_translation_amount(self):
        assert MobiusMap(ONE, S, ZERO, ONE).translation_amount() == S
        assert MobiusMap.scaling(S).translation_amount() is None

    def test_same_map_is_projective(self):
        assert MobiusMap(2 * S, 2, 0, 2).same_map(MobiusMap(S, 1, 0, 1))


@pytest.mark.unit
class TestRestrictions:
    def test_psi_is_one_minus_x(self):
        psi = psi_restriction()
        assert psi.same_map(MobiusMap(-ONE, ONE, ZERO, ONE))
        assert psi(INFINITY) is INFINITY
        assert psi.compose(psi).is_identity()

    def test_f4_is_scaling_by_r(self):
        f4 = f4_restriction()
        assert f4.same_map(MobiusMap.scaling(R))
        assert f4(S) == R * S

    @pytest.mark.parametrize("n", [-3, -1, 0, 1, 2, 5])
    def test_psi_n(self, n):
        assert psi_n(n).same_map(expected_psi_n(n))
        assert psi_n(n).compose(psi_n(n)).is_identity()

    @pytest.mark.parametrize("m, n", [(0, 1), (2, -1), (-2, 3)])
    def test_products_are_translations(self, m, n):
        amount = psi_n(m).compose(psi_n(n)).translation_amount()
        assert amount == R ** (-m) - R ** (-n)

    def test_pairwise_distinct(self):
        assert pairwise_distinct(4)
        assert not pairwise_distinct(4, r_value=1)
        assert not pairwise_distinct(4, r_value=-1)
        with pytest.raises(ValueError):
            pairwise_distinct(0)

    def test_centralizer_scalar(self):
        assert centralizer_scalar(1, 1) == ONE
        assert centralizer_scalar(5, 1) == R ** 4
        assert not torsion_unit_test(centralizer_scalar(-2, 3))

    @pytest.mark.parametrize("N", [0, 1, 2, 5, 8])
    def test_omega_rank(self, N):
        assert omega_rank(N) == 2 * N


@pytest.mark.property
@settings(max_examples=20, deadline=None)
@given(st.integers(-6, 6), st.integers(-6, 6))
def test_centralizer_scalar_is_power_of_r(n, m):
    value = centralizer_scalar(n, m)
    assert value == R ** (n - m)
    assert torsion_unit_test(value) == (n == m)


@pytest.mark.integration
class TestCalibration:
    def test_marked_point_table(self, torsor_service):
        table = torsor_service.marked_point_table("general")
        assert [c.component for c in table.charts] == [CurveId.F0, CurveId.E1, CurveId.F3, CurveId.E2]
        assert table.chart(CurveId.E2).orientation == 1
        with pytest.raises(ValueError):
            torsor_service.marked_point_table("skew")

    def test_general(self, torsor_service, general_calibration):
        report = torsor_service.constraint_report(general_calibration.table)
        assert all(report.values())
        assert "c_F3" in general_calibration.residual
        assert torsor_service.scale_is_free(general_calibration)
        assert general_calibration.solution_count == 4
        assert general_calibration.table.chart(CurveId.E1).orientation == 1
        assert (general_calibration.table.chart(CurveId.F0).orientation
                == general_calibration.table.chart(CurveId.F3).orientation)
        assert set(general_calibration.residual) == {"c_F3", "o_F0", "o_F3", "sign_u12"}
        assert report["tau_is_translation_by_c12"]

    def test_diagonal(self, torsor_service, diagonal_calibration):
        report = torsor_service.constraint_report(diagonal_calibration.table)
        assert report['h_fourth_power_is_identity']
        assert all(report.values())
        assert diagonal_calibration.solution_count == 2
        assert diagonal_calibration.residual == ("c_F3",)

    @pytest.mark.parametrize("component, section", [(CurveId.E1, CurveId.C11), (CurveId.F0, CurveId.C00)])
    def test_moved_marked_point_is_inconsistent(self, torsor_service, component, section):
        base = torsor_service.marked_point_table("general")
        chart = base.chart(component)
        marked = tuple(MarkedPoint(p.section, rf(2)) if p.section is section else p for p in chart.marked)
        with pytest.raises(CalibrationInconsistencyError) as info:
            torsor_service.calibrate("general", base=base.with_chart(replace(chart, marked=marked)))
        assert info.value.error_code == "CALIBRATION_INCONSISTENT"

    def test_moved_marked_point_fails_tau_relation(self, torsor_service, general_calibration):
        table = general_calibration.table
        chart = table.chart(CurveId.E1)
        marked = tuple(MarkedPoint(p.section, rf(2)) if p.section is CurveId.C11 else p for p in chart.marked)
        report = torsor_service.constraint_report(table.with_chart(replace(chart, marked=marked)))
        assert not report["tau_is_translation_by_c12"]
        assert report["two_torsion_c12"] and report["c12_plus_c03_is_c30"]

    def test_r_on_the_diagonal(self, torsor_service):
        r_value = torsor_service.derive_r_diagonal()
        assert r_value == S ** 4
        assert not torsion_unit_test(r_value)

    def test_translations(self, torsor_service, general_calibration):
        table = general_calibration.table
        assert torsor_service.translation_of_section(table, CurveId.C22) == TorsorElement(S, 0)
        assert torsor_service.translation_of_section(table, ZERO_SECTION).is_identity()
        assert torsor_service.translation_of_section(table, F_SECTION).shift == 6
        assert torsor_service.translation_of_section(table, H_SECTION).shift == 6

    def test_non_section(self, torsor_service, general_calibration):
        with pytest.raises(NotASectionError):
            torsor_service.translation_of_section(general_calibration.table, CurveId.E0)

    def test_sigma_shift(self, torsor_service, kummer_service, d1_fibration):
        sigma = kummer_service.make_automorphism("sigma")
        assert torsor_service.cycle_shift(sigma, d1_fibration.cycle(0)) == 2

    def test_f_epsilon_chase(self, torsor_service, kummer_service, general_calibration):
        trail = torsor_service.f_epsilon_chase(general_calibration, kummer_service.make_automorphism("epsilon"))
        assert trail == [CurveId.C12, CurveId.C21, CurveId.C03, CurveId.C30, CurveId.C12]

    def test_psi_epsilon_chase(self, torsor_service, kummer_service):
        trail = torsor_service.psi_epsilon_chase(
            kummer_service.psi_partial_action(), kummer_service.make_automorphism("epsilon")
        )
        assert trail[0] is trail[-1] is CurveId.C23

    def test_summary_covers_every_section(self, torsor_service, general_calibration):
        summary = torsor_service.table_summary(general_calibration.table)
        assert set(summary) == {"C00", "C03", "C11", "C12", "C21", "C22", "C30", "C33"}
