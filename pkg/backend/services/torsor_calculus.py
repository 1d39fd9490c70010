"""
Group calculus on the smooth locus of the I8 fiber D1 and restriction
calculus on E2.

Sections of |D1| act on D1 as elements of G_m x Z/8. The scalar of a section
is its marked point read through the normalization chart of the component it
meets; charts carry an unknown scale and orientation that calibrate() fixes
from the relations the surface forces:

    general and diagonal   C12 is 2-torsion, C12 + C03 = C30, tau = C12 + .
    diagonal only (t = s)  h^4 = id, f h^-1 = (s, 0), tau = h^2 on D1

with f, h the translations by C03 and C33. Everything is exact in Q(s, t, r).
"""

from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from ..models.curve_models import INFINITY, Coordinate, coordinate_text
from ..models.lattice_models import ConfigAutomorphism, CurveId, PartialAction
from ..models.torsor_models import (
    CalibrationSolution, ComponentChart, MarkedPoint, MarkedPointTable, MobiusMap, TorsorElement
)
from ..utils.cache import construction_cache, make_key
from ..utils.exceptions import CalibrationInconsistencyError, NotASectionError
from ..utils.logging_config import LoggingMixin, log_performance
from .exact_field import ONE, R, S, T, RationalFunction, Scalar, rf, to_text, torsion_unit_test
from .fibration_mw import FibrationService

MODES = ("general", "diagonal")

ANCHOR = CurveId.E2
ZERO_SECTION = CurveId.C21
F_SECTION = CurveId.C03   # f
H_SECTION = CurveId.C33   # h
TWO_TORSION_SECTION = CurveId.C12
SUM_SECTION = CurveId.C30

# general relations are checked with the F3 scale left as the free indeterminate r
FREE_SCALE = R
# h^4 = id forces c_F3^4 = 1, and the roots of unity of Q(s, t) are 1 and -1
FINITE_ORDER_SCALES = (ONE, -ONE)

RESIDUAL_PARAMETERS = ("c_F3", "o_E1", "o_F0", "o_F3", "sign_u12")


def torsor_mul(a: TorsorElement, b: TorsorElement) -> TorsorElement:
    return a * b


def legendre_values(parameter: Scalar) -> Tuple[Coordinate, ...]:
    """x-coordinates of tau_0..tau_3 on a curve with Legendre parameter given"""
    return (rf(0), ONE, rf(parameter), INFINITY)


def psi_restriction() -> MobiusMap:
    """psi on E2: fixes infinity and swaps 0 and 1"""
    return MobiusMap.from_three_points((ONE, rf(0), INFINITY), (rf(0), ONE, INFINITY))


def f4_restriction() -> MobiusMap:
    """f^4 on E2: fixes 0 and infinity and multiplies by r"""
    return MobiusMap.from_three_points((rf(0), INFINITY, ONE), (rf(0), INFINITY, R))


def psi_n(n: int) -> MobiusMap:
    """f^(-4n) psi f^(4n) restricted to E2"""
    f4 = f4_restriction()
    return f4.power(-n).compose(psi_restriction()).compose(f4.power(n))


def expected_psi_n(n: int) -> MobiusMap:
    """x -> r^(-n) - x"""
    return MobiusMap(-ONE, R ** (-n), rf(0), ONE)


def pairwise_distinct(N: int, r_value: Optional[Scalar] = None) -> bool:
    """True iff psi_n for |n| <= N are pairwise different maps"""
    if N < 1:
        raise ValueError("pairwise_distinct needs N >= 1")
    maps = [psi_n(n) for n in range(-N, N + 1)]
    if r_value is not None:
        maps = [m.substitute(r=r_value) for m in maps]
    for i in range(len(maps)):
        for j in range(i + 1, len(maps)):
            if maps[i].same_map(maps[j]):
                return False
    return True


def centralizer_scalar(n: int, m: int) -> RationalFunction:
    """
    Scalar of f^(4n) h f^(-4m) on C23, where f^4 multiplies the C23
    coordinate by r and h fixes C23 pointwise.
    """
    f4 = MobiusMap.scaling(R)
    h = MobiusMap.identity()
    conjugate = f4.power(n).compose(h).compose(f4.power(-m))
    if not conjugate.c.is_zero() or not conjugate.b.is_zero():
        raise CalibrationInconsistencyError("Conjugate is not a scaling on C23")
    return conjugate.a / conjugate.d


def omega_vector(n: int, m: int, N: int) -> List[int]:
    """Coefficient of r^(k - N) in r^(-n) - r^(-m), for k = 0..2N"""
    element = (R ** (-n) - R ** (-m)) * R ** N
    coefficients = [QQ(0)] * (2 * N + 1)
    for monom, coeff in element.numerator.terms():
        coefficients[monom[2]] = QQ(int(coeff))
    return coefficients


def omega_rank(N: int) -> int:
    """Rank over Q of {r^-n - r^-m : |n|, |m| <= N} in Laurent coefficients"""
    if N < 0:
        raise ValueError("omega_rank needs N >= 0")
    rows = [omega_vector(n, m, N) for n in range(-N, N + 1) for m in range(-N, N + 1)]
    return DomainMatrix(rows, (len(rows), 2 * N + 1), QQ).rank()


class TorsorCalculusService(LoggingMixin):
    """Marked-point charts on D1, their calibration and the section chases"""

    def __init__(self, fibrations: Optional[FibrationService] = None):
        self.fibrations = fibrations or FibrationService()

    @property
    def kummer(self):
        return self.fibrations.kummer

    # -- charts --------------------------------------------------------------

    def marked_point_table(self, mode: str = "general") -> MarkedPointTable:
        """
        Uncalibrated charts on F0, E1, F3, E2 of the D1 cycle.

        On E_i the section C_ij sits at x = value_j(s); on F_j it sits at
        x' = value_i(t), with t replaced by s in diagonal mode.
        """
        if mode not in MODES:
            raise ValueError(f"Unknown calibration mode {mode!r}")
        fib = self.fibrations.build_fibration("D1")
        cycle = fib.cycle(0)
        e_values = legendre_values(S)
        f_values = legendre_values(S if mode == "diagonal" else T)
        table = self.kummer.intersection_matrix()

        def raw(component: CurveId, curve: CurveId) -> Coordinate:
            i, j = curve.indices
            return e_values[j] if component.kind == "E" else f_values[i]

        charts = []
        for position, component in enumerate(cycle):
            if component.kind not in ("E", "F"):
                continue
            previous = cycle[(position - 1) % len(cycle)]
            following = cycle[(position + 1) % len(cycle)]
            nodes = ((previous, raw(component, previous)), (following, raw(component, following)))
            marked = tuple(
                MarkedPoint(curve, raw(component, curve))
                for curve in CurveId.ordered()
                if curve.kind == "C" and curve not in cycle and table[curve, component] == 1
            )
            chart = ComponentChart(component, position, nodes, marked)
            if component is ANCHOR:
                # E2 keeps its Legendre coordinate: C20 -> 0, C23 -> infinity
                chart = chart.with_calibration(ONE, 0 if nodes[0][1] == 0 else 1)
            charts.append(chart)
        return MarkedPointTable(tuple(cycle), tuple(charts), ANCHOR, mode)

    def translation_of_section(self, table: MarkedPointTable, section: CurveId) -> TorsorElement:
        """(normalized marked point, cyclic shift from E2) of a section of |D1|"""
        if section not in self.kummer.sections_of(self.kummer.divisor("D1")):
            raise NotASectionError(
                f"{section.label} is not a section of |D1|",
                error_code="NOT_A_SECTION",
                details={'section': section.label}
            )
        chart = table.chart_of_section(section)
        if chart is None:
            raise NotASectionError(f"{section.label} has no marked point on D1")
        return TorsorElement(chart.normalize(chart.raw_of(section)), table.shift_of(chart))

    # -- calibration ---------------------------------------------------------

    def constraint_report(self, table: MarkedPointTable) -> Dict[str, bool]:
        """
        Evaluate every relation for the table's mode.

        two_torsion_c12 and c12_plus_c03_is_c30 fix the E1 and F0 scales during
        calibration. tau is translation by C12, so u12 * X = tau(X) for every
        section X of |D1|; on C00, C11, C22 and C33 this is independent of the
        solved scales.
        """
        trans = lambda section: self.translation_of_section(table, section)
        u12 = trans(TWO_TORSION_SECTION)
        f = trans(F_SECTION)
        h = trans(H_SECTION)
        report = {
            'two_torsion_c12': (u12 ** 2).is_identity(),
            'c12_plus_c03_is_c30': u12 * f == trans(SUM_SECTION),
            'zero_section_is_identity': trans(ZERO_SECTION).is_identity(),
            'tau_is_translation_by_c12': self._tau_translates(table, u12),
        }
        if table.mode == "diagonal":
            report['h_fourth_power_is_identity'] = (h ** 4).is_identity()
            report['f_h_inverse_is_s'] = f * h.inverse() == TorsorElement(S, 0)
            report['tau_is_h_squared'] = u12 == h ** 2
        return report

    def _tau_translates(self, table: MarkedPointTable, u12: TorsorElement) -> bool:
        tau = self.kummer.make_automorphism("tau")
        for section in sorted(self.kummer.sections_of(self.kummer.divisor("D1"))):
            image = tau(section)
            if table.chart_of_section(section) is None or table.chart_of_section(image) is None:
                continue
            if u12 * self.translation_of_section(table, section) != self.translation_of_section(table, image):
                return False
        return True

    def _candidate(self, base: MarkedPointTable, o_e1: int, o_f3: int, o_f0: int,
                   c_f3: RationalFunction, sign: int) -> MarkedPointTable:
        """Propagate the F3 scale and the C12 sign to the other charts"""
        table = base.with_chart(base.chart(CurveId.F3).with_calibration(c_f3, o_f3))

        e1 = base.chart(CurveId.E1).with_calibration(ONE, o_e1)
        e1 = e1.with_calibration(sign / e1.normalize(e1.raw_of(TWO_TORSION_SECTION)), o_e1)
        table = table.with_chart(e1)

        # C30 = C12 + C03 fixes the F0 scale
        target = (self.translation_of_section(table, TWO_TORSION_SECTION)
                  * self.translation_of_section(table, F_SECTION)).scalar
        f0 = base.chart(CurveId.F0).with_calibration(ONE, o_f0)
        f0 = f0.with_calibration(target / f0.normalize(f0.raw_of(SUM_SECTION)), o_f0)
        return table.with_chart(f0)

    @log_performance
    def calibrate(self, mode: str = "general", base: Optional[MarkedPointTable] = None) -> CalibrationSolution:
        """
        Solve for orientation bits and scales.

        Orientation bits of E1, F3, F0 and the sign of the C12 scalar are
        enumerated and the E1 and F0 scales are propagated from them. In
        general mode the F3 scale is carried as a free indeterminate, so a
        candidate passes only if the relations hold for every scale; the
        returned table then fixes it to 1. In diagonal mode the F3 scale is
        one of the units of finite order. The first valid candidate is
        returned; parameters that vary across valid candidates, and a free
        F3 scale, are reported as residual.

        Args:
            mode: "general" or "diagonal"
            base: uncalibrated charts to use instead of the Legendre marked points

        Raises:
            CalibrationInconsistencyError: no candidate satisfies the relations
        """
        if mode not in MODES:
            raise ValueError(f"Unknown calibration mode {mode!r}")
        cacheable = base is None and not self.kummer.is_overridden
        key = make_key("calibration", mode)
        if cacheable:
            cached = construction_cache.get(key)
            if cached is not None:
                return cached

        if base is None:
            base = self.marked_point_table(mode)
        scales = FINITE_ORDER_SCALES if mode == "diagonal" else (FREE_SCALE,)
        solutions = []
        for o_e1, o_f3, o_f0 in product((0, 1), repeat=3):
            for c_f3 in scales:
                for sign in (1, -1):
                    candidate = self._candidate(base, o_e1, o_f3, o_f0, c_f3, sign)
                    if not all(self.constraint_report(candidate).values()):
                        continue
                    if mode == "general":
                        # the relations hold for every F3 scale; keep the gauge c_F3 = 1
                        candidate = self._candidate(base, o_e1, o_f3, o_f0, ONE, sign)
                    solutions.append(({
                        'o_E1': o_e1, 'o_F3': o_f3, 'o_F0': o_f0,
                        'c_F3': to_text(c_f3), 'sign_u12': sign
                    }, candidate))

        if not solutions:
            raise CalibrationInconsistencyError(
                f"No orientation/scale choice satisfies the {mode} relations",
                error_code="CALIBRATION_INCONSISTENT",
                details={'mode': mode}
            )

        observed: Dict[str, set] = {name: set() for name in RESIDUAL_PARAMETERS}
        for parameters, _ in solutions:
            for name in RESIDUAL_PARAMETERS:
                observed[name].add(str(parameters[name]))
        free_scale = mode == "general"
        residual = tuple(
            name for name in RESIDUAL_PARAMETERS
            if len(observed[name]) > 1 or (free_scale and name == "c_F3")
        )

        solution = CalibrationSolution(
            mode=mode,
            table=solutions[0][1],
            residual=residual,
            residual_values={name: sorted(observed[name]) for name in residual},
            solution_count=len(solutions)
        )
        self.log_operation("calibrate", mode=mode, solutions=len(solutions), residual=list(residual))
        if cacheable:
            construction_cache.put(key, solution)
        return solution

    def scale_is_free(self, solution: CalibrationSolution) -> bool:
        """True when the F3 scale admits a value that is not a unit"""
        units = {to_text(ONE), to_text(-ONE)}
        return any(value not in units for value in solution.residual_values.get("c_F3", []))

    def derive_r_diagonal(self) -> RationalFunction:
        """Scalar of f^4 on D1 with t = s"""
        solution = self.calibrate("diagonal")
        f4 = self.translation_of_section(solution.table, F_SECTION) ** 4
        if f4.shift != 0:
            raise CalibrationInconsistencyError("f^4 does not preserve the components of D1")
        return f4.scalar

    # -- automorphisms acting on sections ------------------------------------

    def section_with(self, table: MarkedPointTable, element: TorsorElement) -> Optional[CurveId]:
        """Section of |D1| whose translation is the given element"""
        for section in sorted(self.kummer.sections_of(self.kummer.divisor("D1"))):
            if table.chart_of_section(section) is None:
                continue
            if self.translation_of_section(table, section) == element:
                return section
        return None

    def cycle_shift(self, automorphism: ConfigAutomorphism, cycle: Sequence[CurveId]) -> Optional[int]:
        """k with automorphism(cycle[i]) = cycle[i + k] for all i, if it rotates the cycle"""
        cycle = list(cycle)
        if automorphism(cycle[0]) not in cycle:
            return None
        k = cycle.index(automorphism(cycle[0]))
        for i, curve in enumerate(cycle):
            if automorphism(curve) is not cycle[(i + k) % len(cycle)]:
                return None
        return k

    def f_epsilon_chase(self, solution: CalibrationSolution, epsilon: ConfigAutomorphism,
                        start: CurveId = TWO_TORSION_SECTION) -> List[Optional[CurveId]]:
        """Follow start under epsilon, then f, then epsilon^-1, then f^-1"""
        table = solution.table
        f = self.translation_of_section(table, F_SECTION)
        trail = [start]
        current = epsilon(start)
        trail.append(current)
        current = self.section_with(table, self.translation_of_section(table, current) * f)
        trail.append(current)
        if current is None:
            return trail
        current = epsilon(current)
        trail.append(current)
        current = self.section_with(table, self.translation_of_section(table, current) * f.inverse())
        trail.append(current)
        return trail

    @staticmethod
    def psi_epsilon_chase(psi: PartialAction, epsilon: ConfigAutomorphism,
                          start: CurveId = CurveId.C23) -> List[CurveId]:
        """Follow start under psi, then epsilon, then psi^-1, then epsilon^-1"""
        psi_inverse = {b: a for a, b in psi.mapping}
        trail = [start]
        current = psi(start)
        trail.append(current)
        current = epsilon(current)
        trail.append(current)
        current = psi_inverse[current]
        trail.append(current)
        current = epsilon(current)
        trail.append(current)
        return trail

    def table_summary(self, table: MarkedPointTable) -> Dict[str, Dict[str, object]]:
        """Translation of every section of |D1|, serialized"""
        summary = {}
        for section in sorted(self.kummer.sections_of(self.kummer.divisor("D1"))):
            summary[section.label] = self.translation_of_section(table, section).to_dict()
        return summary


def restriction_witness() -> Dict[str, object]:
    """Serialized E2 restrictions"""
    psi = psi_restriction()
    f4 = f4_restriction()
    return {
        'psi': psi.to_dict(),
        'f4': f4.to_dict(),
        'psi(1)': coordinate_text(psi(ONE)),
        'f4(s)': coordinate_text(f4(S)),
        'r_is_root_of_unity': torsion_unit_test(R),
    }
