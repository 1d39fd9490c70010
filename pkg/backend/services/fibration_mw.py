"""
Elliptic fibration bookkeeping for the pencils |D1| and |D2|.

Fiber cycles are read off the intersection table, positions are counted
along the cycle from the zero section's component, and heights use the
I_n correction i(n - i)/n.
"""

from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from ..models.fibration_models import (
    EllipticFibrationData, FiberConfiguration, HeightBreakdown, MWProfile, SectionRecord
)
from ..models.lattice_models import CurveId, DivisorClass
from ..utils.exceptions import (
    NegativeRankError, NonCycleError, NotASectionError, OddBranchCountError
)
from ..utils.logging_config import LoggingMixin, log_performance
from .kummer_config import KummerConfigService, declared_components, named_divisor

PICARD_NUMBER = 18
EULER_NUMBER = 24

# fiber class, second reducible fiber, zero section
FIBRATIONS: Dict[str, Tuple[str, str, str]] = {
    "D1": ("D1", "D1'", "C21"),
    "D2": ("D2", "D2'", "C23"),
}


class FibrationService(LoggingMixin):
    """Cycles, positions, heights and Mordell-Weil data of the two pencils"""

    def __init__(self, kummer: Optional[KummerConfigService] = None):
        self.kummer = kummer or KummerConfigService()

    # -- cycles ------------------------------------------------------------

    def build_cycle(self, declared: Sequence[CurveId]) -> Tuple[CurveId, ...]:
        """
        Walk the adjacency graph of the declared components.

        Starts at the first declared component and steps first to its neighbor
        that comes earliest in the declared order.

        Raises:
            NonCycleError: some component does not have exactly two neighbors,
                or the walk does not close up through every component
        """
        table = self.kummer.intersection_matrix()
        declared = list(declared)
        neighbors = {c: table.neighbors(c, declared) for c in declared}
        for curve, adjacent in neighbors.items():
            if len(adjacent) != 2:
                raise NonCycleError(
                    f"{curve.label} has {len(adjacent)} neighbors in the fiber, expected 2",
                    details={'component': curve.label, 'neighbors': [c.label for c in adjacent]}
                )

        cycle = [declared[0]]
        previous, current = None, declared[0]
        while True:
            step = next(c for c in neighbors[current] if c is not previous)
            if step is declared[0]:
                break
            if step in cycle:
                raise NonCycleError(f"Fiber walk revisits {step.label}")
            cycle.append(step)
            previous, current = current, step

        if len(cycle) != len(declared):
            raise NonCycleError(
                f"Fiber components split into several cycles (walked {len(cycle)} of {len(declared)})",
                details={'walked': [c.label for c in cycle]}
            )
        return tuple(cycle)

    def check_cycle(self, cycle: Sequence[CurveId], declared: Iterable[CurveId]) -> Tuple[CurveId, ...]:
        """Validate a supplied cyclic order against the table"""
        cycle = tuple(cycle)
        if sorted(cycle) != sorted(declared):
            raise NonCycleError(
                "Cycle does not list the fiber's components",
                details={'cycle': [c.label for c in cycle]}
            )
        table = self.kummer.intersection_matrix()
        n = len(cycle)
        for i in range(n):
            for j in range(i + 1, n):
                consecutive = (j - i) in (1, n - 1)
                wanted = 1 if consecutive else 0
                if table[cycle[i], cycle[j]] != wanted:
                    raise NonCycleError(
                        f"{cycle[i].label}.{cycle[j].label} = {table[cycle[i], cycle[j]]} breaks the cycle order",
                        details={'pair': [cycle[i].label, cycle[j].label]}
                    )
        return cycle

    @log_performance
    def build_fibration(
        self,
        name: str,
        cycles: Optional[Mapping[str, Sequence[CurveId]]] = None
    ) -> EllipticFibrationData:
        """
        Assemble the fibration for "D1" or "D2".

        Args:
            name: fibration name
            cycles: optional cyclic orders keyed by divisor name, checked instead
                of derived

        Raises:
            NonCycleError: adjacency does not form the expected I8 cycles
            NotASectionError: the zero section does not meet the fiber class once
        """
        if name not in FIBRATIONS:
            raise ValueError(f"Unknown fibration {name!r}; expected one of {sorted(FIBRATIONS)}")
        first, second, zero_label = FIBRATIONS[name]
        cycles = cycles or {}

        fibers = []
        for divisor_name in (first, second):
            declared = declared_components(divisor_name)
            if divisor_name in cycles:
                order = self.check_cycle(cycles[divisor_name], declared)
            else:
                order = self.build_cycle(declared)
            fibers.append(FiberConfiguration("I8", order, divisor_name))

        fiber_class = named_divisor(first)
        zero_section = CurveId[zero_label]
        if self.kummer.pair(DivisorClass.of(zero_section), fiber_class) != 1:
            raise NotASectionError(
                f"{zero_label} does not meet {first} once",
                details={'section': zero_label, 'fiber': first}
            )

        i1_count = EULER_NUMBER - sum(f.euler_number for f in fibers)
        fibration = EllipticFibrationData(
            name=name,
            fiber_class=fiber_class,
            zero_section=zero_section,
            reducible_fibers=tuple(fibers),
            i1_count=i1_count
        )
        self.log_operation("build_fibration", fibration=name, i1_count=i1_count)
        return fibration

    # -- sections ----------------------------------------------------------

    def _require_section(self, fib: EllipticFibrationData, section: CurveId) -> None:
        if section not in self.kummer.sections_of(fib.fiber_class):
            raise NotASectionError(
                f"{section.label} is not a section of the pencil |{fib.fiber_class.name}|",
                error_code="NOT_A_SECTION",
                details={'section': section.label, 'fibration': fib.name}
            )

    def _component_met(self, fiber: FiberConfiguration, section: CurveId) -> CurveId:
        table = self.kummer.intersection_matrix()
        met = [c for c in fiber.components if table[section, c] == 1]
        if len(met) != 1:
            raise NotASectionError(
                f"{section.label} meets {len(met)} components of {fiber.name}",
                details={'section': section.label, 'fiber': fiber.name}
            )
        return met[0]

    def section_positions(self, fib: EllipticFibrationData, section: CurveId) -> SectionRecord:
        """Component met in each I8 fiber and its offset from the zero component"""
        self._require_section(fib, section)
        placements = []
        for fiber in fib.reducible_fibers:
            component = self._component_met(fiber, section)
            zero_component = self._component_met(fiber, fib.zero_section)
            position = (fiber.position_of(component) - fiber.position_of(zero_component)) % len(fiber.components)
            placements.append((component, position))
        return SectionRecord(section, tuple(placements))

    def height_breakdown(self, fib: EllipticFibrationData, section: CurveId) -> HeightBreakdown:
        record = self.section_positions(fib, section)
        table = self.kummer.intersection_matrix()
        fiber_terms = []
        for fiber, position in zip(fib.reducible_fibers, record.positions):
            n = len(fiber.components)
            distance = min(position, n - position)
            fiber_terms.append(Fraction(distance * (n - distance), n))
        return HeightBreakdown(
            section=section,
            chi_term=2 * fib.chi,
            intersection_term=2 * table[section, fib.zero_section],
            fiber_terms=tuple(fiber_terms)
        )

    def height_self(self, fib: EllipticFibrationData, section: CurveId) -> Fraction:
        return self.height_breakdown(fib, section).total

    def torsion_candidate(self, fib: EllipticFibrationData, section: CurveId) -> bool:
        return self.height_self(fib, section) == 0

    # -- global counts -------------------------------------------------------

    @staticmethod
    def shioda_tate_rank(rho: int, fibers: Iterable[FiberConfiguration]) -> int:
        """rho - 2 - sum over reducible fibers of (components - 1)"""
        rank = rho - 2 - sum(f.component_count - 1 for f in fibers)
        if rank < 0:
            raise NegativeRankError(
                f"Shioda-Tate gives negative rank {rank}",
                details={'rho': rho, 'rank': rank}
            )
        return rank

    @staticmethod
    def genus_double_cover(branch_count: int) -> int:
        """Riemann-Hurwitz for a double cover of P^1"""
        if branch_count < 0 or branch_count % 2:
            raise OddBranchCountError(
                f"A double cover of P^1 needs an even branch count, got {branch_count}",
                details={'branch_count': branch_count}
            )
        return branch_count // 2 - 1

    def mw_profile(self, fib: EllipticFibrationData, rho: int = PICARD_NUMBER) -> MWProfile:
        rank = self.shioda_tate_rank(rho, fib.reducible_fibers)
        torsion = self.torsion_sections(fib)
        return MWProfile(rank=rank, torsion_exponent_claim=2 if torsion else 1)

    def torsion_sections(self, fib: EllipticFibrationData) -> List[CurveId]:
        """Non-zero sections of height zero"""
        return [
            section for section in sorted(self.kummer.sections_of(fib.fiber_class))
            if section is not fib.zero_section and self.torsion_candidate(fib, section)
        ]
