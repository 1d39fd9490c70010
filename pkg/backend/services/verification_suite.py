"""
Registry of verification checks and the runner that turns a RunConfig into a Report.

Every check is a function of a SuiteContext returning (passed, witness). The
check id is "<suite>.<name>"; the anchor is the statement being verified.
Checks marked symbolic_only need the free indeterminate r and are skipped
in specialized mode.
"""

import json
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Tuple

from ..models.curve_models import INFINITY
from ..models.group_models import FiniteInvolutiveGroup, TorusActionSpec
from ..models.lattice_models import ConfigAutomorphism, CurveId, DivisorClass
from ..models.projective_models import AlphaTriple, MukaiFrame, ProjPoint3, QuadricForm
from ..models.report_models import CheckRecord, Report, RunConfig
from ..models.torsor_models import MobiusMap, TorsorElement
from ..utils.exceptions import ErrorHandler, IndeterminacyError, NonInvolutiveMatrixError, OddBranchCountError
from ..utils.cache import get_cache_stats
from ..utils.logging_config import get_logger
from ..utils.metrics import metrics_collector, performance_timer
from .exact_field import ONE, R, S, T, rf, specialize, substitute, to_text, torsion_unit_test
from .fibration_mw import FibrationService
from .galois_h1 import (
    TORUS_CASES, GaloisCohomologyService, abelian_quotient_count, cyclic_inversion, h1,
    h1_trivial_action, permutation_corpus
)
from .kummer_config import KummerConfigService, declared_components
from .mukai_cremona import MukaiCremonaService, cremona, segre, smoothness_disc
from .torsor_calculus import (
    F_SECTION, H_SECTION, ZERO_SECTION, TorsorCalculusService,
    centralizer_scalar, expected_psi_n, f4_restriction, omega_rank, pairwise_distinct,
    psi_n, psi_restriction, restriction_witness, torsor_mul
)

logger = get_logger(__name__)

Witness = Dict[str, Any]
CheckResult = Tuple[bool, Witness]


@dataclass(frozen=True)
class CheckSpec:
    """A registered check"""
    id: str
    anchor: str
    run: Callable[["SuiteContext"], CheckResult]
    symbolic_only: bool = False

    @property
    def suite(self) -> str:
        return self.id.split('.', 1)[0]


CHECKS: Dict[str, CheckSpec] = {}


def check(check_id: str, anchor: str, symbolic_only: bool = False):
    """Register a check function under an id"""
    def decorator(func: Callable[["SuiteContext"], CheckResult]):
        if check_id in CHECKS:
            raise ValueError(f"Check {check_id} registered twice")
        CHECKS[check_id] = CheckSpec(check_id, anchor, func, symbolic_only)
        return func
    return decorator


def checks_for(suites) -> List[CheckSpec]:
    return [spec for spec in sorted(CHECKS.values(), key=lambda c: c.id) if spec.suite in suites]


class SuiteContext:
    """Services and memoized constructions shared by the checks of one run"""

    def __init__(self, run_config: RunConfig):
        self.run_config = run_config
        overrides = run_config.overrides
        self.kummer = KummerConfigService(table=overrides.table)
        self.fibrations = FibrationService(self.kummer)
        self.torsor = TorsorCalculusService(self.fibrations)
        self.mukai = MukaiCremonaService()
        self.galois = GaloisCohomologyService()
        self.cycles = dict(overrides.cycles or {})
        self._alpha_override = overrides.alphas
        self._memo: Dict[Any, Any] = {}
        self._lock = threading.Lock()

    def memo(self, key: Any, factory: Callable[[], Any]) -> Any:
        """Compute once per run; failures are not remembered"""
        with self._lock:
            if key in self._memo:
                return self._memo[key]
        value = factory()
        with self._lock:
            return self._memo.setdefault(key, value)

    @property
    def specialized(self) -> bool:
        return self.run_config.specialized

    def automorphism(self, name: str) -> ConfigAutomorphism:
        return self.memo(('automorphism', name), lambda: self.kummer.make_automorphism(name))

    def fibration(self, name: str):
        return self.memo(('fibration', name), lambda: self.fibrations.build_fibration(name, self.cycles))

    def calibration(self, mode: str):
        return self.memo(('calibration', mode), lambda: self.torsor.calibrate(mode))

    def frame(self) -> MukaiFrame:
        if self.specialized:
            return self.memo('frame', lambda: self.mukai.specialize_frame(self.run_config.s0, self.run_config.t0))
        return self.memo('frame', lambda: self.mukai.frame_and_alphas(S, T))

    def alphas(self) -> AlphaTriple:
        return self._alpha_override or self.frame().alphas


def _labels(curves) -> List[str]:
    return [c.label for c in curves]


def _same_set(a: DivisorClass, b: DivisorClass) -> bool:
    return a.component_set() == b.component_set()


# -- config ------------------------------------------------------------------

@check("config.table-invariants", "24 smooth (-2)-curves; C_ij meets exactly E_i and F_j, each once")
def _table_invariants(ctx: SuiteContext) -> CheckResult:
    problems = ctx.kummer.intersection_matrix().validate()
    return not problems, {'problems': problems[:10], 'problem_count': len(problems)}


@check("config.gram-rank", "the 24 curves span a lattice of rank rho(X) = 18")
def _gram_rank(ctx: SuiteContext) -> CheckResult:
    rank = ctx.kummer.gram_rank()
    return rank == 18, {'rank': rank}


@check("config.cycle-rank", "each named fiber is an I8 cycle of eight (-2)-curves")
def _cycle_rank(ctx: SuiteContext) -> CheckResult:
    ranks = {name: ctx.kummer.gram_rank(declared_components(name)) for name in ("D1", "D1'", "D2", "D2'")}
    single = ctx.kummer.gram_rank([CurveId.E0])
    return all(r == 7 for r in ranks.values()) and single == 1, {'cycle_ranks': ranks, 'E0': single}


@check("config.fiber-squares", "D1 is nef and D1^2 = 0, D1.D1' = 0")
def _fiber_squares(ctx: SuiteContext) -> CheckResult:
    k = ctx.kummer
    names = ("D1", "D1'", "D2", "D2'")
    squares = {name: k.pair(k.divisor(name), k.divisor(name)) for name in names}
    products = {
        "D1.D1'": k.pair(k.divisor("D1"), k.divisor("D1'")),
        "D2.D2'": k.pair(k.divisor("D2"), k.divisor("D2'")),
    }
    passed = all(v == 0 for v in squares.values()) and all(v == 0 for v in products.values())
    return passed, {'squares': squares, 'products': products}


@check("config.sections-d1", "C11, C12, C21, C22, C00, C03, C30, C33 are sections of |D1|")
def _sections_d1(ctx: SuiteContext) -> CheckResult:
    expected = {CurveId[label] for label in ("C11", "C12", "C21", "C22", "C00", "C03", "C30", "C33")}
    found = ctx.kummer.sections_of(ctx.kummer.divisor("D1"))
    e0 = ctx.kummer.pair(DivisorClass.of(CurveId.E0), ctx.kummer.divisor("D1"))
    return set(found) == expected and e0 == 0, {'sections': _labels(sorted(found)), 'E0.D1': e0}


@check("config.sections-d2", "C23 and C32 are sections of |D2|")
def _sections_d2(ctx: SuiteContext) -> CheckResult:
    found = ctx.kummer.sections_of(ctx.kummer.divisor("D2"))
    return {CurveId.C23, CurveId.C32} <= set(found), {'sections': _labels(sorted(found))}


@check("config.permutations", "translations by 2-torsion induce t = (03)(12), t' = (01)(23), s = (02)(13)")
def _permutations(ctx: SuiteContext) -> CheckResult:
    legendre = ctx.kummer.legendre
    curve = legendre.curve(S)
    induced = {k: list(legendre.translation_permutation(curve, k)) for k in (1, 2, 3)}
    expected = {1: [1, 0, 3, 2], 2: [2, 3, 0, 1], 3: [3, 2, 1, 0]}
    return induced == expected, {'induced': {str(k): v for k, v in induced.items()}}


@check("config.klein-four", "the 2-torsion translations form a Klein four-group")
def _klein_four(ctx: SuiteContext) -> CheckResult:
    legendre = ctx.kummer.legendre
    results = {name: legendre.klein_four_holds(legendre.curve(lam, name)) for name, lam in (("E", S), ("F", T))}
    return all(results.values()), results


def _isometry_check(name: str, character: int):
    def run(ctx: SuiteContext) -> CheckResult:
        automorphism = ctx.automorphism(name)
        gram = ctx.kummer.intersection_matrix().matrix
        p = automorphism.permutation_matrix()
        preserved = bool((p.T @ gram @ p == gram).all())
        witness = {'character': automorphism.character, 'fixed_curves': _labels(
            c for c in CurveId.ordered() if automorphism(c) is c
        )}
        return preserved and automorphism.character == character, witness
    return run


for _name, _character, _anchor in (
    ("tau", 1, "tau is a symplectic involution preserving the intersection form"),
    ("nu", 1, "nu is a symplectic involution preserving the intersection form"),
    ("sigma", -1, "sigma exchanges E and F and acts on the 2-form by -1"),
    ("epsilon", -1, "epsilon swaps the factors of E x E and acts on the 2-form by -1"),
):
    check(f"config.isometry-{_name}", _anchor)(_isometry_check(_name, _character))


@check("config.involutions", "tau, nu and epsilon are involutions")
def _involutions(ctx: SuiteContext) -> CheckResult:
    results = {}
    for name in ("tau", "nu", "epsilon"):
        a = ctx.automorphism(name)
        square = ctx.kummer.compose(a, a)
        results[name] = square.is_identity() and square.character == 1
    return all(results.values()), results


@check("config.epsilon-fibers", "epsilon(D1) = D1' and epsilon(D2) = D2'")
def _epsilon_fibers(ctx: SuiteContext) -> CheckResult:
    epsilon = ctx.automorphism("epsilon")
    k = ctx.kummer
    results = {
        "D1": _same_set(epsilon.apply_divisor(k.divisor("D1")), k.divisor("D1'")),
        "D1'": _same_set(epsilon.apply_divisor(k.divisor("D1'")), k.divisor("D1")),
        "D2": _same_set(epsilon.apply_divisor(k.divisor("D2")), k.divisor("D2'")),
        "D2'": _same_set(epsilon.apply_divisor(k.divisor("D2'")), k.divisor("D2")),
    }
    return all(results.values()), results


@check("config.tau-d1", "tau preserves D1, swapping F0 with F3, C10 with C23, E1 with E2, C13 with C20")
def _tau_d1(ctx: SuiteContext) -> CheckResult:
    tau = ctx.automorphism("tau")
    d1 = ctx.kummer.divisor("D1")
    swaps = (("F0", "F3"), ("C10", "C23"), ("E1", "E2"), ("C13", "C20"))
    swapped = {
        f"{a}<->{b}": tau(CurveId[a]) is CurveId[b] and tau(CurveId[b]) is CurveId[a]
        for a, b in swaps
    }
    preserved = _same_set(tau.apply_divisor(d1), d1)
    return preserved and all(swapped.values()), {'preserves_d1': preserved, 'swaps': swapped}


@check("config.sigma-square", "sigma^2 = tau")
def _sigma_square(ctx: SuiteContext) -> CheckResult:
    sigma = ctx.automorphism("sigma")
    square = ctx.kummer.compose(sigma, sigma)
    keeps_kinds = all(square(c).kind == c.kind for c in CurveId.ordered())
    return square.same_action(ctx.automorphism("tau")), {
        'character': square.character,
        'preserves_e_and_f': keeps_kinds
    }


@check("config.translations-commute", "tau and nu commute")
def _translations_commute(ctx: SuiteContext) -> CheckResult:
    tau, nu = ctx.automorphism("tau"), ctx.automorphism("nu")
    return ctx.kummer.compose(tau, nu).same_action(ctx.kummer.compose(nu, tau)), {}


@check("config.nu-d2", "nu preserves D2 and exchanges C23 with C32")
def _nu_d2(ctx: SuiteContext) -> CheckResult:
    nu = ctx.automorphism("nu")
    d2 = ctx.kummer.divisor("D2")
    preserved = _same_set(nu.apply_divisor(d2), d2)
    swap = nu(CurveId.C23) is CurveId.C32 and nu(CurveId.C32) is CurveId.C23
    return preserved and swap, {'preserves_d2': preserved, 'swaps_c23_c32': swap}


@check("config.psi-partial", "psi fixes E2, C23, C32 and exchanges C20 with C21")
def _psi_partial(ctx: SuiteContext) -> CheckResult:
    psi = ctx.kummer.psi_partial_action()
    cycle = list(ctx.fibration("D2").cycle(0))
    centre = cycle.index(CurveId.E2)
    n = len(cycle)

    def reflect(curve: CurveId) -> CurveId:
        return cycle[(2 * centre - cycle.index(curve)) % n]

    on_cycle = [c for c in psi.domain() if c in cycle]
    matches_reflection = all(psi(c) is reflect(c) for c in on_cycle)
    involutive = all(psi(psi(c)) is c for c in psi.domain())
    epsilon = ctx.automorphism("epsilon")
    witness = {
        'mapping': psi.to_dict()['mapping'],
        'character': psi.character,
        'epsilon_psi_character': epsilon.character * psi.character
    }
    return matches_reflection and involutive and psi.character == -1, witness


# -- fibration ---------------------------------------------------------------

def _cycle_check(name: str):
    def run(ctx: SuiteContext) -> CheckResult:
        fib = ctx.fibration(name)
        witness = {f.name: _labels(f.components) for f in fib.reducible_fibers}
        # derived cycles follow the declared order
        passed = all(f.components == declared_components(f.name) for f in fib.reducible_fibers)
        return passed, witness
    return run


check("fibration.d1-cycle", "|D1| has two I8 fibers D1 and D1'")(_cycle_check("D1"))
check("fibration.d2-cycle", "|D2| has two I8 fibers D2 and D2'")(_cycle_check("D2"))


@check("fibration.euler-census", "two I8 fibers leave Euler number 8 for the remaining singular fibers")
def _euler_census(ctx: SuiteContext) -> CheckResult:
    witness = {}
    for name in ("D1", "D2"):
        fib = ctx.fibration(name)
        witness[name] = {'euler': fib.euler_census, 'i1_count': fib.i1_count}
    return all(w['euler'] == 24 and w['i1_count'] == 8 for w in witness.values()), witness


@check("fibration.zero-section", "the chosen zero sections have height 0")
def _zero_section(ctx: SuiteContext) -> CheckResult:
    witness = {}
    for name in ("D1", "D2"):
        fib = ctx.fibration(name)
        witness[name] = ctx.fibrations.height_breakdown(fib, fib.zero_section).to_dict()
    return all(w['total'] == "0" for w in witness.values()), witness


def _height_check(fibration: str, section: str):
    def run(ctx: SuiteContext) -> CheckResult:
        breakdown = ctx.fibrations.height_breakdown(ctx.fibration(fibration), CurveId[section])
        return breakdown.total == 0 and breakdown.summands()[0] == 4, breakdown.to_dict()
    return run


check("fibration.height-c32", "h(C32) = 4 + 0 - 2 - 2 = 0 on |D2| with zero C23")(_height_check("D2", "C32"))
check("fibration.height-c12", "h(C12) = 4 + 0 - 2 - 2 = 0 on |D1| with zero C21")(_height_check("D1", "C12"))


@check("fibration.section-positions", "C32 meets both fibers of |D2| at distance 4 from C23")
def _section_positions(ctx: SuiteContext) -> CheckResult:
    fib = ctx.fibration("D2")
    c32 = ctx.fibrations.section_positions(fib, CurveId.C32)
    c23 = ctx.fibrations.section_positions(fib, CurveId.C23)
    passed = c32.positions == [4, 4] and c23.positions == [0, 0]
    return passed, {'C32': c32.to_dict(), 'C23': c23.to_dict()}


@check("fibration.torsion-candidates", "C32 is 2-torsion in MW(|D2|) and C12 is 2-torsion in MW(|D1|)")
def _torsion_candidates(ctx: SuiteContext) -> CheckResult:
    d1 = ctx.fibrations.torsion_sections(ctx.fibration("D1"))
    d2 = ctx.fibrations.torsion_sections(ctx.fibration("D2"))
    return CurveId.C12 in d1 and CurveId.C32 in d2, {'D1': _labels(d1), 'D2': _labels(d2)}


@check("fibration.shioda-tate", "Shioda-Tate: rank MW = 18 - 2 - 7 - 7 = 2")
def _shioda_tate(ctx: SuiteContext) -> CheckResult:
    ranks = {name: ctx.fibrations.shioda_tate_rank(18, ctx.fibration(name).reducible_fibers) for name in ("D1", "D2")}
    no_reducible = ctx.fibrations.shioda_tate_rank(18, ())
    return all(r == 2 for r in ranks.values()) and no_reducible == 16, {'ranks': ranks, 'no_reducible': no_reducible}


@check("fibration.mw-profile", "MW(|D2|) has rank 2 and a section of order 2")
def _mw_profile(ctx: SuiteContext) -> CheckResult:
    profile = ctx.fibrations.mw_profile(ctx.fibration("D2"))
    return profile.rank == 2 and profile.torsion_exponent_claim == 2, {
        **profile.to_dict(), 'shape': profile.describe()
    }


@check("fibration.genus-bound", "a double cover of P^1 branched in 8 points has genus 3")
def _genus_bound(ctx: SuiteContext) -> CheckResult:
    genera = {str(n): ctx.fibrations.genus_double_cover(n) for n in (2, 4, 8)}
    try:
        ctx.fibrations.genus_double_cover(3)
        odd_rejected = False
    except OddBranchCountError:
        odd_rejected = True
    return genera == {'2': 0, '4': 1, '8': 3} and odd_rejected, {'genera': genera, 'odd_rejected': odd_rejected}


# -- torsor ------------------------------------------------------------------

@check("torsor.group-law", "sections of |D1| act on D1 through G_m x Z/8")
def _group_law(ctx: SuiteContext) -> CheckResult:
    identity = TorsorElement.identity()
    a = TorsorElement(ONE + T, 3)
    b = TorsorElement(S, 6)
    results = {
        'identity': torsor_mul(identity, a) == a and torsor_mul(a, identity) == a,
        'inverse': torsor_mul(a, a.inverse()).is_identity(),
        'fourth_power': b ** 4 == TorsorElement(S ** 4, 0),
        'commutative': torsor_mul(a, b) == torsor_mul(b, a),
    }
    return all(results.values()), results


@check("torsor.translations", "translation by E2 n C22 is multiplication by s; C21 acts trivially")
def _translations(ctx: SuiteContext) -> CheckResult:
    table = ctx.calibration("general").table
    c22 = ctx.torsor.translation_of_section(table, CurveId.C22)
    zero = ctx.torsor.translation_of_section(table, ZERO_SECTION)
    f = ctx.torsor.translation_of_section(table, F_SECTION)
    h = ctx.torsor.translation_of_section(table, H_SECTION)
    passed = c22 == TorsorElement(S, 0) and zero.is_identity() and f.shift in (2, 6)
    return passed, {
        'C22': c22.to_dict(), 'C21': zero.to_dict(), 'f': f.to_dict(), 'h': h.to_dict(),
        'sections': ctx.torsor.table_summary(table)
    }


@check("torsor.calibrate-general", "C12 is 2-torsion, C12 + C03 = C30 and tau is translation by C12 for every F3 scale")
def _calibrate_general(ctx: SuiteContext) -> CheckResult:
    solution = ctx.calibration("general")
    report = ctx.torsor.constraint_report(solution.table)
    passed = all(report.values()) and "c_F3" in solution.residual and ctx.torsor.scale_is_free(solution)
    return passed, {'constraints': report, 'solution': solution.to_dict()}


@check("torsor.calibrate-diagonal", "with t = s: h^4 = id, f h^-1 = (s, 0) and tau = h^2 on D1")
def _calibrate_diagonal(ctx: SuiteContext) -> CheckResult:
    solution = ctx.calibration("diagonal")
    report = ctx.torsor.constraint_report(solution.table)
    return all(report.values()), {'constraints': report, 'solution': solution.to_dict()}


@check("torsor.r-diagonal", "f^4 acts on D1 as multiplication by r = s^4")
def _r_diagonal(ctx: SuiteContext) -> CheckResult:
    r_value = ctx.memo('r_diagonal', ctx.torsor.derive_r_diagonal)
    witness = {'r': to_text(r_value), 'is_root_of_unity': torsion_unit_test(r_value)}
    passed = r_value == S ** 4 and not witness['is_root_of_unity']
    if ctx.specialized:
        value = specialize(r_value, ctx.run_config.s0, ctx.run_config.s0)
        witness['r_at_s'] = str(value)
        passed = passed and value == ctx.run_config.s0 ** 4
    return passed, witness


@check("torsor.restrictions", "on E2, psi is x -> 1 - x and f^4 is x -> r x")
def _restrictions(ctx: SuiteContext) -> CheckResult:
    psi = psi_restriction()
    f4 = f4_restriction()
    results = {
        'psi_is_one_minus_x': psi.same_map(MobiusMap(-ONE, ONE, rf(0), ONE)),
        'psi_involution': psi.compose(psi).is_identity(),
        'psi_fixes_infinity': psi(INFINITY) is INFINITY,
        'f4_is_scaling': f4.same_map(MobiusMap.scaling(R)),
        'f4_of_s': f4(S) == R * S,
    }
    return all(results.values()), {**results, 'restrictions': restriction_witness()}


@check("torsor.psi-n", "psi_n = f^-4n psi f^4n acts on E2 as x -> r^-n - x", symbolic_only=True)
def _psi_n(ctx: SuiteContext) -> CheckResult:
    N = ctx.run_config.psi_range
    mismatches = [n for n in range(-N, N + 1) if not psi_n(n).same_map(expected_psi_n(n))]
    involutive = all(psi_n(n).compose(psi_n(n)).is_identity() for n in range(-N, N + 1))
    return not mismatches and involutive, {
        'range': N, 'mismatches': mismatches, 'involutive': involutive, 'psi_1': psi_n(1).to_dict()
    }


@check("torsor.psi-translations", "psi_m psi_n is translation by r^-m - r^-n", symbolic_only=True)
def _psi_translations(ctx: SuiteContext) -> CheckResult:
    N = min(ctx.run_config.psi_range, 3)
    failures = []
    for m in range(-N, N + 1):
        for n in range(-N, N + 1):
            amount = psi_n(m).compose(psi_n(n)).translation_amount()
            if amount is None or amount != R ** (-m) - R ** (-n):
                failures.append([m, n])
    return not failures, {'range': N, 'failures': failures}


@check("torsor.pairwise-distinct", "the involutions psi_n are pairwise distinct", symbolic_only=True)
def _pairwise_distinct(ctx: SuiteContext) -> CheckResult:
    N = ctx.run_config.pairwise_n
    generic = pairwise_distinct(N)
    at_one = pairwise_distinct(N, r_value=1)
    at_minus_one = pairwise_distinct(N, r_value=-1)
    return generic and not at_one and not at_minus_one, {
        'N': N, 'generic': generic, 'r=1': at_one, 'r=-1': at_minus_one
    }


@check("torsor.centralizer-scalar", "f^4n h f^-4m acts on C23 by r^(n-m), never a root of unity for n != m",
       symbolic_only=True)
def _centralizer_scalar(ctx: SuiteContext) -> CheckResult:
    pairs = ((1, 1), (2, 0), (5, 1), (-2, 3))
    scalars = {f"{n},{m}": centralizer_scalar(n, m) for n, m in pairs}
    results = {
        key: value == R ** (n - m) and torsion_unit_test(value) == (n == m)
        for (n, m), (key, value) in zip(pairs, scalars.items())
    }
    return all(results.values()), {key: to_text(v) for key, v in scalars.items()}


@check("torsor.sigma-shift", "sigma rotates D1 by two steps and h sigma fixes F3")
def _sigma_shift(ctx: SuiteContext) -> CheckResult:
    sigma = ctx.automorphism("sigma")
    cycle = ctx.fibration("D1").cycle(0)
    table = ctx.torsor.marked_point_table("general")
    h = ctx.torsor.translation_of_section(table, H_SECTION)
    shift = ctx.torsor.cycle_shift(sigma, cycle)
    passed = shift is not None and (shift + h.shift) % len(cycle) == 0
    return passed, {'sigma_shift': shift, 'h_shift': h.shift}


@check("torsor.f-epsilon-commute", "epsilon^-1 f^-1 epsilon f fixes C12")
def _f_epsilon(ctx: SuiteContext) -> CheckResult:
    trail = ctx.torsor.f_epsilon_chase(ctx.calibration("general"), ctx.automorphism("epsilon"))
    expected = [CurveId.C12, CurveId.C21, CurveId.C03, CurveId.C30, CurveId.C12]
    return trail == expected, {'trail': [c.label if c else None for c in trail]}


@check("torsor.psi-epsilon-commute", "epsilon^-1 psi^-1 epsilon psi fixes C23")
def _psi_epsilon(ctx: SuiteContext) -> CheckResult:
    psi = ctx.kummer.psi_partial_action()
    epsilon = ctx.automorphism("epsilon")
    trail = ctx.torsor.psi_epsilon_chase(psi, epsilon)
    return trail[-1] is trail[0], {
        'trail': _labels(trail), 'character': psi.character ** 2 * epsilon.character ** 2
    }


# -- omega -------------------------------------------------------------------

@check("omega.rank", "{r^-n - r^-m : |n|, |m| <= N} spans a space of dimension 2N", symbolic_only=True)
def _omega_rank(ctx: SuiteContext) -> CheckResult:
    ranks = {str(N): omega_rank(N) for N in range(ctx.run_config.omega_n + 1)}
    return all(rank == 2 * int(N) for N, rank in ranks.items()), {'ranks': ranks}


# -- mukai -------------------------------------------------------------------

@check("mukai.sixteen-points", "p_ij = E2-tau_i x E2-tau_j on the Segre quadric w1 w4 = w2 w3")
def _sixteen_points(ctx: SuiteContext) -> CheckResult:
    frame = ctx.frame()
    segre_form = QuadricForm.segre()
    on_quadric = all(not segre_form.evaluate(point.coords) for _, point in frame.points)
    s, t = frame.s, frame.t
    results = {
        'on_quadric': on_quadric,
        'p00': frame.point(0, 0).same_point(ProjPoint3((0, 0, 0, 1))),
        'p33': frame.point(3, 3).same_point(ProjPoint3((1, 0, 0, 0))),
        'p22': frame.point(2, 2).same_point(ProjPoint3((s * t, s, t, ONE))),
        'p1j': frame.point(1, 2).same_point(segre(ONE, t)),
    }
    return all(results.values()), results


@check("mukai.non-coplanar", "p00, p11, p22, p33 span P^3 exactly when s != t")
def _non_coplanar(ctx: SuiteContext) -> CheckResult:
    frame = ctx.frame()
    witness = {'determinant': to_text(frame.determinant)}
    passed = not frame.determinant.is_zero()
    if not ctx.specialized:
        diagonal = substitute(frame.determinant, t=S)
        witness['at_t_equals_s'] = to_text(diagonal)
        passed = passed and diagonal.is_zero()
    return passed, witness


@check("mukai.frame-standard", "M sends p00, p11, p22, p33 to the coordinate points")
def _frame_standard(ctx: SuiteContext) -> CheckResult:
    return ctx.mukai.frame_is_standard(ctx.frame()), ctx.frame().to_dict()


@check("mukai.template-identity",
       "Q: a1 w2 w3 + a2 w1 w3 + a3 w1 w2 + (w1 + w2 + w3) w4 = 0")
def _template_identity(ctx: SuiteContext) -> CheckResult:
    alpha = ctx.alphas()
    frame = ctx.frame()
    witness = {'alphas': alpha.to_dict(), 'equation': ctx.mukai.transformed_quadric(frame).to_dict()}
    return ctx.mukai.template_identity(frame, alpha), witness


@check("mukai.smoothness", "the template quadric is smooth")
def _smoothness(ctx: SuiteContext) -> CheckResult:
    disc = smoothness_disc(ctx.alphas())
    controls = {
        '1,1,1': smoothness_disc(AlphaTriple.of(1, 1, 1)) == -3,
        '1,1,4': smoothness_disc(AlphaTriple.of(1, 1, 4)).is_zero(),
    }
    return not disc.is_zero() and all(controls.values()), {'discriminant': to_text(disc), 'controls': controls}


@check("mukai.preserves-quadric", "the Cremona map preserves the template quadric")
def _preserves_quadric(ctx: SuiteContext) -> CheckResult:
    alpha = ctx.alphas()
    cofactor = ctx.mukai.preservation_cofactor(alpha)
    perturbed = QuadricForm.template(alpha) + QuadricForm.from_monomials({(1, 1): 1})
    perturbed_preserved = ctx.mukai.verify_cremona_preserves_quadric(alpha, perturbed)
    return cofactor is not None and not perturbed_preserved, {
        'cofactor': str(cofactor) if cofactor is not None else None,
        'perturbed_preserved': perturbed_preserved
    }


@check("mukai.cremona-involution", "the Cremona map is an involution, undefined at the coordinate points")
def _cremona_involution(ctx: SuiteContext) -> CheckResult:
    alpha = ctx.alphas()
    involution = ctx.mukai.verify_cremona_involution(alpha)
    try:
        cremona(alpha, ProjPoint3((0, 0, 0, 1)))
        raises = False
    except IndeterminacyError:
        raises = True
    return involution and raises, {'involution': involution, 'indeterminate_at_e4': raises}


@check("mukai.pij-swap", "the Cremona map sends p_ij to p_ji")
def _pij_swap(ctx: SuiteContext) -> CheckResult:
    results = ctx.mukai.pij_swap_results(ctx.frame(), ctx.alphas())
    return all(results.values()), results


@check("mukai.indeterminacy", "the Cremona map is undefined at p00, p11, p22, p33")
def _indeterminacy(ctx: SuiteContext) -> CheckResult:
    results = ctx.mukai.diagonal_indeterminacy(ctx.frame())
    return all(results.values()), results


@check("mukai.conic-contraction", "the conic Q n {w_k = 0} is contracted to the k-th coordinate point")
def _conic_contraction(ctx: SuiteContext) -> CheckResult:
    results = ctx.mukai.verify_conic_contraction(ctx.alphas())
    return all(results.values()), results


@check("mukai.line-swap", "the Cremona map exchanges the two lines of Q through each p_ii")
def _line_swap(ctx: SuiteContext) -> CheckResult:
    results = ctx.mukai.verify_line_swap(ctx.frame())
    return all(results.values()), results


@check("mukai.epsilon-consistency", "the Cremona map induces epsilon on the curves C_ij")
def _epsilon_consistency(ctx: SuiteContext) -> CheckResult:
    epsilon = ctx.automorphism("epsilon")
    pairs = ctx.mukai.pij_swap_pairs(ctx.frame())
    agree = {
        f"p{i}{j}": epsilon(CurveId.C(i, j)) is CurveId.C(k, l)
        for (i, j), (k, l) in pairs
    }
    return len(pairs) == 12 and all(agree.values()), agree


# -- cohomology --------------------------------------------------------------

@check("cohomology.h1-examples", "H^1(Z/2, G) is finite; Z/2 and Z/4 with inversion give two classes")
def _h1_examples(ctx: SuiteContext) -> CheckResult:
    corpus = permutation_corpus()
    counts = {
        'Z2': h1(FiniteInvolutiveGroup.from_permutation_group(corpus["Z2"], name="Z2")).count,
        'Z4/inversion': h1(cyclic_inversion(4)).count,
        'S3': h1(FiniteInvolutiveGroup.from_permutation_group(corpus["S3"], name="S3")).count,
        'D4': h1_trivial_action(FiniteInvolutiveGroup.from_permutation_group(corpus["D4"], name="D4")),
    }
    expected = {'Z2': 2, 'Z4/inversion': 2, 'S3': 2, 'D4': 4}
    return counts == expected, {'counts': counts}


@check("cohomology.trivial-action-agreement",
       "with trivial action H^1 counts conjugacy classes of elements of order dividing 2")
def _trivial_agreement(ctx: SuiteContext) -> CheckResult:
    tables = ctx.galois.trivial_action_agreement()
    sympy_counts = ctx.galois.sympy_agreement()
    passed = all(a == b for a, b in tables.values()) and all(a == b for a, b in sympy_counts.values())
    return passed, {
        'tables': {k: list(v) for k, v in tables.items()},
        'sympy': {k: list(v) for k, v in sympy_counts.items()}
    }


@check("cohomology.abelian-quotient", "for abelian G, H^1 = ker(1 + theta) / im(theta - 1)")
def _abelian_quotient(ctx: SuiteContext) -> CheckResult:
    counts = ctx.galois.abelian_agreement()
    extra = {f"Z{n}/inversion": (h1(cyclic_inversion(n)).count, abelian_quotient_count(cyclic_inversion(n)))
             for n in (3, 5, 8)}
    counts.update(extra)
    return all(a == b for a, b in counts.values()), {k: list(v) for k, v in counts.items()}


@check("cohomology.torus-cases", "H^1 of Z/2 on R^n/Z^n: Z/2 for the trivial circle, 0 for the other two")
def _torus_cases(ctx: SuiteContext) -> CheckResult:
    results = ctx.galois.torus_cases(ctx.run_config.torus_level)
    expected = {name: value for name, _, value in TORUS_CASES}
    passed = all(r.value == expected[r.spec_name] and r.stabilized for r in results)
    try:
        TorusActionSpec.of(((0, 1), (1, 1)), "not-involutive")
        rejected = False
    except NonInvolutiveMatrixError:
        rejected = True
    return passed and rejected, {
        'cases': [r.to_dict() for r in results], 'non_involutive_rejected': rejected
    }


# -- runner ------------------------------------------------------------------

def _normalize(witness: Witness) -> Witness:
    return json.loads(json.dumps(witness, sort_keys=True, default=str))


def run_check(spec: CheckSpec, ctx: SuiteContext) -> CheckRecord:
    """Run one check; any exception becomes a failure carrying the error"""
    if spec.symbolic_only and ctx.specialized:
        return CheckRecord(spec.id, spec.anchor, "skipped", {'reason': "symbolic-only"})
    try:
        with performance_timer(f"check.{spec.id}"):
            passed, witness = spec.run(ctx)
    except Exception as e:
        error = ErrorHandler.handle_check_error(e, spec.id)
        logger.warning("Check raised", check=spec.id, error=error.error_code, message=error.message)
        return CheckRecord(spec.id, spec.anchor, "fail", _normalize({'error': ErrorHandler.describe(error)}))
    status = "pass" if passed else "fail"
    if not passed:
        logger.info("Check failed", check=spec.id)
    return CheckRecord(spec.id, spec.anchor, status, _normalize(witness))


def run_suite(run_config: RunConfig, context: Optional[SuiteContext] = None) -> Report:
    """Run the selected suites and collect a report sorted by check id"""
    ctx = context or SuiteContext(run_config)
    specs = checks_for(run_config.suites)
    logger.info(
        "Running verification",
        mode=run_config.mode,
        suites=list(run_config.suites),
        checks=len(specs),
        workers=run_config.workers
    )
    if run_config.workers == 1:
        records = [run_check(spec, ctx) for spec in specs]
    else:
        with ThreadPoolExecutor(max_workers=run_config.workers) as pool:
            records = list(pool.map(lambda spec: run_check(spec, ctx), specs))
    report = Report(config=run_config.to_dict(), checks=tuple(records))
    logger.info("Verification finished", **report.summary)
    metrics_collector.log_summary()
    logger.debug("Construction cache", **get_cache_stats()["construction_cache"])
    return report
